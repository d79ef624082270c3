//! Incidence matrices, set systems, and the grouped matrix.
//!
//! Rows are servers, columns are items. Internally everything is
//! 0-indexed; 1-indexing only appears at the CLI / report layer.
//! Column supports are stored as `u64` bitmasks, which caps the row
//! count at 64 (far beyond desk scale).

use crate::error::{Error, Result};

/// Binomial coefficient, saturating is not needed at desk scale.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// All k-subsets of {0..m-1} as bitmasks, in lexicographic order of the
/// sorted element tuples: {0,1,2} < {0,1,3} < ... < {m-3,m-2,m-1}.
pub fn k_subsets_lex(m: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(binomial(m, k) as usize);
    let mut cur = Vec::with_capacity(k);
    fn rec(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<u64>) {
        if cur.len() == k {
            out.push(cur.iter().fold(0u64, |acc, &i| acc | (1 << i)));
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(m, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(m, k, 0, &mut cur, &mut out);
    out
}

/// Elements of a bitmask support, ascending.
pub fn support_elems(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// (n, N, k, m, t) parameter tuple. N is derived from a matrix, not stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub t: usize,
}

impl CodeParams {
    pub fn new(n: usize, k: usize, m: usize, t: usize) -> Result<Self> {
        if k == 0 || n < k || m == 0 || t == 0 {
            return Err(Error::BadParams(format!(
                "need n >= k >= 1, m >= 1, t >= 1; got n={n}, k={k}, m={m}, t={t}"
            )));
        }
        Ok(CodeParams { n, k, m, t })
    }
}

/// An m x n 0-1 incidence matrix. Every column is nonempty.
///
/// Columns are a multiset with stable ordering; equality is literal
/// entry equality. Use [`IncidenceMatrix::canonical_equivalent`] for
/// equivalence up to row/column permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    m: usize,
    cols: Vec<u64>,
}

impl IncidenceMatrix {
    pub fn new(m: usize, cols: Vec<u64>) -> Result<Self> {
        if m == 0 || m > 64 {
            return Err(if m > 64 {
                Error::TooManyRows(m)
            } else {
                Error::BadParams("m must be positive".into())
            });
        }
        let row_mask = if m == 64 { !0u64 } else { (1u64 << m) - 1 };
        for (j, &c) in cols.iter().enumerate() {
            if c == 0 {
                return Err(Error::UnstorableItem(j));
            }
            if c & !row_mask != 0 {
                return Err(Error::ServerOutOfRange {
                    index: (63 - c.leading_zeros()) as usize,
                    m,
                });
            }
        }
        Ok(IncidenceMatrix { m, cols })
    }

    /// Builds the matrix from per-item server sets (0-indexed).
    /// Column j has ones exactly in the rows of `blocks[j]`.
    pub fn from_blocks(blocks: &[Vec<usize>], m: usize) -> Result<Self> {
        let mut cols = Vec::with_capacity(blocks.len());
        for (j, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::UnstorableItem(j));
            }
            let mut mask = 0u64;
            for &s in b {
                if s >= m {
                    return Err(Error::ServerOutOfRange { index: s, m });
                }
                mask |= 1 << s;
            }
            cols.push(mask);
        }
        Self::new(m, cols)
    }

    pub fn identity(n: usize) -> Self {
        IncidenceMatrix {
            m: n,
            cols: (0..n).map(|i| 1u64 << i).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> u64 {
        self.cols[j]
    }

    pub fn columns(&self) -> &[u64] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cols[j] >> i & 1 == 1
    }

    /// N = total number of ones.
    pub fn total_storage(&self) -> u64 {
        self.cols.iter().map(|c| c.count_ones() as u64).sum()
    }

    /// Union of the supports of the selected columns, as a row bitmask.
    pub fn span_mask(&self, items: &[usize]) -> Result<u64> {
        if items.is_empty() {
            return Err(Error::BadParams("span of an empty item set".into()));
        }
        let mut mask = 0u64;
        for &j in items {
            if j >= self.n() {
                return Err(Error::ItemOutOfRange { index: j, n: self.n() });
            }
            mask |= self.cols[j];
        }
        Ok(mask)
    }

    /// Servers spanned by the selected items, ascending.
    pub fn span(&self, items: &[usize]) -> Result<Vec<usize>> {
        Ok(support_elems(self.span_mask(items)?))
    }

    pub fn to_set_system(&self) -> SetSystem {
        SetSystem {
            ground_size: self.m,
            blocks: self.cols.iter().map(|&c| support_elems(c)).collect(),
        }
    }

    /// Canonical form: the lexicographically least sorted column list over
    /// all row permutations. Test helper; factorial in m.
    pub fn canonical_form(&self) -> Vec<u64> {
        assert!(self.m <= 8, "canonical_form is for desk-scale tests");
        let mut best: Option<Vec<u64>> = None;
        let mut perm: Vec<usize> = (0..self.m).collect();
        permute(&mut perm, 0, &mut |p| {
            let mut cols: Vec<u64> = self
                .cols
                .iter()
                .map(|&c| {
                    let mut out = 0u64;
                    for (new, &old) in p.iter().enumerate() {
                        if c >> old & 1 == 1 {
                            out |= 1 << new;
                        }
                    }
                    out
                })
                .collect();
            cols.sort_unstable();
            if best.as_ref().map_or(true, |b| cols < *b) {
                best = Some(cols);
            }
        });
        best.unwrap()
    }

    pub fn canonical_equivalent(&self, other: &IncidenceMatrix) -> bool {
        self.m == other.m
            && self.n() == other.n()
            && self.canonical_form() == other.canonical_form()
    }
}

fn permute(v: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == v.len() {
        f(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permute(v, i + 1, f);
        v.swap(i, j);
    }
}

/// A set system (X, B): blocks are ordered subsets of {0..ground_size-1},
/// duplicates allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    pub ground_size: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl SetSystem {
    pub fn new(ground_size: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        for b in &blocks {
            for &p in b {
                if p >= ground_size {
                    return Err(Error::BadParams(format!(
                        "block point {p} outside ground set of size {ground_size}"
                    )));
                }
            }
        }
        Ok(SetSystem { ground_size, blocks })
    }

    /// The dual system: points become blocks and blocks become points.
    /// Equivalent to transposing the incidence matrix; an involution.
    pub fn dualize(&self) -> SetSystem {
        let mut blocks = vec![Vec::new(); self.ground_size];
        for (i, b) in self.blocks.iter().enumerate() {
            for &p in b {
                blocks[p].push(i);
            }
        }
        SetSystem {
            ground_size: self.blocks.len(),
            blocks,
        }
    }
}

/// The saturated matrix of the middle regime: k-1 groups, each holding
/// all C(m, k-1) distinct weight-(k-1) columns in lexicographic order.
#[derive(Debug, Clone)]
pub struct GroupedMatrix {
    pub m: usize,
    pub k: usize,
    pub groups: Vec<Vec<u64>>,
}

pub fn grouped_matrix(m: usize, k: usize) -> Result<GroupedMatrix> {
    if k < 2 || k > m {
        return Err(Error::BadParams(format!(
            "grouped matrix needs 2 <= k <= m; got k={k}, m={m}"
        )));
    }
    let group = k_subsets_lex(m, k - 1);
    Ok(GroupedMatrix {
        m,
        k,
        groups: vec![group; k - 1],
    })
}

impl GroupedMatrix {
    pub fn n(&self) -> usize {
        self.groups.iter().map(|g| g.len()).sum()
    }

    pub fn flatten(&self) -> IncidenceMatrix {
        let cols: Vec<u64> = self.groups.iter().flatten().copied().collect();
        IncidenceMatrix::new(self.m, cols).expect("grouped columns are nonempty")
    }
}
