//! CBC validity: retrieval assignments, the Hall-type deficiency check,
//! and the naive enumeration oracle.

use crate::error::{Error, Result};
use crate::matrix::{support_elems, IncidenceMatrix};

/// One (item, server) read per requested item; no server used more than t times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetrievalAssignment {
    pub pairs: Vec<(usize, usize)>,
}

/// A certificate of infeasibility: |items| > t * |spanned|.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub items: Vec<usize>,
    pub spanned: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssignmentResult {
    Assigned(RetrievalAssignment),
    Infeasible(Violation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyOutcome {
    Valid,
    Invalid(Violation),
}

impl VerifyOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, VerifyOutcome::Valid)
    }
}

/// Capacitated bipartite matching: items have capacity 1, servers capacity t.
/// Servers are scanned in ascending index, so the output is deterministic.
pub fn retrieval_assignment(
    mat: &IncidenceMatrix,
    items: &[usize],
    t: usize,
) -> Result<AssignmentResult> {
    for &j in items {
        if j >= mat.n() {
            return Err(Error::ItemOutOfRange { index: j, n: mat.n() });
        }
    }
    let m = mat.m();
    // loads[s] holds positions (into `items`) currently read from server s
    let mut loads: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut assigned_to: Vec<Option<usize>> = vec![None; items.len()];

    fn augment(
        pos: usize,
        items: &[usize],
        mat: &IncidenceMatrix,
        t: usize,
        loads: &mut Vec<Vec<usize>>,
        assigned_to: &mut Vec<Option<usize>>,
        visited: &mut Vec<bool>,
    ) -> bool {
        let col = mat.column(items[pos]);
        for s in support_elems(col) {
            if visited[s] {
                continue;
            }
            visited[s] = true;
            if loads[s].len() < t {
                loads[s].push(pos);
                assigned_to[pos] = Some(s);
                return true;
            }
            for idx in 0..loads[s].len() {
                let other = loads[s][idx];
                if augment(other, items, mat, t, loads, assigned_to, visited) {
                    // `other` moved elsewhere; take its slot
                    loads[s][idx] = pos;
                    // augment() pushed `other` onto its new server already
                    assigned_to[pos] = Some(s);
                    return true;
                }
            }
        }
        false
    }

    for pos in 0..items.len() {
        let mut visited = vec![false; m];
        if !augment(pos, items, mat, t, &mut loads, &mut assigned_to, &mut visited) {
            // Hall defect: visited servers are saturated and closed under
            // alternation, so the stuck item plus their loads overfill them.
            let servers: Vec<usize> = (0..m).filter(|&s| visited[s]).collect();
            let mut defect: Vec<usize> = vec![items[pos]];
            for &s in &servers {
                for &p in &loads[s] {
                    defect.push(items[p]);
                }
            }
            defect.sort_unstable();
            defect.dedup();
            return Ok(AssignmentResult::Infeasible(Violation {
                items: defect,
                spanned: servers,
            }));
        }
    }

    let pairs: Vec<(usize, usize)> = (0..items.len())
        .map(|pos| (items[pos], assigned_to[pos].expect("assigned")))
        .collect();
    Ok(AssignmentResult::Assigned(RetrievalAssignment { pairs }))
}

/// A transversal of ones for the selected columns (t = 1): one position per
/// column, pairwise-distinct rows.
pub fn find_transversal(mat: &IncidenceMatrix, items: &[usize]) -> Option<Vec<(usize, usize)>> {
    match retrieval_assignment(mat, items, 1) {
        Ok(AssignmentResult::Assigned(a)) => {
            Some(a.pairs.into_iter().map(|(item, server)| (server, item)).collect())
        }
        _ => None,
    }
}

/// Deficiency check: valid iff for every server subset R with t|R| < k,
/// the number of items stored entirely inside R is at most t|R|.
///
/// Server subsets are enumerated by ascending size, lexicographically
/// within a size, so the reported witness is deterministic.
pub fn is_cbc(mat: &IncidenceMatrix, k: usize, t: usize) -> Result<VerifyOutcome> {
    if k == 0 || t == 0 {
        return Err(Error::BadParams("k and t must be positive".into()));
    }
    if k > mat.n() {
        return Err(Error::BadParams(format!(
            "k = {k} exceeds item count n = {}",
            mat.n()
        )));
    }
    let m = mat.m();
    // largest |R| with t|R| <= k-1
    let cap = ((k - 1) / t).min(m);
    for size in 1..=cap {
        for rows in crate::matrix::k_subsets_lex(m, size) {
            let inside: Vec<usize> = (0..mat.n())
                .filter(|&j| mat.column(j) & !rows == 0)
                .collect();
            if inside.len() > t * size {
                let take = inside.len().min(k);
                let items: Vec<usize> = inside[..take].to_vec();
                let spanned = mat.span(&items)?;
                return Ok(VerifyOutcome::Invalid(Violation { items, spanned }));
            }
        }
    }
    Ok(VerifyOutcome::Valid)
}

pub const DEFAULT_NAIVE_BUDGET: u64 = 5_000_000;

/// Reference oracle: enumerate every k-subset and try to assign it.
pub fn naive_is_cbc(mat: &IncidenceMatrix, k: usize, t: usize, budget: u64) -> Result<bool> {
    if k > mat.n() {
        return Err(Error::BadParams(format!(
            "k = {k} exceeds item count n = {}",
            mat.n()
        )));
    }
    let total = crate::matrix::binomial(mat.n(), k);
    if total > budget {
        return Err(Error::NaiveBudget { subsets: total, budget });
    }
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        match retrieval_assignment(mat, &subset, t)? {
            AssignmentResult::Assigned(_) => {}
            AssignmentResult::Infeasible(_) => return Ok(false),
        }
        // next k-subset in lex order
        let n = mat.n();
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(true);
            }
            i -= 1;
            if subset[i] != i + n - k {
                break;
            }
        }
        if subset[i] == i + n - k {
            return Ok(true);
        }
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
}
