//! Delete-and-modify construction covering C(m,k-2) <= n <= (k-1)C(m,k-1)
//! at t = 1, reaching total storage (k-1)n - floor(d / (m-k+1)) where
//! d = (k-1)C(m,k-1) - n.
//!
//! Starting from the full grouped matrix, each full step deletes m-k+1
//! weight-(k-1) columns and thins one column down to weight k-2. The
//! deletion schedule keeps, for every (k-1)-row set U, at most k-1 alive
//! columns supported inside U; that is exactly the t = 1 deficiency
//! condition for row sets of this size, and smaller row sets stay safe
//! because distinct supports remain distinct. A verification pass after
//! every step is the final authority; if the scheduled choice ever fails
//! it, a combination search over deletion sets takes over and the step is
//! flagged in the trace.

use crate::error::{Error, Result};
use crate::matrix::{binomial, grouped_matrix, k_subsets_lex, support_elems, IncidenceMatrix};
use crate::verifier::is_cbc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    /// Original column ids (0-based, ascending) removed in this step.
    pub deleted: Vec<usize>,
    /// (original column id, new support rows) when the step thins a column.
    pub modified: Option<(usize, Vec<usize>)>,
    pub n_after: usize,
    pub storage_after: u64,
    /// True when the scheduled first choice failed verification and a
    /// search found the step instead.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub m: usize,
    pub k: usize,
    pub steps: Vec<TraceStep>,
}

struct State {
    m: usize,
    k: usize,
    group_size: usize,
    cols: Vec<u64>,
    alive: Vec<bool>,
    modified: Vec<bool>,
}

impl State {
    fn group(&self, j: usize) -> usize {
        j / self.group_size
    }

    fn alive_matrix(&self) -> Result<IncidenceMatrix> {
        let cols: Vec<u64> = (0..self.cols.len())
            .filter(|&j| self.alive[j])
            .map(|j| self.cols[j])
            .collect();
        IncidenceMatrix::new(self.m, cols)
    }

    fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    /// Alive unmodified columns with support exactly `u`, skipping `skip`.
    fn copies_of(&self, u: u64, skip: usize) -> Vec<usize> {
        (0..self.cols.len())
            .filter(|&j| j != skip && self.alive[j] && !self.modified[j] && self.cols[j] == u)
            .collect()
    }

    /// Candidates for modification under target `t`: alive, unmodified,
    /// support containing all of t.
    fn candidates(&self, t: u64) -> Vec<usize> {
        (0..self.cols.len())
            .filter(|&j| self.alive[j] && !self.modified[j] && self.cols[j] & t == t)
            .collect()
    }
}

/// Targets for the thinned columns: first every (k-2)-row set avoiding the
/// first row, largest first; then every (k-2)-row set through the first
/// row, smallest first.
fn target_schedule(m: usize, k: usize) -> Vec<u64> {
    let all = k_subsets_lex(m, k - 2);
    let mut phase1: Vec<u64> = all.iter().copied().filter(|&s| s & 1 == 0).collect();
    phase1.reverse();
    let phase2: Vec<u64> = all.into_iter().filter(|&s| s & 1 == 1).collect();
    phase1.into_iter().chain(phase2).collect()
}

/// Preferred column to thin for target `t`: before the first row joins the
/// targets, the latest copy whose support touches the first row; after
/// that, the latest copy in the earliest group.
fn pick_candidate(st: &State, t: u64, cands: &[usize]) -> usize {
    let mut best = cands.to_vec();
    if t & 1 == 0 {
        best.sort_by_key(|&j| (st.cols[j] & 1 == 0, usize::MAX - j));
    } else {
        best.sort_by_key(|&j| (st.group(j), usize::MAX - j));
    }
    best[0]
}

/// Deletions forced by the thinning of `cand` to `t`: for every
/// (k-1)-row set U extending t, leave at most k-1 alive columns inside U.
fn forced_deletions(st: &State, t: u64, cand: usize) -> Result<Vec<usize>> {
    let k = st.k;
    let cand_group = st.group(cand);
    let mut out: Vec<usize> = Vec::new();
    for x in 0..st.m {
        if t >> x & 1 == 1 {
            continue;
        }
        let u = t | 1 << x;
        let copies = st.copies_of(u, cand);
        let mods_inside = (0..st.cols.len())
            .filter(|&j| st.alive[j] && st.modified[j] && st.cols[j] & !u == 0)
            .count();
        // +1 for the newly thinned column, whose support t sits inside U
        let inside = copies.len() + mods_inside + 1;
        let req = inside.saturating_sub(k - 1);
        if req > copies.len() {
            return Err(Error::SelfVerify(format!(
                "over-full row set needs {req} deletions but only {} copies remain",
                copies.len()
            )));
        }
        let mut ordered = copies;
        ordered.sort_by_key(|&j| (st.group(j) != cand_group, usize::MAX - j));
        for &j in ordered.iter().take(req) {
            if !out.contains(&j) {
                out.push(j);
            }
        }
    }
    Ok(out)
}

/// Full scheduled deletion list for a step: forced deletions, then same-
/// group candidate copies, then cross-group candidates, newest first.
fn scheduled_deletions(st: &State, t: u64, cand: usize, need: usize) -> Result<Vec<usize>> {
    let mut list = forced_deletions(st, t, cand)?;
    if list.len() < need {
        let cand_group = st.group(cand);
        let mut fill: Vec<usize> = st
            .candidates(t)
            .into_iter()
            .filter(|&j| j != cand && !list.contains(&j))
            .collect();
        fill.sort_by_key(|&j| {
            if st.group(j) == cand_group {
                (0, j)
            } else {
                (1, usize::MAX - j)
            }
        });
        for j in fill {
            if list.len() == need {
                break;
            }
            list.push(j);
        }
    }
    if list.len() < need {
        // last resort: any alive unmodified column
        for j in (0..st.cols.len()).rev() {
            if list.len() == need {
                break;
            }
            if st.alive[j] && !st.modified[j] && j != cand && !list.contains(&j) {
                list.push(j);
            }
        }
    }
    list.truncate(need);
    Ok(list)
}

/// Does thinning `cand` to `t` and deleting `dels` leave a valid code?
fn step_is_valid(st: &State, t: u64, cand: usize, dels: &[usize]) -> Result<bool> {
    let mut cols = Vec::with_capacity(st.alive_count() - dels.len());
    for j in 0..st.cols.len() {
        if !st.alive[j] || dels.contains(&j) {
            continue;
        }
        cols.push(if j == cand { t } else { st.cols[j] });
    }
    let mat = IncidenceMatrix::new(st.m, cols)?;
    Ok(is_cbc(&mat, st.k, 1)?.is_valid())
}

const FALLBACK_ATTEMPT_CAP: usize = 200_000;

/// Exhaustive fallback: try every modification candidate and every
/// deletion combination (forced-first order) until one verifies.
fn fallback_step(st: &State, t: u64, need: usize) -> Result<(usize, Vec<usize>)> {
    let mut attempts = 0usize;
    let mut cands = st.candidates(t);
    let schedule_first = pick_candidate(st, t, &cands);
    cands.sort_by_key(|&j| (j != schedule_first, j));
    for &cand in &cands {
        let mut pool: Vec<usize> = forced_deletions(st, t, cand).unwrap_or_default();
        for j in 0..st.cols.len() {
            if st.alive[j] && !st.modified[j] && j != cand && !pool.contains(&j) {
                pool.push(j);
            }
        }
        if pool.len() < need {
            continue;
        }
        let mut idx: Vec<usize> = (0..need).collect();
        loop {
            attempts += 1;
            if attempts > FALLBACK_ATTEMPT_CAP {
                return Err(Error::SelfVerify(
                    "deletion-step search exceeded its attempt cap".into(),
                ));
            }
            let dels: Vec<usize> = idx.iter().map(|&i| pool[i]).collect();
            if step_is_valid(st, t, cand, &dels)? {
                return Ok((cand, dels));
            }
            // next combination of pool positions in lex order
            let mut i = need;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if idx[i] != i + pool.len() - need {
                    idx[i] += 1;
                    for j in i + 1..need {
                        idx[j] = idx[j - 1] + 1;
                    }
                    i = usize::MAX;
                    break;
                }
            }
            if i != usize::MAX {
                break;
            }
        }
    }
    Err(Error::SelfVerify(
        "no valid delete-and-modify step exists for this target".into(),
    ))
}

/// Builds an optimal-storage code for any n in [C(m,k-2), (k-1)C(m,k-1)]
/// at t = 1, returning the matrix and the step-by-step trace.
pub fn construct_range(n: usize, k: usize, m: usize) -> Result<(IncidenceMatrix, ConstructionTrace)> {
    if k < 3 || k > m {
        return Err(Error::BadParams(format!("need 3 <= k <= m; got k={k}, m={m}")));
    }
    let n0 = ((k as u64 - 1) * binomial(m, k - 1)) as usize;
    let lo = binomial(m, k - 2) as usize;
    if n < lo || n > n0 {
        return Err(Error::Infeasible(format!(
            "need C(m,k-2) = {lo} <= n <= (k-1)C(m,k-1) = {n0}; got n={n}"
        )));
    }

    let base = grouped_matrix(m, k)?.flatten();
    let mut st = State {
        m,
        k,
        group_size: binomial(m, k - 1) as usize,
        cols: base.columns().to_vec(),
        alive: vec![true; n0],
        modified: vec![false; n0],
    };
    let targets = target_schedule(m, k);
    let batch = m - k + 1;
    let mut trace = ConstructionTrace { m, k, steps: Vec::new() };
    let mut current = n0;
    let mut thinned = 0u64;
    let mut target_iter = targets.into_iter();

    while current - n >= batch {
        let t = target_iter.next().ok_or_else(|| {
            Error::SelfVerify("target schedule exhausted before reaching n".into())
        })?;
        let cands = st.candidates(t);
        if cands.is_empty() {
            return Err(Error::SelfVerify("no column left to thin for target".into()));
        }
        let cand = pick_candidate(&st, t, &cands);
        let dels = scheduled_deletions(&st, t, cand, batch)?;
        let (cand, dels, fallback) =
            if dels.len() == batch && step_is_valid(&st, t, cand, &dels)? {
                (cand, dels, false)
            } else {
                let (c, d) = fallback_step(&st, t, batch)?;
                (c, d, true)
            };
        for &j in &dels {
            st.alive[j] = false;
        }
        st.cols[cand] = t;
        st.modified[cand] = true;
        current -= batch;
        thinned += 1;
        let mut deleted = dels;
        deleted.sort_unstable();
        trace.steps.push(TraceStep {
            step: trace.steps.len() + 1,
            deleted,
            modified: Some((cand, support_elems(t))),
            n_after: current,
            storage_after: (k as u64 - 1) * current as u64 - thinned,
            fallback,
        });
    }

    let rest = current - n;
    if rest > 0 {
        // partial batch: delete without thinning, taking the tail of the
        // next scheduled step's deletion list
        let dels: Vec<usize> = if let Some(t) = target_iter.next() {
            let cands = st.candidates(t);
            let cand = pick_candidate(&st, t, &cands);
            let full = scheduled_deletions(&st, t, cand, batch)?;
            full[full.len() - rest..].to_vec()
        } else {
            (0..st.cols.len())
                .rev()
                .filter(|&j| st.alive[j] && !st.modified[j])
                .take(rest)
                .collect()
        };
        if dels.len() != rest {
            return Err(Error::SelfVerify("partial batch could not be filled".into()));
        }
        for &j in &dels {
            st.alive[j] = false;
        }
        current -= rest;
        let mut deleted = dels;
        deleted.sort_unstable();
        trace.steps.push(TraceStep {
            step: trace.steps.len() + 1,
            deleted,
            modified: None,
            n_after: current,
            storage_after: (k as u64 - 1) * current as u64 - thinned,
            fallback: false,
        });
    }

    let mat = st.alive_matrix()?;
    let d = (n0 - n) as u64;
    let expect = (k as u64 - 1) * n as u64 - d / batch as u64;
    if mat.n() != n || mat.total_storage() != expect {
        return Err(Error::SelfVerify(format!(
            "final matrix has n={}, storage={}, expected n={n}, storage={expect}",
            mat.n(),
            mat.total_storage()
        )));
    }
    if !is_cbc(&mat, k, 1)?.is_valid() {
        return Err(Error::SelfVerify("final matrix failed verification".into()));
    }
    Ok((mat, trace))
}
