//! Exhaustive and branch-and-bound oracles. These certify the closed-form
//! results at desk scale and reconstruct the figure-dependent graphs.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::{binomial, k_subsets_lex, support_elems, IncidenceMatrix};
use crate::verifier::is_cbc;
use std::time::Instant;

#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_seconds: f64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 50_000_000, max_seconds: 300.0 }
    }
}

struct Meter {
    nodes: u64,
    max_nodes: u64,
    start: Instant,
    max_seconds: f64,
    exhausted: bool,
}

impl Meter {
    fn new(b: SearchBudget) -> Self {
        Meter {
            nodes: 0,
            max_nodes: b.max_nodes,
            start: Instant::now(),
            max_seconds: b.max_seconds,
            exhausted: false,
        }
    }

    /// Counts a node; returns false once the budget is gone.
    fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes
            || (self.nodes % 4096 == 0
                && self.start.elapsed().as_secs_f64() > self.max_seconds)
        {
            self.exhausted = true;
        }
        !self.exhausted
    }
}

// ---------------------------------------------------------------------------
// Minimum storage

#[derive(Debug, Clone)]
pub enum MinStorageResult {
    Exact { n_min: u64, witness: IncidenceMatrix },
    Exhausted { best: Option<(u64, IncidenceMatrix)> },
}

/// Exact minimum N over all m x n matrices (as column multisets) that are
/// valid (k, t) CBCs. Columns are enumerated in non-decreasing canonical
/// order (weight, then colex) to kill permutation symmetry.
pub fn min_storage_search(
    n: usize,
    k: usize,
    m: usize,
    t: usize,
    budget: SearchBudget,
) -> Result<MinStorageResult> {
    if k == 0 || n < k || m == 0 || m > 16 || t == 0 {
        return Err(Error::BadParams(format!(
            "need n >= k >= 1, 1 <= m <= 16, t >= 1; got n={n}, k={k}, m={m}, t={t}"
        )));
    }
    let mut candidates: Vec<u64> = (1..(1u64 << m)).collect();
    candidates.sort_by_key(|c| (c.count_ones(), *c));
    let weights: Vec<u64> = candidates.iter().map(|c| c.count_ones() as u64).collect();

    let mut meter = Meter::new(budget);
    let mut best: Option<(u64, Vec<u64>)> = None;
    let mut cols: Vec<u64> = Vec::with_capacity(n);

    fn dfs(
        start: usize,
        weight: u64,
        n: usize,
        k: usize,
        m: usize,
        t: usize,
        candidates: &[u64],
        weights: &[u64],
        cols: &mut Vec<u64>,
        best: &mut Option<(u64, Vec<u64>)>,
        meter: &mut Meter,
    ) {
        if !meter.tick() {
            return;
        }
        if cols.len() == n {
            let mat = IncidenceMatrix::new(m, cols.clone()).expect("nonempty candidates");
            if is_cbc(&mat, k, t).expect("k <= n").is_valid()
                && best.as_ref().map_or(true, |(b, _)| weight < *b)
            {
                *best = Some((weight, cols.clone()));
            }
            return;
        }
        let remaining = (n - cols.len()) as u64;
        for idx in start..candidates.len() {
            // columns are non-decreasing, so every future column weighs
            // at least weights[idx]
            let lower = weight + remaining * weights[idx];
            if best.as_ref().map_or(false, |(b, _)| lower >= *b) {
                break;
            }
            cols.push(candidates[idx]);
            // a violation among already-chosen columns cannot be repaired
            let viable = if cols.len() >= k {
                let mat = IncidenceMatrix::new(m, cols.clone()).expect("nonempty");
                is_cbc(&mat, k, t).expect("k <= len").is_valid()
            } else {
                true
            };
            if viable {
                dfs(idx, weight + weights[idx], n, k, m, t, candidates, weights, cols, best, meter);
            }
            cols.pop();
            if meter.exhausted {
                return;
            }
        }
    }

    dfs(0, 0, n, k, m, t, &candidates, &weights, &mut cols, &mut best, &mut meter);

    let to_mat = |cols: Vec<u64>| IncidenceMatrix::new(m, cols).expect("nonempty");
    match (meter.exhausted, best) {
        (false, Some((w, cols))) => Ok(MinStorageResult::Exact { n_min: w, witness: to_mat(cols) }),
        (false, None) => Err(Error::Infeasible(format!(
            "no valid (n={n}, k={k}, m={m}, t={t}) matrix exists"
        ))),
        (true, best) => Ok(MinStorageResult::Exhausted {
            best: best.map(|(w, cols)| (w, to_mat(cols))),
        }),
    }
}

// ---------------------------------------------------------------------------
// Maximum uniform n

#[derive(Debug, Clone)]
pub enum MaxUniformResult {
    Unbounded,
    Exact { n_max: u64, witness: IncidenceMatrix },
    Exhausted { best: Option<(u64, IncidenceMatrix)> },
}

/// Maximum number of weight-c columns forming a valid (k, t) CBC on m
/// servers, by branch and bound over multiplicity vectors.
pub fn max_uniform_n_search(
    m: usize,
    c: usize,
    k: usize,
    t: usize,
    budget: SearchBudget,
    symmetry: bool,
) -> Result<MaxUniformResult> {
    if c == 0 || c > m || m > 12 || k == 0 || t == 0 {
        return Err(Error::BadParams(format!(
            "need 1 <= c <= m <= 12, k >= 1, t >= 1; got m={m}, c={c}, k={k}, t={t}"
        )));
    }
    if k <= c * t {
        // every column spans c rows with capacity tc >= k
        return Ok(MaxUniformResult::Unbounded);
    }
    let supports = k_subsets_lex(m, c);
    let cap = c * t; // multiplicity ct+1 is already invalid once k > ct
    // per-permutation position maps, for orbit-representative pruning
    let perm_maps: Vec<Vec<usize>> = if symmetry && m <= 7 {
        row_permutation_maps(m, &supports)
    } else {
        Vec::new()
    };

    struct St<'a> {
        supports: &'a [u64],
        cap: usize,
        m: usize,
        k: usize,
        t: usize,
        mult: Vec<usize>,
        best: Option<(u64, Vec<usize>)>,
        perm_maps: &'a [Vec<usize>],
    }

    fn not_orbit_rep(st: &St, len: usize) -> bool {
        'perm: for map in st.perm_maps {
            for i in 0..len {
                let img = map[i];
                if img >= len {
                    continue 'perm; // image undefined here, cannot conclude
                }
                let a = st.mult[i];
                let b = st.mult[img];
                if a > b {
                    continue 'perm;
                }
                if a < b {
                    return true; // strictly below its image: not canonical
                }
            }
        }
        false
    }

    fn partial_valid(st: &St, len: usize) -> bool {
        let cols: Vec<u64> = (0..len)
            .flat_map(|i| std::iter::repeat(st.supports[i]).take(st.mult[i]))
            .collect();
        if cols.len() < st.k {
            return true;
        }
        let mat = IncidenceMatrix::new(st.m, cols).expect("nonempty");
        is_cbc(&mat, st.k, st.t).expect("k <= n").is_valid()
    }

    fn dfs(st: &mut St, idx: usize, total: u64, meter: &mut Meter) {
        if !meter.tick() {
            return;
        }
        if idx == st.supports.len() {
            if total >= st.k as u64
                && st.best.as_ref().map_or(true, |(b, _)| total > *b)
                && partial_valid(st, idx)
            {
                st.best = Some((total, st.mult.clone()));
            }
            return;
        }
        let optimistic = total + (st.cap as u64) * (st.supports.len() - idx) as u64;
        if st.best.as_ref().map_or(false, |(b, _)| optimistic <= *b) {
            return;
        }
        for mu in (0..=st.cap).rev() {
            st.mult[idx] = mu;
            if !st.perm_maps.is_empty() && not_orbit_rep(st, idx + 1) {
                continue;
            }
            if partial_valid(st, idx + 1) {
                dfs(st, idx + 1, total + mu as u64, meter);
            }
            if meter.exhausted {
                break;
            }
        }
        st.mult[idx] = 0;
    }

    let mut st = St {
        supports: &supports,
        cap,
        m,
        k,
        t,
        mult: vec![0; supports.len()],
        best: None,
        perm_maps: &perm_maps,
    };
    let mut meter = Meter::new(budget);
    dfs(&mut st, 0, 0, &mut meter);

    let to_witness = |mult: Vec<usize>| {
        let cols: Vec<u64> = mult
            .iter()
            .enumerate()
            .flat_map(|(i, &mu)| std::iter::repeat(supports[i]).take(mu))
            .collect();
        IncidenceMatrix::new(m, cols).expect("nonempty")
    };
    match (meter.exhausted, st.best) {
        (false, Some((n_max, mult))) => {
            Ok(MaxUniformResult::Exact { n_max, witness: to_witness(mult) })
        }
        (false, None) => Err(Error::Infeasible(format!(
            "no c-uniform (k={k}, t={t}) CBC with at least k columns exists for m={m}, c={c}"
        ))),
        (true, best) => Ok(MaxUniformResult::Exhausted {
            best: best.map(|(n, mult)| (n, to_witness(mult))),
        }),
    }
}

fn row_permutation_maps(m: usize, supports: &[u64]) -> Vec<Vec<usize>> {
    let mut pos_of = std::collections::HashMap::new();
    for (i, &s) in supports.iter().enumerate() {
        pos_of.insert(s, i);
    }
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut p: Vec<usize> = (0..m).collect();
    all_permutations(&mut p, 0, &mut perms);
    perms
        .into_iter()
        .filter(|p| p.iter().enumerate().any(|(i, &x)| i != x))
        .map(|p| {
            supports
                .iter()
                .map(|&s| {
                    let mut img = 0u64;
                    for (new, &old) in p.iter().enumerate() {
                        if s >> old & 1 == 1 {
                            img |= 1 << new;
                        }
                    }
                    pos_of[&img]
                })
                .collect()
        })
        .collect()
}

fn all_permutations(v: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == v.len() {
        out.push(v.clone());
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        all_permutations(v, i + 1, out);
        v.swap(i, j);
    }
}

// ---------------------------------------------------------------------------
// Triangle span witnesses (the G_8 reconstruction)

#[derive(Debug, Clone)]
pub enum SpanWitnessResult {
    Found { graph: Graph, triangles: Vec<[usize; 3]> },
    NoneFound,
    Exhausted { best: Option<(Graph, Vec<[usize; 3]>)> },
}

/// Do every j <= k of these triangles span at least j vertices?
fn triangles_span_ok(triangles: &[[usize; 3]], v: usize, k: usize) -> bool {
    let cap = (k - 1).min(v);
    for size in 1..=cap {
        for rows in k_subsets_lex(v, size) {
            let inside = triangles
                .iter()
                .filter(|t| t.iter().all(|&x| rows >> x & 1 == 1))
                .count();
            if inside > size {
                return false;
            }
        }
    }
    true
}

/// Looks for a graph on v vertices with at least `triangle_target`
/// triangles such that any k of them span at least k vertices.
///
/// Structured candidates (complete graph, a cyclic chain of K4 blocks
/// sharing opposite edges) are tried first; otherwise a pruned DFS over
/// edge sets runs within the budget.
pub fn find_span_witness_graph(
    v: usize,
    triangle_target: usize,
    k: usize,
    budget: SearchBudget,
) -> Result<SpanWitnessResult> {
    if v < 3 || v > 10 || k == 0 {
        return Err(Error::BadParams(format!(
            "need 3 <= v <= 10, k >= 1; got v={v}, k={k}"
        )));
    }
    for seed in seed_graphs(v) {
        let tris = seed.triangles();
        if tris.len() >= triangle_target
            && tris.len() >= k
            && triangles_span_ok(&tris, v, k)
        {
            return Ok(SpanWitnessResult::Found { graph: seed, triangles: tris });
        }
    }

    // DFS over edges in lexicographic order
    let all_edges: Vec<(usize, usize)> = (0..v)
        .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
        .collect();
    let mut meter = Meter::new(budget);
    let mut g = Graph::new(v)?;
    let mut best: Option<(Graph, Vec<[usize; 3]>)> = None;
    let mut found: Option<(Graph, Vec<[usize; 3]>)> = None;

    fn dfs(
        g: &mut Graph,
        edges: &[(usize, usize)],
        next: usize,
        v: usize,
        k: usize,
        target: usize,
        best: &mut Option<(Graph, Vec<[usize; 3]>)>,
        found: &mut Option<(Graph, Vec<[usize; 3]>)>,
        meter: &mut Meter,
    ) {
        if found.is_some() || !meter.tick() {
            return;
        }
        let tris = g.triangles();
        if !triangles_span_ok(&tris, v, k) {
            return; // triangles only accumulate; this cannot recover
        }
        if best.as_ref().map_or(true, |(_, t)| tris.len() > t.len()) {
            *best = Some((g.clone(), tris.clone()));
        }
        if tris.len() >= target && tris.len() >= k {
            *found = Some((g.clone(), tris));
            return;
        }
        if next == edges.len() {
            return;
        }
        // each remaining edge closes at most v - 2 new triangles
        if tris.len() + (edges.len() - next) * (v - 2) < target {
            return;
        }
        let (a, b) = edges[next];
        g.add_edge(a, b).expect("fresh edge");
        dfs(g, edges, next + 1, v, k, target, best, found, meter);
        g.remove_last_edge();
        dfs(g, edges, next + 1, v, k, target, best, found, meter);
    }

    dfs(
        &mut g,
        &all_edges,
        0,
        v,
        k,
        triangle_target,
        &mut best,
        &mut found,
        &mut meter,
    );

    if let Some((graph, triangles)) = found {
        return Ok(SpanWitnessResult::Found { graph, triangles });
    }
    if meter.exhausted {
        return Ok(SpanWitnessResult::Exhausted { best });
    }
    Ok(SpanWitnessResult::NoneFound)
}

fn seed_graphs(v: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    if v <= 5 {
        out.push(Graph::complete(v).expect("small"));
    }
    if v >= 6 && v % 2 == 0 {
        // cyclic chain of K4 blocks on consecutive vertex quadruples,
        // adjacent blocks sharing an edge
        let mut g = Graph::new(v).expect("small");
        for i in 0..v / 2 {
            let block = [2 * i % v, (2 * i + 1) % v, (2 * i + 2) % v, (2 * i + 3) % v];
            for a in 0..4 {
                for b in a + 1..4 {
                    if !g.has_edge(block[a], block[b]) {
                        g.add_edge(block[a], block[b]).expect("in range");
                    }
                }
            }
        }
        out.push(g);
    }
    out
}

// ---------------------------------------------------------------------------
// Extremal girth-5 edge counts

#[derive(Debug, Clone)]
pub struct GirthSearchResult {
    pub e_max: usize,
    pub witness: Graph,
    pub exact: bool,
}

enum GirthMode {
    Max,
    Target(usize),
}

/// Exact maximum edge count over triangle-free, square-free graphs on v
/// vertices (subject to the budget; `exact == false` means best-so-far).
pub fn max_girth5_edges_search(v: usize, budget: SearchBudget) -> Result<GirthSearchResult> {
    girth5_search(v, GirthMode::Max, budget)
}

/// First triangle- and square-free graph found with at least `target` edges.
pub fn girth5_target_search(
    v: usize,
    target: usize,
    budget: SearchBudget,
) -> Result<GirthSearchResult> {
    girth5_search(v, GirthMode::Target(target), budget)
}

fn girth5_search(v: usize, mode: GirthMode, budget: SearchBudget) -> Result<GirthSearchResult> {
    if v < 1 || v > 14 {
        return Err(Error::BadParams(format!("need 1 <= v <= 14; got v={v}")));
    }

    struct St {
        v: usize,
        adj: Vec<u64>,
        // common[a] bit b set: a and b already share a common neighbor
        common: Vec<u64>,
        degrees: Vec<usize>,
        edges: usize,
        pair_budget_used: u64, // sum of C(deg, 2)
        best: usize,
        best_adj: Vec<u64>,
        target: Option<usize>,
        done: bool,
    }

    // Even-spread relaxation: a square-free graph marks C(deg(x),2) vertex
    // pairs per vertex and each pair can be marked at most once, so
    // sum C(deg,2) <= C(v,2). Adding an edge to endpoints of degrees d1, d2
    // costs d1 + d2 marks; spreading over the smallest degrees first is the
    // cheapest way to place E extra edges, so the count below is an upper
    // bound on the edges any extension can still add.
    fn optimistic_extra(st: &St, placed: usize) -> usize {
        let total_budget = binomial(st.v, 2);
        let mut budget = total_budget.saturating_sub(st.pair_budget_used) as i64;
        let structural_cap: usize = (placed..st.v).sum();
        let mut heap: std::collections::BinaryHeap<std::cmp::Reverse<i64>> = st.degrees
            [..placed]
            .iter()
            .map(|&d| std::cmp::Reverse(d as i64))
            .chain((placed..st.v).map(|_| std::cmp::Reverse(0)))
            .collect();
        let mut extra = 0usize;
        while extra < structural_cap {
            let std::cmp::Reverse(d1) = heap.pop().expect("v >= 2 here");
            let std::cmp::Reverse(d2) = heap.pop().expect("v >= 2 here");
            if d1 + d2 > budget {
                break;
            }
            budget -= d1 + d2;
            heap.push(std::cmp::Reverse(d1 + 1));
            heap.push(std::cmp::Reverse(d2 + 1));
            extra += 1;
        }
        extra
    }

    fn valid_neighborhoods(st: &St, i: usize) -> Vec<u64> {
        let mut subsets: Vec<u64> = vec![0];
        let mut cur: Vec<usize> = Vec::new();
        fn rec(st: &St, i: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<u64>) {
            for x in start..i {
                let ok = cur.iter().all(|&y| {
                    st.adj[x] >> y & 1 == 0 && st.common[x] >> y & 1 == 0
                });
                if ok {
                    cur.push(x);
                    out.push(cur.iter().fold(0u64, |m, &e| m | 1 << e));
                    rec(st, i, x + 1, cur, out);
                    cur.pop();
                }
            }
        }
        rec(st, i, 0, &mut cur, &mut subsets);
        // larger neighborhoods first so good graphs appear early
        subsets.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));
        subsets
    }

    fn dfs(st: &mut St, i: usize, meter: &mut Meter) {
        if st.done || !meter.tick() {
            return;
        }
        if i == st.v {
            if st.edges > st.best {
                st.best = st.edges;
                st.best_adj = st.adj.clone();
                if st.target.map_or(false, |t| st.best >= t) {
                    st.done = true;
                }
            }
            return;
        }
        let goal = match st.target {
            Some(t) => t,
            None => st.best + 1,
        };
        if st.edges + optimistic_extra(st, i) < goal {
            return;
        }
        for nb in valid_neighborhoods(st, i) {
            let members = support_elems(nb);
            st.adj[i] = nb;
            for &x in &members {
                // i now shares x with every prior neighbor of x; in a
                // square-free graph each such pair is new exactly once
                for w in support_elems(st.adj[x]) {
                    if w != i {
                        st.common[i] |= 1 << w;
                        st.common[w] |= 1 << i;
                    }
                }
                st.adj[x] |= 1 << i;
                st.degrees[x] += 1;
                st.pair_budget_used += (st.degrees[x] - 1) as u64;
            }
            st.degrees[i] = members.len();
            st.pair_budget_used += binomial(members.len(), 2);
            for a in 0..members.len() {
                for b in a + 1..members.len() {
                    st.common[members[a]] |= 1 << members[b];
                    st.common[members[b]] |= 1 << members[a];
                }
            }
            st.edges += members.len();

            dfs(st, i + 1, meter);

            st.edges -= members.len();
            for a in 0..members.len() {
                for b in a + 1..members.len() {
                    st.common[members[a]] &= !(1 << members[b]);
                    st.common[members[b]] &= !(1 << members[a]);
                }
            }
            st.pair_budget_used -= binomial(members.len(), 2);
            st.degrees[i] = 0;
            for &x in &members {
                st.adj[x] &= !(1 << i);
                st.degrees[x] -= 1;
                st.pair_budget_used -= st.degrees[x] as u64;
                for w in support_elems(st.adj[x]) {
                    st.common[i] &= !(1 << w);
                    st.common[w] &= !(1 << i);
                }
            }
            st.adj[i] = 0;
            if st.done || meter.exhausted {
                return;
            }
        }
    }

    let target = match mode {
        GirthMode::Max => None,
        GirthMode::Target(t) => Some(t),
    };
    let mut st = St {
        v,
        adj: vec![0; v],
        common: vec![0; v],
        degrees: vec![0; v],
        edges: 0,
        pair_budget_used: 0,
        best: 0,
        best_adj: vec![0; v],
        target,
        done: false,
    };
    let mut meter = Meter::new(budget);
    dfs(&mut st, 0, &mut meter);

    let mut witness = Graph::new(v)?;
    for a in 0..v {
        for b in support_elems(st.best_adj[a]) {
            if b > a {
                witness.add_edge(a, b)?;
            }
        }
    }
    if let Some(t) = st.target {
        if st.best < t {
            if meter.exhausted {
                return Ok(GirthSearchResult { e_max: st.best, witness, exact: false });
            }
            return Err(Error::Infeasible(format!(
                "no triangle- and square-free graph on {v} vertices reaches {t} edges"
            )));
        }
    }
    Ok(GirthSearchResult {
        e_max: st.best,
        witness,
        exact: !meter.exhausted,
    })
}
