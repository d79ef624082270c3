//! Closed-form builders: spread, saturated, uniform replication, and the
//! edge / triangle incidence codes.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::{binomial, grouped_matrix, k_subsets_lex, IncidenceMatrix};
use crate::verifier::is_cbc;

/// m = k servers, items spread round-robin one copy each. Valid whenever
/// n <= t k, with total storage n.
pub fn construct_spread(n: usize, k: usize, t: usize) -> Result<IncidenceMatrix> {
    if k == 0 || t == 0 {
        return Err(Error::BadParams("k and t must be positive".into()));
    }
    if n < k {
        return Err(Error::BadParams(format!("spread needs n >= k; got n={n}, k={k}")));
    }
    if n > t * k {
        return Err(Error::Infeasible(format!(
            "spread needs n <= t*k; got n={n}, t*k={}",
            t * k
        )));
    }
    let cols: Vec<u64> = (0..n).map(|j| 1u64 << (j % k)).collect();
    let mat = IncidenceMatrix::new(k, cols)?;
    if !is_cbc(&mat, k, t)?.is_valid() {
        return Err(Error::SelfVerify(format!(
            "spread produced an invalid (k={k}, t={t}) matrix"
        )));
    }
    Ok(mat)
}

/// n at or beyond (k-1)C(m,k-1): the full grouped matrix plus extra
/// weight-k columns, total storage kn - (k-1)C(m,k-1).
pub fn construct_saturated(n: usize, k: usize, m: usize) -> Result<IncidenceMatrix> {
    let base = grouped_matrix(m, k)?.flatten();
    let n0 = base.n();
    if n < n0 {
        return Err(Error::Infeasible(format!(
            "saturated needs n >= (k-1)C(m,k-1) = {n0}; got n={n}"
        )));
    }
    let heavy = k_subsets_lex(m, k);
    let mut cols = base.columns().to_vec();
    for i in 0..n - n0 {
        cols.push(heavy[i % heavy.len()]);
    }
    let mat = IncidenceMatrix::new(m, cols)?;
    let expect = k as u64 * n as u64 - (k as u64 - 1) * binomial(m, k - 1);
    if mat.total_storage() != expect || !is_cbc(&mat, k, 1)?.is_valid() {
        return Err(Error::SelfVerify(format!(
            "saturated matrix for n={n}, k={k}, m={m} failed its checks"
        )));
    }
    Ok(mat)
}

/// Every weight-c column on m rows, each repeated r times. Columns are
/// grouped by support, supports in lex order.
pub fn construct_uniform_replication(m: usize, c: usize, r: usize) -> Result<IncidenceMatrix> {
    if c == 0 || c > m {
        return Err(Error::BadParams(format!("need 1 <= c <= m; got c={c}, m={m}")));
    }
    if r == 0 {
        return Err(Error::BadParams("replication factor must be positive".into()));
    }
    let mut cols = Vec::new();
    for s in k_subsets_lex(m, c) {
        for _ in 0..r {
            cols.push(s);
        }
    }
    IncidenceMatrix::new(m, cols)
}

/// One weight-2 column per edge; rows are vertices.
pub fn edge_code(g: &Graph) -> Result<IncidenceMatrix> {
    let cols: Vec<u64> = g.edges().iter().map(|&(a, b)| (1u64 << a) | (1u64 << b)).collect();
    IncidenceMatrix::new(g.v(), cols)
}

/// One weight-3 column per listed triangle; every triple must actually be
/// a triangle of the graph.
pub fn triangle_code(g: &Graph, triangles: &[[usize; 3]]) -> Result<IncidenceMatrix> {
    let mut cols = Vec::with_capacity(triangles.len());
    for t in triangles {
        if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
            return Err(Error::BadParams(format!("repeated vertex in triple {t:?}")));
        }
        if !g.is_triangle(t) {
            return Err(Error::BadParams(format!("{t:?} is not a triangle of the graph")));
        }
        cols.push((1u64 << t[0]) | (1u64 << t[1]) | (1u64 << t[2]));
    }
    IncidenceMatrix::new(g.v(), cols)
}
