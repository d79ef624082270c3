//! t = 2 constructions built from the all-pairs column set plus a sparse
//! graph of duplicated pair columns.

use crate::bounds::girth5_edge_bound;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::{k_subsets_lex, IncidenceMatrix};
use crate::search::{girth5_target_search, SearchBudget};
use crate::verifier::is_cbc;

/// Disjoint paths of length two: floor(m/3) paths on vertex triples
/// {3i, 3i+1, 3i+2}, giving 2 floor(m/3) edges.
pub fn construct_path_pack(m: usize) -> Result<Graph> {
    let mut g = Graph::new(m)?;
    for i in 0..m / 3 {
        g.add_edge(3 * i, 3 * i + 1)?;
        g.add_edge(3 * i + 1, 3 * i + 2)?;
    }
    Ok(g)
}

/// A triangle- and square-free graph on v vertices with at least
/// 2 + 3 floor((v-3)/2) edges, found by exhaustive search.
pub fn construct_girth5(v: usize) -> Result<Graph> {
    let target = girth5_edge_bound(v as u64)? as usize;
    let found = girth5_target_search(v, target, SearchBudget::default())?;
    let g = found.witness;
    if g.edge_count() < target || !g.is_triangle_and_square_free() {
        return Err(Error::SelfVerify(format!(
            "girth-5 search on v={v} returned an unusable graph"
        )));
    }
    Ok(g)
}

/// Rejects duplicate graphs whose 4-vertex subsets carry 3 or more
/// induced edges. Four servers can serve at most 8 reads at t = 2 and
/// already hold the 6 distinct pair columns, so a third duplicate inside
/// any 4 rows leaves 9 columns against capacity 8 — fatal for k = 9 and
/// k = 10 alike. (Graphs passing this test are exactly the disjoint
/// unions of paths of length at most 2.)
fn check_forbidden(extra: &Graph, k: usize) -> Result<()> {
    if k != 9 && k != 10 {
        return Err(Error::BadParams(format!(
            "pairs augmentation needs k in {{9, 10}}; got k={k}"
        )));
    }
    let limit = 3;
    let v = extra.v();
    if v < 4 {
        return Ok(());
    }
    for quad in k_subsets_lex(v, 4) {
        let verts = crate::matrix::support_elems(quad);
        let mut induced = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if extra.has_edge(verts[i], verts[j]) {
                    induced += 1;
                }
            }
        }
        if induced >= limit {
            return Err(Error::ForbiddenConfiguration(
                verts,
                format!("{induced} induced duplicate edges (limit {})", limit - 1),
            ));
        }
    }
    Ok(())
}

/// All C(m,2) distinct pair columns plus one duplicate pair column per
/// edge of `extra`, for k = 9 or 10 at t = 2; n = C(m,2) + |edges| and
/// total storage 2n. The duplicate graph must avoid the forbidden
/// 4-vertex configurations, and the result is re-verified regardless.
pub fn augment_pairs_code(m: usize, extra: &Graph, k: usize) -> Result<IncidenceMatrix> {
    if extra.v() != m {
        return Err(Error::BadParams(format!(
            "duplicate graph has {} vertices but m = {m}",
            extra.v()
        )));
    }
    check_forbidden(extra, k)?;
    let mut cols = k_subsets_lex(m, 2);
    for &(a, b) in extra.edges() {
        cols.push((1u64 << a) | (1u64 << b));
    }
    let mat = IncidenceMatrix::new(m, cols)?;
    if !is_cbc(&mat, k, 2)?.is_valid() {
        return Err(Error::SelfVerify(format!(
            "pairs augmentation on m={m}, k={k} failed verification"
        )));
    }
    Ok(mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::binomial;

    #[test]
    fn path_pack_shape() {
        let g = construct_path_pack(9).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.components().iter().filter(|c| c.len() == 3).count(), 3);
        let g = construct_path_pack(8).unwrap();
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn path_pack_augments_k9() {
        let m = 9;
        let extra = construct_path_pack(m).unwrap();
        let mat = augment_pairs_code(m, &extra, 9).unwrap();
        assert_eq!(mat.n() as u64, binomial(m, 2) + 6);
        assert_eq!(mat.total_storage(), 2 * mat.n() as u64);
    }

    #[test]
    fn triangle_duplicates_rejected_for_both_k() {
        let mut extra = Graph::new(6).unwrap();
        extra.add_edge(0, 1).unwrap();
        extra.add_edge(1, 2).unwrap();
        extra.add_edge(0, 2).unwrap();
        for k in [9, 10] {
            assert!(matches!(
                augment_pairs_code(6, &extra, k),
                Err(Error::ForbiddenConfiguration(..))
            ));
        }
    }

    #[test]
    fn square_duplicates_rejected_for_k10() {
        let mut extra = Graph::new(6).unwrap();
        extra.add_edge(0, 1).unwrap();
        extra.add_edge(1, 2).unwrap();
        extra.add_edge(2, 3).unwrap();
        extra.add_edge(0, 3).unwrap();
        assert!(matches!(
            augment_pairs_code(6, &extra, 10),
            Err(Error::ForbiddenConfiguration(..))
        ));
    }

    #[test]
    fn path_pack_augments_k10() {
        let extra = construct_path_pack(7).unwrap();
        let mat = augment_pairs_code(7, &extra, 10).unwrap();
        assert_eq!(mat.n() as u64, binomial(7, 2) + 4);
    }

    #[test]
    fn girth5_graph_rejected_for_k10() {
        // a 4-cycle-free, triangle-free graph with 8 edges on 7 vertices
        // still has a degree-3 vertex, which puts 9 columns inside 4
        // servers of capacity 8
        let extra = construct_girth5(7).unwrap();
        assert_eq!(extra.edge_count(), 8);
        assert!(matches!(
            augment_pairs_code(7, &extra, 10),
            Err(Error::ForbiddenConfiguration(..))
        ));
    }
}
