//! Whole-domain sweeps of the constructions against the closed-form
//! optima and structural checks of the delete-and-modify trace.

use cbc::bounds::{optimal_n, BoundKind};
use cbc::constructions::{construct_range, construct_uniform_replication};
use cbc::matrix::binomial;
use cbc::search::{max_girth5_edges_search, SearchBudget};
use cbc::verifier::is_cbc;

#[test]
fn range_construction_is_optimal_over_its_whole_domain() {
    for (m, k) in [(5usize, 3usize), (5, 4), (6, 4)] {
        let lo = binomial(m, k - 2) as usize;
        let hi = ((k as u64 - 1) * binomial(m, k - 1)) as usize;
        for n in lo..=hi {
            let (mat, trace) = construct_range(n, k, m).unwrap();
            assert!(
                is_cbc(&mat, k, 1).unwrap().is_valid(),
                "invalid code at m={m}, k={k}, n={n}"
            );
            let bound = optimal_n(n, k, m).unwrap();
            assert_eq!(bound.kind, BoundKind::Exact, "m={m}, k={k}, n={n}");
            assert_eq!(
                Some(mat.total_storage()),
                bound.value,
                "suboptimal storage at m={m}, k={k}, n={n}"
            );
            assert_eq!(trace.m, m);
            assert_eq!(trace.k, k);
        }
    }
}

#[test]
fn full_trace_at_m6_k4_is_schedule_only_and_internally_consistent() {
    let (mat, trace) = construct_range(15, 4, 6).unwrap();
    assert_eq!(trace.steps.len(), 15);
    let mut n = 60usize;
    let mut storage = 180u64;
    for (i, step) in trace.steps.iter().enumerate() {
        assert_eq!(step.step, i + 1);
        assert!(!step.fallback, "step {} needed a fallback search", i + 1);
        assert_eq!(step.deleted.len(), 3, "step {} deletions", i + 1);
        let (_, new_support) = step.modified.as_ref().expect("every full step thins a column");
        assert_eq!(new_support.len(), 2);
        n -= 3;
        storage -= 10;
        assert_eq!(step.n_after, n);
        assert_eq!(step.storage_after, storage);
    }
    assert_eq!(mat.n(), 15);
    assert_eq!(mat.total_storage(), 30);
}

#[test]
fn partial_step_deletes_without_thinning() {
    // one column short of a full batch boundary
    let (mat, trace) = construct_range(59, 4, 6).unwrap();
    assert_eq!(mat.n(), 59);
    assert_eq!(mat.total_storage(), 177);
    let last = trace.steps.last().unwrap();
    assert!(last.modified.is_none());
    assert_eq!(last.deleted.len(), 1);
}

#[test]
fn replication_count_limits_by_probe_budget() {
    // m = 6 servers, every pair replicated r times, probe limit t = 2:
    // r = 2t serves k up to ct + t; r = t serves k up to ct + 2t.
    let r4 = construct_uniform_replication(6, 2, 4).unwrap();
    assert!(is_cbc(&r4, 6, 2).unwrap().is_valid());
    assert!(!is_cbc(&r4, 7, 2).unwrap().is_valid());
    let r2 = construct_uniform_replication(6, 2, 2).unwrap();
    assert!(is_cbc(&r2, 8, 2).unwrap().is_valid());
    assert!(!is_cbc(&r2, 9, 2).unwrap().is_valid());
}

#[test]
fn girth5_maxima_match_known_small_values() {
    for (v, e) in [(5usize, 5usize), (6, 6), (7, 8), (8, 10)] {
        let r = max_girth5_edges_search(v, SearchBudget::default()).unwrap();
        assert!(r.exact, "v={v} search hit its budget");
        assert_eq!(r.e_max, e, "v={v}");
        assert!(r.witness.is_triangle_and_square_free());
    }
}
