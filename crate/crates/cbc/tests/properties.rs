//! Property-based invariants for the core types and the verifier.

use cbc::fileio::MatrixFile;
use cbc::matrix::{CodeParams, IncidenceMatrix, SetSystem};
use cbc::verifier::{is_cbc, naive_is_cbc, retrieval_assignment};
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = IncidenceMatrix> {
    (1usize..=6, 1usize..=9).prop_flat_map(|(m, n)| {
        let max_col = (1u64 << m) - 1;
        proptest::collection::vec(1..=max_col, n)
            .prop_map(move |cols| IncidenceMatrix::new(m, cols).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn dualize_is_an_involution(
        m in 1usize..=6,
        blocks in proptest::collection::vec(proptest::collection::vec(0usize..6, 0..5), 1..8)
    ) {
        let blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.retain(|&p| p < m);
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        let s = SetSystem::new(m, blocks).unwrap();
        prop_assert_eq!(s.dualize().dualize(), s);
    }

    #[test]
    fn span_is_monotone_and_bounded(mat in small_matrix(), picks in proptest::collection::vec(0usize..9, 1..6)) {
        let items: Vec<usize> = picks.iter().map(|&p| p % mat.n()).collect();
        let full = mat.span_mask(&items).unwrap();
        for cut in 1..items.len() {
            let part = mat.span_mask(&items[..cut]).unwrap();
            prop_assert_eq!(part & full, part, "span of a subset stays inside the full span");
        }
        prop_assert!(full < (1u64 << mat.m()));
    }

    #[test]
    fn validity_is_permutation_invariant(mat in small_matrix(), k in 1usize..=4, t in 1usize..=2, seed in any::<u64>()) {
        let k = k.min(mat.n());
        let base = is_cbc(&mat, k, t).unwrap().is_valid();

        // a deterministic shuffle of rows and columns from the seed
        let mut rows: Vec<usize> = (0..mat.m()).collect();
        let mut cols_order: Vec<usize> = (0..mat.n()).collect();
        let mut state = seed | 1;
        let mut next = move |len: usize| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize % len
        };
        for i in (1..rows.len()).rev() {
            rows.swap(i, next(i + 1));
        }
        for i in (1..cols_order.len()).rev() {
            cols_order.swap(i, next(i + 1));
        }
        let cols: Vec<u64> = cols_order
            .iter()
            .map(|&j| {
                let c = mat.column(j);
                rows.iter()
                    .enumerate()
                    .filter(|&(_, &r)| c >> r & 1 == 1)
                    .fold(0u64, |acc, (i, _)| acc | 1 << i)
            })
            .collect();
        let shuffled = IncidenceMatrix::new(mat.m(), cols).unwrap();
        prop_assert_eq!(is_cbc(&shuffled, k, t).unwrap().is_valid(), base);
    }

    #[test]
    fn fast_and_naive_verifiers_agree(mat in small_matrix(), k in 1usize..=4, t in 1usize..=2) {
        let k = k.min(mat.n());
        let fast = is_cbc(&mat, k, t).unwrap().is_valid();
        let slow = naive_is_cbc(&mat, k, t, 1_000_000).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn valid_codes_admit_assignments_for_every_batch(mat in small_matrix(), t in 1usize..=2) {
        let k = 3usize.min(mat.n());
        if is_cbc(&mat, k, t).unwrap().is_valid() {
            // every k-batch (with repetition of distinct items disallowed)
            let n = mat.n();
            let mut batch = vec![0usize; k];
            for i in 0..k {
                batch[i] = i;
            }
            loop {
                let asg = match retrieval_assignment(&mat, &batch, t).unwrap() {
                    cbc::verifier::AssignmentResult::Assigned(a) => a.pairs,
                    cbc::verifier::AssignmentResult::Infeasible(_) => {
                        return Err(TestCaseError::fail("valid code must serve every batch"));
                    }
                };
                let mut load = vec![0usize; mat.m()];
                for &(item, server) in &asg {
                    prop_assert!(mat.get(server, item));
                    load[server] += 1;
                }
                prop_assert!(load.iter().all(|&l| l <= t));
                // next k-combination of {0..n-1}
                let mut i = k;
                loop {
                    if i == 0 {
                        return Ok(());
                    }
                    i -= 1;
                    if batch[i] < n - (k - i) {
                        batch[i] += 1;
                        for j in i + 1..k {
                            batch[j] = batch[j - 1] + 1;
                        }
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn matrix_file_round_trip(mat in small_matrix(), k in 1usize..=4, t in 1usize..=2) {
        let k = k.min(mat.n());
        let params = CodeParams::new(mat.n(), k, mat.m(), t).unwrap();
        let file = MatrixFile::new(params, mat.clone()).unwrap();
        let text = file.render();
        prop_assert!(text.ends_with('\n'));
        let back = MatrixFile::parse(&text).unwrap();
        prop_assert_eq!(back.matrix.columns(), mat.columns());
        prop_assert_eq!((back.params.k, back.params.t), (k, t));

        let json = serde_json::to_string(&file.to_json()).unwrap();
        let jback: cbc::fileio::MatrixJson = serde_json::from_str(&json).unwrap();
        let jfile = jback.to_matrix_file().unwrap();
        prop_assert_eq!(jfile.matrix.columns(), mat.columns());
    }
}
