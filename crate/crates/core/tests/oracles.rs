//! Library results against brute-force reference implementations on many
//! small random instances with frequent distance ties.

mod common;

use common::oracles;
use esds_core::evaluation::confusion_matrix;
use esds_core::neighbors::knn;
use esds_core::resampling::{enn_edit, radius_smote, tomek_links, EnnScope, ResamplerConfig};
use esds_core::{Dataset, SeededRng};

const INSTANCES: u64 = 200;

fn instances(stream: u64) -> impl Iterator<Item = (u64, Dataset)> {
    (0..INSTANCES).map(move |i| {
        let mut rng = SeededRng::new(1000 * stream + i);
        (i, oracles::random_dataset(&mut rng, 50))
    })
}

#[test]
fn knn_matches_full_sort() {
    for (i, ds) in instances(1) {
        for k in 1..ds.n_rows() {
            for q in 0..ds.n_rows() {
                let got = knn(ds.row(q), &ds, k, Some(q)).unwrap();
                assert_eq!(
                    got.indices,
                    oracles::knn(&ds, ds.row(q), k, Some(q)),
                    "instance {i}, q {q}, k {k}"
                );
            }
        }
        let query = vec![0.5; ds.n_features()];
        let got = knn(&query, &ds, ds.n_rows(), None).unwrap();
        assert_eq!(got.indices, oracles::knn(&ds, &query, ds.n_rows(), None));
    }
}

#[test]
fn enn_matches_vote_count() {
    for (i, ds) in instances(2) {
        for k in [1, 3, 5] {
            if k >= ds.n_rows() {
                continue;
            }
            let (_, removed) = enn_edit(&ds, k, EnnScope::AllClasses).unwrap();
            assert_eq!(removed, oracles::enn_removed(&ds, k), "instance {i}, k {k}");
        }
    }
}

#[test]
fn tomek_matches_pair_scan() {
    for (i, ds) in instances(3) {
        assert_eq!(tomek_links(&ds), oracles::tomek(&ds), "instance {i}");
    }
}

#[test]
fn radius_smote_cleanup_matches_oracle() {
    let mut checked = 0;
    for (i, ds) in instances(4) {
        if ds.class_counts().contains(&1) {
            continue;
        }
        let out = radius_smote(&ds, &ResamplerConfig::with_seed(i)).unwrap();
        let augmented = out.batch.appended_to(&ds).unwrap();
        let removed = oracles::enn_removed(&augmented, 3);
        let expected = augmented.without(&removed);
        assert_eq!(out.dataset, expected, "instance {i}");
        checked += 1;
    }
    assert!(checked > 100, "only {checked} usable instances");
}

#[test]
fn confusion_matrix_matches_counting() {
    let mut rng = SeededRng::new(5);
    for _ in 0..INSTANCES {
        let n = 1 + rng.index(50);
        let t = oracles::random_labels(&mut rng, n);
        let p = oracles::random_labels(&mut rng, n);
        let cm = confusion_matrix(&t, &p).unwrap();
        let want = oracles::confusion(&t, &p);
        let got: Vec<Vec<u64>> = want.iter().map(|r| r.to_vec()).collect();
        assert_eq!(cm.counts, got);
    }
}
