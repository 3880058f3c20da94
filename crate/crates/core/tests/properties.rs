use approx::assert_relative_eq;
use proptest::prelude::*;

use esds_core::anthropometry::{fit_linear, haz_status, status_for_z, GrowthReference};
use esds_core::data::{class_distribution, stratified_split};
use esds_core::ensemble::{fit_tree, Model, TreeParams};
use esds_core::evaluation::{accuracy, class_metrics, confusion_matrix, micro_precision, micro_recall};
use esds_core::neighbors::knn;
use esds_core::resampling::{resample, GenerationReport, ResampleMethod, ResamplerConfig};
use esds_core::{ClassLabel, Dataset, SeededRng};

fn label() -> impl Strategy<Value = ClassLabel> {
    prop::sample::select(ClassLabel::ALL.to_vec())
}

/// Rows with at least `min_per_class` members in each of the three classes.
fn dataset(min_per_class: usize, max_extra: usize, dim: usize) -> impl Strategy<Value = Dataset> {
    let base = (0..3 * min_per_class)
        .map(|i| ClassLabel::ALL[i % 3])
        .collect::<Vec<_>>();
    prop::collection::vec((prop::collection::vec(-50.0..50.0f64, dim), label()), 0..=max_extra).prop_flat_map(
        move |extra| {
            let base = base.clone();
            prop::collection::vec(prop::collection::vec(-50.0..50.0f64, dim), base.len()).prop_map(move |rows| {
                let mut all_rows = rows;
                let mut labels = base.clone();
                for (r, l) in &extra {
                    all_rows.push(r.clone());
                    labels.push(*l);
                }
                Dataset::with_generic_schema(&all_rows, labels).unwrap()
            })
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn knn_lists_are_sorted_and_distinct(ds in dataset(2, 20, 3), k in 1usize..6, q in 0usize..6) {
        let q = q % ds.n_rows();
        let k = k.min(ds.n_rows() - 1);
        let nl = knn(ds.row(q), &ds, k, Some(q)).unwrap();
        prop_assert_eq!(nl.len(), k);
        prop_assert!(nl.distances.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(!nl.indices.contains(&q));
        let mut sorted = nl.indices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), k);
    }

    #[test]
    fn smote_rows_lie_between_parent_and_neighbor(ds in dataset(2, 30, 4), seed in any::<u64>()) {
        let out = resample(&ds, ResampleMethod::Smote, &ResamplerConfig::with_seed(seed)).unwrap();
        let b = &out.batch;
        for i in 0..b.len() {
            let p = ds.row(b.parent_index[i]);
            let q = ds.row(b.neighbor_index[i].unwrap());
            for (j, &v) in b.row(i).iter().enumerate() {
                prop_assert!(v >= p[j].min(q[j]) && v <= p[j].max(q[j]));
            }
            prop_assert_eq!(b.labels[i], ds.label(b.parent_index[i]));
        }
        let counts = out.dataset.class_counts();
        prop_assert!(counts.iter().all(|&c| c == counts[0]));
    }

    #[test]
    fn resamplers_keep_every_class(ds in dataset(3, 30, 2), seed in any::<u64>()) {
        for m in [ResampleMethod::SmoteTomek, ResampleMethod::RadiusSmote, ResampleMethod::EditedRadiusSmote] {
            let out = resample(&ds, m, &ResamplerConfig::with_seed(seed)).unwrap();
            prop_assert_eq!(out.report.after, out.dataset.class_counts());
            let text = out.report.to_string();
            prop_assert_eq!(text.parse::<GenerationReport>().unwrap(), out.report.clone());
        }
    }

    #[test]
    fn distribution_percentages_sum_to_100(labels in prop::collection::vec(label(), 1..300)) {
        let rows: Vec<Vec<f64>> = (0..labels.len()).map(|i| vec![i as f64]).collect();
        let ds = Dataset::with_generic_schema(&rows, labels).unwrap();
        let d = class_distribution(&ds);
        prop_assert_eq!(d.percentages.iter().sum::<u32>(), 100);
        prop_assert_eq!(d.total(), ds.n_rows());
    }

    #[test]
    fn split_partitions_rows_and_keeps_classes(ds in dataset(2, 60, 1), frac in 0.1..0.5f64, seed in any::<u64>()) {
        let (train, test) = stratified_split(&ds, frac, &mut SeededRng::new(seed)).unwrap();
        prop_assert_eq!(train.n_rows() + test.n_rows(), ds.n_rows());
        for c in ClassLabel::ALL {
            let total = ds.class_counts()[c.index()];
            prop_assert_eq!(train.class_counts()[c.index()] + test.class_counts()[c.index()], total);
            prop_assert!(train.class_counts()[c.index()] >= 1 && test.class_counts()[c.index()] >= 1);
        }
        let mut all: Vec<f64> = train.features_flat().iter().chain(test.features_flat()).copied().collect();
        let mut orig = ds.features_flat().to_vec();
        all.sort_by(f64::total_cmp);
        orig.sort_by(f64::total_cmp);
        prop_assert_eq!(all, orig);
    }

    #[test]
    fn metrics_are_bounded(t in prop::collection::vec(label(), 1..100), seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let p: Vec<ClassLabel> = t.iter().map(|&l| if rng.unit() < 0.7 { l } else { ClassLabel::ALL[rng.index(3)] }).collect();
        let cm = confusion_matrix(&t, &p).unwrap();
        prop_assert_eq!(cm.total(), t.len() as u64);
        for c in ClassLabel::ALL {
            let m = class_metrics(&cm, c);
            for v in [m.precision, m.recall, m.f1] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
            prop_assert!(m.f1 <= m.precision.max(m.recall) + 1e-12);
        }
        let acc = accuracy(&cm).unwrap();
        prop_assert!((micro_precision(&cm) - acc).abs() < 1e-12);
        prop_assert!((micro_recall(&cm) - acc).abs() < 1e-12);
    }

    #[test]
    fn status_is_monotone_in_height(age in 0u32..=60, sex in 0u8..=1, h1 in 40.0..130.0f64, h2 in 40.0..130.0f64) {
        let r = GrowthReference::bundled();
        let (lo, hi) = if h1 <= h2 { (h1, h2) } else { (h2, h1) };
        let severity = |h: f64| match haz_status(age as f64, sex as f64, h, &r).unwrap() {
            ClassLabel::Stunted => 2,
            ClassLabel::Stunting => 1,
            ClassLabel::Normal => 0,
        };
        prop_assert!(severity(lo) >= severity(hi));
    }

    #[test]
    fn status_bands(z in -10.0..10.0f64) {
        let want = if z < -3.0 { ClassLabel::Stunted } else if z < -2.0 { ClassLabel::Stunting } else { ClassLabel::Normal };
        prop_assert_eq!(status_for_z(z), want);
    }

    #[test]
    fn linear_fit_recovers_exact_lines(slope in 0.1..10.0f64, intercept in -100.0..100.0f64, n in 2usize..40) {
        let pairs: Vec<(f64, f64)> = (0..n).map(|i| {
            let x = i as f64 * 3.5 + 1.0;
            (x, slope * x + intercept)
        }).collect();
        let fit = fit_linear(&pairs).unwrap();
        assert_relative_eq!(fit.slope, slope, max_relative = 1e-9);
        assert_relative_eq!(fit.intercept, intercept, epsilon = 1e-7, max_relative = 1e-9);
        prop_assert!(fit.r_squared >= 1.0 - 1e-9);
    }

    #[test]
    fn tree_json_round_trip_predicts_identically(ds in dataset(2, 40, 3), seed in any::<u64>()) {
        let model = fit_tree(&ds, TreeParams::default(), &mut SeededRng::new(seed)).unwrap();
        let back = Model::from_json(&model.to_json()).unwrap();
        prop_assert_eq!(model.predict_dataset(&ds).unwrap(), back.predict_dataset(&ds).unwrap());
    }
}
