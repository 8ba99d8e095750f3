use entropic_core::dataio::*;
use entropic_core::selforg::Partition;
use proptest::prelude::*;

fn labelled_dataset() -> impl Strategy<Value = Dataset> {
    (1usize..5, 1usize..30).prop_flat_map(|(dim, n)| {
        (
            prop::collection::vec(prop::collection::vec(prop::num::f64::NORMAL, dim), n),
            prop::option::of(prop::collection::vec(0usize..6, n)),
        )
            .prop_map(|(rows, labels)| Dataset::new(rows, labels).unwrap())
    })
}

proptest! {
    #[test]
    fn csv_round_trip(ds in labelled_dataset()) {
        let mut buf = Vec::new();
        write_csv(&ds, &mut buf).unwrap();
        let label_col = ds.labels().map(|_| ds.dim());
        let back = read_csv(buf.as_slice(), false, label_col).unwrap();
        prop_assert_eq!(back, ds);
    }

    #[test]
    fn error_rate_ignores_relabeling(
        assignment in prop::collection::vec(0usize..4, 1..40),
        labels_seed in prop::collection::vec(0usize..4, 40),
        perm in Just([0usize, 1, 2, 3]).prop_shuffle(),
    ) {
        let labels = &labels_seed[..assignment.len()];
        let p = Partition::from_assignment(assignment, 4).unwrap();
        let q = p.relabel(&perm).unwrap();
        prop_assert_eq!(error_rate(&p, labels).unwrap(), error_rate(&q, labels).unwrap());
    }

    #[test]
    fn error_rate_never_worse_than_chance(
        k in 1usize..=6,
        pairs in prop::collection::vec((0usize..6, 0usize..6), 1..60),
    ) {
        let assignment: Vec<usize> = pairs.iter().map(|(a, _)| a % k).collect();
        let labels: Vec<usize> = pairs.iter().map(|(_, l)| l % k).collect();
        let p = Partition::from_assignment(assignment, k).unwrap();
        let e = error_rate(&p, &labels).unwrap();
        prop_assert!((0.0..=1.0 - 1.0 / k as f64 + 1e-12).contains(&e));
    }
}

#[test]
fn generation_is_deterministic() {
    let spec = SyntheticSpec::default300(4, 77);
    let a = generate_synthetic(&spec).unwrap();
    let b = generate_synthetic(&spec).unwrap();
    let bits = |d: &Dataset| {
        d.rows()
            .iter()
            .flatten()
            .map(|v| v.to_bits())
            .collect::<Vec<_>>()
    };
    assert_eq!(bits(&a), bits(&b));
    let c = generate_synthetic(&SyntheticSpec::default300(4, 78)).unwrap();
    assert_ne!(bits(&a), bits(&c));
}

#[test]
fn generated_clusters_sit_near_their_centers() {
    let ds = generate_synthetic(&SyntheticSpec::default300(0, 1)).unwrap();
    let centers = [[0.0, 0.0, 0.0], [4.0, 4.0, 0.0], [0.0, 4.0, 4.0]];
    for (c, center) in centers.iter().enumerate() {
        let members: Vec<&Vec<f64>> = ds
            .rows()
            .iter()
            .zip(ds.labels().unwrap())
            .filter(|(_, &l)| l == c)
            .map(|(r, _)| r)
            .collect();
        for d in 0..3 {
            let mean = members.iter().map(|r| r[d]).sum::<f64>() / members.len() as f64;
            let var =
                members.iter().map(|r| (r[d] - mean).powi(2)).sum::<f64>() / members.len() as f64;
            // 100 draws: standard error of the mean is 0.05.
            assert!(
                (mean - center[d]).abs() < 0.2,
                "cluster {c} dim {d}: mean {mean}"
            );
            assert!(
                (var.sqrt() - 0.5).abs() < 0.15,
                "cluster {c} dim {d}: sd {}",
                var.sqrt()
            );
        }
    }
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let ds = generate_synthetic(&SyntheticSpec::default300(0, 2)).unwrap();
    save_csv(&ds, &path).unwrap();
    assert_eq!(load_csv(&path, false, Some(3)).unwrap(), ds);
    assert!(matches!(
        load_csv(dir.path().join("missing.csv"), false, None),
        Err(DataError::Io(_))
    ));
}
