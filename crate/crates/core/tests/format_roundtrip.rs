use ics_core::geom::Tolerance;
use ics_core::sample::random_params;
use ics_core::synthesis::build_from_params;
use ics_core::PointsFile;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_rewrite_is_byte_identical(seed in any::<u64>(), d in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_params(d, 0.05, &mut rng);
        let s = build_from_params(&p, 1.0, 3 * (d + 2), &Tolerance::default())
            .unwrap()
            .with_analysis(1e-7)
            .unwrap();
        let text = PointsFile::from_sequence(&s, Some(p.values())).to_json();
        let again = PointsFile::from_json(&text).unwrap().to_json();
        prop_assert_eq!(&text, &again);
    }

    #[test]
    fn csv_and_json_carry_the_same_points(
        rows in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 3), 1..40),
        header in any::<bool>(),
    ) {
        let file = PointsFile { dim: 3, points: rows, params: None, analysis: None };
        let from_csv = PointsFile::from_csv(&file.to_csv(header).unwrap()).unwrap();
        let from_json = PointsFile::from_json(&file.to_json()).unwrap();
        prop_assert_eq!(&from_csv.points, &file.points);
        prop_assert_eq!(&from_json.points, &file.points);
    }
}
