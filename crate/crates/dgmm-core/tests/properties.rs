//! Property tests over the scoring and agreement invariants.

use dgmm_core::agreement::{cohens_kappa, fleiss_kappa, kendalls_w, RatingMatrix};
use dgmm_core::ingest::ResponseSet;
use dgmm_core::model::MaturityModel;
use dgmm_core::numeric::Ratio;
use dgmm_core::rating::{aggregate_ratings, passing_threshold, AggregationPolicy, Rating};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn ratings(max_len: usize) -> impl Strategy<Value = Vec<Rating>> {
    prop::collection::vec(0u8..=4, 1..=max_len)
        .prop_map(|values| values.into_iter().map(|v| Rating::new(v).unwrap()).collect())
}

proptest! {
    #[test]
    fn aggregate_stays_within_input_range(panel in ratings(12)) {
        let low = panel.iter().map(|r| r.value()).min().unwrap() as i64;
        let high = panel.iter().map(|r| r.value()).max().unwrap() as i64;
        for policy in [AggregationPolicy::MedianLow, AggregationPolicy::Mean] {
            let aggregate = aggregate_ratings(&panel, policy).unwrap();
            prop_assert!(aggregate >= Ratio::from_int(low));
            prop_assert!(aggregate <= Ratio::from_int(high));
            prop_assert!(aggregate >= Ratio::ZERO);
            prop_assert!(aggregate <= Ratio::from_int(4));
        }
    }

    #[test]
    fn aggregate_is_permutation_invariant(panel in ratings(10), seed in any::<u64>()) {
        let mut shuffled = panel.clone();
        // cheap deterministic shuffle keyed by the seed
        let len = shuffled.len();
        for i in (1..len).rev() {
            let j = (seed as usize).wrapping_mul(i + 7) % (i + 1);
            shuffled.swap(i, j);
        }
        for policy in [AggregationPolicy::MedianLow, AggregationPolicy::Mean] {
            prop_assert_eq!(
                aggregate_ratings(&panel, policy).unwrap(),
                aggregate_ratings(&shuffled, policy).unwrap()
            );
        }
    }

    #[test]
    fn raising_one_rating_never_lowers_the_aggregate(
        panel in ratings(10),
        index in any::<prop::sample::Index>(),
    ) {
        let i = index.index(panel.len());
        if panel[i].value() < 4 {
            let mut raised = panel.clone();
            raised[i] = Rating::new(panel[i].value() + 1).unwrap();
            for policy in [AggregationPolicy::MedianLow, AggregationPolicy::Mean] {
                prop_assert!(
                    aggregate_ratings(&raised, policy).unwrap()
                        >= aggregate_ratings(&panel, policy).unwrap()
                );
            }
        }
    }

    #[test]
    fn threshold_is_monotone_in_total(total in 0u32..500, ratio in 0.05f64..=1.0) {
        prop_assert!(passing_threshold(total + 1, ratio) >= passing_threshold(total, ratio));
        prop_assert!(passing_threshold(total, ratio) <= total + 1);
    }

    #[test]
    fn kendall_w_bounds_and_chi_square_identity(
        cells in prop::collection::vec(prop::collection::vec(0u8..=4, 5), 2..=4),
    ) {
        let raters = (0..cells.len()).map(|i| format!("r{i}")).collect();
        let items = (0..5).map(|i| format!("i{i}")).collect();
        let matrix = RatingMatrix::new(raters, items, cells).unwrap();
        if let Ok(k) = kendalls_w(&matrix) {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&k.w));
            let m = matrix.rater_count() as f64;
            let n = matrix.item_count() as f64;
            prop_assert!((k.chi_square - m * (n - 1.0) * k.w).abs() < 1e-12);
            prop_assert_eq!(k.df, 4);
        }
    }

    #[test]
    fn kappas_stay_within_bounds(
        cells in prop::collection::vec(prop::collection::vec(0u8..=4, 6), 2..=4),
    ) {
        let raters: Vec<String> = (0..cells.len()).map(|i| format!("r{i}")).collect();
        let items = (0..6).map(|i| format!("i{i}")).collect();
        let matrix = RatingMatrix::new(raters.clone(), items, cells.clone()).unwrap();
        let f = fleiss_kappa(&matrix);
        prop_assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&f.kappa));
        for a in 0..cells.len() {
            for b in a + 1..cells.len() {
                let kappa = cohens_kappa(&cells[a], &cells[b]).unwrap();
                prop_assert!((-1.0 - 1e-9..=1.0 + 1e-9).contains(&kappa));
            }
        }
    }

    #[test]
    fn response_set_round_trips_through_json(
        values in prop::collection::vec(0u8..=4, 31),
        panel_size in 1usize..=3,
    ) {
        // level-1-only campaign with repeated panels of the value vector
        let model = MaturityModel::builtin();
        let mut cells = BTreeMap::new();
        for (statement, &value) in model.statements_at(1).iter().zip(values.iter().cycle()) {
            for r in 0..panel_size {
                let rotated = (value + r as u8) % 5;
                cells.insert(
                    (format!("resp-{r}"), statement.key()),
                    Rating::new(rotated).unwrap(),
                );
            }
        }
        let set = ResponseSet::from_cells(
            "prop org".to_string(),
            model.name.clone(),
            1,
            cells,
            model,
        ).unwrap();
        let reparsed = ResponseSet::parse_json(&set.to_json(), model).unwrap();
        prop_assert_eq!(set, reparsed);
    }
}
