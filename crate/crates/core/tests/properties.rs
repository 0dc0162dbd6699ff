use proptest::prelude::*;

use riordan_paths::exact::{frac, int};
use riordan_paths::paths::{Oracle, OracleCap};
use riordan_paths::{formulas, riordan, series, verify, BigInt, Rational, Statistic, TruncSeries};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| frac(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |q| q != &int(0))
}

fn series_strategy(order: usize, zero_constant: bool) -> impl Strategy<Value = TruncSeries> {
    proptest::collection::vec(-5i64..=5, order + 1).prop_map(move |mut c| {
        if zero_constant {
            c[0] = 0;
        }
        TruncSeries::from_ints(&c, order)
    })
}

fn stat_strategy() -> impl Strategy<Value = Statistic> {
    prop_oneof![
        Just(Statistic::Points),
        Just(Statistic::USteps),
        Just(Statistic::Peaks),
        Just(Statistic::Udu),
    ]
}

/// Solves `f = x u(f)` by fixed-point iteration; each pass fixes one more
/// coefficient.
fn fixed_point(u: &TruncSeries, order: usize) -> TruncSeries {
    let x = TruncSeries::x(order);
    let mut f = TruncSeries::zero(order);
    for _ in 0..=order {
        f = &x * &u.compose(&f).unwrap();
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enumeration_agrees_with_closed_form(stat in stat_strategy(), n in 0usize..=4, r in 2u32..=3) {
        let oracle = Oracle::with_cap(OracleCap::default());
        let enumerated = oracle.row(stat, n, r).unwrap();
        let closed: Vec<BigInt> = (0..=n).map(|l| formulas::count(stat, n, l, r).unwrap()).collect();
        prop_assert_eq!(enumerated, closed);
    }

    #[test]
    fn array_agrees_with_recurrence(n in 0usize..=9, r in 2u32..=6) {
        for stat in [Statistic::Points, Statistic::USteps, Statistic::Peaks] {
            let from_array = riordan::statistic_triangle(stat, r, n).unwrap();
            let from_recurrence = verify::recurrence_table(stat, r, n).unwrap();
            prop_assert_eq!(from_array, from_recurrence);
        }
    }

    #[test]
    fn dd_rows_partition_all_colorings(n in 0usize..=10, r in 1u32..=6) {
        let total: BigInt = (0..=n).map(|k| formulas::colored_dd_count(n, k, r).unwrap()).sum();
        prop_assert_eq!(total, formulas::catalan_number(n) * num_traits::pow(BigInt::from(r), n));
    }

    #[test]
    fn weighted_closed_form_matches_array(
        a in nonzero_rational(),
        b in nonzero_rational(),
        n in 0usize..=6,
    ) {
        for stat in [Statistic::Points, Statistic::USteps, Statistic::Peaks] {
            for l in 0..=n {
                prop_assert_eq!(
                    formulas::count_ab(stat, n, l, &a, &b).unwrap(),
                    riordan::statistic_entry_ab(stat, n, l, &a, &b).unwrap()
                );
            }
        }
    }

    #[test]
    fn schroder_relations_hold_for_rational_weights(a in small_rational(), b in small_rational(), n in 1usize..=8) {
        let s = formulas::schroder_ab(n, &a, &b);
        prop_assert_eq!(&s, &formulas::catalan_ab(n, &(&a + &b), &b));
        let m = (&a + &b) * formulas::motzkin_ab(n - 1, &(&a + &b + &b), &((&a + &b) * &b));
        prop_assert_eq!(&s, &m);
        let from_series = series::schroder(&a, &b, n);
        prop_assert_eq!(&s, from_series.coeff(n).unwrap());
    }

    #[test]
    fn composition_is_associative(
        f in series_strategy(6, false),
        g in series_strategy(6, true),
        h in series_strategy(6, true),
    ) {
        let left = f.compose(&g.compose(&h).unwrap()).unwrap();
        let right = f.compose(&g).unwrap().compose(&h).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn reciprocal_inverts(f in series_strategy(8, false)) {
        prop_assume!(f.constant_term() != &int(0));
        let inv = f.reciprocal().unwrap();
        prop_assert_eq!(&f * &inv, TruncSeries::one(8));
    }

    #[test]
    fn lagrange_matches_fixed_point(u0 in nonzero_rational(), u1 in small_rational(), u2 in small_rational(), n in 1usize..=7) {
        let order = 8;
        let u = TruncSeries::new(vec![u0, u1, u2], order);
        let f = fixed_point(&u, order);
        let psi = TruncSeries::x(order);
        prop_assert_eq!(&series::lagrange_coeff(&psi, &u, n).unwrap(), f.coeff(n).unwrap());
        let psi2 = &psi * &psi;
        let f2 = &f * &f;
        prop_assert_eq!(&series::lagrange_coeff(&psi2, &u, n).unwrap(), f2.coeff(n).unwrap());
    }

    #[test]
    fn array_columns_are_applied_monomials(r in 2u32..=5, k in 0usize..=5) {
        let order = 8;
        let array = riordan::peaks_array(r, order).unwrap();
        let monomial = TruncSeries::x(order).pow(k);
        prop_assert_eq!(array.apply(&monomial).unwrap(), array.column(k));
    }

    #[test]
    fn row_sums_match_schroder_numbers(n in 0usize..=12, r in 2u32..=6) {
        let row_sum: BigInt = (0..=n).map(|l| formulas::udu_count(n, l, r).unwrap()).sum();
        prop_assert_eq!(row_sum, formulas::colored_schroder_number(n, r).unwrap());
        let s: BigInt = (0..=n).map(|l| formulas::point_count(n, l, r).unwrap()).sum();
        prop_assert_eq!(s, formulas::colored_schroder_number(n, r).unwrap() * BigInt::from(2 * n + 1));
    }
}

#[test]
fn single_instances_rerun_and_bad_grids_are_rejected() {
    // an impossible grid value is rejected before any instance runs
    let bad = verify::GridOverrides { r_values: Some(vec![1]), ..Default::default() };
    assert!(verify::run_check("cor5.3", &bad).is_err());
    let def = verify::find("cor5.3").unwrap();
    let instance = serde_json::json!({"n": 4, "r": 3, "m": "-1/2"});
    assert!(def.rerun(&instance).unwrap().is_ok());
    let malformed = serde_json::json!({"n": 4, "r": 3, "m": "x"});
    assert!(def.rerun(&malformed).is_err());
}
