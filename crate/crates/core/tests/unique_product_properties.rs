mod common;

use common::{pick, rng};
use rand::Rng;
use upg_core::{
    ball, check_square, product_report, product_report_parallel, search_witness, two_up_report,
    verify_witness, FiniteSubset, Gn, GroupContext, Integers, SearchParams, Strategy, CHW2_WITNESS,
};

#[test]
fn bundled_witness_has_no_unique_product() {
    let report = verify_witness(&Gn::new(2), CHW2_WITNESS).unwrap();
    assert_eq!(report.unique_count, 0);
    assert_eq!(report.total, 196);
}

#[test]
fn unique_count_is_translation_invariant() {
    let ctx = Gn::new(2);
    let s = upg_core::load_subset(&ctx, CHW2_WITNESS).unwrap();
    let b = ball(&ctx, 3);
    let mut r = rng(51);
    let x = FiniteSubset::new(&ctx, b.elements()[..9].to_vec()).unwrap();
    let y = FiniteSubset::new(&ctx, b.elements()[5..17].to_vec()).unwrap();
    let base = product_report(&ctx, &x, &y).unwrap().unique_count;
    for _ in 0..50 {
        let g = pick(&mut r, b.elements()).clone();
        let gx = x.map(|e| ctx.multiply(&g, e));
        let yg = y.map(|e| ctx.multiply(e, &g));
        assert_eq!(product_report(&ctx, &gx, &yg).unwrap().unique_count, base);
        let gs = s.map(|e| ctx.multiply(&g, e));
        let sg = s.map(|e| ctx.multiply(e, &g));
        assert_eq!(product_report(&ctx, &gs, &sg).unwrap().unique_count, 0);
    }
}

#[test]
fn multiplicities_sum_to_the_product_size() {
    let ctx = Gn::new(3);
    let b = ball(&ctx, 2);
    let s = FiniteSubset::new(&ctx, b.elements().to_vec()).unwrap();
    let report = check_square(&ctx, &s).unwrap();
    assert_eq!(report.multiplicity.values().sum::<usize>(), report.total);
    assert_eq!(report, product_report_parallel(&ctx, &s, &s, 4).unwrap());
}

#[test]
fn integers_always_have_two_unique_products() {
    let mut r = rng(52);
    for _ in 0..500 {
        let xs: Vec<i64> = (0..r.gen_range(1..6))
            .map(|_| r.gen_range(-20..20))
            .collect();
        let ys: Vec<i64> = (0..r.gen_range(1..6))
            .map(|_| r.gen_range(-20..20))
            .collect();
        let x = FiniteSubset::dedup(xs);
        let y = FiniteSubset::dedup(ys);
        if x.len() + y.len() < 3 {
            assert!(two_up_report(&Integers, &x, &y).is_err());
            continue;
        }
        assert!(two_up_report(&Integers, &x, &y).unwrap().at_least_two);
    }
}

#[test]
fn search_is_independent_of_worker_count() {
    let ctx = Gn::new(2);
    let params = SearchParams {
        size: 6,
        radius: 2,
        restarts: 32,
        max_moves: 300,
        ..SearchParams::default()
    };
    let one = search_witness(&ctx, &params).unwrap();
    let four = search_witness(
        &ctx,
        &SearchParams {
            workers: 4,
            ..params.clone()
        },
    )
    .unwrap();
    assert_eq!(one.witness, four.witness);
    assert_eq!(one.best_unique_count, four.best_unique_count);
    assert_eq!(one.restarts_run, four.restarts_run);
}

#[test]
fn small_balls_of_g2_hold_no_small_witness() {
    let ctx = Gn::new(2);
    let params = SearchParams {
        size: 4,
        radius: 2,
        strategy: Strategy::ExhaustiveSmall,
        max_moves: usize::MAX,
        ..SearchParams::default()
    };
    let out = search_witness(&ctx, &params).unwrap();
    assert!(out.witness.is_none() && out.complete);
    assert!(out.best_unique_count.unwrap() > 0);
}

#[test]
fn radius_three_of_g2_has_no_symmetric_witness() {
    // every inverse-closed 14-set avoiding the identity: 7 of 20 inverse pairs
    let params = SearchParams {
        symmetric: true,
        strategy: Strategy::ExhaustiveSmall,
        max_moves: usize::MAX,
        ..SearchParams::default()
    };
    let out = search_witness(&Gn::new(2), &params).unwrap();
    assert!(out.witness.is_none() && out.complete);
    assert_eq!(out.evaluations, 77_520);
    assert_eq!(out.best_unique_count, Some(4));
}

#[test]
fn truncated_exhaustive_search_is_not_complete() {
    let params = SearchParams {
        strategy: Strategy::ExhaustiveSmall,
        max_moves: 10,
        ..SearchParams::default()
    };
    let out = search_witness(&Gn::new(2), &params).unwrap();
    assert_eq!(out.evaluations, 10);
    assert!(!out.complete);
}
