//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use common::{oracle_normalize, pick, random_fp, random_word, rng};
use rand::Rng;
use upg_core::affine::{enumerate_valid, phi_evaluate, surjection_certificate, validate_hw};
use upg_core::chw::{
    dihedral_image, embed, infinite_order_spotcheck, normalize, relator, relator_check, SpotCheck,
};
use upg_core::free_product::from_free_generators;
use upg_core::group::check_laws;
use upg_core::padic::{power_valuation_check, powerful_certificate, unique_root_property_check};
use upg_core::{
    ball, search_witness, two_up_report, verify_witness, FiniteSubset, Gn, GnElement, GroupContext,
    Integers, PadicMatrix, SearchParams, CHW2_WITNESS,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:?}, limit {limit:?}"))
}

fn relator_suite() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in 1..=6 {
        let report = relator_check(n);
        ensure(report.passed(), || {
            format!("n = {n}: {:?}", report.failures)
        })?;
        checked += report.checked;
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("{checked} relators reduce to the identity"))
}

fn normal_form_soundness() -> Outcome {
    let ctx = Gn::new(3);
    let b = ball(&ctx, 6);
    let mut r = rng(2);
    for _ in 0..10_000 {
        let (x, y, z) = (
            pick(&mut r, b.elements()),
            pick(&mut r, b.elements()),
            pick(&mut r, b.elements()),
        );
        check_laws(&ctx, x, y, z)?;
    }
    for _ in 0..1000 {
        let n = r.gen_range(1..=4);
        let len = r.gen_range(0..=12);
        let w = random_word(&mut r, n, len);
        let fast = normalize(&w, n).map_err(|e| e.to_string())?;
        ensure(fast == oracle_normalize(&w, n), || {
            format!("oracle disagrees on {w}")
        })?;
    }
    Ok(format!(
        "10000 triples from a ball of {} elements; 1000 oracle words",
        b.len()
    ))
}

fn squares_are_nontrivial() -> Outcome {
    let mut r = rng(3);
    let mut done = 0;
    while done < 1000 {
        let n = r.gen_range(1..=5);
        let a: Vec<i64> = (0..n).map(|_| r.gen_range(-9..=9)).collect();
        let Some(i) = a.iter().position(|&x| x != 0) else {
            continue;
        };
        let g = GnElement::from_squares(a.clone());
        let d = dihedral_image(&g, i + 1).map_err(|e| e.to_string())?;
        ensure(
            d.z_power == 2 * a[i] && !d.b_flag && !g.is_identity(),
            || format!("{g} has dihedral image {d:?}"),
        )?;
        done += 1;
    }
    for n in 1..=5 {
        let ctx = Gn::new(n);
        for i in 1..=n {
            for j in 1..=n {
                let (si, sj) = (
                    ctx.pow(&ctx.generators()[i - 1], 2),
                    ctx.pow(&ctx.generators()[j - 1], 2),
                );
                ensure(ctx.multiply(&si, &sj) == ctx.multiply(&sj, &si), || {
                    format!("x{i}^2 and x{j}^2 do not commute in G_{n}")
                })?;
            }
        }
    }
    Ok("1000 nonzero square vectors detected by the dihedral image".into())
}

fn free_product_structure() -> Outcome {
    let mut r = rng(4);
    for _ in 0..1000 {
        let n = r.gen_range(2..=5);
        let (a, b) = (random_fp(&mut r, n, 0..10), random_fp(&mut r, n, 0..10));
        let ab = a.multiply(&b).map_err(|e| e.to_string())?;
        ensure(ab.parity() == (a.parity() + b.parity()) % 2, || {
            format!("parity of {a} * {b}")
        })?;
    }
    let mut even = 0;
    while even < 1000 {
        let n = r.gen_range(2..=5);
        let w = random_fp(&mut r, n, 0..14);
        if w.parity() != 0 {
            continue;
        }
        let f = w.to_free_generators().map_err(|e| e.to_string())?;
        ensure(from_free_generators(&f) == w, || {
            format!("roundtrip of {w} via {f}")
        })?;
        even += 1;
    }
    for _ in 0..1000 {
        let n = r.gen_range(2..=5);
        let w = random_fp(&mut r, n, 1..12);
        let (core, _) = w.cyclically_reduce();
        let order_two =
            !w.is_identity() && w.multiply(&w).map_err(|e| e.to_string())?.is_identity();
        ensure(w.is_torsion() == (core.len() == 1), || {
            format!("torsion test on {w}")
        })?;
        ensure(w.is_torsion() == order_two, || {
            format!("{w} torsion but not of order two")
        })?;
    }
    Ok("parity, 1000 even-word roundtrips, torsion classification".into())
}

fn infinite_order() -> Outcome {
    let ctx = Gn::new(4);
    let mut r = rng(5);
    let mut done = 0;
    while done < 1000 {
        let g = ctx
            .normalize(&random_word(&mut r, 4, 6))
            .map_err(|e| e.to_string())?;
        if g.is_identity() {
            continue;
        }
        match infinite_order_spotcheck(&g, 12).map_err(|e| e.to_string())? {
            SpotCheck::Pass { .. } => done += 1,
            SpotCheck::Torsion { k } => return Err(format!("{g}^{k} = 1")),
        }
    }
    Ok("1000 nontrivial elements of G_4 with g^k != 1 for k <= 12".into())
}

fn embedding() -> Outcome {
    let small = Gn::new(2);
    let b = ball(&small, 4);
    let mut images = HashSet::new();
    for g in b.elements() {
        let img = embed(g, 4).map_err(|e| e.to_string())?;
        ensure(images.insert(img.canonical_key()), || {
            format!("{g} collides")
        })?;
    }
    for g in b.elements() {
        for h in b.elements().iter().step_by(7) {
            let lhs = embed(&small.multiply(g, h), 4).map_err(|e| e.to_string())?;
            let rhs = embed(g, 4)
                .and_then(|x| x.multiply(&embed(h, 4)?))
                .map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || {
                format!("embed not multiplicative on {g}, {h}")
            })?;
        }
    }
    Ok(format!(
        "injective on the {}-element radius-4 ball",
        b.len()
    ))
}

fn hw_dimension_three() -> Outcome {
    let start = Instant::now();
    let all = enumerate_valid(3).map_err(|e| e.to_string())?;
    ensure(!all.is_empty(), || "no valid datum".into())?;
    let g2 = Gn::new(2);
    for data in &all {
        let report = validate_hw(data);
        ensure(
            report.is_valid() && report.parity_ok() && report.torsion_witness.is_none(),
            || format!("{:?}", report.failures),
        )?;
        let cert = surjection_certificate(data).map_err(|e| e.to_string())?;
        let ctx = data.group();
        let p2 = ctx.multiply(&cert.p, &cert.p);
        let e3 = data.unit_translation(3);
        ensure(
            p2 == if cert.sign > 0 {
                e3.clone()
            } else {
                e3.inverse()
            },
            || format!("P^2 = {p2}"),
        )?;
        for (i, j) in [(1, 2), (2, 1)] {
            let rel = g2.normalize(&relator(i, j)).map_err(|e| e.to_string())?;
            let img = phi_evaluate(data, &rel).map_err(|e| e.to_string())?;
            ensure(img.is_identity(), || {
                format!("relator ({i},{j}) maps to {img}")
            })?;
        }
        let mut seen = HashSet::new();
        for a1 in -6..=6 {
            for a2 in -6..=6 {
                let img = phi_evaluate(data, &GnElement::from_squares(vec![a1, a2]))
                    .map_err(|e| e.to_string())?;
                ensure(seen.insert(img), || {
                    format!("A_2 not injective at ({a1},{a2})")
                })?;
            }
        }
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("{} valid data out of 64, all certified", all.len()))
}

fn nonunique_product_witness() -> Outcome {
    let ctx = Gn::new(2);
    let start = Instant::now();
    let report = verify_witness(&ctx, CHW2_WITNESS).map_err(|e| e.to_string())?;
    ensure(report.unique_count == 0 && report.total == 196, || {
        format!("{report:?}")
    })?;
    within(Duration::from_secs(1), start)?;

    let params = SearchParams::default();
    let outcome = search_witness(&ctx, &params).map_err(|e| e.to_string())?;
    let set = outcome.witness.ok_or_else(|| {
        format!(
            "seed {} found nothing, best {:?}",
            params.seed, outcome.best_unique_count
        )
    })?;
    let radius = ball(&ctx, params.radius);
    ensure(
        set.len() == 14 && set.elements().iter().all(|e| radius.contains(e)),
        || "witness has wrong size or leaves the ball".into(),
    )?;
    let bundled = upg_core::load_subset(&ctx, CHW2_WITNESS).map_err(|e| e.to_string())?;
    let as_set = |s: &FiniteSubset<GnElement>| s.elements().iter().cloned().collect::<HashSet<_>>();
    ensure(as_set(&set) == as_set(&bundled), || {
        "search differs from the bundled file".into()
    })?;
    Ok(format!(
        "|S| = 14, unique_count 0; seed {} restart {} reproduces the bundled file",
        params.seed,
        outcome.restart.unwrap_or(0)
    ))
}

fn unique_roots() -> Outcome {
    let mut r = rng(9);
    let mut configs = 0;
    for p in [3u64, 5] {
        for dim in [1, 2] {
            for m in [2, p, 2 * p, p * p] {
                let report = unique_root_property_check(p, dim, m, 12, 100, &mut r)
                    .map_err(|e| e.to_string())?;
                ensure(report.passed(), || format!("{report:?}"))?;
                configs += 1;
            }
            for _ in 0..100 {
                let a = PadicMatrix::random_congruence_element(p, 12, dim, &mut r)
                    .map_err(|e| e.to_string())?;
                let check = power_valuation_check(&a).map_err(|e| e.to_string())?;
                ensure(check.passed, || format!("power valuation fails on {a}"))?;
            }
        }
    }
    Ok(format!(
        "{configs} configurations x 100 roots; 400 valuation checks"
    ))
}

fn powerful() -> Outcome {
    let (p, k) = (3, 12);
    let mut r = rng(10);
    for _ in 0..100 {
        let a =
            PadicMatrix::random_congruence_element(p, k, 2, &mut r).map_err(|e| e.to_string())?;
        let b =
            PadicMatrix::random_congruence_element(p, k, 2, &mut r).map_err(|e| e.to_string())?;
        let cert = powerful_certificate(&a, &b).map_err(|e| e.to_string())?;
        let id = PadicMatrix::identity(p, k, 2).map_err(|e| e.to_string())?;
        ensure(cert.commutator.eq_at(&id, 2), || {
            "commutator not 1 mod 9".into()
        })?;
        ensure(cert.root.eq_at(&id, 1), || "root not 1 mod 3".into())?;
        let cube = cert.root.pow(3).map_err(|e| e.to_string())?;
        ensure(cube.eq_at(&cert.commutator, cert.root_precision), || {
            "D^3 != C".into()
        })?;
    }
    let a = PadicMatrix::elementary(p, k, 2, 0, 1, 3).map_err(|e| e.to_string())?;
    let b = PadicMatrix::elementary(p, k, 2, 1, 0, 3).map_err(|e| e.to_string())?;
    let c = a.commutator(&b).map_err(|e| e.to_string())?;
    ensure(c.signed_rows() == vec![vec![91, -27], vec![27, -8]], || {
        format!("worked pair gives {c}")
    })?;
    Ok("100 random pairs certified; worked commutator [[91,-27],[27,-8]]".into())
}

fn two_unique_products() -> Outcome {
    let mut r = rng(11);
    let mut done = 0;
    while done < 1000 {
        let x = FiniteSubset::dedup(
            (0..r.gen_range(1..8))
                .map(|_| r.gen_range(-30..30))
                .collect(),
        );
        let y = FiniteSubset::dedup(
            (0..r.gen_range(1..8))
                .map(|_| r.gen_range(-30..30))
                .collect(),
        );
        if x.len() + y.len() < 3 {
            continue;
        }
        let report = two_up_report(&Integers, &x, &y).map_err(|e| e.to_string())?;
        ensure(report.unique_count >= 2, || format!("{x:?} + {y:?}"))?;
        done += 1;
    }
    Ok("1000 random pairs in Z each have at least two unique products".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("relator suite", relator_suite),
        ("normal-form soundness", normal_form_soundness),
        ("nonzero squares are nontrivial", squares_are_nontrivial),
        ("free product of order-two groups", free_product_structure),
        ("infinite order spot-check", infinite_order),
        ("embedding G_2 -> G_4", embedding),
        ("HW dimension 3", hw_dimension_three),
        (
            "nonunique-product witness in G_2",
            nonunique_product_witness,
        ),
        ("unique roots at finite precision", unique_roots),
        ("powerful certificate", powerful),
        ("two unique products in Z", two_unique_products),
    ];
    let mut failed = 0;
    for (index, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({took:.2?})", index + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({took:.2?})", index + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
