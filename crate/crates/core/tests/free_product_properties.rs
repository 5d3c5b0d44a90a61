mod common;

use common::{random_fp, rng};
use rand::Rng;
use upg_core::free_product::from_free_generators;
use upg_core::{C2FreeProduct, FpWord, FreeWord, GroupContext};

#[test]
fn parity_is_a_homomorphism() {
    let mut r = rng(21);
    for _ in 0..1000 {
        let n = r.gen_range(2..=5);
        let (a, b) = (random_fp(&mut r, n, 0..8), random_fp(&mut r, n, 0..8));
        assert_eq!(
            a.multiply(&b).unwrap().parity(),
            (a.parity() + b.parity()) % 2
        );
    }
}

#[test]
fn free_generator_roundtrips() {
    let mut r = rng(22);
    let mut done = 0;
    while done < 1000 {
        let n = r.gen_range(2..=5);
        let w = random_fp(&mut r, n, 0..12);
        if w.parity() != 0 {
            assert!(w.to_free_generators().is_err());
            continue;
        }
        let f = w.to_free_generators().unwrap();
        assert_eq!(from_free_generators(&f), w);
        assert_eq!(f.to_free_product().to_free_generators().unwrap(), f);
        done += 1;
    }
}

#[test]
fn free_words_roundtrip_through_the_free_product() {
    let mut r = rng(23);
    for _ in 0..500 {
        let n = r.gen_range(2..=5);
        let syllables: Vec<(usize, i64)> = (0..r.gen_range(0..6))
            .map(|_| (r.gen_range(1..n), r.gen_range(-3..=3)))
            .collect();
        let f = FreeWord::new(syllables, n).unwrap();
        assert_eq!(f.to_free_product().to_free_generators().unwrap(), f);
    }
}

#[test]
fn torsion_is_exactly_conjugates_of_letters() {
    let mut r = rng(24);
    for _ in 0..1000 {
        let n = r.gen_range(2..=4);
        let w = random_fp(&mut r, n, 1..10);
        let (core, conj) = w.cyclically_reduce();
        assert_eq!(
            conj.multiply(&core)
                .unwrap()
                .multiply(&conj.invert())
                .unwrap(),
            w
        );
        assert_eq!(w.is_torsion(), core.len() == 1);
        if w.is_torsion() {
            assert!(w.multiply(&w).unwrap().is_identity());
        } else if !w.is_identity() {
            for k in 2..=6 {
                assert!(!w.pow(k).is_identity());
            }
        }
    }
}

#[test]
fn context_laws_and_keys() {
    let ctx = C2FreeProduct::new(3);
    let mut r = rng(25);
    for _ in 0..300 {
        let (a, b, c) = (
            random_fp(&mut r, 3, 0..6),
            random_fp(&mut r, 3, 0..6),
            random_fp(&mut r, 3, 0..6),
        );
        upg_core::group::check_laws(&ctx, &a, &b, &c).unwrap();
        let word = ctx.word_for(&a).unwrap();
        assert_eq!(ctx.evaluate(&word).unwrap(), a);
    }
    assert_eq!(
        ctx.canonical_key(&FpWord::parse("x1 x2 x2 x3", 3).unwrap()),
        "fp:1.3"
    );
}
