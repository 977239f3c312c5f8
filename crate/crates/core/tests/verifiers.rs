use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use locarray::locating::{
    generate_la, rho, verify_ca2, verify_da11, verify_la, Interaction, TestArray,
};
use locarray::oracle::verify_by_table1;
use locarray::VariantTag;

fn random_array(rng: &mut ChaCha8Rng) -> TestArray {
    let n = rng.gen_range(1..=6);
    let k = rng.gen_range(1..=6);
    let v = rng.gen_range(2..=4);
    // Small alphabets in practice, so collisions and empty classes both show up.
    let used = rng.gen_range(1..=v) as u32;
    let cells = (0..n * k).map(|_| rng.gen_range(0..used)).collect();
    TestArray::new(n, k, v, cells).unwrap()
}

#[test]
fn fingerprint_verifier_matches_literal_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let mut seen_ok = 0;
    let mut seen_bad = 0;
    for _ in 0..500 {
        let a = random_array(&mut rng);
        for variant in VariantTag::ALL {
            let fast = verify_la(&a, variant).is_ok();
            assert_eq!(
                fast,
                verify_by_table1(&a, variant).is_ok(),
                "{a:?} {variant}"
            );
            if fast {
                seen_ok += 1;
            } else {
                seen_bad += 1;
            }
        }
    }
    assert!(
        seen_ok > 50 && seen_bad > 50,
        "{seen_ok} ok / {seen_bad} violated"
    );
}

#[test]
fn verifiers_agree_on_generated_arrays() {
    for n in 1..=8 {
        for variant in VariantTag::ALL {
            for v in 2..=variant.max_symbols(n) {
                if let Ok(a) = generate_la(n, v, variant, 16) {
                    assert!(
                        verify_by_table1(&a, variant).is_ok(),
                        "N={n} v={v} {variant}"
                    );
                }
            }
        }
    }
}

#[test]
fn implications_between_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..2000 {
        let a = random_array(&mut rng);
        let ok = |t| verify_la(&a, t).is_ok();
        if verify_da11(&a).is_ok() {
            assert!(ok(VariantTag::BAR_ONE));
        }
        if ok(VariantTag::BAR_ONE) {
            assert!(ok(VariantTag::ONE_ONE));
        }
        assert_eq!(ok(VariantTag::BAR_BAR), ok(VariantTag::BAR_ONE), "{a:?}");
        if a.symbols() >= 3 && ok(VariantTag::ONE_ONE) {
            assert!(ok(VariantTag::ONE_BAR));
        }
    }
}

#[test]
fn counterexamples_are_real() {
    use locarray::locating::Verdict;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let a = random_array(&mut rng);
        let rows_of = |c: usize, s: u32| rho(&a, &Interaction::single(c, s)).unwrap();
        for variant in VariantTag::ALL {
            match verify_la(&a, variant) {
                Verdict::Ok => {}
                Verdict::EqualClasses {
                    first,
                    second,
                    rows,
                } => {
                    assert_ne!(first, second);
                    assert_eq!(rows_of(first.column, first.symbol), rows);
                    assert_eq!(rows_of(second.column, second.symbol), rows);
                }
                Verdict::EmptyClass { level } => {
                    assert!(variant.d_barred);
                    assert!(rows_of(level.column, level.symbol).is_empty());
                }
                Verdict::FullClass { level } => {
                    assert!(variant.t_barred);
                    assert_eq!(rows_of(level.column, level.symbol).len(), a.rows());
                }
                other => panic!("unexpected verdict {other:?}"),
            }
        }
        match verify_ca2(&a) {
            Verdict::Ok => {}
            Verdict::EmptyClass { level } => {
                assert!(rows_of(level.column, level.symbol).is_empty())
            }
            Verdict::DisjointClasses { first, second } => {
                let pair = Interaction::new(vec![
                    (first.column, first.symbol),
                    (second.column, second.symbol),
                ])
                .unwrap();
                assert!(rho(&a, &pair).unwrap().is_empty());
            }
            other => panic!("unexpected verdict {other:?}"),
        }
        if let Verdict::NestedClasses { inner, outer } = verify_da11(&a) {
            assert_ne!(inner, outer);
            assert!(
                rows_of(inner.column, inner.symbol).is_subset(&rows_of(outer.column, outer.symbol))
            );
        }
    }
}

proptest! {
    #[test]
    fn permuting_rows_or_columns_keeps_verdicts(
        seed in any::<u64>(),
        shift in 0usize..6,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_array(&mut rng);
        let (n, k) = (a.rows(), a.columns());
        let rows: Vec<Vec<u32>> = (0..n).map(|r| a.row((r + shift) % n).to_vec()).collect();
        let b = TestArray::from_rows(a.symbols(), &rows).unwrap();
        let cols: Vec<Vec<u32>> = (0..k).rev().map(|c| a.column(c)).collect();
        let c = TestArray::from_columns(a.symbols(), &cols).unwrap();
        for variant in VariantTag::ALL {
            let want = verify_la(&a, variant).is_ok();
            prop_assert_eq!(verify_la(&b, variant).is_ok(), want);
            prop_assert_eq!(verify_la(&c, variant).is_ok(), want);
        }
        prop_assert_eq!(verify_ca2(&b).is_ok(), verify_ca2(&a).is_ok());
        prop_assert_eq!(verify_da11(&c).is_ok(), verify_da11(&a).is_ok());
    }
}
