use helicon::fit::Trend;
use helicon::littlewood_paley::*;
use helicon::synth::{random_besov_field, BesovFieldSpec, BesovVariant};
use helicon::{Error, Grid, ScalarField};

#[test]
fn phi_support() {
    assert_eq!(phi(0.75), 0.0);
    assert_eq!(phi(0.5), 0.0);
    assert_eq!(phi(2.0), 0.0);
    assert_eq!(phi(2.5), 0.0);
    assert_eq!(phi(1.0), 1.0);
    assert!(phi(0.8) > 0.0 && phi(1.9) > 0.0);
}

#[test]
fn block_range() {
    let g = Grid::new(2, 64).unwrap();
    let p = DyadicPartition::for_grid(g);
    assert_eq!((p.j_min(), p.j_max()), (0, 4));
    let f = ScalarField::zeros(g);
    match dyadic_block(&f, 5) {
        Err(Error::BlockRange {
            j: 5,
            j_min: 0,
            j_max: 4,
        }) => {}
        other => panic!("{other:?}"),
    }
}

#[test]
fn pure_power_is_single_block() {
    let g = Grid::new(2, 64).unwrap();
    let f = ScalarField::from_fn(g, |x| (8.0 * x[0]).sin());
    assert!(dyadic_block(&f, 3).unwrap().sub(&f).unwrap().max_abs() < 1e-12);
    for j in [1, 2, 4] {
        assert!(dyadic_block(&f, j).unwrap().max_abs() < 1e-12);
    }
}

#[test]
fn constant_has_no_blocks() {
    let g = Grid::new(3, 16).unwrap();
    let f = ScalarField::constant(g, 3.0);
    for (_, b) in block_norms(&f, 2.0).unwrap() {
        assert!(b < 1e-12);
    }
}

#[test]
fn single_shell_profile_is_insufficient() {
    let g = Grid::new(2, 64).unwrap();
    let f = ScalarField::from_fn(g, |x| (4.0 * x[1]).cos());
    let prof = cn_profile(&f, 0.5, 2.0).unwrap();
    assert!(matches!(
        prof.verdict,
        ProfileVerdict::InsufficientShells { nonzero: 1 }
    ));
}

#[test]
fn bernstein_rejects_b_below_a() {
    let g = Grid::new(2, 16).unwrap();
    assert!(bernstein_check(&ScalarField::zeros(g), 1, 3.0, 2.0).is_err());
    assert_eq!(
        bernstein_check(&ScalarField::zeros(g), 1, 2.0, 3.0).unwrap(),
        (0.0, 0.0)
    );
}

#[test]
fn directions_are_unit() {
    let d = sample_directions(3, 1);
    assert_eq!(d.len(), 9);
    for v in d {
        let r: f64 = v.iter().map(|x| x * x).sum();
        assert!((r - 1.0).abs() < 1e-14);
    }
}

#[test]
fn single_shell_seminorm() {
    let g = Grid::new(2, 64).unwrap();
    let f = ScalarField::from_fn(g, |x| (8.0 * x[0]).sin());
    for p in [1.0, 2.0, 3.0, f64::INFINITY] {
        let params = BesovParams::new(1.0 / 3.0, p, SummationIndex::Infinity).unwrap();
        let want = 2f64.powf(3.0 / 3.0) * helicon::fields::lp_norm(&f, p).unwrap();
        let got = besov_seminorm(&f, &params).unwrap();
        assert!(
            (got - want).abs() < 1e-10 * want,
            "p = {p}: {got} vs {want}"
        );
    }
}

#[test]
fn summation_index_is_monotone() {
    let g = Grid::new(2, 64).unwrap();
    for seed in 0..5 {
        let spec = BesovFieldSpec::new(0.4, 2.0, BesovVariant::CnType, seed);
        let f = random_besov_field(g, &spec).unwrap();
        let norm = |q| besov_seminorm(&f, &BesovParams::new(0.4, 2.0, q).unwrap()).unwrap();
        let seq = [
            norm(SummationIndex::Finite(1.0)),
            norm(SummationIndex::Finite(2.0)),
            norm(SummationIndex::Finite(3.0)),
            norm(SummationIndex::Infinity),
        ];
        assert!(seq.windows(2).all(|w| w[0] >= w[1]), "{seq:?}");
    }
}

#[test]
fn profile_trend_follows_variant() {
    let g = Grid::new(2, 128).unwrap();
    let flat = random_besov_field(
        g,
        &BesovFieldSpec::new(1.0 / 3.0, 3.0, BesovVariant::InfinityType, 4),
    )
    .unwrap();
    let decaying = random_besov_field(
        g,
        &BesovFieldSpec::new(1.0 / 3.0, 3.0, BesovVariant::CnType, 4),
    )
    .unwrap();
    assert_eq!(
        cn_profile(&flat, 1.0 / 3.0, 3.0).unwrap().trend(),
        Some(Trend::Flat)
    );
    assert_eq!(
        cn_profile(&decaying, 1.0 / 3.0, 3.0).unwrap().trend(),
        Some(Trend::Decaying)
    );
}

#[test]
fn bernstein_equality_at_equal_exponents() {
    let g = Grid::new(2, 64).unwrap();
    let f = ScalarField::from_fn(g, |x| (4.0 * x[0]).sin());
    let (lhs, rhs) = bernstein_check(&f, 2, 3.0, 3.0).unwrap();
    assert!((lhs - rhs).abs() < 1e-14 * rhs);
}

#[test]
fn bernstein_two_to_infinity_over_seeds() {
    let g = Grid::new(2, 64).unwrap();
    for seed in 0..100 {
        let j = 1 + (seed % 4) as i32;
        let spec =
            BesovFieldSpec::new(0.5, 2.0, BesovVariant::InfinityType, seed).with_shells(j, j);
        let f = random_besov_field(g, &spec).unwrap();
        let (lhs, rhs) = bernstein_check(&f, j, 2.0, f64::INFINITY).unwrap();
        assert!(
            lhs > 0.0 && lhs <= rhs * (1.0 + 1e-6),
            "seed {seed}: {lhs} > {rhs}"
        );
    }
}

#[test]
fn product_check_zero_and_constant() {
    let g = Grid::new(2, 64).unwrap();
    let h = random_besov_field(
        g,
        &BesovFieldSpec::new(1.0 / 3.0, 3.0, BesovVariant::InfinityType, 2),
    )
    .unwrap();
    let zero = ScalarField::zeros(g);
    assert_eq!(
        product_besov_check(&h, &zero, 1.0 / 3.0, 3.0).unwrap(),
        (0.0, 0.0)
    );
    let c = ScalarField::constant(g, -2.5);
    let (lhs, rhs) = product_besov_check(&c, &h, 1.0 / 3.0, 3.0).unwrap();
    let semi = difference_seminorm(&h, 1.0 / 3.0, 3.0).unwrap();
    assert!((lhs - 2.5 * semi).abs() < 1e-10 * lhs);
    assert!(lhs <= rhs * (1.0 + 1e-12));
}

#[test]
fn product_constant_is_order_one() {
    let g = Grid::new(2, 64).unwrap();
    let alpha = 1.0 / 3.0;
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let f = random_besov_field(
            g,
            &BesovFieldSpec::new(alpha, 3.0, BesovVariant::InfinityType, 2 * seed),
        )
        .unwrap();
        let h = random_besov_field(
            g,
            &BesovFieldSpec::new(alpha, 3.0, BesovVariant::InfinityType, 2 * seed + 1),
        )
        .unwrap();
        let (lhs, rhs) = product_besov_check(&f, &h, alpha, 3.0).unwrap();
        worst = worst.max(lhs / rhs);
    }
    assert!(worst <= 4.0, "fitted constant {worst}");
}
