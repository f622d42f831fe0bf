use helicon::conservation::PressureLaw;
use helicon::fields::{curl3, divergence, lp_norm};
use helicon::littlewood_paley::{cn_profile, dyadic_block, DyadicPartition};
use helicon::synth::*;
use helicon::{Grid, VectorField};

#[test]
fn shells_are_single_blocks() {
    assert!(in_shell(4, 1) && in_shell(9, 1) && !in_shell(10, 1) && !in_shell(3, 1));
}

#[test]
fn calibration_closes_the_loop() {
    let g = Grid::new(2, 64).unwrap();
    let spec = BesovFieldSpec::new(1.0 / 3.0, 3.0, BesovVariant::InfinityType, 11);
    let f = random_besov_field(g, &spec).unwrap();
    let prof = cn_profile(&f, spec.alpha, spec.p).unwrap();
    for e in &prof.entries {
        assert!((e.compensated - 1.0).abs() < 1e-5, "{e:?}");
    }
    assert!(f.mean().abs() < 1e-15);
}

#[test]
fn deterministic() {
    let g = Grid::new(2, 32).unwrap();
    let spec = BesovFieldSpec::new(0.5, 2.0, BesovVariant::CnType, 3);
    let a = random_besov_field(g, &spec).unwrap();
    let b = random_besov_field(g, &spec).unwrap();
    assert_eq!(a.values(), b.values());
}

#[test]
fn flows_need_3d() {
    let g = Grid::new(2, 16).unwrap();
    assert!(taylor_green(g).is_err());
    assert!(abc_flow(g, 1.0, 1.0, 1.0).is_err());
}

#[test]
fn manufactured_bounds() {
    let g = Grid::new(3, 16).unwrap();
    let law = PressureLaw::new(1.0, 2.0).unwrap();
    let s = manufactured_compressible(
        g,
        0.3,
        law,
        DensityProfile::Random,
        VelocityProfile::Zero,
        5,
    )
    .unwrap();
    assert!(s.rho.min() >= 0.7 - 1e-12 && s.rho.max() <= 1.3 + 1e-12);
    assert!(manufactured_compressible(
        g,
        1.0,
        law,
        DensityProfile::Random,
        VelocityProfile::Zero,
        5
    )
    .is_err());
}

#[test]
fn cn_calibration_follows_reciprocal_law() {
    let g = Grid::new(2, 128).unwrap();
    for seed in 0..3 {
        let spec = BesovFieldSpec::new(1.0 / 3.0, 3.0, BesovVariant::CnType, seed);
        let f = random_besov_field(g, &spec).unwrap();
        for e in &cn_profile(&f, spec.alpha, spec.p).unwrap().entries {
            let want = 1.0 / (1.0 + e.j as f64);
            assert!((e.compensated - want).abs() <= 0.2 * want, "{e:?}");
        }
        assert!(f.imaginary_residue() <= 1e-13);
    }
}

#[test]
fn infinity_calibration_within_band() {
    let g = Grid::new(3, 32).unwrap();
    for seed in 0..3 {
        let spec = BesovFieldSpec::new(0.5, 2.0, BesovVariant::InfinityType, seed);
        let f = random_besov_field(g, &spec).unwrap();
        for e in &cn_profile(&f, spec.alpha, spec.p).unwrap().entries {
            assert!((0.8..=1.2).contains(&e.compensated), "{e:?}");
        }
    }
}

#[test]
fn vector_components_are_calibrated_fields() {
    let g = Grid::new(2, 64).unwrap();
    let spec = BesovFieldSpec::new(0.4, 3.0, BesovVariant::InfinityType, 9);
    let v = random_besov_vector_field(g, &spec, false).unwrap();
    let w = random_besov_vector_field(g, &spec, false).unwrap();
    assert_eq!(v, w);
    assert_ne!(v.component(0).values(), v.component(1).values());
    for c in v.components() {
        for e in &cn_profile(c, spec.alpha, spec.p).unwrap().entries {
            assert!((e.compensated - 1.0).abs() < 1e-5, "{e:?}");
        }
    }
}

#[test]
fn solenoidal_fields_are_divergence_free() {
    for (dim, n) in [(2, 64), (3, 32)] {
        let g = Grid::new(dim, n).unwrap();
        let spec = BesovFieldSpec::new(1.0 / 3.0, 3.0, BesovVariant::CnType, 5);
        let v = random_besov_vector_field(g, &spec, true).unwrap();
        assert!(divergence(&v).max_abs() <= 1e-12);
        let prof: Vec<f64> = dyadic_profile(&v, spec.alpha, spec.p);
        for (j, c) in prof.iter().enumerate() {
            let want = 1.0 / (1.0 + j as f64);
            assert!((c - want).abs() <= 0.3 * want, "j = {j}: {c}");
        }
    }
}

/// `2^{jα}‖Δ̇_j v‖_{L^p}` of a vector field, with the block norm taken on `|Δ̇_j v|`.
fn dyadic_profile(v: &VectorField, alpha: f64, p: f64) -> Vec<f64> {
    let part = DyadicPartition::for_grid(v.grid());
    part.blocks()
        .map(|j| {
            let block = v.map(|c| dyadic_block(c, j).unwrap());
            2f64.powf(j as f64 * alpha) * lp_norm(&block, p).unwrap()
        })
        .collect()
}

#[test]
fn curl_lowers_the_exponent_by_one() {
    let g = Grid::new(3, 32).unwrap();
    let alpha = 2.0 / 3.0;
    let spec = BesovFieldSpec::new(alpha, 3.0, BesovVariant::InfinityType, 1);
    let v = random_besov_vector_field(g, &spec, true).unwrap();
    let w = curl3(&v).unwrap();
    let prof = dyadic_profile(&w, alpha - 1.0, 3.0);
    let mean = prof.iter().sum::<f64>() / prof.len() as f64;
    for c in &prof {
        assert!((c - mean).abs() <= 0.3 * mean, "{prof:?}");
    }
}

#[test]
fn exact_flows() {
    let g = Grid::new(3, 16).unwrap();
    let tg = taylor_green(g).unwrap();
    assert!(divergence(&tg).max_abs() <= 1e-12);
    assert_eq!(abc_flow(g, 0.0, 0.0, 0.0).unwrap().max_abs(), 0.0);
    let v = abc_flow(g, 1.0, 0.7, 0.4).unwrap();
    assert!(curl3(&v).unwrap().sub(&v).unwrap().max_abs() <= 1e-12);
}

#[test]
fn manufactured_state_brackets_density() {
    let g = Grid::new(3, 16).unwrap();
    let law = PressureLaw::isentropic(5.0 / 3.0).unwrap();
    let flat = manufactured_compressible(
        g,
        0.0,
        law,
        DensityProfile::Random,
        VelocityProfile::Zero,
        0,
    )
    .unwrap();
    assert!(flat.rho.values().iter().all(|r| *r == 1.0));
    for seed in 0..50 {
        let s = manufactured_compressible(
            g,
            0.3,
            law,
            DensityProfile::Random,
            VelocityProfile::RandomSolenoidal,
            seed,
        )
        .unwrap();
        let (c1, c2) = s.bounds;
        assert!(c1 <= s.rho.min() + 1e-12 && s.rho.max() <= c2 + 1e-12);
        assert!(s.rho.min() >= 0.7 - 1e-12);
        assert!(divergence(&s.v).max_abs() <= 1e-12);
    }
}
