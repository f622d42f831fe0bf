use helicon::commutator::*;
use helicon::fields::{curl3, Grid};
use helicon::mollify::KernelKind;
use helicon::scan::{geometric_scales, ScaleScan};
use helicon::synth::abc_flow;
use helicon::{ScalarField, VectorField};

#[test]
fn constant_factor_commutes() {
    let g = Grid::new(2, 32).unwrap();
    let f = ScalarField::from_fn(g, |x| {
        (3.0 * x[0]).sin() + (5.0 * x[1]).cos() + (16.0 * x[0]).cos()
    });
    let c = ScalarField::constant(g, 1.7);
    let r = cet_commutator(&f, &c, 0.4).unwrap();
    assert!(r.norm(f64::INFINITY).unwrap() < 1e-12);
}

#[test]
fn symmetric() {
    let g = Grid::new(2, 32).unwrap();
    let f = ScalarField::from_fn(g, |x| (3.0 * x[0]).sin() * x[1].cos());
    let h = ScalarField::from_fn(g, |x| (2.0 * x[1] - x[0]).cos());
    let a = cet_commutator(&f, &h, 0.5).unwrap().field;
    let b = cet_commutator(&h, &f, 0.5).unwrap().field;
    assert!(a.sub(&b).unwrap().max_abs() < 1e-15);
}

#[test]
fn scan_needs_four_scales() {
    let g = Grid::new(2, 32).unwrap();
    let f = ScalarField::zeros(g);
    assert!(
        commutator_scaling_scan(&f, &f, &[0.5, 0.4, 0.3], 2.0, KernelKind::Lattice, None).is_err()
    );
}

#[test]
fn embedding_exponents() {
    assert!(
        (embedded_exponent(3.0, 3.0, 3, EmbeddingCase::OneGradient).unwrap() - 3.0).abs() < 1e-12
    );
    assert!(
        (embedded_exponent(2.0, 2.0, 3, EmbeddingCase::BothGradients).unwrap() - 3.0).abs() < 1e-12
    );
    assert!(embedded_exponent(6.0, 6.0, 3, EmbeddingCase::BothGradients).is_err());
}

#[test]
fn trapezoid_time_norm() {
    let t = [0.0, 0.5, 1.0];
    assert!((time_norm(&t, &[2.0, 2.0, 2.0], 3.0).unwrap() - 2.0).abs() < 1e-14);
    assert_eq!(
        time_norm(&t, &[1.0, -4.0, 2.0], f64::INFINITY).unwrap(),
        4.0
    );
}

#[test]
fn sine_commutator_is_second_order() {
    let g = Grid::new(2, 64).unwrap();
    let f = ScalarField::from_fn(g, |x| x[0].sin());
    let scales = geometric_scales(0.7, 0.8, 11);
    let scan = commutator_scaling_scan(
        &f,
        &f,
        &scales,
        f64::INFINITY,
        KernelKind::Continuum,
        Some(2.0),
    )
    .unwrap();
    assert!(scan.values.iter().all(|v| *v > 0.0));
    let slope = scan.slope().unwrap();
    assert!((slope - 2.0).abs() <= 0.1, "slope {slope}");
}

#[test]
fn commutator_decreases_with_scale() {
    let g = Grid::new(2, 64).unwrap();
    let f = ScalarField::from_fn(g, |x| (3.0 * x[0]).sin() * x[1].cos() + (2.0 * x[1]).sin());
    let h = ScalarField::from_fn(g, |x| (x[0] - 2.0 * x[1]).cos() + (4.0 * x[0]).sin());
    let scan = commutator_scaling_scan(
        &f,
        &h,
        &geometric_scales(0.7, 0.8, 11),
        2.0,
        KernelKind::Continuum,
        None,
    )
    .unwrap();
    assert!(scan.scales[0] / scan.scales[10] >= 9.0);
    assert!(
        scan.values.windows(2).all(|w| w[0] > w[1]),
        "{:?}",
        scan.values
    );
}

#[test]
fn self_cross_product_vanishes() {
    let g = Grid::new(3, 32).unwrap();
    let v = VectorField::from_fn(g, |x| {
        [x[1].sin(), (2.0 * x[2]).cos(), x[0].sin() * x[1].cos()]
    });
    assert!(cross_commutator(&v, &v, 0.5).unwrap().field.max_abs() <= 1e-12);
}

#[test]
fn cross_product_of_single_components() {
    let g = Grid::new(3, 32).unwrap();
    let a = ScalarField::from_fn(g, |x| x[1].sin() + (2.0 * x[2]).cos());
    let b = ScalarField::from_fn(g, |x| (x[0] + x[2]).cos());
    let zero = ScalarField::zeros(g);
    let f = VectorField::new(vec![a.clone(), zero.clone(), zero.clone()]).unwrap();
    let h = VectorField::new(vec![zero.clone(), b.clone(), zero]).unwrap();
    let c = cross_commutator(&f, &h, 0.5).unwrap().field;
    let direct = cet_commutator(&a, &b, 0.5).unwrap().field;
    assert!(c.component(0).max_abs() <= 1e-12);
    assert!(c.component(1).max_abs() <= 1e-12);
    assert!(c.component(2).sub(&direct).unwrap().max_abs() <= 1e-12);
}

#[test]
fn abc_cross_commutator_is_second_order() {
    let g = Grid::new(3, 32).unwrap();
    let v = abc_flow(g, 1.0, 0.8, 0.6).unwrap();
    let w = curl3(&v).unwrap();
    let scales = geometric_scales(0.7, 0.8, 11);
    let values: Vec<f64> = scales
        .iter()
        .map(|&e| {
            cross_commutator_with(&w, &v, e, KernelKind::Continuum)
                .unwrap()
                .norm(2.0)
                .unwrap()
        })
        .collect();
    // ω = v for this flow, so the commutator is pure roundoff.
    assert!(values.iter().all(|x| *x <= 1e-12));
    let u = VectorField::from_fn(g, |x| [x[1].sin(), x[2].cos() * x[0].sin(), x[0].cos()]);
    let values: Vec<f64> = scales
        .iter()
        .map(|&e| {
            cross_commutator_with(&u, &v, e, KernelKind::Continuum)
                .unwrap()
                .norm(2.0)
                .unwrap()
        })
        .collect();
    let slope = ScaleScan::new(&scales, &values, Some(2.0))
        .unwrap()
        .slope()
        .unwrap();
    assert!((slope - 2.0).abs() <= 0.1, "slope {slope}");
}
