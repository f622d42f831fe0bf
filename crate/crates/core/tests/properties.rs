use std::f64::consts::PI;

use helicon::commutator::cet_commutator;
use helicon::conservation::{energy, helicity, sqg_helicity};
use helicon::fields::{
    curl3, derivative, divergence, gradient, inner, leray_project, lp_norm, refine, shift,
    FieldFile, Grid, ScalarField, VectorField,
};
use helicon::littlewood_paley::{dyadic_block, DyadicPartition};
use helicon::mollify::{KernelKind, MollifierKernel};
use proptest::prelude::*;

/// `(wavevector, amplitude, phase)` terms of a trigonometric polynomial.
type Modes = Vec<([i32; 3], f64, f64)>;

const K: i32 = 4;

fn modes(dim: usize) -> impl Strategy<Value = Modes> {
    prop::collection::vec(
        ((-K..=K, -K..=K, -K..=K), -1.0..1.0f64, 0.0..2.0 * PI),
        1..6,
    )
    .prop_map(move |v| {
        v.into_iter()
            .map(|((a, b, c), amp, ph)| ([a, b, if dim == 3 { c } else { 0 }], amp, ph))
            .collect()
    })
}

fn build(grid: Grid, m: &Modes) -> ScalarField {
    ScalarField::from_fn(grid, |x| {
        m.iter()
            .map(|(k, a, ph)| {
                let kx: f64 = (0..3).map(|i| k[i] as f64 * x[i]).sum();
                a * (kx + ph).cos()
            })
            .sum()
    })
}

fn build_vector(grid: Grid, m: &[Modes]) -> VectorField {
    VectorField::new(m.iter().map(|c| build(grid, c)).collect()).unwrap()
}

fn grid2() -> Grid {
    Grid::new(2, 32).unwrap()
}

fn grid3() -> Grid {
    Grid::new(3, 16).unwrap()
}

fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    a.sub(b).unwrap().max_abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_round_trip(m in modes(2)) {
        let f = build(grid2(), &m);
        let back = f.to_spectral().to_physical();
        prop_assert!(max_diff(&f, &back) <= 1e-12);
    }

    #[test]
    fn plancherel(m in modes(3)) {
        let g = grid3();
        let f = build(g, &m);
        let energy_space = lp_norm(&f, 2.0).unwrap().powi(2);
        let sum: f64 = f.coefficients().iter().map(|c| c.norm_sqr()).sum();
        let energy_freq = (2.0 * PI).powi(3) * sum;
        prop_assert!((energy_space - energy_freq).abs() <= 1e-12 * energy_freq.max(1.0));
    }

    #[test]
    fn derivative_commutes_with_shift(m in modes(2), y0 in -3.0..3.0f64, y1 in -3.0..3.0f64) {
        let f = build(grid2(), &m);
        for axis in 0..2 {
            let a = shift(&derivative(&f, axis).unwrap(), &[y0, y1]);
            let b = derivative(&shift(&f, &[y0, y1]), axis).unwrap();
            prop_assert!(max_diff(&a, &b) <= 1e-11);
        }
    }

    #[test]
    fn curl_of_gradient_vanishes(m in modes(3)) {
        let w = curl3(&gradient(&build(grid3(), &m))).unwrap();
        prop_assert!(w.max_abs() <= 1e-10);
    }

    #[test]
    fn divergence_of_curl_vanishes(a in modes(3), b in modes(3), c in modes(3)) {
        let v = build_vector(grid3(), &[a, b, c]);
        prop_assert!(divergence(&curl3(&v).unwrap()).max_abs() <= 1e-10);
    }

    #[test]
    fn leray_projection(a in modes(3), b in modes(3), c in modes(3), s in modes(3)) {
        let g = grid3();
        let v = build_vector(g, &[a, b, c]);
        let pv = leray_project(&v);
        prop_assert!(divergence(&pv).max_abs() <= 1e-11);
        let ppv = leray_project(&pv);
        prop_assert!(ppv.sub(&pv).unwrap().max_abs() <= 1e-12);
        prop_assert!(leray_project(&gradient(&build(g, &s))).max_abs() <= 1e-11);
    }

    #[test]
    fn lp_norm_homogeneity(m in modes(2), c in -5.0..5.0f64) {
        let f = build(grid2(), &m);
        for p in [1.0, 2.0, 3.0, f64::INFINITY] {
            let a = lp_norm(&f.scale(c), p).unwrap();
            let b = c.abs() * lp_norm(&f, p).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * b.max(1.0));
        }
    }

    #[test]
    fn dyadic_blocks_recover_the_field(m in modes(2)) {
        let g = grid2();
        let f = build(g, &m);
        let part = DyadicPartition::for_grid(g);
        let mut sum = ScalarField::constant(g, f.mean());
        let blocks: Vec<(i32, ScalarField)> =
            part.blocks().map(|j| (j, dyadic_block(&f, j).unwrap())).collect();
        for (_, b) in &blocks {
            sum = sum.add(b).unwrap();
        }
        prop_assert!(max_diff(&sum, &f) <= 1e-12);
        for (j, a) in &blocks {
            for (k, b) in &blocks {
                if (j - k).abs() >= 2 {
                    prop_assert!(inner(a, b).unwrap().abs() <= 1e-11);
                }
            }
        }
    }

    #[test]
    fn young_inequality_on_lattice_kernel(m in modes(2), eps in 0.4..0.78f64) {
        let g = grid2();
        let f = build(g, &m);
        let fe = MollifierKernel::lattice(g, eps).unwrap().apply_scalar(&f).unwrap();
        for p in [1.0, 2.0, 3.0, f64::INFINITY] {
            let a = lp_norm(&fe, p).unwrap();
            let b = lp_norm(&f, p).unwrap();
            prop_assert!(a <= b * (1.0 + 1e-12), "p = {p}: {a} > {b}");
        }
    }

    #[test]
    fn mollifier_commutes_with_derivative(m in modes(2), eps in 0.1..0.78f64) {
        let g = grid2();
        let f = build(g, &m);
        for kind in [KernelKind::Continuum, KernelKind::Lattice] {
            if kind == KernelKind::Lattice && eps < 2.0 * g.spacing() {
                continue;
            }
            let k = MollifierKernel::new(g, eps, kind).unwrap();
            for axis in 0..2 {
                let a = k.apply_scalar(&derivative(&f, axis).unwrap()).unwrap();
                let b = derivative(&k.apply_scalar(&f).unwrap(), axis).unwrap();
                prop_assert!(max_diff(&a, &b) <= 1e-11);
            }
        }
    }

    #[test]
    fn commutator_is_bilinear_and_symmetric(
        f1 in modes(2), f2 in modes(2), h in modes(2), a in -2.0..2.0f64, b in -2.0..2.0f64,
    ) {
        let g = grid2();
        let (f1, f2, h) = (build(g, &f1), build(g, &f2), build(g, &h));
        let eps = 0.4;
        let lin = cet_commutator(&f1.axpby(a, &f2, b).unwrap(), &h, eps).unwrap().field;
        let sep = cet_commutator(&f1, &h, eps)
            .unwrap()
            .field
            .axpby(a, &cet_commutator(&f2, &h, eps).unwrap().field, b)
            .unwrap();
        prop_assert!(max_diff(&lin, &sep) <= 1e-11);
        let fh = cet_commutator(&f1, &h, eps).unwrap().field;
        let hf = cet_commutator(&h, &f1, eps).unwrap().field;
        prop_assert_eq!(fh.values(), hf.values());
    }

    #[test]
    fn sqg_helicity_vanishes(m in modes(2)) {
        let theta = build(grid2(), &m);
        for axis in 0..2 {
            prop_assert!(sqg_helicity(&theta, axis).unwrap().abs() <= 1e-11);
        }
    }

    #[test]
    fn helicity_is_self_adjoint_and_grid_independent(a in modes(3), b in modes(3), c in modes(3)) {
        let v = build_vector(grid3(), &[a, b, c]);
        let w = curl3(&v).unwrap();
        let mut wv = 0.0;
        let mut vw = 0.0;
        for i in 0..3 {
            wv += inner(w.component(i), v.component(i)).unwrap();
            vw += inner(v.component(i), w.component(i)).unwrap();
        }
        let h = helicity(&v).unwrap();
        let scale = h.abs().max(1.0);
        prop_assert!((wv - vw).abs() <= 1e-12 * scale);
        prop_assert!((h - wv).abs() <= 1e-12 * scale);
        let fine = v.map(refine);
        prop_assert!((helicity(&fine).unwrap() - h).abs() <= 1e-12 * scale);
    }

    #[test]
    fn energy_is_quadratic(a in modes(3), b in modes(3), c in modes(3), s in -3.0..3.0f64) {
        let v = build_vector(grid3(), &[a, b, c]);
        let e = energy(&v).unwrap();
        let es = energy(&v.scale(s)).unwrap();
        prop_assert!((es - s * s * e).abs() <= 1e-13 * (s * s * e).max(1e-300) + 1e-300);
    }

    #[test]
    fn field_file_round_trip(m in modes(2), n in prop::sample::select(vec![8usize, 16, 32])) {
        let g = Grid::new(2, n).unwrap();
        let f = build(g, &m);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.fld");
        let mut file = std::fs::File::create(&path).unwrap();
        FieldFile::scalar(&f).write_to(&mut file).unwrap();
        drop(file);
        let back = FieldFile::load(&path).unwrap().into_scalar().unwrap();
        prop_assert_eq!(back.values(), f.values());
    }
}
