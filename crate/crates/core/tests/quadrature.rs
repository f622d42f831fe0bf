use helicon::quadrature::*;

#[test]
fn gauss_legendre_is_exact_for_polynomials() {
    let (x, w) = gauss_legendre(8);
    for deg in 0..16 {
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
        let exact = if deg % 2 == 1 {
            0.0
        } else {
            2.0 / (deg as f64 + 1.0)
        };
        assert!((q - exact).abs() < 1e-14, "degree {deg}: {q} vs {exact}");
    }
}

#[test]
fn smooth_step_is_monotone_and_symmetric() {
    let mut prev = 0.0;
    for i in 0..=100 {
        let t = i as f64 / 100.0;
        let s = smooth_step(t);
        assert!(s >= prev - 1e-15);
        assert!((s + smooth_step(1.0 - t) - 1.0).abs() < 1e-13);
        prev = s;
    }
    assert_eq!(smooth_step(0.5), 0.5);
}

#[test]
fn mollifier_constant_1d() {
    // ∫_{-1}^{1} e^{-1/(1-x²)} dx = 0.443993816168079...
    let c = mollifier_constant(1);
    assert!((1.0 / c - 0.443_993_816_168_079_4).abs() < 1e-12);
}

#[test]
fn mollifier_constant_2d_3d() {
    assert!((1.0 / mollifier_constant(2) - 0.466_512_393_178_330_1).abs() < 1e-12);
    assert!((1.0 / mollifier_constant(3) - 0.441_088_887_276_604_4).abs() < 1e-12);
}
