use helicon::solver::*;
use helicon::synth::{
    abc_flow, random_besov_field, random_besov_vector_field, BesovFieldSpec, BesovVariant,
};
use helicon::{Error, Grid, ScalarField, VectorField};

#[test]
fn mask_is_idempotent() {
    let g = Grid::new(2, 16).unwrap();
    let f = ScalarField::from_fn(g, |x| {
        (7.0 * x[0]).sin() + (2.0 * x[1]).cos() + (5.0 * x[0]).cos()
    });
    let once = dealias(&f);
    assert_eq!(dealias(&once).coefficients(), once.coefficients());
    assert!(
        once.sub(&ScalarField::from_fn(g, |x| (2.0 * x[1]).cos() + (5.0 * x[0]).cos()))
            .unwrap()
            .max_abs()
            < 1e-14
    );
}

#[test]
fn shear_is_steady() {
    let g = Grid::new(3, 16).unwrap();
    let v0 = VectorField::from_fn(g, |x| [x[1].sin(), 0.0, 0.0]);
    let cfg = SolverConfig::new(g, 0.01, 1.0, 100, System::Euler3d).unwrap();
    let run = euler3d_integrate(&v0, &cfg).unwrap();
    let last = run.series.snapshots().last().unwrap();
    assert!(last.sub(&v0).unwrap().max_abs() < 1e-12);
}

#[test]
fn abc_is_steady() {
    let g = Grid::new(3, 16).unwrap();
    let v0 = abc_flow(g, 1.0, 1.0, 1.0).unwrap();
    let cfg = SolverConfig::new(g, 0.01, 0.2, 20, System::Euler3d).unwrap();
    let run = euler3d_integrate(&v0, &cfg).unwrap();
    assert!(
        run.series
            .snapshots()
            .last()
            .unwrap()
            .sub(&v0)
            .unwrap()
            .max_abs()
            < 1e-12
    );
}

#[test]
fn zero_temperature_stays_zero() {
    let g = Grid::new(2, 16).unwrap();
    let cfg = SolverConfig::new(g, 0.01, 0.1, 5, System::Sqg2d).unwrap();
    let run = sqg2d_integrate(&ScalarField::zeros(g), &cfg).unwrap();
    assert!(run.series.snapshots().iter().all(|s| s.max_abs() == 0.0));
    assert_eq!(run.log.len(), 3);
}

#[test]
fn config_checks() {
    let g = Grid::new(2, 16).unwrap();
    assert!(SolverConfig::new(g, 0.0, 1.0, 1, System::Sqg2d).is_err());
    assert!(SolverConfig::new(g, 0.3, 1.0, 1, System::Sqg2d).is_err());
    assert!(SolverConfig::new(g, 0.1, 1.0, 1, System::Euler3d).is_err());
    assert!(SolverConfig::new(g, 0.1, 1.0, 0, System::Sqg2d).is_err());
}

#[test]
fn blow_up_is_reported() {
    let g = Grid::new(2, 16).unwrap();
    let th = ScalarField::from_fn(g, |x| 1e150 * (x[0].cos() + (x[0] + x[1]).sin()));
    let cfg = SolverConfig::new(g, 0.1, 1.0, 1, System::Sqg2d).unwrap();
    assert!(matches!(
        sqg2d_integrate(&th, &cfg),
        Err(Error::NumericalAbort { .. })
    ));
}

fn rough_velocity() -> VectorField {
    let g = Grid::new(3, 16).unwrap();
    let spec = BesovFieldSpec::new(0.9, 2.0, BesovVariant::InfinityType, 3);
    let v = random_besov_vector_field(g, &spec, true).unwrap();
    v.scale(1.0 / v.max_abs())
}

fn rough_temperature() -> ScalarField {
    let g = Grid::new(2, 32).unwrap();
    let spec = BesovFieldSpec::new(0.9, 2.0, BesovVariant::InfinityType, 3);
    let t = random_besov_field(g, &spec).unwrap();
    t.scale(1.0 / t.max_abs())
}

#[test]
fn euler_energy_drift_is_fourth_order() {
    let v = rough_velocity();
    let drift = |dt| {
        let cfg = SolverConfig::new(v.grid(), dt, 0.8, 1, System::Euler3d).unwrap();
        let run = euler3d_integrate(&v, &cfg).unwrap();
        for r in &run.log {
            assert!(r.max_divergence.unwrap() <= 1e-10);
        }
        run.relative_drift(|r| r.energy)
    };
    let (coarse, fine) = (drift(0.04), drift(0.02));
    assert!(coarse >= 8.0 * fine, "{coarse:e} vs {fine:e}");
}

#[test]
fn sqg_l2_drift_is_fourth_order() {
    let theta = rough_temperature();
    let drift = |dt| {
        let cfg = SolverConfig::new(theta.grid(), dt, 0.8, 1, System::Sqg2d).unwrap();
        let run = sqg2d_integrate(&theta, &cfg).unwrap();
        for r in &run.log {
            let [a, b] = r.theta_helicity.unwrap();
            assert!(a.abs() <= 1e-11 && b.abs() <= 1e-11);
        }
        run.relative_drift(|r| r.l2.unwrap())
    };
    let (coarse, fine) = (drift(0.04), drift(0.02));
    assert!(coarse >= 8.0 * fine, "{coarse:e} vs {fine:e}");
}

#[test]
fn trajectories_are_bit_exact() {
    let v = rough_velocity();
    let cfg = SolverConfig::new(v.grid(), 0.05, 0.2, 2, System::Euler3d).unwrap();
    let a = euler3d_integrate(&v, &cfg).unwrap();
    let b = euler3d_integrate(&v, &cfg).unwrap();
    assert_eq!(a.series.snapshots(), b.series.snapshots());
    let theta = rough_temperature();
    let cfg = SolverConfig::new(theta.grid(), 0.05, 0.2, 2, System::Sqg2d).unwrap();
    let a = sqg2d_integrate(&theta, &cfg).unwrap();
    let b = sqg2d_integrate(&theta, &cfg).unwrap();
    assert_eq!(a.series.snapshots(), b.series.snapshots());
}
