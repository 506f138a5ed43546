use std::f64::consts::SQRT_2;

use specpoint::structured::{
    eigvec_norm_sq, shift_bifurcation_scan, shift_index, shift_model_report, truncated_shift_min,
    xi_equation_solvable, Atom, ShiftPerturbation, DEFAULT_SHIFT_TOL,
};
use specpoint::{mnc_bounds, Error, ExtendedReal, OperatorExpr, PlanePoint, RateInterval, ScanVerdict};

fn bounds(s: &str) -> specpoint::RateBounds {
    mnc_bounds(&s.parse::<OperatorExpr>().unwrap())
}

#[test]
fn rule_examples() {
    let b = bounds("isometry(1) + compact");
    assert_eq!(b.alpha, RateInterval::exact(1.0));
    assert_eq!(b.omega, RateInterval::exact(1.0));
    let b = mnc_bounds(&OperatorExpr::scale(-2.5, OperatorExpr::atom(Atom::Identity)));
    assert_eq!(b.alpha, RateInterval::exact(2.5));
    assert_eq!(b.omega, RateInterval::exact(2.5));
    let b = bounds("known(alpha=2, omega=1) o known(alpha=3, omega=0.5)");
    assert!(b.alpha.hi <= ExtendedReal::new(6.0));
    assert_eq!(b.omega.lo, ExtendedReal::new(0.5));
    assert!(b.omega.hi <= ExtendedReal::new(6.0));
    assert!(b.derivation.iter().any(|d| d.starts_with("compose")));
    let u = bounds("mystery(3)");
    assert_eq!(u.alpha, RateInterval::unknown());
    assert!(u.derivation.iter().any(|d| d.contains("no rule")));
}

#[test]
fn parse_errors_carry_positions() {
    match "scale(2, id) + ".parse::<OperatorExpr>() {
        Err(Error::Parse { position, .. }) => assert_eq!(position, 15),
        other => panic!("{other:?}"),
    }
    assert!("known(alpha=[2,1], omega=0)".parse::<OperatorExpr>().is_err());
}

#[test]
fn report_values() {
    let r = shift_model_report();
    assert_eq!((r.d, r.q), (SQRT_2, SQRT_2));
    assert!((eigvec_norm_sq(PlanePoint::real(3f64.sqrt())).unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(shift_index(PlanePoint::real(0.5)), Some(-1));
    assert_eq!(shift_index(PlanePoint::real(2.0)), Some(0));
    // the sphere radius of Sigma lies in [d, q] and that of sigma_omega in [omega, alpha]
    assert!(r.d <= r.sigma_big_radius && r.sigma_big_radius <= r.q);
    assert!(r.rates.omega.contains(ExtendedReal::new(r.sigma_omega_radius)));
    assert!(r.rates.alpha.contains(ExtendedReal::new(r.sigma_omega_radius)));
}

#[test]
fn xi_examples() {
    assert!(!xi_equation_solvable(PlanePoint::real(1.2), 0.1).unwrap().solvable);
    let s = xi_equation_solvable(PlanePoint::real(2.0), 0.1).unwrap();
    let w = s.witness.unwrap().a;
    assert!((w - 0.1 / (1.0 - 1.0 / 3f64.sqrt())).abs() < 1e-15);
    assert!((w - w.abs() / 3f64.sqrt() - 0.1).abs() < 1e-15);
    assert!(!xi_equation_solvable(PlanePoint::real(SQRT_2), 0.1).unwrap().solvable);
    assert!(matches!(xi_equation_solvable(PlanePoint::real(0.9), 0.1), Err(Error::Precondition(_))));
    for eps in [1e-3, 0.1, 1.0] {
        for k in 0..40 {
            let r = 1.01 + 0.05 * k as f64;
            let s = xi_equation_solvable(PlanePoint::polar(r, k as f64), eps).unwrap();
            assert_eq!(s.solvable, r > SQRT_2, "r = {r}");
        }
    }
}

#[test]
fn truncated_minimum_examples() {
    let m = truncated_shift_min(PlanePoint::real(SQRT_2), 60).unwrap();
    assert!(m.value < 1e-6);
    // oracle: residual of the normalized truncated eigenvector
    let n = 60;
    let norm = (0..n).map(|k| 0.5f64.powi(k + 1)).sum::<f64>().sqrt();
    let z: Vec<PlanePoint> = (0..n).map(|k| PlanePoint::real(SQRT_2.powi(-(k + 1)) / norm)).collect();
    let oracle = specpoint::structured::shift_residual(PlanePoint::real(SQRT_2), &z);
    assert!(m.value <= oracle + 1e-15);
    for n in [4, 7, 20, 50] {
        assert!((truncated_shift_min(PlanePoint::ZERO, n).unwrap().value - 1.0).abs() < 1e-9);
    }
    let far = truncated_shift_min(PlanePoint::real(2.0), 60).unwrap();
    assert!(far.value >= 0.4);
}

/// Random-restart projected search at small N, against the exact solver.
#[test]
fn truncated_minimum_against_restarts() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for (lambda, n) in [(PlanePoint::real(2.0), 6), (PlanePoint::new(0.0, 1.2), 8)] {
        restart_check(&mut rng, lambda, n);
    }
    let lambda = PlanePoint::real(2.0);
    let wide = truncated_shift_min(lambda, 120).unwrap().value;
    assert!(wide >= 0.4 && (wide - truncated_shift_min(lambda, 60).unwrap().value).abs() < 1e-9);
}

fn restart_check(rng: &mut impl rand::Rng, lambda: PlanePoint, n: usize) {
    let mut best = f64::INFINITY;
    for _ in 0..200 {
        let mut z: Vec<PlanePoint> = (0..n).map(|_| PlanePoint::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let normalize = |z: &mut Vec<PlanePoint>| {
            let s = z.iter().map(|p| p.norm().powi(2)).sum::<f64>().sqrt();
            z.iter_mut().for_each(|p| *p = PlanePoint::new(p.a / s, p.b / s));
        };
        normalize(&mut z);
        let mut step = 0.2;
        let mut v = specpoint::structured::shift_residual(lambda, &z);
        while step > 1e-7 {
            let mut improved = false;
            for k in 0..2 * n {
                for sgn in [-1.0, 1.0] {
                    let mut t = z.clone();
                    if k < n {
                        t[k].a += sgn * step;
                    } else {
                        t[k - n].b += sgn * step;
                    }
                    normalize(&mut t);
                    let tv = specpoint::structured::shift_residual(lambda, &t);
                    if tv < v {
                        v = tv;
                        z = t;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best = best.min(v);
    }
    let exact = truncated_shift_min(lambda, n).unwrap().value;
    assert!(exact <= best + 1e-9, "{exact} vs {best}");
    assert!(best - exact < 1e-4, "{exact} vs {best}");
}

#[test]
fn scan_examples() {
    let s = shift_bifurcation_scan(
        &ShiftPerturbation::Zero,
        40,
        &[PlanePoint::real(SQRT_2), PlanePoint::real(1.2)],
        &[1e-2, 1e-3, 1e-4],
        DEFAULT_SHIFT_TOL,
    )
    .unwrap();
    assert_eq!(s.points[0].verdict, ScanVerdict::Candidate);
    assert_eq!(s.points[1].verdict, ScanVerdict::Rejected);
    assert!(s.points[1].residuals.iter().all(|r| r.normalized > 0.1));
    let p = shift_bifurcation_scan(&ShiftPerturbation::NormSqE1, 40, &[PlanePoint::real(SQRT_2)], &[1e-3], DEFAULT_SHIFT_TOL)
        .unwrap();
    assert!(p.points[0].residuals[0].absolute < 1e-4);
    assert_eq!(p.points[0].verdict, ScanVerdict::Candidate);
}

#[test]
fn scan_rejects_perturbations_not_vanishing_at_zero() {
    let h = ShiftPerturbation::Custom {
        name: "offset".into(),
        eval: std::sync::Arc::new(|z: &[num_complex::Complex64]| vec![num_complex::Complex64::new(1.0, 0.0); z.len()]),
    };
    assert!(matches!(
        shift_bifurcation_scan(&h, 10, &[PlanePoint::real(1.5)], &[1e-2], 0.02),
        Err(Error::Precondition(_))
    ));
}
