use std::f64::consts::{FRAC_PI_2, PI};

use specpoint::homog2d::{
    bifurcation_set_homog, map_winding, rouche_coincidence, sigma_point, spectral_radius_bound, RoucheOptions,
};
use specpoint::{
    classify_plane, d_and_quasinorm, sigma_curve, winding_number, BlackBox, ClassifyOptions, CurveOptions, Error,
    GridSpec, Label, MapSpec, PlanePoint, WindingOptions,
};

fn f(name: &str) -> MapSpec {
    MapSpec::from_name(name, &[]).unwrap()
}

fn constant(c: PlanePoint) -> MapSpec {
    MapSpec::black_box(BlackBox::new("const", 2, move |_| vec![c.a, c.b]))
}

#[test]
fn curve_examples() {
    let id = sigma_curve(&MapSpec::identity(2), &CurveOptions::default()).unwrap();
    assert_eq!(id.degenerate, Some(PlanePoint::real(1.0)));
    let c = sigma_curve(&f("abs_re_plus_i_im"), &CurveOptions::default()).unwrap();
    assert!(c.points().all(|p| (p.norm() - 1.0).abs() < 1e-12));
    let q = sigma_point(&f("norm_plus_i_im"), FRAC_PI_2).unwrap();
    assert!(q.dist(PlanePoint::new(1.0, -1.0)) < 1e-15);
}

#[test]
fn curve_contract() {
    let c = sigma_curve(&f("norm_plus_i_im"), &CurveOptions::default()).unwrap();
    assert!(c.closed && c.chord_bound_met);
    assert!(c.max_chord() <= 1e-3);
    assert!(c.samples.windows(2).all(|w| w[0].theta < w[1].theta));
    assert!(c.samples.last().unwrap().theta < 2.0 * PI);
}

#[test]
fn d_and_q_examples() {
    for (name, d, q) in [("abs_re_plus_i_im", 1.0, 1.0), ("half_abs_re_plus_i_im", 0.5, 1.0), ("identity", 1.0, 1.0)] {
        let (dd, qq) = d_and_quasinorm(&f(name), 1024).unwrap();
        assert!((dd - d).abs() < 1e-12 && (qq - q).abs() < 1e-12, "{name}: {dd} {qq}");
    }
}

#[test]
fn winding_examples() {
    let zero = MapSpec::black_box(BlackBox::new("zero", 2, |_| vec![0.0, 0.0]).homogeneous());
    let opts = WindingOptions::default();
    assert_eq!(winding_number(&zero, PlanePoint::real(1.0), 1.0, &opts).unwrap().winding, 1);
    let conj = MapSpec::from_name("real_linear", &[1.0, 0.0, 0.0, -1.0]).unwrap();
    assert_eq!(winding_number(&conj, PlanePoint::ZERO, 1.0, &opts).unwrap().winding, -1);
    assert_eq!(winding_number(&f("abs_re_plus_i_im"), PlanePoint::ZERO, 1.0, &opts).unwrap().winding, 0);
    assert!(matches!(
        winding_number(&f("abs_re_plus_i_im"), PlanePoint::new(0.0, 1.0), 1.0, &opts),
        Err(Error::Admissibility { .. })
    ));
}

#[test]
fn classification_examples() {
    let mut opts = ClassifyOptions::new(GridSpec::square(2.0, 80));
    opts.band_radius = Some(0.1);
    let s = classify_plane(&f("abs_re_plus_i_im"), &opts).unwrap();
    for (_, _, c, l) in s.cells() {
        if c.norm() < 0.9 {
            assert_eq!(l, Label::InSpectrum, "{c}");
        } else if c.norm() > 1.1 {
            assert_eq!(l, Label::Regular, "{c}");
        }
    }
    assert_eq!(s.inconsistent_components, 0);
    assert!(s.violations.is_empty());

    let lin = MapSpec::from_name("real_linear", &[1.0, 2.0, 3.0, 4.0]).unwrap();
    let s = classify_plane(&lin, &ClassifyOptions::new(GridSpec::square(6.0, 60))).unwrap();
    assert_eq!(s.count(Label::InSpectrum), 0);
    assert!(s.count(Label::Regular) > 0);
}

#[test]
fn classification_rejects_non_homogeneous_maps() {
    let g = MapSpec::from_name("norm_plus_i_im_pow", &[2.0]).unwrap();
    assert!(matches!(
        classify_plane(&g, &ClassifyOptions::new(GridSpec::square(2.0, 10))),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn rouche_examples() {
    let opts = RoucheOptions::default();
    let c = PlanePoint::new(0.3, -0.2);
    let s = rouche_coincidence(&MapSpec::identity(2), &constant(c), 1.0, &opts).unwrap();
    assert!(PlanePoint::new(s.x[0], s.x[1]).dist(c) < 1e-9);
    let two = MapSpec::identity(2).scaled(PlanePoint::real(2.0)).unwrap();
    let s = rouche_coincidence(&two, &constant(c), 1.0, &opts).unwrap();
    assert!(PlanePoint::new(s.x[0], s.x[1]).dist(PlanePoint::new(0.15, -0.1)) < 1e-9);
    let g = f("abs_re_plus_i_im").lambda_minus(PlanePoint::real(2.0)).unwrap();
    let k = constant(PlanePoint::real(0.1));
    let s = rouche_coincidence(&g, &k, 1.0, &opts).unwrap();
    assert!(s.residual < 1e-9);
    // oracle: the residual at the returned point, recomputed directly
    let gx = g.eval(&s.x).unwrap();
    assert!((gx[0] - 0.1).hypot(gx[1]) < 1e-9);
    // a dense grid finds no point far better than the solver
    let mut best = f64::INFINITY;
    for i in 0..200 {
        for j in 0..200 {
            let x = [-1.0 + i as f64 / 100.0, -1.0 + j as f64 / 100.0];
            if x[0].hypot(x[1]) < 1.0 {
                let v = g.eval(&x).unwrap();
                best = best.min((v[0] - 0.1).hypot(v[1]));
            }
        }
    }
    assert!(best < 2e-2 && s.residual <= best + 1e-9);
}

#[test]
fn rouche_precondition_is_checked() {
    let big = constant(PlanePoint::real(5.0));
    assert!(matches!(
        rouche_coincidence(&MapSpec::identity(2), &big, 1.0, &RoucheOptions::default()),
        Err(Error::Precondition(_))
    ));
    let w = map_winding(&f("abs_re_plus_i_im"), 1.0, &WindingOptions::default()).unwrap();
    assert_eq!(w.winding, 0);
}

#[test]
fn spectral_radius_examples() {
    for name in ["abs_re_plus_i_im", "half_abs_re_plus_i_im", "conj_pair"] {
        let r = spectral_radius_bound(&f(name)).unwrap();
        assert!((r.to_f64() - 1.0).abs() < 1e-6, "{name}: {r}");
    }
}

#[test]
fn bifurcation_curves() {
    let g = MapSpec::from_name("norm_plus_i_im_pow", &[2.0]).unwrap();
    let b = bifurcation_set_homog(&g, &CurveOptions::default()).unwrap();
    assert!(b.points().all(|p| (p.norm() - 1.0).abs() < 1e-12));
    let id = bifurcation_set_homog(&MapSpec::identity(2), &CurveOptions::default()).unwrap();
    assert_eq!(id.degenerate, Some(PlanePoint::real(1.0)));
    let a = bifurcation_set_homog(&f("abs_re_plus_i_im"), &CurveOptions::default()).unwrap();
    assert!(a.points().all(|p| (p.norm() - 1.0).abs() < 1e-12));
}
