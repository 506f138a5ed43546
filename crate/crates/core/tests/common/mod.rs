//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use specpoint::{PlanePoint, SigmaCurve};

/// Implicit cardioid equation `(a-1)^2 + b^2 - (a^2+b^2-a)^2`; positive inside.
pub fn cardioid(p: PlanePoint) -> f64 {
    let (a, b) = (p.a, p.b);
    (a - 1.0).powi(2) + b * b - (a * a + b * b - a).powi(2)
}

/// Circle equation for the real linear map `(s,t,u,v)`.
pub fn linear_circle(p: PlanePoint, [s, t, u, v]: [f64; 4]) -> f64 {
    let (a, b) = (p.a, p.b);
    a * a + b * b - (s + v) * a - (u - t) * b + s * v - t * u
}

pub struct Circle {
    pub center: PlanePoint,
    pub radius: f64,
}

impl Circle {
    pub fn residual(&self, p: PlanePoint) -> f64 {
        (p.dist(self.center) - self.radius).abs()
    }

    fn angle(&self, p: PlanePoint) -> f64 {
        (p.b - self.center.b).atan2(p.a - self.center.a).rem_euclid(TAU)
    }
}

/// Upper bound on the Hausdorff distance between a polyline and a union of
/// circles. Every vertex must lie within `on_tol` of some circle; segments
/// joining two vertices of one circle cover the arc between them up to the
/// vertex residual plus the sagitta. Returns `None` if some circle is not
/// fully covered.
pub fn hausdorff_to_circles(curve: &SigmaCurve, circles: &[Circle], on_tol: f64) -> Option<f64> {
    let mut bound: f64 = 0.0;
    for p in curve.points() {
        let r = circles.iter().map(|c| c.residual(p)).fold(f64::INFINITY, f64::min);
        bound = bound.max(r);
    }
    for c in circles {
        let mut arcs = Vec::new();
        for (a, b) in curve.segments() {
            let (ra, rb) = (c.residual(a), c.residual(b));
            if ra > on_tol || rb > on_tol {
                continue;
            }
            let (ta, tb) = (c.angle(a), c.angle(b));
            let mut d = (tb - ta).rem_euclid(TAU);
            let start = if d <= PI { ta } else { tb };
            if d > PI {
                d = TAU - d;
            }
            if d > PI / 4.0 {
                continue;
            }
            bound = bound.max(ra.max(rb) + c.radius * (1.0 - (d / 2.0).cos()));
            arcs.push((start, start + d));
        }
        if !covers_circle(&mut arcs) {
            return None;
        }
    }
    Some(bound)
}

fn covers_circle(arcs: &mut Vec<(f64, f64)>) -> bool {
    let extra: Vec<_> = arcs
        .iter()
        .filter(|(_, e)| *e > TAU)
        .map(|(s, e)| (s - TAU, e - TAU))
        .collect();
    arcs.extend(extra);
    arcs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut reach = 0.0;
    for &(s, e) in arcs.iter() {
        if s > reach + 1e-12 {
            return false;
        }
        reach = f64::max(reach, e);
    }
    reach >= TAU - 1e-12
}

/// Sigma of `half_abs_re_plus_i_im`: two circles tangent at 1.
pub fn half_abs_circles() -> [Circle; 2] {
    [
        Circle {
            center: PlanePoint::real(0.25),
            radius: 0.75,
        },
        Circle {
            center: PlanePoint::real(0.75),
            radius: 0.25,
        },
    ]
}

/// `sum_k |lambda|^{-2k}` accumulated until the terms vanish.
pub fn geometric_norm_sq(lambda: PlanePoint) -> f64 {
    let q = lambda.norm().powi(-2);
    let (mut sum, mut term) = (0.0_f64, q);
    let mut k = 0;
    while term > 1e-18 * sum.max(1e-300) && k < 10_000_000 {
        k += 1;
        sum += term;
        term *= q;
    }
    sum
}
