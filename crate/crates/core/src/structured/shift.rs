//! The map `f(x) = |x| e_1 + L x` on `l^2(C)`, where `L` is the right shift.
//!
//! Analytic values are emitted as facts. The finite sections
//! `f_N(z) = (|z|, z_1, ..., z_{N-1})` on `C^N` are solved exactly: on the
//! unit sphere `|lambda z - f_N(z)| = |(lambda - L_N) z - e_1|`, a least
//! squares problem with a norm constraint.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::ScanVerdict;
use crate::plane::PlanePoint;

use super::expr::OperatorExpr;
use super::mnc::{mnc_bounds, RateBounds};

/// Rates at 0 read as an operator expression: an isometry with cokernel of
/// dimension one plus a rank-one nonlinear term.
pub const SHIFT_EXPR: &str = "isometry(1) + locally_compact";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftModelReport {
    pub d: f64,
    pub q: f64,
    pub rates: RateBounds,
    /// `Sigma(f,0)` is the circle of this radius.
    pub sigma_big_radius: f64,
    /// `sigma_omega(f,0)` is the circle of this radius.
    pub sigma_omega_radius: f64,
    /// `sigma(f,0)` is the closed disk of this radius.
    pub sigma_radius: f64,
    /// Bifurcation points of `f` plus any compact `o(|x|)` term: the circle of this radius.
    pub bifurcation_radius: f64,
    pub index_inside: i32,
    pub index_outside: i32,
    pub notes: Vec<String>,
}

pub fn shift_model_report() -> ShiftModelReport {
    let expr: OperatorExpr = SHIFT_EXPR.parse().expect("fixed expression parses");
    ShiftModelReport {
        d: SQRT_2,
        q: SQRT_2,
        rates: mnc_bounds(&expr),
        sigma_big_radius: SQRT_2,
        sigma_omega_radius: 1.0,
        sigma_radius: SQRT_2,
        bifurcation_radius: SQRT_2,
        index_inside: -1,
        index_outside: 0,
        notes: vec![
            "|f(x)| = sqrt(2)|x|, so d = q = sqrt(2)".into(),
            "lambda - L is Fredholm off the unit circle with index -1 inside and 0 outside".into(),
            "for |lambda| > 1 the kernel of lambda - L^* is spanned by v = (lambda^-1, lambda^-2, ...)".into(),
            "sigma_omega is the unit circle; no finite section can witness omega = 0".into(),
        ],
    }
}

/// Fredholm index of `lambda - L`; `None` on the unit circle.
pub fn shift_index(lambda: PlanePoint) -> Option<i32> {
    let r = lambda.norm();
    if r < 1.0 {
        Some(-1)
    } else if r > 1.0 {
        Some(0)
    } else {
        None
    }
}

/// `|v_lambda|^2 = 1 / (|lambda|^2 - 1)` for the geometric eigenvector.
pub fn eigvec_norm_sq(lambda: PlanePoint) -> Result<f64> {
    let r2 = lambda.norm().powi(2);
    if !(r2 > 1.0) {
        return Err(Error::precondition(format!(
            "|lambda| = {} must exceed 1",
            lambda.norm()
        )));
    }
    Ok(1.0 / (r2 - 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XiSolution {
    pub solvable: bool,
    pub c: f64,
    pub witness: Option<PlanePoint>,
    /// `|xi - |xi| c - eps|` at the witness.
    pub witness_residual: Option<f64>,
}

/// Solves `xi - |xi| c = eps` with `c = 1 / sqrt(|lambda|^2 - 1)`.
///
/// The imaginary part of `xi` must vanish; a negative real `xi` gives a
/// negative left side. For `xi >= 0` the equation reads `xi (1 - c) = eps`,
/// solvable iff `c < 1`. `c` within `1e-12` of 1 counts as `c = 1`.
pub fn xi_equation_solvable(lambda: PlanePoint, eps: f64) -> Result<XiSolution> {
    let r = lambda.norm();
    if !(r > 1.0) {
        return Err(Error::precondition(format!("|lambda| = {r} must exceed 1")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::precondition(format!("eps = {eps} must be positive")));
    }
    let c = 1.0 / (r * r - 1.0).sqrt();
    if c >= 1.0 - 1e-12 {
        return Ok(XiSolution {
            solvable: false,
            c,
            witness: None,
            witness_residual: None,
        });
    }
    let xi = eps / (1.0 - c);
    Ok(XiSolution {
        solvable: true,
        c,
        witness: Some(PlanePoint::real(xi)),
        witness_residual: Some((xi - xi.abs() * c - eps).abs()),
    })
}

/// `lambda I - L_N` with `L_N` the lower shift on `C^N`.
fn shift_operator(lambda: Complex64, n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            lambda
        } else if i == j + 1 {
            -Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn cnorm(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `min |A z - b|` over `|z| = 1`, via the SVD of `A` and the secular
/// equation for the multiplier.
struct SphereLeastSquares {
    a: DMatrix<Complex64>,
    u: DMatrix<Complex64>,
    v: DMatrix<Complex64>,
    s: Vec<f64>,
}

impl SphereLeastSquares {
    fn new(a: DMatrix<Complex64>) -> Result<Self> {
        let svd = a
            .clone()
            .try_svd(true, true, f64::EPSILON, 10_000)
            .ok_or_else(|| Error::Numeric("SVD did not converge".into()))?;
        let u = svd.u.expect("requested U");
        let v = svd.v_t.expect("requested V^H").adjoint();
        let s = svd.singular_values.iter().copied().collect();
        Ok(SphereLeastSquares { a, u, v, s })
    }

    fn residual(&self, z: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
        cnorm(&(&self.a * z - b))
    }

    fn solve(&self, b: &DVector<Complex64>) -> DVector<Complex64> {
        let n = self.s.len();
        let c = self.u.adjoint() * b;
        let gamma: Vec<Complex64> = (0..n).map(|i| c[i] * self.s[i]).collect();
        let s2: Vec<f64> = self.s.iter().map(|s| s * s).collect();
        let smin = s2.iter().copied().fold(f64::INFINITY, f64::min);
        let smax = s2.iter().copied().fold(0.0, f64::max);
        let gap_tol = 1e-12 * smax.max(1.0);
        let gnorm = gamma.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
        let low: Vec<usize> = (0..n).filter(|&i| s2[i] - smin <= gap_tol).collect();
        let low_mass: f64 = low.iter().map(|&i| gamma[i].norm_sqr()).sum();

        let mut y = vec![Complex64::new(0.0, 0.0); n];
        let hard_mass: f64 = (0..n)
            .filter(|i| !low.contains(i))
            .map(|i| gamma[i].norm_sqr() / (s2[i] - smin).powi(2))
            .sum();
        if low_mass.sqrt() <= 1e-14 * gnorm.max(1.0) && hard_mass <= 1.0 {
            // Multiplier sits at the smallest singular value; the leftover
            // mass goes along its right singular vector.
            for i in 0..n {
                if !low.contains(&i) {
                    y[i] = gamma[i] / (s2[i] - smin);
                }
            }
            y[low[0]] = Complex64::new((1.0 - hard_mass).max(0.0).sqrt(), 0.0);
        } else {
            let phi = |t: f64| -> f64 {
                (0..n)
                    .map(|i| gamma[i].norm_sqr() / (s2[i] - smin + t).powi(2))
                    .sum::<f64>()
                    - 1.0
            };
            // phi decreases from +inf (or >0) to <= 0 on (0, |gamma|].
            let (mut lo, mut hi) = (gnorm * 1e-300_f64.max(f64::MIN_POSITIVE), gnorm);
            if phi(lo) <= 0.0 {
                hi = lo;
            }
            for _ in 0..2000 {
                let mid = (lo * hi).sqrt();
                if !(mid > lo && mid < hi) {
                    break;
                }
                if phi(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t = hi;
            for i in 0..n {
                y[i] = gamma[i] / (s2[i] - smin + t);
            }
        }
        let mut z = &self.v * DVector::from_vec(y);
        let nz = cnorm(&z);
        z /= Complex64::new(nz, 0.0);
        z
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedMin {
    pub lambda: PlanePoint,
    pub n: usize,
    pub value: f64,
    /// Eigenvector tails decay only for `|lambda| > 1`; elsewhere the
    /// section distorts the sphere minimum.
    pub reliable: bool,
    pub minimizer: Vec<PlanePoint>,
}

fn e1(n: usize, scale: f64) -> DVector<Complex64> {
    let mut b = DVector::from_element(n, Complex64::new(0.0, 0.0));
    b[0] = Complex64::new(scale, 0.0);
    b
}

/// Normalized section of the geometric eigenvector `z_k = lambda^{-k}`.
fn geometric_seed(lambda: Complex64, n: usize) -> DVector<Complex64> {
    let inv = 1.0 / lambda;
    let mut z = DVector::from_element(n, Complex64::new(0.0, 0.0));
    let mut p = inv;
    for k in 0..n {
        z[k] = p;
        p *= inv;
    }
    let nz = cnorm(&z);
    z / Complex64::new(nz, 0.0)
}

/// `min |lambda z - f_N(z)|` over the unit sphere of `C^N`.
pub fn truncated_shift_min(lambda: PlanePoint, n: usize) -> Result<TruncatedMin> {
    if n < 4 {
        return Err(Error::precondition(format!("N = {n} must be at least 4")));
    }
    if !lambda.is_finite() {
        return Err(Error::precondition("lambda must be finite"));
    }
    let l = lambda.to_complex();
    let b = e1(n, 1.0);
    let ls = SphereLeastSquares::new(shift_operator(l, n))?;
    let mut z = ls.solve(&b);
    let mut value = ls.residual(&z, &b);
    if lambda.norm() > 1.0 {
        let seed = geometric_seed(l, n);
        let sv = ls.residual(&seed, &b);
        if sv < value {
            value = sv;
            z = seed;
        }
    }
    if !value.is_finite() {
        return Err(Error::Solver {
            best_residual: value,
            best_point: vec![],
        });
    }
    Ok(TruncatedMin {
        lambda,
        n,
        value,
        reliable: lambda.norm() > 1.0,
        minimizer: z.iter().map(|c| PlanePoint::new(c.re, c.im)).collect(),
    })
}

/// A perturbation `h` of the section with `h(0) = 0`.
pub type ShiftMap = Arc<dyn Fn(&[Complex64]) -> Vec<Complex64> + Send + Sync>;

#[derive(Clone)]
pub enum ShiftPerturbation {
    Zero,
    /// `h(z) = |z|^2 e_1`.
    NormSqE1,
    Custom {
        name: String,
        eval: ShiftMap,
    },
}

impl std::fmt::Debug for ShiftPerturbation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

impl ShiftPerturbation {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "zero" | "0" => Ok(ShiftPerturbation::Zero),
            "norm_sq_e1" => Ok(ShiftPerturbation::NormSqE1),
            other => Err(Error::unsupported(format!(
                "unknown shift perturbation `{other}` (known: zero, norm_sq_e1)"
            ))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ShiftPerturbation::Zero => "zero".into(),
            ShiftPerturbation::NormSqE1 => "norm_sq_e1".into(),
            ShiftPerturbation::Custom { name, .. } => name.clone(),
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); z.len()];
        match self {
            ShiftPerturbation::Zero => {}
            ShiftPerturbation::NormSqE1 => {
                out[0] = Complex64::new(z.iter().map(|c| c.norm_sqr()).sum(), 0.0);
            }
            ShiftPerturbation::Custom { eval, .. } => out = eval(z),
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShiftResidual {
    pub radius: f64,
    /// `min |lambda y - e_1 - L y - h(r y)/r|` over unit `y`.
    pub normalized: f64,
    /// The same for `z = r y`: `|lambda z - f_N(z) - h(z)|`.
    pub absolute: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftScanPoint {
    pub lambda: PlanePoint,
    pub residuals: Vec<ShiftResidual>,
    pub verdict: ScanVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftScan {
    pub n: usize,
    pub perturbation: String,
    pub tol: f64,
    pub points: Vec<ShiftScanPoint>,
}

impl ShiftScan {
    pub fn candidates(&self) -> impl Iterator<Item = &ShiftScanPoint> {
        self.points.iter().filter(|p| p.verdict == ScanVerdict::Candidate)
    }
}

pub const DEFAULT_SHIFT_TOL: f64 = 0.02;

/// Searches for small solutions of `lambda z = f_N(z) + h(z)` on spheres
/// `|z| = r`, by the fixed point `y <- argmin |A y - e_1 - h(r y)/r|`.
pub fn shift_bifurcation_scan(
    h: &ShiftPerturbation,
    n: usize,
    lambdas: &[PlanePoint],
    radii: &[f64],
    tol: f64,
) -> Result<ShiftScan> {
    if n < 4 {
        return Err(Error::precondition(format!("N = {n} must be at least 4")));
    }
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::precondition("radii must be positive and non-empty"));
    }
    let h0 = h.eval(&vec![Complex64::new(0.0, 0.0); n]);
    if h0.len() != n || h0.iter().any(|c| c.norm() > 1e-14) {
        return Err(Error::precondition(format!(
            "perturbation `{}` must map C^{n} to itself with h(0) = 0",
            h.name()
        )));
    }
    let mut radii = radii.to_vec();
    radii.sort_by(|a, b| b.total_cmp(a));

    let points = lambdas
        .par_iter()
        .map(|&lambda| -> Result<ShiftScanPoint> {
            let ls = SphereLeastSquares::new(shift_operator(lambda.to_complex(), n))?;
            let base = e1(n, 1.0);
            let mut residuals = Vec::with_capacity(radii.len());
            for &r in &radii {
                let rhs = |y: &DVector<Complex64>| -> DVector<Complex64> {
                    let ry: Vec<Complex64> = y.iter().map(|c| c * r).collect();
                    let hv = h.eval(&ry);
                    &base + DVector::from_iterator(n, hv.into_iter().map(|c| c / r))
                };
                let mut y = ls.solve(&base);
                let mut iterations = 0;
                for _ in 0..200 {
                    iterations += 1;
                    let next = ls.solve(&rhs(&y));
                    let step = cnorm(&(&next - &y));
                    y = next;
                    if step < 1e-13 {
                        break;
                    }
                }
                let normalized = ls.residual(&y, &rhs(&y));
                if !normalized.is_finite() {
                    return Err(Error::Numeric(format!(
                        "non-finite residual at lambda = {lambda}, r = {r}"
                    )));
                }
                residuals.push(ShiftResidual {
                    radius: r,
                    normalized,
                    absolute: normalized * r,
                    iterations,
                });
            }
            let first = residuals[0].normalized;
            let last = residuals.last().expect("non-empty").normalized;
            let verdict = if last <= tol && last <= first + tol {
                ScanVerdict::Candidate
            } else if last <= 2.0 * tol {
                ScanVerdict::Undecided
            } else {
                ScanVerdict::Rejected
            };
            Ok(ShiftScanPoint {
                lambda,
                residuals,
                verdict,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ShiftScan {
        n,
        perturbation: h.name(),
        tol,
        points,
    })
}

/// Residual `|lambda z - f_N(z)|` at an arbitrary point; used by tests.
pub fn shift_residual(lambda: PlanePoint, z: &[PlanePoint]) -> f64 {
    let n = z.len();
    let l = lambda.to_complex();
    let zc: Vec<Complex64> = z.iter().map(|p| p.to_complex()).collect();
    let nz = zc.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    (0..n)
        .map(|k| {
            let fk = if k == 0 { Complex64::new(nz, 0.0) } else { zc[k - 1] };
            (l * zc[k] - fk).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_values() {
        let r = shift_model_report();
        assert_eq!((r.d, r.q), (SQRT_2, SQRT_2));
        assert_eq!(r.rates.alpha.lo, 1.0);
        assert_eq!(r.rates.omega.hi, 1.0);
        assert_eq!(shift_index(PlanePoint::real(0.5)), Some(-1));
        assert_eq!(shift_index(PlanePoint::new(0.0, 1.0)), None);
        assert!((eigvec_norm_sq(PlanePoint::real(3f64.sqrt())).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn xi_examples() {
        assert!(!xi_equation_solvable(PlanePoint::real(1.2), 0.1).unwrap().solvable);
        assert!(!xi_equation_solvable(PlanePoint::real(SQRT_2), 0.1).unwrap().solvable);
        let s = xi_equation_solvable(PlanePoint::real(2.0), 0.1).unwrap();
        let w = s.witness.unwrap().a;
        assert!((w - 0.1 / (1.0 - 1.0 / 3f64.sqrt())).abs() < 1e-15);
        assert!(s.witness_residual.unwrap() < 1e-15);
        assert!(matches!(
            xi_equation_solvable(PlanePoint::real(1.0), 0.1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn truncated_minimum_examples() {
        for n in [4, 9, 30] {
            let m = truncated_shift_min(PlanePoint::ZERO, n).unwrap();
            assert!((m.value - 1.0).abs() < 1e-9, "{n}: {}", m.value);
            assert!(!m.reliable);
        }
        let m = truncated_shift_min(PlanePoint::real(SQRT_2), 60).unwrap();
        assert!(m.value < 1e-6, "{}", m.value);
        assert!((shift_residual(m.lambda, &m.minimizer) - m.value).abs() < 1e-12);
        let far = truncated_shift_min(PlanePoint::real(2.0), 60).unwrap();
        assert!(far.value >= 0.4, "{}", far.value);
        assert!(truncated_shift_min(PlanePoint::ZERO, 3).is_err());
    }

    #[test]
    fn unperturbed_scan() {
        let lambdas = [PlanePoint::real(SQRT_2), PlanePoint::real(1.2)];
        let s = shift_bifurcation_scan(&ShiftPerturbation::Zero, 30, &lambdas, &[1e-2, 1e-3], DEFAULT_SHIFT_TOL).unwrap();
        assert_eq!(s.points[0].verdict, ScanVerdict::Candidate);
        assert_eq!(s.points[1].verdict, ScanVerdict::Rejected);
        assert!(s.points[1].residuals.iter().all(|r| r.normalized > 0.1));
    }
}
