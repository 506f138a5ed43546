//! Sampling estimators for finite-dimensional maps: local growth rates
//! `d_p` and `|f|_p`, `Sigma` membership, the Jacobian spectrum of `C^1`
//! maps, perturbation checks and a bifurcation scan.
//!
//! Nothing here is certified. `d_p = 0` cannot be proven by sampling, so
//! verdicts that straddle the tolerance come back `Undecided`.

use nalgebra::linalg::Schur;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dini::{big_sigma_1d, dini_estimate, DiniGrid};
use crate::error::{Error, Result};
use crate::ext::{ExtendedReal, PosInf};
use crate::homog2d::quotient_curve;
use crate::lowdisc::sphere_directions;
use crate::map::MapSpec;
use crate::plane::{norm, PlanePoint};
use crate::search::{sphere_compass, CompassOptions};

/// Geometric radii `r0 ratio^k` down to `min_radius`, the last `tail` of
/// which enter the estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateSchedule {
    pub r0: f64,
    pub ratio: f64,
    pub min_radius: f64,
    pub tail: usize,
    pub samples: usize,
    pub seed: u64,
    /// Refine the sampled extrema by compass search on the sphere.
    pub polish: bool,
    pub divergence_threshold: f64,
}

impl Default for RateSchedule {
    fn default() -> Self {
        RateSchedule {
            r0: 0.1,
            ratio: 0.5,
            min_radius: 1e-6,
            tail: 6,
            samples: 1024,
            seed: 0,
            polish: true,
            divergence_threshold: 1e6,
        }
    }
}

impl RateSchedule {
    pub fn radii(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut r = self.r0;
        while r >= self.min_radius && out.len() < 4096 {
            out.push(r);
            r *= self.ratio;
        }
        out
    }

    pub fn tail_radii(&self) -> Vec<f64> {
        let all = self.radii();
        let k = all.len().saturating_sub(self.tail);
        all[k..].to_vec()
    }

    fn validate(&self) -> Result<()> {
        if !(self.r0 > 0.0 && self.r0.is_finite()) {
            return Err(Error::precondition("r0 must be positive"));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::precondition("radius ratio must lie in (0, 1)"));
        }
        if !(self.min_radius > 0.0 && self.min_radius <= self.r0) {
            return Err(Error::precondition("min_radius must lie in (0, r0]"));
        }
        if self.tail == 0 || self.samples == 0 {
            return Err(Error::precondition("tail and samples must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SphereExtrema {
    pub radius: f64,
    /// `min / max` over the sphere of `|f_p(x)| / |x|`.
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalRates {
    pub d_p: ExtendedReal,
    pub q_p: ExtendedReal,
    pub radii_used: Vec<f64>,
    pub samples_per_sphere: usize,
    pub per_radius: Vec<SphereExtrema>,
    pub q_divergent: bool,
}

struct SphereResult {
    min: f64,
    max: f64,
    argmin: Vec<f64>,
}

/// min/max of `|g(r u)| / r` over unit `u`, sampled on `dirs` and polished.
fn sphere_extrema(g: &MapSpec, r: f64, dirs: &[Vec<f64>], polish: bool) -> Result<SphereResult> {
    let n = dirs[0].len();
    let mut x = vec![0.0; n];
    let mut out = vec![0.0; n];
    let ratio = |u: &[f64], x: &mut [f64], out: &mut [f64]| -> Result<f64> {
        x.iter_mut().zip(u).for_each(|(xi, ui)| *xi = r * ui);
        g.eval_into(x, out)?;
        Ok(norm(out) / r)
    };
    let (mut imin, mut imax) = (0, 0);
    let (mut vmin, mut vmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for (k, u) in dirs.iter().enumerate() {
        let v = ratio(u, &mut x, &mut out)?;
        if v < vmin {
            vmin = v;
            imin = k;
        }
        if v > vmax {
            vmax = v;
            imax = k;
        }
    }
    let mut argmin = dirs[imin].clone();
    if polish && n > 1 {
        let opts = CompassOptions {
            initial_step: (4.0 / dirs.len() as f64).powf(1.0 / (n - 1) as f64).min(0.5),
            min_step: 1e-10,
            max_evals: 4000,
            target: 0.0,
        };
        let mut scratch_x = vec![0.0; n];
        let mut scratch_o = vec![0.0; n];
        let (u, v) = sphere_compass(
            |u| ratio(u, &mut scratch_x, &mut scratch_o).unwrap_or(f64::INFINITY),
            &argmin,
            opts,
        );
        if v < vmin {
            vmin = v;
            argmin = u;
        }
        let (_, v) = sphere_compass(
            |u| -ratio(u, &mut scratch_x, &mut scratch_o).unwrap_or(f64::NEG_INFINITY),
            &dirs[imax],
            CompassOptions {
                target: f64::NEG_INFINITY,
                ..opts
            },
        );
        vmax = vmax.max(-v);
    }
    Ok(SphereResult {
        min: vmin,
        max: vmax,
        argmin,
    })
}

/// Estimates `d_p(f)` and `|f|_p` as the min / max of `|f(p+x) - f(p)| / |x|`
/// over low-discrepancy samples of the spheres in the schedule's tail.
pub fn estimate_rates(f: &MapSpec, p: &[f64], schedule: &RateSchedule) -> Result<LocalRates> {
    schedule.validate()?;
    let n = f
        .dim()
        .ok_or_else(|| Error::unsupported(format!("rates of the symbolic map `{}`", f.name())))?;
    let g = f.translate_to_origin(p)?;
    let radii = schedule.tail_radii();
    let dirs = sphere_directions(n, schedule.samples, schedule.seed);
    let per_radius: Vec<SphereExtrema> = radii
        .par_iter()
        .map(|&r| {
            sphere_extrema(&g, r, &dirs, schedule.polish).map(|s| SphereExtrema {
                radius: r,
                min: s.min,
                max: s.max,
            })
        })
        .collect::<Result<_>>()?;
    let d = per_radius.iter().map(|s| s.min).fold(f64::INFINITY, f64::min);
    let q = per_radius.iter().map(|s| s.max).fold(0.0, f64::max);
    let q_divergent = q > schedule.divergence_threshold;
    let d_p = if d > schedule.divergence_threshold {
        PosInf
    } else {
        ExtendedReal::new(d)
    };
    let q_p = if q_divergent { PosInf } else { ExtendedReal::new(q) };
    Ok(LocalRates {
        d_p,
        q_p,
        radii_used: radii,
        samples_per_sphere: dirs.len(),
        per_radius,
        q_divergent,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Membership {
    Member,
    NonMember { margin: f64 },
    /// Per-radius minima on both sides of the tolerance.
    Undecided { minima: Vec<f64> },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }

    pub fn is_non_member(&self) -> bool {
        matches!(self, Membership::NonMember { .. })
    }
}

pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-6;

/// Is `lambda` in `Sigma(f,p)`, i.e. is `d_p(lambda - f) = 0`?
///
/// For real maps in odd dimension `lambda` must be real.
pub fn sigma_membership(
    f: &MapSpec,
    p: &[f64],
    lambda: PlanePoint,
    tol: f64,
    schedule: &RateSchedule,
) -> Result<Membership> {
    let g = f.lambda_minus(lambda)?;
    let rates = estimate_rates(&g, p, schedule)?;
    let minima: Vec<f64> = rates.per_radius.iter().map(|s| s.min).collect();
    if minima.iter().all(|m| *m < tol) {
        Ok(Membership::Member)
    } else if minima.iter().all(|m| *m >= tol) {
        Ok(Membership::NonMember {
            margin: minima.iter().copied().fold(f64::INFINITY, f64::min),
        })
    } else {
        Ok(Membership::Undecided { minima })
    }
}

/// Eigenvalues of the Jacobian at `p`, sorted by real then imaginary part.
/// For `C^1` maps these make up `sigma(f,p)`.
pub fn c1_spectrum(f: &MapSpec, p: &[f64]) -> Result<Vec<Complex64>> {
    let j = f.jacobian(p)?;
    if j.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("Jacobian has non-finite entries".into()));
    }
    let schur = Schur::try_new(j, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numeric("eigenvalue iteration did not converge".into()))?;
    let mut eig: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(eig)
}

/// Collapses eigenvalues closer than `tol` (relative to their size).
pub fn dedup_spectrum(eigs: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for &z in eigs {
        if !out
            .iter()
            .any(|w| (w - z).norm() <= tol * (1.0 + w.norm().max(z.norm())))
        {
            out.push(z);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SpectrumComparison {
    /// Hausdorff distance between the quotient curves `f_p(x)/x` and
    /// `g_p(x)/x` on the smallest tail circle.
    PlaneCurves { radius: f64, hausdorff: f64 },
    /// Hausdorff distance between the two Dini `Sigma` sets (finite parts).
    RealIntervals { f: String, g: String, hausdorff: f64 },
    NotCompared { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum PerturbationReport {
    Equivalent {
        q_difference: f64,
        comparison: SpectrumComparison,
    },
    Inapplicable {
        q_difference: ExtendedReal,
    },
}

pub const DEFAULT_Q_TOL: f64 = 1e-3;

fn hausdorff(a: &[PlanePoint], b: &[PlanePoint]) -> f64 {
    let directed = |x: &[PlanePoint], y: &[PlanePoint]| {
        x.par_iter()
            .map(|p| y.iter().map(|q| p.dist(*q)).fold(f64::INFINITY, f64::min))
            .reduce(|| 0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Checks `q_p(f - g) = 0`; when it holds, `f` and `g` have the same
/// spectrum at `p` and the computed spectra are compared.
pub fn perturbation_equivalence_check(
    f: &MapSpec,
    g: &MapSpec,
    p: &[f64],
    q_tol: f64,
    schedule: &RateSchedule,
) -> Result<PerturbationReport> {
    let diff = f.minus(g)?;
    let rates = estimate_rates(&diff, p, schedule)?;
    let q = rates.q_p;
    if q.finite().map_or(true, |v| v > q_tol) {
        return Ok(PerturbationReport::Inapplicable { q_difference: q });
    }
    let comparison = match f.dim() {
        Some(2) => {
            let r = *rates.radii_used.last().expect("non-empty schedule");
            let fp = f.translate_to_origin(p)?;
            let gp = g.translate_to_origin(p)?;
            let a = quotient_curve(&fp, r, schedule.samples)?;
            let b = quotient_curve(&gp, r, schedule.samples)?;
            SpectrumComparison::PlaneCurves {
                radius: r,
                hausdorff: hausdorff(&a, &b),
            }
        }
        Some(1) => {
            let sig = |m: &MapSpec| -> Result<_> {
                let q = match m.exact_dini(p[0]) {
                    Some(q) => q,
                    None => dini_estimate(m, p[0], &DiniGrid::default())?.quad,
                };
                Ok(big_sigma_1d(&q))
            };
            let (sf, sg) = (sig(f)?, sig(g)?);
            let ends = |s: &crate::interval::RealIntervalSet| -> Vec<PlanePoint> {
                s.intervals()
                    .iter()
                    .flat_map(|iv| [iv.lo(), iv.hi()])
                    .filter_map(|e| e.finite().map(PlanePoint::real))
                    .collect()
            };
            let (ef, eg) = (ends(&sf), ends(&sg));
            let h = if sf == sg {
                0.0
            } else if ef.is_empty() || eg.is_empty() {
                f64::INFINITY
            } else {
                hausdorff(&ef, &eg)
            };
            SpectrumComparison::RealIntervals {
                f: sf.to_string(),
                g: sg.to_string(),
                hausdorff: h,
            }
        }
        _ => SpectrumComparison::NotCompared {
            reason: "spectra are only compared for real and planar maps".into(),
        },
    };
    Ok(PerturbationReport::Equivalent {
        q_difference: q.to_f64(),
        comparison,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanOptions {
    /// Candidate when the smallest-radius minimum is below this.
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    /// Cross-check candidates against `Sigma` membership.
    pub check_sigma: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            tol: 1e-2,
            samples: 1024,
            seed: 0,
            check_sigma: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScanVerdict {
    Candidate,
    Rejected,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanPoint {
    pub lambda: PlanePoint,
    /// `min |lambda x - f(x)| / r` over `|x| = r`, per radius.
    pub minima: Vec<f64>,
    /// Minimizer on the smallest sphere, as a unit direction.
    pub direction: Vec<f64>,
    pub verdict: ScanVerdict,
    pub sigma: Option<Membership>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BifurcationScan {
    pub radii: Vec<f64>,
    pub tol: f64,
    pub points: Vec<ScanPoint>,
    /// Candidates whose `Sigma` check came back `NonMember`.
    pub outside_sigma: Vec<PlanePoint>,
}

impl BifurcationScan {
    pub fn candidates(&self) -> impl Iterator<Item = &ScanPoint> {
        self.points.iter().filter(|p| p.verdict == ScanVerdict::Candidate)
    }
}

/// Scans `lambda` for small nontrivial solutions of `lambda x = f(x)`.
///
/// For each radius `r` (decreasing), minimizes `|lambda x - f(x)| / r` over
/// `|x| = r`. A `lambda` is a candidate when the minimum on the smallest
/// sphere is below `tol` and has not grown along the schedule.
pub fn bifurcation_scan(
    f: &MapSpec,
    lambdas: &[PlanePoint],
    radii: &[f64],
    opts: &ScanOptions,
) -> Result<BifurcationScan> {
    let n = f
        .dim()
        .ok_or_else(|| Error::unsupported(format!("scan of the symbolic map `{}`", f.name())))?;
    if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::precondition("radii must be positive and non-empty"));
    }
    let zero = vec![0.0; n];
    let f0 = f.eval(&zero)?;
    if norm(&f0) > 1e-14 {
        return Err(Error::precondition(format!(
            "f(0) = {f0:?} is not 0"
        )));
    }
    let mut radii = radii.to_vec();
    radii.sort_by(|a, b| b.total_cmp(a));
    let dirs = sphere_directions(n, opts.samples, opts.seed);
    let membership_schedule = RateSchedule {
        samples: opts.samples,
        seed: opts.seed,
        ..RateSchedule::default()
    };

    let points: Vec<ScanPoint> = lambdas
        .par_iter()
        .map(|&lambda| -> Result<ScanPoint> {
            let g = f.lambda_minus(lambda)?;
            let mut minima = Vec::with_capacity(radii.len());
            let mut direction = Vec::new();
            for &r in &radii {
                let s = sphere_extrema(&g, r, &dirs, true)?;
                minima.push(s.min);
                direction = s.argmin;
            }
            let last = *minima.last().expect("non-empty");
            let first = minima[0];
            let verdict = if last <= opts.tol && last <= first + opts.tol {
                ScanVerdict::Candidate
            } else if last <= 2.0 * opts.tol {
                ScanVerdict::Undecided
            } else {
                ScanVerdict::Rejected
            };
            let sigma = if opts.check_sigma && verdict == ScanVerdict::Candidate {
                Some(sigma_membership(f, &zero, lambda, opts.tol, &membership_schedule)?)
            } else {
                None
            };
            Ok(ScanPoint {
                lambda,
                minima,
                direction,
                verdict,
                sigma,
            })
        })
        .collect::<Result<_>>()?;
    let outside_sigma = points
        .iter()
        .filter(|p| p.sigma.as_ref().is_some_and(Membership::is_non_member))
        .map(|p| p.lambda)
        .collect();
    Ok(BifurcationScan {
        radii,
        tol: opts.tol,
        points,
        outside_sigma,
    })
}
