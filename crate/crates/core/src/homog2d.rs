//! Planar positively homogeneous maps, `R^2 = C`.
//!
//! For such `f`, `lambda z = f(z)` on `|z| = 1` forces
//! `lambda = f(e^{it}) e^{-it}`, so `Sigma(f,0)` is the image of that curve.
//! The rest of `sigma(f,0)` is decided cell by cell with a winding-number
//! proxy, see [`classify_plane`].

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{estimate_rates, RateSchedule};
use crate::ext::ExtendedReal;
use crate::lowdisc::disk_points;
use crate::map::MapSpec;
use crate::plane::PlanePoint;
use crate::search::{compass, golden_section, CompassOptions};

/// Printed with every classification: the proxy is ours, not a theorem.
pub const WINDING_ASSUMPTION: &str = "winding != 0 => regular (sound); winding == 0 => in spectrum (heuristic proxy for not zero-epi)";

fn require_homogeneous_planar(f: &MapSpec) -> Result<()> {
    if !f.is_planar() {
        return Err(Error::precondition(format!("`{}` is not a planar map", f.name())));
    }
    if !f.is_homogeneous() {
        return Err(Error::precondition(format!(
            "`{}` is not flagged positively homogeneous",
            f.name()
        )));
    }
    Ok(())
}

/// `f(e^{it}) e^{-it}`.
pub fn sigma_point(f: &MapSpec, theta: f64) -> Result<PlanePoint> {
    let u = Complex64::from_polar(1.0, theta);
    Ok((f.eval_c(u)? * u.conj()).into())
}

/// `f(r e^{it}) e^{-it} / r`: the quotient `f(x)/x` on the circle of radius `r`.
/// For homogeneous `f` it does not depend on `r` and traces `Sigma`.
pub fn quotient_curve(f: &MapSpec, radius: f64, samples: usize) -> Result<Vec<PlanePoint>> {
    (0..samples)
        .map(|k| {
            let u = Complex64::from_polar(1.0, TAU * k as f64 / samples as f64);
            Ok((f.eval_c(u * radius)? * u.conj() / radius).into())
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurveSample {
    pub theta: f64,
    pub lambda: PlanePoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveOptions {
    /// Initial equispaced samples in `[0, 2pi)`.
    pub samples: usize,
    /// Arcs whose image chord exceeds this are bisected.
    pub chord: f64,
    pub max_samples: usize,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions {
            samples: 4096,
            chord: 1e-3,
            max_samples: 1 << 20,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaCurve {
    pub samples: Vec<CurveSample>,
    pub closed: bool,
    pub chord_bound: f64,
    /// False when the sample cap stopped refinement early.
    pub chord_bound_met: bool,
    /// Set when the whole curve collapses to one point.
    pub degenerate: Option<PlanePoint>,
}

impl SigmaCurve {
    pub fn points(&self) -> impl Iterator<Item = PlanePoint> + '_ {
        self.samples.iter().map(|s| s.lambda)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Polyline segments, including the closing one.
    pub fn segments(&self) -> impl Iterator<Item = (PlanePoint, PlanePoint)> + '_ {
        let n = self.samples.len();
        let m = if self.closed { n } else { n.saturating_sub(1) };
        (0..m).map(move |k| (self.samples[k].lambda, self.samples[(k + 1) % n].lambda))
    }

    pub fn max_chord(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(b)).fold(0.0, f64::max)
    }

    pub fn diameter(&self) -> f64 {
        bbox_diameter(self.points())
    }

    /// Distance from `p` to the polyline.
    pub fn distance_to(&self, p: PlanePoint) -> f64 {
        self.segments()
            .map(|(a, b)| segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// `c * curve`, pointwise.
    pub fn scaled(&self, c: Complex64) -> Vec<PlanePoint> {
        self.points().map(|p| (p.to_complex() * c).into()).collect()
    }
}

fn bbox_diameter(points: impl Iterator<Item = PlanePoint>) -> f64 {
    let (mut xmin, mut xmax, mut ymin, mut ymax) =
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        xmin = xmin.min(p.a);
        xmax = xmax.max(p.a);
        ymin = ymin.min(p.b);
        ymax = ymax.max(p.b);
    }
    if xmin > xmax {
        return 0.0;
    }
    (xmax - xmin).hypot(ymax - ymin)
}

pub(crate) fn segment_distance(p: PlanePoint, a: PlanePoint, b: PlanePoint) -> f64 {
    let (dx, dy) = (b.a - a.a, b.b - a.b);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.a - a.a) * dx + (p.b - a.b) * dy) / len2).clamp(0.0, 1.0)
    };
    p.dist(PlanePoint::new(a.a + t * dx, a.b + t * dy))
}

/// `Sigma(f,0)` of a homogeneous planar map, refined until every chord is
/// within `opts.chord` (or the sample cap is hit).
pub fn sigma_curve(f: &MapSpec, opts: &CurveOptions) -> Result<SigmaCurve> {
    require_homogeneous_planar(f)?;
    if opts.samples < 3 {
        return Err(Error::precondition("at least 3 curve samples are required"));
    }
    let n0 = opts.samples;
    let base: Vec<CurveSample> = (0..n0)
        .map(|k| {
            let theta = TAU * k as f64 / n0 as f64;
            sigma_point(f, theta).map(|lambda| CurveSample { theta, lambda })
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::with_capacity(n0);
    let mut met = true;
    let mut budget = opts.max_samples.saturating_sub(n0);
    for k in 0..n0 {
        let a = base[k];
        let b = if k + 1 < n0 {
            base[k + 1]
        } else {
            CurveSample {
                theta: TAU,
                lambda: base[0].lambda,
            }
        };
        out.push(a);
        // Depth-first bisection keeps the output ordered by theta.
        let mut stack = vec![(a, b)];
        let mut pending: Vec<CurveSample> = Vec::new();
        while let Some((l, r)) = stack.pop() {
            if l.lambda.dist(r.lambda) <= opts.chord {
                if r.theta < b.theta {
                    pending.push(r);
                }
                continue;
            }
            let mid = 0.5 * (l.theta + r.theta);
            if budget == 0 || mid <= l.theta || mid >= r.theta {
                met = false;
                if r.theta < b.theta {
                    pending.push(r);
                }
                continue;
            }
            budget -= 1;
            let m = CurveSample {
                theta: mid,
                lambda: sigma_point(f, mid)?,
            };
            stack.push((m, r));
            stack.push((l, m));
        }
        out.extend(pending);
    }

    let diameter = bbox_diameter(out.iter().map(|s| s.lambda));
    let degenerate = (diameter < 1e-9).then(|| out[0].lambda);
    Ok(SigmaCurve {
        samples: out,
        closed: true,
        chord_bound: opts.chord,
        chord_bound_met: met,
        degenerate,
    })
}

/// `d(f)` and `|f|`: min and max of `|f|` on the unit circle, from `samples`
/// equispaced angles polished by golden-section search.
pub fn d_and_quasinorm(f: &MapSpec, samples: usize) -> Result<(f64, f64)> {
    require_homogeneous_planar(f)?;
    let n = samples.max(8);
    let h = TAU / n as f64;
    let norm_at = |t: f64| -> Result<f64> { Ok(f.eval_c(Complex64::from_polar(1.0, t))?.norm()) };
    let values: Vec<f64> = (0..n).map(|k| norm_at(k as f64 * h)).collect::<Result<_>>()?;
    let (kmin, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let (kmax, _) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let safe = |t: f64| norm_at(t).unwrap_or(f64::NAN);
    let t0 = kmin as f64 * h;
    let (_, dmin) = golden_section(&safe, t0 - h, t0 + h, 1e-12);
    let t1 = kmax as f64 * h;
    let (_, qneg) = golden_section(|t| -safe(t), t1 - h, t1 + h, 1e-12);
    let d = values[kmin].min(if dmin.is_nan() { f64::INFINITY } else { dmin });
    let q = values[kmax].max(if qneg.is_nan() { f64::NEG_INFINITY } else { -qneg });
    Ok((d, q))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindingOptions {
    pub samples: usize,
    /// Relative margin below which the curve counts as passing through 0.
    pub margin_tol: f64,
    pub max_evals: usize,
}

impl Default for WindingOptions {
    fn default() -> Self {
        WindingOptions {
            samples: 64,
            margin_tol: 1e-9,
            max_evals: 1 << 16,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Winding {
    pub winding: i64,
    /// Smallest sampled distance of the curve to the origin.
    pub margin: f64,
    pub samples: usize,
}

/// Winding number around 0 of the closed curve `g` on `[0, 2pi]`, refining
/// every arc whose argument increment is not below `pi/2`.
pub fn curve_winding<G>(g: G, samples: usize, margin_abs: f64, max_evals: usize) -> Result<Winding>
where
    G: Fn(f64) -> Result<Complex64>,
{
    let n = samples.max(4);
    let mut margin = f64::INFINITY;
    let evals = std::cell::Cell::new(0usize);
    let eval = |t: f64, margin: &mut f64| -> Result<Complex64> {
        let z = g(t)?;
        evals.set(evals.get() + 1);
        *margin = margin.min(z.norm());
        if z.norm() <= margin_abs {
            return Err(Error::Admissibility {
                margin: z.norm(),
                tolerance: margin_abs,
            });
        }
        Ok(z)
    };
    let first = eval(0.0, &mut margin)?;
    let mut prev = (0.0, first);
    let mut total = 0.0;
    for k in 1..=n {
        let t = TAU * k as f64 / n as f64;
        let z = if k == n { first } else { eval(t, &mut margin)? };
        let mut stack = vec![(prev, (t, z))];
        while let Some(((ta, za), (tb, zb))) = stack.pop() {
            let step = (zb * za.conj()).arg();
            if step.abs() < FRAC_PI_2 {
                total += step;
                continue;
            }
            if evals.get() >= max_evals {
                return Err(Error::Admissibility {
                    margin,
                    tolerance: margin_abs,
                });
            }
            let tm = 0.5 * (ta + tb);
            let zm = eval(tm, &mut margin)?;
            stack.push(((tm, zm), (tb, zb)));
            stack.push(((ta, za), (tm, zm)));
        }
        prev = (t, z);
    }
    let turns = total / TAU;
    let winding = turns.round();
    if (turns - winding).abs() > 0.25 {
        return Err(Error::Numeric(format!("winding sum {turns} is not near an integer")));
    }
    Ok(Winding {
        winding: winding as i64,
        margin,
        samples: evals.get(),
    })
}

/// Winding of `t -> lambda r e^{it} - f(r e^{it})` around 0.
pub fn winding_number(f: &MapSpec, lambda: PlanePoint, radius: f64, opts: &WindingOptions) -> Result<Winding> {
    if !f.is_planar() {
        return Err(Error::precondition(format!("`{}` is not a planar map", f.name())));
    }
    if !(radius > 0.0) {
        return Err(Error::precondition("radius must be positive"));
    }
    let l = lambda.to_complex();
    curve_winding(
        |t| {
            let z = Complex64::from_polar(radius, t);
            Ok(l * z - f.eval_c(z)?)
        },
        opts.samples,
        opts.margin_tol * radius,
        opts.max_evals,
    )
}

/// Winding of `t -> f(r e^{it})` around 0.
pub fn map_winding(f: &MapSpec, radius: f64, opts: &WindingOptions) -> Result<Winding> {
    if !f.is_planar() {
        return Err(Error::precondition(format!("`{}` is not a planar map", f.name())));
    }
    curve_winding(
        |t| f.eval_c(Complex64::from_polar(radius, t)),
        opts.samples,
        opts.margin_tol * radius,
        opts.max_evals,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Label {
    InSpectrum,
    Regular,
    Band,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn square(half_width: f64, res: usize) -> Self {
        GridSpec {
            xmin: -half_width,
            xmax: half_width,
            ymin: -half_width,
            ymax: half_width,
            nx: res,
            ny: res,
        }
    }

    pub fn dx(&self) -> f64 {
        (self.xmax - self.xmin) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.ymax - self.ymin) / self.ny as f64
    }

    pub fn cell_diagonal(&self) -> f64 {
        self.dx().hypot(self.dy())
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    /// Centre of cell `(i, j)`; `j = 0` is the bottom row.
    pub fn center(&self, i: usize, j: usize) -> PlanePoint {
        PlanePoint::new(
            self.xmin + (i as f64 + 0.5) * self.dx(),
            self.ymin + (j as f64 + 0.5) * self.dy(),
        )
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.xmin, self.xmax, self.ymin, self.ymax]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.xmin >= self.xmax || self.ymin >= self.ymax {
            return Err(Error::precondition("grid bounds must be finite with min < max"));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::precondition("grid resolution must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassifyOptions {
    pub grid: GridSpec,
    /// Defaults to twice the cell diagonal.
    pub band_radius: Option<f64>,
    pub curve: CurveOptions,
    pub winding: WindingOptions,
}

impl ClassifyOptions {
    pub fn new(grid: GridSpec) -> Self {
        ClassifyOptions {
            grid,
            band_radius: None,
            curve: CurveOptions::default(),
            winding: WindingOptions::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BandViolation {
    pub i: usize,
    pub j: usize,
    pub lambda: PlanePoint,
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaneSpectrum {
    pub curve: SigmaCurve,
    pub grid: GridSpec,
    /// Row-major, bottom row first: `labels[j * nx + i]`.
    pub labels: Vec<Label>,
    pub band_radius: f64,
    pub violations: Vec<BandViolation>,
    /// 4-connected components of off-band cells.
    pub components: usize,
    /// Components whose cells carry both labels.
    pub inconsistent_components: usize,
    /// Band cells whose tentative winding was 0.
    pub band_in_spectrum: usize,
    pub assumption: &'static str,
}

impl PlaneSpectrum {
    pub fn label(&self, i: usize, j: usize) -> Label {
        self.labels[j * self.grid.nx + i]
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|l| **l == label).count()
    }

    /// Area of `sigma` from InSpectrum cells plus band cells with winding 0.
    pub fn in_spectrum_area(&self) -> f64 {
        (self.count(Label::InSpectrum) + self.band_in_spectrum) as f64 * self.grid.cell_area()
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, PlanePoint, Label)> + '_ {
        let g = self.grid;
        (0..g.ny).flat_map(move |j| (0..g.nx).map(move |i| (i, j, g.center(i, j), self.label(i, j))))
    }
}

/// Uniform bucket grid over the classification window holding the curve
/// segments that come within `reach` of each bucket.
struct SegmentIndex {
    grid: GridSpec,
    nbx: usize,
    nby: usize,
    size: f64,
    buckets: Vec<Vec<(PlanePoint, PlanePoint)>>,
}

impl SegmentIndex {
    fn new(curve: &SigmaCurve, grid: GridSpec, reach: f64) -> Self {
        let size = reach.max(grid.cell_diagonal());
        let nbx = (((grid.xmax - grid.xmin) / size).ceil() as usize).max(1);
        let nby = (((grid.ymax - grid.ymin) / size).ceil() as usize).max(1);
        let mut buckets = vec![Vec::new(); nbx * nby];
        let clamp_x = |x: f64| (((x - grid.xmin) / size).floor().max(0.0) as usize).min(nbx - 1);
        let clamp_y = |y: f64| (((y - grid.ymin) / size).floor().max(0.0) as usize).min(nby - 1);
        for (a, b) in curve.segments() {
            let (x0, x1) = (a.a.min(b.a) - reach, a.a.max(b.a) + reach);
            let (y0, y1) = (a.b.min(b.b) - reach, a.b.max(b.b) + reach);
            if x1 < grid.xmin || x0 > grid.xmax || y1 < grid.ymin || y0 > grid.ymax {
                continue;
            }
            for by in clamp_y(y0)..=clamp_y(y1) {
                for bx in clamp_x(x0)..=clamp_x(x1) {
                    buckets[by * nbx + bx].push((a, b));
                }
            }
        }
        SegmentIndex {
            grid,
            nbx,
            nby,
            size,
            buckets,
        }
    }

    fn within(&self, p: PlanePoint, reach: f64) -> bool {
        let bx = (((p.a - self.grid.xmin) / self.size).floor().max(0.0) as usize).min(self.nbx - 1);
        let by = (((p.b - self.grid.ymin) / self.size).floor().max(0.0) as usize).min(self.nby - 1);
        self.buckets[by * self.nbx + bx]
            .iter()
            .any(|(a, b)| segment_distance(p, *a, *b) <= reach)
    }
}

enum CellOutcome {
    Label(Label),
    Band(Option<i64>),
    Violation(f64, Option<i64>),
}

/// Region decomposition of `sigma(f,0)` on a grid of cell centres.
///
/// Cells within the band radius of the `Sigma` curve are `Band`. Elsewhere
/// a nonzero winding of `lambda - f` on the unit circle labels the cell
/// `Regular`, a zero winding `InSpectrum` (see [`WINDING_ASSUMPTION`]).
pub fn classify_plane(f: &MapSpec, opts: &ClassifyOptions) -> Result<PlaneSpectrum> {
    require_homogeneous_planar(f)?;
    let grid = opts.grid;
    grid.validate()?;
    let band = opts.band_radius.unwrap_or(2.0 * grid.cell_diagonal());
    if !(band >= 0.0) {
        return Err(Error::precondition("band radius must be non-negative"));
    }
    let curve = sigma_curve(f, &opts.curve)?;
    let index = SegmentIndex::new(&curve, grid, band);

    let outcomes: Vec<CellOutcome> = (0..grid.nx * grid.ny)
        .into_par_iter()
        .map(|c| {
            let (i, j) = (c % grid.nx, c / grid.nx);
            let lambda = grid.center(i, j);
            let w = winding_number(f, lambda, 1.0, &opts.winding);
            if index.within(lambda, band) {
                return Ok(CellOutcome::Band(w.ok().map(|w| w.winding)));
            }
            match w {
                Ok(w) if w.winding != 0 => Ok(CellOutcome::Label(Label::Regular)),
                Ok(_) => Ok(CellOutcome::Label(Label::InSpectrum)),
                Err(Error::Admissibility { margin, .. }) => Ok(CellOutcome::Violation(margin, None)),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let mut labels = Vec::with_capacity(outcomes.len());
    let mut violations = Vec::new();
    let mut band_in_spectrum = 0;
    for (c, o) in outcomes.into_iter().enumerate() {
        let (i, j) = (c % grid.nx, c / grid.nx);
        labels.push(match o {
            CellOutcome::Label(l) => l,
            CellOutcome::Band(w) | CellOutcome::Violation(_, w) => {
                if let CellOutcome::Violation(margin, _) = o {
                    violations.push(BandViolation {
                        i,
                        j,
                        lambda: grid.center(i, j),
                        margin,
                    });
                }
                if w == Some(0) {
                    band_in_spectrum += 1;
                }
                Label::Band
            }
        });
    }
    let (components, inconsistent_components) = component_check(&labels, grid.nx, grid.ny);
    Ok(PlaneSpectrum {
        curve,
        grid,
        labels,
        band_radius: band,
        violations,
        components,
        inconsistent_components,
        band_in_spectrum,
        assumption: WINDING_ASSUMPTION,
    })
}

fn component_check(labels: &[Label], nx: usize, ny: usize) -> (usize, usize) {
    let mut seen = vec![false; labels.len()];
    let mut components = 0;
    let mut inconsistent = 0;
    let mut queue = VecDeque::new();
    for start in 0..labels.len() {
        if seen[start] || labels[start] == Label::Band {
            continue;
        }
        components += 1;
        let first = labels[start];
        let mut mixed = false;
        seen[start] = true;
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            mixed |= labels[c] != first;
            let (i, j) = (c % nx, c / nx);
            let mut visit = |n: usize| {
                if !seen[n] && labels[n] != Label::Band {
                    seen[n] = true;
                    queue.push_back(n);
                }
            };
            if i > 0 {
                visit(c - 1);
            }
            if i + 1 < nx {
                visit(c + 1);
            }
            if j > 0 {
                visit(c - nx);
            }
            if j + 1 < ny {
                visit(c + nx);
            }
        }
        inconsistent += mixed as usize;
    }
    (components, inconsistent)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RoucheOptions {
    pub starts: usize,
    pub tol: f64,
    pub seed: u64,
    /// Sampling density for the precondition checks.
    pub check_samples: usize,
}

impl Default for RoucheOptions {
    fn default() -> Self {
        RoucheOptions {
            starts: 64,
            tol: 1e-10,
            seed: 0,
            check_samples: 1024,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RoucheSolution {
    pub x: [f64; 2],
    pub residual: f64,
    /// Multistart index that succeeded.
    pub start: usize,
    /// Sampled `max |k|` on the disk and `min |f|` on the circle.
    pub k_max: f64,
    pub f_min: f64,
    pub f_winding: i64,
}

/// Solves `f(x) = k(x)` in the open disk of radius `radius` when `f` winds
/// around 0 on the boundary and `k` is dominated there by `f`.
pub fn rouche_coincidence(f: &MapSpec, k: &MapSpec, radius: f64, opts: &RoucheOptions) -> Result<RoucheSolution> {
    if !f.is_planar() || !k.is_planar() {
        return Err(Error::precondition("both maps must be planar"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::precondition("radius must be positive and finite"));
    }
    let w = match map_winding(f, radius, &WindingOptions::default()) {
        Ok(w) => w,
        Err(Error::Admissibility { margin, .. }) => {
            return Err(Error::precondition(format!(
                "f comes within {margin:e} of 0 on the circle"
            )))
        }
        Err(e) => return Err(e),
    };
    if w.winding == 0 {
        return Err(Error::precondition("f has winding 0 on the circle"));
    }
    let m = opts.check_samples.max(16);
    let mut f_min = f64::INFINITY;
    for j in 0..m {
        let z = Complex64::from_polar(radius, TAU * j as f64 / m as f64);
        f_min = f_min.min(f.eval_c(z)?.norm());
    }
    let mut k_max: f64 = 0.0;
    let boundary = (0..m).map(|j| {
        let z = Complex64::from_polar(radius, TAU * j as f64 / m as f64);
        [z.re, z.im]
    });
    for p in disk_points(m, radius, opts.seed).into_iter().chain(boundary) {
        k_max = k_max.max(crate::plane::norm(&k.eval(&p)?));
    }
    if k_max >= f_min {
        return Err(Error::precondition(format!(
            "sampled max |k| = {k_max} on the disk is not below min |f| = {f_min} on the circle"
        )));
    }

    let objective = |x: &[f64]| -> f64 {
        if x[0].hypot(x[1]) >= radius {
            return f64::INFINITY;
        }
        match (f.eval(x), k.eval(x)) {
            (Ok(a), Ok(b)) => (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2),
            _ => f64::INFINITY,
        }
    };
    let copts = CompassOptions {
        initial_step: 0.25 * radius,
        min_step: 1e-16 * radius.max(1.0),
        max_evals: 20_000,
        target: opts.tol * opts.tol,
    };
    let mut best = (f64::INFINITY, [0.0, 0.0]);
    for (s, p) in disk_points(opts.starts.max(1), 0.999 * radius, opts.seed)
        .into_iter()
        .enumerate()
    {
        let (x, v) = compass(objective, &p, copts);
        let r = v.sqrt();
        if r < opts.tol {
            return Ok(RoucheSolution {
                x: [x[0], x[1]],
                residual: r,
                start: s,
                k_max,
                f_min,
                f_winding: w.winding,
            });
        }
        if r < best.0 {
            best = (r, [x[0], x[1]]);
        }
    }
    Err(Error::Solver {
        best_residual: best.0,
        best_point: best.1.to_vec(),
    })
}

/// `q_p(f)`: the bound beyond which every `lambda` is regular. In finite
/// dimension `alpha_p = -inf`, so this is `|f|_p`.
pub fn spectral_radius_bound(f: &MapSpec) -> Result<ExtendedReal> {
    if f.is_planar() && f.is_homogeneous() {
        return d_and_quasinorm(f, 4096).map(|(_, q)| ExtendedReal::new(q));
    }
    let p = f.basepoint.clone();
    estimate_rates(f, &p, &RateSchedule::default()).map(|r| r.q_p)
}

/// Bifurcation points of a homogeneous map at 0 are its eigenvalues, i.e.
/// the `Sigma` curve. A non-homogeneous map with a known homogeneous
/// principal part is reduced to that part.
pub fn bifurcation_set_homog(f: &MapSpec, opts: &CurveOptions) -> Result<SigmaCurve> {
    if f.is_homogeneous() {
        return sigma_curve(f, opts);
    }
    match f.homogeneous_principal_part() {
        Some(h) => sigma_curve(&h, opts),
        None => Err(Error::precondition(format!(
            "`{}` is neither homogeneous nor has a known homogeneous part",
            f.name()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(name: &str, params: &[f64]) -> MapSpec {
        MapSpec::from_name(name, params).unwrap()
    }

    #[test]
    fn identity_curve_is_a_point() {
        let c = sigma_curve(&named("identity", &[]), &CurveOptions::default()).unwrap();
        assert_eq!(c.degenerate, Some(PlanePoint::new(1.0, 0.0)));
        assert_eq!(c.len(), 4096);
    }

    #[test]
    fn cardioid_point_at_quarter_turn() {
        let p = sigma_point(&named("norm_plus_i_im", &[]), FRAC_PI_2).unwrap();
        assert!((p.a - 1.0).abs() < 1e-15 && (p.b + 1.0).abs() < 1e-15);
        let (a, b) = (p.a, p.b);
        let lhs = (a - 1.0).powi(2) + b * b;
        let rhs = (a * a + b * b - a).powi(2);
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn refinement_meets_chord_bound() {
        let c = sigma_curve(
            &named("norm_plus_i_im", &[]),
            &CurveOptions {
                samples: 16,
                ..CurveOptions::default()
            },
        )
        .unwrap();
        assert!(c.chord_bound_met);
        assert!(c.max_chord() <= 1e-3);
        assert!(c.samples.windows(2).all(|w| w[0].theta < w[1].theta));
        assert!(c.samples.last().unwrap().theta < TAU);
    }

    #[test]
    fn sample_cap_is_reported() {
        let c = sigma_curve(
            &named("abs_re_plus_i_im", &[]),
            &CurveOptions {
                samples: 8,
                chord: 1e-9,
                max_samples: 100,
            },
        )
        .unwrap();
        assert!(!c.chord_bound_met);
        assert!(c.len() <= 100);
    }

    #[test]
    fn non_homogeneous_is_rejected() {
        let e = sigma_curve(&named("norm_plus_i_im_pow", &[2.0]), &CurveOptions::default());
        assert!(matches!(e, Err(Error::Precondition(_))));
    }

    #[test]
    fn quasinorm_values() {
        let (d, q) = d_and_quasinorm(&named("abs_re_plus_i_im", &[]), 1024).unwrap();
        assert!((d - 1.0).abs() < 1e-12 && (q - 1.0).abs() < 1e-12);
        let (d, q) = d_and_quasinorm(&named("identity", &[]), 1024).unwrap();
        assert!((d - 1.0).abs() < 1e-12 && (q - 1.0).abs() < 1e-12);
    }

    #[test]
    fn winding_examples() {
        let o = WindingOptions::default();
        let zero = named("real_linear", &[0.0, 0.0, 0.0, 0.0]);
        assert_eq!(winding_number(&zero, PlanePoint::real(1.0), 1.0, &o).unwrap().winding, 1);
        let conj = named("real_linear", &[1.0, 0.0, 0.0, -1.0]);
        assert_eq!(winding_number(&conj, PlanePoint::ZERO, 1.0, &o).unwrap().winding, -1);
        let f = named("abs_re_plus_i_im", &[]);
        assert_eq!(winding_number(&f, PlanePoint::ZERO, 1.0, &o).unwrap().winding, 0);
        assert!(matches!(
            winding_number(&f, PlanePoint::real(1.0), 1.0, &o),
            Err(Error::Admissibility { .. })
        ));
    }

    #[test]
    fn component_check_counts_mixed_components() {
        use Label::*;
        let labels = [Regular, Regular, Band, InSpectrum, Regular, Band];
        assert_eq!(component_check(&labels, 3, 2), (1, 1));
    }
}
