//! Dini derivatives of real functions and the interval form of the
//! spectrum they determine.
//!
//! For `f: R -> R` at `p`, with `D_-`, `D^-`, `D_+`, `D^+` the lower/upper
//! left and right Dini derivatives:
//!
//! * `sigma(f,p)` is the closed interval between the smallest and the largest
//!   of the four (intersected with `R`);
//! * `Sigma(f,p)` is the union of `[D_-, D^-]` and `[D_+, D^+]`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ExtendedReal, NegInf, PosInf};
use crate::interval::{Interval, RealIntervalSet};
use crate::map::MapSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiniQuad {
    pub d_minus_low: ExtendedReal,
    pub d_minus_high: ExtendedReal,
    pub d_plus_low: ExtendedReal,
    pub d_plus_high: ExtendedReal,
}

impl DiniQuad {
    /// Panics unless `d_minus_low <= d_minus_high` and `d_plus_low <= d_plus_high`.
    pub fn new(
        d_minus_low: ExtendedReal,
        d_minus_high: ExtendedReal,
        d_plus_low: ExtendedReal,
        d_plus_high: ExtendedReal,
    ) -> Self {
        assert!(d_minus_low <= d_minus_high, "left Dini derivatives out of order");
        assert!(d_plus_low <= d_plus_high, "right Dini derivatives out of order");
        DiniQuad {
            d_minus_low,
            d_minus_high,
            d_plus_low,
            d_plus_high,
        }
    }

    pub fn differentiable(d: f64) -> Self {
        let d = ExtendedReal::new(d);
        DiniQuad::new(d, d, d, d)
    }

    pub fn components(&self) -> [ExtendedReal; 4] {
        [
            self.d_minus_low,
            self.d_minus_high,
            self.d_plus_low,
            self.d_plus_high,
        ]
    }

    /// The common value when all four agree and are finite.
    pub fn derivative(&self) -> Option<f64> {
        let c = self.components();
        c.iter().all(|v| *v == c[0]).then_some(c[0]).and_then(|v| v.finite())
    }

    /// Quadruple of `c f`: components scale by `c`, and lower/upper swap
    /// when `c < 0`.
    pub fn scale(&self, c: f64) -> Self {
        let s = |v: ExtendedReal| v.scale(c);
        if c >= 0.0 {
            DiniQuad::new(
                s(self.d_minus_low),
                s(self.d_minus_high),
                s(self.d_plus_low),
                s(self.d_plus_high),
            )
        } else {
            DiniQuad::new(
                s(self.d_minus_high),
                s(self.d_minus_low),
                s(self.d_plus_high),
                s(self.d_plus_low),
            )
        }
    }

    /// Quadruple of `f + a x`.
    pub fn shift(&self, a: f64) -> Self {
        let t = |v: ExtendedReal| v.checked_add(ExtendedReal::new(a)).expect("finite shift");
        DiniQuad::new(
            t(self.d_minus_low),
            t(self.d_minus_high),
            t(self.d_plus_low),
            t(self.d_plus_high),
        )
    }
}

impl fmt::Display for DiniQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.d_minus_low, self.d_minus_high, self.d_plus_low, self.d_plus_high
        )
    }
}

/// Exact Dini derivatives from the map's registered provider.
pub fn dini_exact(f: &MapSpec, p: f64) -> Result<DiniQuad> {
    if f.dim() != Some(1) {
        return Err(Error::precondition(format!(
            "Dini derivatives need a real function, `{}` is not one",
            f.name()
        )));
    }
    f.exact_dini(p).ok_or_else(|| {
        Error::unsupported(format!(
            "no exact Dini provider for `{}` at {p}",
            f.name()
        ))
    })
}

/// Geometric step grid `h = h0 ratio^k`, `k = 0..steps`, on both sides of `p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiniGrid {
    pub h0: f64,
    pub ratio: f64,
    pub steps: usize,
    /// Quotients beyond this magnitude count as divergence to infinity.
    pub divergence_threshold: f64,
    /// Add steps at the extremal phases of `sin(1/h)` for maps declaring an
    /// oscillation centre at `p`.
    pub oscillation_hints: bool,
}

impl Default for DiniGrid {
    fn default() -> Self {
        DiniGrid {
            h0: 0.1,
            ratio: 0.6,
            steps: 60,
            divergence_threshold: 1e6,
            oscillation_hints: true,
        }
    }
}

impl DiniGrid {
    pub fn new(h0: f64, ratio: f64, steps: usize) -> Self {
        DiniGrid {
            h0,
            ratio,
            steps,
            ..DiniGrid::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.h0 > 0.0 && self.h0.is_finite()) {
            return Err(Error::precondition("h0 must be positive and finite"));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::precondition("ratio must lie in (0, 1)"));
        }
        if self.steps < 8 {
            return Err(Error::precondition("at least 8 grid steps are required"));
        }
        if !(self.divergence_threshold > 0.0) {
            return Err(Error::precondition("divergence threshold must be positive"));
        }
        Ok(())
    }
}

/// Which components were set to an infinity by the divergence rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DivergenceFlags {
    pub d_minus_low: bool,
    pub d_minus_high: bool,
    pub d_plus_low: bool,
    pub d_plus_high: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiniEstimate {
    pub quad: DiniQuad,
    pub divergent: DivergenceFlags,
    /// Difference quotients used on the left / right, hints included.
    pub left_samples: usize,
    pub right_samples: usize,
}

struct Side {
    low: ExtendedReal,
    high: ExtendedReal,
    low_divergent: bool,
    high_divergent: bool,
    samples: usize,
}

fn estimate_side(f: &MapSpec, p: f64, fp: f64, sign: f64, grid: &DiniGrid, hints: bool) -> Result<Side> {
    // Steps below sqrt(eps)|p| only measure round-off in f(p + h) - f(p).
    let floor = f64::EPSILON.sqrt() * p.abs();
    let steps: Vec<f64> = (0..grid.steps)
        .map(|k| grid.h0 * grid.ratio.powi(k as i32))
        .filter(|h| *h > floor && (p + sign * h) != p)
        .collect();
    if steps.len() < 4 {
        return Err(Error::Numeric(format!(
            "step grid collapsed to {} usable points at p = {p}",
            steps.len()
        )));
    }
    let tail = &steps[steps.len() / 2..];
    let (h_small, h_large) = (tail[tail.len() - 1], tail[0]);
    let h_prev = steps[steps.len() - 2];

    let mut hs: Vec<f64> = tail.to_vec();
    if hints {
        for &h in tail {
            let k0 = (1.0 / (PI * h) - 0.5).floor().max(0.0);
            for k in [k0, k0 + 1.0] {
                let hk = 1.0 / (PI / 2.0 + k * PI);
                if hk >= h_small * 0.5 && hk <= h_large {
                    hs.push(hk);
                }
            }
        }
    }

    let quotient = |h: f64| -> Result<f64> {
        let x = p + sign * h;
        let fx = f.eval1(x).map_err(|e| Error::Grid {
            h: sign * h,
            source: Box::new(e),
        })?;
        Ok((fx - fp) / (x - p))
    };

    let t = grid.divergence_threshold;
    let mut qmin = f64::INFINITY;
    let mut qmax = f64::NEG_INFINITY;
    let mut last_all_above = true;
    let mut last_all_below = true;
    for &h in &hs {
        let q = quotient(h)?;
        qmin = qmin.min(q);
        qmax = qmax.max(q);
        if h < h_prev {
            last_all_above &= q > t;
            last_all_below &= q < -t;
        }
    }

    let (low, low_divergent) = if qmin < -t {
        (NegInf, true)
    } else if last_all_above {
        (PosInf, true)
    } else {
        (ExtendedReal::new(qmin), false)
    };
    let (high, high_divergent) = if qmax > t {
        (PosInf, true)
    } else if last_all_below {
        (NegInf, true)
    } else {
        (ExtendedReal::new(qmax), false)
    };
    Ok(Side {
        low,
        high,
        low_divergent,
        high_divergent,
        samples: hs.len(),
    })
}

/// Tail-window estimate of the four Dini derivatives of `f` at `p`.
///
/// Each side uses the last half of the geometric step grid. A quotient beyond
/// the divergence threshold sends the corresponding extremum to infinity; a
/// lower (upper) extremum is sent to `+inf` (`-inf`) when every sample on the
/// last grid interval lies beyond the threshold on that side. This is a
/// heuristic, not a certificate.
pub fn dini_estimate(f: &MapSpec, p: f64, grid: &DiniGrid) -> Result<DiniEstimate> {
    grid.validate()?;
    if f.dim() != Some(1) {
        return Err(Error::precondition(format!(
            "Dini derivatives need a real function, `{}` is not one",
            f.name()
        )));
    }
    let fp = f.eval1(p)?;
    let hints = grid.oscillation_hints && f.oscillation_center() == Some(p);
    let left = estimate_side(f, p, fp, -1.0, grid, hints)?;
    let right = estimate_side(f, p, fp, 1.0, grid, hints)?;
    Ok(DiniEstimate {
        quad: DiniQuad::new(left.low, left.high, right.low, right.high),
        divergent: DivergenceFlags {
            d_minus_low: left.low_divergent,
            d_minus_high: left.high_divergent,
            d_plus_low: right.low_divergent,
            d_plus_high: right.high_divergent,
        },
        left_samples: left.samples,
        right_samples: right.samples,
    })
}

/// `sigma(f,p)`: the interval from the smallest to the largest component.
pub fn sigma_1d(q: &DiniQuad) -> RealIntervalSet {
    let c = q.components();
    let lo = ExtendedReal::inf_of(c);
    let hi = ExtendedReal::sup_of(c);
    RealIntervalSet::from_intervals(Interval::between(lo, hi))
}

/// `Sigma(f,p)`: the union of the left and right Dini intervals.
pub fn big_sigma_1d(q: &DiniQuad) -> RealIntervalSet {
    RealIntervalSet::from_intervals(
        Interval::between(q.d_minus_low, q.d_minus_high)
            .into_iter()
            .chain(Interval::between(q.d_plus_low, q.d_plus_high)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(v: [f64; 4]) -> DiniQuad {
        DiniQuad::new(v[0].into(), v[1].into(), v[2].into(), v[3].into())
    }

    #[test]
    fn scaling_reorders_for_negative_factor() {
        let q = quad([-1.0, 2.0, 3.0, f64::INFINITY]);
        let s = q.scale(-2.0);
        assert_eq!(s, quad([-4.0, 2.0, f64::NEG_INFINITY, -6.0]));
    }

    #[test]
    fn absolute_value_quad() {
        let f = MapSpec::from_name("abs", &[]).unwrap();
        let q = dini_exact(&f, 0.0).unwrap();
        assert_eq!(q, quad([-1.0, -1.0, 1.0, 1.0]));
        assert_eq!(big_sigma_1d(&q).to_string(), "{-1} U {1}");
        assert_eq!(sigma_1d(&q).to_string(), "[-1,1]");
    }

    #[test]
    fn linear_function_estimate_is_exact() {
        let f = MapSpec::linear(nalgebra::DMatrix::from_element(1, 1, 3.0)).unwrap();
        let est = dini_estimate(&f, 5.0, &DiniGrid::new(0.1, 0.5, 8)).unwrap();
        for c in est.quad.components() {
            assert!((c.to_f64() - 3.0).abs() < 1e-10, "{c}");
        }
    }

    #[test]
    fn grid_validation() {
        let f = MapSpec::from_name("abs", &[]).unwrap();
        assert!(dini_estimate(&f, 0.0, &DiniGrid::new(0.1, 1.5, 40)).is_err());
        assert!(dini_estimate(&f, 0.0, &DiniGrid::new(-0.1, 0.5, 40)).is_err());
        assert!(dini_estimate(&f, 0.0, &DiniGrid::new(0.1, 0.5, 4)).is_err());
    }

    #[test]
    fn no_provider_is_unsupported() {
        let f = MapSpec::black_box(crate::map::BlackBox::new("cube", 1, |x| vec![x[0].powi(3)]));
        assert!(matches!(dini_exact(&f, 0.0), Err(Error::Unsupported(_))));
    }
}
