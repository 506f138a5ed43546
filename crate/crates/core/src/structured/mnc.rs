//! Interval bounds on the local noncompactness rates `alpha_p` and `omega_p`
//! of an operator expression, derived by one bottom-up pass of the
//! inequality rules for scaling, sums and compositions.
//!
//! The setting is an infinite-dimensional space, so rates live in `[0, inf]`.

use serde::{Serialize, Serializer};

use crate::ext::{ExtendedReal, PosInf};

use super::expr::{Atom, OperatorExpr};

/// Closed sub-interval of `[0, +inf]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RateInterval {
    pub lo: ExtendedReal,
    pub hi: ExtendedReal,
}

impl Serialize for RateInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(serializer)
    }
}

impl RateInterval {
    pub fn new(lo: ExtendedReal, hi: ExtendedReal) -> Result<Self, String> {
        if lo < ExtendedReal::ZERO {
            return Err(format!("rate bound {lo} is negative"));
        }
        if lo > hi {
            return Err(format!("empty rate interval [{lo}, {hi}]"));
        }
        Ok(RateInterval { lo, hi })
    }

    pub fn exact(v: f64) -> Self {
        RateInterval::new(v.into(), v.into()).expect("exact rate must be non-negative")
    }

    pub fn unknown() -> Self {
        RateInterval {
            lo: ExtendedReal::ZERO,
            hi: PosInf,
        }
    }

    pub fn contains(&self, v: ExtendedReal) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_interval(&self, other: &RateInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    fn scale(&self, c: f64) -> Self {
        RateInterval {
            lo: self.lo.scale(c),
            hi: self.hi.scale(c),
        }
    }
}

impl std::fmt::Display for RateInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateBounds {
    pub alpha: RateInterval,
    pub omega: RateInterval,
    pub derivation: Vec<String>,
}

/// Product for an upper bound: `0 * inf = inf` (nothing is known).
fn mul_upper(a: ExtendedReal, b: ExtendedReal) -> ExtendedReal {
    match (a, b) {
        (PosInf, _) | (_, PosInf) => PosInf,
        (a, b) => ExtendedReal::new(a.to_f64() * b.to_f64()),
    }
}

/// Product for a lower bound: `0 * inf = 0`.
fn mul_lower(a: ExtendedReal, b: ExtendedReal) -> ExtendedReal {
    match (a, b) {
        (ExtendedReal::Finite(x), _) | (_, ExtendedReal::Finite(x)) if x == 0.0 => ExtendedReal::ZERO,
        (PosInf, _) | (_, PosInf) => PosInf,
        (a, b) => ExtendedReal::new(a.to_f64() * b.to_f64()),
    }
}

fn add(a: ExtendedReal, b: ExtendedReal) -> ExtendedReal {
    a.checked_add(b).expect("rates are non-negative")
}

/// `a - b` as a lower bound, clamped at zero; `inf - inf` gives no information.
fn sub_lower(a: ExtendedReal, b: ExtendedReal) -> ExtendedReal {
    a.checked_sub(b).unwrap_or(ExtendedReal::ZERO).max(ExtendedReal::ZERO)
}

fn bounds(alpha: RateInterval, omega: RateInterval, derivation: Vec<String>) -> RateBounds {
    RateBounds {
        alpha,
        omega,
        derivation,
    }
}

fn atom_bounds(a: &Atom) -> RateBounds {
    let exact = |v: f64, why: String| {
        let r = RateInterval::exact(v);
        bounds(r, r, vec![why])
    };
    let compact = |what: &str| {
        let zero = RateInterval::exact(0.0);
        bounds(
            zero,
            zero,
            vec![format!(
                "{what}: locally compact, so alpha = 0 and omega <= alpha gives omega = 0"
            )],
        )
    };
    match a {
        Atom::Identity => exact(1.0, "identity: alpha = omega = 1".into()),
        Atom::ScalarMultiple(re, im) => {
            let c = re.hypot(*im);
            exact(c, format!("scalar: alpha = omega = |c| = {c}"))
        }
        Atom::IsometryOntoCodim(k) => exact(
            1.0,
            format!("isometry (codim {k}): alpha = omega = 1"),
        ),
        Atom::CompactLinear => compact("compact"),
        Atom::FiniteRank(r) => compact(&format!("finite_rank({r})")),
        Atom::LocallyCompactNonlinear => compact("locally_compact"),
        Atom::KnownRates { alpha, omega, .. } => bounds(
            *alpha,
            *omega,
            vec![format!("known: alpha in {alpha}, omega in {omega}")],
        ),
        Atom::Unknown(name) => bounds(
            RateInterval::unknown(),
            RateInterval::unknown(),
            vec![format!("{name}: no rule")],
        ),
    }
}

/// Enforces `omega <= alpha` on the bounds. Inconsistent inputs (an omega
/// lower bound above the alpha upper bound) are left alone and flagged.
fn tighten(mut b: RateBounds, node: &str) -> RateBounds {
    if b.omega.lo > b.alpha.hi {
        b.derivation.push(format!(
            "{node}: inconsistent input rates (omega >= {} > alpha upper {})",
            b.omega.lo, b.alpha.hi
        ));
        return b;
    }
    if b.omega.hi > b.alpha.hi {
        b.omega.hi = b.alpha.hi;
        b.derivation
            .push(format!("{node}: omega <= alpha caps omega at {}", b.alpha.hi));
    }
    if b.alpha.lo < b.omega.lo {
        b.alpha.lo = b.omega.lo;
        b.derivation
            .push(format!("{node}: omega <= alpha lifts alpha to {}", b.omega.lo));
    }
    b
}

/// Bounds on `alpha_p` and `omega_p` for the operator `e`, with the rules
/// applied at each node.
pub fn mnc_bounds(e: &OperatorExpr) -> RateBounds {
    match e {
        OperatorExpr::Atom(a) => atom_bounds(a),
        OperatorExpr::Scale(c, inner) => {
            let b = mnc_bounds(inner);
            let k = c.abs();
            let mut derivation = b.derivation;
            derivation.push(format!(
                "scale({c}): alpha and omega multiply by |c| = {k}"
            ));
            bounds(b.alpha.scale(k), b.omega.scale(k), derivation)
        }
        OperatorExpr::Sum(f, g) => {
            let bf = mnc_bounds(f);
            let bg = mnc_bounds(g);
            let (af, ag, wf, wg) = (bf.alpha, bg.alpha, bf.omega, bg.omega);
            // |alpha(f) - alpha(g)| <= alpha(f+g) <= alpha(f) + alpha(g)
            let alpha = RateInterval {
                lo: sub_lower(af.lo, ag.hi).max(sub_lower(ag.lo, af.hi)),
                hi: add(af.hi, ag.hi),
            };
            // omega(f) - alpha(g) <= omega(f+g) <= omega(f) + alpha(g), and symmetrically
            let omega = RateInterval {
                lo: sub_lower(wf.lo, ag.hi).max(sub_lower(wg.lo, af.hi)),
                hi: add(wf.hi, ag.hi).min(add(wg.hi, af.hi)),
            };
            let mut derivation = bf.derivation;
            derivation.extend(bg.derivation);
            derivation.push(format!(
                "sum: alpha in [|alpha_f - alpha_g|, alpha_f + alpha_g] = {alpha}"
            ));
            derivation.push(format!(
                "sum: omega in [omega_f - alpha_g, omega_f + alpha_g] (both orders) = {omega}"
            ));
            tighten(bounds(alpha, omega, derivation), "sum")
        }
        OperatorExpr::Compose { outer, inner } => {
            let bg = mnc_bounds(outer);
            let bf = mnc_bounds(inner);
            // alpha(gf) <= alpha(g) alpha(f)
            let alpha = RateInterval {
                lo: ExtendedReal::ZERO,
                hi: mul_upper(bg.alpha.hi, bf.alpha.hi),
            };
            // omega(g) omega(f) <= omega(gf) <= alpha(g) omega(f)
            let omega = RateInterval {
                lo: mul_lower(bg.omega.lo, bf.omega.lo),
                hi: mul_upper(bg.alpha.hi, bf.omega.hi),
            };
            let mut derivation = bg.derivation;
            derivation.extend(bf.derivation);
            derivation.push(format!(
                "compose: alpha <= alpha_g * alpha_f, alpha in {alpha}"
            ));
            derivation.push(format!(
                "compose: omega in [omega_g * omega_f, alpha_g * omega_f] = {omega}"
            ));
            tighten(bounds(alpha, omega, derivation), "compose")
        }
    }
}
