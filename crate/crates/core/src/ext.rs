//! Extended real numbers `[-inf, +inf]` with a total order.
//!
//! Empty infima and suprema follow `inf {} = +inf`, `sup {} = -inf`, which is
//! also how the finite-dimensional values `alpha_p = -inf`, `omega_p = +inf`
//! are represented.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Clone, Copy, Debug)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

pub use ExtendedReal::{NegInf, PosInf};

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal::Finite(0.0);
    pub const ONE: ExtendedReal = ExtendedReal::Finite(1.0);

    /// Maps IEEE infinities onto the symbolic ones.
    ///
    /// Panics on NaN: a NaN here always means an upstream bug.
    pub fn new(x: f64) -> Self {
        assert!(!x.is_nan(), "ExtendedReal cannot hold NaN");
        if x == f64::INFINITY {
            PosInf
        } else if x == f64::NEG_INFINITY {
            NegInf
        } else {
            ExtendedReal::Finite(x)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            NegInf => f64::NEG_INFINITY,
            ExtendedReal::Finite(x) => x,
            PosInf => f64::INFINITY,
        }
    }

    pub fn abs(self) -> Self {
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(x.abs()),
            _ => PosInf,
        }
    }

    /// `c * self` with `0 * inf = 0`.
    pub fn scale(self, c: f64) -> Self {
        assert!(c.is_finite(), "scale factor must be finite");
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(c * x),
            _ if c == 0.0 => ExtendedReal::ZERO,
            PosInf if c > 0.0 => PosInf,
            NegInf if c < 0.0 => PosInf,
            _ => NegInf,
        }
    }

    /// Sum, or `None` for the indeterminate `inf - inf`.
    pub fn checked_add(self, other: Self) -> Option<Self> {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => Some(ExtendedReal::new(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            _ => Some(NegInf),
        }
    }

    pub fn checked_sub(self, other: Self) -> Option<Self> {
        self.checked_add(-other)
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Infimum of a finite collection; `+inf` when empty.
    pub fn inf_of<I: IntoIterator<Item = ExtendedReal>>(items: I) -> Self {
        items.into_iter().fold(PosInf, ExtendedReal::min)
    }

    /// Supremum of a finite collection; `-inf` when empty.
    pub fn sup_of<I: IntoIterator<Item = ExtendedReal>>(items: I) -> Self {
        items.into_iter().fold(NegInf, ExtendedReal::max)
    }

    fn rank(self) -> u8 {
        match self {
            NegInf => 0,
            ExtendedReal::Finite(_) => 1,
            PosInf => 2,
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(x: f64) -> Self {
        ExtendedReal::new(x)
    }
}

impl Neg for ExtendedReal {
    type Output = ExtendedReal;

    fn neg(self) -> Self {
        match self {
            NegInf => PosInf,
            ExtendedReal::Finite(x) => ExtendedReal::Finite(-x),
            PosInf => NegInf,
        }
    }
}

impl PartialEq for ExtendedReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtendedReal {}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => a.total_cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialEq<f64> for ExtendedReal {
    fn eq(&self, other: &f64) -> bool {
        !other.is_nan() && *self == ExtendedReal::new(*other)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => f.write_str("-inf"),
            PosInf => f.write_str("+inf"),
            ExtendedReal::Finite(x) => write!(f, "{x}"),
        }
    }
}

// JSON has no infinities: they travel as the strings "inf" / "-inf".
impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            NegInf => serializer.serialize_str("-inf"),
            PosInf => serializer.serialize_str("inf"),
            ExtendedReal::Finite(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ExtVisitor;

        impl Visitor<'_> for ExtVisitor {
            type Value = ExtendedReal;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or one of \"inf\", \"+inf\", \"-inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                if v.is_nan() {
                    return Err(E::custom("NaN is not an extended real"));
                }
                Ok(ExtendedReal::new(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                match v {
                    "inf" | "+inf" => Ok(PosInf),
                    "-inf" => Ok(NegInf),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }

        deserializer.deserialize_any(ExtVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_extrema_follow_conventions() {
        assert_eq!(ExtendedReal::inf_of(std::iter::empty()), PosInf);
        assert_eq!(ExtendedReal::sup_of(std::iter::empty()), NegInf);
    }

    #[test]
    fn total_order_places_infinities_at_the_ends() {
        let mut v = vec![PosInf, 3.0.into(), NegInf, (-1e300).into(), 0.0.into()];
        v.sort();
        assert_eq!(
            v,
            vec![NegInf, (-1e300).into(), 0.0.into(), 3.0.into(), PosInf]
        );
        assert_eq!(ExtendedReal::inf_of(v.clone()), NegInf);
        assert_eq!(ExtendedReal::sup_of(v), PosInf);
    }

    #[test]
    fn arithmetic_conventions() {
        assert_eq!(PosInf.scale(0.0), 0.0);
        assert_eq!(PosInf.scale(-2.0), NegInf);
        assert_eq!(NegInf.scale(-0.5), PosInf);
        assert_eq!(PosInf.checked_add(NegInf), None);
        assert_eq!(PosInf.checked_add(2.0.into()), Some(PosInf));
        assert_eq!(ExtendedReal::new(1.5).checked_sub(0.5.into()), Some(1.0.into()));
        assert_eq!(ExtendedReal::new(f64::NEG_INFINITY), NegInf);
    }

    #[test]
    fn json_uses_strings_for_infinities() {
        let v = vec![NegInf, ExtendedReal::Finite(0.25), PosInf];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["-inf",0.25,"inf"]"#);
        let back: Vec<ExtendedReal> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    #[should_panic(expected = "NaN")]
    fn nan_is_rejected() {
        let _ = ExtendedReal::new(f64::NAN);
    }
}
