//! Finite unions of closed real intervals with possibly infinite endpoints.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::ext::{ExtendedReal, NegInf, PosInf};

/// A closed interval of the real line. Infinite endpoints are excluded from
/// the set, so `[-inf, 2]` stands for `(-inf, 2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: ExtendedReal,
    hi: ExtendedReal,
}

impl Interval {
    /// The interval between `a` and `b` (in either order) intersected with R.
    /// `None` when that intersection is empty, i.e. both endpoints are the
    /// same infinity.
    pub fn between(a: ExtendedReal, b: ExtendedReal) -> Option<Interval> {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if hi == NegInf || lo == PosInf {
            return None;
        }
        Some(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Interval {
        Interval {
            lo: x.into(),
            hi: x.into(),
        }
    }

    pub fn reals() -> Interval {
        Interval {
            lo: NegInf,
            hi: PosInf,
        }
    }

    pub fn lo(&self) -> ExtendedReal {
        self.lo
    }

    pub fn hi(&self) -> ExtendedReal {
        self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        let x = ExtendedReal::new(x);
        x.is_finite() && self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn touches(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.lo);
        }
        let open = if self.lo == NegInf { '(' } else { '[' };
        let close = if self.hi == PosInf { ')' } else { ']' };
        write!(f, "{open}{},{}{close}", self.lo, self.hi)
    }
}

/// Sorted, pairwise-disjoint closed intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RealIntervalSet {
    intervals: Vec<Interval>,
}

impl RealIntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn reals() -> Self {
        Self {
            intervals: vec![Interval::reals()],
        }
    }

    pub fn from_intervals<I: IntoIterator<Item = Interval>>(items: I) -> Self {
        let mut intervals: Vec<Interval> = items.into_iter().collect();
        intervals.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if last.touches(&iv) => last.hi = last.hi.max(iv.hi),
                _ => merged.push(iv),
            }
        }
        Self { intervals: merged }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_reals(&self) -> bool {
        self.intervals == [Interval::reals()]
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }

    pub fn is_subset_of(&self, other: &RealIntervalSet) -> bool {
        self.intervals
            .iter()
            .all(|iv| other.intervals.iter().any(|o| o.contains_interval(iv)))
    }

    /// Smallest closed interval containing the set.
    pub fn hull(&self) -> Option<Interval> {
        let first = self.intervals.first()?;
        let last = self.intervals.last()?;
        Some(Interval {
            lo: first.lo,
            hi: last.hi,
        })
    }
}

impl fmt::Display for RealIntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("[]");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(" U ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

impl Serialize for RealIntervalSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::between(a.into(), b.into()).unwrap()
    }

    #[test]
    fn same_sign_infinite_endpoints_are_empty() {
        assert!(Interval::between(PosInf, PosInf).is_none());
        assert!(Interval::between(NegInf, NegInf).is_none());
        assert!(Interval::between(NegInf, PosInf).is_some());
    }

    #[test]
    fn normalization_merges_touching_intervals() {
        let s = RealIntervalSet::from_intervals([iv(2.0, 3.0), iv(-1.0, 0.0), iv(0.0, 1.0)]);
        assert_eq!(s.intervals(), &[iv(-1.0, 1.0), iv(2.0, 3.0)]);
        assert_eq!(s.to_string(), "[-1,1] U [2,3]");
    }

    #[test]
    fn display_forms() {
        assert_eq!(RealIntervalSet::empty().to_string(), "[]");
        assert_eq!(RealIntervalSet::reals().to_string(), "(-inf,+inf)");
        let s = RealIntervalSet::from_intervals([Interval::point(-1.0), Interval::point(1.0)]);
        assert_eq!(s.to_string(), "{-1} U {1}");
        let half = RealIntervalSet::from_intervals(Interval::between(NegInf, 2.5.into()));
        assert_eq!(half.to_string(), "(-inf,2.5]");
    }

    #[test]
    fn containment() {
        let big = RealIntervalSet::from_intervals([iv(-1.0, 1.0)]);
        let small = RealIntervalSet::from_intervals([Interval::point(-1.0), Interval::point(1.0)]);
        assert!(small.is_subset_of(&big));
        assert!(!big.is_subset_of(&small));
        assert!(RealIntervalSet::empty().is_subset_of(&small));
        assert_eq!(small.hull(), Some(iv(-1.0, 1.0)));
        assert!(!RealIntervalSet::reals().contains(f64::INFINITY));
    }
}
