//! Points of the complex plane and the complex action on `R^{2m}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `lambda = a + ib`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanePoint {
    pub a: f64,
    pub b: f64,
}

impl PlanePoint {
    pub const ZERO: PlanePoint = PlanePoint { a: 0.0, b: 0.0 };

    pub fn new(a: f64, b: f64) -> Self {
        PlanePoint { a, b }
    }

    pub fn real(a: f64) -> Self {
        PlanePoint { a, b: 0.0 }
    }

    pub fn polar(r: f64, phi: f64) -> Self {
        Complex64::from_polar(r, phi).into()
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }

    pub fn is_real(self) -> bool {
        self.b == 0.0
    }

    pub fn norm(self) -> f64 {
        self.a.hypot(self.b)
    }

    pub fn dist(self, other: PlanePoint) -> f64 {
        (self.a - other.a).hypot(self.b - other.b)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.a, self.b)
    }
}

impl std::fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b < 0.0 {
            write!(f, "{}-{}i", self.a, -self.b)
        } else {
            write!(f, "{}+{}i", self.a, self.b)
        }
    }
}

impl From<Complex64> for PlanePoint {
    fn from(z: Complex64) -> Self {
        PlanePoint { a: z.re, b: z.im }
    }
}

impl From<PlanePoint> for Complex64 {
    fn from(p: PlanePoint) -> Self {
        Complex64::new(p.a, p.b)
    }
}

/// Multiplies `x` in place by the scalar `c`.
///
/// Real scalars act on any `R^n`; a genuinely complex scalar needs an even
/// dimension and acts on consecutive coordinate pairs `(x0 + i x1, x2 + i x3, ...)`.
/// Returns `false` (leaving `x` untouched) when `c` is complex and `n` is odd.
pub fn complex_scale_in_place(c: Complex64, x: &mut [f64]) -> bool {
    if c.im == 0.0 {
        x.iter_mut().for_each(|v| *v *= c.re);
        return true;
    }
    if x.len() % 2 != 0 {
        return false;
    }
    for pair in x.chunks_exact_mut(2) {
        let z = c * Complex64::new(pair[0], pair[1]);
        pair[0] = z.re;
        pair[1] = z.im;
    }
    true
}

/// `out += c * x` under the same action as [`complex_scale_in_place`].
pub(crate) fn complex_axpy(c: Complex64, x: &[f64], out: &mut [f64]) -> bool {
    debug_assert_eq!(x.len(), out.len());
    if c.im == 0.0 {
        out.iter_mut().zip(x).for_each(|(o, v)| *o += c.re * v);
        return true;
    }
    if x.len() % 2 != 0 {
        return false;
    }
    for (o, v) in out.chunks_exact_mut(2).zip(x.chunks_exact(2)) {
        let z = c * Complex64::new(v[0], v[1]);
        o[0] += z.re;
        o[1] += z.im;
    }
    true
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_action_on_pairs() {
        let mut x = [1.0, 0.0, 0.0, 2.0];
        assert!(complex_scale_in_place(Complex64::i(), &mut x));
        assert_eq!(x, [0.0, 1.0, -2.0, 0.0]);

        let mut odd = [1.0, 2.0, 3.0];
        assert!(!complex_scale_in_place(Complex64::new(0.0, 1.0), &mut odd));
        assert!(complex_scale_in_place(Complex64::new(2.0, 0.0), &mut odd));
        assert_eq!(odd, [2.0, 4.0, 6.0]);
    }
}
