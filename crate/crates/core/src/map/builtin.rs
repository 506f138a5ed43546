//! The fixed catalogue of named maps used by the examples.

use std::fmt;

use nalgebra::DMatrix;

use crate::dini::DiniQuad;
use crate::error::{Error, Result};
use crate::ext::{ExtendedReal, NegInf, PosInf};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Builtin {
    /// `sqrt(|x|)`
    SqrtAbs,
    /// `sign(x) sqrt(|x|)`
    SignedSqrtAbs,
    /// `sqrt(|x|) sin(1/x)`, `0` at the origin.
    SqrtAbsSinInv,
    /// `x^2 sin(1/x)`, `0` at the origin.
    XsqSinInv,
    /// `|x|`
    Abs,
    /// Identity on `R^n`.
    Identity(usize),
    /// `|x| + iy`
    AbsReIm,
    /// `|x|/2 + iy`
    HalfAbsReIm,
    /// `(sx + ty) + i(ux + vy)`
    RealLinear([f64; 4]),
    /// `sqrt(x^2 + y^2) + iy`
    NormPlusIIm,
    /// `sqrt(x^2 + y^2)`, the homogeneous part of [`Builtin::NormPlusIImPow`].
    Norm,
    /// `sqrt(x^2 + y^2) + i y^n`
    NormPlusIImPow(u32),
    /// `(z, w) -> (conj(w), i conj(z))` on `C^2 = R^4`.
    ConjPair,
    /// `||x|| x` on `R^n`.
    NormTimesX(usize),
}

impl Builtin {
    pub fn from_name(name: &str, params: &[f64]) -> Result<Builtin> {
        let arity = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::precondition(format!(
                    "`{name}` takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        let count = |default: usize, min: usize| -> Result<usize> {
            match params {
                [] => Ok(default),
                [v] if v.fract() == 0.0 && *v >= min as f64 && *v <= 1e6 => Ok(*v as usize),
                _ => Err(Error::precondition(format!(
                    "`{name}` takes one integer parameter >= {min}"
                ))),
            }
        };
        let b = match name {
            "sqrt_abs" => arity(0).map(|_| Builtin::SqrtAbs)?,
            "signed_sqrt_abs" => arity(0).map(|_| Builtin::SignedSqrtAbs)?,
            "sqrt_abs_sin_inv" => arity(0).map(|_| Builtin::SqrtAbsSinInv)?,
            "xsq_sin_inv" => arity(0).map(|_| Builtin::XsqSinInv)?,
            "abs" => arity(0).map(|_| Builtin::Abs)?,
            "identity" | "id" => Builtin::Identity(count(2, 1)?),
            "abs_re_plus_i_im" => arity(0).map(|_| Builtin::AbsReIm)?,
            "half_abs_re_plus_i_im" => arity(0).map(|_| Builtin::HalfAbsReIm)?,
            "real_linear" => {
                arity(4)?;
                if params.iter().any(|v| !v.is_finite()) {
                    return Err(Error::precondition("real_linear parameters must be finite"));
                }
                Builtin::RealLinear([params[0], params[1], params[2], params[3]])
            }
            "norm_plus_i_im" | "cardioid_map" => arity(0).map(|_| Builtin::NormPlusIIm)?,
            "norm" => arity(0).map(|_| Builtin::Norm)?,
            "norm_plus_i_im_pow" => Builtin::NormPlusIImPow(count(2, 1)? as u32),
            "conj_pair" => arity(0).map(|_| Builtin::ConjPair)?,
            "norm_times_x" => Builtin::NormTimesX(count(2, 1)?),
            other => return Err(Error::unsupported(format!("unknown builtin `{other}`"))),
        };
        Ok(b)
    }

    pub const NAMES: &'static [&'static str] = &[
        "sqrt_abs",
        "signed_sqrt_abs",
        "sqrt_abs_sin_inv",
        "xsq_sin_inv",
        "abs",
        "identity",
        "abs_re_plus_i_im",
        "half_abs_re_plus_i_im",
        "real_linear",
        "norm_plus_i_im",
        "cardioid_map",
        "norm",
        "norm_plus_i_im_pow",
        "conj_pair",
        "norm_times_x",
    ];

    pub fn dim(&self) -> usize {
        use Builtin::*;
        match self {
            SqrtAbs | SignedSqrtAbs | SqrtAbsSinInv | XsqSinInv | Abs => 1,
            Identity(n) | NormTimesX(n) => *n,
            AbsReIm | HalfAbsReIm | RealLinear(_) | NormPlusIIm | Norm | NormPlusIImPow(_) => 2,
            ConjPair => 4,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        use Builtin::*;
        match self {
            SqrtAbs | SignedSqrtAbs | SqrtAbsSinInv | XsqSinInv | NormTimesX(_) => false,
            NormPlusIImPow(n) => *n == 1,
            Abs | Identity(_) | AbsReIm | HalfAbsReIm | RealLinear(_) | NormPlusIIm | Norm
            | ConjPair => true,
        }
    }

    /// Positively homogeneous map agreeing with `self` up to `o(||x||)` at 0.
    pub fn principal_part(&self) -> Option<Builtin> {
        match self {
            Builtin::NormPlusIImPow(n) if *n >= 2 => Some(Builtin::Norm),
            b if b.is_homogeneous() => Some(*b),
            _ => None,
        }
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        use Builtin::*;
        match self {
            SqrtAbs => out[0] = x[0].abs().sqrt(),
            SignedSqrtAbs => out[0] = x[0].signum() * x[0].abs().sqrt(),
            SqrtAbsSinInv => {
                out[0] = if x[0] == 0.0 {
                    0.0
                } else {
                    x[0].abs().sqrt() * (1.0 / x[0]).sin()
                }
            }
            XsqSinInv => {
                out[0] = if x[0] == 0.0 {
                    0.0
                } else {
                    x[0] * x[0] * (1.0 / x[0]).sin()
                }
            }
            Abs => out[0] = x[0].abs(),
            Identity(_) => out.copy_from_slice(x),
            AbsReIm => {
                out[0] = x[0].abs();
                out[1] = x[1];
            }
            HalfAbsReIm => {
                out[0] = 0.5 * x[0].abs();
                out[1] = x[1];
            }
            RealLinear([s, t, u, v]) => {
                out[0] = s * x[0] + t * x[1];
                out[1] = u * x[0] + v * x[1];
            }
            NormPlusIIm => {
                out[0] = x[0].hypot(x[1]);
                out[1] = x[1];
            }
            Norm => {
                out[0] = x[0].hypot(x[1]);
                out[1] = 0.0;
            }
            NormPlusIImPow(n) => {
                out[0] = x[0].hypot(x[1]);
                out[1] = x[1].powi(*n as i32);
            }
            ConjPair => {
                out[0] = x[2];
                out[1] = -x[3];
                out[2] = x[1];
                out[3] = x[0];
            }
            NormTimesX(_) => {
                let r = crate::plane::norm(x);
                out.iter_mut().zip(x).for_each(|(o, v)| *o = r * v);
            }
        }
    }

    /// Exact Dini derivatives of a real builtin at `p`.
    pub fn exact_dini(&self, p: f64) -> Option<DiniQuad> {
        use Builtin::*;
        let same = |d: f64| Some(DiniQuad::differentiable(d));
        match self {
            SqrtAbs if p == 0.0 => Some(DiniQuad::new(NegInf, NegInf, PosInf, PosInf)),
            SqrtAbs => same(p.signum() / (2.0 * p.abs().sqrt())),
            SignedSqrtAbs if p == 0.0 => Some(DiniQuad::new(PosInf, PosInf, PosInf, PosInf)),
            SignedSqrtAbs => same(1.0 / (2.0 * p.abs().sqrt())),
            SqrtAbsSinInv if p == 0.0 => Some(DiniQuad::new(NegInf, PosInf, NegInf, PosInf)),
            SqrtAbsSinInv => {
                let s = p.abs().sqrt();
                same(p.signum() / (2.0 * s) * (1.0 / p).sin() - s * (1.0 / p).cos() / (p * p))
            }
            XsqSinInv if p == 0.0 => same(0.0),
            XsqSinInv => same(2.0 * p * (1.0 / p).sin() - (1.0 / p).cos()),
            Abs if p == 0.0 => Some(DiniQuad::new(
                ExtendedReal::new(-1.0),
                ExtendedReal::new(-1.0),
                ExtendedReal::ONE,
                ExtendedReal::ONE,
            )),
            Abs => same(p.signum()),
            Identity(1) => same(1.0),
            _ => None,
        }
    }

    /// Centre of `sin(1/x)`-type oscillation, where the numerical Dini scheme
    /// adds samples at the extremal phases.
    pub fn oscillation_center(&self) -> Option<f64> {
        match self {
            Builtin::SqrtAbsSinInv | Builtin::XsqSinInv => Some(0.0),
            _ => None,
        }
    }

    pub fn jacobian(&self, p: &[f64]) -> Option<DMatrix<f64>> {
        use Builtin::*;
        let n = self.dim();
        let scalar = |d: Option<DiniQuad>| {
            d.and_then(|q| q.derivative())
                .map(|v| DMatrix::from_element(1, 1, v))
        };
        match self {
            SqrtAbs | SignedSqrtAbs | SqrtAbsSinInv | XsqSinInv | Abs => scalar(self.exact_dini(p[0])),
            Identity(_) => Some(DMatrix::identity(n, n)),
            AbsReIm | HalfAbsReIm if p[0] == 0.0 => None,
            AbsReIm => Some(DMatrix::from_row_slice(2, 2, &[p[0].signum(), 0.0, 0.0, 1.0])),
            HalfAbsReIm => Some(DMatrix::from_row_slice(2, 2, &[0.5 * p[0].signum(), 0.0, 0.0, 1.0])),
            RealLinear([s, t, u, v]) => Some(DMatrix::from_row_slice(2, 2, &[*s, *t, *u, *v])),
            NormPlusIIm | Norm | NormPlusIImPow(_) => {
                let r = p[0].hypot(p[1]);
                if r == 0.0 {
                    return None;
                }
                let dy = match self {
                    NormPlusIIm => 1.0,
                    Norm => 0.0,
                    NormPlusIImPow(k) => *k as f64 * p[1].powi(*k as i32 - 1),
                    _ => unreachable!(),
                };
                Some(DMatrix::from_row_slice(2, 2, &[p[0] / r, p[1] / r, 0.0, dy]))
            }
            ConjPair => Some(DMatrix::from_row_slice(
                4,
                4,
                &[
                    0.0, 0.0, 1.0, 0.0, //
                    0.0, 0.0, 0.0, -1.0, //
                    0.0, 1.0, 0.0, 0.0, //
                    1.0, 0.0, 0.0, 0.0,
                ],
            )),
            // d(||x|| x) = ||p|| I + p p^T / ||p||, and 0 at the origin.
            NormTimesX(_) => {
                let r = crate::plane::norm(p);
                if r == 0.0 {
                    return Some(DMatrix::zeros(n, n));
                }
                let v = nalgebra::DVector::from_column_slice(p);
                Some(DMatrix::identity(n, n) * r + &v * v.transpose() / r)
            }
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Builtin::*;
        match self {
            SqrtAbs => f.write_str("sqrt_abs"),
            SignedSqrtAbs => f.write_str("signed_sqrt_abs"),
            SqrtAbsSinInv => f.write_str("sqrt_abs_sin_inv"),
            XsqSinInv => f.write_str("xsq_sin_inv"),
            Abs => f.write_str("abs"),
            Identity(n) => write!(f, "identity({n})"),
            AbsReIm => f.write_str("abs_re_plus_i_im"),
            HalfAbsReIm => f.write_str("half_abs_re_plus_i_im"),
            RealLinear([s, t, u, v]) => write!(f, "real_linear({s},{t},{u},{v})"),
            NormPlusIIm => f.write_str("norm_plus_i_im"),
            Norm => f.write_str("norm"),
            NormPlusIImPow(n) => write!(f, "norm_plus_i_im_pow({n})"),
            ConjPair => f.write_str("conj_pair"),
            NormTimesX(n) => write!(f, "norm_times_x({n})"),
        }
    }
}
