//! Described maps: named builtins, black-box evaluators, symbolic operator
//! expressions, and the algebra (`lambda - f`, `c f`, `f - g`, translation)
//! the spectral engines need on top of them.

mod builtin;

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use builtin::Builtin;

use crate::dini::DiniQuad;
use crate::error::{Error, Result};
use crate::plane::{complex_axpy, PlanePoint};
use crate::structured::OperatorExpr;

pub type Evaluator = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type DiniProvider = Arc<dyn Fn(f64) -> Option<DiniQuad> + Send + Sync>;
pub type JacobianProvider = Arc<dyn Fn(&[f64]) -> Option<DMatrix<f64>> + Send + Sync>;
pub type DomainPredicate = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// A user-supplied map `R^n -> R^n`.
///
/// The evaluator must be deterministic: repeated calls on the same input
/// return the same output.
#[derive(Clone)]
pub struct BlackBox {
    pub name: String,
    pub dim: usize,
    pub eval: Evaluator,
    pub exact_dini: Option<DiniProvider>,
    pub jacobian: Option<JacobianProvider>,
    pub domain: Option<DomainPredicate>,
    pub homogeneous: bool,
}

impl BlackBox {
    pub fn new<F>(name: impl Into<String>, dim: usize, eval: F) -> Self
    where
        F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        BlackBox {
            name: name.into(),
            dim,
            eval: Arc::new(eval),
            exact_dini: None,
            jacobian: None,
            domain: None,
            homogeneous: false,
        }
    }

    pub fn with_dini<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> Option<DiniQuad> + Send + Sync + 'static,
    {
        self.exact_dini = Some(Arc::new(f));
        self
    }

    pub fn with_jacobian<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64]) -> Option<DMatrix<f64>> + Send + Sync + 'static,
    {
        self.jacobian = Some(Arc::new(f));
        self
    }

    pub fn with_domain<F>(mut self, f: F) -> Self
    where
        F: Fn(&[f64]) -> bool + Send + Sync + 'static,
    {
        self.domain = Some(Arc::new(f));
        self
    }

    /// Declares `f(tx) = t f(x)` for `t > 0`. Not checked.
    pub fn homogeneous(mut self) -> Self {
        self.homogeneous = true;
        self
    }
}

impl fmt::Debug for BlackBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlackBox")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("exact_dini", &self.exact_dini.is_some())
            .field("jacobian", &self.jacobian.is_some())
            .field("homogeneous", &self.homogeneous)
            .finish()
    }
}

#[derive(Clone, Debug)]
pub enum MapKind {
    Builtin(Builtin),
    BlackBox(BlackBox),
    /// Symbolic operator on an infinite-dimensional space; only the rate
    /// calculus applies, evaluation is unsupported.
    Structured(OperatorExpr),
    Linear(DMatrix<f64>),
    /// `x -> inner(offset + x) - value`.
    Translated {
        inner: Box<MapKind>,
        offset: Vec<f64>,
        value: Vec<f64>,
    },
    /// `x -> a x + b inner(x)` with `a`, `b` acting as complex scalars.
    Pencil {
        a: Complex64,
        b: Complex64,
        inner: Box<MapKind>,
    },
    /// `x -> sum_i c_i f_i(x)`.
    Sum(Vec<(f64, MapKind)>),
}

impl MapKind {
    pub fn dim(&self) -> Option<usize> {
        match self {
            MapKind::Builtin(b) => Some(b.dim()),
            MapKind::BlackBox(bb) => Some(bb.dim),
            MapKind::Structured(_) => None,
            MapKind::Linear(m) => Some(m.ncols()),
            MapKind::Translated { offset, .. } => Some(offset.len()),
            MapKind::Pencil { inner, .. } => inner.dim(),
            MapKind::Sum(terms) => terms.first().and_then(|(_, k)| k.dim()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            MapKind::Builtin(b) => b.to_string(),
            MapKind::BlackBox(bb) => bb.name.clone(),
            MapKind::Structured(e) => e.to_string(),
            MapKind::Linear(m) => format!("linear({}x{})", m.nrows(), m.ncols()),
            MapKind::Translated { inner, offset, .. } => {
                format!("{}(p+.)-f(p), p={:?}", inner.name(), offset)
            }
            MapKind::Pencil { a, b, inner } => format!("({a})id + ({b}){}", inner.name()),
            MapKind::Sum(terms) => terms
                .iter()
                .map(|(c, k)| format!("{c}*{}", k.name()))
                .collect::<Vec<_>>()
                .join(" + "),
        }
    }

    fn in_domain(&self, x: &[f64]) -> bool {
        match self {
            MapKind::BlackBox(bb) => bb.domain.as_ref().map_or(true, |d| d(x)),
            MapKind::Translated { inner, offset, .. } => {
                let y: Vec<f64> = offset.iter().zip(x).map(|(p, v)| p + v).collect();
                inner.in_domain(&y)
            }
            MapKind::Pencil { inner, .. } => inner.in_domain(x),
            MapKind::Sum(terms) => terms.iter().all(|(_, k)| k.in_domain(x)),
            _ => true,
        }
    }

    /// Raw evaluation; dimension and domain are checked by [`MapSpec`].
    fn eval_raw(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        match self {
            MapKind::Builtin(b) => b.eval_into(x, out),
            MapKind::BlackBox(bb) => {
                let y = (bb.eval)(x);
                if y.len() != out.len() {
                    return Err(Error::Dimension {
                        map: bb.name.clone(),
                        expected: out.len(),
                        got: y.len(),
                    });
                }
                out.copy_from_slice(&y);
            }
            MapKind::Structured(e) => {
                return Err(Error::unsupported(format!(
                    "pointwise evaluation of the symbolic operator `{e}`"
                )))
            }
            MapKind::Linear(m) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = m.row(i).iter().zip(x).map(|(a, v)| a * v).sum();
                }
            }
            MapKind::Translated {
                inner,
                offset,
                value,
            } => {
                let y: Vec<f64> = offset.iter().zip(x).map(|(p, v)| p + v).collect();
                inner.eval_raw(&y, out)?;
                out.iter_mut().zip(value).for_each(|(o, v)| *o -= v);
            }
            MapKind::Pencil { a, b, inner } => {
                let mut tmp = vec![0.0; out.len()];
                inner.eval_raw(x, &mut tmp)?;
                out.iter_mut().for_each(|o| *o = 0.0);
                if !(complex_axpy(*a, x, out) && complex_axpy(*b, &tmp, out)) {
                    return Err(Error::unsupported(
                        "complex scalar on an odd-dimensional space",
                    ));
                }
            }
            MapKind::Sum(terms) => {
                let mut tmp = vec![0.0; out.len()];
                out.iter_mut().for_each(|o| *o = 0.0);
                for (c, k) in terms {
                    k.eval_raw(x, &mut tmp)?;
                    out.iter_mut().zip(&tmp).for_each(|(o, v)| *o += c * v);
                }
            }
        }
        Ok(())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self {
            MapKind::Builtin(b) => b.is_homogeneous(),
            MapKind::BlackBox(bb) => bb.homogeneous,
            MapKind::Structured(_) => false,
            MapKind::Linear(_) => true,
            MapKind::Translated { inner, offset, .. } => {
                offset.iter().all(|v| *v == 0.0) && inner.is_homogeneous()
            }
            MapKind::Pencil { inner, .. } => inner.is_homogeneous(),
            MapKind::Sum(terms) => terms.iter().all(|(_, k)| k.is_homogeneous()),
        }
    }

    fn principal_part(&self) -> Option<MapKind> {
        match self {
            MapKind::Builtin(b) => b.principal_part().map(MapKind::Builtin),
            MapKind::Pencil { a, b, inner } => inner.principal_part().map(|k| MapKind::Pencil {
                a: *a,
                b: *b,
                inner: Box::new(k),
            }),
            MapKind::Sum(terms) => terms
                .iter()
                .map(|(c, k)| k.principal_part().map(|p| (*c, p)))
                .collect::<Option<Vec<_>>>()
                .map(MapKind::Sum),
            k if k.is_homogeneous() => Some(k.clone()),
            _ => None,
        }
    }

    fn exact_dini(&self, p: f64) -> Option<DiniQuad> {
        match self {
            MapKind::Builtin(b) => b.exact_dini(p),
            MapKind::BlackBox(bb) => bb.exact_dini.as_ref().and_then(|d| d(p)),
            MapKind::Linear(m) if m.nrows() == 1 && m.ncols() == 1 => {
                Some(DiniQuad::differentiable(m[(0, 0)]))
            }
            MapKind::Translated { inner, offset, .. } => inner.exact_dini(offset[0] + p),
            MapKind::Pencil { a, b, inner } if a.im == 0.0 && b.im == 0.0 => {
                inner.exact_dini(p).map(|q| q.scale(b.re).shift(a.re))
            }
            // Dini derivatives are not additive in general; only smooth terms add.
            MapKind::Sum(terms) => {
                let mut total = 0.0;
                let mut rough: Option<(f64, DiniQuad)> = None;
                for (c, k) in terms {
                    let q = k.exact_dini(p)?;
                    match q.derivative() {
                        Some(d) => total += c * d,
                        None if rough.is_none() => rough = Some((*c, q)),
                        None => return None,
                    }
                }
                Some(match rough {
                    Some((c, q)) => q.scale(c).shift(total),
                    None => DiniQuad::differentiable(total),
                })
            }
            _ => None,
        }
    }

    fn oscillation_center(&self) -> Option<f64> {
        match self {
            MapKind::Builtin(b) => b.oscillation_center(),
            MapKind::Translated { inner, offset, .. } => {
                inner.oscillation_center().map(|c| c - offset[0])
            }
            MapKind::Pencil { inner, .. } => inner.oscillation_center(),
            MapKind::Sum(terms) => terms.iter().find_map(|(_, k)| k.oscillation_center()),
            _ => None,
        }
    }

    fn jacobian(&self, p: &[f64]) -> Option<DMatrix<f64>> {
        match self {
            MapKind::Builtin(b) => b.jacobian(p),
            MapKind::BlackBox(bb) => bb.jacobian.as_ref().and_then(|j| j(p)),
            MapKind::Structured(_) => None,
            MapKind::Linear(m) => Some(m.clone()),
            MapKind::Translated { inner, offset, .. } => {
                let y: Vec<f64> = offset.iter().zip(p).map(|(o, v)| o + v).collect();
                inner.jacobian(&y)
            }
            MapKind::Pencil { a, b, inner } => {
                let n = p.len();
                let j = inner.jacobian(p)?;
                Some(complex_matrix(*a, n)? + complex_matrix(*b, n)? * j)
            }
            MapKind::Sum(terms) => {
                let n = p.len();
                let mut acc = DMatrix::zeros(n, n);
                for (c, k) in terms {
                    acc += k.jacobian(p)? * *c;
                }
                Some(acc)
            }
        }
    }
}

/// Real matrix of `x -> c x` under the pairwise complex action.
fn complex_matrix(c: Complex64, n: usize) -> Option<DMatrix<f64>> {
    if c.im == 0.0 {
        return Some(DMatrix::identity(n, n) * c.re);
    }
    if n % 2 != 0 {
        return None;
    }
    let mut m = DMatrix::zeros(n, n);
    for k in (0..n).step_by(2) {
        m[(k, k)] = c.re;
        m[(k, k + 1)] = -c.im;
        m[(k + 1, k)] = c.im;
        m[(k + 1, k + 1)] = c.re;
    }
    Some(m)
}

/// A map together with the point at which its spectrum is studied.
#[derive(Clone, Debug)]
pub struct MapSpec {
    pub kind: MapKind,
    pub basepoint: Vec<f64>,
}

impl MapSpec {
    pub fn new(kind: MapKind) -> Self {
        let basepoint = vec![0.0; kind.dim().unwrap_or(0)];
        MapSpec { kind, basepoint }
    }

    pub fn builtin(b: Builtin) -> Self {
        MapSpec::new(MapKind::Builtin(b))
    }

    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        Builtin::from_name(name, params).map(MapSpec::builtin)
    }

    pub fn black_box(bb: BlackBox) -> Self {
        MapSpec::new(MapKind::BlackBox(bb))
    }

    pub fn structured(e: OperatorExpr) -> Self {
        MapSpec::new(MapKind::Structured(e))
    }

    pub fn linear(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension {
                map: "linear".into(),
                expected: m.ncols(),
                got: m.nrows(),
            });
        }
        Ok(MapSpec::new(MapKind::Linear(m)))
    }

    pub fn identity(n: usize) -> Self {
        MapSpec::builtin(Builtin::Identity(n))
    }

    pub fn at(mut self, p: &[f64]) -> Self {
        self.basepoint = p.to_vec();
        self
    }

    pub fn dim(&self) -> Option<usize> {
        self.kind.dim()
    }

    pub fn name(&self) -> String {
        self.kind.name()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.kind.is_homogeneous()
    }

    pub fn is_planar(&self) -> bool {
        self.dim() == Some(2)
    }

    fn check_dim(&self, got: usize) -> Result<usize> {
        let n = self.dim().ok_or_else(|| {
            Error::unsupported(format!("`{}` has no finite dimension", self.name()))
        })?;
        if n != got {
            return Err(Error::Dimension {
                map: self.name(),
                expected: n,
                got,
            });
        }
        Ok(n)
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        self.kind.in_domain(x)
    }

    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        self.check_dim(x.len())?;
        if !self.kind.in_domain(x) {
            return Err(Error::Domain {
                map: self.name(),
                point: x.to_vec(),
            });
        }
        self.kind.eval_raw(x, out)?;
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::Evaluation {
                map: self.name(),
                point: x.to_vec(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; x.len()];
        self.eval_into(x, &mut out)?;
        Ok(out)
    }

    /// Scalar shortcut for maps on `R`.
    pub fn eval1(&self, x: f64) -> Result<f64> {
        let mut out = [0.0];
        self.eval_into(&[x], &mut out)?;
        Ok(out[0])
    }

    /// Planar shortcut, treating `R^2` as `C`.
    pub fn eval_c(&self, z: Complex64) -> Result<Complex64> {
        let mut out = [0.0; 2];
        self.eval_into(&[z.re, z.im], &mut out)?;
        Ok(Complex64::new(out[0], out[1]))
    }

    /// `g(x) = f(p + x) - f(p)`, based at the origin.
    pub fn translate_to_origin(&self, p: &[f64]) -> Result<MapSpec> {
        let n = self.check_dim(p.len())?;
        let value = self.eval(p)?;
        let kind = if p.iter().all(|v| *v == 0.0) && value.iter().all(|v| *v == 0.0) {
            self.kind.clone()
        } else {
            MapKind::Translated {
                inner: Box::new(self.kind.clone()),
                offset: p.to_vec(),
                value,
            }
        };
        Ok(MapSpec {
            kind,
            basepoint: vec![0.0; n],
        })
    }

    fn pencil(&self, a: Complex64, b: Complex64) -> Result<MapSpec> {
        if (a.im != 0.0 || b.im != 0.0) && self.dim().is_some_and(|n| n % 2 != 0) {
            return Err(Error::precondition(format!(
                "complex scalar on the odd-dimensional map `{}`",
                self.name()
            )));
        }
        Ok(MapSpec {
            kind: MapKind::Pencil {
                a,
                b,
                inner: Box::new(self.kind.clone()),
            },
            basepoint: self.basepoint.clone(),
        })
    }

    /// `lambda I - f`.
    pub fn lambda_minus(&self, lambda: PlanePoint) -> Result<MapSpec> {
        self.pencil(lambda.to_complex(), Complex64::new(-1.0, 0.0))
    }

    /// `c f`.
    pub fn scaled(&self, c: PlanePoint) -> Result<MapSpec> {
        self.pencil(Complex64::new(0.0, 0.0), c.to_complex())
    }

    /// `c I + f`.
    pub fn plus_identity(&self, c: PlanePoint) -> Result<MapSpec> {
        self.pencil(c.to_complex(), Complex64::new(1.0, 0.0))
    }

    /// `f - g`.
    pub fn minus(&self, g: &MapSpec) -> Result<MapSpec> {
        if self.dim() != g.dim() {
            return Err(Error::Dimension {
                map: g.name(),
                expected: self.dim().unwrap_or(0),
                got: g.dim().unwrap_or(0),
            });
        }
        Ok(MapSpec {
            kind: MapKind::Sum(vec![(1.0, self.kind.clone()), (-1.0, g.kind.clone())]),
            basepoint: self.basepoint.clone(),
        })
    }

    pub fn exact_dini(&self, p: f64) -> Option<DiniQuad> {
        if self.dim() != Some(1) {
            return None;
        }
        self.kind.exact_dini(p)
    }

    pub fn oscillation_center(&self) -> Option<f64> {
        self.kind.oscillation_center()
    }

    pub fn jacobian(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        self.check_dim(p.len())?;
        self.kind.jacobian(p).ok_or_else(|| {
            Error::precondition(format!(
                "no Jacobian provider for `{}` at {:?}",
                self.name(),
                p
            ))
        })
    }

    /// A positively homogeneous map `h` with `f - h = o(||x||)` at the origin,
    /// when one is known.
    pub fn homogeneous_principal_part(&self) -> Option<MapSpec> {
        self.kind.principal_part().map(|kind| MapSpec {
            kind,
            basepoint: self.basepoint.clone(),
        })
    }
}

impl From<Builtin> for MapSpec {
    fn from(b: Builtin) -> Self {
        MapSpec::builtin(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_values() {
        let f = MapSpec::from_name("sqrt_abs", &[]).unwrap();
        assert_eq!(f.eval1(4.0).unwrap(), 2.0);
        let g = MapSpec::from_name("abs_re_plus_i_im", &[]).unwrap();
        assert_eq!(g.eval(&[-3.0, 5.0]).unwrap(), vec![3.0, 5.0]);
        let h = MapSpec::from_name("cardioid_map", &[]).unwrap();
        assert_eq!(h.eval(&[0.0, 1.0]).unwrap(), vec![1.0, 1.0]);
        let c = MapSpec::from_name("conj_pair", &[]).unwrap();
        assert_eq!(c.eval(&[1.0, 2.0, 3.0, 4.0]).unwrap(), vec![3.0, -4.0, 2.0, 1.0]);
    }

    #[test]
    fn unknown_names_and_bad_arity() {
        assert!(matches!(
            MapSpec::from_name("nope", &[]),
            Err(Error::Unsupported(_))
        ));
        assert!(MapSpec::from_name("real_linear", &[1.0, 2.0]).is_err());
        assert!(MapSpec::from_name("norm_times_x", &[2.5]).is_err());
    }

    #[test]
    fn translation_of_a_square() {
        let sq = MapSpec::black_box(BlackBox::new("square", 1, |x| vec![x[0] * x[0]]));
        let g = sq.translate_to_origin(&[1.0]).unwrap();
        assert_eq!(g.eval1(0.0).unwrap(), 0.0);
        for x in [-2.0, -0.5, 0.25, 3.0] {
            assert!((g.eval1(x).unwrap() - (2.0 * x + x * x)).abs() < 1e-12);
        }
    }

    #[test]
    fn translation_of_linear_is_itself() {
        let l = MapSpec::from_name("real_linear", &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let g = l.translate_to_origin(&[0.7, -1.3]).unwrap();
        for x in [[1.0, 0.0], [0.3, -2.0]] {
            let a = l.eval(&x).unwrap();
            let b = g.eval(&x).unwrap();
            assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn non_finite_output_is_an_error() {
        let bad = MapSpec::black_box(BlackBox::new("recip", 1, |x| vec![1.0 / x[0]]));
        assert!(matches!(bad.eval1(0.0), Err(Error::Evaluation { .. })));
        let dom = MapSpec::black_box(
            BlackBox::new("log", 1, |x| vec![x[0].ln()]).with_domain(|x| x[0] > 0.0),
        );
        assert!(matches!(dom.eval1(-1.0), Err(Error::Domain { .. })));
        assert!(matches!(
            dom.translate_to_origin(&[-1.0]),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn pencil_uses_complex_action() {
        let f = MapSpec::from_name("abs_re_plus_i_im", &[]).unwrap();
        let g = f.lambda_minus(PlanePoint::new(0.0, 1.0)).unwrap();
        // i*(1+0i) - (1, 0) = (-1, 1)
        assert_eq!(g.eval(&[1.0, 0.0]).unwrap(), vec![-1.0, 1.0]);
        let one_d = MapSpec::from_name("sqrt_abs", &[]).unwrap();
        assert!(one_d.lambda_minus(PlanePoint::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn structured_maps_do_not_evaluate() {
        let e: OperatorExpr = "identity".parse().unwrap();
        let m = MapSpec::structured(e);
        assert!(matches!(m.eval(&[1.0]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn principal_part_of_the_power_map() {
        let g = MapSpec::from_name("norm_plus_i_im_pow", &[2.0]).unwrap();
        assert!(!g.is_homogeneous());
        let h = g.homogeneous_principal_part().unwrap();
        assert_eq!(h.name(), "norm");
        let one = MapSpec::from_name("norm_plus_i_im_pow", &[1.0]).unwrap();
        assert!(one.is_homogeneous());
    }

    #[test]
    fn jacobian_of_pencil() {
        let f = MapSpec::from_name("norm_times_x", &[2.0]).unwrap();
        let g = f.scaled(PlanePoint::real(-2.0)).unwrap();
        let j = g.jacobian(&[3.0, 4.0]).unwrap();
        let jf = f.jacobian(&[3.0, 4.0]).unwrap();
        assert!((j + jf * 2.0).norm() < 1e-12);
    }
}
