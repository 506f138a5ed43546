//! Spectrum of a continuous map at a point.
//!
//! Closed forms where they exist (Dini intervals of real functions,
//! positively homogeneous planar maps, the `l^2` shift model) and sampling
//! estimators elsewhere.

// `!(x > 0.0)` is the NaN-rejecting form used for argument checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dini;
pub mod error;
pub mod estimators;
pub mod ext;
pub mod homog2d;
pub mod interval;
pub mod lowdisc;
pub mod map;
pub mod plane;
pub mod search;
pub mod structured;

pub use dini::{big_sigma_1d, dini_estimate, dini_exact, sigma_1d, DiniEstimate, DiniGrid, DiniQuad};
pub use error::{Error, Result};
pub use estimators::{
    bifurcation_scan, c1_spectrum, estimate_rates, perturbation_equivalence_check, sigma_membership,
    LocalRates, Membership, RateSchedule, ScanOptions, ScanVerdict,
};
pub use ext::ExtendedReal;
pub use homog2d::{
    classify_plane, d_and_quasinorm, sigma_curve, winding_number, ClassifyOptions, CurveOptions, GridSpec, Label,
    PlaneSpectrum, SigmaCurve, WindingOptions,
};
pub use interval::{Interval, RealIntervalSet};
pub use map::{BlackBox, Builtin, MapKind, MapSpec};
pub use plane::PlanePoint;
pub use structured::{mnc_bounds, OperatorExpr, RateBounds, RateInterval};
