use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// A bad flag combination found after parsing.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  usage error (bad flags, unknown map, expression syntax)
  3  precondition failed (domain, dimension, admissibility of the request)
  4  numeric or solver failure
  5  band violations or inconsistent components in a classification

A config file given with --config holds `key = value` lines, one flag per line
(`res = 200`, `exact = true`). Flags on the command line take precedence.
SPECPOINT_THREADS caps the worker count.";

#[derive(Debug, Parser)]
#[command(name = "specpoint", version, about = "Spectra of nonlinear maps at a point", after_help = EXIT_CODES)]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dini derivatives and the spectra sigma, Sigma of a scalar map at a point.
    Spec1d(Spec1dArgs),
    /// Sigma curve, d and quasinorm of a homogeneous planar map.
    Spec2d(Spec2dArgs),
    /// Label a grid of lambda as regular or in the spectrum, with an SVG figure.
    Classify(ClassifyArgs),
    /// Analytic report for the shift model, with truncated residuals.
    Shift(ShiftArgs),
    /// Rate bounds for an operator expression.
    #[command(after_help = EXPR_HELP)]
    Mnc(MncArgs),
    /// Scan lambda for small nontrivial solutions of lambda x = f(x).
    Bifurcate(BifurcateArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Seed for low-discrepancy directions and restarts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON output path (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// Builtin map name.
    #[arg(long = "fn", value_name = "NAME")]
    pub name: String,
    /// Comma-separated builtin parameters.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    pub params: Vec<f64>,
}

impl MapArgs {
    pub fn spec(&self) -> anyhow::Result<specpoint::MapSpec> {
        Ok(specpoint::MapSpec::from_name(&self.name, &self.params)?)
    }
}

#[derive(Debug, Args)]
pub struct Spec1dArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub point: f64,
    /// Use the closed-form Dini derivatives.
    #[arg(long, overrides_with = "numeric")]
    pub exact: bool,
    /// Estimate from difference quotients (the default when no closed form exists).
    #[arg(long, overrides_with = "exact")]
    pub numeric: bool,
    #[arg(long, default_value_t = 0.1)]
    pub h0: f64,
    #[arg(long, default_value_t = 0.5)]
    pub ratio: f64,
    #[arg(long, default_value_t = 40)]
    pub steps: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Spec2dArgs {
    #[command(flatten)]
    pub map: MapArgs,
    /// Initial equispaced samples before chord refinement.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    /// Target chord length between neighbouring curve points.
    #[arg(long, default_value_t = 1e-3)]
    pub chord: f64,
    #[arg(long, default_value_t = 1 << 16)]
    pub max_samples: usize,
    /// CSV of curve samples (defaults to --out with a .csv extension).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub ymin: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub ymax: f64,
    /// Cells per axis.
    #[arg(long, default_value_t = 200)]
    pub res: usize,
    /// Half-width of the band around the curve decided by winding (default: two cell diagonals).
    #[arg(long)]
    pub band: Option<f64>,
    /// SVG figure path (defaults to --out with a .svg extension).
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// CSV dump of cell labels.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ShiftArgs {
    /// Truncation dimension for the sphere residuals.
    #[arg(long)]
    pub truncate: Option<usize>,
    /// Spectral parameter `a,b` for a + bi.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub lambda: Option<specpoint::PlanePoint>,
    /// Right-hand side epsilon for the fixed-point equation in xi.
    #[arg(long)]
    pub xi_eps: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

pub const EXPR_HELP: &str = "\
Expression syntax:
  expr   := term ('+' term)*
  term   := factor (('o' | '∘') factor)*      a o b applies b first
  factor := scale(NUMBER, expr) | NAME [ '(' args ')' ] | '(' expr ')'

Atoms: identity (id), scalar(c) or scalar(re, im), isometry(k), compact,
finite_rank(r), locally_compact, known(alpha=A, omega=W[, d=D, q=Q]) where each
value is a number or [lo, hi]; numbers accept inf. Other names are unknown
atoms with no rule.

Example: specpoint mnc --expr 'isometry(1) + locally_compact'";

#[derive(Debug, Args)]
pub struct MncArgs {
    #[arg(long)]
    pub expr: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BifurcateArgs {
    /// Builtin map name (exclusive with --shift).
    #[arg(long = "fn", value_name = "NAME", conflicts_with = "shift")]
    pub name: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    pub params: Vec<f64>,
    /// Scan the truncated shift model instead of a builtin.
    #[arg(long)]
    pub shift: bool,
    /// Perturbation of the shift model: zero or norm_sq_e1.
    #[arg(long, default_value = "zero")]
    pub perturbation: String,
    /// Truncation dimension for --shift.
    #[arg(long, default_value_t = 40)]
    pub truncate: usize,
    /// Rectangular lambda grid `xmin,xmax,ymin,ymax,nx,ny`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    pub grid: Vec<f64>,
    /// Lambda on a circle `radius,count` (instead of --grid).
    #[arg(long, value_delimiter = ',', num_args = 1, conflicts_with = "grid")]
    pub ring: Vec<f64>,
    /// Sphere radii, decreasing.
    #[arg(long, value_delimiter = ',', num_args = 1, default_values_t = [1e-2, 1e-3])]
    pub radii: Vec<f64>,
    /// Candidate threshold (default 0.02 for --shift, 0.01 otherwise).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Sphere samples per radius for builtin maps.
    #[arg(long, default_value_t = 1024)]
    pub samples: usize,
    #[command(flatten)]
    pub common: Common,
}

fn parse_point(s: &str) -> Result<specpoint::PlanePoint, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    match parts.as_slice() {
        [a] => Ok(specpoint::PlanePoint::real(num(a)?)),
        [a, b] => Ok(specpoint::PlanePoint::new(num(a)?, num(b)?)),
        _ => Err("expected `a` or `a,b`".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_parse() {
        assert_eq!(parse_point("1.5").unwrap(), specpoint::PlanePoint::real(1.5));
        assert_eq!(parse_point("-1,2").unwrap(), specpoint::PlanePoint::new(-1.0, 2.0));
        assert!(parse_point("1,2,3").is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_params_parse() {
        let c = Cli::try_parse_from(["specpoint", "spec2d", "--fn", "real_linear", "--params", "1,-2,2,1"]).unwrap();
        match c.command {
            Command::Spec2d(a) => assert_eq!(a.map.params, vec![1.0, -2.0, 2.0, 1.0]),
            _ => unreachable!(),
        }
    }
}
