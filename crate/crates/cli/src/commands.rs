use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use specpoint::dini::DiniGrid;
use specpoint::homog2d::spectral_radius_bound;
use specpoint::structured::{
    eigvec_norm_sq, shift_bifurcation_scan, shift_index, shift_model_report, truncated_shift_min,
    xi_equation_solvable, ShiftPerturbation, DEFAULT_SHIFT_TOL,
};
use specpoint::{
    big_sigma_1d, bifurcation_scan, classify_plane, d_and_quasinorm, dini_estimate, dini_exact, mnc_bounds, sigma_1d,
    sigma_curve, ClassifyOptions, CurveOptions, GridSpec, Label, OperatorExpr, PlanePoint, ScanOptions,
};

use crate::args::{usage, BifurcateArgs, ClassifyArgs, MncArgs, ShiftArgs, Spec1dArgs, Spec2dArgs};
use crate::output::{companion, write_json, write_text};
use crate::{svg, EXIT_VIOLATIONS};

pub fn spec1d(a: Spec1dArgs) -> anyhow::Result<u8> {
    let f = a.map.spec()?;
    let exact_available = f.exact_dini(a.point).is_some();
    let use_exact = a.exact || (!a.numeric && exact_available);
    let (method, quad, divergent) = if use_exact {
        ("exact", dini_exact(&f, a.point)?, None)
    } else {
        let grid = DiniGrid {
            h0: a.h0,
            ratio: a.ratio,
            steps: a.steps,
            ..DiniGrid::default()
        };
        let est = dini_estimate(&f, a.point, &grid)?;
        ("numeric", est.quad, Some(est.divergent))
    };
    let body = json!({
        "fn": f.name(),
        "point": a.point,
        "method": method,
        "seed": a.common.seed,
        "dini": quad,
        "divergent": divergent,
        "sigma": sigma_1d(&quad).to_string(),
        "Sigma": big_sigma_1d(&quad).to_string(),
    });
    write_json(&body, a.common.out.as_deref())?;
    Ok(0)
}

pub fn spec2d(a: Spec2dArgs) -> anyhow::Result<u8> {
    let f = a.map.spec()?;
    let opts = CurveOptions {
        samples: a.samples,
        chord: a.chord,
        max_samples: a.max_samples,
    };
    let curve = sigma_curve(&f, &opts)?;
    let (d, q) = d_and_quasinorm(&f, a.samples.max(1024))?;
    let radius = spectral_radius_bound(&f)?;
    let points: Vec<[f64; 2]> = match curve.degenerate {
        Some(p) => vec![[p.a, p.b]],
        None => curve.points().map(|p| [p.a, p.b]).collect(),
    };
    let body = json!({
        "fn": f.name(),
        "seed": a.common.seed,
        "curve": {
            "degenerate": curve.degenerate.is_some(),
            "closed": curve.closed,
            "samples": curve.len(),
            "chord_bound": curve.chord_bound,
            "chord_bound_met": curve.chord_bound_met,
            "max_chord": curve.max_chord(),
            "points": points,
        },
        "d": d,
        "q": q,
        "radius_bound": radius,
    });
    write_json(&body, a.common.out.as_deref())?;
    if let Some(path) = companion(a.csv.as_ref(), a.common.out.as_ref(), "csv") {
        let mut csv = String::from("theta,re,im\n");
        for s in &curve.samples {
            writeln!(csv, "{},{},{}", s.theta, s.lambda.a, s.lambda.b)?;
        }
        write_text(&csv, &path)?;
    }
    Ok(0)
}

pub fn classify(a: ClassifyArgs) -> anyhow::Result<u8> {
    if !(a.xmin < a.xmax && a.ymin < a.ymax) {
        return Err(usage("need xmin < xmax and ymin < ymax"));
    }
    if a.res == 0 {
        return Err(usage("--res must be positive"));
    }
    let f = a.map.spec()?;
    let grid = GridSpec {
        xmin: a.xmin,
        xmax: a.xmax,
        ymin: a.ymin,
        ymax: a.ymax,
        nx: a.res,
        ny: a.res,
    };
    let mut opts = ClassifyOptions::new(grid);
    opts.band_radius = a.band;
    let s = classify_plane(&f, &opts)?;
    let body = json!({
        "fn": f.name(),
        "seed": a.common.seed,
        "grid": s.grid,
        "band_radius": s.band_radius,
        "counts": {
            "regular": s.count(Label::Regular),
            "in_spectrum": s.count(Label::InSpectrum),
            "band": s.count(Label::Band),
        },
        "band_in_spectrum": s.band_in_spectrum,
        "in_spectrum_area": s.in_spectrum_area(),
        "components": s.components,
        "inconsistent_components": s.inconsistent_components,
        "violations": s.violations,
        "curve_samples": s.curve.len(),
        "assumption": s.assumption,
    });
    write_json(&body, a.common.out.as_deref())?;
    if let Some(path) = companion(a.svg.as_ref(), a.common.out.as_ref(), "svg") {
        write_text(&svg::render(&s), &path)?;
    }
    if let Some(path) = &a.csv {
        let mut csv = String::from("i,j,re,im,label\n");
        for (i, j, c, l) in s.cells() {
            writeln!(csv, "{i},{j},{},{},{}", c.a, c.b, label_name(l))?;
        }
        write_text(&csv, path)?;
    }
    if !s.violations.is_empty() || s.inconsistent_components > 0 {
        eprintln!(
            "warning: {} band violations, {} inconsistent components",
            s.violations.len(),
            s.inconsistent_components
        );
        return Ok(EXIT_VIOLATIONS);
    }
    Ok(0)
}

fn label_name(l: Label) -> &'static str {
    match l {
        Label::Regular => "regular",
        Label::InSpectrum => "in_spectrum",
        Label::Band => "band",
    }
}

#[derive(Serialize)]
struct LambdaReport {
    lambda: PlanePoint,
    index: Option<i32>,
    eigvec_norm_sq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    xi: Option<specpoint::structured::XiSolution>,
}

pub fn shift(a: ShiftArgs) -> anyhow::Result<u8> {
    let report = shift_model_report();
    let lambda = match a.lambda {
        Some(l) => {
            let xi = match a.xi_eps {
                Some(eps) => Some(xi_equation_solvable(l, eps)?),
                None => None,
            };
            Some(LambdaReport {
                lambda: l,
                index: shift_index(l),
                eigvec_norm_sq: (l.norm() > 1.0).then(|| eigvec_norm_sq(l)).transpose()?,
                xi,
            })
        }
        None if a.xi_eps.is_some() => return Err(usage("--xi-eps needs --lambda")),
        None => None,
    };
    let truncation = match a.truncate {
        Some(n) => {
            let lambdas = match a.lambda {
                Some(l) => vec![l],
                None => [0.0, 1.2, std::f64::consts::SQRT_2, 2.0].map(PlanePoint::real).to_vec(),
            };
            let mins = lambdas
                .into_iter()
                .map(|l| truncated_shift_min(l, n))
                .collect::<Result<Vec<_>, _>>()?;
            Some(
                mins.into_iter()
                    .map(|m| json!({"lambda": m.lambda, "n": m.n, "value": m.value, "reliable": m.reliable}))
                    .collect::<Vec<_>>(),
            )
        }
        None => None,
    };
    let body = json!({
        "seed": a.common.seed,
        "report": report,
        "lambda": lambda,
        "truncation": truncation,
    });
    write_json(&body, a.common.out.as_deref())?;
    Ok(0)
}

pub fn mnc(a: MncArgs) -> anyhow::Result<u8> {
    let e: OperatorExpr = a.expr.parse()?;
    let b = mnc_bounds(&e);
    let body = json!({
        "expr": e.to_string(),
        "seed": a.common.seed,
        "alpha": b.alpha,
        "omega": b.omega,
        "derivation": b.derivation,
    });
    write_json(&body, a.common.out.as_deref())?;
    Ok(0)
}

fn lambdas(a: &BifurcateArgs) -> anyhow::Result<Vec<PlanePoint>> {
    match (a.grid.as_slice(), a.ring.as_slice()) {
        ([], [r, count]) => {
            if r.is_nan() || *r < 0.0 || *count < 1.0 || count.fract() != 0.0 {
                return Err(usage("--ring needs a radius >= 0 and a positive integer count"));
            }
            let n = *count as usize;
            Ok((0..n)
                .map(|k| PlanePoint::polar(*r, std::f64::consts::TAU * k as f64 / n as f64))
                .collect())
        }
        ([x0, x1, y0, y1, nx, ny], []) => {
            let counts_ok = [nx, ny].iter().all(|v| **v >= 1.0 && v.fract() == 0.0);
            if !counts_ok || x0 > x1 || y0 > y1 {
                return Err(usage("--grid needs xmin <= xmax, ymin <= ymax and positive integer counts"));
            }
            let (nx, ny) = (*nx as usize, *ny as usize);
            let step = |lo: f64, hi: f64, n: usize, k: usize| {
                if n == 1 {
                    lo
                } else {
                    lo + (hi - lo) * k as f64 / (n - 1) as f64
                }
            };
            Ok((0..ny)
                .flat_map(|j| (0..nx).map(move |i| PlanePoint::new(step(*x0, *x1, nx, i), step(*y0, *y1, ny, j))))
                .collect())
        }
        ([], []) => Err(usage("bifurcate needs --grid or --ring")),
        _ => Err(usage("--grid takes 6 values, --ring takes 2")),
    }
}

pub fn bifurcate(a: BifurcateArgs) -> anyhow::Result<u8> {
    let lambdas = lambdas(&a)?;
    let body = if a.shift {
        let h = ShiftPerturbation::from_name(&a.perturbation)?;
        let scan = shift_bifurcation_scan(&h, a.truncate, &lambdas, &a.radii, a.tol.unwrap_or(DEFAULT_SHIFT_TOL))?;
        let candidates: Vec<PlanePoint> = scan.candidates().map(|p| p.lambda).collect();
        json!({
            "mode": "shift",
            "seed": a.common.seed,
            "candidates": candidates,
            "scan": scan,
        })
    } else {
        let Some(name) = &a.name else {
            return Err(usage("bifurcate needs --fn NAME or --shift"));
        };
        let f = specpoint::MapSpec::from_name(name, &a.params)?;
        let opts = ScanOptions {
            tol: a.tol.unwrap_or(ScanOptions::default().tol),
            samples: a.samples,
            seed: a.common.seed,
            ..ScanOptions::default()
        };
        let scan = bifurcation_scan(&f, &lambdas, &a.radii, &opts)?;
        let candidates: Vec<PlanePoint> = scan.candidates().map(|p| p.lambda).collect();
        json!({
            "mode": "map",
            "fn": f.name(),
            "seed": a.common.seed,
            "candidates": candidates,
            "scan": scan,
        })
    };
    write_json(&body, a.common.out.as_deref())?;
    Ok(0)
}
