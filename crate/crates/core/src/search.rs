//! Derivative-free local minimizers: golden section on an interval, compass
//! (pattern) search in `R^n` and on the unit sphere.

use crate::plane::norm;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizes a unimodal `f` on `[a, b]`; returns `(x, f(x))`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CompassOptions {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_evals: usize,
    /// Stop as soon as the objective drops below this value.
    pub target: f64,
}

impl Default for CompassOptions {
    fn default() -> Self {
        CompassOptions {
            initial_step: 0.1,
            min_step: 1e-12,
            max_evals: 20_000,
            target: f64::NEG_INFINITY,
        }
    }
}

fn directions(n: usize) -> Vec<Vec<f64>> {
    let mut dirs = Vec::with_capacity(2 * n + 4);
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut d = vec![0.0; n];
            d[i] = s;
            dirs.push(d);
        }
    }
    // Diagonals in the plane: the 8-point compass.
    if n == 2 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (a, b) in [(h, h), (h, -h), (-h, h), (-h, -h)] {
            dirs.push(vec![a, b]);
        }
    }
    dirs
}

/// Pattern search: poll every compass direction, move on the first
/// improvement, halve the step when no direction improves.
pub fn compass<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: CompassOptions) -> (Vec<f64>, f64) {
    let n = x0.len();
    let dirs = directions(n);
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut step = opts.initial_step;
    let mut evals = 1;
    let mut trial = vec![0.0; n];
    while step >= opts.min_step && evals < opts.max_evals && fx > opts.target {
        let mut improved = false;
        for d in &dirs {
            trial.iter_mut().zip(&x).zip(d).for_each(|((t, xi), di)| *t = xi + step * di);
            let ft = f(&trial);
            evals += 1;
            if ft < fx {
                x.copy_from_slice(&trial);
                fx = ft;
                improved = true;
                break;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}

/// Compass search restricted to the unit sphere: each trial point is the
/// normalized compass move.
pub fn sphere_compass<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: CompassOptions) -> (Vec<f64>, f64) {
    let n = x0.len();
    let project = |v: &mut [f64]| {
        let r = norm(v);
        v.iter_mut().for_each(|x| *x /= r);
    };
    let mut start = x0.to_vec();
    project(&mut start);
    if n == 1 {
        // S^0 = {+1, -1}: nothing to polish.
        let v = f(&start);
        return (start, v);
    }
    let dirs = directions(n);
    let mut x = start;
    let mut fx = f(&x);
    let mut step = opts.initial_step;
    let mut evals = 1;
    let mut trial = vec![0.0; n];
    while step >= opts.min_step && evals < opts.max_evals && fx > opts.target {
        let mut improved = false;
        for d in &dirs {
            trial.iter_mut().zip(&x).zip(d).for_each(|((t, xi), di)| *t = xi + step * di);
            project(&mut trial);
            let ft = f(&trial);
            evals += 1;
            if ft < fx {
                x.copy_from_slice(&trial);
                fx = ft;
                improved = true;
                break;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, fx) = golden_section(|x| (x - 0.3) * (x - 0.3) + 1.0, -2.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-14);
    }

    #[test]
    fn compass_minimizes_nonsmooth_function() {
        let f = |x: &[f64]| (x[0] - 1.0).abs() + 2.0 * (x[1] + 0.5).abs();
        let (x, fx) = compass(f, &[0.0, 0.0], CompassOptions::default());
        assert!(fx < 1e-9, "{x:?} {fx}");
    }

    #[test]
    fn sphere_compass_finds_smallest_coordinate_axis() {
        // Minimizing x^T D x on the sphere picks the smallest diagonal entry.
        let f = |x: &[f64]| 3.0 * x[0] * x[0] + 1.0 * x[1] * x[1] + 2.0 * x[2] * x[2];
        let (x, fx) = sphere_compass(f, &[0.6, 0.5, 0.6], CompassOptions::default());
        assert!((fx - 1.0).abs() < 1e-9);
        assert!((x[1].abs() - 1.0).abs() < 1e-4);
    }
}
