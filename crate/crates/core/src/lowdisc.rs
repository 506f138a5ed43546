//! Deterministic low-discrepancy directions and disk points.
//!
//! Every sequence is a pure function of `(count, seed)`, so sampled
//! estimates are reproducible across runs and thread counts.

use std::f64::consts::TAU;

const PRIMES: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// Van der Corput radical inverse of `index` in `base`.
pub fn radical_inverse(base: u32, mut index: u64) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut factor = inv;
    let mut acc = 0.0;
    while index > 0 {
        acc += (index % b) as f64 * factor;
        index /= b;
        factor *= inv;
    }
    acc
}

fn seed_shift(seed: u64) -> f64 {
    // Golden-ratio rotation keeps different seeds well spread.
    (seed as f64 * 0.618_033_988_749_894_9).fract()
}

/// `count` unit vectors in `R^2`, equally spaced in angle.
pub fn circle_directions(count: usize, seed: u64) -> Vec<[f64; 2]> {
    let u = seed_shift(seed);
    (0..count)
        .map(|k| {
            let t = TAU * (k as f64 + u) / count as f64;
            [t.cos(), t.sin()]
        })
        .collect()
}

/// `count` unit vectors in `R^n`.
///
/// `n = 1` alternates `+1, -1`; `n = 2` uses [`circle_directions`]; higher
/// dimensions push a scrambled Halton sequence through Box-Muller and
/// normalize.
pub fn sphere_directions(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    match n {
        0 => Vec::new(),
        1 => (0..count)
            .map(|k| vec![if k % 2 == 0 { 1.0 } else { -1.0 }])
            .collect(),
        2 => circle_directions(count, seed)
            .into_iter()
            .map(|d| d.to_vec())
            .collect(),
        _ => {
            assert!(n <= PRIMES.len(), "sphere_directions supports n <= {}", PRIMES.len());
            let pairs = n.div_ceil(2);
            let shift = seed_shift(seed);
            let mut out = Vec::with_capacity(count);
            let mut index = 1u64 + seed.wrapping_mul(104_729);
            while out.len() < count {
                let mut v = Vec::with_capacity(2 * pairs);
                for j in 0..pairs {
                    let u1 = (radical_inverse(PRIMES[2 * j], index) + shift).fract();
                    let u2 = (radical_inverse(PRIMES[2 * j + 1], index) + shift).fract();
                    let r = (-2.0 * (1.0 - u1).ln()).sqrt();
                    v.push(r * (TAU * u2).cos());
                    v.push(r * (TAU * u2).sin());
                }
                v.truncate(n);
                index += 1;
                let norm = crate::plane::norm(&v);
                if norm > 1e-12 {
                    v.iter_mut().for_each(|x| *x /= norm);
                    out.push(v);
                }
            }
            out
        }
    }
}

/// `count` points of the open disk of radius `radius`, area-uniform.
pub fn disk_points(count: usize, radius: f64, seed: u64) -> Vec<[f64; 2]> {
    let shift = seed_shift(seed);
    (1..=count as u64)
        .map(|k| {
            let r = radius * (radical_inverse(2, k) + shift).fract().sqrt();
            let t = TAU * (radical_inverse(3, k) + shift).fract();
            [r * t.cos(), r * t.sin()]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_base_two() {
        let v: Vec<f64> = (1..=4).map(|k| radical_inverse(2, k)).collect();
        assert_eq!(v, vec![0.5, 0.25, 0.75, 0.125]);
    }

    #[test]
    fn directions_are_unit_and_deterministic() {
        for n in 1..=6 {
            let a = sphere_directions(n, 64, 3);
            let b = sphere_directions(n, 64, 3);
            assert_eq!(a, b);
            assert_eq!(a.len(), 64);
            for d in &a {
                assert!((crate::plane::norm(d) - 1.0).abs() < 1e-12);
            }
        }
        assert_ne!(sphere_directions(3, 8, 0), sphere_directions(3, 8, 1));
    }

    #[test]
    fn sphere_directions_cover_all_orthants() {
        let dirs = sphere_directions(3, 512, 0);
        let mut seen = [false; 8];
        for d in dirs {
            let o = (d[0] > 0.0) as usize | ((d[1] > 0.0) as usize) << 1 | ((d[2] > 0.0) as usize) << 2;
            seen[o] = true;
        }
        assert!(seen.iter().all(|s| *s));
    }

    #[test]
    fn disk_points_stay_inside() {
        for p in disk_points(200, 0.5, 7) {
            assert!(p[0].hypot(p[1]) < 0.5);
        }
    }
}
