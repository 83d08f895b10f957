//! Small numeric helpers shared across modules.

use num::complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic pairwise summation; order-stable regardless of thread count.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        2 => v[0] + v[1],
        n if n <= 32 => {
            let mut acc = 0.0;
            for x in v {
                acc += x;
            }
            acc
        }
        n => {
            let mid = n / 2;
            pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
        }
    }
}

/// Seeded RNG used everywhere randomness appears; same seed, same stream.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random point of S³ ⊂ ℂ² (normalized 4-dimensional Gaussian).
pub fn random_sphere_point<R: Rng>(rng: &mut R) -> [Complex<f64>; 2] {
    use rand_distr::StandardNormal;
    loop {
        let g: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]).sqrt();
        if n > 1e-6 {
            return [
                Complex::new(g[0] / n, g[1] / n),
                Complex::new(g[2] / n, g[3] / n),
            ];
        }
    }
}

/// Exponential of a real 4×4 matrix by scaling and squaring with a Taylor
/// series; used to flow along linear vector fields in finite-difference tests.
pub fn mat4_exp(a: [[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let norm: f64 = a
        .iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = norm.log2().ceil().max(0.0) as u32 + 1;
    let scale = 1.0 / f64::powi(2.0, s as i32);
    let mut b = a;
    for row in b.iter_mut() {
        for x in row.iter_mut() {
            *x *= scale;
        }
    }
    let mut result = mat4_identity();
    let mut term = mat4_identity();
    for k in 1..=16 {
        term = mat4_mul(&term, &b);
        for r in 0..4 {
            for c in 0..4 {
                term[r][c] /= k as f64;
            }
        }
        for r in 0..4 {
            for c in 0..4 {
                result[r][c] += term[r][c];
            }
        }
    }
    for _ in 0..s {
        result = mat4_mul(&result, &result);
    }
    result
}

pub fn mat4_identity() -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn mat4_mul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            let mut acc = 0.0;
            for k in 0..4 {
                acc += a[r][k] * b[k][c];
            }
            m[r][c] = acc;
        }
    }
    m
}

pub fn mat4_apply(a: &[[f64; 4]; 4], v: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for r in 0..4 {
        out[r] = (0..4).map(|k| a[r][k] * v[k]).sum();
    }
    out
}

/// ℝ⁴ coordinates (Re ζ₁, Im ζ₁, Re ζ₂, Im ζ₂) of a sphere point.
pub fn to_r4(p: &[Complex<f64>; 2]) -> [f64; 4] {
    [p[0].re, p[0].im, p[1].re, p[1].im]
}

pub fn from_r4(v: &[f64; 4]) -> [Complex<f64>; 2] {
    [Complex::new(v[0], v[1]), Complex::new(v[2], v[3])]
}

/// Least squares fit y ≈ a + b·x; returns (a, b, rms residual).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let sx = pairwise_sum(xs);
    let sy = pairwise_sum(ys);
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    let b = (n * sxy - sx * sy) / denom;
    let a = (sy - b * sx) / n;
    let mut acc = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let r = y - (a + b * x);
        acc += r * r;
    }
    (a, b, (acc / n.max(1.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive() {
        let v: Vec<f64> = (0..1001).map(|i| (i as f64).sin()).collect();
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).abs() < 1e-9);
    }

    #[test]
    fn mat4_exp_rotation() {
        // Generator of rotation in the (0,1) plane; exp(tA) is a rotation.
        let mut a = [[0.0; 4]; 4];
        a[0][1] = -1.0;
        a[1][0] = 1.0;
        let t = 0.7;
        let mut at = a;
        for row in at.iter_mut() {
            for x in row.iter_mut() {
                *x *= t;
            }
        }
        let e = mat4_exp(at);
        assert!((e[0][0] - t.cos()).abs() < 1e-12);
        assert!((e[1][0] - t.sin()).abs() < 1e-12);
        assert!((e[2][2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn linear_fit_recovers_line()
    {
        let xs: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 - 0.75 * x).collect();
        let (a, b, r) = linear_fit(&xs, &ys);
        assert!((a - 2.5).abs() < 1e-12 && (b + 0.75).abs() < 1e-12 && r < 1e-12);
    }
}
