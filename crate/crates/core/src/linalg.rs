//! Tiny dense-vector/matrix helpers for low-dimensional momentum space.

use crate::error::{Error, Result};
use rand::Rng;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Row-major d x d matrix applied to a vector.
pub fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = m.len();
    (0..d).map(|i| (0..d).map(|j| m[j][i]).collect()).collect()
}

/// Checks R R^T = I to within `tol` (max entry deviation).
pub fn check_orthogonal(m: &[Vec<f64>], tol: f64) -> Result<()> {
    let d = m.len();
    let mut worst = 0.0_f64;
    for i in 0..d {
        if m[i].len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: m[i].len(),
            });
        }
        for j in 0..d {
            let entry: f64 = (0..d).map(|k| m[i][k] * m[j][k]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((entry - target).abs());
        }
    }
    if worst > tol {
        return Err(Error::NotOrthogonal(worst));
    }
    Ok(())
}

/// Random orthogonal matrix from Gram-Schmidt on Gaussian columns,
/// with a random sign flip so reflections are sampled too.
pub fn random_orthogonal<R: Rng>(d: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let gauss = |rng: &mut R| {
        let u1: f64 = rng.random::<f64>().max(1e-12);
        let u2: f64 = rng.random();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    };
    loop {
        let mut cols: Vec<Vec<f64>> = (0..d)
            .map(|_| (0..d).map(|_| gauss(rng)).collect())
            .collect();
        let mut ok = true;
        for i in 0..d {
            for j in 0..i {
                let proj = dot(&cols[i].clone(), &cols[j]);
                for k in 0..d {
                    cols[i][k] -= proj * cols[j][k];
                }
            }
            let n = norm(&cols[i]);
            if n < 1e-8 {
                ok = false;
                break;
            }
            for k in 0..d {
                cols[i][k] /= n;
            }
        }
        if !ok {
            continue;
        }
        if rng.random::<bool>() {
            for k in 0..d {
                cols[0][k] = -cols[0][k];
            }
        }
        // Columns become rows of R^T; return R (rows act on vectors).
        return transpose(&cols);
    }
}
