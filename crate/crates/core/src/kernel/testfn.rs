//! Smooth compactly supported test functions on momentum space, closed
//! under rotation, translation (momentum-space phases) and complex linear
//! combination, with exact analytic gradients.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, mat_mul, mat_vec};

#[derive(Debug, Clone)]
pub enum TestFunction {
    /// exp(-1 / (1 - |(p - c)/r|^2)) inside the ball |p - c| < r, 0 outside.
    Bump { center: Vec<f64>, radius: f64 },
    /// Bump times the monomial prod_j (p_j - c_j)^{k_j}.
    BumpTimesPoly {
        center: Vec<f64>,
        radius: f64,
        powers: Vec<u32>,
    },
    /// e^{i p . x} times an inner test function (spatial translation by x).
    PhaseModulated {
        inner: Box<TestFunction>,
        shift: Vec<f64>,
    },
    /// inner(R^T p): composition with a rotation.
    Rotated {
        inner: Box<TestFunction>,
        rotation: Vec<Vec<f64>>,
    },
    /// Finite complex linear combination.
    Sum {
        terms: Vec<(Complex64, TestFunction)>,
        dim: usize,
    },
}

impl TestFunction {
    pub fn bump(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "bump radius must be positive, got {radius}"
            )));
        }
        if center.is_empty() {
            return Err(Error::InvalidParameter("empty center".into()));
        }
        Ok(TestFunction::Bump { center, radius })
    }

    pub fn bump_times_poly(center: Vec<f64>, radius: f64, powers: Vec<u32>) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "bump radius must be positive, got {radius}"
            )));
        }
        if powers.len() != center.len() {
            return Err(Error::DimensionMismatch {
                expected: center.len(),
                got: powers.len(),
            });
        }
        Ok(TestFunction::BumpTimesPoly {
            center,
            radius,
            powers,
        })
    }

    pub fn zero(dim: usize) -> Self {
        TestFunction::Sum {
            terms: Vec::new(),
            dim,
        }
    }

    pub fn scaled(self, a: Complex64) -> Self {
        let dim = self.dim();
        TestFunction::Sum {
            terms: vec![(a, self)],
            dim,
        }
    }

    pub fn linear_combination(terms: Vec<(Complex64, TestFunction)>) -> Result<Self> {
        let dim = terms
            .first()
            .map(|(_, f)| f.dim())
            .ok_or_else(|| Error::InvalidParameter("empty combination needs zero(dim)".into()))?;
        for (_, f) in &terms {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.dim(),
                });
            }
        }
        Ok(TestFunction::Sum { terms, dim })
    }

    pub fn dim(&self) -> usize {
        match self {
            TestFunction::Bump { center, .. } => center.len(),
            TestFunction::BumpTimesPoly { center, .. } => center.len(),
            TestFunction::PhaseModulated { inner, .. } => inner.dim(),
            TestFunction::Rotated { inner, .. } => inner.dim(),
            TestFunction::Sum { dim, .. } => *dim,
        }
    }

    /// Momentum-space translation by x: multiplies by e^{i p . x}.
    pub fn translate(self, x: Vec<f64>) -> Result<Self> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(match self {
            TestFunction::PhaseModulated { inner, shift } => {
                let merged = shift.iter().zip(&x).map(|(a, b)| a + b).collect();
                TestFunction::PhaseModulated {
                    inner,
                    shift: merged,
                }
            }
            other => TestFunction::PhaseModulated {
                inner: Box::new(other),
                shift: x,
            },
        })
    }

    /// Composition with R^T; rotationally symmetric bumps just move their
    /// center, everything else wraps.
    pub fn rotate(self, rotation: &[Vec<f64>]) -> Result<Self> {
        if rotation.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: rotation.len(),
            });
        }
        linalg::check_orthogonal(rotation, 1e-12)?;
        Ok(match self {
            TestFunction::Bump { center, radius } => TestFunction::Bump {
                center: mat_vec(rotation, &center),
                radius,
            },
            TestFunction::PhaseModulated { inner, shift } => TestFunction::PhaseModulated {
                inner: Box::new(inner.rotate(rotation)?),
                shift: mat_vec(rotation, &shift),
            },
            TestFunction::Rotated {
                inner,
                rotation: r0,
            } => TestFunction::Rotated {
                inner,
                rotation: mat_mul(rotation, &r0),
            },
            TestFunction::Sum { terms, dim } => TestFunction::Sum {
                terms: terms
                    .into_iter()
                    .map(|(a, f)| f.rotate(rotation).map(|g| (a, g)))
                    .collect::<Result<_>>()?,
                dim,
            },
            other => TestFunction::Rotated {
                inner: Box::new(other),
                rotation: rotation.to_vec(),
            },
        })
    }

    /// Smallest ball known to contain the support.
    pub fn support_ball(&self) -> (Vec<f64>, f64) {
        match self {
            TestFunction::Bump { center, radius }
            | TestFunction::BumpTimesPoly { center, radius, .. } => (center.clone(), *radius),
            TestFunction::PhaseModulated { inner, .. } => inner.support_ball(),
            TestFunction::Rotated { inner, rotation } => {
                let (c, r) = inner.support_ball();
                (mat_vec(rotation, &c), r)
            }
            TestFunction::Sum { terms, dim } => {
                if terms.is_empty() {
                    return (vec![0.0; *dim], 0.0);
                }
                let balls: Vec<(Vec<f64>, f64)> =
                    terms.iter().map(|(_, f)| f.support_ball()).collect();
                // Conservative enclosing ball: grow from the first.
                let (mut c, mut r) = balls[0].clone();
                for (ci, ri) in balls.iter().skip(1) {
                    let dist = c
                        .iter()
                        .zip(ci)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt();
                    if dist + ri <= r {
                        continue;
                    }
                    if dist + r <= *ri {
                        c = ci.clone();
                        r = *ri;
                        continue;
                    }
                    let new_r = 0.5 * (dist + r + ri);
                    if dist > 0.0 {
                        let t = (new_r - r) / dist;
                        for (ck, cik) in c.iter_mut().zip(ci) {
                            *ck += t * (cik - *ck);
                        }
                    }
                    r = new_r;
                }
                (c, r)
            }
        }
    }

    /// Coarse bound on sup |f|.
    pub fn sup_bound(&self) -> f64 {
        match self {
            TestFunction::Bump { .. } => (-1.0_f64).exp(),
            TestFunction::BumpTimesPoly { radius, powers, .. } => {
                let total: u32 = powers.iter().sum();
                (-1.0_f64).exp() * radius.powi(total as i32)
            }
            TestFunction::PhaseModulated { inner, .. } => inner.sup_bound(),
            TestFunction::Rotated { inner, .. } => inner.sup_bound(),
            TestFunction::Sum { terms, .. } => terms
                .iter()
                .map(|(a, f)| num_complex::ComplexFloat::abs(*a) * f.sup_bound())
                .sum(),
        }
    }

    /// Value at p; checks the dimension.
    pub fn eval(&self, p: &[f64]) -> Result<Complex64> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.len(),
            });
        }
        Ok(self.eval_raw(p))
    }

    /// Gradient at p (exact, by chain and product rules); checks dimension.
    pub fn grad(&self, p: &[f64]) -> Result<Vec<Complex64>> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.len(),
            });
        }
        Ok(self.grad_raw(p))
    }

    pub(crate) fn eval_raw(&self, p: &[f64]) -> Complex64 {
        match self {
            TestFunction::Bump { center, radius } => {
                Complex64::new(bump_value(center, *radius, p), 0.0)
            }
            TestFunction::BumpTimesPoly {
                center,
                radius,
                powers,
            } => {
                let b = bump_value(center, *radius, p);
                if b == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let mono: f64 = p
                    .iter()
                    .zip(center)
                    .zip(powers)
                    .map(|((pj, cj), kj)| (pj - cj).powi(*kj as i32))
                    .product();
                Complex64::new(mono * b, 0.0)
            }
            TestFunction::PhaseModulated { inner, shift } => {
                let phase = Complex64::from_polar(1.0, linalg::dot(p, shift));
                phase * inner.eval_raw(p)
            }
            TestFunction::Rotated { inner, rotation } => {
                // R^T p without materializing the transpose.
                let rp: Vec<f64> = (0..p.len())
                    .map(|k| (0..p.len()).map(|j| rotation[j][k] * p[j]).sum())
                    .collect();
                inner.eval_raw(&rp)
            }
            TestFunction::Sum { terms, .. } => terms.iter().map(|(a, f)| a * f.eval_raw(p)).sum(),
        }
    }

    pub(crate) fn grad_raw(&self, p: &[f64]) -> Vec<Complex64> {
        let d = self.dim();
        match self {
            TestFunction::Bump { center, radius } => bump_grad(center, *radius, p)
                .into_iter()
                .map(|g| Complex64::new(g, 0.0))
                .collect(),
            TestFunction::BumpTimesPoly {
                center,
                radius,
                powers,
            } => {
                let b = bump_value(center, *radius, p);
                if b == 0.0 {
                    return vec![Complex64::new(0.0, 0.0); d];
                }
                let gb = bump_grad(center, *radius, p);
                let shifted: Vec<f64> = p.iter().zip(center).map(|(pj, cj)| pj - cj).collect();
                let mono: f64 = shifted
                    .iter()
                    .zip(powers)
                    .map(|(x, k)| x.powi(*k as i32))
                    .product();
                (0..d)
                    .map(|j| {
                        let kf = powers[j] as f64;
                        let dmono = if powers[j] == 0 {
                            0.0
                        } else {
                            let mut v = kf * shifted[j].powi(powers[j] as i32 - 1);
                            for (l, x) in shifted.iter().enumerate() {
                                if l != j {
                                    v *= x.powi(powers[l] as i32);
                                }
                            }
                            v
                        };
                        Complex64::new(dmono * b + mono * gb[j], 0.0)
                    })
                    .collect()
            }
            TestFunction::PhaseModulated { inner, shift } => {
                let phase = Complex64::from_polar(1.0, linalg::dot(p, shift));
                let v = inner.eval_raw(p);
                let gv = inner.grad_raw(p);
                (0..d)
                    .map(|j| phase * (Complex64::new(0.0, shift[j]) * v + gv[j]))
                    .collect()
            }
            TestFunction::Rotated { inner, rotation } => {
                let rp: Vec<f64> = (0..d)
                    .map(|k| (0..d).map(|j| rotation[j][k] * p[j]).sum())
                    .collect();
                let gi = inner.grad_raw(&rp);
                (0..d)
                    .map(|j| (0..d).map(|k| rotation[j][k] * gi[k]).sum())
                    .collect()
            }
            TestFunction::Sum { terms, .. } => {
                let mut acc = vec![Complex64::new(0.0, 0.0); d];
                for (a, f) in terms {
                    for (slot, g) in acc.iter_mut().zip(f.grad_raw(p)) {
                        *slot += a * g;
                    }
                }
                acc
            }
        }
    }
}

fn bump_value(center: &[f64], radius: f64, p: &[f64]) -> f64 {
    let rho2: f64 = p
        .iter()
        .zip(center)
        .map(|(pj, cj)| {
            let u = (pj - cj) / radius;
            u * u
        })
        .sum();
    if rho2 >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - rho2)).exp()
    }
}

fn bump_grad(center: &[f64], radius: f64, p: &[f64]) -> Vec<f64> {
    let u: Vec<f64> = p
        .iter()
        .zip(center)
        .map(|(pj, cj)| (pj - cj) / radius)
        .collect();
    let rho2: f64 = u.iter().map(|x| x * x).sum();
    if rho2 >= 1.0 {
        return vec![0.0; p.len()];
    }
    let g = (-1.0 / (1.0 - rho2)).exp();
    let denom = (1.0 - rho2) * (1.0 - rho2);
    u.iter()
        .map(|uj| -g * 2.0 * uj / (radius * denom))
        .collect()
}
