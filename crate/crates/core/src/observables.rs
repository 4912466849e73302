//! Physical read-outs of a kernel: local particle density with condensate
//! contributions, symmetry (breaking) laws, and mollified momentum-space
//! condensate maps.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::kernel::{pair, SingularPart, TestFunction, TwoPointKernel};
use crate::linalg::random_orthogonal;
use crate::statistics::{self, DensityOutcome};

/// Diagonal (bulk) part of the local density.
#[derive(Debug, Clone)]
pub enum BulkVerdict {
    Finite {
        value: f64,
        error_bound: f64,
    },
    /// Models with divergent critical density still carry their condensate
    /// but have infinite local density everywhere.
    Infinite {
        diagnostic: String,
    },
}

/// Position-dependence of the condensate contribution to the density:
/// a constant part plus quadratic terms D sum_{j in axes} x_j^2.
#[derive(Debug, Clone, Default)]
pub struct CondensateLaw {
    pub constant: f64,
    pub quadratic: Vec<(f64, Vec<usize>)>,
}

impl CondensateLaw {
    pub fn at(&self, x: &[f64]) -> f64 {
        let mut v = self.constant;
        for (w, axes) in &self.quadratic {
            v += w * axes.iter().map(|&j| x[j] * x[j]).sum::<f64>();
        }
        v
    }
}

#[derive(Debug, Clone)]
pub struct DensityProfileResult {
    pub bulk: BulkVerdict,
    pub condensate: CondensateLaw,
}

#[derive(Debug, Clone)]
pub struct LocalDensity {
    pub bulk: BulkVerdict,
    /// Condensate contribution at the queried position.
    pub condensate: f64,
}

impl LocalDensity {
    /// Total density when the bulk is finite.
    pub fn total(&self) -> Option<f64> {
        match &self.bulk {
            BulkVerdict::Finite { value, .. } => Some(value + self.condensate),
            BulkVerdict::Infinite { .. } => None,
        }
    }
}

fn bulk_of(kernel: &TwoPointKernel) -> Result<BulkVerdict> {
    if !kernel.include_diagonal {
        return Ok(BulkVerdict::Finite {
            value: 0.0,
            error_bound: 0.0,
        });
    }
    // The plane-wave representative of delta_x has unit modulus, so the
    // diagonal pairing collapses to the plain occupation integral,
    // independent of position.
    match statistics::occupation_momentum_integral(
        &kernel.stats,
        &kernel.profile,
        &kernel.disp,
        1e-10,
    )? {
        DensityOutcome::Finite { value, error_bound } => {
            Ok(BulkVerdict::Finite { value, error_bound })
        }
        DensityOutcome::Infinite { diagnostic } => Ok(BulkVerdict::Infinite { diagnostic }),
    }
}

/// Position law of the condensate terms.
pub fn condensate_law(kernel: &TwoPointKernel) -> CondensateLaw {
    let mut law = CondensateLaw::default();
    for part in &kernel.singular {
        match part {
            SingularPart::PointMass { weight, .. } => law.constant += weight,
            SingularPart::SphereAverage { weight, .. } => law.constant += weight,
            SingularPart::SurfaceAtoms { atoms } => {
                law.constant += atoms.iter().map(|(w, _)| w).sum::<f64>()
            }
            SingularPart::GradientPointMass { weight, axes } => {
                law.quadratic.push((*weight, axes.clone()))
            }
        }
    }
    law
}

/// rho_omega(x): bulk density plus the condensate contribution at x.
pub fn local_density(kernel: &TwoPointKernel, x: &[f64]) -> Result<LocalDensity> {
    if x.len() != kernel.d() {
        return Err(Error::DimensionMismatch {
            expected: kernel.d(),
            got: x.len(),
        });
    }
    Ok(LocalDensity {
        bulk: bulk_of(kernel)?,
        condensate: condensate_law(kernel).at(x),
    })
}

/// Bulk verdict plus the full position law, for reporting.
pub fn density_profile(kernel: &TwoPointKernel) -> Result<DensityProfileResult> {
    Ok(DensityProfileResult {
        bulk: bulk_of(kernel)?,
        condensate: condensate_law(kernel),
    })
}

/// Mean of the local density over a ball of radius R centred at the
/// origin: the quadratic condensate contributes D |axes| R^2 / (d + 2).
pub fn mean_density_over_ball(kernel: &TwoPointKernel, radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::NegativeRadius(radius));
    }
    let bulk = match bulk_of(kernel)? {
        BulkVerdict::Finite { value, .. } => value,
        BulkVerdict::Infinite { diagnostic } => {
            return Err(Error::DomainViolation(format!(
                "bulk density divergent: {diagnostic}"
            )))
        }
    };
    let law = condensate_law(kernel);
    let d = kernel.d() as f64;
    let mut mean = bulk + law.constant;
    for (w, axes) in &law.quadratic {
        mean += w * axes.len() as f64 * radius * radius / (d + 2.0);
    }
    Ok(mean)
}

/// Condensate field on the grid for kernels whose gradient part acts on
/// the first two axes: D (x^2 + y^2), independent of z.
pub fn meniscus_profile(kernel: &TwoPointKernel, grid: &[(f64, f64)]) -> Result<Vec<f64>> {
    if kernel.d() != 3 {
        return Err(Error::UnsupportedDimension(kernel.d()));
    }
    let mut weight = 0.0;
    let mut found = false;
    for part in &kernel.singular {
        if let SingularPart::GradientPointMass { weight: w, axes } = part {
            let mut sorted = axes.clone();
            sorted.sort_unstable();
            if sorted != vec![0, 1] {
                return Err(Error::InvalidParameter(format!(
                    "meniscus profile needs gradient axes {{1, 2}}, got {axes:?}"
                )));
            }
            weight += w;
            found = true;
        }
    }
    if !found {
        return Err(Error::InvalidParameter(
            "meniscus profile needs a gradient point mass on axes {1, 2}".into(),
        ));
    }
    Ok(grid
        .iter()
        .map(|&(x, y)| weight * (x * x + y * y))
        .collect())
}

/// Max over random (R, f, g) of |F(f_R, g_R) - F(f, g)|.
pub fn rotation_invariance_deviation(
    kernel: &TwoPointKernel,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let d = kernel.d();
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let r = random_orthogonal(d, &mut rng);
        let center = |rng: &mut StdRng| -> Vec<f64> {
            (0..d).map(|_| rng.random::<f64>() * 2.4 - 1.2).collect()
        };
        let f = TestFunction::bump(center(&mut rng), 0.6 + rng.random::<f64>())?;
        let g = TestFunction::bump(center(&mut rng), 0.6 + rng.random::<f64>())?;
        let base = pair(kernel, &f, &g)?;
        let rotated = pair(kernel, &f.rotate(&r)?, &g.rotate(&r)?)?;
        worst = worst.max((rotated - base).norm());
    }
    Ok(worst)
}

fn plane_wave_grad_at_origin(x: &[f64]) -> Vec<Complex64> {
    // Momentum representative of delta_x is e^{-i p . x}; its gradient at
    // p = 0 is -i x_j.
    x.iter().map(|&xj| Complex64::new(0.0, -xj)).collect()
}

/// Translation symmetry breaking of gradient condensates: shift of the
/// local density at the origin under the spatial translation by y.
/// Returns (predicted, measured): D sum_{j in axes} y_j^2 against the
/// pairing of the singular parts with translated plane-wave
/// representatives.
pub fn translation_shift_law(kernel: &TwoPointKernel, y: &[f64]) -> Result<(f64, f64)> {
    let d = kernel.d();
    if y.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: y.len(),
        });
    }
    if !kernel
        .singular
        .iter()
        .any(|p| matches!(p, SingularPart::GradientPointMass { .. }))
    {
        return Err(Error::InvalidParameter(
            "translation shift law needs a gradient point mass part".into(),
        ));
    }

    let mut predicted = 0.0;
    let mut measured = 0.0;
    let grad_shifted = plane_wave_grad_at_origin(y);
    let grad_origin = plane_wave_grad_at_origin(&vec![0.0; d]);
    for part in &kernel.singular {
        match part {
            SingularPart::GradientPointMass { weight, axes } => {
                predicted += weight * axes.iter().map(|&j| y[j] * y[j]).sum::<f64>();
                let before: Complex64 = axes
                    .iter()
                    .map(|&j| grad_origin[j] * grad_origin[j].conj())
                    .sum();
                let after: Complex64 = axes
                    .iter()
                    .map(|&j| grad_shifted[j] * grad_shifted[j].conj())
                    .sum();
                measured += weight * (after - before).re;
            }
            // Point-supported parts pair plane waves to unit modulus:
            // no density shift.
            _ => {}
        }
    }
    Ok((predicted, measured))
}

/// Isotropic Gaussian mollifier of width eps in dimension d.
fn gaussian_mollifier(p: &[f64], eps: f64) -> f64 {
    let d = p.len() as f64;
    let norm2: f64 = p.iter().map(|x| x * x).sum();
    (2.0 * std::f64::consts::PI * eps * eps).powf(-d / 2.0) * (-norm2 / (2.0 * eps * eps)).exp()
}

/// Momentum-space condensate density at (k1, k2) (remaining coordinates
/// zero), visualized through a Gaussian mollifier of width eps.
pub fn condensate_map_at(kernel: &TwoPointKernel, eps: f64, k1: f64, k2: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mollifier width must be positive, got {eps}"
        )));
    }
    let d = kernel.d();
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let mut k = vec![0.0; d];
    k[0] = k1;
    k[1] = k2;

    let mut field = 0.0;
    let mut supported = false;
    for part in &kernel.singular {
        match part {
            SingularPart::PointMass { weight, at } => {
                let shifted: Vec<f64> = k.iter().zip(at).map(|(a, b)| a - b).collect();
                let m = gaussian_mollifier(&shifted, eps);
                field += weight * m * m;
                supported = true;
            }
            SingularPart::GradientPointMass { weight, axes } => {
                // grad_p delta_eps(p - k) at p = 0 has component
                // (k_j / eps^2) delta_eps(k).
                let m = gaussian_mollifier(&k, eps);
                let g2: f64 =
                    axes.iter().map(|&j| k[j] * k[j]).sum::<f64>() / (eps * eps * eps * eps);
                field += weight * g2 * m * m;
                supported = true;
            }
            _ => {
                return Err(Error::InvalidParameter(
                    "condensate maps support point-mass and gradient parts only".into(),
                ))
            }
        }
    }
    if !supported {
        return Err(Error::InvalidParameter(
            "kernel has no singular part to map".into(),
        ));
    }
    Ok(field)
}

/// The map evaluated over a grid of (k1, k2) points.
pub fn condensate_map(kernel: &TwoPointKernel, eps: f64, grid: &[(f64, f64)]) -> Result<Vec<f64>> {
    grid.iter()
        .map(|&(a, b)| condensate_map_at(kernel, eps, a, b))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::DispersionRelation;
    use crate::quad::golden_max;
    use crate::statistics::QStatistics;
    use crate::temperature::InverseTempProfile;

    fn critical_bose_kernel() -> TwoPointKernel {
        TwoPointKernel::diagonal(
            QStatistics::bose(0.0),
            InverseTempProfile::constant(1.0).unwrap(),
            DispersionRelation::power_law(2.0, 3).unwrap(),
        )
    }

    #[test]
    fn local_density_point_mass() {
        let k = critical_bose_kernel().with_part(SingularPart::PointMass {
            weight: 0.4,
            at: vec![0.0, 0.0, 0.0],
        });
        let rho0 = local_density(&k, &[0.0, 0.0, 0.0]).unwrap();
        let rho1 = local_density(&k, &[3.0, -2.0, 1.0]).unwrap();
        // Homogeneous: same value everywhere.
        assert!((rho0.total().unwrap() - rho1.total().unwrap()).abs() < 1e-12);
        assert!((rho0.condensate - 0.4).abs() < 1e-15);
    }

    #[test]
    fn local_density_gradient_parabola() {
        let k = critical_bose_kernel().with_part(SingularPart::GradientPointMass {
            weight: 0.9,
            axes: vec![0],
        });
        let at0 = local_density(&k, &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(at0.condensate, 0.0);
        let at2 = local_density(&k, &[2.0, 5.0, -7.0]).unwrap();
        assert!((at2.condensate - 0.9 * 4.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_measure_total_mass() {
        let k = critical_bose_kernel().with_part(SingularPart::SphereAverage {
            weight: 1.3,
            radius: 0.0,
        });
        let rho = local_density(&k, &[0.5, 0.5, 0.5]).unwrap();
        assert!((rho.condensate - 1.3).abs() < 1e-12);
    }

    #[test]
    fn infinite_bulk_still_reports_condensate() {
        // PowerLog with d = 5 > s alpha_inf: divergent critical density.
        let k = TwoPointKernel::diagonal(
            QStatistics::bose(0.0),
            InverseTempProfile::power_log(0.0, 2.0).unwrap(),
            DispersionRelation::power_law(2.0, 5).unwrap(),
        )
        .with_part(SingularPart::PointMass {
            weight: 0.7,
            at: vec![0.0; 5],
        });
        let rho = local_density(&k, &[0.0; 5]).unwrap();
        assert!(matches!(rho.bulk, BulkVerdict::Infinite { .. }));
        assert!((rho.condensate - 0.7).abs() < 1e-15);
        assert!(rho.total().is_none());
    }

    #[test]
    fn meniscus_values() {
        let k = critical_bose_kernel().with_part(SingularPart::GradientPointMass {
            weight: 0.5,
            axes: vec![0, 1],
        });
        let field =
            meniscus_profile(&k, &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (2.0, 0.0)]).unwrap();
        assert_eq!(field[0], 0.0);
        assert!((field[1] - field[2]).abs() < 1e-15);
        assert!((field[3] - 4.0 * field[1]).abs() < 1e-12);

        let wrong = critical_bose_kernel().with_part(SingularPart::GradientPointMass {
            weight: 0.5,
            axes: vec![0],
        });
        assert!(meniscus_profile(&wrong, &[(0.0, 0.0)]).is_err());
    }

    #[test]
    fn mean_density_grows_quadratically() {
        let k = critical_bose_kernel().with_part(SingularPart::GradientPointMass {
            weight: 1.0,
            axes: vec![0],
        });
        // Log-log slope over three decades (starting where the quadratic
        // term dominates the finite bulk).
        let radii = [100.0, 1000.0, 10000.0, 100000.0];
        let means: Vec<f64> = radii
            .iter()
            .map(|&r| mean_density_over_ball(&k, r).unwrap())
            .collect();
        let slope = (means[3].ln() - means[0].ln()) / (radii[3].ln() - radii[0].ln());
        assert!((slope - 2.0).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn translation_shift_examples() {
        let k = critical_bose_kernel().with_part(SingularPart::GradientPointMass {
            weight: 0.8,
            axes: vec![0],
        });
        let (pred, meas) = translation_shift_law(&k, &[1.0, 0.0, 0.0]).unwrap();
        assert!((pred - 0.8).abs() < 1e-15);
        assert!((pred - meas).abs() <= 1e-10);

        let (pred, meas) = translation_shift_law(&k, &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(pred, 0.0);
        assert!(meas.abs() <= 1e-15);

        // Translation along an axis outside the gradient set: no shift.
        let (pred, meas) = translation_shift_law(&k, &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(pred, 0.0);
        assert!(meas.abs() <= 1e-15);
    }

    #[test]
    fn diagonal_only_rotation_invariance() {
        // Isotropic integrand: deviations are quadrature-limited.
        let k = TwoPointKernel::diagonal(
            QStatistics::bose(-0.6),
            InverseTempProfile::constant(1.0).unwrap(),
            DispersionRelation::power_law(2.0, 3).unwrap(),
        );
        let dev = rotation_invariance_deviation(&k, 5, 3).unwrap();
        assert!(dev <= 1e-8, "deviation {dev:.3e}");
    }

    #[test]
    fn gradient_map_ring_at_eps() {
        let k = critical_bose_kernel().with_part(SingularPart::GradientPointMass {
            weight: 1.0,
            axes: vec![0, 1, 2],
        });
        for eps in [0.4, 0.2, 0.1] {
            assert_eq!(condensate_map_at(&k, eps, 0.0, 0.0).unwrap(), 0.0);
            let (r_star, _) = golden_max(
                &|r| condensate_map_at(&k, eps, r, 0.0).unwrap(),
                1e-4,
                5.0 * eps,
                1e-10,
            );
            assert!(
                (r_star - eps).abs() < 1e-6 * eps.max(1.0),
                "eps {eps}, ring {r_star}"
            );
        }
    }

    #[test]
    fn point_mass_map_radially_decreasing() {
        let k = critical_bose_kernel().with_part(SingularPart::PointMass {
            weight: 1.0,
            at: vec![0.0, 0.0, 0.0],
        });
        let mut prev = condensate_map_at(&k, 0.3, 0.0, 0.0).unwrap();
        for i in 1..40 {
            let r = 0.05 * i as f64;
            let v = condensate_map_at(&k, 0.3, r, 0.0).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }
}
