//! Small exact special-function helpers for integer dimensions.

use std::f64::consts::PI;

/// Gamma(d/2) for a positive integer d, by the recurrence from
/// Gamma(1) = 1 and Gamma(1/2) = sqrt(pi).
pub fn gamma_half_integer(d: usize) -> f64 {
    assert!(d >= 1);
    let mut value = if d % 2 == 0 { 1.0 } else { PI.sqrt() };
    // Multiply up from Gamma(1) or Gamma(1/2) to Gamma(d/2).
    let mut x = if d % 2 == 0 { 1.0 } else { 0.5 };
    while x + 0.5 < d as f64 / 2.0 + 0.25 {
        value *= x;
        x += 1.0;
    }
    value
}

/// Surface area of the unit sphere S^{d-1} in R^d: 2 pi^{d/2} / Gamma(d/2).
/// For d = 1 this is 2 (two endpoints, counting measure).
pub fn unit_sphere_area(d: usize) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / gamma_half_integer(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_small_values() {
        assert!((gamma_half_integer(1) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half_integer(2) - 1.0).abs() < 1e-15);
        assert!((gamma_half_integer(3) - 0.5 * PI.sqrt()).abs() < 1e-15);
        assert!((gamma_half_integer(4) - 1.0).abs() < 1e-15);
        assert!((gamma_half_integer(6) - 2.0).abs() < 1e-15);
        assert!((gamma_half_integer(7) - 15.0 / 8.0 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(1) - 2.0).abs() < 1e-15);
        assert!((unit_sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-14);
    }
}
