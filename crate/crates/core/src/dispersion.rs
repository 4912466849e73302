//! One-particle energy as a function of momentum.

use crate::error::{Error, Result};
use crate::linalg;

/// Isotropic one-particle Hamiltonian h(p), depending on p only through
/// r = |p|, with h(0) = 0.
#[derive(Debug, Clone, PartialEq)]
pub enum DispersionKind {
    /// h(p) = |p|^s. The s = 2 case absorbs the mass normalization m = 1/2;
    /// there is no separate mass parameter.
    PowerLaw { s: f64 },
    /// h(p) = c sqrt(|p|^2 + m^2 c^2) - m c^2.
    RelativisticMassive { m: f64, c: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionRelation {
    pub kind: DispersionKind,
    /// Spatial dimension.
    pub d: usize,
}

impl DispersionRelation {
    /// Power-law dispersion |p|^s; requires s >= 1.
    pub fn power_law(s: f64, d: usize) -> Result<Self> {
        if !(s >= 1.0) || !s.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "power-law exponent must satisfy s >= 1, got {s}"
            )));
        }
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        Ok(Self {
            kind: DispersionKind::PowerLaw { s },
            d,
        })
    }

    pub fn relativistic(m: f64, c: f64, d: usize) -> Result<Self> {
        if !(m > 0.0) || !(c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "relativistic dispersion needs m > 0 and c > 0, got m={m}, c={c}"
            )));
        }
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        Ok(Self {
            kind: DispersionKind::RelativisticMassive { m, c },
            d,
        })
    }

    /// Energy at a momentum vector.
    pub fn evaluate(&self, p: &[f64]) -> Result<f64> {
        if p.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: p.len(),
            });
        }
        self.radial(linalg::norm(p))
    }

    /// Energy at radius r = |p|.
    pub fn radial(&self, r: f64) -> Result<f64> {
        if r < 0.0 {
            return Err(Error::NegativeRadius(r));
        }
        Ok(match self.kind {
            DispersionKind::PowerLaw { s } => {
                if r == 0.0 {
                    0.0
                } else {
                    r.powf(s)
                }
            }
            DispersionKind::RelativisticMassive { m, c } => {
                // c sqrt(r^2 + m^2 c^2) - m c^2, written to avoid cancellation
                // for r << mc: c r^2 / (sqrt(r^2 + m^2c^2) + mc).
                let mc = m * c;
                c * r * r / ((r * r + mc * mc).sqrt() + mc)
            }
        })
    }

    /// Radius with h(r) = x, for x >= 0 (h is strictly increasing).
    pub fn radius_at_energy(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "energies are non-negative, got {x}"
            )));
        }
        Ok(match self.kind {
            DispersionKind::PowerLaw { s } => {
                if x == 0.0 {
                    0.0
                } else {
                    x.powf(1.0 / s)
                }
            }
            DispersionKind::RelativisticMassive { m, c } => {
                // invert c sqrt(r^2+m^2c^2) - mc^2 = x
                (x * x / (c * c) + 2.0 * m * x).sqrt()
            }
        })
    }

    /// Exponent s when the dispersion is a power law.
    pub fn power_exponent(&self) -> Option<f64> {
        match self.kind {
            DispersionKind::PowerLaw { s } => Some(s),
            DispersionKind::RelativisticMassive { .. } => None,
        }
    }
}
