//! Local inverse-temperature profiles beta(x) and the rescaled function
//! tilde_beta(x) = beta(x) * x, whose zero set controls where condensate
//! singular parts may live.

use std::fmt;
use std::sync::Arc;

use crate::dispersion::DispersionRelation;
use crate::error::{Error, Result};
use crate::quad::{self, Outcome};

/// Limit behaviour of beta(x) as x -> 0+.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaZeroLimit {
    Finite(f64),
    Unbounded,
}

#[derive(Clone)]
pub enum ProfileKind {
    /// beta(x) = beta0.
    Constant { beta0: f64 },
    /// tilde_beta(x) = x^{alpha0+1} for x <= 1, alpha_inf ln x + 1 beyond;
    /// realizes beta ~ x^{alpha0} at 0+ and beta ~ alpha_inf ln x / x at
    /// infinity, continuous at the knot x = 1.
    PowerLog { alpha0: f64, alpha_inf: f64 },
    /// tilde_beta(x) = |x - x0|^a up to x0 + 1, then alpha_inf ln(x/(x0+1)) + 1;
    /// puts the zero of tilde_beta at the excited level x0.
    ZeroAt { x0: f64, a: f64, alpha_inf: f64 },
    /// User-supplied beta with a declared (finite) zero set of tilde_beta.
    /// The library never root-finds zeros of custom profiles.
    Custom {
        beta: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        zero_set: Vec<f64>,
    },
}

impl fmt::Debug for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileKind::Constant { beta0 } => write!(f, "Constant {{ beta0: {beta0} }}"),
            ProfileKind::PowerLog { alpha0, alpha_inf } => {
                write!(f, "PowerLog {{ alpha0: {alpha0}, alpha_inf: {alpha_inf} }}")
            }
            ProfileKind::ZeroAt { x0, a, alpha_inf } => {
                write!(f, "ZeroAt {{ x0: {x0}, a: {a}, alpha_inf: {alpha_inf} }}")
            }
            ProfileKind::Custom { zero_set, .. } => {
                write!(f, "Custom {{ zero_set: {zero_set:?} }}")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct InverseTempProfile {
    pub kind: ProfileKind,
}

/// Verdict of the admissibility probe for conditions (i)-(iii).
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub continuity_ok: bool,
    pub inf_zero_ok: bool,
    pub zero_set_finite: bool,
    pub tail_integrable: bool,
    /// Human-readable notes collected while probing.
    pub diagnostics: Vec<String>,
}

impl AdmissibilityReport {
    pub fn all_ok(&self) -> bool {
        self.continuity_ok && self.inf_zero_ok && self.zero_set_finite && self.tail_integrable
    }
}

/// Convergence verdicts for the critical-density integral of a power-law
/// dispersion with PowerLog-type asymptotics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionVerdict {
    pub converges_at_zero: bool,
    pub converges_at_infinity: bool,
    pub condensation_possible: bool,
}

/// Analytic condition s(alpha0 + 1) < d < s alpha_inf. Pass
/// `f64::INFINITY` for alpha_inf to model profiles with super-logarithmic
/// growth (e.g. constant beta).
pub fn dimension_condition(s: f64, d: usize, alpha0: f64, alpha_inf: f64) -> DimensionVerdict {
    let df = d as f64;
    let converges_at_zero = df > s * (alpha0 + 1.0);
    let converges_at_infinity = df < s * alpha_inf;
    DimensionVerdict {
        converges_at_zero,
        converges_at_infinity,
        condensation_possible: converges_at_zero && converges_at_infinity,
    }
}

impl InverseTempProfile {
    pub fn constant(beta0: f64) -> Result<Self> {
        if !(beta0 > 0.0) || !beta0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "constant profile needs beta0 > 0, got {beta0}"
            )));
        }
        Ok(Self {
            kind: ProfileKind::Constant { beta0 },
        })
    }

    pub fn power_log(alpha0: f64, alpha_inf: f64) -> Result<Self> {
        if !(alpha0 > -1.0) {
            return Err(Error::InvalidParameter(format!(
                "power-log profile needs alpha0 > -1 so that tilde_beta vanishes at 0, got {alpha0}"
            )));
        }
        if !(alpha_inf > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "power-log profile needs alpha_inf > 0, got {alpha_inf}"
            )));
        }
        Ok(Self {
            kind: ProfileKind::PowerLog { alpha0, alpha_inf },
        })
    }

    pub fn zero_at(x0: f64, a: f64, alpha_inf: f64) -> Result<Self> {
        if !(x0 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "zero location must be >= 0, got {x0}"
            )));
        }
        if !(a > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "local exponent must be > 0, got {a}"
            )));
        }
        if !(alpha_inf > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "zero-at profile needs alpha_inf > 0, got {alpha_inf}"
            )));
        }
        Ok(Self {
            kind: ProfileKind::ZeroAt { x0, a, alpha_inf },
        })
    }

    pub fn custom<F>(beta: F, zero_set: Vec<f64>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            kind: ProfileKind::Custom {
                beta: Arc::new(beta),
                zero_set,
            },
        }
    }

    /// Local inverse temperature beta(x). Errors below 0 and at x = 0 for
    /// variants where beta(0) is undefined or infinite.
    pub fn beta(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "beta is defined on x >= 0, got {x}"
            )));
        }
        if x == 0.0 {
            return match self.beta_limit_at_zero() {
                BetaZeroLimit::Finite(v) => Ok(v),
                BetaZeroLimit::Unbounded => Err(Error::UnboundedAtZero),
            };
        }
        Ok(match &self.kind {
            ProfileKind::Custom { beta, .. } => beta(x),
            _ => self.tilde_beta(x)? / x,
        })
    }

    /// tilde_beta(x) = beta(x) * x, continuous on [0, infinity), exactly
    /// zero on the declared zero set.
    pub fn tilde_beta(&self, x: f64) -> Result<f64> {
        if x < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tilde_beta is defined on x >= 0, got {x}"
            )));
        }
        Ok(match &self.kind {
            ProfileKind::Constant { beta0 } => beta0 * x,
            ProfileKind::PowerLog { alpha0, alpha_inf } => {
                if x == 0.0 {
                    0.0
                } else if x <= 1.0 {
                    x.powf(alpha0 + 1.0)
                } else {
                    alpha_inf * x.ln() + 1.0
                }
            }
            ProfileKind::ZeroAt { x0, a, alpha_inf } => {
                if x == *x0 {
                    0.0
                } else if x <= x0 + 1.0 {
                    (x - x0).abs().powf(*a)
                } else {
                    alpha_inf * (x / (x0 + 1.0)).ln() + 1.0
                }
            }
            ProfileKind::Custom { beta, zero_set } => {
                let declared_zero = zero_set
                    .iter()
                    .any(|&z| (x - z).abs() <= 4.0 * f64::EPSILON * z.abs().max(1.0));
                if declared_zero || x == 0.0 {
                    0.0
                } else {
                    beta(x) * x
                }
            }
        })
    }

    /// Declared zero set E of tilde_beta, sorted ascending.
    pub fn zero_set(&self) -> Vec<f64> {
        let mut e = match &self.kind {
            ProfileKind::Constant { .. } => vec![0.0],
            ProfileKind::PowerLog { .. } => vec![0.0],
            ProfileKind::ZeroAt { x0, .. } => vec![*x0],
            ProfileKind::Custom { zero_set, .. } => zero_set.clone(),
        };
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e.dedup();
        e
    }

    /// Points where the piecewise realization switches branches; quadrature
    /// splits intervals there.
    pub fn knots(&self) -> Vec<f64> {
        match &self.kind {
            ProfileKind::Constant { .. } => vec![],
            ProfileKind::PowerLog { .. } => vec![1.0],
            ProfileKind::ZeroAt { x0, .. } => vec![x0 + 1.0],
            ProfileKind::Custom { .. } => vec![],
        }
    }

    /// Limit of beta at 0+; analytic for the parametrized variants, probed
    /// on the geometric grid x = 2^{-j}, j = 10..40 for custom profiles
    /// (an approximation, as documented).
    pub fn beta_limit_at_zero(&self) -> BetaZeroLimit {
        match &self.kind {
            ProfileKind::Constant { beta0 } => BetaZeroLimit::Finite(*beta0),
            ProfileKind::PowerLog { alpha0, .. } => {
                if *alpha0 > 0.0 {
                    BetaZeroLimit::Finite(0.0)
                } else if *alpha0 == 0.0 {
                    BetaZeroLimit::Finite(1.0)
                } else {
                    BetaZeroLimit::Unbounded
                }
            }
            ProfileKind::ZeroAt { x0, a, .. } => {
                if *x0 > 0.0 {
                    // beta(x) = |x - x0|^a / x blows up toward 0.
                    BetaZeroLimit::Unbounded
                } else if *a > 1.0 {
                    BetaZeroLimit::Finite(0.0)
                } else if *a == 1.0 {
                    BetaZeroLimit::Finite(1.0)
                } else {
                    BetaZeroLimit::Unbounded
                }
            }
            ProfileKind::Custom { beta, .. } => {
                let values: Vec<f64> = (10..=40).map(|j| beta(2.0_f64.powi(-j))).collect();
                let last = *values.last().unwrap();
                let increasing_tail = values.windows(2).skip(20).all(|w| w[1] >= w[0]);
                if !last.is_finite() || (increasing_tail && last > 1e8) {
                    BetaZeroLimit::Unbounded
                } else {
                    let sup = values.iter().rev().take(5).fold(0.0_f64, |m, &v| m.max(v));
                    BetaZeroLimit::Finite(sup)
                }
            }
        }
    }

    /// Gradient of p -> tilde_beta(h(p)) at p = 0, when it provably exists.
    /// It is zero in every supported case; combinations where the
    /// composition has a kink at the origin are rejected rather than
    /// finite-differenced.
    pub fn grad_tilde_h_at_zero(&self, disp: &DispersionRelation) -> Result<f64> {
        let s = disp.power_exponent().ok_or_else(|| {
            Error::DomainViolation("gradient condensates need a power-law dispersion".to_string())
        })?;
        let local_exponent = match &self.kind {
            ProfileKind::Constant { .. } => s,
            ProfileKind::PowerLog { alpha0, .. } => s * (alpha0 + 1.0),
            ProfileKind::ZeroAt { x0, a, .. } => {
                if *x0 > 0.0 {
                    // tilde_beta(h(p)) = |p^s - x0|^a is smooth in p^s near 0.
                    s
                } else {
                    s * a
                }
            }
            ProfileKind::Custom { .. } => {
                return Err(Error::DomainViolation(
                    "custom profiles do not expose an analytic derivative at 0".to_string(),
                ))
            }
        };
        if local_exponent > 1.0 {
            Ok(0.0)
        } else {
            Err(Error::DomainViolation(format!(
                "tilde_beta(h(p)) behaves like |p|^{local_exponent} at the origin; \
                 not differentiable there"
            )))
        }
    }

    /// Numerical probe of conditions (i)-(iii) for a power-law dispersion in
    /// dimension d. Condition (iii) is the tail integral
    /// int_a^infty x^{d/s-1} / (e^{tilde_beta(x)} - 1) dx for a > max E.
    pub fn check_admissibility(
        &self,
        disp: &DispersionRelation,
        d: usize,
    ) -> Result<AdmissibilityReport> {
        let s = disp.power_exponent().ok_or_else(|| {
            Error::InvalidParameter(
                "admissibility condition (iii) is stated for power-law dispersions".to_string(),
            )
        })?;
        let mut diagnostics = Vec::new();
        let zeros = self.zero_set();
        let zero_set_finite = zeros.len() < usize::MAX; // finite by representation
        let max_e = zeros.iter().cloned().fold(0.0_f64, f64::max);

        // Continuity: max jump between adjacent samples must shrink under
        // grid refinement (a jump pinned at a discontinuity does not).
        let span = (2.0 * (max_e + 1.0)).max(8.0);
        let max_jump = |n: usize| -> f64 {
            let mut worst = 0.0_f64;
            let mut prev = self.tilde_beta(0.0).unwrap_or(f64::NAN);
            for i in 1..=n {
                let x = span * i as f64 / n as f64;
                let v = self.tilde_beta(x).unwrap_or(f64::NAN);
                worst = worst.max((v - prev).abs());
                prev = v;
            }
            worst
        };
        let coarse = max_jump(512);
        let fine = max_jump(4096);
        let continuity_ok = fine.is_finite() && (fine <= coarse / 1.15 || fine < 1e-12);
        if !continuity_ok {
            diagnostics.push(format!(
                "max sample jump did not shrink under refinement: {coarse:.3e} -> {fine:.3e}"
            ));
        }

        // inf tilde_beta = 0: exact on the declared zero set, otherwise a
        // dense scan.
        let inf_zero_ok = if !zeros.is_empty() {
            zeros.iter().all(|&z| self.tilde_beta(z).unwrap() == 0.0)
        } else {
            let mut m = f64::INFINITY;
            for i in 0..=4096 {
                let x = span * i as f64 / 4096.0;
                m = m.min(self.tilde_beta(x)?);
            }
            m <= 1e-6 * (1.0 + span)
        };

        // Condition (iii): tail integral beyond the zero set and knots.
        let a = (max_e + 1.0).max(self.knots().iter().cloned().fold(0.0_f64, f64::max) + 1.0);
        let exponent = d as f64 / s - 1.0;
        let mut integrand = |x: f64| -> f64 {
            let tb = self.tilde_beta(x).unwrap_or(f64::INFINITY);
            let denom = tb.exp_m1();
            if denom <= 0.0 {
                return 0.0;
            }
            x.powf(exponent) / denom
        };
        let tail = quad::tail_to_infinity(&mut integrand, a, 1e-9, 1e-300, 200);
        let tail_integrable = match tail {
            Outcome::Finite(q) => {
                diagnostics.push(format!(
                    "tail integral from {a:.3}: {:.6e} (error bound {:.2e})",
                    q.value, q.error
                ));
                true
            }
            Outcome::Divergent { levels, last_ratio } => {
                diagnostics.push(format!(
                    "tail increments stopped decaying after {levels} doublings (ratio {last_ratio:.4})"
                ));
                false
            }
        };

        Ok(AdmissibilityReport {
            continuity_ok,
            inf_zero_ok,
            zero_set_finite,
            tail_integrable,
            diagnostics,
        })
    }
}
