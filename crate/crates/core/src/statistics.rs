//! Occupation numbers for q in [-1, 1] under both chemical-potential
//! conventions, critical chemical potentials, and momentum-space densities
//! by adaptive radial quadrature with divergence detection.

use crate::dispersion::DispersionRelation;
use crate::error::{Error, Result};
use crate::quad::{self, golden_max, Outcome, Quad};
use crate::special::unit_sphere_area;
use crate::temperature::{BetaZeroLimit, InverseTempProfile};

pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// How the chemical potential enters the occupation factor:
/// A uses e^{tilde_beta(eps) - mu}, B uses e^{beta(eps)(eps - mu)}.
/// The two coincide for constant beta.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QStatistics {
    pub q: f64,
    pub mu: f64,
    pub convention: Convention,
}

impl QStatistics {
    pub fn new(q: f64, mu: f64, convention: Convention) -> Result<Self> {
        if !(-1.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!(
                "q must lie in [-1, 1], got {q}"
            )));
        }
        if !mu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "chemical potential must be finite, got {mu}"
            )));
        }
        Ok(Self { q, mu, convention })
    }

    pub fn bose(mu: f64) -> Self {
        Self {
            q: 1.0,
            mu,
            convention: Convention::A,
        }
    }

    pub fn fermi(mu: f64) -> Self {
        Self {
            q: -1.0,
            mu,
            convention: Convention::A,
        }
    }
}

/// Critical chemical potential, with an explicit variant for the
/// unbounded Fermi-like side (never a float infinity in arithmetic).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MuBound {
    Finite(f64),
    Unbounded,
}

impl MuBound {
    pub fn finite(&self) -> Option<f64> {
        match self {
            MuBound::Finite(v) => Some(*v),
            MuBound::Unbounded => None,
        }
    }

    /// True when `mu` is strictly below the bound.
    pub fn admits(&self, mu: f64) -> bool {
        match self {
            MuBound::Finite(v) => mu < *v,
            MuBound::Unbounded => true,
        }
    }
}

/// Result of the critical-mu computation.
#[derive(Debug, Clone)]
pub struct CriticalMu {
    pub bound: MuBound,
    /// Set when the convention-B bracket search found no root of
    /// sup-equation; the returned bound is then 0.
    pub no_solution: bool,
    /// Diagnostic: probed limsup of beta at 0+ (convention B only).
    pub beta_zero_limit: Option<BetaZeroLimit>,
    /// Diagnostic: whether the literature criterion "no root iff
    /// limsup beta(0+) <= 1" predicts no solution. Reported for
    /// comparison, never used by the solver.
    pub literature_criterion_no_solution: Option<bool>,
}

/// Exponent of the occupation factor gamma_mu at energy eps.
fn exponent(stats: &QStatistics, profile: &InverseTempProfile, eps: f64) -> Result<f64> {
    if eps < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "energies are non-negative, got {eps}"
        )));
    }
    match stats.convention {
        Convention::A => Ok(profile.tilde_beta(eps)? - stats.mu),
        Convention::B => {
            if eps == 0.0 {
                let tb0 = profile.tilde_beta(0.0)?;
                if stats.mu == 0.0 {
                    Ok(tb0)
                } else {
                    match profile.beta_limit_at_zero() {
                        BetaZeroLimit::Finite(b0) => Ok(tb0 - stats.mu * b0),
                        BetaZeroLimit::Unbounded => Err(Error::UnboundedAtZero),
                    }
                }
            } else {
                Ok(profile.tilde_beta(eps)? * (eps - stats.mu) / eps)
            }
        }
    }
}

/// gamma_mu(eps) - q. For q > 0 this is q expm1(exponent - ln q); the
/// expm1 argument is assembled so that at criticality (mu = -ln q) it
/// reduces to tilde_beta(eps) exactly, with no cancellation.
fn denominator(stats: &QStatistics, profile: &InverseTempProfile, eps: f64) -> Result<f64> {
    if stats.q > 0.0 {
        let shift = stats.mu + stats.q.ln(); // exactly 0 at criticality
        let arg = match stats.convention {
            Convention::A => profile.tilde_beta(eps)? - shift,
            Convention::B => {
                let unshifted = QStatistics {
                    q: stats.q,
                    mu: stats.mu,
                    convention: Convention::B,
                };
                exponent(&unshifted, profile, eps)? - stats.q.ln()
            }
        };
        Ok(stats.q * arg.exp_m1())
    } else {
        Ok(exponent(stats, profile, eps)?.exp() - stats.q)
    }
}

/// Scalar factor gamma_mu(eps) of the kernel equation.
pub fn gamma_mu(stats: &QStatistics, profile: &InverseTempProfile, eps: f64) -> Result<f64> {
    Ok(exponent(stats, profile, eps)?.exp())
}

/// gamma_mu(eps) - q, computed stably (exact through the cancellation at
/// criticality).
pub fn occupation_denominator(
    stats: &QStatistics,
    profile: &InverseTempProfile,
    eps: f64,
) -> Result<f64> {
    denominator(stats, profile, eps)
}

/// Occupation number 1 / (gamma_mu(eps) - q).
pub fn occupation(stats: &QStatistics, profile: &InverseTempProfile, eps: f64) -> Result<f64> {
    let denom = denominator(stats, profile, eps)?;
    if denom <= 0.0 {
        return Err(Error::DenominatorNonPositive {
            energy: eps,
            factor: denom + stats.q,
            q: stats.q,
        });
    }
    Ok(1.0 / denom)
}

/// G(mu) = sup over (0, mu] of beta(x)(mu - x), including the boundary
/// value beta(0+) mu. Dense log-spaced scan plus golden-section refinement.
pub fn sup_beta_gap(profile: &InverseTempProfile, mu: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sup_beta_gap needs mu > 0, got {mu}"
        )));
    }
    let b0 = match profile.beta_limit_at_zero() {
        BetaZeroLimit::Finite(v) => v,
        BetaZeroLimit::Unbounded => return Err(Error::UnboundedAtZero),
    };
    let g = |x: f64| -> f64 {
        if x <= 0.0 || x > mu {
            return f64::NEG_INFINITY;
        }
        match profile.tilde_beta(x) {
            Ok(tb) => tb / x * (mu - x),
            Err(_) => f64::NEG_INFINITY,
        }
    };

    const N: usize = 1 << 12;
    let lo_exp = -40.0_f64;
    let mut best_i = 0usize;
    let mut best = f64::NEG_INFINITY;
    let xs: Vec<f64> = (0..N)
        .map(|i| mu * 2.0_f64.powf(lo_exp * (1.0 - i as f64 / (N - 1) as f64)))
        .collect();
    for (i, &x) in xs.iter().enumerate() {
        let v = g(x);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let a = xs[best_i.saturating_sub(1)];
    let b = xs[(best_i + 1).min(N - 1)];
    let (_, refined) = golden_max(&g, a, b, 1e-12 * mu);
    Ok(refined.max(best).max(b0 * mu))
}

/// Critical chemical potential mu_q for the given convention.
///
/// Convention A: -ln q for q in (0, 1], unbounded for q <= 0.
/// Convention B: the root of sup_beta_gap(mu) = -ln q found by an
/// expanding bracket and bisection; 0 when beta blows up at 0+ or when
/// no bracket is found (flagged).
pub fn critical_mu(
    q: f64,
    profile: &InverseTempProfile,
    convention: Convention,
) -> Result<CriticalMu> {
    if !(-1.0..=1.0).contains(&q) {
        return Err(Error::InvalidParameter(format!(
            "q must lie in [-1, 1], got {q}"
        )));
    }
    if q <= 0.0 {
        return Ok(CriticalMu {
            bound: MuBound::Unbounded,
            no_solution: false,
            beta_zero_limit: None,
            literature_criterion_no_solution: None,
        });
    }
    match convention {
        Convention::A => Ok(CriticalMu {
            bound: MuBound::Finite(-q.ln()),
            no_solution: false,
            beta_zero_limit: None,
            literature_criterion_no_solution: None,
        }),
        Convention::B => {
            if q == 1.0 {
                return Ok(CriticalMu {
                    bound: MuBound::Finite(0.0),
                    no_solution: false,
                    beta_zero_limit: Some(profile.beta_limit_at_zero()),
                    literature_criterion_no_solution: None,
                });
            }
            let limit = profile.beta_limit_at_zero();
            let target = -q.ln();
            if let BetaZeroLimit::Unbounded = limit {
                return Ok(CriticalMu {
                    bound: MuBound::Finite(0.0),
                    no_solution: false,
                    beta_zero_limit: Some(limit),
                    literature_criterion_no_solution: Some(false),
                });
            }
            let literature_no_solution = match limit {
                BetaZeroLimit::Finite(b0) => Some(b0 <= 1.0),
                BetaZeroLimit::Unbounded => unreachable!(),
            };
            // G is strictly increasing: expand until G(mu_max) >= -ln q.
            let mut hi = 1.0_f64;
            let mut found = false;
            for _ in 0..60 {
                if sup_beta_gap(profile, hi)? >= target {
                    found = true;
                    break;
                }
                hi *= 2.0;
            }
            if !found {
                return Ok(CriticalMu {
                    bound: MuBound::Finite(0.0),
                    no_solution: true,
                    beta_zero_limit: Some(limit),
                    literature_criterion_no_solution: literature_no_solution,
                });
            }
            let mut lo = 0.0_f64;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if sup_beta_gap(profile, mid)? >= target {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-13 * hi.abs().max(1.0) {
                    break;
                }
            }
            Ok(CriticalMu {
                bound: MuBound::Finite(0.5 * (lo + hi)),
                no_solution: false,
                beta_zero_limit: Some(limit),
                literature_criterion_no_solution: literature_no_solution,
            })
        }
    }
}

/// A momentum integral verdict: a value with an error bound, or a
/// diagnosed divergence.
#[derive(Debug, Clone)]
pub enum DensityOutcome {
    Finite { value: f64, error_bound: f64 },
    Infinite { diagnostic: String },
}

impl DensityOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            DensityOutcome::Finite { value, .. } => Some(*value),
            DensityOutcome::Infinite { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, DensityOutcome::Finite { .. })
    }
}

/// Radii at which the occupation denominator vanishes (criticality on the
/// zero set of tilde_beta), plus branch knots; used to split quadrature.
fn radial_breakpoints(
    stats: &QStatistics,
    profile: &InverseTempProfile,
    disp: &DispersionRelation,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut singular = Vec::new();
    for e in profile.zero_set() {
        let denom = denominator(stats, profile, e)?;
        let r = disp.radius_at_energy(e)?;
        if denom.abs() <= 1e-13 * (1.0 + stats.q.abs()) {
            singular.push(r);
        }
    }
    let mut knots: Vec<f64> = profile
        .knots()
        .iter()
        .map(|&x| disp.radius_at_energy(x))
        .collect::<Result<_>>()?;
    knots.extend(
        profile
            .zero_set()
            .iter()
            .map(|&e| disp.radius_at_energy(e).unwrap_or(0.0)),
    );
    singular.sort_by(|a, b| a.partial_cmp(b).unwrap());
    singular.dedup();
    knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    knots.dedup();
    Ok((singular, knots))
}

/// Integral of the occupation number over momentum space,
/// int_{R^d} d^dp / (gamma_mu(h(p)) - q), by the radial reduction
/// S_{d-1} int_0^infty r^{d-1} (...) dr. Handles the critical case where
/// the integrand is singular on the preimages of the zero set; reports
/// divergence instead of failing.
///
/// Preconditions checked: for q in (0, 1] the chemical potential must not
/// exceed the convention-appropriate critical value.
pub fn occupation_momentum_integral(
    stats: &QStatistics,
    profile: &InverseTempProfile,
    disp: &DispersionRelation,
    rel_tol: f64,
) -> Result<DensityOutcome> {
    let d = disp.d;
    if stats.q > 0.0 {
        let crit = critical_mu(stats.q, profile, stats.convention)?;
        if let MuBound::Finite(mu_q) = crit.bound {
            if stats.mu > mu_q + 1e-12 * mu_q.abs().max(1.0) {
                return Err(Error::SuperCritical { mu: stats.mu, mu_q });
            }
        }
    }

    let (singular, knots) = radial_breakpoints(stats, profile, disp)?;
    let dm1 = d as f64 - 1.0;
    let mut integrand = |r: f64| -> f64 {
        let h = match disp.radial(r) {
            Ok(v) => v,
            Err(_) => return 0.0,
        };
        match occupation(stats, profile, h) {
            Ok(n) => r.powf(dm1) * n,
            Err(_) => f64::INFINITY,
        }
    };

    let mut breaks: Vec<f64> = vec![0.0];
    breaks.extend(singular.iter().copied());
    breaks.extend(knots.iter().copied());
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * a.abs().max(1.0));

    let is_singular = |r: f64| -> bool {
        r == 0.0 && singular.contains(&0.0)
            || singular
                .iter()
                .any(|&s| (r - s).abs() <= 1e-14 * s.abs().max(1.0))
    };

    let mut total = 0.0_f64;
    let mut err = 0.0_f64;
    let abs_floor = 1e-300;

    let far = breaks.last().copied().unwrap_or(0.0).max(0.5) * 2.0;
    let mut segments: Vec<(f64, f64)> = breaks.windows(2).map(|w| (w[0], w[1])).collect();
    segments.push((*breaks.last().unwrap(), far));

    for (a, b) in segments {
        if b - a <= 1e-300 {
            continue;
        }
        let left_sing = is_singular(a);
        let right_sing = is_singular(b);
        let outcome: Vec<Outcome<f64>> = if left_sing && right_sing {
            let m = 0.5 * (a + b);
            vec![
                quad::approach_endpoint(&mut integrand, a, m, rel_tol, abs_floor, 600),
                quad::approach_endpoint(&mut integrand, b, m, rel_tol, abs_floor, 600),
            ]
        } else if left_sing {
            vec![quad::approach_endpoint(
                &mut integrand,
                a,
                b,
                rel_tol,
                abs_floor,
                600,
            )]
        } else if right_sing {
            vec![quad::approach_endpoint(
                &mut integrand,
                b,
                a,
                rel_tol,
                abs_floor,
                600,
            )]
        } else {
            vec![Outcome::Finite(quad::adaptive(
                &mut integrand,
                a,
                b,
                rel_tol,
                abs_floor,
            ))]
        };
        for o in outcome {
            match o {
                Outcome::Finite(Quad { value, error }) => {
                    total += value;
                    err += error;
                }
                Outcome::Divergent { levels, last_ratio } => {
                    return Ok(DensityOutcome::Infinite {
                        diagnostic: format!(
                            "integrand increments on [{a:.4}, {b:.4}] stopped decaying \
                             after {levels} halvings (ratio {last_ratio:.4})"
                        ),
                    });
                }
            }
        }
    }

    match quad::tail_to_infinity(&mut integrand, far, rel_tol, abs_floor, 400) {
        Outcome::Finite(Quad { value, error }) => {
            total += value;
            err += error;
        }
        Outcome::Divergent { levels, last_ratio } => {
            return Ok(DensityOutcome::Infinite {
                diagnostic: format!(
                    "radial tail beyond {far:.4} stopped decaying after {levels} \
                     doublings (ratio {last_ratio:.4})"
                ),
            });
        }
    }

    let surf = unit_sphere_area(d);
    Ok(DensityOutcome::Finite {
        value: surf * total,
        error_bound: surf * err,
    })
}

/// Critical density rho_c^(q) for q in (0, 1] under convention A:
/// the occupation integral at mu = mu_q = -ln q.
pub fn critical_density(
    q: f64,
    profile: &InverseTempProfile,
    disp: &DispersionRelation,
    rel_tol: f64,
) -> Result<DensityOutcome> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::QSignInvalid(q));
    }
    let stats = QStatistics {
        q,
        mu: -q.ln(),
        convention: Convention::A,
    };
    occupation_momentum_integral(&stats, profile, disp, rel_tol)
}

/// Sub-critical density rho(beta, mu); strictly increasing in mu.
pub fn density(
    stats: &QStatistics,
    profile: &InverseTempProfile,
    disp: &DispersionRelation,
    rel_tol: f64,
) -> Result<DensityOutcome> {
    if stats.q > 0.0 {
        let crit = critical_mu(stats.q, profile, stats.convention)?;
        if let MuBound::Finite(mu_q) = crit.bound {
            if stats.mu >= mu_q {
                return Err(Error::SuperCritical { mu: stats.mu, mu_q });
            }
        }
    }
    occupation_momentum_integral(stats, profile, disp, rel_tol)
}

/// Minimum over a grid of the convention-B denominator
/// e^{beta(x)(x - mu)} - q; sign separation around mu_q.
pub fn b_denominator_extremes(
    q: f64,
    profile: &InverseTempProfile,
    mu: f64,
    x_max: f64,
    n: usize,
) -> Result<f64> {
    let stats = QStatistics::new(q, mu, Convention::B)?;
    let mut min = f64::INFINITY;
    for i in 1..=n {
        let x = x_max * i as f64 / n as f64;
        min = min.min(denominator(&stats, profile, x)?);
    }
    Ok(min)
}

/// Unique mu with Fermi density equal to rho_target, by expanding-bracket
/// bisection plus a secant polish. The Fermi density is strictly
/// increasing and spans (0, infinity), so the root always exists.
pub fn fermi_solve_mu(
    profile: &InverseTempProfile,
    disp: &DispersionRelation,
    rho_target: f64,
    rel_tol: f64,
) -> Result<f64> {
    if !(rho_target > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "target density must be positive, got {rho_target}"
        )));
    }
    let eval = |mu: f64| -> Result<f64> {
        let stats = QStatistics::fermi(mu);
        match occupation_momentum_integral(&stats, profile, disp, rel_tol)? {
            DensityOutcome::Finite { value, .. } => Ok(value),
            DensityOutcome::Infinite { diagnostic } => Err(Error::InvalidParameter(format!(
                "Fermi density diverged: {diagnostic}"
            ))),
        }
    };

    let mut lo = -1.0_f64;
    let mut hi = 1.0_f64;
    for _ in 0..200 {
        if eval(lo)? < rho_target {
            break;
        }
        hi = lo;
        lo *= 2.0;
    }
    for _ in 0..200 {
        if eval(hi)? > rho_target {
            break;
        }
        lo = hi;
        hi *= 2.0;
    }

    let mut f_lo = eval(lo)? - rho_target;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let f_mid = eval(mid)? - rho_target;
        if (f_mid >= 0.0) == (f_lo >= 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi.abs().max(1.0) {
            break;
        }
    }
    // Secant polish on the residual.
    let mut x0 = lo;
    let mut x1 = hi;
    let mut f0 = f_lo;
    for _ in 0..8 {
        let f1 = eval(x1)? - rho_target;
        if f1.abs() <= 1e-10 * rho_target {
            return Ok(x1);
        }
        let df = f1 - f0;
        if df == 0.0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / df;
        x0 = x1;
        f0 = f1;
        x1 = x2;
    }
    Ok(x1)
}
