//! Distributional two-point kernels F(p, k): a diagonal occupation term
//! plus singular condensate parts, paired against smooth test functions.
//! The kernel equation (gamma_mu(h) - q) F = delta is probed through the
//! local-equilibrium residual.

mod pairing;
mod testfn;

pub use testfn::TestFunction;

use num_complex::Complex64;

use crate::dispersion::DispersionRelation;
use crate::error::{Error, Result};
use crate::statistics::{self, MuBound, QStatistics};
use crate::temperature::InverseTempProfile;

pub(crate) use pairing::sphere_average;

/// A positive singular summand of the kernel, supported where
/// tilde_beta(h(p)) vanishes.
#[derive(Debug, Clone)]
pub enum SingularPart {
    /// D delta_k tensor delta_k.
    PointMass { weight: f64, at: Vec<f64> },
    /// D times the normalized rotation-invariant measure on the sphere of
    /// the given radius.
    SphereAverage { weight: f64, radius: f64 },
    /// Finitely many weighted atoms (a discretized sphere measure).
    SurfaceAtoms { atoms: Vec<(f64, Vec<f64>)> },
    /// D sum_{j in axes} d_j f(0) conj(d_j g(0)): the first-derivative
    /// condensate at the origin.
    GradientPointMass { weight: f64, axes: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct TwoPointKernel {
    pub stats: QStatistics,
    pub profile: InverseTempProfile,
    pub disp: DispersionRelation,
    /// Whether the regular (occupation) diagonal term is present.
    pub include_diagonal: bool,
    pub singular: Vec<SingularPart>,
}

impl TwoPointKernel {
    pub fn diagonal(
        stats: QStatistics,
        profile: InverseTempProfile,
        disp: DispersionRelation,
    ) -> Self {
        Self {
            stats,
            profile,
            disp,
            include_diagonal: true,
            singular: Vec::new(),
        }
    }

    /// A kernel with no diagonal term (pure condensate).
    pub fn singular_only(
        stats: QStatistics,
        profile: InverseTempProfile,
        disp: DispersionRelation,
    ) -> Self {
        Self {
            stats,
            profile,
            disp,
            include_diagonal: false,
            singular: Vec::new(),
        }
    }

    pub fn with_part(mut self, part: SingularPart) -> Self {
        self.singular.push(part);
        self
    }

    pub fn d(&self) -> usize {
        self.disp.d
    }

    fn check_test_dims(&self, f: &TestFunction, g: &TestFunction) -> Result<()> {
        for dim in [f.dim(), g.dim()] {
            if dim != self.d() {
                return Err(Error::DimensionMismatch {
                    expected: self.d(),
                    got: dim,
                });
            }
        }
        Ok(())
    }

    /// Critical chemical potential for this kernel's statistics.
    pub fn critical_mu(&self) -> Result<MuBound> {
        Ok(statistics::critical_mu(self.stats.q, &self.profile, self.stats.convention)?.bound)
    }

    fn reject_supercritical(&self) -> Result<()> {
        if let MuBound::Finite(mu_q) = self.critical_mu()? {
            if self.stats.mu > mu_q + 1e-12 * mu_q.abs().max(1.0) {
                return Err(Error::SuperCritical {
                    mu: self.stats.mu,
                    mu_q,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Checks a kernel against the admissibility constraints: singular
/// supports on the zero set of tilde_beta(h), criticality of mu, positive
/// weights, and the s > 1 requirement for gradient condensates.
pub fn validate(kernel: &TwoPointKernel) -> ValidationReport {
    let mut violations = Vec::new();
    let d = kernel.d();
    let q = kernel.stats.q;
    let mu = kernel.stats.mu;

    let mu_q = match statistics::critical_mu(q, &kernel.profile, kernel.stats.convention) {
        Ok(c) => c.bound,
        Err(e) => {
            violations.push(format!("critical mu unavailable: {e}"));
            return ValidationReport {
                ok: false,
                violations,
            };
        }
    };

    if let MuBound::Finite(v) = mu_q {
        if mu > v + 1e-12 * v.abs().max(1.0) {
            violations.push(format!(
                "mu = {mu} exceeds the critical value mu_q = {v}: no kernel exists there"
            ));
        }
    }

    if !kernel.singular.is_empty() {
        if !(q > 0.0 && q <= 1.0) {
            violations.push(format!(
                "singular parts require Bose-like statistics q in (0, 1], got q = {q}"
            ));
        } else {
            match mu_q {
                MuBound::Finite(v) => {
                    if (mu - v).abs() > 1e-12 * v.abs().max(1.0) {
                        violations.push(format!(
                            "singular parts require criticality mu = mu_q = {v}, got mu = {mu}"
                        ));
                    }
                }
                MuBound::Unbounded => {
                    violations.push("singular parts require a finite critical mu".to_string())
                }
            }
        }
    }

    let zeros = kernel.profile.zero_set();
    let on_zero_set = |energy: f64| -> bool {
        zeros
            .iter()
            .any(|&e| (energy - e).abs() <= 1e-9 * e.abs().max(1.0))
    };
    let check_point = |label: &str, p: &[f64]| -> Option<String> {
        if p.len() != d {
            return Some(format!(
                "{label}: point has dimension {}, kernel d = {d}",
                p.len()
            ));
        }
        match kernel.disp.evaluate(p) {
            Ok(h) => {
                if !on_zero_set(h) {
                    Some(format!(
                        "{label}: tilde_beta(h(p)) = {:.3e} != 0 at h(p) = {h:.6}; support \
                         must sit on the zero set of tilde_beta",
                        kernel.profile.tilde_beta(h).unwrap_or(f64::NAN)
                    ))
                } else {
                    None
                }
            }
            Err(e) => Some(format!("{label}: {e}")),
        }
    };

    for (idx, part) in kernel.singular.iter().enumerate() {
        match part {
            SingularPart::PointMass { weight, at } => {
                if *weight < 0.0 {
                    violations.push(format!("part {idx}: negative weight {weight}"));
                }
                violations.extend(check_point(&format!("point mass {idx}"), at));
            }
            SingularPart::SphereAverage { weight, radius } => {
                if *weight < 0.0 {
                    violations.push(format!("part {idx}: negative weight {weight}"));
                }
                if *radius < 0.0 {
                    violations.push(format!("part {idx}: negative radius {radius}"));
                } else {
                    match kernel.disp.radial(*radius) {
                        Ok(h) => {
                            if !on_zero_set(h) {
                                violations.push(format!(
                                    "sphere average {idx}: h({radius}) = {h:.6} is not on the \
                                     zero set of tilde_beta"
                                ));
                            }
                        }
                        Err(e) => violations.push(format!("sphere average {idx}: {e}")),
                    }
                }
            }
            SingularPart::SurfaceAtoms { atoms } => {
                for (j, (w, p)) in atoms.iter().enumerate() {
                    if *w < 0.0 {
                        violations.push(format!("part {idx} atom {j}: negative weight {w}"));
                    }
                    violations.extend(check_point(&format!("surface atom {idx}.{j}"), p));
                }
            }
            SingularPart::GradientPointMass { weight, axes } => {
                if *weight < 0.0 {
                    violations.push(format!("part {idx}: negative weight {weight}"));
                }
                match kernel.disp.power_exponent() {
                    Some(s) if s > 1.0 => {}
                    Some(s) => violations.push(format!(
                        "gradient point mass {idx}: needs s > 1, got s = {s}"
                    )),
                    None => violations.push(format!(
                        "gradient point mass {idx}: needs a power-law dispersion"
                    )),
                }
                if !on_zero_set(0.0) {
                    violations.push(format!(
                        "gradient point mass {idx}: the origin is not on the zero set of \
                         tilde_beta"
                    ));
                }
                if axes.is_empty() {
                    violations.push(format!("gradient point mass {idx}: empty axis set"));
                }
                for &ax in axes {
                    if ax >= d {
                        violations.push(format!(
                            "gradient point mass {idx}: axis {ax} out of range for d = {d}"
                        ));
                    }
                }
            }
        }
    }

    ValidationReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// Value of one singular part on a test pair, optionally with the
/// gamma_mu(h) factor applied to the g side.
fn singular_term(
    kernel: &TwoPointKernel,
    part: &SingularPart,
    f: &TestFunction,
    g: &TestFunction,
    with_gamma: bool,
) -> Result<Complex64> {
    let gamma_at = |energy: f64| -> Result<f64> {
        if with_gamma {
            statistics::gamma_mu(&kernel.stats, &kernel.profile, energy)
        } else {
            Ok(1.0)
        }
    };
    match part {
        SingularPart::PointMass { weight, at } => {
            let factor = gamma_at(kernel.disp.evaluate(at)?)?;
            Ok(f.eval(at)? * g.eval(at)?.conj() * (*weight * factor))
        }
        SingularPart::SphereAverage { weight, radius } => {
            let factor = gamma_at(kernel.disp.radial(*radius)?)?;
            let avg = sphere_average(f, g, kernel.d(), *radius)?;
            Ok(avg * (*weight * factor))
        }
        SingularPart::SurfaceAtoms { atoms } => {
            let mut acc = Complex64::new(0.0, 0.0);
            for (w, p) in atoms {
                let factor = gamma_at(kernel.disp.evaluate(p)?)?;
                acc += f.eval(p)? * g.eval(p)?.conj() * (*w * factor);
            }
            Ok(acc)
        }
        SingularPart::GradientPointMass { weight, axes } => {
            let origin = vec![0.0; kernel.d()];
            let factor = if with_gamma {
                // d_j(gamma_mu(h) g)(0) = gamma_mu(0) d_j g(0) holds exactly
                // when tilde_beta(h(p)) has vanishing gradient at the
                // origin; reject combinations where the factor has a kink
                // instead of finite-differencing across it.
                kernel.profile.grad_tilde_h_at_zero(&kernel.disp)?;
                if kernel.stats.convention == statistics::Convention::B
                    && !matches!(
                        kernel.profile.kind,
                        crate::temperature::ProfileKind::Constant { .. }
                    )
                {
                    return Err(Error::DomainViolation(
                        "gradient condensates under convention B are supported for \
                         constant profiles only"
                            .to_string(),
                    ));
                }
                statistics::gamma_mu(&kernel.stats, &kernel.profile, 0.0)?
            } else {
                1.0
            };
            let gf = f.grad(&origin)?;
            let gg = g.grad(&origin)?;
            let mut acc = Complex64::new(0.0, 0.0);
            for &j in axes {
                if j >= kernel.d() {
                    return Err(Error::InvalidParameter(format!(
                        "gradient axis {j} out of range for d = {}",
                        kernel.d()
                    )));
                }
                acc += gf[j] * gg[j].conj();
            }
            Ok(acc * (*weight * factor))
        }
    }
}

/// All pairing ingredients computed in one pass (shared quadrature nodes).
struct PairingParts {
    plain: Complex64,
    gamma: Complex64,
    free: Complex64,
    quad_error: f64,
}

fn pairing_parts(
    kernel: &TwoPointKernel,
    f: &TestFunction,
    g: &TestFunction,
    need_gamma: bool,
) -> Result<PairingParts> {
    kernel.check_test_dims(f, g)?;
    let mut plain = Complex64::new(0.0, 0.0);
    let mut gamma = Complex64::new(0.0, 0.0);
    let mut free = Complex64::new(0.0, 0.0);
    let mut quad_error = 0.0;

    if kernel.include_diagonal {
        kernel.reject_supercritical()?;
        let d =
            pairing::diagonal_integrals(&kernel.stats, &kernel.profile, &kernel.disp, f, g, 1e-9)?;
        plain += d.occ;
        gamma += d.gamma_occ;
        free = d.free;
        quad_error = d.error;
    } else if kernel.d() <= 3 {
        // Free inner product only (needed by the residual); computed with a
        // far-sub-critical weight so no occupation factor can blow up.
        let free_stats = QStatistics {
            q: 0.0,
            mu: 0.0,
            convention: statistics::Convention::A,
        };
        let d =
            pairing::diagonal_integrals(&free_stats, &kernel.profile, &kernel.disp, f, g, 1e-9)?;
        free = d.free;
        quad_error = d.error;
    }

    for part in &kernel.singular {
        plain += singular_term(kernel, part, f, g, false)?;
        if need_gamma {
            gamma += singular_term(kernel, part, f, g, true)?;
        }
    }

    Ok(PairingParts {
        plain,
        gamma,
        free,
        quad_error,
    })
}

/// omega(a^dagger(f-check) a(g-check)): the kernel paired against
/// f(p) conj(g(k)).
pub fn pair(kernel: &TwoPointKernel, f: &TestFunction, g: &TestFunction) -> Result<Complex64> {
    Ok(pairing_parts(kernel, f, g, false)?.plain)
}

/// Free-field inner product <g|f> = int f conj(g) d^dp.
pub fn inner_product(
    kernel: &TwoPointKernel,
    f: &TestFunction,
    g: &TestFunction,
) -> Result<Complex64> {
    Ok(pairing_parts(kernel, f, g, false)?.free)
}

/// Residual of the local-equilibrium relation on a test pair:
/// pair(F, f, gamma_mu(h) g) - [  <g|f> + q pair(F, f, g) ].
/// Vanishes identically for admissible kernels.
#[derive(Debug, Clone, Copy)]
pub struct LepResidual {
    pub residual: Complex64,
    /// Larger of the two sides, for relative comparisons.
    pub scale: f64,
    /// Accumulated quadrature error bound.
    pub quad_error: f64,
}

pub fn lep_residual(
    kernel: &TwoPointKernel,
    f: &TestFunction,
    g: &TestFunction,
) -> Result<LepResidual> {
    let parts = pairing_parts(kernel, f, g, true)?;
    let lhs = parts.gamma;
    let rhs = parts.free + parts.plain * kernel.stats.q;
    Ok(LepResidual {
        residual: lhs - rhs,
        scale: lhs.norm().max(rhs.norm()),
        quad_error: parts.quad_error,
    })
}

/// pair(F, f, f); non-negative for any kernel with positive weights.
pub fn positivity_probe(kernel: &TwoPointKernel, f: &TestFunction) -> Result<f64> {
    Ok(pair(kernel, f, f)?.re)
}

/// |F(f, g) - conj(F(g, f))|: deviation from kernel reality.
pub fn reality_check(kernel: &TwoPointKernel, f: &TestFunction, g: &TestFunction) -> Result<f64> {
    let a = pair(kernel, f, g)?;
    let b = pair(kernel, g, f)?;
    Ok((a - b.conj()).norm())
}

/// Verifies |f| <= |g| on a deterministic sample grid, then compares
/// F(f (x) conj f) <= F(g (x) conj g) + tol.
pub fn monotonicity_probe(
    kernel: &TwoPointKernel,
    f: &TestFunction,
    g: &TestFunction,
    tol: f64,
) -> Result<bool> {
    kernel.check_test_dims(f, g)?;
    let d = kernel.d();
    let (cf, rf) = f.support_ball();
    let (cg, rg) = g.support_ball();
    // Bounding cube of both supports.
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for j in 0..d {
        lo[j] = (cf[j] - rf).min(cg[j] - rg);
        hi[j] = (cf[j] + rf).max(cg[j] + rg);
    }
    let n_per_axis = match d {
        1 => 4097,
        2 => 129,
        _ => 33,
    };
    let mut idx = vec![0usize; d];
    let scale = f.sup_bound().max(g.sup_bound());
    loop {
        let p: Vec<f64> = (0..d)
            .map(|j| lo[j] + (hi[j] - lo[j]) * idx[j] as f64 / (n_per_axis - 1) as f64)
            .collect();
        let fv = f.eval_raw(&p).norm();
        let gv = g.eval_raw(&p).norm();
        if fv > gv + 1e-12 * scale.max(1.0) {
            return Err(Error::PreconditionUnverified(format!(
                "|f| = {fv:.6e} > |g| = {gv:.6e} at {p:?}"
            )));
        }
        let mut j = 0;
        loop {
            idx[j] += 1;
            if idx[j] < n_per_axis {
                break;
            }
            idx[j] = 0;
            j += 1;
            if j == d {
                let pf = positivity_probe(kernel, f)?;
                let pg = positivity_probe(kernel, g)?;
                return Ok(pf <= pg + tol);
            }
        }
    }
}
