//! Quadrature for diagonal-kernel pairings.
//!
//! The diagonal term of a two-point kernel is isotropic, so pairings are
//! computed in spherical form: an angular integral of f conj(g) over the
//! sphere of radius r (spectrally convergent fixed rule, chosen once per
//! pairing by doubling until stable), then an adaptive radial integral with
//! geometric windows toward any critical radius, where the occupation
//! factor has its integrable singularity.
//!
//! One radial pass accumulates three integrals at shared nodes: the
//! occupation-weighted pairing, the gamma-times-occupation pairing, and the
//! free inner product. All three are still independent evaluations of their
//! integrands; sharing nodes only correlates the quadrature error.

use num_complex::Complex64;

use crate::dispersion::DispersionRelation;
use crate::error::{Error, Result};
use crate::kernel::testfn::TestFunction;
use crate::quad::{self, Outcome, QuadValue};
use crate::special::unit_sphere_area;
use crate::statistics::{self, QStatistics};
use crate::temperature::InverseTempProfile;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Triple {
    pub occ: Complex64,
    pub gamma_occ: Complex64,
    pub free: Complex64,
}

impl QuadValue for Triple {
    fn zero() -> Self {
        Triple {
            occ: Complex64::new(0.0, 0.0),
            gamma_occ: Complex64::new(0.0, 0.0),
            free: Complex64::new(0.0, 0.0),
        }
    }
    fn add(self, other: Self) -> Self {
        Triple {
            occ: self.occ + other.occ,
            gamma_occ: self.gamma_occ + other.gamma_occ,
            free: self.free + other.free,
        }
    }
    fn scale(self, s: f64) -> Self {
        Triple {
            occ: self.occ * s,
            gamma_occ: self.gamma_occ * s,
            free: self.free * s,
        }
    }
    fn norm(self) -> f64 {
        self.occ.norm() + self.gamma_occ.norm() + self.free.norm()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct DiagonalIntegrals {
    pub occ: Complex64,
    pub gamma_occ: Complex64,
    pub free: Complex64,
    pub error: f64,
}

impl DiagonalIntegrals {
    fn zero() -> Self {
        DiagonalIntegrals {
            occ: Complex64::new(0.0, 0.0),
            gamma_occ: Complex64::new(0.0, 0.0),
            free: Complex64::new(0.0, 0.0),
            error: 0.0,
        }
    }
}

/// Fixed direction set with weights summing to the unit-sphere area.
struct AngularRule {
    dirs: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

fn angular_rule(d: usize, n: usize) -> AngularRule {
    match d {
        1 => AngularRule {
            dirs: vec![vec![1.0], vec![-1.0]],
            weights: vec![1.0, 1.0],
        },
        2 => {
            let dirs = (0..n)
                .map(|i| {
                    let th = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                    vec![th.cos(), th.sin()]
                })
                .collect();
            AngularRule {
                dirs,
                weights: vec![2.0 * std::f64::consts::PI / n as f64; n],
            }
        }
        3 => {
            let (cs, ws) = quad::gauss_legendre(n);
            let m = 2 * n;
            let mut dirs = Vec::with_capacity(n * m);
            let mut weights = Vec::with_capacity(n * m);
            for (c, w) in cs.iter().zip(&ws) {
                let sin_th = (1.0 - c * c).max(0.0).sqrt();
                for j in 0..m {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                    dirs.push(vec![sin_th * phi.cos(), sin_th * phi.sin(), *c]);
                    weights.push(w * 2.0 * std::f64::consts::PI / m as f64);
                }
            }
            AngularRule { dirs, weights }
        }
        _ => unreachable!("angular rules exist for d <= 3"),
    }
}

impl AngularRule {
    /// Unit-sphere integral of f(r w) conj(g(r w)) over directions w.
    fn pair_on_sphere(&self, f: &TestFunction, g: &TestFunction, r: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = vec![0.0; self.dirs[0].len()];
        for (dir, w) in self.dirs.iter().zip(&self.weights) {
            for (pk, dk) in p.iter_mut().zip(dir) {
                *pk = r * dk;
            }
            let fv = f.eval_raw(&p);
            if fv.re == 0.0 && fv.im == 0.0 {
                continue;
            }
            acc += fv * g.eval_raw(&p).conj() * *w;
        }
        acc
    }
}

/// Picks an angular resolution once per pairing by doubling until the
/// integral is stable on a handful of probe radii, then keeps one extra
/// doubling in hand.
fn choose_rule(
    d: usize,
    f: &TestFunction,
    g: &TestFunction,
    r_lo: f64,
    r_hi: f64,
    rel_tol: f64,
) -> AngularRule {
    if d == 1 {
        return angular_rule(1, 0);
    }
    let tol = (rel_tol * 10.0).clamp(1e-12, 1e-8);
    let scale = (f.sup_bound() * g.sup_bound() * unit_sphere_area(d)).max(1e-300);
    let probes: Vec<f64> = (0..7)
        .map(|i| r_lo + (r_hi - r_lo) * (i as f64 + 0.5) / 7.0)
        .collect();
    let mut n = if d == 3 { 8 } else { 16 };
    let cap = if d == 3 { 192 } else { 3072 };
    let mut rule = angular_rule(d, n);
    loop {
        let finer = angular_rule(d, 2 * n);
        let mut worst = 0.0_f64;
        for &r in &probes {
            let a = rule.pair_on_sphere(f, g, r);
            let b = finer.pair_on_sphere(f, g, r);
            worst = worst.max((a - b).norm() / scale);
        }
        // Agreement between n and 2n bounds the n rule's own error.
        // Angular error is shared by every accumulator at a node, so it
        // cancels exactly in the local-equilibrium residual; plain
        // pairings only need it inside their own tolerance.
        if worst <= tol {
            return rule;
        }
        if 2 * n >= cap {
            return finer;
        }
        n *= 2;
        rule = finer;
    }
}

/// Radii where the occupation denominator vanishes (criticality on the
/// zero set of tilde_beta).
pub(crate) fn critical_radii(
    stats: &QStatistics,
    profile: &InverseTempProfile,
    disp: &DispersionRelation,
) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for e in profile.zero_set() {
        let denom = statistics::occupation_denominator(stats, profile, e)?;
        if denom.abs() <= 1e-13 * (1.0 + stats.q.abs()) {
            out.push(disp.radius_at_energy(e)?);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup();
    Ok(out)
}

/// The three diagonal integrals over the support intersection of f and g.
pub(crate) fn diagonal_integrals(
    stats: &QStatistics,
    profile: &InverseTempProfile,
    disp: &DispersionRelation,
    f: &TestFunction,
    g: &TestFunction,
    rel_tol: f64,
) -> Result<DiagonalIntegrals> {
    let d = disp.d;
    if d > 3 {
        return Err(Error::UnsupportedDimension(d));
    }

    let (cf, rf) = f.support_ball();
    let (cg, rg) = g.support_ball();
    let nf = crate::linalg::norm(&cf);
    let ng = crate::linalg::norm(&cg);
    let r_lo = (nf - rf).max(ng - rg).max(0.0);
    let r_hi = (nf + rf).min(ng + rg);
    if r_hi <= r_lo {
        return Ok(DiagonalIntegrals::zero());
    }

    let singular: Vec<f64> = critical_radii(stats, profile, disp)?
        .into_iter()
        .filter(|&r| r >= r_lo && r <= r_hi)
        .collect();

    let mut breaks: Vec<f64> = vec![r_lo, r_hi];
    breaks.extend(singular.iter().copied());
    for e in profile.knots() {
        let r = disp.radius_at_energy(e)?;
        if r > r_lo && r < r_hi {
            breaks.push(r);
        }
    }
    for edge in [nf - rf, nf + rf, ng - rg, ng + rg] {
        if edge > r_lo && edge < r_hi {
            breaks.push(edge);
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * a.abs().max(1.0));

    let rule = choose_rule(d, f, g, r_lo, r_hi, rel_tol);
    let dm1 = d as f64 - 1.0;
    // Tightest annulus carrying both supports; spheres outside it need no
    // angular pass at all.
    let ann_lo = (nf - rf).max(ng - rg).max(0.0);
    let ann_hi = (nf + rf).min(ng + rg);
    let mut integrand = |r: f64| -> Triple {
        if r < ann_lo || r > ann_hi {
            return Triple::zero();
        }
        let a = rule.pair_on_sphere(f, g, r);
        let rr = if r == 0.0 && dm1 == 0.0 {
            1.0
        } else {
            r.powf(dm1)
        };
        if a.re == 0.0 && a.im == 0.0 {
            return Triple {
                occ: Complex64::new(0.0, 0.0),
                gamma_occ: Complex64::new(0.0, 0.0),
                free: a * rr,
            };
        }
        let h = disp.radial(r).unwrap_or(f64::INFINITY);
        let occ = statistics::occupation(stats, profile, h).unwrap_or(f64::INFINITY);
        let gamma = statistics::gamma_mu(stats, profile, h).unwrap_or(f64::INFINITY);
        Triple {
            occ: a * (occ * rr),
            gamma_occ: a * (gamma * occ * rr),
            free: a * rr,
        }
    };

    let scale_hint = f.sup_bound()
        * g.sup_bound()
        * unit_sphere_area(d)
        * r_hi.powf(dm1).max(1.0)
        * (r_hi - r_lo);
    let abs_floor = 1e-16 * scale_hint.max(1e-30);

    let is_singular = |r: f64| -> bool {
        singular
            .iter()
            .any(|&s| (r - s).abs() <= 1e-13 * s.abs().max(1.0))
    };

    let mut total = Triple::zero();
    let mut err = 0.0_f64;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a <= 1e-300 {
            continue;
        }
        let left = is_singular(a);
        let right = is_singular(b);
        let outcomes: Vec<Outcome<Triple>> = if left && right {
            let m = 0.5 * (a + b);
            vec![
                quad::approach_endpoint(&mut integrand, a, m, rel_tol, abs_floor, 400),
                quad::approach_endpoint(&mut integrand, b, m, rel_tol, abs_floor, 400),
            ]
        } else if left {
            vec![quad::approach_endpoint(
                &mut integrand,
                a,
                b,
                rel_tol,
                abs_floor,
                400,
            )]
        } else if right {
            vec![quad::approach_endpoint(
                &mut integrand,
                b,
                a,
                rel_tol,
                abs_floor,
                400,
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
        for o in outcomes {
            match o {
                Outcome::Finite(q) => {
                    total = total.add(q.value);
                    err += q.error;
                }
                Outcome::Divergent { levels, last_ratio } => {
                    return Err(Error::DomainViolation(format!(
                        "diagonal pairing diverges on [{a:.4}, {b:.4}]: window increments \
                         stopped decaying after {levels} halvings (ratio {last_ratio:.4})"
                    )));
                }
            }
        }
    }

    Ok(DiagonalIntegrals {
        occ: total.occ,
        gamma_occ: total.gamma_occ,
        free: total.free,
        error: err,
    })
}

/// Normalized average of f conj(g) over the sphere of radius `radius`
/// (point evaluation when the radius is zero), with its own doubling rule.
pub(crate) fn sphere_average(
    f: &TestFunction,
    g: &TestFunction,
    d: usize,
    radius: f64,
) -> Result<Complex64> {
    if d > 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    if radius == 0.0 {
        let origin = vec![0.0; d];
        return Ok(f.eval_raw(&origin) * g.eval_raw(&origin).conj());
    }
    if d == 1 {
        let plus = f.eval_raw(&[radius]) * g.eval_raw(&[radius]).conj();
        let minus = f.eval_raw(&[-radius]) * g.eval_raw(&[-radius]).conj();
        return Ok((plus + minus) * 0.5);
    }
    let area = unit_sphere_area(d);
    let scale = (f.sup_bound() * g.sup_bound() * area).max(1e-300);
    let mut n = if d == 3 { 8 } else { 16 };
    let cap = if d == 3 { 512 } else { 8192 };
    let mut prev = angular_rule(d, n).pair_on_sphere(f, g, radius);
    loop {
        n *= 2;
        let cur = angular_rule(d, n).pair_on_sphere(f, g, radius);
        if (cur - prev).norm() <= 1e-12 * scale || n >= cap {
            return Ok(cur / area);
        }
        prev = cur;
    }
}
