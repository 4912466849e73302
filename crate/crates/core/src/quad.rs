//! One-dimensional quadrature primitives.
//!
//! Everything here is deterministic: fixed node sets, fixed subdivision
//! order, no randomness. Improper integrals are handled by geometric
//! window sequences (shrinking toward a singular endpoint, doubling toward
//! infinity) with a ratio test that either extrapolates the geometric tail
//! or flags divergence.

use num_complex::Complex64;

/// Scalar-like values a quadrature rule can accumulate.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        num_complex::ComplexFloat::abs(self)
    }
}

/// Value plus an absolute error bound estimate.
#[derive(Debug, Clone, Copy)]
pub struct Quad<V> {
    pub value: V,
    pub error: f64,
}

/// Outcome of an improper integral probe.
#[derive(Debug, Clone, Copy)]
pub enum Outcome<V> {
    Finite(Quad<V>),
    /// Successive geometric windows refused to decay.
    Divergent {
        levels: usize,
        last_ratio: f64,
    },
}

impl<V: QuadValue> Outcome<V> {
    pub fn is_divergent(&self) -> bool {
        matches!(self, Outcome::Divergent { .. })
    }
}

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights. Standard QUADPACK constants.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// Gauss-Kronrod 7-15 on [a, b]. Nodes are strictly interior, so integrable
/// endpoint singularities are tolerated.
pub fn kronrod15<V: QuadValue>(f: &mut dyn FnMut(f64) -> V, a: f64, b: f64) -> Quad<V> {
    kronrod15_full(f, a, b).0
}

/// Rule result plus the integral of |f| (the roundoff reference scale).
fn kronrod15_full<V: QuadValue>(f: &mut dyn FnMut(f64) -> V, a: f64, b: f64) -> (Quad<V>, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc.scale(WGK[7]);
    let mut gauss = fc.scale(WG[3]);
    let mut res_abs = fc.norm() * WGK[7];

    let mut samples: [Option<(V, V)>; 7] = [None; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        samples[j] = Some((f1, f2));
        let sum = f1.add(f2);
        kronrod = kronrod.add(sum.scale(WGK[j]));
        res_abs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            gauss = gauss.add(sum.scale(WG[j / 2]));
        }
    }

    let mean = kronrod.scale(0.5);
    let mut res_asc = WGK[7] * fc.add(mean.scale(-1.0)).norm();
    for j in 0..7 {
        let (f1, f2) = samples[j].unwrap();
        res_asc += WGK[j] * (f1.add(mean.scale(-1.0)).norm() + f2.add(mean.scale(-1.0)).norm());
    }

    let value = kronrod.scale(half);
    res_abs *= half.abs();
    res_asc *= half.abs();

    let mut err = kronrod.add(gauss.scale(-1.0)).norm() * half.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }

    (Quad { value, error: err }, res_abs)
}

fn adaptive_rec<V: QuadValue>(
    f: &mut dyn FnMut(f64) -> V,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
) -> Quad<V> {
    let (whole, res_abs) = kronrod15_full(f, a, b);
    // Stop at the requested tolerance, at the rule's roundoff floor
    // (refinement cannot reliably improve beyond it), or at depth.
    if whole.error <= tol
        || whole.error <= 500.0 * f64::EPSILON * res_abs
        || depth >= 32
        || (b - a).abs() < 1e-300
    {
        return whole;
    }
    let m = 0.5 * (a + b);
    let left = adaptive_rec(f, a, m, 0.5 * tol, depth + 1);
    let right = adaptive_rec(f, m, b, 0.5 * tol, depth + 1);
    Quad {
        value: left.value.add(right.value),
        error: left.error + right.error,
    }
}

/// Adaptive bisection on a finite interval. `abs_floor` caps how small the
/// absolute tolerance is allowed to get when the integral itself is tiny.
pub fn adaptive<V: QuadValue>(
    f: &mut dyn FnMut(f64) -> V,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_floor: f64,
) -> Quad<V> {
    if a == b {
        return Quad {
            value: V::zero(),
            error: 0.0,
        };
    }
    let first = kronrod15(f, a, b);
    let tol = (rel_tol * first.value.norm()).max(abs_floor);
    if first.error <= tol {
        return first;
    }
    adaptive_rec(f, a, b, tol, 0)
}

/// Integrate over (sing, other] (or [other, sing) when `sing > other`)
/// approaching the singular endpoint through windows that halve in size.
///
/// Window contributions `W_k` of an integrable power singularity decay
/// geometrically; the remaining tail is extrapolated from the observed
/// ratio and charged to the error bound. Ratios pinned at or above one
/// over several consecutive levels signal a non-integrable endpoint.
pub fn approach_endpoint<V: QuadValue>(
    f: &mut dyn FnMut(f64) -> V,
    sing: f64,
    other: f64,
    rel_tol: f64,
    abs_floor: f64,
    max_levels: usize,
) -> Outcome<V> {
    let span = other - sing; // signed
    if span == 0.0 {
        return Outcome::Finite(Quad {
            value: V::zero(),
            error: 0.0,
        });
    }
    let mut acc = V::zero();
    let mut err = 0.0_f64;
    let mut prev_norm: Option<f64> = None;
    let mut ratios: Vec<f64> = Vec::new();
    let mut stuck = 0usize;
    let mut quiet = 0usize;

    for k in 0..max_levels {
        let hi = sing + span * 0.5_f64.powi(k as i32);
        let lo = sing + span * 0.5_f64.powi(k as i32 + 1);
        // Keep window endpoints ordered for the rule.
        let (wa, wb) = if span > 0.0 { (lo, hi) } else { (hi, lo) };
        if (wb - wa).abs() < 1e-300 || wa == wb {
            break;
        }
        let window_floor = (0.25 * rel_tol * acc.norm()).max(abs_floor);
        let w = adaptive(f, wa, wb, 0.25 * rel_tol, window_floor);
        acc = acc.add(w.value);
        err += w.error;
        let wn = w.value.norm();

        if let Some(p) = prev_norm {
            if p > 0.0 {
                let r = wn / p;
                ratios.push(r);
                if r >= 0.999 {
                    stuck += 1;
                } else {
                    stuck = 0;
                }
                if stuck >= 6 && k >= 8 {
                    return Outcome::Divergent {
                        levels: k,
                        last_ratio: r,
                    };
                }
            }
        }
        prev_norm = Some(wn);

        let target = (rel_tol * acc.norm()).max(abs_floor);
        // Stable geometric decay: extrapolate the remaining windows into
        // the value, charging the ratio drift to the error bound.
        if k >= 5 && ratios.len() >= 3 {
            let tail3 = &ratios[ratios.len() - 3..];
            let rho = tail3[2];
            let spread = (tail3[0] - rho).abs().max((tail3[1] - rho).abs());
            if rho < 0.95 && spread < 0.01 * (1.0 - rho) {
                let rem = w.value.scale(rho / (1.0 - rho));
                let uncertainty = rem.norm() * (4.0 * spread / (1.0 - rho));
                if uncertainty <= target {
                    acc = acc.add(rem);
                    err += uncertainty + rem.norm() * 1e-9;
                    return Outcome::Finite(Quad {
                        value: acc,
                        error: err,
                    });
                }
            }
        }
        // Converged outright: remaining windows bounded by a geometric series.
        let rho = ratios
            .iter()
            .rev()
            .take(3)
            .fold(0.0_f64, |m, &r| m.max(r))
            .max(0.5);
        if k >= 3 && rho < 0.97 {
            let rem = wn * rho / (1.0 - rho);
            if rem <= target {
                err += rem;
                return Outcome::Finite(Quad {
                    value: acc,
                    error: err,
                });
            }
        }
        if wn <= abs_floor {
            quiet += 1;
            if quiet >= 3 && k >= 3 {
                err += wn * 3.0;
                return Outcome::Finite(Quad {
                    value: acc,
                    error: err,
                });
            }
        } else {
            quiet = 0;
        }
    }
    // Ran out of levels without a clean verdict; report what accumulated
    // with the last window charged to the error.
    err += prev_norm.unwrap_or(0.0);
    Outcome::Finite(Quad {
        value: acc,
        error: err,
    })
}

/// Integrate over [start, infinity) through doubling windows
/// [start 2^k, start 2^{k+1}], with the same ratio-based verdict.
pub fn tail_to_infinity<V: QuadValue>(
    f: &mut dyn FnMut(f64) -> V,
    start: f64,
    rel_tol: f64,
    abs_floor: f64,
    max_windows: usize,
) -> Outcome<V> {
    assert!(start > 0.0, "tail integration needs a positive start");
    let mut acc = V::zero();
    let mut err = 0.0_f64;
    let mut prev_norm: Option<f64> = None;
    let mut ratios: Vec<f64> = Vec::new();
    let mut stuck = 0usize;
    let mut quiet = 0usize;

    for k in 0..max_windows {
        let wa = start * 2.0_f64.powi(k as i32);
        let wb = start * 2.0_f64.powi(k as i32 + 1);
        if !wb.is_finite() {
            break;
        }
        let window_floor = (0.25 * rel_tol * acc.norm()).max(abs_floor);
        let w = adaptive(f, wa, wb, 0.25 * rel_tol, window_floor);
        acc = acc.add(w.value);
        err += w.error;
        let wn = w.value.norm();

        if let Some(p) = prev_norm {
            if p > 0.0 {
                let r = wn / p;
                ratios.push(r);
                if r >= 0.999 {
                    stuck += 1;
                } else {
                    stuck = 0;
                }
                if stuck >= 6 && k >= 8 {
                    return Outcome::Divergent {
                        levels: k,
                        last_ratio: r,
                    };
                }
            }
        }
        prev_norm = Some(wn);

        let target = (rel_tol * acc.norm()).max(abs_floor);
        let rho = ratios
            .iter()
            .rev()
            .take(3)
            .fold(0.0_f64, |m, &r| m.max(r))
            .max(0.5);
        if k >= 2 && rho < 0.97 {
            let rem = wn * rho / (1.0 - rho);
            if rem <= target {
                err += rem;
                return Outcome::Finite(Quad {
                    value: acc,
                    error: err,
                });
            }
        }
        if wn <= abs_floor {
            quiet += 1;
            if quiet >= 3 {
                err += wn * 3.0;
                return Outcome::Finite(Quad {
                    value: acc,
                    error: err,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Outcome::Divergent {
        levels: max_windows,
        last_ratio: ratios.last().copied().unwrap_or(1.0),
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence. Exact enough for n up to a few thousand.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            dp = (n as f64) * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Golden-section search for the maximum of `f` on [a, b].
pub fn golden_max(f: &dyn Fn(f64) -> f64, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
