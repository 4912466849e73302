//! Acceptance suite: every criterion pinned to its stated tolerance, one
//! pass/fail line per criterion. Run with
//! `cargo test -p qcondense --test acceptance -- --nocapture`.

use std::time::Instant;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qcondense::kernel::{self, SingularPart, TestFunction, TwoPointKernel};
use qcondense::mu_solver;
use qcondense::observables;
use qcondense::quad::golden_max;
use qcondense::statistics::{self, Convention, QStatistics};
use qcondense::{
    dimension_condition, CMatrix, DispersionRelation, InverseTempProfile, MatrixModel, MuBound,
};

/// Riemann zeta by direct series with an Euler-Maclaurin tail correction:
/// the independent oracle for the critical-density integrals.
fn zeta_series(s: f64) -> f64 {
    let n = 200_000usize;
    let mut sum = 0.0;
    for k in 1..n {
        sum += (k as f64).powf(-s);
    }
    let nf = n as f64;
    sum + nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s / 12.0 * nf.powf(-s - 1.0)
}

fn constant(beta0: f64) -> InverseTempProfile {
    InverseTempProfile::constant(beta0).unwrap()
}

fn power_law(s: f64, d: usize) -> DispersionRelation {
    DispersionRelation::power_law(s, d).unwrap()
}

/// Random smooth test function: a bump, sometimes with a monomial factor
/// or a translation phase.
fn random_test_function(rng: &mut StdRng, d: usize) -> TestFunction {
    let center: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * 1.6 - 0.8).collect();
    let radius = 0.7 + 0.6 * rng.random::<f64>();
    let base = TestFunction::bump(center.clone(), radius).unwrap();
    match rng.random_range(0..5) {
        0 => {
            let mut powers = vec![0u32; d];
            powers[rng.random_range(0..d)] = 1;
            TestFunction::bump_times_poly(center, radius, powers).unwrap()
        }
        1 => {
            let x: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * 2.4 - 1.2).collect();
            base.translate(x).unwrap()
        }
        _ => base,
    }
}

#[test]
fn criterion_01_critical_density_oracle() {
    let t0 = Instant::now();
    let out = statistics::critical_density(1.0, &constant(1.0), &power_law(2.0, 3), 1e-11)
        .unwrap()
        .value()
        .expect("finite critical density");
    let elapsed = t0.elapsed();
    let expected = std::f64::consts::PI.powf(1.5) * zeta_series(1.5);
    let rel = (out - expected).abs() / expected;
    assert!(rel <= 1e-8, "relative error {rel:.3e}");
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:.2?}");
    println!("PASS  [1] critical density pi^(3/2) zeta(3/2): rel err {rel:.2e}, {elapsed:.2?}");
}

#[test]
fn criterion_02_q_scaling_law() {
    let profile = constant(1.0);
    let disp = power_law(2.0, 3);
    let rho1 = statistics::critical_density(1.0, &profile, &disp, 1e-11)
        .unwrap()
        .value()
        .unwrap();
    let mut worst = 0.0_f64;
    for q in [0.1, 0.25, 0.5, 0.9, 1.0] {
        let rho_q = statistics::critical_density(q, &profile, &disp, 1e-11)
            .unwrap()
            .value()
            .unwrap();
        worst = worst.max((q * rho_q - rho1).abs() / rho1);
    }
    assert!(worst <= 1e-8, "worst relative deviation {worst:.3e}");
    println!("PASS  [2] q-scaling q rho_c^(q) = rho_c^(1): worst rel {worst:.2e}");
}

#[test]
fn criterion_03_dimension_conditions() {
    let mut cells = 0usize;
    for s in [1.0, 1.5, 2.0] {
        for alpha0 in [-0.5, 0.0, 0.5] {
            for alpha_inf in [1.5, 2.0, 3.0] {
                let profile = InverseTempProfile::power_log(alpha0, alpha_inf).unwrap();
                for d in 1..=5usize {
                    let analytic =
                        dimension_condition(s, d, alpha0, alpha_inf).condensation_possible;
                    let disp = power_law(s, d);
                    let probe = statistics::critical_density(1.0, &profile, &disp, 1e-9)
                        .unwrap()
                        .is_finite();
                    assert_eq!(
                        analytic, probe,
                        "verdicts disagree at s={s}, alpha0={alpha0}, alpha_inf={alpha_inf}, d={d}"
                    );
                    cells += 1;
                }
            }
        }
    }
    // The d = 1 condensation-possible cell is part of the grid.
    let v = dimension_condition(1.0, 1, -0.5, 2.0);
    assert!(v.condensation_possible);
    let probe = statistics::critical_density(
        1.0,
        &InverseTempProfile::power_log(-0.5, 2.0).unwrap(),
        &power_law(1.0, 1),
        1e-9,
    )
    .unwrap();
    assert!(probe.is_finite());
    println!("PASS  [3] dimension conditions: analytic == quadrature verdict in {cells} cells");
}

fn assert_lep_suite(
    label: &str,
    kernel: &TwoPointKernel,
    pairs: usize,
    rng: &mut StdRng,
    worst: &mut f64,
) {
    for _ in 0..pairs {
        let f = random_test_function(rng, kernel.d());
        let g = random_test_function(rng, kernel.d());
        let r = kernel::lep_residual(kernel, &f, &g).unwrap();
        if r.scale > 1e-12 {
            let rel = r.residual.norm() / r.scale;
            assert!(rel <= 1e-8, "{label}: relative residual {rel:.3e}");
            *worst = worst.max(rel);
        }
    }
}

#[test]
fn criterion_04a_lep_diagonal_only() {
    let mut rng = StdRng::seed_from_u64(2024);
    let d3 = power_law(2.0, 3);
    let mut worst = 0.0_f64;

    // (a) Diagonal-only kernels across (q, mu) settings and profiles.
    let settings: [(f64, f64); 5] = [
        (1.0, -0.4),
        (0.9, -1.0),
        (0.5, 0.1),
        (0.0, -0.2),
        (-1.0, 0.3),
    ];
    for (i, &(q, mu)) in settings.iter().enumerate() {
        let profile = if i % 2 == 0 {
            constant(1.0)
        } else {
            InverseTempProfile::power_log(0.0, 2.0).unwrap()
        };
        let kernel = TwoPointKernel::diagonal(
            QStatistics::new(q, mu, Convention::A).unwrap(),
            profile,
            d3.clone(),
        );
        assert_lep_suite(
            &format!("diagonal q={q}, mu={mu}"),
            &kernel,
            20,
            &mut rng,
            &mut worst,
        );
    }
    println!("PASS  [4a] LEP diagonal-only: worst rel residual {worst:.2e}");
}

#[test]
fn criterion_04b_lep_condensates_at_criticality() {
    let mut rng = StdRng::seed_from_u64(2025);
    let d3 = power_law(2.0, 3);
    let mut worst = 0.0_f64;

    // (b) Point and sphere condensates at criticality, on the ground level
    // E = {0} and on an excited level E = {x0 > 0}.
    let x0 = 1.21_f64;
    let excited = InverseTempProfile::zero_at(x0, 0.5, 2.0).unwrap();
    let ground_kernels = [
        TwoPointKernel::diagonal(QStatistics::bose(0.0), constant(1.0), d3.clone()).with_part(
            SingularPart::PointMass {
                weight: 0.8,
                at: vec![0.0, 0.0, 0.0],
            },
        ),
        TwoPointKernel::diagonal(QStatistics::bose(0.0), constant(1.0), d3.clone()).with_part(
            SingularPart::SphereAverage {
                weight: 1.1,
                radius: 0.0,
            },
        ),
    ];
    let q_half = 0.5_f64;
    let excited_kernels =
        [
            TwoPointKernel::diagonal(QStatistics::bose(0.0), excited.clone(), d3.clone())
                .with_part(SingularPart::PointMass {
                    weight: 0.6,
                    at: vec![x0.sqrt(), 0.0, 0.0],
                }),
            TwoPointKernel::diagonal(
                QStatistics::new(q_half, -q_half.ln(), Convention::A).unwrap(),
                excited.clone(),
                d3.clone(),
            )
            .with_part(SingularPart::SphereAverage {
                weight: 0.9,
                radius: x0.sqrt(),
            }),
            TwoPointKernel::diagonal(QStatistics::bose(0.0), excited.clone(), d3.clone())
                .with_part(SingularPart::SurfaceAtoms {
                    atoms: vec![
                        (0.3, vec![x0.sqrt(), 0.0, 0.0]),
                        (0.2, vec![0.0, -(x0.sqrt()), 0.0]),
                    ],
                }),
        ];
    for (i, k) in ground_kernels.iter().chain(&excited_kernels).enumerate() {
        assert!(kernel::validate(k).ok, "kernel {i} should validate");
        assert_lep_suite(
            &format!("condensate kernel {i}"),
            k,
            20,
            &mut rng,
            &mut worst,
        );
    }
    println!("PASS  [4b] LEP point/sphere condensates at mu_q: worst rel residual {worst:.2e}");
}

#[test]
fn criterion_04c_lep_gradient_condensate() {
    let mut rng = StdRng::seed_from_u64(2026);
    let d3 = power_law(2.0, 3);
    let mut worst = 0.0_f64;

    // (c) Gradient condensate with s = 2, constant beta, mu = 0.
    let gpm = TwoPointKernel::diagonal(QStatistics::bose(0.0), constant(1.0), d3.clone())
        .with_part(SingularPart::GradientPointMass {
            weight: 0.7,
            axes: vec![0, 1, 2],
        });
    for _ in 0..20 {
        // Force functions with nonzero gradients at the origin.
        let mut powers = vec![0u32; 3];
        powers[rng.random_range(0..3)] = 1;
        let f = TestFunction::bump_times_poly(vec![0.0, 0.0, 0.0], 1.2, powers).unwrap();
        let g = random_test_function(&mut rng, 3)
            .translate(vec![0.4, -0.2, 0.9])
            .unwrap();
        let r = kernel::lep_residual(&gpm, &f, &g).unwrap();
        if r.scale > 1e-12 {
            let rel = r.residual.norm() / r.scale;
            assert!(
                rel <= 1e-8,
                "gradient condensate: relative residual {rel:.3e}"
            );
            worst = worst.max(rel);
        }
    }
    println!("PASS  [4c] LEP gradient condensate: worst rel residual {worst:.2e}");
}

#[test]
fn criterion_04d_lep_inadmissible_closed_form() {
    let mut rng = StdRng::seed_from_u64(2027);
    let d3 = power_law(2.0, 3);

    // (d) Inadmissible point mass: residual equals D (e^{tilde_beta} - 1)
    // f(k) conj(g(k)).
    let at = vec![0.6, 0.0, 0.0];
    let bad = TwoPointKernel::diagonal(QStatistics::bose(0.0), constant(1.0), d3.clone())
        .with_part(SingularPart::PointMass {
            weight: 0.9,
            at: at.clone(),
        });
    let mut checked = 0;
    for _ in 0..40 {
        let f = random_test_function(&mut rng, 3);
        let g = random_test_function(&mut rng, 3);
        let fv = f.eval(&at).unwrap();
        let gv = g.eval(&at).unwrap();
        if (fv * gv.conj()).norm() < 1e-3 {
            continue;
        }
        let c = bad
            .profile
            .tilde_beta(bad.disp.evaluate(&at).unwrap())
            .unwrap();
        let predicted = fv * gv.conj() * (0.9 * c.exp_m1());
        let r = kernel::lep_residual(&bad, &f, &g).unwrap();
        let rel = (r.residual - predicted).norm() / predicted.norm();
        assert!(rel <= 1e-8, "closed-form mismatch {rel:.3e}");
        checked += 1;
        if checked >= 5 {
            break;
        }
    }
    assert!(checked >= 5);
    println!("PASS  [4d] inadmissible point mass matches D(e^c - 1) f(k) conj(g(k))");
}

#[test]
fn criterion_05_supercritical_rejection() {
    let d3 = power_law(2.0, 3);
    for q in [1.0_f64, 0.5] {
        let mu_q = -q.ln();
        // Above mu_q: rejected outright.
        let above = TwoPointKernel::diagonal(
            QStatistics::new(q, mu_q + 0.2, Convention::A).unwrap(),
            constant(1.0),
            d3.clone(),
        );
        assert!(!kernel::validate(&above).ok);

        // Below mu_q: the diagonal kernel is the unique admissible one;
        // every singular part is rejected.
        let below = TwoPointKernel::diagonal(
            QStatistics::new(q, mu_q - 0.3, Convention::A).unwrap(),
            constant(1.0),
            d3.clone(),
        );
        assert!(kernel::validate(&below).ok);
        let parts = [
            SingularPart::PointMass {
                weight: 0.5,
                at: vec![0.0, 0.0, 0.0],
            },
            SingularPart::SphereAverage {
                weight: 0.5,
                radius: 0.0,
            },
            SingularPart::GradientPointMass {
                weight: 0.5,
                axes: vec![0],
            },
        ];
        for part in parts {
            let k = below.clone().with_part(part);
            assert!(
                !kernel::validate(&k).ok,
                "singular part accepted below mu_q"
            );
        }
    }
    println!("PASS  [5] kernels above mu_q rejected; uniqueness regime witnessed below mu_q");
}

#[test]
fn criterion_06_finite_volume_sweep() {
    let profile = constant(1.0);
    let disp = power_law(2.0, 3);
    let rho_c = mu_solver::box_critical_density(&profile, &disp, 1e-10)
        .unwrap()
        .value()
        .unwrap();
    let t0 = Instant::now();
    let table = mu_solver::thermodynamic_sweep(
        &profile,
        &disp,
        2.0 * rho_c,
        &mu_solver::DEFAULT_SWEEP_SIDES,
    )
    .unwrap();
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "sweep took {elapsed:.2?}");

    for row in &table.rows {
        let model = mu_solver::FiniteVolumeModel::with_auto_cutoff(
            row.side,
            3,
            disp.clone(),
            &profile,
            1.0,
        )
        .unwrap();
        assert!(
            row.mu < model.mu_upper_bound(&profile).unwrap(),
            "mu(L) not strictly below the bound at L = {}",
            row.side
        );
    }
    // mu(L) approaches 0.
    let mus: Vec<f64> = table.rows.iter().map(|r| r.mu).collect();
    for w in mus.windows(2) {
        assert!(w[1] < w[0], "mu(L) not decreasing: {mus:?}");
    }
    assert!(
        mus.last().unwrap().abs() < 0.01,
        "mu at largest box: {mus:?}"
    );

    let last = table.rows.last().unwrap();
    let rel = (last.condensate_estimate - rho_c).abs() / rho_c;
    assert!(rel <= 0.05, "condensate estimate off by {rel:.4}");

    // Finite-volume density matches the infinite-volume one (box units)
    // within 2% at the largest default box.
    let mu_test = -0.5;
    let inf = statistics::density(&QStatistics::bose(mu_test), &profile, &disp, 1e-10)
        .unwrap()
        .value()
        .unwrap()
        / (2.0 * std::f64::consts::PI).powi(3);
    let model = mu_solver::FiniteVolumeModel::with_auto_cutoff(
        *mu_solver::DEFAULT_SWEEP_SIDES.last().unwrap(),
        3,
        disp.clone(),
        &profile,
        1.0,
    )
    .unwrap();
    let fv = model.finite_density(&profile, mu_test).unwrap();
    let gap = (fv - inf).abs() / inf;
    assert!(gap < 0.02, "infinite-volume gap {gap:.4}");

    println!(
        "PASS  [6] sweep: condensate within {rel:.4} of rho_c at L = {}, mu -> {:.1e}, {elapsed:.2?}",
        last.side,
        mus.last().unwrap()
    );
}

#[test]
fn criterion_07_symmetry_laws() {
    let d3 = power_law(2.0, 3);
    let x0 = 1.21_f64;
    let excited = InverseTempProfile::zero_at(x0, 0.5, 2.0).unwrap();

    // Rotation invariance of sphere-averaged condensates.
    let sphere = TwoPointKernel::diagonal(QStatistics::bose(0.0), excited.clone(), d3.clone())
        .with_part(SingularPart::SphereAverage {
            weight: 1.0,
            radius: x0.sqrt(),
        });
    let dev = observables::rotation_invariance_deviation(&sphere, 8, 77).unwrap();
    assert!(dev <= 1e-6, "sphere-average deviation {dev:.3e}");

    // A single off-origin point mass breaks rotation symmetry, witnessed
    // by a constructed (f, g, R) with a closed-form bound.
    let k = vec![x0.sqrt(), 0.0, 0.0];
    let point = TwoPointKernel::diagonal(QStatistics::bose(0.0), excited, d3.clone()).with_part(
        SingularPart::PointMass {
            weight: 1.0,
            at: k.clone(),
        },
    );
    let f = TestFunction::bump(k.clone(), 0.5).unwrap();
    // Rotation by pi around the z axis moves the support far from k.
    let r = vec![
        vec![-1.0, 0.0, 0.0],
        vec![0.0, -1.0, 0.0],
        vec![0.0, 0.0, 1.0],
    ];
    let base = kernel::pair(&point, &f, &f).unwrap();
    let rotated = kernel::pair(
        &point,
        &f.clone().rotate(&r).unwrap(),
        &f.clone().rotate(&r).unwrap(),
    )
    .unwrap();
    let witness = (rotated - base).norm();
    let fk = f.eval(&k).unwrap();
    let bound = (fk * fk.conj()).norm(); // |f(k)|^2 - |f(Rk)|^2 with f(Rk) = 0
    assert!(
        witness >= 0.5 * bound,
        "broken-symmetry witness {witness:.3e} below bound {bound:.3e}"
    );

    // Translation shift law for gradient condensates.
    let gpm = TwoPointKernel::diagonal(QStatistics::bose(0.0), constant(1.0), d3).with_part(
        SingularPart::GradientPointMass {
            weight: 0.8,
            axes: vec![0, 1],
        },
    );
    let mut worst = 0.0_f64;
    for y in [
        vec![1.0, 0.0, 0.0],
        vec![0.3, -0.7, 2.0],
        vec![0.0, 0.0, 5.0],
    ] {
        let (pred, meas) = observables::translation_shift_law(&gpm, &y).unwrap();
        worst = worst.max((pred - meas).abs());
    }
    assert!(worst <= 1e-10, "translation law deviation {worst:.3e}");
    println!(
        "PASS  [7] symmetry: sphere dev {dev:.1e}, point witness {witness:.3}, translation dev {worst:.1e}"
    );
}

#[test]
fn criterion_08_finite_dim_suite() {
    let mut rng = StdRng::seed_from_u64(4096);
    let mut worst_leq = 0.0_f64;
    let mut worst_kms = 0.0_f64;
    let mut worst_ratio = 0.0_f64;
    for trial in 0..20 {
        let n = 2 + (trial % 7); // up to 8
        let mut eig = Vec::with_capacity(n);
        let mut e = 0.1 + rng.random::<f64>() * 0.3;
        for _ in 0..n {
            eig.push(e);
            e += 0.05 + rng.random::<f64>() * 0.7;
        }
        let profile = match trial % 3 {
            0 => constant(0.4 + rng.random::<f64>() * 2.0),
            1 => InverseTempProfile::power_log(
                -0.4 + rng.random::<f64>(),
                1.0 + 2.0 * rng.random::<f64>(),
            )
            .unwrap(),
            _ => InverseTempProfile::zero_at(
                0.2 + 1.5 * rng.random::<f64>(),
                0.3 + rng.random::<f64>(),
                2.0,
            )
            .unwrap(),
        };
        let model = MatrixModel::new(eig, profile).unwrap();
        for _ in 0..10 {
            let a = CMatrix::random(n, &mut rng);
            for t in [0.0, 0.3, 1.7, -0.9, 2.4] {
                for i in 0..n {
                    for j in 0..n {
                        let r = model.leq_residual(&a, i, j, t).unwrap().norm();
                        assert!(r <= 1e-12, "LEQ residual {r:.3e}");
                        worst_leq = worst_leq.max(r);
                    }
                }
                let b = CMatrix::random(n, &mut rng);
                let r = model.kms_residual(&a, &b, t).unwrap().norm();
                assert!(r <= 1e-12, "KMS residual {r:.3e}");
                worst_kms = worst_kms.max(r);
            }
            for line in model.bohr_measures(&a).unwrap() {
                if line.nu_weight > 0.0 {
                    let ratio = line.mu_weight / line.nu_weight;
                    let want = (-line.frequency).exp();
                    let dev = (ratio - want).abs() / want.max(1e-300);
                    assert!(dev <= 1e-12, "RN ratio deviation {dev:.3e}");
                    worst_ratio = worst_ratio.max(dev);
                }
            }
        }
    }
    println!(
        "PASS  [8] finite-dim: worst LEQ {worst_leq:.1e}, KMS {worst_kms:.1e}, RN ratio dev {worst_ratio:.1e}"
    );
}

#[test]
fn criterion_09_convention_b_critical_mu() {
    let linear = InverseTempProfile::custom(|x| x, vec![0.0]);
    let q = (-1.0_f64).exp();
    let result = statistics::critical_mu(q, &linear, Convention::B).unwrap();
    let mu_q = match result.bound {
        MuBound::Finite(v) => v,
        MuBound::Unbounded => panic!("expected finite mu_q"),
    };
    assert!((mu_q - 2.0).abs() <= 1e-9, "mu_q = {mu_q}");
    assert!(!result.no_solution);

    // Sign separation on a grid at mu_q +/- 0.2.
    let below = statistics::b_denominator_extremes(q, &linear, mu_q - 0.2, 8.0, 4096).unwrap();
    let above = statistics::b_denominator_extremes(q, &linear, mu_q + 0.2, 8.0, 4096).unwrap();
    assert!(below > 1e-3, "no positive separation below: {below:.3e}");
    assert!(above < -1e-3, "no negative excursion above: {above:.3e}");
    println!(
        "PASS  [9] convention-B mu_q = {mu_q:.10} (oracle 2); separation {below:.3} / {above:.3}"
    );
}

#[test]
fn criterion_10_condensate_maps() {
    let d3 = power_law(2.0, 3);
    let gpm = TwoPointKernel::diagonal(QStatistics::bose(0.0), constant(1.0), d3.clone())
        .with_part(SingularPart::GradientPointMass {
            weight: 1.0,
            axes: vec![0, 1, 2],
        });

    // Ring radius scales linearly with the mollifier width.
    let widths = [0.4, 0.2, 0.1];
    let mut rings = Vec::new();
    for &eps in &widths {
        assert_eq!(
            observables::condensate_map_at(&gpm, eps, 0.0, 0.0).unwrap(),
            0.0
        );
        let (r_star, _) = golden_max(
            &|r| observables::condensate_map_at(&gpm, eps, r, 0.0).unwrap(),
            1e-4,
            6.0 * eps,
            1e-11,
        );
        rings.push(r_star);
    }
    let slope = (rings[0].ln() - rings[2].ln()) / (widths[0].ln() - widths[2].ln());
    assert!((slope - 1.0).abs() <= 0.05, "log-log slope {slope:.4}");

    // Point-mass map peaks at the origin and decreases radially.
    let pm = TwoPointKernel::diagonal(QStatistics::bose(0.0), constant(1.0), d3).with_part(
        SingularPart::PointMass {
            weight: 1.0,
            at: vec![0.0, 0.0, 0.0],
        },
    );
    let mut prev = observables::condensate_map_at(&pm, 0.25, 0.0, 0.0).unwrap();
    for i in 1..=60 {
        let r = 0.03 * i as f64;
        let v = observables::condensate_map_at(&pm, 0.25, r, 0.0).unwrap();
        assert!(v < prev, "not radially decreasing at r = {r}");
        prev = v;
    }
    let grid: Vec<(f64, f64)> = (0..16)
        .map(|i| (i as f64 * 0.05, (15 - i) as f64 * 0.03))
        .collect();
    let field = observables::condensate_map(&pm, 0.25, &grid).unwrap();
    assert_eq!(field.len(), grid.len());
    println!(
        "PASS  [10] condensate maps: ring radii {rings:?} for widths {widths:?} (slope {slope:.3})"
    );
}

/// Complex pieces used by the suite compose: a quick overall smoke check
/// that the closed-form singular arithmetic agrees with the library's
/// complex pairing on a mixed kernel.
#[test]
fn mixed_condensate_pairing_is_additive() {
    let d3 = power_law(2.0, 3);
    let k = TwoPointKernel::singular_only(QStatistics::bose(0.0), constant(1.0), d3)
        .with_part(SingularPart::PointMass {
            weight: 0.4,
            at: vec![0.0, 0.0, 0.0],
        })
        .with_part(SingularPart::GradientPointMass {
            weight: 0.6,
            axes: vec![0],
        });
    let f = TestFunction::bump_times_poly(vec![0.0; 3], 1.0, vec![1, 0, 0]).unwrap();
    let g = f.clone().translate(vec![0.5, 0.0, 0.0]).unwrap();
    let got = kernel::pair(&k, &f, &g).unwrap();
    let origin = [0.0, 0.0, 0.0];
    let want = f.eval(&origin).unwrap() * g.eval(&origin).unwrap().conj() * 0.4
        + f.grad(&origin).unwrap()[0] * g.grad(&origin).unwrap()[0].conj() * 0.6;
    assert!((got - want).norm() < 1e-13 * want.norm().max(1.0));
    let _ = Complex64::new(0.0, 0.0);
}
