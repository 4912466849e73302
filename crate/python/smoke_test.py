#!/usr/bin/env python3
"""Smoke test for the qcondense_py extension module.

Build the module first:

    cargo build -p qcondense-py --release

then run this script from the repository root:

    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def import_extension():
    candidates = [
        REPO / "target" / "release" / "libqcondense_py.so",
        REPO / "target" / "debug" / "libqcondense_py.so",
        REPO / "target" / "release" / "libqcondense_py.dylib",
        REPO / "target" / "debug" / "libqcondense_py.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("build the extension first: cargo build -p qcondense-py --release")
    stage = Path(tempfile.mkdtemp(prefix="qcondense-py-"))
    shutil.copy(built, stage / "qcondense_py.so")
    sys.path.insert(0, str(stage))
    import qcondense_py

    return qcondense_py


qc = import_extension()

checks = []


def check(name, ok, detail=""):
    checks.append((name, ok))
    print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))


def zeta(s, n=200_000):
    total = sum(k ** -s for k in range(1, n))
    # Euler-Maclaurin tail.
    return total + n ** (1 - s) / (s - 1) + 0.5 * n ** -s + s / 12.0 * n ** (-s - 1)


disp = qc.Dispersion.power(2.0, 3)
profile = qc.Profile.constant(1.0)

# Critical density against the series oracle.
rho_c = qc.critical_density(1.0, profile, disp)
expected = math.pi ** 1.5 * zeta(1.5)
check(
    "critical density = pi^(3/2) zeta(3/2)",
    abs(rho_c["value"] - expected) <= 1e-8 * expected,
    f"{rho_c['value']:.9f} vs {expected:.9f}",
)

# q-scaling law.
rho_half = qc.critical_density(0.5, profile, disp)
check(
    "q rho_c^(q) = rho_c^(1)",
    abs(0.5 * rho_half["value"] - rho_c["value"]) <= 1e-8 * rho_c["value"],
)

# Dimension condition with a d = 1 condensation-possible cell.
cond = qc.dimension_condition(1.0, 1, -0.5, 2.0)
probe = qc.critical_density(1.0, qc.Profile.power_log(-0.5, 2.0), qc.Dispersion.power(1.0, 1))
check(
    "d = 1 condensation possible (s=1, alpha0=-0.5, alpha_inf=2)",
    cond["condensation_possible"] and probe["verdict"] == "finite",
)

# Divergent case flagged.
bad = qc.critical_density(1.0, qc.Profile.power_log(0.0, 2.0), qc.Dispersion.power(2.0, 5))
check("divergence detected when d >= s alpha_inf", bad["verdict"] == "infinite")

# Kernel at criticality with a ground-state condensate satisfies the
# local-equilibrium relation; an off-support point mass does not.
stats = qc.Stats(1.0, 0.0)
kernel = qc.Kernel(stats, profile, disp)
kernel.add_point_mass(0.8, [0.0, 0.0, 0.0])
ok, violations = kernel.validate()
check("ground-state condensate validates", ok, "; ".join(violations))

f = qc.TestFn.bump([0.2, 0.0, 0.1], 1.1)
g = qc.TestFn.bump([0.0, 0.3, 0.0], 0.9).translate([0.4, -0.2, 0.6])
res, scale = kernel.lep_residual(f, g)
check("LEP residual vanishes on admissible kernel", abs(res) <= 1e-8 * scale)

bad_kernel = qc.Kernel(stats, profile, disp)
at = [0.6, 0.0, 0.0]
bad_kernel.add_point_mass(0.9, at)
res, scale = bad_kernel.lep_residual(f, g)
c = profile.tilde_beta(disp.evaluate(at))
predicted = 0.9 * math.expm1(c) * f.eval(at) * g.eval(at).conjugate()
check(
    "inadmissible point mass matches closed-form residual",
    abs(res - predicted) <= 1e-8 * abs(predicted),
)

# Gradient condensate: translation shift and the mollified map ring.
gpm = qc.Kernel(stats, profile, disp)
gpm.add_gradient_point_mass(1.0, [0, 1, 2])
pred, meas = gpm.translation_shift_law([1.0, 0.0, 0.0])
check("translation shift D y^2", abs(pred - 1.0) < 1e-12 and abs(pred - meas) <= 1e-10)

eps = 0.2
ring = max(
    ((i * 0.005, gpm.condensate_map(eps, [(i * 0.005, 0.0)])[0]) for i in range(1, 300)),
    key=lambda t: t[1],
)
check("gradient map peaks on the ring |k| = eps", abs(ring[0] - eps) <= 0.005, f"ring at {ring[0]}")

# Finite-volume box: round trip and condensate emergence.
box = qc.FiniteVolumeModel.with_auto_cutoff(8.0, 3, disp, profile)
rho0 = box.finite_density(profile, -0.3)
mu = box.solve_mu(profile, rho0)
check("finite-volume mu round trip", abs(mu + 0.3) < 1e-9, f"mu = {mu}")

rho_c_box = qc.box_critical_density(profile, disp)["value"]
sweep = qc.thermodynamic_sweep(profile, disp, 2.0 * rho_c_box, [4.0, 8.0, 16.0])
errs = [abs(row[2] - rho_c_box) / rho_c_box for row in sweep["rows"]]
check("condensate estimate improves with the box", errs[2] < errs[1] < errs[0], f"errors {errs}")

# Fermi inversion.
rho_f = qc.density(qc.Stats(-1.0, 0.0), profile, disp)["value"]
mu_f = qc.fermi_mu(profile, disp, rho_f)
check("Fermi chemical potential round trip", abs(mu_f) < 1e-6, f"mu = {mu_f}")

# Convention B critical mu for beta(x) = x via a custom profile.
linear = qc.Profile.custom(lambda x: x, [0.0])
mu_q = qc.critical_mu(math.exp(-1.0), linear, "B")
check("convention-B mu_q = 2 for beta(x) = x", abs(mu_q["value"] - 2.0) <= 1e-9)

# Matrix model identities.
model = qc.MatrixModel([0.1, 0.5, 1.4, 2.0], qc.Profile.power_log(0.3, 2.0))
a = [[complex(i + 1, j - i) for j in range(4)] for i in range(4)]
b = [[complex(j, 0.5 * i) for j in range(4)] for i in range(4)]
worst_leq = max(
    abs(model.leq_residual(a, i, j, t)) for i in range(4) for j in range(4) for t in (0.0, 0.7)
)
worst_kms = max(abs(model.kms_residual(a, b, t)) for t in (0.0, 0.7, -1.3))
check("LEQ identity", worst_leq <= 1e-12, f"{worst_leq:.2e}")
check("modified KMS identity", worst_kms <= 1e-12, f"{worst_kms:.2e}")
ratio_dev = max(
    abs(muw / nuw - math.exp(-freq))
    for freq, muw, nuw in model.bohr_measures(a)
    if nuw > 0
)
check("Bohr-frequency ratio e^{-k}", ratio_dev <= 1e-12, f"{ratio_dev:.2e}")

failed = [name for name, ok in checks if not ok]
print()
if failed:
    print(f"{len(failed)} of {len(checks)} checks failed: {failed}")
    sys.exit(1)
print(f"all {len(checks)} checks passed")
