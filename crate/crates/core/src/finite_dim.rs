//! Matrix-model realization of the local-equilibrium identities at finite
//! degrees of freedom: the trace state for e^{-beta(H) H}, the modified
//! dynamics, the LEQ identity on matrix units, KMS at unit inverse
//! temperature, and Bohr-frequency measures with their e^{-k}
//! Radon-Nikodym ratio.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::temperature::InverseTempProfile;

/// Small dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Matrix unit v_ij = |i><j|.
    pub fn matrix_unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.set(i, j, Complex64::new(1.0, 0.0));
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        Self::from_fn(n, |_, _| {
            Complex64::new(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            )
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        CMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }
}

/// Truncated Hamiltonian with eigenvalues in increasing order and a local
/// inverse-temperature profile; the state is Tr(rho a) with
/// rho = e^{-beta(H) H} / Z.
#[derive(Debug, Clone)]
pub struct MatrixModel {
    pub eigenvalues: Vec<f64>,
    pub profile: InverseTempProfile,
    weights: Vec<f64>,
    partition: f64,
}

/// One Bohr line: a frequency of the modified Hamiltonian with the weights
/// the two measures put on it.
#[derive(Debug, Clone, Copy)]
pub struct BohrLine {
    pub frequency: f64,
    pub mu_weight: f64,
    pub nu_weight: f64,
}

impl MatrixModel {
    pub fn new(eigenvalues: Vec<f64>, profile: InverseTempProfile) -> Result<Self> {
        let n = eigenvalues.len();
        if !(2..=12).contains(&n) {
            return Err(Error::InvalidParameter(format!(
                "matrix models support 2 <= n <= 12, got {n}"
            )));
        }
        if eigenvalues.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter(
                "eigenvalues must be listed in increasing order".into(),
            ));
        }
        if eigenvalues.iter().any(|&e| e < 0.0) {
            return Err(Error::InvalidParameter(
                "eigenvalues must be non-negative".into(),
            ));
        }
        let mut weights = Vec::with_capacity(n);
        for &e in &eigenvalues {
            let tb = profile.tilde_beta(e)?;
            let w = (-tb).exp();
            if !w.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "state weight e^(-tilde_beta({e})) is not finite"
                )));
            }
            weights.push(w);
        }
        let partition: f64 = weights.iter().sum();
        Ok(Self {
            eigenvalues,
            profile,
            weights,
            partition,
        })
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    fn tilde(&self, i: usize) -> f64 {
        // Finite by construction.
        self.profile.tilde_beta(self.eigenvalues[i]).unwrap()
    }

    fn check_shape(&self, a: &CMatrix) -> Result<()> {
        if a.n != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: a.n,
            });
        }
        Ok(())
    }

    /// omega_beta(a) = Tr(e^{-beta(H) H} a) / Z.
    pub fn state(&self, a: &CMatrix) -> Result<Complex64> {
        self.check_shape(a)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.n() {
            acc += a.get(i, i) * self.weights[i];
        }
        Ok(acc / self.partition)
    }

    /// Modified evolution at complex time z: entrywise
    /// a_ij e^{i z (tilde_beta(e_i) - tilde_beta(e_j))}; entire in z.
    pub fn modified_evolution(&self, a: &CMatrix, z: Complex64) -> Result<CMatrix> {
        self.check_shape(a)?;
        let n = self.n();
        Ok(CMatrix::from_fn(n, |i, j| {
            let k = self.tilde(i) - self.tilde(j);
            a.get(i, j) * (Complex64::new(0.0, 1.0) * z * k).exp()
        }))
    }

    /// LEQ residual on the matrix unit v_ij:
    /// omega(a alpha_{t + i beta(e_i)}(v_ij))
    ///   - e^{[beta(e_i) - beta(e_j)] e_j} omega(alpha_t(v_ij) a),
    /// with alpha the unmodified evolution continued to complex time.
    pub fn leq_residual(&self, a: &CMatrix, i: usize, j: usize, t: f64) -> Result<Complex64> {
        self.check_shape(a)?;
        let n = self.n();
        if i >= n || j >= n {
            return Err(Error::InvalidParameter(format!(
                "matrix-unit indices ({i}, {j}) out of range for n = {n}"
            )));
        }
        let (ei, ej) = (self.eigenvalues[i], self.eigenvalues[j]);
        let bi = self.profile.beta(ei)?;
        let bj = self.profile.beta(ej)?;
        let gap = ei - ej;
        // alpha_{t + i bi}(v_ij) = e^{i t gap} e^{-bi gap} v_ij.
        let lhs_phase = Complex64::from_polar((-bi * gap).exp(), t * gap);
        let omega_a_vij = a.get(j, i) * self.weights[j] / self.partition;
        let lhs = lhs_phase * omega_a_vij;

        let rhs_phase = Complex64::from_polar(((bi - bj) * ej).exp(), t * gap);
        let omega_vij_a = a.get(j, i) * self.weights[i] / self.partition;
        let rhs = rhs_phase * omega_vij_a;
        Ok(lhs - rhs)
    }

    /// KMS residual for the modified evolution at inverse temperature 1:
    /// omega(a alpha^{(beta)}_{t+i}(b)) - omega(alpha^{(beta)}_t(b) a).
    pub fn kms_residual(&self, a: &CMatrix, b: &CMatrix, t: f64) -> Result<Complex64> {
        self.check_shape(a)?;
        self.check_shape(b)?;
        let shifted = self.modified_evolution(b, Complex64::new(t, 1.0))?;
        let evolved = self.modified_evolution(b, Complex64::new(t, 0.0))?;
        let lhs = self.state(&a.mul(&shifted))?;
        let rhs = self.state(&evolved.mul(a))?;
        Ok(lhs - rhs)
    }

    /// Discrete Bohr-frequency measures of the modified dynamics. For each
    /// nonzero entry a_{nm}, the frequency tilde_beta(e_m) - tilde_beta(e_n)
    /// receives mu-weight w_m |a_{nm}|^2 / Z and nu-weight w_n |a_{nm}|^2 / Z
    /// (the closed form of the time-integral definition for pure-point
    /// dynamics). Frequencies closer than 1e-12 are merged.
    pub fn bohr_measures(&self, a: &CMatrix) -> Result<Vec<BohrLine>> {
        self.check_shape(a)?;
        let n = self.n();
        let mut lines: Vec<BohrLine> = Vec::new();
        for row in 0..n {
            for col in 0..n {
                let amp = a.get(row, col).norm_sqr();
                if amp == 0.0 {
                    continue;
                }
                let freq = self.tilde(col) - self.tilde(row);
                let mu_w = self.weights[col] * amp / self.partition;
                let nu_w = self.weights[row] * amp / self.partition;
                match lines
                    .iter_mut()
                    .find(|l| (l.frequency - freq).abs() <= 1e-12)
                {
                    Some(line) => {
                        line.mu_weight += mu_w;
                        line.nu_weight += nu_w;
                    }
                    None => lines.push(BohrLine {
                        frequency: freq,
                        mu_weight: mu_w,
                        nu_weight: nu_w,
                    }),
                }
            }
        }
        lines.sort_by(|a, b| a.frequency.partial_cmp(&b.frequency).unwrap());
        Ok(lines)
    }
}
