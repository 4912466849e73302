//! Configuration: a strict JSON tree merged with `--set` overrides, mapped
//! onto library types. Unknown keys are rejected everywhere.

use serde::{Deserialize, Serialize};

use qcondense::statistics::Convention;
use qcondense::{
    DispersionRelation, InverseTempProfile, QStatistics, SingularPart, TwoPointKernel,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub kernel: KernelConfig,
    pub numerics: NumericsConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelConfig::default(),
            kernel: KernelConfig::default(),
            numerics: NumericsConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub dispersion: DispersionConfig,
    pub profile: ProfileConfig,
    pub stats: StatsConfig,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            dispersion: DispersionConfig::default(),
            profile: ProfileConfig::default(),
            stats: StatsConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind")]
pub enum DispersionConfig {
    #[serde(rename = "power")]
    Power { s: f64, d: usize },
    #[serde(rename = "relativistic")]
    Relativistic { m: f64, c: f64, d: usize },
}

impl Default for DispersionConfig {
    fn default() -> Self {
        DispersionConfig::Power { s: 2.0, d: 3 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "variant")]
pub enum ProfileConfig {
    #[serde(rename = "constant")]
    Constant { beta0: f64 },
    #[serde(rename = "powerlog")]
    PowerLog { alpha0: f64, alpha_inf: f64 },
    #[serde(rename = "zeroat")]
    ZeroAt { x0: f64, a: f64, alpha_inf: f64 },
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig::Constant { beta0: 1.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StatsConfig {
    pub q: f64,
    pub mu: f64,
    /// "A": factor e^{tilde_beta(eps) - mu}; "B": factor e^{beta(eps)(eps - mu)}.
    pub convention: String,
}

impl Default for StatsConfig {
    fn default() -> Self {
        Self {
            q: 1.0,
            mu: -1.0,
            convention: "A".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct KernelConfig {
    pub diagonal: bool,
    pub singular: Vec<SingularConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "type")]
pub enum SingularConfig {
    #[serde(rename = "point_mass")]
    PointMass { weight: f64, at: Vec<f64> },
    #[serde(rename = "sphere_average")]
    SphereAverage { weight: f64, radius: f64 },
    #[serde(rename = "surface_atoms")]
    SurfaceAtoms { atoms: Vec<AtomConfig> },
    /// Axes are 1-based momentum components.
    #[serde(rename = "gradient_point_mass")]
    GradientPointMass { weight: f64, axes: Vec<usize> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub weight: f64,
    pub at: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsConfig {
    /// Relative tolerance for quadrature-backed values.
    pub rel_tol: f64,
    /// Pass/fail threshold for relative LEP residuals.
    pub lep_tol: f64,
    /// Pass/fail threshold for finite-dimension residuals.
    pub finite_dim_tol: f64,
    /// Seed for randomized suites.
    pub seed: u64,
    /// Number of random test pairs / observables.
    pub pairs: usize,
    /// Grid points per axis for field outputs.
    pub grid: usize,
    /// Half-width of field grids.
    pub extent: f64,
    /// Mollifier width for condensate maps.
    pub mollifier_width: f64,
    /// Target density for fermi-mu and sweep (sweep default: twice the
    /// box-normalized critical density).
    pub rho_target: Option<f64>,
    /// Box sides for the sweep (default: the library's geometric list).
    pub sweep_sides: Option<Vec<f64>>,
    /// Matrix dimension for finite-dim-check.
    pub matrix_n: usize,
    /// Explicit eigenvalues for finite-dim-check (default: seeded random).
    pub eigenvalues: Option<Vec<f64>>,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            lep_tol: 1e-8,
            finite_dim_tol: 1e-12,
            seed: 42,
            pairs: 20,
            grid: 41,
            extent: 1.0,
            mollifier_width: 0.2,
            rho_target: None,
            sweep_sides: None,
            matrix_n: 4,
            eigenvalues: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    /// Output file; stdout when absent. Relative paths resolve against
    /// QCONDENSE_OUT_DIR when that variable is set.
    pub path: Option<String>,
    /// "json" or "csv" where a command supports both.
    pub format: Option<String>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type CfgResult<T> = Result<T, ConfigError>;

fn cfg_err<T>(msg: impl Into<String>) -> CfgResult<T> {
    Err(ConfigError(msg.into()))
}

/// Loads the config file (or defaults), applies `--set path.to.key=value`
/// overrides, then deserializes strictly. Overrides merge onto the
/// defaults tree so partial objects keep their sibling fields; writing a
/// different enum tag ("kind"/"variant"/"type") replaces that node whole.
pub fn resolve(file: Option<&std::path::Path>, sets: &[String]) -> CfgResult<RunConfig> {
    let mut tree = serde_json::to_value(RunConfig::default()).expect("default config serializes");
    if let Some(p) = file {
        let text = std::fs::read_to_string(p)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", p.display())))?;
        let overlay: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("config {}: {e}", p.display())))?;
        deep_merge(&mut tree, overlay);
    }
    for s in sets {
        let Some((key, raw)) = s.split_once('=') else {
            return cfg_err(format!("--set needs KEY=VALUE, got '{s}'"));
        };
        let value: serde_json::Value = serde_json::from_str(raw)
            .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
        let parts: Vec<&str> = key.split('.').collect();
        set_path(&mut tree, &parts, value);
    }
    let cfg: RunConfig =
        serde_json::from_value(tree).map_err(|e| ConfigError(format!("config: {e}")))?;
    validate(&cfg)?;
    Ok(cfg)
}

const TAG_KEYS: [&str; 3] = ["kind", "variant", "type"];

fn switches_tag(base: &serde_json::Value, incoming: &serde_json::Value) -> bool {
    TAG_KEYS
        .iter()
        .any(|tag| matches!((base.get(tag), incoming.get(tag)), (Some(a), Some(b)) if a != b))
}

fn deep_merge(base: &mut serde_json::Value, incoming: serde_json::Value) {
    match (base.is_object(), incoming.is_object()) {
        (true, true) => {
            if switches_tag(base, &incoming) {
                *base = incoming;
                return;
            }
            let map = base.as_object_mut().unwrap();
            for (k, v) in incoming.as_object().unwrap().clone() {
                match map.get_mut(&k) {
                    Some(slot) => deep_merge(slot, v),
                    None => {
                        map.insert(k, v);
                    }
                }
            }
        }
        _ => *base = incoming,
    }
}

fn set_path(tree: &mut serde_json::Value, parts: &[&str], value: serde_json::Value) {
    if !tree.is_object() {
        *tree = serde_json::json!({});
    }
    if parts.len() == 1 {
        let map = tree.as_object_mut().unwrap();
        match map.get_mut(parts[0]) {
            Some(slot) => deep_merge(slot, value),
            None => {
                map.insert(parts[0].to_string(), value);
            }
        }
    } else {
        let map = tree.as_object_mut().unwrap();
        let child = map
            .entry(parts[0].to_string())
            .or_insert_with(|| serde_json::json!({}));
        set_path(child, &parts[1..], value);
    }
}

fn validate(cfg: &RunConfig) -> CfgResult<()> {
    let n = &cfg.numerics;
    for (name, v) in [
        ("numerics.rel_tol", n.rel_tol),
        ("numerics.lep_tol", n.lep_tol),
        ("numerics.finite_dim_tol", n.finite_dim_tol),
        ("numerics.extent", n.extent),
        ("numerics.mollifier_width", n.mollifier_width),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return cfg_err(format!("{name} must be a positive number, got {v}"));
        }
    }
    if n.grid < 2 {
        return cfg_err("numerics.grid must be at least 2");
    }
    if n.pairs == 0 {
        return cfg_err("numerics.pairs must be positive");
    }
    if let Some(rho) = n.rho_target {
        if !(rho > 0.0) {
            return cfg_err(format!("numerics.rho_target must be positive, got {rho}"));
        }
    }
    if let Some(sides) = &n.sweep_sides {
        if sides.iter().any(|&l| !(l > 0.0)) {
            return cfg_err("numerics.sweep_sides must be positive");
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn dispersion(&self) -> CfgResult<DispersionRelation> {
        match self.model.dispersion {
            DispersionConfig::Power { s, d } => DispersionRelation::power_law(s, d),
            DispersionConfig::Relativistic { m, c, d } => DispersionRelation::relativistic(m, c, d),
        }
        .map_err(|e| ConfigError(format!("model.dispersion: {e}")))
    }

    pub fn profile(&self) -> CfgResult<InverseTempProfile> {
        match self.model.profile {
            ProfileConfig::Constant { beta0 } => InverseTempProfile::constant(beta0),
            ProfileConfig::PowerLog { alpha0, alpha_inf } => {
                InverseTempProfile::power_log(alpha0, alpha_inf)
            }
            ProfileConfig::ZeroAt { x0, a, alpha_inf } => {
                InverseTempProfile::zero_at(x0, a, alpha_inf)
            }
        }
        .map_err(|e| ConfigError(format!("model.profile: {e}")))
    }

    pub fn convention(&self) -> CfgResult<Convention> {
        match self.model.stats.convention.as_str() {
            "A" | "a" => Ok(Convention::A),
            "B" | "b" => Ok(Convention::B),
            other => cfg_err(format!(
                "model.stats.convention must be \"A\" or \"B\", got \"{other}\""
            )),
        }
    }

    pub fn stats(&self) -> CfgResult<QStatistics> {
        QStatistics::new(self.model.stats.q, self.model.stats.mu, self.convention()?)
            .map_err(|e| ConfigError(format!("model.stats: {e}")))
    }

    pub fn kernel(&self) -> CfgResult<TwoPointKernel> {
        let mut kernel = if self.kernel.diagonal {
            TwoPointKernel::diagonal(self.stats()?, self.profile()?, self.dispersion()?)
        } else {
            TwoPointKernel::singular_only(self.stats()?, self.profile()?, self.dispersion()?)
        };
        let d = kernel.d();
        for (i, part) in self.kernel.singular.iter().enumerate() {
            let built = match part {
                SingularConfig::PointMass { weight, at } => SingularPart::PointMass {
                    weight: *weight,
                    at: at.clone(),
                },
                SingularConfig::SphereAverage { weight, radius } => SingularPart::SphereAverage {
                    weight: *weight,
                    radius: *radius,
                },
                SingularConfig::SurfaceAtoms { atoms } => SingularPart::SurfaceAtoms {
                    atoms: atoms.iter().map(|a| (a.weight, a.at.clone())).collect(),
                },
                SingularConfig::GradientPointMass { weight, axes } => {
                    let mut zero_based = Vec::with_capacity(axes.len());
                    for &ax in axes {
                        if ax == 0 || ax > d {
                            return cfg_err(format!(
                                "kernel.singular[{i}]: axes are 1-based momentum components \
                                 in 1..={d}, got {ax}"
                            ));
                        }
                        zero_based.push(ax - 1);
                    }
                    SingularPart::GradientPointMass {
                        weight: *weight,
                        axes: zero_based,
                    }
                }
            };
            kernel = kernel.with_part(built);
        }
        Ok(kernel)
    }
}
