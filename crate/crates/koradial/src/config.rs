//! Run configuration: one JSON document per run.

use std::path::{Path, PathBuf};

use koradial_core::nonlinearity::{NonlinearitySpec, SpecError};
use koradial_core::quad::QuadratureConfig;
use koradial_core::radial_solver::{ProblemDef, SolverConfig};
use koradial_core::sset_explorer::{Ray, Rectangle, DEFAULT_LADDER, DEFAULT_RADII};
use koradial_core::weights::WeightSpec;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("output directory {path} is not writable: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

fn invalid(field: &'static str, reason: impl ToString) -> ConfigError {
    ConfigError::Invalid { field, reason: reason.to_string() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum NonlinearityConfig {
    Power { theta: f64 },
    PowerSum { terms: Vec<(f64, f64)> },
    ExpMinusOne,
    Table { points: Vec<(f64, f64)> },
}

impl NonlinearityConfig {
    pub fn build(&self) -> Result<NonlinearitySpec, SpecError> {
        match self {
            Self::Power { theta } => NonlinearitySpec::power(*theta),
            Self::PowerSum { terms } => NonlinearitySpec::power_sum(terms.clone()),
            Self::ExpMinusOne => Ok(NonlinearitySpec::exp_minus_one()),
            Self::Table { points } => NonlinearitySpec::table(points),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightConfig {
    ExpDecay { rate: f64 },
    Constant { value: f64 },
    PowerDecay { m: f64, offset: f64 },
    Bump { radius: f64 },
    Table { points: Vec<(f64, f64)> },
    Zero,
}

impl WeightConfig {
    pub fn build(&self) -> Result<WeightSpec, SpecError> {
        match self {
            Self::ExpDecay { rate } => WeightSpec::exp_decay(*rate),
            Self::Constant { value } => WeightSpec::constant(*value),
            Self::PowerDecay { m, offset } => WeightSpec::power_decay(*m, *offset),
            Self::Bump { radius } => WeightSpec::bump(*radius),
            Self::Table { points } => WeightSpec::table(points),
            Self::Zero => Ok(WeightSpec::zero()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Check,
    Solve,
    Sweep,
    Trace,
    Verify,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Check => "check",
            Self::Solve => "solve",
            Self::Sweep => "sweep",
            Self::Trace => "trace",
            Self::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Central {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectangleConfig {
    pub a: [f64; 2],
    pub b: [f64; 2],
    /// Ray for `trace`; defaults to the rectangle diagonal.
    #[serde(default)]
    pub ray: Option<RayConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RayConfig {
    pub origin: [f64; 2],
    pub end: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    pub r_max: f64,
    pub value_cap: f64,
    pub fixed_point_tol: f64,
    pub tail_tol: f64,
    pub trace_tol: f64,
    pub resolution: usize,
    pub base_step: f64,
    /// `(c, d) = (a + offset, b + offset)` for the barrier.
    pub barrier_offset: f64,
    pub ladder: Vec<f64>,
    pub radii: Vec<f64>,
}

impl Default for Numerics {
    fn default() -> Self {
        let s = SolverConfig::default();
        Self {
            r_max: 50.0,
            value_cap: s.value_cap,
            fixed_point_tol: s.fixed_point_tol,
            tail_tol: s.quad.tail_tol,
            trace_tol: 1e-3,
            resolution: 16,
            base_step: s.base_step,
            barrier_offset: 1.0,
            ladder: DEFAULT_LADDER.to_vec(),
            radii: DEFAULT_RADII.to_vec(),
        }
    }
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: default_dir() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: u32,
    pub f: NonlinearityConfig,
    pub g: NonlinearityConfig,
    pub p: WeightConfig,
    pub q: WeightConfig,
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub central: Option<Central>,
    #[serde(default)]
    pub rectangle: Option<RectangleConfig>,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub r_max: Option<f64>,
    pub value_cap: Option<f64>,
    pub resolution: Option<usize>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_owned(), source })?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(dir) = &o.out {
            self.output.dir = dir.clone();
        }
        if let Some(r) = o.r_max {
            self.numerics.r_max = r;
        }
        if let Some(c) = o.value_cap {
            self.numerics.value_cap = c;
        }
        if let Some(k) = o.resolution {
            self.numerics.resolution = k;
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n < 3 {
            return Err(invalid("n", format!("dimension must be at least 3, got {}", self.n)));
        }
        let nu = &self.numerics;
        for (field, v) in [
            ("numerics.r_max", nu.r_max),
            ("numerics.value_cap", nu.value_cap),
            ("numerics.fixed_point_tol", nu.fixed_point_tol),
            ("numerics.tail_tol", nu.tail_tol),
            ("numerics.trace_tol", nu.trace_tol),
            ("numerics.base_step", nu.base_step),
            ("numerics.barrier_offset", nu.barrier_offset),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(field, format!("must be positive and finite, got {v}")));
            }
        }
        if nu.resolution < 2 {
            return Err(invalid("numerics.resolution", "must be at least 2"));
        }
        if nu.ladder.is_empty() || nu.ladder.iter().any(|r| !(r.is_finite() && *r > 0.0)) || nu.ladder.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("numerics.ladder", "must be a nonempty increasing list of positive radii"));
        }
        if nu.radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(invalid("numerics.radii", "must be nonnegative and finite"));
        }
        self.f.build().map_err(|e| invalid("f", e))?;
        self.g.build().map_err(|e| invalid("g", e))?;
        self.p.build().map_err(|e| invalid("p", e))?;
        self.q.build().map_err(|e| invalid("q", e))?;
        if let Some(c) = self.central {
            if !(c.a.is_finite() && c.b.is_finite() && c.a >= 0.0 && c.b >= 0.0) {
                return Err(invalid("central", "values must be finite and nonnegative"));
            }
        }
        if let Some(r) = &self.rectangle {
            self.rectangle_of(r)?;
            if let Some(ray) = r.ray {
                if ray.origin.iter().chain(&ray.end).any(|x| !(x.is_finite() && *x >= 0.0)) {
                    return Err(invalid("rectangle.ray", "endpoints must be finite and nonnegative"));
                }
            }
        }
        Ok(())
    }

    fn rectangle_of(&self, r: &RectangleConfig) -> Result<Rectangle, ConfigError> {
        Rectangle::new(r.a[0], r.a[1], r.b[0], r.b[1]).map_err(|e| invalid("rectangle", e))
    }

    /// Create the output directory and check that it accepts files.
    pub fn prepare_output(&self) -> Result<PathBuf, ConfigError> {
        let dir = self.output.dir.clone();
        let err = |source| ConfigError::Output { path: dir.clone(), source };
        std::fs::create_dir_all(&dir).map_err(err)?;
        let probe = dir.join(".koradial-write-probe");
        std::fs::write(&probe, b"").map_err(err)?;
        std::fs::remove_file(&probe).map_err(err)?;
        Ok(dir)
    }

    pub fn quad(&self) -> QuadratureConfig {
        QuadratureConfig { tail_tol: self.numerics.tail_tol, ..QuadratureConfig::default() }
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            base_step: self.numerics.base_step,
            fixed_point_tol: self.numerics.fixed_point_tol,
            value_cap: self.numerics.value_cap,
            quad: self.quad(),
            ..SolverConfig::default()
        }
    }

    /// The problem with central values `(a, b)` (zero when absent).
    pub fn problem(&self) -> Result<ProblemDef, ConfigError> {
        let c = self.central.unwrap_or(Central { a: 0.0, b: 0.0 });
        ProblemDef::new(
            self.n,
            self.f.build().map_err(|e| invalid("f", e))?,
            self.g.build().map_err(|e| invalid("g", e))?,
            self.p.build().map_err(|e| invalid("p", e))?,
            self.q.build().map_err(|e| invalid("q", e))?,
            c.a,
            c.b,
        )
        .map_err(|e| invalid("central", e))
    }

    pub fn require_central(&self) -> Result<Central, ConfigError> {
        self.central.ok_or_else(|| invalid("central", "required by this subcommand"))
    }

    pub fn rectangle(&self) -> Result<Rectangle, ConfigError> {
        let r = self.rectangle.as_ref().ok_or_else(|| invalid("rectangle", "required by this subcommand"))?;
        self.rectangle_of(r)
    }

    /// Configured ray, or the rectangle diagonal.
    pub fn ray(&self) -> Result<Ray, ConfigError> {
        let r = self.rectangle.as_ref().ok_or_else(|| invalid("rectangle", "a rectangle or ray is required"))?;
        Ok(match r.ray {
            Some(ray) => Ray::new((ray.origin[0], ray.origin[1]), (ray.end[0], ray.end[1])),
            None => Ray::new((r.a[0], r.b[0]), (r.a[1], r.b[1])),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{"n":3,"f":{"family":"power","theta":2.0},"g":{"family":"power","theta":2.0},
        "p":{"family":"exp_decay","rate":1.0},"q":{"family":"exp_decay","rate":1.0}}"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = RunConfig::from_json(BASE).unwrap();
        c.validate().unwrap();
        assert_eq!(c.numerics.r_max, 50.0);
        assert_eq!(c.numerics.resolution, 16);
        assert_eq!(c.output.dir, PathBuf::from("out"));
        assert!(c.mode.is_none());
    }

    #[test]
    fn all_fragments_parse() {
        let text = r#"{"n":4,"f":{"family":"power_sum","terms":[[1.0,2.0],[0.5,3.0]]},"g":{"family":"exp_minus_one"},
            "p":{"family":"power_decay","m":4.0,"offset":1.0},"q":{"family":"table","points":[[0,1],[1,0.5]]},
            "mode":"sweep","central":{"a":1,"b":2},"rectangle":{"a":[0,1],"b":[0,2],"ray":{"origin":[0,0],"end":[1,2]}},
            "numerics":{"r_max":20,"resolution":4},"output":{"dir":"x"}}"#;
        let c = RunConfig::from_json(text).unwrap();
        c.validate().unwrap();
        assert_eq!(c.mode, Some(Mode::Sweep));
        assert_eq!(c.ray().unwrap().end, (1.0, 2.0));
        let bump = r#"{"family":"bump","radius":1.0}"#;
        assert_eq!(serde_json::from_str::<WeightConfig>(bump).unwrap(), WeightConfig::Bump { radius: 1.0 });
    }

    #[test]
    fn missing_theta_is_a_parse_error() {
        let text = BASE.replace(r#""theta":2.0},"g""#, r#""exponent":2.0},"g""#);
        assert!(matches!(RunConfig::from_json(&text), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn invalid_values_are_rejected() {
        let mut c = RunConfig::from_json(BASE).unwrap();
        c.numerics.trace_tol = 0.0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::from_json(BASE).unwrap();
        c.rectangle = Some(RectangleConfig { a: [2.0, 1.0], b: [0.0, 1.0], ray: None });
        assert!(c.validate().is_err());
        let mut c = RunConfig::from_json(BASE).unwrap();
        c.f = NonlinearityConfig::Power { theta: -1.0 };
        assert!(c.validate().is_err());
    }

    #[test]
    fn overrides_win() {
        let mut c = RunConfig::from_json(BASE).unwrap();
        c.apply(&Overrides { r_max: Some(10.0), resolution: Some(3), ..Overrides::default() });
        assert_eq!(c.numerics.r_max, 10.0);
        assert_eq!(c.numerics.resolution, 3);
        assert_eq!(c.solver().value_cap, 1e8);
    }
}
