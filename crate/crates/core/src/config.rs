//! Run configuration read from TOML.
//!
//! ```toml
//! method = "hdc"
//! preset = "vanem2012"
//! return_periods = [1, 10, 25]
//!
//! [grid]
//! cell_size = 0.05
//! ```
//!
//! A model may be given inline instead of a preset:
//!
//! ```toml
//! [[variables]]
//! name = "Hs"
//! units = "m"
//! dist = { family = "weibull", scale = 2.776, shape = 1.471, location = 0.8888 }
//!
//! [[variables]]
//! name = "Tz"
//! units = "s"
//! covariate = "Hs"
//! dist = { family = "lognormal", mu = { power_law = [0.1, 1.489, 0.1901] }, sigma = { exponential = [0.04, 0.1748, -0.2243] } }
//! ```
//!
//! Unknown keys are rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dist::{DistSpec, ParamFn};
use crate::error::{Error, Result};
use crate::grid::{Axis, GridSpec};
use crate::hdc::DEFAULT_STUDY_LENGTHS;
use crate::huseby;
use crate::iform;
use crate::model::{JointModel, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Hdc,
    Iform,
    Equishape,
    Mc,
    GridStudy,
    Sample,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Hdc => "hdc",
            Method::Iform => "iform",
            Method::Equishape => "equishape",
            Method::Mc => "mc",
            Method::GridStudy => "grid-study",
            Method::Sample => "sample",
        }
    }
}

/// A parameter: a number or a table naming the covariate function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Function(ParamFunction),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ParamFunction {
    Constant(f64),
    /// `a1 + a2 * h^a3`
    PowerLaw([f64; 3]),
    /// `b1 + b2 * exp(b3 * h)`
    Exponential([f64; 3]),
    /// `1 - exp(-c1 * h)`
    ExpDecay(f64),
}

impl From<ParamValue> for ParamFn {
    fn from(v: ParamValue) -> Self {
        match v {
            ParamValue::Number(c) | ParamValue::Function(ParamFunction::Constant(c)) => {
                ParamFn::Constant(c)
            }
            ParamValue::Function(ParamFunction::PowerLaw([a1, a2, a3])) => {
                ParamFn::PowerLaw { a1, a2, a3 }
            }
            ParamValue::Function(ParamFunction::Exponential([b1, b2, b3])) => {
                ParamFn::Exponential { b1, b2, b3 }
            }
            ParamValue::Function(ParamFunction::ExpDecay(c1)) => ParamFn::ExpDecay { c1 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistConfig {
    Weibull {
        scale: ParamValue,
        shape: ParamValue,
        #[serde(default = "zero")]
        location: ParamValue,
    },
    Lognormal {
        mu: ParamValue,
        sigma: ParamValue,
    },
    Normal {
        mean: ParamValue,
        sd: ParamValue,
    },
    Mixture {
        weight: ParamValue,
        first: Box<DistConfig>,
        second: Box<DistConfig>,
    },
}

fn zero() -> ParamValue {
    ParamValue::Number(0.0)
}

impl DistConfig {
    fn to_spec(&self, path: &str) -> Result<DistSpec> {
        let spec = match self {
            DistConfig::Weibull {
                scale,
                shape,
                location,
            } => DistSpec::Weibull {
                scale: (*scale).into(),
                shape: (*shape).into(),
                location: (*location).into(),
            },
            DistConfig::Lognormal { mu, sigma } => DistSpec::LogNormal {
                mu: (*mu).into(),
                sigma: (*sigma).into(),
            },
            DistConfig::Normal { mean, sd } => DistSpec::Normal {
                mean: (*mean).into(),
                sd: (*sd).into(),
            },
            DistConfig::Mixture {
                weight,
                first,
                second,
            } => {
                let weight: ParamFn = (*weight).into();
                if let ParamFn::Constant(w) = weight {
                    if !(0.0..=1.0).contains(&w) {
                        return Err(invalid(
                            format!("{path}.weight"),
                            format!("{w} is outside [0, 1]"),
                        ));
                    }
                }
                return Ok(DistSpec::Mixture {
                    weight,
                    first: Box::new(first.to_spec(&format!("{path}.first"))?),
                    second: Box::new(second.to_spec(&format!("{path}.second"))?),
                });
            }
        };
        if spec.is_constant() {
            if let Err(Error::ParameterDomain {
                name,
                value,
                reason,
            }) = spec.resolve(f64::NAN)
            {
                let param = name.rsplit(' ').next().unwrap_or(name);
                return Err(invalid(
                    format!("{path}.{param}"),
                    format!("{value}: {reason}"),
                ));
            }
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableConfig {
    pub name: String,
    #[serde(default)]
    pub units: String,
    /// Name of an earlier variable the parameters depend on.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covariate: Option<String>,
    pub dist: DistConfig,
}

/// A scalar applied to every dimension or one value per dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerDim {
    All(f64),
    Each(Vec<f64>),
}

impl PerDim {
    pub fn expand(&self, dim: usize, field: &str) -> Result<Vec<f64>> {
        match self {
            PerDim::All(v) => Ok(vec![*v; dim]),
            PerDim::Each(v) if v.len() == dim => Ok(v.clone()),
            PerDim::Each(v) => Err(invalid(
                field,
                format!("expected {dim} values, got {}", v.len()),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_cell_size")]
    pub cell_size: PerDim,
    /// Explicit bounds; without them the grid is chosen from the model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memory_cap_bytes: Option<u64>,
}

fn default_cell_size() -> PerDim {
    PerDim::All(0.05)
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            cell_size: default_cell_size(),
            lower: None,
            upper: None,
            memory_cap_bytes: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IformConfig {
    #[serde(default = "default_points")]
    pub n_points: usize,
}

fn default_points() -> usize {
    iform::DEFAULT_POINTS
}

impl Default for IformConfig {
    fn default() -> Self {
        Self {
            n_points: default_points(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    #[serde(default = "default_mc_samples")]
    pub n_samples: usize,
    #[serde(default = "default_directions")]
    pub n_directions: usize,
}

fn default_mc_samples() -> usize {
    1_000_000
}

fn default_directions() -> usize {
    huseby::DEFAULT_DIRECTIONS
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_samples: default_mc_samples(),
            n_directions: default_directions(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridStudyConfig {
    #[serde(default = "default_lengths")]
    pub cell_lengths: Vec<f64>,
}

fn default_lengths() -> Vec<f64> {
    DEFAULT_STUDY_LENGTHS.to_vec()
}

impl Default for GridStudyConfig {
    fn default() -> Self {
        Self {
            cell_lengths: default_lengths(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variables: Vec<VariableConfig>,
    #[serde(default = "default_return_periods")]
    pub return_periods: Vec<f64>,
    #[serde(default = "default_duration")]
    pub state_duration_hours: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_sample_count")]
    pub sample_count: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub iform: IformConfig,
    #[serde(default)]
    pub mc: McConfig,
    #[serde(default)]
    pub grid_study: GridStudyConfig,
}

fn default_method() -> Method {
    Method::Hdc
}

fn default_return_periods() -> Vec<f64> {
    vec![25.0]
}

fn default_duration() -> f64 {
    3.0
}

fn default_sample_count() -> usize {
    1000
}

fn default_output_dir() -> String {
    "out".into()
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Validation {
        field: field.into(),
        message: message.into(),
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let config: RunConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    /// A configuration using a built-in model.
    pub fn with_preset(method: Method, preset: &str) -> Self {
        Self {
            method,
            preset: Some(preset.into()),
            variables: Vec::new(),
            return_periods: default_return_periods(),
            state_duration_hours: default_duration(),
            seed: 0,
            sample_count: default_sample_count(),
            output_dir: default_output_dir(),
            grid: GridConfig::default(),
            iform: IformConfig::default(),
            mc: McConfig::default(),
            grid_study: GridStudyConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let model = self.model()?;
        let dim = model.dim();
        if self.return_periods.is_empty() {
            return Err(invalid(
                "return_periods",
                "at least one return period is required",
            ));
        }
        for (i, &t) in self.return_periods.iter().enumerate() {
            if !(t.is_finite() && t > 0.0) {
                return Err(invalid(
                    format!("return_periods[{i}]"),
                    format!("{t} is not positive"),
                ));
            }
        }
        if !(self.state_duration_hours.is_finite() && self.state_duration_hours > 0.0) {
            return Err(invalid(
                "state_duration_hours",
                format!("{} is not positive", self.state_duration_hours),
            ));
        }
        let cells = self.grid.cell_size.expand(dim, "grid.cell_size")?;
        if let Some(c) = cells.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
            return Err(invalid("grid.cell_size", format!("{c} is not positive")));
        }
        match (&self.grid.lower, &self.grid.upper) {
            (None, None) => {}
            (Some(lo), Some(hi)) => {
                for (field, v) in [("grid.lower", lo), ("grid.upper", hi)] {
                    if v.len() != dim {
                        return Err(invalid(
                            field,
                            format!("expected {dim} values, got {}", v.len()),
                        ));
                    }
                }
                self.explicit_grid(lo, hi, &cells)?;
            }
            _ => return Err(invalid("grid", "lower and upper must be given together")),
        }
        if self.iform.n_points < iform::MIN_POINTS {
            return Err(invalid(
                "iform.n_points",
                format!("needs at least {}", iform::MIN_POINTS),
            ));
        }
        if self.mc.n_directions < 3 {
            return Err(invalid("mc.n_directions", "needs at least 3"));
        }
        if self.mc.n_samples == 0 {
            return Err(invalid("mc.n_samples", "needs at least 1"));
        }
        let lengths = &self.grid_study.cell_lengths;
        if lengths.is_empty() {
            return Err(invalid(
                "grid_study.cell_lengths",
                "at least one length is required",
            ));
        }
        if lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(invalid(
                "grid_study.cell_lengths",
                "lengths must be positive",
            ));
        }
        if lengths
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return Err(invalid(
                "grid_study.cell_lengths",
                "lengths must be strictly ascending",
            ));
        }
        Ok(())
    }

    /// Builds the joint model from the preset or the inline variables.
    pub fn model(&self) -> Result<JointModel> {
        match (&self.preset, self.variables.is_empty()) {
            (Some(name), true) => JointModel::preset(name).ok_or_else(|| {
                invalid(
                    "preset",
                    format!(
                        "unknown preset `{name}`; known: {}",
                        JointModel::PRESETS.join(", ")
                    ),
                )
            }),
            (None, false) => self.inline_model(),
            (Some(_), false) => Err(invalid(
                "preset",
                "give either a preset or variables, not both",
            )),
            (None, true) => Err(invalid(
                "preset",
                "a preset or a list of variables is required",
            )),
        }
    }

    fn inline_model(&self) -> Result<JointModel> {
        let mut vars = Vec::with_capacity(self.variables.len());
        for (j, v) in self.variables.iter().enumerate() {
            let path = format!("variables[{j}]");
            if v.name.is_empty() {
                return Err(invalid(format!("{path}.name"), "must not be empty"));
            }
            if self.variables[..j].iter().any(|u| u.name == v.name) {
                return Err(invalid(
                    format!("{path}.name"),
                    format!("duplicate name `{}`", v.name),
                ));
            }
            let spec = v.dist.to_spec(&format!("{path}.dist"))?;
            let mut var = Variable::new(v.name.clone(), v.units.clone(), spec);
            if let Some(c) = &v.covariate {
                let idx = self.variables[..j]
                    .iter()
                    .position(|u| &u.name == c)
                    .ok_or_else(|| {
                        invalid(
                            format!("{path}.covariate"),
                            format!("`{c}` is not an earlier variable"),
                        )
                    })?;
                var = var.given(idx);
            }
            vars.push(var);
        }
        JointModel::new(vars).map_err(|e| match e {
            Error::Domain(msg) => invalid("variables", msg),
            other => other,
        })
    }

    fn explicit_grid(&self, lo: &[f64], hi: &[f64], cells: &[f64]) -> Result<GridSpec> {
        let axes = (0..lo.len())
            .map(|j| {
                Axis::new(lo[j], hi[j], cells[j])
                    .map_err(|e| invalid(format!("grid.lower[{j}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        GridSpec::new(axes)
    }

    /// The grid for exceedance probability `alpha`: explicit bounds when
    /// given, else chosen from the model.
    pub fn grid_spec(&self, model: &JointModel, alpha: f64) -> Result<GridSpec> {
        let cells = self.grid.cell_size.expand(model.dim(), "grid.cell_size")?;
        match (&self.grid.lower, &self.grid.upper) {
            (Some(lo), Some(hi)) => self.explicit_grid(lo, hi, &cells),
            _ => GridSpec::auto(model, alpha, &cells),
        }
    }

    /// The configuration as compact JSON with sorted keys, without the
    /// output directory.
    pub fn canonical(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        if let serde_json::Value::Object(map) = &mut value {
            map.remove("output_dir");
        }
        value.to_string()
    }

    /// Hex SHA-256 of the canonical form.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
