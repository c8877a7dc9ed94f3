//! Joint models as a chain of conditional distributions, return periods and
//! sampling.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{Dist, DistSpec, ParamFn, Univariate};
use crate::error::{Error, Result};

/// One link of the chain: a named variable and its (conditional) distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub units: String,
    pub dist: DistSpec,
    /// Index of the earlier variable the parameters depend on.
    pub covariate: Option<usize>,
}

impl Variable {
    pub fn new(name: impl Into<String>, units: impl Into<String>, dist: DistSpec) -> Self {
        Self {
            name: name.into(),
            units: units.into(),
            dist,
            covariate: None,
        }
    }

    pub fn given(mut self, covariate: usize) -> Self {
        self.covariate = Some(covariate);
        self
    }
}

/// Joint density `f(x) = f_1(x_1) * f_2(x_2 | x_c2) * ... * f_p(x_p | x_cp)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointModel {
    variables: Vec<Variable>,
}

impl JointModel {
    pub fn new(variables: Vec<Variable>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::domain("a joint model needs at least one variable"));
        }
        for (j, v) in variables.iter().enumerate() {
            match v.covariate {
                Some(c) if c >= j => {
                    return Err(Error::domain(format!(
                        "variable {j} ({}) may only depend on earlier variables, not on {c}",
                        v.name
                    )))
                }
                None if !v.dist.is_constant() => {
                    return Err(Error::domain(format!(
                        "variable {j} ({}) has covariate-dependent parameters but no covariate",
                        v.name
                    )))
                }
                None => {
                    v.dist.resolve(f64::NAN)?;
                }
                Some(_) => {}
            }
        }
        Ok(Self { variables })
    }

    /// Hs-Tz sea state model: 3-parameter Weibull significant wave height and
    /// log-normal zero-upcrossing period conditional on it.
    pub fn vanem2012() -> Self {
        Self::new(vec![hs_variable(), tz_variable(tz_lognormal())]).expect("preset is valid")
    }

    /// The sea state model with the Tz log-normal mixed with a normal
    /// `N(mean, sd²)` that fades out as `1 - exp(-3 hs)`.
    pub fn mixture(mean: f64, sd: f64) -> Self {
        let tz = DistSpec::Mixture {
            weight: ParamFn::ExpDecay { c1: 3.0 },
            first: Box::new(tz_lognormal()),
            second: Box::new(DistSpec::Normal {
                mean: mean.into(),
                sd: sd.into(),
            }),
        };
        Self::new(vec![hs_variable(), tz_variable(tz)]).expect("preset is valid")
    }

    /// Built-in presets: `vanem2012`, `mixture1` (N(10, 2²)) and
    /// `mixture2` (N(15, 0.5²)).
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "vanem2012" => Some(Self::vanem2012()),
            "mixture1" => Some(Self::mixture(10.0, 2.0)),
            "mixture2" => Some(Self::mixture(15.0, 0.5)),
            _ => None,
        }
    }

    pub const PRESETS: &'static [&'static str] = &["vanem2012", "mixture1", "mixture2"];

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    /// The distribution of dimension `j` with its covariate taken from `x`.
    /// Only `x[..j]` is read.
    pub fn conditional(&self, j: usize, x: &[f64]) -> Result<Dist> {
        let v = &self.variables[j];
        let h = v.covariate.map_or(f64::NAN, |c| x[c]);
        v.dist.resolve(h)
    }

    pub fn joint_pdf(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::Shape {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let mut density = 1.0;
        for j in 0..self.dim() {
            density *= self.conditional(j, x)?.pdf(x[j]);
            if density == 0.0 {
                return Ok(0.0);
            }
        }
        Ok(density)
    }

    pub fn sampler(&self, seed: u64) -> Sampler<'_> {
        Sampler::new(self, seed)
    }

    /// `count` draws through the chain; deterministic for a fixed seed.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
        let mut sampler = self.sampler(seed);
        (0..count).map(|_| sampler.draw()).collect()
    }
}

fn hs_variable() -> Variable {
    Variable::new(
        "Hs",
        "m",
        DistSpec::Weibull {
            scale: 2.776.into(),
            shape: 1.471.into(),
            location: 0.8888.into(),
        },
    )
}

fn tz_lognormal() -> DistSpec {
    DistSpec::LogNormal {
        mu: ParamFn::PowerLaw {
            a1: 0.1000,
            a2: 1.489,
            a3: 0.1901,
        },
        sigma: ParamFn::Exponential {
            b1: 0.0400,
            b2: 0.1748,
            b3: -0.2243,
        },
    }
}

fn tz_variable(dist: DistSpec) -> Variable {
    Variable::new("Tz", "s", dist).given(0)
}

/// Chain sampler backed by ChaCha8 (`rand_chacha`), whose output stream is
/// fixed by the seed on every platform.
///
/// Each coordinate takes one uniform `(k + 0.5) / 2^52` from the top 52 bits
/// of a `u64` and one extra `u64` to choose the component of a mixture.
/// Coordinates are drawn by inverse CDF, upper half through the survival
/// function.
pub struct Sampler<'m> {
    model: &'m JointModel,
    rng: ChaCha8Rng,
}

impl<'m> Sampler<'m> {
    pub fn new(model: &'m JointModel, seed: u64) -> Self {
        Self {
            model,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn open_uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
    }

    pub fn draw(&mut self) -> Result<Vec<f64>> {
        let mut x = Vec::with_capacity(self.model.dim());
        for j in 0..self.model.dim() {
            let u = self.open_uniform();
            let pick = self.open_uniform();
            let d = self.model.conditional(j, &x)?;
            x.push(d.draw(u, pick)?);
        }
        Ok(x)
    }
}

/// Return period and the per-state exceedance probability it implies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnSpec {
    pub return_period_years: f64,
    pub state_duration_hours: f64,
    /// Number of states in one return period.
    pub n_states: f64,
    pub alpha: f64,
}

pub const HOURS_PER_YEAR: f64 = 365.25 * 24.0;

impl ReturnSpec {
    pub fn new(return_period_years: f64, state_duration_hours: f64) -> Result<Self> {
        if !(return_period_years > 0.0 && return_period_years.is_finite()) {
            return Err(Error::domain(format!(
                "return period must be positive, got {return_period_years}"
            )));
        }
        if !(state_duration_hours > 0.0 && state_duration_hours.is_finite()) {
            return Err(Error::domain(format!(
                "state duration must be positive, got {state_duration_hours}"
            )));
        }
        let n_states = return_period_years * HOURS_PER_YEAR / state_duration_hours;
        Ok(Self {
            return_period_years,
            state_duration_hours,
            n_states,
            alpha: 1.0 / n_states,
        })
    }

    /// Return period in years for which a state of the given duration has
    /// exceedance probability `alpha`.
    pub fn years_for_alpha(alpha: f64, state_duration_hours: f64) -> f64 {
        state_duration_hours / (alpha * HOURS_PER_YEAR)
    }
}

pub fn alpha_from_return(
    return_period_years: f64,
    state_duration_hours: f64,
) -> Result<ReturnSpec> {
    ReturnSpec::new(return_period_years, state_duration_hours)
}
