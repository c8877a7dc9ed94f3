//! Parametric univariate distributions and covariate-dependent parameters.

use crate::error::{Error, Result};
use crate::normal;

/// Common interface of the resolved (parameter-fixed) distributions.
pub trait Univariate {
    fn pdf(&self, x: f64) -> f64;
    fn cdf(&self, x: f64) -> f64;
    /// Survival function 1 - F(x), evaluated without cancellation where the
    /// family allows it.
    fn sf(&self, x: f64) -> f64;
    /// Inverse of `cdf` for q in (0, 1).
    fn quantile(&self, q: f64) -> Result<f64>;
    /// Inverse of `sf`: the x with upper-tail probability p, for p in (0, 1).
    fn isf(&self, p: f64) -> Result<f64>;
    /// Closed support bounds (may be infinite).
    fn support(&self) -> (f64, f64);
}

fn check_probability(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("probability {q} is outside (0, 1)")))
    }
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::ParameterDomain {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::ParameterDomain {
            name,
            value,
            reason: "must be finite",
        })
    }
}

/// Three-parameter Weibull distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weibull3 {
    scale: f64,
    shape: f64,
    location: f64,
}

impl Weibull3 {
    pub fn new(scale: f64, shape: f64, location: f64) -> Result<Self> {
        Ok(Self {
            scale: positive("weibull scale", scale)?,
            shape: positive("weibull shape", shape)?,
            location: finite("weibull location", location)?,
        })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    fn reduced(&self, x: f64) -> f64 {
        (x - self.location) / self.scale
    }
}

impl Univariate for Weibull3 {
    fn pdf(&self, x: f64) -> f64 {
        if x < self.location {
            return 0.0;
        }
        let z = self.reduced(x);
        if z == 0.0 {
            return match self.shape.partial_cmp(&1.0) {
                Some(std::cmp::Ordering::Greater) => 0.0,
                Some(std::cmp::Ordering::Equal) => 1.0 / self.scale,
                _ => f64::INFINITY,
            };
        }
        let zb = z.powf(self.shape);
        self.shape / self.scale * zb / z * (-zb).exp()
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= self.location {
            0.0
        } else {
            -(-self.reduced(x).powf(self.shape)).exp_m1()
        }
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= self.location {
            1.0
        } else {
            (-self.reduced(x).powf(self.shape)).exp()
        }
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        check_probability(q)?;
        Ok(self.location + self.scale * (-(-q).ln_1p()).powf(1.0 / self.shape))
    }

    fn isf(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        Ok(self.location + self.scale * (-p.ln()).powf(1.0 / self.shape))
    }

    fn support(&self) -> (f64, f64) {
        (self.location, f64::INFINITY)
    }
}

/// Log-normal distribution parameterised by the mean and standard deviation
/// of ln X.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNormal {
    mu: f64,
    sigma: f64,
}

impl LogNormal {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        Ok(Self {
            mu: finite("lognormal mu", mu)?,
            sigma: positive("lognormal sigma", sigma)?,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

impl Univariate for LogNormal {
    fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let z = (x.ln() - self.mu) / self.sigma;
        normal::pdf(z) / (x * self.sigma)
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            normal::cdf((x.ln() - self.mu) / self.sigma)
        }
    }

    fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            1.0
        } else {
            normal::sf((x.ln() - self.mu) / self.sigma)
        }
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        check_probability(q)?;
        Ok((self.mu + self.sigma * normal::inv_cdf(q)).exp())
    }

    fn isf(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        Ok((self.mu + self.sigma * normal::inv_sf(p)).exp())
    }

    fn support(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normal {
    mean: f64,
    sd: f64,
}

impl Normal {
    pub fn new(mean: f64, sd: f64) -> Result<Self> {
        Ok(Self {
            mean: finite("normal mean", mean)?,
            sd: positive("normal sd", sd)?,
        })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sd(&self) -> f64 {
        self.sd
    }
}

impl Univariate for Normal {
    fn pdf(&self, x: f64) -> f64 {
        normal::pdf((x - self.mean) / self.sd) / self.sd
    }

    fn cdf(&self, x: f64) -> f64 {
        normal::cdf((x - self.mean) / self.sd)
    }

    fn sf(&self, x: f64) -> f64 {
        normal::sf((x - self.mean) / self.sd)
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        check_probability(q)?;
        Ok(self.mean + self.sd * normal::inv_cdf(q))
    }

    fn isf(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        Ok(self.mean + self.sd * normal::inv_sf(p))
    }

    fn support(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Two-component mixture `w * first + (1 - w) * second`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    weight: f64,
    first: Box<Dist>,
    second: Box<Dist>,
}

const MIXTURE_MAX_ITER: usize = 200;
const MIXTURE_PROB_TOL: f64 = 1e-12;

impl Mixture {
    pub fn new(weight: f64, first: Dist, second: Dist) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::ParameterDomain {
                name: "mixture weight",
                value: weight,
                reason: "must lie in [0, 1]",
            });
        }
        Ok(Self {
            weight,
            first: Box::new(first),
            second: Box::new(second),
        })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn components(&self) -> (&Dist, &Dist) {
        (&self.first, &self.second)
    }

    /// Bisection for `g(x) = target` with g monotone in the direction given
    /// by `increasing`, bracketed by the component inverses.
    fn invert(
        &self,
        target: f64,
        a: f64,
        b: f64,
        increasing: bool,
        g: impl Fn(f64) -> f64,
    ) -> Result<f64> {
        let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
        if lo == hi {
            return Ok(lo);
        }
        let mut iterations = 0;
        while iterations < MIXTURE_MAX_ITER {
            let mid = lo + 0.5 * (hi - lo);
            if mid <= lo || mid >= hi {
                break;
            }
            let below = if increasing {
                g(mid) < target
            } else {
                g(mid) > target
            };
            if below {
                lo = mid;
            } else {
                hi = mid;
            }
            iterations += 1;
        }
        let (glo, ghi) = (g(lo), g(hi));
        let x = if (glo - target).abs() <= (ghi - target).abs() {
            lo
        } else {
            hi
        };
        let residual = (g(x) - target).abs();
        // Absolute floor covers probabilities near 1, where one ulp is 1.1e-16.
        if residual > MIXTURE_PROB_TOL * target.max(1e-4) {
            return Err(Error::Numeric {
                what: "mixture quantile",
                detail: format!(
                    "bisection stopped after {iterations} iterations on [{lo}, {hi}] with residual {residual:.3e} at probability {target}"
                ),
            });
        }
        Ok(x)
    }
}

impl Univariate for Mixture {
    fn pdf(&self, x: f64) -> f64 {
        self.weight * self.first.pdf(x) + (1.0 - self.weight) * self.second.pdf(x)
    }

    fn cdf(&self, x: f64) -> f64 {
        self.weight * self.first.cdf(x) + (1.0 - self.weight) * self.second.cdf(x)
    }

    fn sf(&self, x: f64) -> f64 {
        self.weight * self.first.sf(x) + (1.0 - self.weight) * self.second.sf(x)
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        check_probability(q)?;
        if q > 0.5 {
            return self.isf(1.0 - q);
        }
        let a = self.first.quantile(q)?;
        let b = self.second.quantile(q)?;
        self.invert(q, a, b, true, |x| self.cdf(x))
    }

    fn isf(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        if p > 0.5 {
            return self.quantile(1.0 - p);
        }
        let a = self.first.isf(p)?;
        let b = self.second.isf(p)?;
        self.invert(p, a, b, false, |x| self.sf(x))
    }

    fn support(&self) -> (f64, f64) {
        let (a0, a1) = self.first.support();
        let (b0, b1) = self.second.support();
        (a0.min(b0), a1.max(b1))
    }
}

/// A distribution with all parameters resolved to numbers.
#[derive(Debug, Clone, PartialEq)]
pub enum Dist {
    Weibull(Weibull3),
    LogNormal(LogNormal),
    Normal(Normal),
    Mixture(Mixture),
}

macro_rules! dispatch {
    ($self:ident, $d:ident => $e:expr) => {
        match $self {
            Dist::Weibull($d) => $e,
            Dist::LogNormal($d) => $e,
            Dist::Normal($d) => $e,
            Dist::Mixture($d) => $e,
        }
    };
}

impl Univariate for Dist {
    fn pdf(&self, x: f64) -> f64 {
        dispatch!(self, d => d.pdf(x))
    }

    fn cdf(&self, x: f64) -> f64 {
        dispatch!(self, d => d.cdf(x))
    }

    fn sf(&self, x: f64) -> f64 {
        dispatch!(self, d => d.sf(x))
    }

    fn quantile(&self, q: f64) -> Result<f64> {
        dispatch!(self, d => d.quantile(q))
    }

    fn isf(&self, p: f64) -> Result<f64> {
        dispatch!(self, d => d.isf(p))
    }

    fn support(&self) -> (f64, f64) {
        dispatch!(self, d => d.support())
    }
}

impl Dist {
    /// Inverse-CDF draw from a uniform variate in the open interval (0, 1).
    /// Mixtures consume `pick` to choose the component.
    pub(crate) fn draw(&self, uniform: f64, pick: f64) -> Result<f64> {
        match self {
            Dist::Mixture(m) => {
                let component = if pick < m.weight { &m.first } else { &m.second };
                component.draw(uniform, pick)
            }
            _ if uniform > 0.5 => self.isf(1.0 - uniform),
            _ => self.quantile(uniform),
        }
    }
}

/// A distribution parameter as a function of a single covariate h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamFn {
    Constant(f64),
    /// `a1 + a2 * h^a3`
    PowerLaw {
        a1: f64,
        a2: f64,
        a3: f64,
    },
    /// `b1 + b2 * exp(b3 * h)`
    Exponential {
        b1: f64,
        b2: f64,
        b3: f64,
    },
    /// `1 - exp(-c1 * h)`
    ExpDecay {
        c1: f64,
    },
}

impl ParamFn {
    pub fn eval(&self, h: f64) -> f64 {
        match *self {
            ParamFn::Constant(c) => c,
            ParamFn::PowerLaw { a1, a2, a3 } => a1 + a2 * h.powf(a3),
            ParamFn::Exponential { b1, b2, b3 } => b1 + b2 * (b3 * h).exp(),
            ParamFn::ExpDecay { c1 } => -(-c1 * h).exp_m1(),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, ParamFn::Constant(_))
    }
}

impl From<f64> for ParamFn {
    fn from(c: f64) -> Self {
        ParamFn::Constant(c)
    }
}

/// A distribution family whose parameters may depend on a covariate.
#[derive(Debug, Clone, PartialEq)]
pub enum DistSpec {
    Weibull {
        scale: ParamFn,
        shape: ParamFn,
        location: ParamFn,
    },
    LogNormal {
        mu: ParamFn,
        sigma: ParamFn,
    },
    Normal {
        mean: ParamFn,
        sd: ParamFn,
    },
    Mixture {
        weight: ParamFn,
        first: Box<DistSpec>,
        second: Box<DistSpec>,
    },
}

impl DistSpec {
    /// Evaluates every parameter function at covariate value `h`.
    pub fn resolve(&self, h: f64) -> Result<Dist> {
        Ok(match self {
            DistSpec::Weibull {
                scale,
                shape,
                location,
            } => Dist::Weibull(Weibull3::new(
                scale.eval(h),
                shape.eval(h),
                location.eval(h),
            )?),
            DistSpec::LogNormal { mu, sigma } => {
                Dist::LogNormal(LogNormal::new(mu.eval(h), sigma.eval(h))?)
            }
            DistSpec::Normal { mean, sd } => Dist::Normal(Normal::new(mean.eval(h), sd.eval(h))?),
            DistSpec::Mixture {
                weight,
                first,
                second,
            } => Dist::Mixture(Mixture::new(
                weight.eval(h),
                first.resolve(h)?,
                second.resolve(h)?,
            )?),
        })
    }

    /// True when no parameter depends on the covariate.
    pub fn is_constant(&self) -> bool {
        match self {
            DistSpec::Weibull {
                scale,
                shape,
                location,
            } => scale.is_constant() && shape.is_constant() && location.is_constant(),
            DistSpec::LogNormal { mu, sigma } => mu.is_constant() && sigma.is_constant(),
            DistSpec::Normal { mean, sd } => mean.is_constant() && sd.is_constant(),
            DistSpec::Mixture {
                weight,
                first,
                second,
            } => weight.is_constant() && first.is_constant() && second.is_constant(),
        }
    }
}

impl From<Dist> for DistSpec {
    fn from(d: Dist) -> Self {
        match d {
            Dist::Weibull(w) => DistSpec::Weibull {
                scale: w.scale.into(),
                shape: w.shape.into(),
                location: w.location.into(),
            },
            Dist::LogNormal(l) => DistSpec::LogNormal {
                mu: l.mu.into(),
                sigma: l.sigma.into(),
            },
            Dist::Normal(n) => DistSpec::Normal {
                mean: n.mean.into(),
                sd: n.sd.into(),
            },
            Dist::Mixture(m) => DistSpec::Mixture {
                weight: m.weight.into(),
                first: Box::new((*m.first).into()),
                second: Box::new((*m.second).into()),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn hs_weibull() -> Weibull3 {
        Weibull3::new(2.776, 1.471, 0.8888).unwrap()
    }

    #[test]
    fn weibull_zero_below_location() {
        assert_eq!(hs_weibull().pdf(0.5), 0.0);
        assert_eq!(hs_weibull().cdf(0.5), 0.0);
        assert_eq!(hs_weibull().cdf(-1e9), 0.0);
    }

    #[test]
    fn weibull_pdf_matches_oracle() {
        // oracles/oracles.py: weibull_pdf_3, weibull_cdf_3
        assert_relative_eq!(
            hs_weibull().pdf(3.0),
            0.238_705_586_577_652_18,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            hs_weibull().cdf(3.0),
            0.487_532_176_853_180_43,
            max_relative = 1e-12
        );
    }

    #[test]
    fn weibull_cdf_at_unit_reduced_argument() {
        let w = hs_weibull();
        assert_relative_eq!(
            w.cdf(0.8888 + 2.776),
            1.0 - (-1.0f64).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn weibull_return_value() {
        let q = hs_weibull().isf(1.0 / 73050.0).unwrap();
        assert_relative_eq!(q, 15.232_427_185_445_297, max_relative = 1e-12);
        assert!((q - 15.23).abs() < 0.005);
    }

    #[test]
    fn lognormal_density_at_log_median() {
        let d = LogNormal::new(1.3, 0.2).unwrap();
        let x = 1.3f64.exp();
        assert_relative_eq!(
            d.pdf(x),
            1.0 / (x * 0.2 * (2.0 * std::f64::consts::PI).sqrt()),
            max_relative = 1e-14
        );
        assert_eq!(d.cdf(-3.0), 0.0);
    }

    #[test]
    fn normal_median() {
        let d = Normal::new(15.0, 0.5).unwrap();
        assert_eq!(d.quantile(0.5).unwrap(), 15.0);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            Weibull3::new(2.0, -1.0, 0.0),
            Err(Error::ParameterDomain {
                name: "weibull shape",
                ..
            })
        ));
        assert!(LogNormal::new(0.0, 0.0).is_err());
        assert!(Normal::new(f64::NAN, 1.0).is_err());
        let n = Dist::Normal(Normal::new(0.0, 1.0).unwrap());
        assert!(Mixture::new(1.2, n.clone(), n).is_err());
    }

    #[test]
    fn quantile_domain() {
        let w = hs_weibull();
        assert!(w.quantile(0.0).is_err());
        assert!(w.quantile(1.0).is_err());
        assert!(w.isf(-0.1).is_err());
    }

    fn mixture(weight: f64) -> Mixture {
        Mixture::new(
            weight,
            Dist::LogNormal(LogNormal::new(2.0, 0.15).unwrap()),
            Dist::Normal(Normal::new(15.0, 0.5).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn mixture_cdf_is_weighted_components() {
        let m = mixture(0.5);
        let (a, b) = m.components();
        for i in 0..100 {
            let x = 0.2 * i as f64;
            let want = 0.5 * a.cdf(x) + 0.5 * b.cdf(x);
            assert_relative_eq!(m.cdf(x), want, max_relative = 1e-15);
        }
    }

    #[test]
    fn mixture_quantile_round_trips() {
        let m = mixture(0.93);
        for &q in &[
            1e-8,
            1e-4,
            0.05,
            0.3,
            0.5,
            0.9,
            0.95,
            0.97,
            0.999,
            1.0 - 1e-8,
        ] {
            let x = m.quantile(q).unwrap();
            assert!((m.cdf(x) - q).abs() < 1e-10, "q = {q}, x = {x}");
        }
        for &p in &[1e-8, 1e-5, 0.01, 0.2] {
            let x = m.isf(p).unwrap();
            assert!(((m.sf(x) - p) / p).abs() < 1e-9, "p = {p}, x = {x}");
        }
    }

    #[test]
    fn param_functions() {
        let pl = ParamFn::PowerLaw {
            a1: 0.1,
            a2: 1.489,
            a3: 0.1901,
        };
        assert_relative_eq!(pl.eval(1.0), 1.589, max_relative = 1e-15);
        let ex = ParamFn::Exponential {
            b1: 0.04,
            b2: 0.1748,
            b3: -0.2243,
        };
        assert_relative_eq!(ex.eval(0.0), 0.2148, max_relative = 1e-15);
        assert_relative_eq!(
            ParamFn::ExpDecay { c1: 3.0 }.eval(1.0),
            1.0 - (-3.0f64).exp(),
            max_relative = 1e-15
        );
        assert!(pl.eval(-1.0).is_nan());
    }

    #[test]
    fn spec_resolution_reports_invalid_parameter() {
        let spec = DistSpec::LogNormal {
            mu: 0.0.into(),
            sigma: ParamFn::PowerLaw {
                a1: -1.0,
                a2: 1.0,
                a3: 1.0,
            },
        };
        assert!(spec.resolve(2.0).is_ok());
        assert!(matches!(
            spec.resolve(0.5),
            Err(Error::ParameterDomain {
                name: "lognormal sigma",
                ..
            })
        ));
        assert!(!spec.is_constant());
    }
}
