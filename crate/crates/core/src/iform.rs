//! IFORM contours: a circle of radius β in standard normal space mapped
//! through the inverse Rosenblatt transformation.
//!
//! The equi-shape variant inflates the circle until it encloses exactly
//! `1 - alpha` of the bivariate standard normal mass. The radial distance of
//! a bivariate standard normal is Rayleigh distributed, so that radius is
//! `sqrt(-2 ln alpha)`.

use std::f64::consts::PI;

use crate::contour::Extremes;
use crate::error::{Error, Result};
use crate::model::{JointModel, ReturnSpec};
use crate::normal;
use crate::rosenblatt::from_u;

pub const DEFAULT_POINTS: usize = 360;
pub const MIN_POINTS: usize = 4;

/// `β = Φ⁻¹(1 - alpha)` for `0 < alpha <= 0.5`.
pub fn iform_beta(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::domain(format!(
            "IFORM needs 0 < alpha <= 0.5, got {alpha}"
        )));
    }
    Ok(normal::inv_sf(alpha))
}

/// `β = sqrt(-2 ln alpha)`, the two-dimensional radius enclosing `1 - alpha`.
pub fn equishape_beta(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha = {alpha} is outside (0, 1)")));
    }
    Ok((-2.0 * alpha.ln()).sqrt())
}

/// Exceedance probability of a one-sided IFORM halfspace at radius `beta`.
pub fn iform_alpha(beta: f64) -> f64 {
    normal::sf(beta)
}

/// Return period whose IFORM contour has radius `beta`.
pub fn equivalent_return_period(beta: f64, state_duration_hours: f64) -> f64 {
    ReturnSpec::years_for_alpha(iform_alpha(beta), state_duration_hours)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourMode {
    Iform,
    EquiShape,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IformContour {
    pub mode: ContourMode,
    pub beta: f64,
    /// Angles in radians, uniform on [0, 2π).
    pub angles: Vec<f64>,
    pub u: Vec<[f64; 2]>,
    pub x: Vec<[f64; 2]>,
    pub extremes: Extremes,
}

impl IformContour {
    /// Vertices with the first repeated at the end.
    pub fn closed(&self) -> Vec<[f64; 2]> {
        let mut v = self.x.clone();
        if let Some(&first) = self.x.first() {
            v.push(first);
        }
        v
    }
}

pub fn iform_contour(
    model: &JointModel,
    alpha: f64,
    n_points: usize,
    mode: ContourMode,
) -> Result<IformContour> {
    if model.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            what: "IFORM contour",
            supported: 2,
            got: model.dim(),
        });
    }
    let beta = match mode {
        ContourMode::Iform => iform_beta(alpha)?,
        ContourMode::EquiShape => equishape_beta(alpha)?,
    };
    circle_contour(model, beta, n_points, mode)
}

/// Maps the circle of radius `beta` through the inverse Rosenblatt
/// transformation.
pub fn circle_contour(
    model: &JointModel,
    beta: f64,
    n_points: usize,
    mode: ContourMode,
) -> Result<IformContour> {
    if n_points < MIN_POINTS {
        return Err(Error::domain(format!(
            "contour needs at least {MIN_POINTS} points, got {n_points}"
        )));
    }
    let angles: Vec<f64> = (0..n_points)
        .map(|i| 2.0 * PI * i as f64 / n_points as f64)
        .collect();
    let mut u = Vec::with_capacity(n_points);
    let mut x = Vec::with_capacity(n_points);
    for &theta in &angles {
        let ui = [beta * theta.cos(), beta * theta.sin()];
        let xi = from_u(model, &ui).map_err(|e| Error::Numeric {
            what: "IFORM contour",
            detail: format!("angle {:.3} deg: {e}", theta.to_degrees()),
        })?;
        u.push(ui);
        x.push([xi[0], xi[1]]);
    }
    let extremes = Extremes::of(x.iter().map(|p| &p[..])).expect("n_points >= 4");
    Ok(IformContour {
        mode,
        beta,
        angles,
        u,
        x,
        extremes,
    })
}
