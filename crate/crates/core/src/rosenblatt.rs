//! Rosenblatt transformation between the physical variables and independent
//! standard normal variables, in the declared chain order.
//!
//! Reordering the chain changes the transformation, and with it IFORM
//! contours.

use crate::dist::Univariate;
use crate::error::{Error, Result};
use crate::model::JointModel;
use crate::normal::{self, U_LIMIT};

/// `u_j = Φ⁻¹(F_j(x_j | x_1..x_{j-1}))`.
///
/// Fails with [`Error::Boundary`] when a coordinate sits on or outside the
/// support of its factor, or so deep in a tail that |u_j| > 8.2.
pub fn to_u(model: &JointModel, x: &[f64]) -> Result<Vec<f64>> {
    check_len(model, x.len())?;
    let mut u = Vec::with_capacity(x.len());
    for j in 0..model.dim() {
        let d = model.conditional(j, x)?;
        let lower = d.cdf(x[j]);
        let upper = d.sf(x[j]);
        let uj = if lower <= 0.5 {
            normal::inv_cdf(lower)
        } else {
            normal::inv_sf(upper)
        };
        if lower <= 0.0 || upper <= 0.0 || uj.is_nan() || uj.abs() > U_LIMIT {
            return Err(Error::Boundary {
                dim: j,
                name: model.variables()[j].name.clone(),
                x: x[j],
            });
        }
        u.push(uj);
    }
    Ok(u)
}

/// `x_j = F_j⁻¹(Φ(u_j) | x_1..x_{j-1})`, applied in chain order.
pub fn from_u(model: &JointModel, u: &[f64]) -> Result<Vec<f64>> {
    check_len(model, u.len())?;
    let mut x = Vec::with_capacity(u.len());
    for (j, &uj) in u.iter().enumerate() {
        if uj.is_nan() || uj.abs() > U_LIMIT {
            return Err(Error::domain(format!(
                "u[{j}] = {uj} is outside [-{U_LIMIT}, {U_LIMIT}]"
            )));
        }
        let d = model.conditional(j, &x)?;
        let xj = if uj <= 0.0 {
            d.quantile(normal::cdf(uj))?
        } else {
            d.isf(normal::sf(uj))?
        };
        x.push(xj);
    }
    Ok(x)
}

fn check_len(model: &JointModel, got: usize) -> Result<()> {
    if got == model.dim() {
        Ok(())
    } else {
        Err(Error::Shape {
            expected: model.dim(),
            got,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn medians_map_to_origin() {
        let m = JointModel::vanem2012();
        let x = from_u(&m, &[0.0, 0.0]).unwrap();
        let hs_median = m.conditional(0, &[]).unwrap().quantile(0.5).unwrap();
        assert_relative_eq!(x[0], hs_median, max_relative = 1e-15);
        let tz_median = m.conditional(1, &x).unwrap().quantile(0.5).unwrap();
        assert_relative_eq!(x[1], tz_median, max_relative = 1e-15);
        let u = to_u(&m, &x).unwrap();
        assert!(u[0].abs() < 1e-14 && u[1].abs() < 1e-14, "{u:?}");
    }

    #[test]
    fn return_value_maps_to_beta() {
        let m = JointModel::vanem2012();
        // oracles/oracles.py: hs_return_25, tz_median_at_hs25, u1_at_hs25
        let x = [15.232_427_185_445_297, 13.448_179_947_989_08];
        let u = to_u(&m, &x).unwrap();
        assert_relative_eq!(u[0], 4.194_242_406_136_150_3, max_relative = 1e-10);
        assert!(u[1].abs() < 1e-9);
    }

    #[test]
    fn outside_support_is_rejected() {
        let m = JointModel::vanem2012();
        match to_u(&m, &[0.5, 5.0]) {
            Err(Error::Boundary { dim: 0, .. }) => {}
            other => panic!("expected boundary error, got {other:?}"),
        }
        match to_u(&m, &[3.0, -1.0]) {
            Err(Error::Boundary { dim: 1, .. }) => {}
            other => panic!("expected boundary error, got {other:?}"),
        }
        assert!(from_u(&m, &[9.0, 0.0]).is_err());
        assert!(from_u(&m, &[f64::NAN, 0.0]).is_err());
        assert!(from_u(&m, &[0.0]).is_err());
    }

    #[test]
    fn monotone_in_each_coordinate() {
        let m = JointModel::vanem2012();
        let mut prev = from_u(&m, &[-5.0, 1.0]).unwrap();
        for i in 1..=100 {
            let u0 = -5.0 + 0.1 * i as f64;
            let x = from_u(&m, &[u0, 1.0]).unwrap();
            assert!(x[0] > prev[0]);
            prev = x;
        }
        let mut prev = from_u(&m, &[2.0, -5.0]).unwrap();
        for i in 1..=100 {
            let x = from_u(&m, &[2.0, -5.0 + 0.1 * i as f64]).unwrap();
            assert!(x[1] > prev[1]);
            assert_eq!(x[0], prev[0]);
            prev = x;
        }
    }
}
