//! Equi-shape contour: the IFORM circle inflated to enclose 1 - alpha of
//! the bivariate standard normal, and the IFORM return period it matches.

use envcontour::iform::{equivalent_return_period, iform_contour, ContourMode};
use envcontour::{JointModel, ReturnSpec};

fn main() -> envcontour::Result<()> {
    let model = JointModel::vanem2012();
    let ret = ReturnSpec::new(25.0, 3.0)?;
    let iform = iform_contour(&model, ret.alpha, 360, ContourMode::Iform)?;
    let equi = iform_contour(&model, ret.alpha, 360, ContourMode::EquiShape)?;
    println!(
        "IFORM beta = {:.4}  max Hs = {:.3}  max Tz = {:.3}",
        iform.beta, iform.extremes.max[0], iform.extremes.max[1]
    );
    println!(
        "equi-shape beta = {:.4}  max Hs = {:.3}  max Tz = {:.3}",
        equi.beta, equi.extremes.max[0], equi.extremes.max[1]
    );
    println!(
        "equivalent IFORM return period = {:.1} years",
        equivalent_return_period(equi.beta, ret.state_duration_hours)
    );
    Ok(())
}
