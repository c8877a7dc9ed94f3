//! 25-year IFORM contour of the sea state model, compared with the
//! marginal return value of Hs.

use envcontour::iform::{iform_contour, ContourMode};
use envcontour::{JointModel, ReturnSpec, Univariate};

fn main() -> envcontour::Result<()> {
    let model = JointModel::vanem2012();
    let ret = ReturnSpec::new(25.0, 3.0)?;
    let c = iform_contour(&model, ret.alpha, 360, ContourMode::Iform)?;
    let hs = model.conditional(0, &[])?;
    println!("beta = {:.6}", c.beta);
    println!(
        "max Hs = {:.4} m  (marginal return value {:.4} m)",
        c.extremes.max[0],
        hs.isf(ret.alpha)?
    );
    println!("max Tz = {:.4} s", c.extremes.max[1]);
    for (theta, x) in c.angles.iter().zip(&c.x).step_by(45) {
        println!(
            "  {:>5.1} deg  Hs = {:>7.3}  Tz = {:>7.3}",
            theta.to_degrees(),
            x[0],
            x[1]
        );
    }
    Ok(())
}
