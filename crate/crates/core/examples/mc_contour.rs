//! Monte Carlo halfspace contour from one million seeded sea states.

use envcontour::huseby::{mc_contour, DEFAULT_DIRECTIONS};
use envcontour::{JointModel, ReturnSpec};

fn main() -> envcontour::Result<()> {
    let model = JointModel::vanem2012();
    let ret = ReturnSpec::new(25.0, 3.0)?;
    let n = 1_000_000;
    let samples: Vec<[f64; 2]> = model
        .sample(n, 42)?
        .into_iter()
        .map(|x| [x[0], x[1]])
        .collect();
    let c = mc_contour(&samples, ret.alpha, DEFAULT_DIRECTIONS)?;
    println!(
        "n = {n}  alpha = {:.3e}  exceedances per direction = {}",
        ret.alpha, c.exceedances
    );
    println!("vertices = {}", c.vertices.len());
    println!(
        "Hs range [{:.3}, {:.3}] m  Tz range [{:.3}, {:.3}] s",
        c.extremes.min[0], c.extremes.max[0], c.extremes.min[1], c.extremes.max[1]
    );
    Ok(())
}
