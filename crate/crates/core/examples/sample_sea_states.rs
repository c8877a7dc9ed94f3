//! Draws 25 years of 3-hour sea states and counts how many fall outside
//! the 25-year highest density region.

use envcontour::hdc::highest_density_contour;
use envcontour::{GridSpec, JointModel, ReturnSpec};

fn main() -> envcontour::Result<()> {
    let model = JointModel::vanem2012();
    let ret = ReturnSpec::new(25.0, 3.0)?;
    let n = ret.n_states.round() as usize;
    let states = model.sample(n, 2024)?;
    let grid = GridSpec::auto(&model, ret.alpha, &[0.05, 0.05])?;
    let (_, hdc) = highest_density_contour(&model, ret.alpha, &grid)?;
    let shape = grid.shape();
    let outside = states
        .iter()
        .filter(|x| match grid.locate(x) {
            Some(idx) => !hdc.mask[envcontour::grid::ravel(&shape, &idx)],
            None => true,
        })
        .count();
    println!("{n} sea states, {outside} outside the 25-year region (expected about 1)");
    let largest = states.iter().map(|x| x[0]).fold(f64::MIN, f64::max);
    println!("largest Hs = {largest:.2} m");
    Ok(())
}
