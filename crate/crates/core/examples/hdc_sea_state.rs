//! Highest density contours of the Hs-Tz sea state model for 1, 10 and
//! 25 year return periods on 0.05 m x 0.05 s cells.

use std::time::Instant;

use envcontour::hdc::highest_density_contour;
use envcontour::{GridSpec, JointModel, ReturnSpec};

fn main() -> envcontour::Result<()> {
    let model = JointModel::vanem2012();
    for years in [1.0, 10.0, 25.0] {
        let ret = ReturnSpec::new(years, 3.0)?;
        let grid = GridSpec::auto(&model, ret.alpha, &[0.05, 0.05])?;
        let start = Instant::now();
        let (_, hdc) = highest_density_contour(&model, ret.alpha, &grid)?;
        let ext = hdc.contour.extremes().expect("nonempty region");
        println!(
            "T = {years:>4} yr  alpha = {:.3e}  cells = {:?}  f_m = {:.4e}  enclosed = {:.8}",
            ret.alpha,
            grid.shape(),
            hdc.f_m,
            hdc.enclosed
        );
        println!(
            "    max Hs = {:.3} m  max Tz = {:.3} s  components = {}  ({:.2?})",
            ext.max[0],
            ext.max[1],
            hdc.component_count(),
            start.elapsed()
        );
    }
    Ok(())
}
