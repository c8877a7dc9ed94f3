//! The log-normal period model mixed with a normal component. A narrow
//! second mode at long periods splits the 25-year region in two.

use envcontour::hdc::highest_density_contour;
use envcontour::{GridSpec, JointModel, ReturnSpec};

fn main() -> envcontour::Result<()> {
    let ret = ReturnSpec::new(25.0, 3.0)?;
    for name in ["mixture1", "mixture2"] {
        let model = JointModel::preset(name).expect("known preset");
        let grid = GridSpec::auto(&model, ret.alpha, &[0.05, 0.05])?;
        let (_, hdc) = highest_density_contour(&model, ret.alpha, &grid)?;
        println!(
            "{name}: f_m = {:.4e}  components = {}  polylines = {}  sizes = {:?}",
            hdc.f_m,
            hdc.component_count(),
            hdc.contour.polylines.len(),
            hdc.components.sizes()
        );
    }
    Ok(())
}
