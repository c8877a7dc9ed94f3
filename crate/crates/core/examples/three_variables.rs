//! A three-variable chain on the general p-dimensional path: wave height,
//! period given height and a normal wind speed given height.

use envcontour::hdc::highest_density_contour;
use envcontour::{DistSpec, GridSpec, JointModel, ParamFn, ReturnSpec, Variable};

fn main() -> envcontour::Result<()> {
    let base = JointModel::vanem2012();
    let mut vars = base.variables().to_vec();
    vars.push(
        Variable::new(
            "U10",
            "m/s",
            DistSpec::Normal {
                mean: ParamFn::PowerLaw {
                    a1: 2.0,
                    a2: 2.5,
                    a3: 0.8,
                },
                sd: 1.5.into(),
            },
        )
        .given(0),
    );
    let model = JointModel::new(vars)?;
    let ret = ReturnSpec::new(1.0, 3.0)?;
    let grid = GridSpec::auto(&model, ret.alpha, &[0.25, 0.25, 0.25])?;
    let (field, hdc) = highest_density_contour(&model, ret.alpha, &grid)?;
    println!("grid {:?}, mass {:.6}", grid.shape(), field.total_mass());
    println!(
        "f_m = {:.4e}  enclosed = {:.6}  components = {}",
        hdc.f_m,
        hdc.enclosed,
        hdc.component_count()
    );
    let ext = hdc.contour.extremes().expect("nonempty region");
    println!(
        "boundary cell extremes: min {:?} max {:?}",
        ext.min, ext.max
    );
    Ok(())
}
