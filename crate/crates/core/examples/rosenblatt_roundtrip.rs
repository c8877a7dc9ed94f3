//! Maps points between the physical sea state variables and independent
//! standard normals.

use envcontour::{from_u, to_u, JointModel};

fn main() -> envcontour::Result<()> {
    let model = JointModel::vanem2012();
    for u in [[0.0, 0.0], [1.0, -1.0], [-2.0, 0.5], [4.0, 0.0], [3.0, 3.0]] {
        let x = from_u(&model, &u)?;
        let back = to_u(&model, &x)?;
        println!(
            "u = ({:>5.2}, {:>5.2})  ->  Hs = {:>7.3} m, Tz = {:>7.3} s  ->  u = ({:.12}, {:.12})",
            u[0], u[1], x[0], x[1], back[0], back[1]
        );
    }
    match to_u(&model, &[0.5, 5.0]) {
        Err(e) => println!("below the Weibull location: {e}"),
        Ok(u) => println!("unexpected: {u:?}"),
    }
    Ok(())
}
