//! How the contour density level depends on the cell size.

use envcontour::hdc::{grid_convergence_study, DEFAULT_STUDY_LENGTHS};
use envcontour::{JointModel, ReturnSpec};

fn main() -> envcontour::Result<()> {
    let model = JointModel::vanem2012();
    for years in [1.0, 10.0, 25.0] {
        let ret = ReturnSpec::new(years, 3.0)?;
        println!("T = {years} years");
        for row in grid_convergence_study(&model, ret.alpha, DEFAULT_STUDY_LENGTHS)? {
            match (row.f_m, row.f_m_star) {
                (Some(f), Some(s)) => {
                    println!("  {:>6}  f_m = {f:.4e}  f_m* = {s:.4}", row.cell_length)
                }
                _ => println!(
                    "  {:>6}  {}",
                    row.cell_length,
                    row.error.unwrap_or_default()
                ),
            }
        }
    }
    Ok(())
}
