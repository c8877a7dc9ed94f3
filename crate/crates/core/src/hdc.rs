//! Highest density regions on a cell field.
//!
//! The enclosed probability `F̄(f_m)` sums the mass of every cell whose
//! cell-averaged density is at least `f_m`. It is a nonincreasing step
//! function of `f_m`, and the solver returns the largest level whose
//! enclosed probability still reaches `1 - alpha`.

use crate::components::{connected_components, Components};
use crate::contour::{extract_contour, ContourSet};
use crate::error::{Error, Result};
use crate::grid::{build_cell_field, CellField, CompensatedSum, GridSpec};
use crate::model::JointModel;

/// `F̄(f_m)`: probability in cells with `f̄ >= f_m`, summed in row-major
/// order with compensation.
pub fn enclosed_probability(field: &CellField, level: f64) -> f64 {
    level_pass(field, level).0
}

// Enclosed probability and number of included cells.
fn level_pass(field: &CellField, level: f64) -> (f64, usize) {
    let mut sum = CompensatedSum::default();
    let mut count = 0;
    for &v in field.values() {
        if v >= level {
            sum.add(v);
            count += 1;
        }
    }
    (sum.total() * field.cell_volume(), count)
}

/// Result of solving `F̄(f_m) = 1 - alpha` on a field.
#[derive(Debug, Clone)]
pub struct HdcResult {
    pub alpha: f64,
    /// Density level of the contour.
    pub f_m: f64,
    /// `F̄(f_m)` actually reached (at least `1 - alpha`).
    pub enclosed: f64,
    /// Cells with `f̄ >= f_m`, row-major.
    pub mask: Vec<bool>,
    pub components: Components,
    pub contour: ContourSet,
    /// Root-finder iterations before the exact discrete search.
    pub iterations: usize,
}

impl HdcResult {
    pub fn component_count(&self) -> usize {
        self.components.count
    }

    pub fn cells_in_region(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }
}

const MAX_BRACKET_ITER: usize = 200;
const BRACKET_REL_WIDTH: f64 = 1e-6;
// Below this many cells between the bracket ends the exact search takes over.
const EXACT_SEARCH_CELLS: usize = 64;

/// Finds the minimum density `f_m` with `F̄(f_m) >= 1 - alpha` and builds
/// the region, its components and its contour.
///
/// Fails with [`Error::GridCoverage`] if the grid misses `alpha / 10` or
/// more of the probability mass.
pub fn solve_fm(field: &CellField, alpha: f64) -> Result<HdcResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha = {alpha} is outside (0, 1)")));
    }
    let (f_m, iterations) = find_level(field, alpha)?;
    let enclosed = enclosed_probability(field, f_m);
    let mask: Vec<bool> = field.values().iter().map(|&v| v >= f_m).collect();
    let components = connected_components(&mask, &field.shape());
    let contour = extract_contour(field, f_m);
    Ok(HdcResult {
        alpha,
        f_m,
        enclosed,
        mask,
        components,
        contour,
        iterations,
    })
}

fn find_level(field: &CellField, alpha: f64) -> Result<(f64, usize)> {
    let target = 1.0 - alpha;
    let (total, total_count) = level_pass(field, 0.0);
    let missing = 1.0 - total;
    if missing >= alpha / 10.0 {
        return Err(Error::GridCoverage {
            missing,
            limit: alpha / 10.0,
        });
    }
    let max = field.max_value();
    if max <= 0.0 {
        return Err(Error::Numeric {
            what: "solve_fm",
            detail: "field is identically zero".into(),
        });
    }

    // Invariant: g(lo) >= 0 > g(hi) where g(f) = F̄(f) - target.
    let (mut lo, mut g_lo, mut n_lo) = (0.0, total - target, total_count);
    let (mut hi, mut g_hi, mut n_hi) = (max * (1.0 + 4.0 * f64::EPSILON), -target, 0usize);
    let mut iterations = 0;
    let mut secant = true;
    while iterations < MAX_BRACKET_ITER
        && hi - lo >= BRACKET_REL_WIDTH * max
        && n_lo - n_hi > EXACT_SEARCH_CELLS
    {
        let mut f = if secant {
            lo + (hi - lo) * g_lo / (g_lo - g_hi)
        } else {
            0.5 * (lo + hi)
        };
        if !(f > lo && f < hi) {
            f = 0.5 * (lo + hi);
        }
        secant = !secant;
        let (p, n) = level_pass(field, f);
        if p >= target {
            (lo, g_lo, n_lo) = (f, p - target, n);
        } else {
            (hi, g_hi, n_hi) = (f, p - target, n);
        }
        iterations += 1;
    }

    // Exact search among the distinct cell values in [lo, hi).
    let mut candidates: Vec<f64> = field
        .values()
        .iter()
        .copied()
        .filter(|&v| v >= lo && v < hi)
        .collect();
    candidates.sort_by(|a, b| b.total_cmp(a));
    candidates.dedup();
    // F̄ is nondecreasing along the descending candidates; find the first
    // one that reaches the target.
    let first_ok = candidates.partition_point(|&v| enclosed_probability(field, v) < target);
    let f_m = candidates
        .get(first_ok)
        .copied()
        .ok_or_else(|| Error::Numeric {
            what: "solve_fm",
            detail: format!("no cell value in [{lo}, {hi}) reaches F̄ = {target}"),
        })?;
    Ok((f_m, iterations))
}

/// Builds the field on `grid` and solves for the highest density region of
/// probability `1 - alpha`.
pub fn highest_density_contour(
    model: &JointModel,
    alpha: f64,
    grid: &GridSpec,
) -> Result<(CellField, HdcResult)> {
    let field = build_cell_field(model, grid)?;
    let result = solve_fm(&field, alpha)?;
    Ok((field, result))
}

/// One row of a grid convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub cell_length: f64,
    pub f_m: Option<f64>,
    /// `f_m` divided by the value at the smallest cell length.
    pub f_m_star: Option<f64>,
    pub error: Option<String>,
}

/// Solves for `f_m` on square-celled automatic grids of each length.
/// Lengths must be ascending; the first is the normalization reference.
/// A failing row records its error and the study continues.
pub fn grid_convergence_study(
    model: &JointModel,
    alpha: f64,
    cell_lengths: &[f64],
) -> Result<Vec<ConvergenceRow>> {
    if cell_lengths.is_empty() {
        return Err(Error::domain("grid study needs at least one cell length"));
    }
    if cell_lengths
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::domain(
            "grid study cell lengths must be strictly ascending",
        ));
    }
    let mut rows: Vec<ConvergenceRow> = cell_lengths
        .iter()
        .map(|&len| {
            let steps = vec![len; model.dim()];
            let solved = GridSpec::auto(model, alpha, &steps)
                .and_then(|grid| build_cell_field(model, &grid))
                .and_then(|field| find_level(&field, alpha).map(|(f, _)| f));
            match solved {
                Ok(f) => ConvergenceRow {
                    cell_length: len,
                    f_m: Some(f),
                    f_m_star: None,
                    error: None,
                },
                Err(e) => ConvergenceRow {
                    cell_length: len,
                    f_m: None,
                    f_m_star: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    if let Some(reference) = rows[0].f_m {
        for row in &mut rows {
            row.f_m_star = row.f_m.map(|f| f / reference);
        }
    }
    Ok(rows)
}

/// Log-spaced cell lengths from 0.01 to 10, including 0.05.
pub const DEFAULT_STUDY_LENGTHS: &[f64] = &[0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0];
