//! Regular grids and cell-averaged joint densities.
//!
//! The cell average along one axis is the CDF difference across the cell
//! divided by its length. Conditional factors freeze their covariate at the
//! covariate cell's center, and the joint cell value is the product of the
//! factors.

use rayon::prelude::*;

use crate::dist::{DistSpec, Univariate};
use crate::error::{Error, Result};
use crate::model::JointModel;

/// Default upper bound on the memory a grid may claim.
pub const DEFAULT_MEMORY_CAP: u64 = 2 << 30;

// f64 field value, mask byte, u32 component label, rounded up.
const BYTES_PER_CELL: u64 = 16;

/// Cells padded around the automatically chosen bounds.
const AUTO_PAD_CELLS: f64 = 2.0;

/// Probability left outside the automatic bounds, relative to alpha.
const AUTO_TAIL_FRACTION: f64 = 1e-3;

/// One grid axis: `cells` cells of length `step` starting at `lower`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    lower: f64,
    step: f64,
    cells: usize,
}

impl Axis {
    /// Covers `[lower, upper]` with `ceil((upper - lower) / step)` cells.
    pub fn new(lower: f64, upper: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::domain(format!(
                "cell length must be positive, got {step}"
            )));
        }
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::domain(format!(
                "axis bounds [{lower}, {upper}] are not an increasing finite interval"
            )));
        }
        // Tolerate representation error in (upper - lower) / step.
        let cells = ((upper - lower) / step - 1e-9).ceil() as usize;
        Self::with_cells(lower, step, cells)
    }

    pub fn with_cells(lower: f64, step: f64, cells: usize) -> Result<Self> {
        if cells < 2 {
            return Err(Error::domain(format!(
                "an axis needs at least 2 cells, got {cells}"
            )));
        }
        if !(step > 0.0 && step.is_finite() && lower.is_finite()) {
            return Err(Error::domain(format!(
                "invalid axis lower = {lower}, step = {step}"
            )));
        }
        Ok(Self { lower, step, cells })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.edge(self.cells)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Left edge of cell `k` (`edge(cells)` is the upper bound).
    pub fn edge(&self, k: usize) -> f64 {
        self.lower + k as f64 * self.step
    }

    pub fn center(&self, k: usize) -> f64 {
        self.node(k as isize)
    }

    /// Center of cell `k`, extended to indices outside the axis.
    pub fn node(&self, k: isize) -> f64 {
        self.lower + (k as f64 + 0.5) * self.step
    }
}

/// Per-dimension discretization of the variable space.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    axes: Vec<Axis>,
}

impl GridSpec {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::domain("a grid needs at least one axis"));
        }
        Ok(Self { axes })
    }

    /// Axes from `(lower, upper, step)` triples.
    pub fn from_bounds(bounds: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(
            bounds
                .iter()
                .map(|&(lo, hi, step)| Axis::new(lo, hi, step))
                .collect::<Result<_>>()?,
        )
    }

    /// Bounds chosen so that at most about `alpha / 1000` probability lies
    /// outside each axis, snapped to multiples of the step and padded by two
    /// cells.
    ///
    /// Conditional axes take the union of the conditional quantile ranges
    /// over the covariate cell centers inside the covariate's unpadded
    /// range.
    pub fn auto(model: &JointModel, alpha: f64, steps: &[f64]) -> Result<Self> {
        if steps.len() != model.dim() {
            return Err(Error::Shape {
                expected: model.dim(),
                got: steps.len(),
            });
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::domain(format!("alpha = {alpha} is outside (0, 1)")));
        }
        let tail = alpha * AUTO_TAIL_FRACTION;
        let mut ranges: Vec<(f64, f64)> = Vec::with_capacity(model.dim());
        let mut axes: Vec<Axis> = Vec::with_capacity(model.dim());
        for (j, var) in model.variables().iter().enumerate() {
            let (lo, hi) = match var.covariate {
                None => {
                    let d = var.dist.resolve(f64::NAN)?;
                    (d.quantile(tail)?, d.isf(tail)?)
                }
                Some(c) => conditional_range(&var.dist, &axes[c], ranges[c], tail)?,
            };
            ranges.push((lo, hi));
            let step = steps[j];
            if !(step > 0.0 && step.is_finite()) {
                return Err(Error::domain(format!(
                    "cell length must be positive, got {step}"
                )));
            }
            let lower = ((lo / step).floor() - AUTO_PAD_CELLS) * step;
            let upper = ((hi / step).ceil() + AUTO_PAD_CELLS) * step;
            axes.push(Axis::new(lower, upper, step)?);
        }
        Self::new(axes)
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::cells).collect()
    }

    /// Total number of cells, or `None` on overflow.
    pub fn cell_count(&self) -> Option<u64> {
        self.axes
            .iter()
            .try_fold(1u64, |acc, a| acc.checked_mul(a.cells as u64))
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Axis::step).product()
    }

    pub fn center(&self, index: &[usize]) -> Vec<f64> {
        self.axes
            .iter()
            .zip(index)
            .map(|(a, &k)| a.center(k))
            .collect()
    }

    /// Index of the cell containing `x`, if any.
    pub fn locate(&self, x: &[f64]) -> Option<Vec<usize>> {
        self.axes
            .iter()
            .zip(x)
            .map(|(a, &xj)| {
                let k = ((xj - a.lower) / a.step).floor();
                (k >= 0.0 && k < a.cells as f64).then_some(k as usize)
            })
            .collect()
    }
}

fn conditional_range(
    spec: &DistSpec,
    covariate: &Axis,
    (cov_lo, cov_hi): (f64, f64),
    tail: f64,
) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..covariate.cells() {
        let h = covariate.center(k);
        if h < cov_lo - covariate.step() || h > cov_hi + covariate.step() {
            continue;
        }
        let d = match spec.resolve(h) {
            Ok(d) => d,
            Err(Error::ParameterDomain { .. }) => continue,
            Err(e) => return Err(e),
        };
        lo = lo.min(d.quantile(tail)?);
        hi = hi.max(d.isf(tail)?);
    }
    if lo < hi {
        Ok((lo, hi))
    } else {
        Err(Error::domain(
            "conditional distribution is invalid over the whole covariate range",
        ))
    }
}

/// Cell averages `(F(edge_{k+1}) - F(edge_k)) / step` of `dist` along `axis`.
///
/// Cells in the upper half of the distribution difference the survival
/// function instead, which avoids cancellation near F = 1.
pub fn cell_avg_marginal(dist: &impl Univariate, axis: &Axis) -> Vec<f64> {
    let mut out = vec![0.0; axis.cells()];
    fill_cell_avg(dist, axis, &mut out);
    out
}

fn fill_cell_avg(dist: &impl Univariate, axis: &Axis, out: &mut [f64]) {
    let inv_step = 1.0 / axis.step();
    let mut cdf_left = dist.cdf(axis.edge(0));
    let mut sf_left = dist.sf(axis.edge(0));
    for (k, slot) in out.iter_mut().enumerate() {
        let right = axis.edge(k + 1);
        let cdf_right = dist.cdf(right);
        let sf_right = dist.sf(right);
        let mass = if cdf_right <= 0.5 {
            cdf_right - cdf_left
        } else {
            sf_left - sf_right
        };
        *slot = mass.max(0.0) * inv_step;
        cdf_left = cdf_right;
        sf_left = sf_right;
    }
}

/// Conditional cell averages along `axis`, one row per covariate cell with
/// the covariate frozen at the cell center.
pub fn cell_avg_conditional(
    spec: &DistSpec,
    covariate: &Axis,
    axis: &Axis,
) -> Result<Vec<Vec<f64>>> {
    (0..covariate.cells())
        .map(|k| {
            let d = spec.resolve(covariate.center(k))?;
            Ok(cell_avg_marginal(&d, axis))
        })
        .collect()
}

/// Cell-averaged joint density over a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl CellField {
    /// Wraps precomputed values laid out row-major (last axis fastest).
    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        let expected = grid.cell_count().unwrap_or(u64::MAX);
        if values.len() as u64 != expected {
            return Err(Error::Shape {
                expected: expected as usize,
                got: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::domain(format!(
                "cell value {bad} is not a finite nonnegative density"
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn shape(&self) -> Vec<usize> {
        self.grid.shape()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cell_volume(&self) -> f64 {
        self.grid.cell_volume()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.values[ravel(&self.shape(), index)]
    }

    /// Probability mass of the whole grid.
    pub fn total_mass(&self) -> f64 {
        let mut sum = CompensatedSum::default();
        for &v in &self.values {
            sum.add(v);
        }
        sum.total() * self.cell_volume()
    }
}

pub(crate) fn strides(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for j in (0..shape.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * shape[j + 1];
    }
    strides
}

pub fn ravel(shape: &[usize], index: &[usize]) -> usize {
    strides(shape).iter().zip(index).map(|(s, i)| s * i).sum()
}

pub fn unravel(shape: &[usize], mut flat: usize) -> Vec<usize> {
    let mut index = vec![0; shape.len()];
    for j in (0..shape.len()).rev() {
        index[j] = flat % shape[j];
        flat /= shape[j];
    }
    index
}

/// Neumaier summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

pub fn build_cell_field(model: &JointModel, grid: &GridSpec) -> Result<CellField> {
    build_cell_field_with_cap(model, grid, DEFAULT_MEMORY_CAP)
}

/// Builds the field, refusing grids whose estimated footprint exceeds
/// `cap_bytes` before allocating anything.
pub fn build_cell_field_with_cap(
    model: &JointModel,
    grid: &GridSpec,
    cap_bytes: u64,
) -> Result<CellField> {
    check_dims(model, grid)?;
    let needed = memory_estimate(model, grid);
    if needed > cap_bytes {
        return Err(Error::Resource {
            needed,
            cap: cap_bytes,
        });
    }
    if grid.dim() == 2 {
        build_2d(model, grid)
    } else {
        build_general(model, grid)
    }
}

fn check_dims(model: &JointModel, grid: &GridSpec) -> Result<()> {
    if model.dim() != grid.dim() {
        return Err(Error::Shape {
            expected: model.dim(),
            got: grid.dim(),
        });
    }
    Ok(())
}

/// Estimated bytes for the field, its mask and labels, and factor tables.
pub fn memory_estimate(model: &JointModel, grid: &GridSpec) -> u64 {
    let cells = grid
        .cell_count()
        .and_then(|n| n.checked_mul(BYTES_PER_CELL))
        .unwrap_or(u64::MAX);
    let tables: u64 = model
        .variables()
        .iter()
        .zip(grid.axes())
        .map(|(v, a)| {
            let rows = v.covariate.map_or(1, |c| grid.axes()[c].cells()) as u64;
            rows.saturating_mul(a.cells() as u64).saturating_mul(8)
        })
        .fold(0u64, u64::saturating_add);
    cells.saturating_add(tables)
}

fn covariate_error(model: &JointModel, j: usize, h: f64, source: Error) -> Error {
    Error::Numeric {
        what: "cell field",
        detail: format!(
            "conditional of {} cannot be resolved at covariate {h}: {source}",
            model.variables()[j].name
        ),
    }
}

/// Specialized two-dimensional construction, parallel over rows of the
/// first axis.
pub fn build_2d(model: &JointModel, grid: &GridSpec) -> Result<CellField> {
    check_dims(model, grid)?;
    if grid.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            what: "build_2d",
            supported: 2,
            got: grid.dim(),
        });
    }
    let (a0, a1) = (grid.axes()[0], grid.axes()[1]);
    let marginal = cell_avg_marginal(&model.conditional(0, &[])?, &a0);
    let var = &model.variables()[1];
    let fixed = match var.covariate {
        None => Some(cell_avg_marginal(&var.dist.resolve(f64::NAN)?, &a1)),
        Some(_) => None,
    };
    let mut values = vec![0.0; a0.cells() * a1.cells()];
    values
        .par_chunks_mut(a1.cells())
        .enumerate()
        .try_for_each(|(k, row)| -> Result<()> {
            let m = marginal[k];
            if m == 0.0 {
                return Ok(());
            }
            match &fixed {
                Some(g) => row.copy_from_slice(g),
                None => {
                    let h = a0.center(k);
                    let d = var
                        .dist
                        .resolve(h)
                        .map_err(|e| covariate_error(model, 1, h, e))?;
                    fill_cell_avg(&d, &a1, row);
                }
            }
            for v in row.iter_mut() {
                *v *= m;
            }
            Ok(())
        })?;
    Ok(CellField {
        grid: grid.clone(),
        values,
    })
}

/// General p-dimensional construction from per-dimension factor tables.
pub fn build_general(model: &JointModel, grid: &GridSpec) -> Result<CellField> {
    check_dims(model, grid)?;
    let axes = grid.axes();
    let shape = grid.shape();
    // tables[j] holds one row of K_j cell averages per covariate cell (or a
    // single row); rows whose parameters are invalid are NaN.
    let tables: Vec<Vec<f64>> = model
        .variables()
        .iter()
        .zip(axes)
        .map(|(var, axis)| -> Result<Vec<f64>> {
            Ok(match var.covariate {
                None => cell_avg_marginal(&var.dist.resolve(f64::NAN)?, axis),
                Some(c) => {
                    let cov = &axes[c];
                    let mut table = vec![0.0; cov.cells() * axis.cells()];
                    table
                        .par_chunks_mut(axis.cells())
                        .enumerate()
                        .for_each(|(k, row)| match var.dist.resolve(cov.center(k)) {
                            Ok(d) => fill_cell_avg(&d, axis, row),
                            Err(_) => row.fill(f64::NAN),
                        });
                    table
                }
            })
        })
        .collect::<Result<_>>()?;

    let slab: usize = shape[1..].iter().product();
    let mut values = vec![0.0; grid.cell_count().unwrap_or(0) as usize];
    values
        .par_chunks_mut(slab)
        .enumerate()
        .try_for_each(|(k0, chunk)| -> Result<()> {
            let mut index = vec![0usize; shape.len()];
            index[0] = k0;
            for slot in chunk.iter_mut() {
                let mut v = tables[0][k0];
                for j in 1..shape.len() {
                    if v == 0.0 {
                        break;
                    }
                    let var = &model.variables()[j];
                    let row = var.covariate.map_or(0, |c| index[c]);
                    let t = tables[j][row * shape[j] + index[j]];
                    if t.is_nan() {
                        let c = var.covariate.unwrap_or(0);
                        let h = axes[c].center(index[c]);
                        let source = var.dist.resolve(h).err().unwrap_or(Error::domain("NaN"));
                        return Err(covariate_error(model, j, h, source));
                    }
                    v *= t;
                }
                *slot = v;
                // odometer over axes 1..p
                for j in (1..shape.len()).rev() {
                    index[j] += 1;
                    if index[j] < shape[j] {
                        break;
                    }
                    index[j] = 0;
                }
            }
            Ok(())
        })?;
    Ok(CellField {
        grid: grid.clone(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{ParamFn, Weibull3};
    use crate::model::Variable;
    use approx::assert_relative_eq;

    #[test]
    fn axis_cell_count() {
        let a = Axis::new(0.0, 20.0, 0.05).unwrap();
        assert_eq!(a.cells(), 400);
        assert_relative_eq!(a.center(0), 0.025);
        assert_eq!(Axis::new(0.0, 1.0, 0.6).unwrap().cells(), 2);
        assert!(Axis::new(0.0, 1.0, 1.0).is_err());
        assert!(Axis::new(0.0, 1.0, 0.0).is_err());
        assert!(Axis::new(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn uniform_segment_inside_one_cell() {
        // Uniform density 1/0.02 on [1.01, 1.03], entirely inside cell [1.0, 1.05).
        struct Uniform;
        impl Univariate for Uniform {
            fn pdf(&self, x: f64) -> f64 {
                if (1.01..1.03).contains(&x) {
                    50.0
                } else {
                    0.0
                }
            }
            fn cdf(&self, x: f64) -> f64 {
                ((x - 1.01) * 50.0).clamp(0.0, 1.0)
            }
            fn sf(&self, x: f64) -> f64 {
                1.0 - self.cdf(x)
            }
            fn quantile(&self, q: f64) -> Result<f64> {
                Ok(1.01 + q / 50.0)
            }
            fn isf(&self, p: f64) -> Result<f64> {
                Ok(1.03 - p / 50.0)
            }
            fn support(&self) -> (f64, f64) {
                (1.01, 1.03)
            }
        }
        let axis = Axis::new(0.0, 2.0, 0.05).unwrap();
        let f = cell_avg_marginal(&Uniform, &axis);
        assert_relative_eq!(f[20], 1.0 / 0.05, max_relative = 1e-12);
        assert_eq!(f.iter().filter(|&&v| v > 0.0).count(), 1);
    }

    #[test]
    fn marginal_cell_average_matches_oracle() {
        let w = Weibull3::new(2.776, 1.471, 0.8888).unwrap();
        let axis = Axis::new(0.025, 25.025, 0.05).unwrap();
        let f = cell_avg_marginal(&w, &axis);
        // cell [2.975, 3.025); oracles/oracles.py: cellavg_marginal_3
        assert_relative_eq!(axis.center(59), 3.0, max_relative = 1e-12);
        assert_relative_eq!(f[59], 0.238_701_839_565_382_5, max_relative = 1e-9);
        let mass: f64 = f.iter().sum::<f64>() * 0.05;
        assert!((mass - 1.0).abs() < 1e-8, "{mass}");
    }

    #[test]
    fn conditional_rows_identical_without_covariate_dependence() {
        let spec = DistSpec::Normal {
            mean: 5.0.into(),
            sd: 1.0.into(),
        };
        let cov = Axis::new(0.0, 1.0, 0.1).unwrap();
        let axis = Axis::new(-5.0, 15.0, 0.1).unwrap();
        let rows = cell_avg_conditional(&spec, &cov, &axis).unwrap();
        assert!(rows.windows(2).all(|w| w[0] == w[1]));
        for row in &rows {
            let mass: f64 = row.iter().sum::<f64>() * 0.1;
            assert!((mass - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn conditional_cell_average_matches_oracle() {
        let model = JointModel::vanem2012();
        let spec = &model.variables()[1].dist;
        let cov = Axis::new(0.0, 20.0, 0.05).unwrap();
        let axis = Axis::new(0.0, 20.0, 0.05).unwrap();
        let rows = cell_avg_conditional(spec, &cov, &axis).unwrap();
        // covariate cell centered at 3.025, Tz cell [8.0, 8.05)
        // oracles/oracles.py: cellavg_cond_h3025_t8025
        assert_relative_eq!(rows[60][160], 0.205_066_674_707_446_56, max_relative = 1e-9);
        for row in &rows[20..] {
            let mass: f64 = row.iter().sum::<f64>() * 0.05;
            assert!((mass - 1.0).abs() < 1e-8, "{mass}");
        }
    }

    #[test]
    fn one_dimensional_field_is_marginal() {
        let spec = DistSpec::Weibull {
            scale: 2.0.into(),
            shape: 1.5.into(),
            location: 0.0.into(),
        };
        let model = JointModel::new(vec![Variable::new("x", "-", spec.clone())]).unwrap();
        let grid = GridSpec::from_bounds(&[(0.0, 15.0, 0.1)]).unwrap();
        let field = build_cell_field(&model, &grid).unwrap();
        let direct = cell_avg_marginal(&spec.resolve(0.0).unwrap(), &grid.axes()[0]);
        assert_eq!(field.values(), &direct[..]);
    }

    #[test]
    fn sea_state_mass_balance() {
        let model = JointModel::vanem2012();
        let grid = GridSpec::from_bounds(&[(0.0, 20.0, 0.05), (0.0, 20.0, 0.05)]).unwrap();
        let field = build_cell_field(&model, &grid).unwrap();
        let mass = field.total_mass();
        assert!((0.9999..=1.0 + 1e-9).contains(&mass), "{mass}");
    }

    #[test]
    fn general_and_2d_paths_agree() {
        let model = JointModel::vanem2012();
        let grid = GridSpec::auto(&model, 1e-3, &[0.1, 0.1]).unwrap();
        let a = build_2d(&model, &grid).unwrap();
        let b = build_general(&model, &grid).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn three_dimensional_product_structure() {
        let model = JointModel::new(vec![
            Variable::new(
                "a",
                "m",
                DistSpec::Weibull {
                    scale: 2.0.into(),
                    shape: 1.5.into(),
                    location: 0.5.into(),
                },
            ),
            Variable::new(
                "b",
                "s",
                DistSpec::LogNormal {
                    mu: ParamFn::PowerLaw {
                        a1: 0.1,
                        a2: 1.0,
                        a3: 0.5,
                    },
                    sigma: 0.2.into(),
                },
            )
            .given(0),
            Variable::new(
                "c",
                "-",
                DistSpec::Normal {
                    mean: ParamFn::PowerLaw {
                        a1: 0.0,
                        a2: 2.0,
                        a3: 1.0,
                    },
                    sd: 1.0.into(),
                },
            )
            .given(0),
        ])
        .unwrap();
        let grid =
            GridSpec::from_bounds(&[(0.0, 5.0, 0.5), (0.0, 10.0, 1.0), (-2.0, 8.0, 1.0)]).unwrap();
        let field = build_cell_field(&model, &grid).unwrap();
        assert_eq!(field.shape(), vec![10, 10, 10]);
        let axes = grid.axes();
        for i in 0..10 {
            let h = axes[0].center(i);
            let fa = cell_avg_marginal(&model.conditional(0, &[]).unwrap(), &axes[0])[i];
            let b = cell_avg_marginal(&model.conditional(1, &[h]).unwrap(), &axes[1]);
            let c = cell_avg_marginal(&model.conditional(2, &[h, 0.0]).unwrap(), &axes[2]);
            for j in 0..10 {
                for k in 0..10 {
                    let want = fa * b[j] * c[k];
                    let got = field.get(&[i, j, k]);
                    assert!((got - want).abs() <= 1e-15 * want.abs(), "{i} {j} {k}");
                }
            }
        }
    }

    #[test]
    fn memory_cap_is_enforced_before_allocation() {
        let model = JointModel::vanem2012();
        let grid = GridSpec::from_bounds(&[(0.0, 20.0, 0.05), (0.0, 20.0, 0.05)]).unwrap();
        match build_cell_field_with_cap(&model, &grid, 1024) {
            Err(Error::Resource { cap: 1024, .. }) => {}
            other => panic!("expected resource error, got {other:?}"),
        }
        let spec = DistSpec::Normal {
            mean: 0.0.into(),
            sd: 1.0.into(),
        };
        let vars = (0..5)
            .map(|i| Variable::new(format!("x{i}"), "-", spec.clone()))
            .collect();
        let big = JointModel::new(vars).unwrap();
        let grid = GridSpec::from_bounds(&[(-6.0, 6.0, 0.05); 5]).unwrap();
        assert!(matches!(
            build_cell_field(&big, &grid),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn auto_grid_covers_tails() {
        let model = JointModel::vanem2012();
        let alpha = 1.0 / 73050.0;
        let grid = GridSpec::auto(&model, alpha, &[0.05, 0.05]).unwrap();
        let field = build_cell_field(&model, &grid).unwrap();
        assert!(1.0 - field.total_mass() < alpha / 10.0);
        let hs = grid.axes()[0];
        assert!(hs.lower() <= 0.8888 && hs.upper() >= 15.23);
    }

    #[test]
    fn ravel_unravel() {
        let shape = [3, 4, 5];
        for flat in 0..60 {
            assert_eq!(ravel(&shape, &unravel(&shape, flat)), flat);
        }
    }
}
