//! Runs a configuration and writes plot-ready files.
//!
//! Vertex files are comma separated, one vertex per line, columns in model
//! order. Each closed polyline repeats its first vertex and polylines are
//! separated by a blank line. Every file starts with a `#` line carrying
//! the tool version and the SHA-256 of the canonical configuration.
//! Metadata and mask summaries are JSON with sorted keys.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::{Method, RunConfig};
use crate::contour::Extremes;
use crate::error::{Error, Result};
use crate::grid::{build_cell_field_with_cap, GridSpec, DEFAULT_MEMORY_CAP};
use crate::hdc::{grid_convergence_study, solve_fm};
use crate::huseby::mc_contour;
use crate::iform::{equivalent_return_period, iform_contour, ContourMode};
use crate::model::{JointModel, ReturnSpec};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Files written by a run and one summary line per result.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

struct Writer<'a> {
    config: &'a RunConfig,
    model: &'a JointModel,
    dir: PathBuf,
    hash: String,
    report: RunReport,
}

/// Executes the configured method and writes its outputs to
/// `config.output_dir`.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let model = config.model()?;
    let dir = PathBuf::from(&config.output_dir);
    fs::create_dir_all(&dir)?;
    let mut w = Writer {
        config,
        model: &model,
        dir,
        hash: config.hash(),
        report: RunReport::default(),
    };
    match config.method {
        Method::Sample => w.sample()?,
        method => {
            for &years in &config.return_periods {
                let ret = ReturnSpec::new(years, config.state_duration_hours)?;
                match method {
                    Method::Hdc => w.hdc(&ret)?,
                    Method::Iform => w.iform(&ret, ContourMode::Iform)?,
                    Method::Equishape => w.iform(&ret, ContourMode::EquiShape)?,
                    Method::Mc => w.mc(&ret)?,
                    Method::GridStudy => w.grid_study(&ret)?,
                    Method::Sample => unreachable!(),
                }
            }
        }
    }
    Ok(w.report)
}

/// `25` for whole years, `0.5` otherwise; used in file names.
fn period_label(years: f64) -> String {
    format!("T{years}")
}

fn extremes_json(e: Option<&Extremes>) -> Value {
    match e {
        Some(e) => json!({ "min": e.min, "max": e.max }),
        None => Value::Null,
    }
}

fn grid_json(grid: &GridSpec) -> Value {
    let axes: Vec<Value> = grid
        .axes()
        .iter()
        .map(|a| {
            json!({
                "lower": a.lower(),
                "upper": a.upper(),
                "cell_size": a.step(),
                "cells": a.cells(),
            })
        })
        .collect();
    json!({ "axes": axes, "cell_count": grid.cell_count() })
}

/// Run-length encoding of a row-major mask, starting with a run of
/// excluded cells (possibly of length 0).
fn run_lengths(mask: &[bool]) -> Vec<usize> {
    let mut runs = Vec::new();
    let mut current = false;
    let mut len = 0;
    for &m in mask {
        if m == current {
            len += 1;
        } else {
            runs.push(len);
            current = m;
            len = 1;
        }
    }
    runs.push(len);
    runs
}

impl Writer<'_> {
    fn header(&self) -> String {
        format!("# {TOOL} {VERSION} config_sha256={}\n", self.hash)
    }

    fn column_header(&self) -> String {
        let cols: Vec<String> = self
            .model
            .variables()
            .iter()
            .map(|v| {
                if v.units.is_empty() {
                    v.name.clone()
                } else {
                    format!("{} [{}]", v.name, v.units)
                }
            })
            .collect();
        cols.join(",") + "\n"
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        let mut f = fs::File::create(&path)?;
        f.write_all(contents.as_bytes())?;
        self.report.files.push(path);
        Ok(())
    }

    fn write_json(&mut self, name: &str, mut value: Value) -> Result<()> {
        if let Value::Object(map) = &mut value {
            map.insert("tool".into(), json!(TOOL));
            map.insert("version".into(), json!(VERSION));
            map.insert("config_sha256".into(), json!(self.hash));
            map.insert("method".into(), json!(self.config.method.as_str()));
            map.insert("seed".into(), json!(self.config.seed));
        }
        let mut text = serde_json::to_string_pretty(&value).expect("json serializes");
        text.push('\n');
        self.write(name, &text)
    }

    fn polylines_text<'p>(&self, lines: impl IntoIterator<Item = &'p [[f64; 2]]>) -> String {
        let mut out = self.header() + &self.column_header();
        for (k, line) in lines.into_iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            for p in line {
                out.push_str(&format!("{},{}\n", p[0], p[1]));
            }
        }
        out
    }

    fn variables_json(&self) -> Value {
        Value::Array(
            self.model
                .variables()
                .iter()
                .map(|v| json!({ "name": v.name, "units": v.units }))
                .collect(),
        )
    }

    fn return_json(ret: &ReturnSpec) -> Value {
        json!({
            "return_period_years": ret.return_period_years,
            "state_duration_hours": ret.state_duration_hours,
            "alpha": ret.alpha,
        })
    }

    fn hdc(&mut self, ret: &ReturnSpec) -> Result<()> {
        let label = period_label(ret.return_period_years);
        let grid = self.config.grid_spec(self.model, ret.alpha)?;
        let cap = self
            .config
            .grid
            .memory_cap_bytes
            .unwrap_or(DEFAULT_MEMORY_CAP);
        let field = build_cell_field_with_cap(self.model, &grid, cap)?;
        let result = solve_fm(&field, ret.alpha)?;

        let contour_name = format!("hdc_{label}.csv");
        let text = if self.model.dim() == 2 {
            self.polylines_text(result.contour.polylines.iter().map(Vec::as_slice))
        } else {
            // Boundary cell centers for p != 2.
            let shape = field.shape();
            let mut out = self.header() + &self.column_header();
            for &c in &result.contour.boundary_cells {
                let center = grid.center(&crate::grid::unravel(&shape, c));
                let cols: Vec<String> = center.iter().map(|x| x.to_string()).collect();
                out.push_str(&cols.join(","));
                out.push('\n');
            }
            out
        };
        self.write(&contour_name, &text)?;

        let mask_name = format!("hdc_{label}_mask.json");
        self.write_json(
            &mask_name,
            json!({
                "shape": field.shape(),
                "order": "row-major",
                "cells_in_region": result.cells_in_region(),
                "component_count": result.component_count(),
                "component_sizes": result.components.sizes(),
                "boundary_cells": result.contour.boundary_cells.len(),
                "runs": run_lengths(&result.mask),
            }),
        )?;

        let ext = result.contour.extremes();
        self.write_json(
            &format!("hdc_{label}_meta.json"),
            json!({
                "return": Self::return_json(ret),
                "f_m": result.f_m,
                "enclosed_probability": result.enclosed,
                "grid_mass": field.total_mass(),
                "iterations": result.iterations,
                "component_count": result.component_count(),
                "polyline_count": result.contour.polylines.len(),
                "grid": grid_json(&grid),
                "variables": self.variables_json(),
                "extremes": extremes_json(ext),
                "vertex_extremes": extremes_json(result.contour.vertex_extremes.as_ref()),
                "cell_extremes": extremes_json(result.contour.cell_extremes.as_ref()),
                "files": { "contour": contour_name, "mask": mask_name },
            }),
        )?;
        let max = ext
            .map(|e| format!("{:?}", e.max))
            .unwrap_or_else(|| "none".into());
        self.report.summary.push(format!(
            "hdc T={} alpha={:.4e} f_m={:.4e} enclosed={:.8} components={} max={max}",
            ret.return_period_years,
            ret.alpha,
            result.f_m,
            result.enclosed,
            result.component_count()
        ));
        Ok(())
    }

    fn iform(&mut self, ret: &ReturnSpec, mode: ContourMode) -> Result<()> {
        let prefix = match mode {
            ContourMode::Iform => "iform",
            ContourMode::EquiShape => "equishape",
        };
        let label = period_label(ret.return_period_years);
        let c = iform_contour(self.model, ret.alpha, self.config.iform.n_points, mode)?;
        let contour_name = format!("{prefix}_{label}.csv");
        let closed = c.closed();
        let text = self.polylines_text([closed.as_slice()]);
        self.write(&contour_name, &text)?;
        let equivalent = equivalent_return_period(c.beta, ret.state_duration_hours);
        self.write_json(
            &format!("{prefix}_{label}_meta.json"),
            json!({
                "return": Self::return_json(ret),
                "beta": c.beta,
                "equivalent_iform_return_period_years": equivalent,
                "n_points": c.angles.len(),
                "variables": self.variables_json(),
                "extremes": extremes_json(Some(&c.extremes)),
                "files": { "contour": contour_name },
            }),
        )?;
        self.report.summary.push(format!(
            "{prefix} T={} beta={:.6} equivalent_T={:.2} max={:?}",
            ret.return_period_years, c.beta, equivalent, c.extremes.max
        ));
        Ok(())
    }

    fn mc(&mut self, ret: &ReturnSpec) -> Result<()> {
        if self.model.dim() != 2 {
            return Err(Error::UnsupportedDimension {
                what: "Monte Carlo contour",
                supported: 2,
                got: self.model.dim(),
            });
        }
        let label = period_label(ret.return_period_years);
        let n = self.config.mc.n_samples;
        let samples: Vec<[f64; 2]> = self
            .model
            .sample(n, self.config.seed)?
            .into_iter()
            .map(|x| [x[0], x[1]])
            .collect();
        let c = mc_contour(&samples, ret.alpha, self.config.mc.n_directions)?;
        let contour_name = format!("mc_{label}.csv");
        let closed = c.closed();
        let text = self.polylines_text([closed.as_slice()]);
        self.write(&contour_name, &text)?;
        self.write_json(
            &format!("mc_{label}_meta.json"),
            json!({
                "return": Self::return_json(ret),
                "n_samples": n,
                "exceedances_per_direction": c.exceedances,
                "n_directions": c.angles.len(),
                "vertices": c.vertices.len(),
                "variables": self.variables_json(),
                "extremes": extremes_json(Some(&c.extremes)),
                "files": { "contour": contour_name },
            }),
        )?;
        self.report.summary.push(format!(
            "mc T={} n={n} exceedances={} max={:?}",
            ret.return_period_years, c.exceedances, c.extremes.max
        ));
        Ok(())
    }

    fn grid_study(&mut self, ret: &ReturnSpec) -> Result<()> {
        let label = period_label(ret.return_period_years);
        let rows =
            grid_convergence_study(self.model, ret.alpha, &self.config.grid_study.cell_lengths)?;
        let mut text = self.header();
        text.push_str("cell_length,f_m,f_m_star,error\n");
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &rows {
            let err = r.error.as_deref().unwrap_or("").replace(['"', '\n'], "'");
            let err = if err.is_empty() {
                err
            } else {
                format!("\"{err}\"")
            };
            text.push_str(&format!(
                "{},{},{},{err}\n",
                r.cell_length,
                opt(r.f_m),
                opt(r.f_m_star)
            ));
        }
        self.write(&format!("grid_study_{label}.csv"), &text)?;
        for r in &rows {
            self.report.summary.push(format!(
                "grid-study T={} length={} f_m={} f_m*={}",
                ret.return_period_years,
                r.cell_length,
                r.f_m
                    .map(|f| format!("{f:.4e}"))
                    .unwrap_or_else(|| "-".into()),
                r.f_m_star
                    .map(|f| format!("{f:.4}"))
                    .unwrap_or_else(|| "-".into()),
            ));
        }
        Ok(())
    }

    fn sample(&mut self) -> Result<()> {
        let count = self.config.sample_count;
        let mut text = self.header() + &self.column_header();
        let mut sampler = self.model.sampler(self.config.seed);
        for _ in 0..count {
            let x = sampler.draw()?;
            let cols: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            text.push_str(&cols.join(","));
            text.push('\n');
        }
        self.write("samples.csv", &text)?;
        self.report
            .summary
            .push(format!("sample n={count} seed={}", self.config.seed));
        Ok(())
    }
}

/// Reads the data rows of a vertex or sample file, skipping the comment
/// line and the column header. Blank lines separate polylines.
pub fn read_polylines(path: &Path) -> Result<Vec<Vec<Vec<f64>>>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    lines.next();
    let mut out: Vec<Vec<Vec<f64>>> = vec![Vec::new()];
    for l in lines {
        if l.trim().is_empty() {
            out.push(Vec::new());
            continue;
        }
        let row = l
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{l}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        out.last_mut().expect("nonempty").push(row);
    }
    out.retain(|p| !p.is_empty());
    Ok(out)
}
