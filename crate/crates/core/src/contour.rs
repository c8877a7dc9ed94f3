//! Level-set extraction from a cell field.
//!
//! Two-dimensional fields get marching-squares polylines over the cell
//! centers, with linear interpolation along square edges. The field is
//! padded by a ring of zero-valued nodes, so every polyline is closed. Any
//! dimension also gets the boundary cells of the region `f̄ >= level` and
//! per-dimension extremes.

use std::collections::HashMap;

use crate::components::boundary_cells;
use crate::grid::{unravel, CellField};

/// Coordinate-wise minimum and maximum over a point set.
#[derive(Debug, Clone, PartialEq)]
pub struct Extremes {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl Extremes {
    pub fn of<'a, I>(points: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut ext = Extremes {
            min: first.to_vec(),
            max: first.to_vec(),
        };
        for p in it {
            for (j, &x) in p.iter().enumerate() {
                ext.min[j] = ext.min[j].min(x);
                ext.max[j] = ext.max[j].max(x);
            }
        }
        Some(ext)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourSet {
    pub level: f64,
    /// Closed polylines (first vertex repeated at the end); 2D fields only.
    pub polylines: Vec<Vec<[f64; 2]>>,
    /// Flat indices of boundary cells of the region `f̄ >= level`.
    pub boundary_cells: Vec<usize>,
    /// Extremes over the polyline vertices (2D only).
    pub vertex_extremes: Option<Extremes>,
    /// Extremes over the centers of the boundary cells.
    pub cell_extremes: Option<Extremes>,
}

impl ContourSet {
    /// True when no cell reaches the level.
    pub fn is_empty(&self) -> bool {
        self.boundary_cells.is_empty()
    }

    /// Vertex extremes when available, else boundary-cell extremes.
    pub fn extremes(&self) -> Option<&Extremes> {
        self.vertex_extremes
            .as_ref()
            .or(self.cell_extremes.as_ref())
    }
}

pub fn extract_contour(field: &CellField, level: f64) -> ContourSet {
    let shape = field.shape();
    let mask: Vec<bool> = field.values().iter().map(|&v| v >= level).collect();
    let boundary = boundary_cells(&mask, &shape);
    let centers: Vec<Vec<f64>> = boundary
        .iter()
        .map(|&c| field.grid().center(&unravel(&shape, c)))
        .collect();
    let cell_extremes = Extremes::of(centers.iter().map(Vec::as_slice));
    let polylines = if shape.len() == 2 && !boundary.is_empty() {
        marching_squares(field, level)
    } else {
        Vec::new()
    };
    let vertex_extremes = Extremes::of(polylines.iter().flatten().map(|p| &p[..]));
    ContourSet {
        level,
        polylines,
        boundary_cells: boundary,
        vertex_extremes,
        cell_extremes,
    }
}

/// A grid edge between two neighbouring nodes: along axis 0 from (i, j) to
/// (i+1, j), or along axis 1 from (i, j) to (i, j+1). Node indices are
/// shifted by one to make room for the padding ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct EdgeKey {
    axis: u8,
    i: usize,
    j: usize,
}

struct Padded<'a> {
    field: &'a CellField,
    k0: usize,
    k1: usize,
}

impl Padded<'_> {
    // Padded node (i, j) is cell (i - 1, j - 1); the outer ring reads as 0.
    fn value(&self, i: usize, j: usize) -> f64 {
        if i == 0 || j == 0 || i > self.k0 || j > self.k1 {
            0.0
        } else {
            self.field.values()[(i - 1) * self.k1 + (j - 1)]
        }
    }

    fn inside(&self, i: usize, j: usize, level: f64) -> bool {
        i >= 1 && j >= 1 && i <= self.k0 && j <= self.k1 && self.value(i, j) >= level
    }

    fn position(&self, i: usize, j: usize) -> [f64; 2] {
        let axes = self.field.grid().axes();
        [axes[0].node(i as isize - 1), axes[1].node(j as isize - 1)]
    }

    fn crossing(&self, e: EdgeKey, level: f64) -> [f64; 2] {
        let (a, b) = if e.axis == 0 {
            ((e.i, e.j), (e.i + 1, e.j))
        } else {
            ((e.i, e.j), (e.i, e.j + 1))
        };
        let va = self.value(a.0, a.1);
        let vb = self.value(b.0, b.1);
        let t = if va == vb {
            0.5
        } else {
            ((level - va) / (vb - va)).clamp(0.0, 1.0)
        };
        let pa = self.position(a.0, a.1);
        let pb = self.position(b.0, b.1);
        [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
    }
}

fn marching_squares(field: &CellField, level: f64) -> Vec<Vec<[f64; 2]>> {
    let shape = field.shape();
    let grid = Padded {
        field,
        k0: shape[0],
        k1: shape[1],
    };
    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    // Squares span padded nodes (i, j)..(i+1, j+1).
    for i in 0..=grid.k0 {
        for j in 0..=grid.k1 {
            let corners = [
                grid.inside(i, j, level),
                grid.inside(i + 1, j, level),
                grid.inside(i + 1, j + 1, level),
                grid.inside(i, j + 1, level),
            ];
            let case = corners
                .iter()
                .enumerate()
                .fold(0u8, |acc, (b, &c)| acc | ((c as u8) << b));
            if case == 0 || case == 15 {
                continue;
            }
            // e0: n0-n1, e1: n1-n2, e2: n3-n2, e3: n0-n3
            let e = [
                EdgeKey { axis: 0, i, j },
                EdgeKey {
                    axis: 1,
                    i: i + 1,
                    j,
                },
                EdgeKey {
                    axis: 0,
                    i,
                    j: j + 1,
                },
                EdgeKey { axis: 1, i, j },
            ];
            let center_inside = || {
                let avg = 0.25
                    * (grid.value(i, j)
                        + grid.value(i + 1, j)
                        + grid.value(i + 1, j + 1)
                        + grid.value(i, j + 1));
                avg >= level
            };
            match case {
                0b0101 => {
                    if center_inside() {
                        segments.push((e[0], e[1]));
                        segments.push((e[2], e[3]));
                    } else {
                        segments.push((e[3], e[0]));
                        segments.push((e[1], e[2]));
                    }
                }
                0b1010 => {
                    if center_inside() {
                        segments.push((e[3], e[0]));
                        segments.push((e[1], e[2]));
                    } else {
                        segments.push((e[0], e[1]));
                        segments.push((e[2], e[3]));
                    }
                }
                _ => {
                    let crossed: Vec<EdgeKey> = (0..4)
                        .filter(|&k| {
                            let (a, b) = match k {
                                0 => (0, 1),
                                1 => (1, 2),
                                2 => (3, 2),
                                _ => (0, 3),
                            };
                            corners[a] != corners[b]
                        })
                        .map(|k| e[k])
                        .collect();
                    debug_assert_eq!(crossed.len(), 2);
                    segments.push((crossed[0], crossed[1]));
                }
            }
        }
    }
    stitch(&grid, &segments, level)
}

fn stitch(grid: &Padded<'_>, segments: &[(EdgeKey, EdgeKey)], level: f64) -> Vec<Vec<[f64; 2]>> {
    let mut incident: HashMap<EdgeKey, Vec<usize>> = HashMap::with_capacity(segments.len() * 2);
    for (s, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(s);
        incident.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (first, mut current) = segments[start];
        let mut line = vec![grid.crossing(first, level), grid.crossing(current, level)];
        let mut last = start;
        while current != first {
            let next = incident[&current]
                .iter()
                .copied()
                .find(|&s| s != last && !used[s]);
            let Some(next) = next else { break };
            used[next] = true;
            let (a, b) = segments[next];
            current = if a == current { b } else { a };
            line.push(grid.crossing(current, level));
            last = next;
        }
        polylines.push(line);
    }
    polylines
}
