//! Monte Carlo halfspace contours.
//!
//! For each direction the supporting line is placed at the empirical
//! `1 - alpha` quantile of the sample projections. The contour is the
//! boundary of the intersection of the halfspaces below those lines, so it
//! is always convex.
//!
//! Quantile rule: with `m = floor(alpha * n)` exceedances, the offset is
//! the `(m + 1)`-th largest projection. Without ties exactly `m` samples lie
//! strictly beyond it.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::contour::Extremes;
use crate::error::{Error, Result};

pub const DEFAULT_DIRECTIONS: usize = 360;

#[derive(Debug, Clone, PartialEq)]
pub struct McContour {
    pub n: usize,
    pub alpha: f64,
    /// Number of samples allowed beyond each supporting line.
    pub exceedances: usize,
    /// Direction angles in radians, uniform on [0, 2π).
    pub angles: Vec<f64>,
    pub offsets: Vec<f64>,
    /// Counter-clockwise vertices of the halfspace intersection.
    pub vertices: Vec<[f64; 2]>,
    pub extremes: Extremes,
}

impl McContour {
    pub fn closed(&self) -> Vec<[f64; 2]> {
        let mut v = self.vertices.clone();
        if let Some(&first) = self.vertices.first() {
            v.push(first);
        }
        v
    }

    /// Largest violation of any halfspace constraint by any vertex.
    pub fn max_violation(&self) -> f64 {
        self.vertices
            .iter()
            .flat_map(|v| {
                self.angles
                    .iter()
                    .zip(&self.offsets)
                    .map(move |(&t, &c)| v[0] * t.cos() + v[1] * t.sin() - c)
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, Copy)]
struct Ordered(f64);

impl PartialEq for Ordered {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for Ordered {}

impl PartialOrd for Ordered {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordered {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// The `(m + 1)`-th largest value of `values`.
fn upper_order_statistic(values: impl Iterator<Item = f64>, m: usize) -> f64 {
    let keep = m + 1;
    let mut heap: BinaryHeap<Reverse<Ordered>> = BinaryHeap::with_capacity(keep + 1);
    for v in values {
        if heap.len() < keep {
            heap.push(Reverse(Ordered(v)));
        } else if let Some(&Reverse(Ordered(smallest))) = heap.peek() {
            if v > smallest {
                heap.pop();
                heap.push(Reverse(Ordered(v)));
            }
        }
    }
    heap.peek().map(|r| r.0 .0).unwrap_or(f64::NAN)
}

pub fn mc_contour(samples: &[[f64; 2]], alpha: f64, n_directions: usize) -> Result<McContour> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::domain(
            "Monte Carlo contour needs at least one sample",
        ));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha = {alpha} is outside (0, 1)")));
    }
    if n_directions < 3 {
        return Err(Error::domain(format!(
            "need at least 3 directions, got {n_directions}"
        )));
    }
    let expected = alpha * n as f64;
    let m = expected.floor() as usize;
    if m < 1 {
        return Err(Error::InsufficientSamples {
            expected,
            recommended: (1.0 / alpha).ceil() as usize,
        });
    }
    if m >= n {
        return Err(Error::domain(format!(
            "alpha * n = {expected} leaves no samples inside the contour"
        )));
    }
    let angles: Vec<f64> = (0..n_directions)
        .map(|i| 2.0 * PI * i as f64 / n_directions as f64)
        .collect();
    let offsets: Vec<f64> = angles
        .par_iter()
        .map(|&t| {
            let (s, c) = t.sin_cos();
            upper_order_statistic(samples.iter().map(|p| p[0] * c + p[1] * s), m)
        })
        .collect();
    if let Some(bad) = offsets.iter().find(|o| !o.is_finite()) {
        return Err(Error::Numeric {
            what: "Monte Carlo contour",
            detail: format!("non-finite halfspace offset {bad}"),
        });
    }
    let vertices = intersect_halfplanes(&angles, &offsets);
    let extremes = Extremes::of(vertices.iter().map(|p| &p[..])).ok_or_else(|| Error::Numeric {
        what: "Monte Carlo contour",
        detail: "halfspace intersection is empty".into(),
    })?;
    Ok(McContour {
        n,
        alpha,
        exceedances: m,
        angles,
        offsets,
        vertices,
        extremes,
    })
}

/// Intersection of `{x : x · (cos θ_i, sin θ_i) <= c_i}` by successive
/// clipping of a bounding square.
pub fn intersect_halfplanes(angles: &[f64], offsets: &[f64]) -> Vec<[f64; 2]> {
    let reach = offsets.iter().fold(1.0f64, |r, c| r.max(c.abs()));
    // Uniform directions at least 120° apart bound the region within 2 * reach.
    let r = 4.0 * reach;
    let mut poly = vec![[-r, -r], [r, -r], [r, r], [-r, r]];
    for (&t, &c) in angles.iter().zip(offsets) {
        let (s, co) = t.sin_cos();
        poly = clip(&poly, [co, s], c);
        if poly.is_empty() {
            break;
        }
    }
    poly
}

// Sutherland–Hodgman against a single halfplane `x · normal <= offset`.
fn clip(poly: &[[f64; 2]], normal: [f64; 2], offset: f64) -> Vec<[f64; 2]> {
    let eval = |p: &[f64; 2]| p[0] * normal[0] + p[1] * normal[1] - offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let (da, db) = (eval(&a), eval(&b));
        if da <= 0.0 {
            out.push(a);
        }
        if (da <= 0.0) != (db <= 0.0) {
            let t = da / (da - db);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out.dedup_by(|a, b| {
        (a[0] - b[0]).abs() <= 1e-12 * (1.0 + b[0].abs())
            && (a[1] - b[1]).abs() <= 1e-12 * (1.0 + b[1].abs())
    });
    while out.len() > 1 && {
        let (f, l) = (out[0], out[out.len() - 1]);
        (f[0] - l[0]).abs() <= 1e-12 * (1.0 + f[0].abs())
            && (f[1] - l[1]).abs() <= 1e-12 * (1.0 + f[1].abs())
    } {
        out.pop();
    }
    out
}

/// True when every turn along the closed polygon has the same orientation.
pub fn is_convex(poly: &[[f64; 2]]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let scale = poly
        .iter()
        .fold(1.0f64, |s, p| s.max(p[0].abs()).max(p[1].abs()));
    let tol = 1e-9 * scale * scale;
    let mut sign = 0.0;
    for i in 0..n {
        let (a, b, c) = (poly[i], poly[(i + 1) % n], poly[(i + 2) % n]);
        let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        if cross.abs() <= tol {
            continue;
        }
        if sign == 0.0 {
            sign = cross.signum();
        } else if cross.signum() != sign {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_symmetric_points() {
        let samples = [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]];
        let c = mc_contour(&samples, 0.25, 4).unwrap();
        assert_eq!(c.exceedances, 1);
        for o in &c.offsets {
            assert!((o - 1.0).abs() < 1e-15, "{o}");
        }
        assert_eq!(c.vertices.len(), 4);
        assert!(is_convex(&c.vertices));
        assert!((c.extremes.max[0] - 1.0).abs() < 1e-12);
        assert!((c.extremes.min[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_samples() {
        let samples = vec![[0.0, 0.0]; 10];
        match mc_contour(&samples, 0.05, 8) {
            Err(Error::InsufficientSamples {
                recommended: 20, ..
            }) => {}
            other => panic!("expected insufficient samples, got {other:?}"),
        }
        assert!(mc_contour(&[], 0.1, 8).is_err());
        assert!(mc_contour(&samples, 0.5, 2).is_err());
    }

    #[test]
    fn order_statistic() {
        let v = [5.0, 1.0, 4.0, 2.0, 3.0];
        assert_eq!(upper_order_statistic(v.iter().copied(), 0), 5.0);
        assert_eq!(upper_order_statistic(v.iter().copied(), 1), 4.0);
        assert_eq!(upper_order_statistic(v.iter().copied(), 4), 1.0);
    }

    #[test]
    fn regular_polygon_from_equal_offsets() {
        let n = 12;
        let angles: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        let poly = intersect_halfplanes(&angles, &vec![1.0; n]);
        assert_eq!(poly.len(), n);
        assert!(is_convex(&poly));
        let r = 1.0 / (PI / n as f64).cos();
        for p in &poly {
            assert!(((p[0] * p[0] + p[1] * p[1]).sqrt() - r).abs() < 1e-12);
        }
    }
}
