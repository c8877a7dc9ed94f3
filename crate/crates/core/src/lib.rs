//! Environmental contours from joint probability models.
//!
//! The central method computes highest density contours: the joint density
//! is averaged over the cells of a regular grid, and the density level
//! `f_m` is found whose superlevel region holds probability `1 - alpha`.
//! The region may split into several components for multimodal models.
//! For comparison the crate also computes IFORM contours, equi-shape
//! (inflated IFORM) contours and Monte Carlo halfspace contours.
//!
//! ```
//! use envcontour::{hdc, GridSpec, JointModel, ReturnSpec};
//!
//! let model = JointModel::vanem2012();
//! let ret = ReturnSpec::new(1.0, 3.0)?;
//! let grid = GridSpec::auto(&model, ret.alpha, &[0.1, 0.1])?;
//! let (_field, result) = hdc::highest_density_contour(&model, ret.alpha, &grid)?;
//! assert_eq!(result.component_count(), 1);
//! assert!(result.enclosed >= 1.0 - ret.alpha);
//! # Ok::<(), envcontour::Error>(())
//! ```

pub mod components;
pub mod config;
pub mod contour;
pub mod dist;
pub mod error;
pub mod grid;
pub mod hdc;
pub mod huseby;
pub mod iform;
pub mod model;
pub mod normal;
pub mod output;
pub mod rosenblatt;

pub use components::{connected_components, Components};
pub use contour::{extract_contour, ContourSet, Extremes};
pub use dist::{Dist, DistSpec, LogNormal, Mixture, Normal, ParamFn, Univariate, Weibull3};
pub use error::{Error, ErrorClass, Result};
pub use grid::{build_cell_field, Axis, CellField, GridSpec};
pub use hdc::{enclosed_probability, grid_convergence_study, solve_fm, ConvergenceRow, HdcResult};
pub use huseby::{mc_contour, McContour};
pub use iform::{equishape_beta, iform_beta, iform_contour, ContourMode, IformContour};
pub use model::{alpha_from_return, JointModel, ReturnSpec, Variable};
pub use rosenblatt::{from_u, to_u};
