//! File formats, reports and the command-line front end for the antenna
//! placement planner in `towerplan-core`.
//!
//! [`raster`] and [`objects`] read the inputs, [`config`] holds the planner
//! settings, [`pipeline`] runs the planning stages over all cells,
//! [`report`] turns the result into JSON documents and [`render`] draws it
//! as SVG.

pub mod config;
pub mod objects;
pub mod pipeline;
pub mod raster;
pub mod render;
pub mod report;

pub use config::{Overrides, PlanConfig, Settings};
pub use pipeline::{analyze, build_grids, load_inputs, plan, Inputs, Plan, PlanError};
pub use report::{classify_doc, plan_report, to_json, ClassifyDoc, MineDoc, PlanReport};
