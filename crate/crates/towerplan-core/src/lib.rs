//! Planning core for siting one omni-directional antenna per grid cell.
//!
//! The pipeline runs bottom-up through the modules: [`grid`] tiles the
//! area into cells and each cell into an n×n grid of squares,
//! [`spatialdb`] builds the coded per-square object table and its
//! transactions, [`miner`] runs Apriori over them, [`scoring`] turns class
//! and suitability into a ratio of goodness and picks the square(s), and
//! [`coverage`] checks what the chosen antennas reach.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod coverage;
pub mod geometry;
pub mod grid;
pub mod miner;
pub mod scoring;
pub mod spatialdb;

pub use coverage::{coverage, footprint, CoverageReport, Footprint};
pub use geometry::{Geometry, Point, Rect};
pub use grid::{
    build_external_grid, build_internal_grid, CellId, ElevationRaster, ExternalGrid, InternalGrid,
    SquareId, SquarePos,
};
pub use miner::{
    apriori, brute_force_frequent, generate_rules, AssociationRule, Fraction, ItemsetSupport,
};
pub use scoring::{
    classify, goodness, select_placement, suitability, GoodnessScore, Placement, PlacementMode,
    PriorityClass, SuitabilityTable,
};
pub use spatialdb::{Item, SpatialObject, SquareRecord, Transaction};
