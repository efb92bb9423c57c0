//! End-to-end planning: grids, per-square databases, rules, scores,
//! placements and coverage.
//!
//! Cells are independent, so each one is processed on a worker pool and
//! the results are collected back in cell order; the number of workers
//! never changes the output.

use std::path::PathBuf;

use rayon::prelude::*;
use thiserror::Error;
use towerplan_core::coverage::{coverage, CoverageReport};
use towerplan_core::grid::{
    build_external_grid, build_internal_grid, Cell, CellId, ElevationRaster, ExternalGrid,
    GridError, InternalGrid, SquareId, SquarePos,
};
use towerplan_core::miner::{apriori, generate_rules, AssociationRule, MinerError};
use towerplan_core::scoring::{
    classify, goodness, select_placement, suitability, GoodnessScore, Placement, PriorityClass,
    ScoredSquare, ScoringError, Suitability,
};
use towerplan_core::spatialdb::{
    assign_objects, build_square_database, encode_transactions, Item, SpatialObject, SquareRecord,
    Transaction,
};

use crate::config::Settings;
use crate::objects::{read_objects, ObjectsError};
use crate::raster::{read_raster, RasterError};

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("raster stage, {path}: {source}")]
    Raster { path: PathBuf, source: RasterError },
    #[error("objects stage, {path}: {source}")]
    Objects { path: PathBuf, source: ObjectsError },
    #[error("grid stage: {0}")]
    Grid(GridError),
    #[error("grid stage, cell ({row}, {col}): {source}")]
    CellGrid {
        row: usize,
        col: usize,
        source: GridError,
    },
    #[error("miner stage, cell ({row}, {col}) square ({x}, {y}): {source}")]
    Miner {
        row: usize,
        col: usize,
        x: usize,
        y: usize,
        source: MinerError,
    },
    #[error("scoring stage, cell ({row}, {col}): {source}")]
    Scoring {
        row: usize,
        col: usize,
        source: ScoringError,
    },
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Parsed raster and object inventory.
#[derive(Clone, Debug)]
pub struct Inputs {
    pub raster: ElevationRaster,
    pub objects: Vec<SpatialObject>,
}

pub fn load_inputs(settings: &Settings) -> Result<Inputs, PlanError> {
    let raster = read_raster(&settings.raster).map_err(|source| PlanError::Raster {
        path: settings.raster.clone(),
        source,
    })?;
    let objects = match &settings.objects {
        Some(path) => read_objects(path).map_err(|source| PlanError::Objects {
            path: path.clone(),
            source,
        })?,
        None => Vec::new(),
    };
    Ok(Inputs { raster, objects })
}

/// The two grid levels.
#[derive(Clone, Debug)]
pub struct Grids {
    pub external: ExternalGrid,
    /// One per cell, in cell order.
    pub internal: Vec<InternalGrid>,
}

pub fn build_grids(settings: &Settings, raster: &ElevationRaster) -> Result<Grids, PlanError> {
    let external = build_external_grid(raster, settings.cell_side_m).map_err(PlanError::Grid)?;
    let internal = external
        .cells
        .iter()
        .map(|cell| {
            build_internal_grid(cell, settings.antenna_radius_m, settings.square_side_m).map_err(
                |source| PlanError::CellGrid {
                    row: cell.id.row,
                    col: cell.id.col,
                    source,
                },
            )
        })
        .collect::<Result<_, _>>()?;
    Ok(Grids { external, internal })
}

#[derive(Clone, Debug)]
pub struct SquareAnalysis {
    pub id: SquareId,
    pub class: PriorityClass,
    /// Mean elevation of the raster cells under the square.
    pub elevation_m: Option<f64>,
    pub records: Vec<SquareRecord>,
    pub transactions: Vec<Transaction>,
    pub rules: Vec<AssociationRule<Item>>,
}

#[derive(Clone, Debug)]
pub struct CellAnalysis {
    pub cell: Cell,
    pub grid: InternalGrid,
    /// Row-major.
    pub squares: Vec<SquareAnalysis>,
    /// Indices of objects that reach no square of this cell.
    pub omitted: Vec<usize>,
}

/// Everything up to and including rule mining.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub grids: Grids,
    pub cells: Vec<CellAnalysis>,
    /// Ids of objects that fall in no cell at all.
    pub omitted_objects: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ScoredCell {
    pub analysis: CellAnalysis,
    /// Parallel to `analysis.squares`.
    pub suitability: Vec<Suitability>,
    pub scores: Vec<GoodnessScore>,
    pub placement: Placement,
}

#[derive(Clone, Debug)]
pub struct Plan {
    pub grids: Grids,
    pub cells: Vec<ScoredCell>,
    pub coverage: CoverageReport,
    pub omitted_objects: Vec<String>,
}

fn run_on_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, PlanError> {
    let threads = jobs
        .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
        .unwrap_or(1)
        .max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| PlanError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

fn analyze_cell(
    settings: &Settings,
    raster: &ElevationRaster,
    objects: &[SpatialObject],
    cell: &Cell,
    grid: &InternalGrid,
) -> Result<CellAnalysis, PlanError> {
    let assigned = assign_objects(objects, grid);
    let mut squares = Vec::with_capacity(grid.n * grid.n);
    for id in grid.squares() {
        let (pos, n) = grid.class_position(&id);
        let class = classify(pos, n).map_err(|source| PlanError::Scoring {
            row: cell.id.row,
            col: cell.id.col,
            source,
        })?;
        let here = assigned
            .squares
            .get(&id.pos)
            .map(Vec::as_slice)
            .unwrap_or(&[]);
        let records = build_square_database(&id, objects, here, &settings.bins);
        let transactions = encode_transactions(id.pos, &records);
        let rules = if transactions.is_empty() {
            Vec::new()
        } else {
            let miner_err = |source| PlanError::Miner {
                row: cell.id.row,
                col: cell.id.col,
                x: id.pos.x,
                y: id.pos.y,
                source,
            };
            let items: Vec<Vec<Item>> = transactions.iter().map(|t| t.items.clone()).collect();
            let frequent = apriori(&items, settings.minsup).map_err(miner_err)?;
            generate_rules(&frequent, settings.minconf).map_err(miner_err)?
        };
        squares.push(SquareAnalysis {
            elevation_m: raster.mean_over(&id.bounds),
            id,
            class,
            records,
            transactions,
            rules,
        });
    }
    Ok(CellAnalysis {
        cell: cell.clone(),
        grid: grid.clone(),
        squares,
        omitted: assigned.omitted,
    })
}

/// Grids, spatial databases and rules for every cell.
pub fn analyze(
    settings: &Settings,
    inputs: &Inputs,
    jobs: Option<usize>,
) -> Result<Analysis, PlanError> {
    let grids = build_grids(settings, &inputs.raster)?;
    let cells: Vec<CellAnalysis> = run_on_pool(jobs, || {
        grids
            .external
            .cells
            .par_iter()
            .zip(grids.internal.par_iter())
            .map(|(cell, grid)| analyze_cell(settings, &inputs.raster, &inputs.objects, cell, grid))
            .collect::<Result<Vec<_>, _>>()
    })??;
    let omitted_objects: Vec<String> = (0..inputs.objects.len())
        .filter(|i| cells.iter().all(|c| c.omitted.contains(i)))
        .map(|i| inputs.objects[i].id.clone())
        .collect();
    if !omitted_objects.is_empty() {
        log::warn!(
            "objects outside every cell are ignored: {}",
            omitted_objects.join(", ")
        );
    }
    Ok(Analysis {
        grids,
        cells,
        omitted_objects,
    })
}

fn score_cell(settings: &Settings, analysis: CellAnalysis) -> Result<ScoredCell, PlanError> {
    let CellId { row, col } = analysis.cell.id;
    let scoring_err = |source| PlanError::Scoring { row, col, source };
    let mut suitabilities = Vec::with_capacity(analysis.squares.len());
    let mut scores = Vec::with_capacity(analysis.squares.len());
    let mut scored = Vec::with_capacity(analysis.squares.len());
    for sq in &analysis.squares {
        let s = suitability(&sq.records, &sq.rules, &settings.table);
        let (pos, n) = analysis.grid.class_position(&sq.id);
        let score = goodness(pos, n, s.percent).map_err(scoring_err)?;
        scored.push(ScoredSquare {
            pos: sq.id.pos,
            class: sq.class,
            score,
        });
        suitabilities.push(s);
        scores.push(score);
    }
    let placement =
        select_placement(&analysis.grid, &scored, settings.threshold).map_err(scoring_err)?;
    Ok(ScoredCell {
        analysis,
        suitability: suitabilities,
        scores,
        placement,
    })
}

/// Runs the whole pipeline. `jobs` sizes the worker pool; `None` falls
/// back to the settings and then to the machine's parallelism.
pub fn plan(settings: &Settings, inputs: &Inputs, jobs: Option<usize>) -> Result<Plan, PlanError> {
    let jobs = jobs.or(settings.jobs);
    let Analysis {
        grids,
        cells,
        omitted_objects,
    } = analyze(settings, inputs, jobs)?;
    let cells: Vec<ScoredCell> = run_on_pool(jobs, || {
        cells
            .into_par_iter()
            .map(|c| score_cell(settings, c))
            .collect::<Result<Vec<_>, _>>()
    })??;
    let placements: Vec<Placement> = cells.iter().map(|c| c.placement.clone()).collect();
    let coverage = coverage(&placements, &grids.internal);
    for short in coverage.short_cells() {
        log::info!(
            "cell ({}, {}) covers {}/{} squares",
            short.cell.row,
            short.cell.col,
            short.covered,
            short.total
        );
    }
    Ok(Plan {
        grids,
        cells,
        coverage,
        omitted_objects,
    })
}

impl ScoredCell {
    pub fn square(&self, pos: SquarePos) -> Option<(&SquareAnalysis, &GoodnessScore)> {
        let i = self.analysis.squares.iter().position(|s| s.id.pos == pos)?;
        Some((&self.analysis.squares[i], &self.scores[i]))
    }
}
