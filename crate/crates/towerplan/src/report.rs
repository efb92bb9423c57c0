//! JSON documents written by the CLI.
//!
//! Field order is fixed by the struct definitions and every list is
//! produced in cell / square / canonical rule order, so the same inputs
//! always serialize to the same bytes. The `classification` and `mining`
//! parts of a plan report are exactly what `classify` and `mine` print.
//!
//! Coordinates: cells are `[row, col]`, 0-based from the top-left of the
//! raster; squares are `[x, y]`, 1-based, with `x` the row counted from
//! the top of the cell and `y` the column counted from its left.

use serde::{Deserialize, Serialize};
use towerplan_core::coverage::CoverageReport;
use towerplan_core::geometry::Rect;
use towerplan_core::grid::{CellId, ElevationRaster, InternalGrid, SquarePos};
use towerplan_core::miner::{AssociationRule, Fraction};
use towerplan_core::scoring::{
    GoodnessScore, Placement, PlacementMode, PriorityClass, Suitability,
};
use towerplan_core::spatialdb::{Item, SquareRecord};

use crate::config::{ConfigEcho, Settings};
use crate::pipeline::{Analysis, CellAnalysis, Grids, Plan};

pub const TOOL_NAME: &str = "towerplan";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const COORDINATES: &str =
    "cells [row, col] 0-based from the top-left; squares [x, y] 1-based, x = row from the top of the cell, y = column from its left";

fn cell_key(c: CellId) -> [usize; 2] {
    [c.row, c.col]
}

fn square_key(p: SquarePos) -> [usize; 2] {
    [p.x, p.y]
}

fn rect(r: &Rect) -> [f64; 4] {
    [r.min_x, r.min_y, r.max_x, r.max_y]
}

fn priority_name(c: PriorityClass) -> String {
    match c {
        PriorityClass::First => "FIRST".into(),
        PriorityClass::Second => "SECOND".into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellClasses {
    pub cell: [usize; 2],
    pub n: usize,
    pub first: usize,
    pub second: usize,
    /// One string per square row, top first: `F` first priority, `S`
    /// second.
    pub map: Vec<String>,
}

/// Output of `classify`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyDoc {
    pub cells: Vec<CellClasses>,
}

pub fn classify_doc(grids: &Grids) -> ClassifyDoc {
    let cells = grids
        .internal
        .iter()
        .map(|g: &InternalGrid| {
            let map: Vec<String> = (1..=g.n)
                .map(|x| {
                    (1..=g.n)
                        .map(|y| {
                            match towerplan_core::scoring::classify(SquarePos::new(x, y), g.n) {
                                Ok(PriorityClass::First) => 'F',
                                _ => 'S',
                            }
                        })
                        .collect()
                })
                .collect();
            let first = map.iter().map(|r| r.matches('F').count()).sum();
            CellClasses {
                cell: cell_key(g.cell),
                n: g.n,
                first,
                second: g.n * g.n - first,
                map,
            }
        })
        .collect();
    ClassifyDoc { cells }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleCounts {
    /// Transactions holding antecedent and consequent.
    pub union: usize,
    pub antecedent: usize,
    pub transactions: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleDoc {
    pub antecedent: Vec<String>,
    pub consequent: Vec<String>,
    pub support: f64,
    pub confidence: f64,
    /// The exact counts behind `support` and `confidence`.
    pub counts: RuleCounts,
}

impl RuleDoc {
    pub fn support_fraction(&self) -> Fraction {
        Fraction::new(self.counts.union as u64, self.counts.transactions as u64)
    }

    pub fn confidence_fraction(&self) -> Fraction {
        Fraction::new(self.counts.union as u64, self.counts.antecedent as u64)
    }
}

fn rule_doc(r: &AssociationRule<Item>) -> RuleDoc {
    RuleDoc {
        antecedent: r.antecedent.iter().map(ToString::to_string).collect(),
        consequent: r.consequent.iter().map(ToString::to_string).collect(),
        support: r.support().to_f64(),
        confidence: r.confidence().to_f64(),
        counts: RuleCounts {
            union: r.union_count,
            antecedent: r.antecedent_count,
            transactions: r.total,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareRules {
    pub square: [usize; 2],
    pub transactions: usize,
    pub rules: Vec<RuleDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRules {
    pub cell: [usize; 2],
    /// Squares holding at least one object.
    pub squares: Vec<SquareRules>,
}

/// Output of `mine`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MineDoc {
    pub minsup: f64,
    pub minconf: f64,
    pub cells: Vec<CellRules>,
}

fn cell_rules(c: &CellAnalysis) -> CellRules {
    CellRules {
        cell: cell_key(c.cell.id),
        squares: c
            .squares
            .iter()
            .filter(|s| !s.transactions.is_empty())
            .map(|s| SquareRules {
                square: square_key(s.id.pos),
                transactions: s.transactions.len(),
                rules: s.rules.iter().map(rule_doc).collect(),
            })
            .collect(),
    }
}

pub fn mine_doc(echo: &ConfigEcho, cells: &[&CellAnalysis]) -> MineDoc {
    MineDoc {
        minsup: echo.minsup,
        minconf: echo.minconf,
        cells: cells.iter().map(|c| cell_rules(c)).collect(),
    }
}

pub fn mine_doc_from_analysis(settings: &Settings, analysis: &Analysis) -> MineDoc {
    mine_doc(&settings.echo, &analysis.cells.iter().collect::<Vec<_>>())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodnessDoc {
    pub class: u32,
    pub suitability: u32,
    pub total: u32,
}

impl From<&GoodnessScore> for GoodnessDoc {
    fn from(g: &GoodnessScore) -> Self {
        GoodnessDoc {
            class: g.class_component,
            suitability: g.suitability_component,
            total: g.total(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeWeight {
    #[serde(rename = "type")]
    pub object_type: u8,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuitabilityDoc {
    pub percent: u32,
    pub weights: Vec<TypeWeight>,
    pub empty_terrain_weight: f64,
    pub dominant_by_area: Option<u8>,
    pub dominant_by_rules: Option<u8>,
    pub consistent: bool,
}

impl From<&Suitability> for SuitabilityDoc {
    fn from(s: &Suitability) -> Self {
        SuitabilityDoc {
            percent: s.percent,
            weights: s
                .weights
                .iter()
                .map(|(t, w)| TypeWeight {
                    object_type: t.code(),
                    weight: *w,
                })
                .collect(),
            empty_terrain_weight: s.empty_terrain_weight,
            dominant_by_area: s.dominant_by_area.map(|t| t.code()),
            dominant_by_rules: s.dominant_by_rules.map(|t| t.code()),
            consistent: s.consistent(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceDoc {
    pub target: String,
    pub meters: f64,
    pub bin: String,
}

/// One row of a square's coded object table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordDoc {
    pub object: String,
    #[serde(rename = "type")]
    pub object_type: u8,
    pub size: u8,
    pub shape: u8,
    /// `[code, target]`: this object lies `code` of `target`.
    pub direction: Option<[String; 2]>,
    /// `[code, target]`.
    pub position: Option<[String; 2]>,
    pub distance: Option<DistanceDoc>,
    pub population: String,
    pub employment: String,
}

impl From<&SquareRecord> for RecordDoc {
    fn from(r: &SquareRecord) -> Self {
        RecordDoc {
            object: r.object_id.clone(),
            object_type: r.object_type.code(),
            size: r.size.code(),
            shape: r.shape.code(),
            direction: r
                .direction
                .as_ref()
                .map(|d| [d.code.letter().to_string(), d.target.clone()]),
            position: r
                .position
                .as_ref()
                .map(|p| [p.code.roman().to_string(), p.target.clone()]),
            distance: r.distance.as_ref().map(|d| DistanceDoc {
                target: d.target.clone(),
                meters: d.meters,
                bin: d.bin.clone(),
            }),
            population: r.population.name().into(),
            employment: r.employment.name().into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareDoc {
    pub square: [usize; 2],
    pub bounds: [f64; 4],
    pub priority: String,
    pub elevation_m: Option<f64>,
    pub goodness: GoodnessDoc,
    pub suitability: SuitabilityDoc,
    pub rule_count: usize,
    pub records: Vec<RecordDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacementDoc {
    /// `single` or `dual`.
    pub mode: String,
    pub squares: Vec<[usize; 2]>,
    pub goodness: Vec<GoodnessDoc>,
    pub meets_threshold: bool,
}

impl From<&Placement> for PlacementDoc {
    fn from(p: &Placement) -> Self {
        PlacementDoc {
            mode: match p.mode {
                PlacementMode::Single => "single".into(),
                PlacementMode::Dual => "dual".into(),
            },
            squares: p.squares.iter().copied().map(square_key).collect(),
            goodness: p.scores.iter().map(GoodnessDoc::from).collect(),
            meets_threshold: p.meets_threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellDoc {
    pub cell: [usize; 2],
    pub bounds: [f64; 4],
    pub partial: bool,
    pub n: usize,
    pub square_side_m: f64,
    pub placement: PlacementDoc,
    pub squares: Vec<SquareDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellCoverageDoc {
    pub cell: [usize; 2],
    pub antennas: usize,
    pub covered: usize,
    pub total: usize,
    pub fraction: f64,
    pub full: bool,
    pub uncovered: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageDoc {
    pub antennas: usize,
    pub covered_squares: usize,
    pub total_squares: usize,
    pub fraction: f64,
    pub full: bool,
    pub cells: Vec<CellCoverageDoc>,
}

impl From<&CoverageReport> for CoverageDoc {
    fn from(c: &CoverageReport) -> Self {
        CoverageDoc {
            antennas: c.antennas,
            covered_squares: c.covered_squares,
            total_squares: c.total_squares,
            fraction: c.fraction().to_f64(),
            full: c.short_cells().next().is_none(),
            cells: c
                .cells
                .iter()
                .map(|cc| CellCoverageDoc {
                    cell: cell_key(cc.cell),
                    antennas: cc.antennas,
                    covered: cc.covered,
                    total: cc.total,
                    fraction: cc.fraction().to_f64(),
                    full: cc.is_full(),
                    uncovered: cc.uncovered.iter().copied().map(square_key).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolDoc {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RasterDoc {
    pub ncols: usize,
    pub nrows: usize,
    pub cell_size_m: f64,
    pub bounds: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDoc {
    pub coordinates: String,
    pub raster: RasterDoc,
    pub cell_side_m: f64,
    pub rows: usize,
    pub cols: usize,
    pub bounds: [f64; 4],
}

/// Output of `plan`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanReport {
    pub tool: ToolDoc,
    pub config: ConfigEcho,
    pub grid: GridDoc,
    pub classification: ClassifyDoc,
    pub mining: MineDoc,
    pub cells: Vec<CellDoc>,
    pub coverage: CoverageDoc,
    /// Objects that fall in no cell and were left out.
    pub omitted_objects: Vec<String>,
}

pub fn grid_doc(grids: &Grids, raster: &ElevationRaster) -> GridDoc {
    GridDoc {
        coordinates: COORDINATES.into(),
        raster: RasterDoc {
            ncols: raster.ncols,
            nrows: raster.nrows,
            cell_size_m: raster.cell_size_m,
            bounds: rect(&raster.extent()),
        },
        cell_side_m: grids.external.cell_side_m,
        rows: grids.external.rows,
        cols: grids.external.cols,
        bounds: rect(&grids.external.bounds),
    }
}

pub fn plan_report(settings: &Settings, raster: &ElevationRaster, plan: &Plan) -> PlanReport {
    let analyses: Vec<&CellAnalysis> = plan.cells.iter().map(|c| &c.analysis).collect();
    let cells = plan
        .cells
        .iter()
        .map(|c| {
            let a = &c.analysis;
            CellDoc {
                cell: cell_key(a.cell.id),
                bounds: rect(&a.cell.bounds),
                partial: a.cell.partial,
                n: a.grid.n,
                square_side_m: a.grid.square_side_m,
                placement: PlacementDoc::from(&c.placement),
                squares: a
                    .squares
                    .iter()
                    .zip(&c.scores)
                    .zip(&c.suitability)
                    .map(|((s, score), suit)| SquareDoc {
                        square: square_key(s.id.pos),
                        bounds: rect(&s.id.bounds),
                        priority: priority_name(s.class),
                        elevation_m: s.elevation_m,
                        goodness: GoodnessDoc::from(score),
                        suitability: SuitabilityDoc::from(suit),
                        rule_count: s.rules.len(),
                        records: s.records.iter().map(RecordDoc::from).collect(),
                    })
                    .collect(),
            }
        })
        .collect();
    PlanReport {
        tool: ToolDoc {
            name: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
        },
        config: settings.echo.clone(),
        grid: grid_doc(&plan.grids, raster),
        classification: classify_doc(&plan.grids),
        mining: mine_doc(&settings.echo, &analyses),
        cells,
        coverage: CoverageDoc::from(&plan.coverage),
        omitted_objects: plan.omitted_objects.clone(),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report documents always serialize");
    s.push('\n');
    s
}
