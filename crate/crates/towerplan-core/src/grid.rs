//! External grid of cells over the area raster and the internal n×n grid
//! of candidate squares inside each cell.
//!
//! Cells are addressed `(row, col)`, 0-based from the top-left of the
//! raster. Squares use the classifier's convention: `x` is the row counted
//! from the top, `y` the column counted from the left, both 1-based.

use alloc::vec::Vec;

use thiserror::Error;

use crate::geometry::{Point, Rect};

/// Slack used when turning ratios of lengths into counts.
const COUNT_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("raster has {found} values but ncols x nrows = {expected}")]
    RasterSize { expected: usize, found: usize },
    #[error("raster dimensions must be positive")]
    EmptyRaster,
    #[error("raster cell size must be positive, got {0}")]
    RasterCellSize(f64),
    #[error("cell side must be positive, got {0}")]
    NonPositiveCellSide(f64),
    #[error("cell side {cell_side} m exceeds the raster extent {extent} m")]
    CellSideExceedsExtent { cell_side: f64, extent: f64 },
    #[error("antenna radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("square side must be positive, got {0}")]
    NonPositiveSquareSide(f64),
}

/// Elevation raster in a planar frame; `origin` is the lower-left corner
/// and `values` run row-major from the top row.
#[derive(Clone, Debug, PartialEq)]
pub struct ElevationRaster {
    pub ncols: usize,
    pub nrows: usize,
    pub cell_size_m: f64,
    pub origin_x: f64,
    pub origin_y: f64,
    pub nodata: f64,
    pub values: Vec<f64>,
}

impl ElevationRaster {
    pub fn new(
        ncols: usize,
        nrows: usize,
        cell_size_m: f64,
        origin_x: f64,
        origin_y: f64,
        nodata: f64,
        values: Vec<f64>,
    ) -> Result<Self, GridError> {
        if ncols == 0 || nrows == 0 {
            return Err(GridError::EmptyRaster);
        }
        if cell_size_m.is_nan() || cell_size_m <= 0.0 {
            return Err(GridError::RasterCellSize(cell_size_m));
        }
        if values.len() != ncols * nrows {
            return Err(GridError::RasterSize {
                expected: ncols * nrows,
                found: values.len(),
            });
        }
        Ok(ElevationRaster {
            ncols,
            nrows,
            cell_size_m,
            origin_x,
            origin_y,
            nodata,
            values,
        })
    }

    pub fn width_m(&self) -> f64 {
        self.ncols as f64 * self.cell_size_m
    }

    pub fn height_m(&self) -> f64 {
        self.nrows as f64 * self.cell_size_m
    }

    pub fn extent(&self) -> Rect {
        Rect::new(
            self.origin_x,
            self.origin_y,
            self.origin_x + self.width_m(),
            self.origin_y + self.height_m(),
        )
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        if row >= self.nrows || col >= self.ncols {
            return None;
        }
        let v = self.values[row * self.ncols + col];
        if v == self.nodata {
            None
        } else {
            Some(v)
        }
    }

    /// Center of raster cell `(row, col)` in the planar frame.
    pub fn cell_center(&self, row: usize, col: usize) -> Point {
        Point::new(
            self.origin_x + (col as f64 + 0.5) * self.cell_size_m,
            self.origin_y + (self.nrows as f64 - row as f64 - 0.5) * self.cell_size_m,
        )
    }

    /// Mean of the valid raster cells whose centers fall in `rect`
    /// (half-open on the max edges).
    pub fn mean_over(&self, rect: &Rect) -> Option<f64> {
        let cs = self.cell_size_m;
        let col_lo = libm::floor((rect.min_x - self.origin_x) / cs - 0.5).max(0.0) as usize;
        let col_hi = (libm::ceil((rect.max_x - self.origin_x) / cs) as usize).min(self.ncols);
        let top = self.origin_y + self.height_m();
        let row_lo = libm::floor((top - rect.max_y) / cs - 0.5).max(0.0) as usize;
        let row_hi = (libm::ceil((top - rect.min_y) / cs) as usize).min(self.nrows);
        let (mut sum, mut count) = (0.0, 0usize);
        for row in row_lo..row_hi {
            for col in col_lo..col_hi {
                let c = self.cell_center(row, col);
                if c.x >= rect.min_x && c.x < rect.max_x && c.y >= rect.min_y && c.y < rect.max_y {
                    if let Some(v) = self.get(row, col) {
                        sum += v;
                        count += 1;
                    }
                }
            }
        }
        (count > 0).then(|| sum / count as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId {
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub id: CellId,
    pub bounds: Rect,
    /// Nominal side; partial edge cells have a smaller actual extent.
    pub side_m: f64,
    pub partial: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExternalGrid {
    pub rows: usize,
    pub cols: usize,
    pub cell_side_m: f64,
    pub bounds: Rect,
    /// Row-major.
    pub cells: Vec<Cell>,
}

impl ExternalGrid {
    pub fn cell(&self, id: CellId) -> Option<&Cell> {
        if id.row < self.rows && id.col < self.cols {
            self.cells.get(id.row * self.cols + id.col)
        } else {
            None
        }
    }
}

fn count_along(extent: f64, side: f64) -> usize {
    (libm::ceil(extent / side - COUNT_SLACK) as usize).max(1)
}

/// Tiles the raster extent with square cells of `cell_side_m`; the last
/// row and column are clipped to the extent and flagged partial.
pub fn build_external_grid(
    raster: &ElevationRaster,
    cell_side_m: f64,
) -> Result<ExternalGrid, GridError> {
    if cell_side_m.is_nan() || cell_side_m <= 0.0 {
        return Err(GridError::NonPositiveCellSide(cell_side_m));
    }
    let bounds = raster.extent();
    let extent = bounds.width().max(bounds.height());
    if cell_side_m > extent * (1.0 + COUNT_SLACK) {
        return Err(GridError::CellSideExceedsExtent {
            cell_side: cell_side_m,
            extent,
        });
    }
    let cols = count_along(bounds.width(), cell_side_m);
    let rows = count_along(bounds.height(), cell_side_m);
    let mut cells = Vec::with_capacity(rows * cols);
    for row in 0..rows {
        for col in 0..cols {
            let min_x = bounds.min_x + col as f64 * cell_side_m;
            let max_y = bounds.max_y - row as f64 * cell_side_m;
            let max_x = if col + 1 == cols {
                bounds.max_x
            } else {
                bounds.min_x + (col + 1) as f64 * cell_side_m
            };
            let min_y = if row + 1 == rows {
                bounds.min_y
            } else {
                bounds.max_y - (row + 1) as f64 * cell_side_m
            };
            let cell_bounds = Rect::new(min_x, min_y, max_x, max_y);
            let tol = cell_side_m * COUNT_SLACK;
            let partial =
                cell_bounds.width() < cell_side_m - tol || cell_bounds.height() < cell_side_m - tol;
            cells.push(Cell {
                id: CellId { row, col },
                bounds: cell_bounds,
                side_m: cell_side_m,
                partial,
            });
        }
    }
    Ok(ExternalGrid {
        rows,
        cols,
        cell_side_m,
        bounds,
        cells,
    })
}

/// Square side for which an antenna of radius `r` at a square's center
/// reaches every corner of the surrounding 3×3 block: `2r / (3√2)`.
pub fn square_side_for_radius(radius_m: f64) -> f64 {
    2.0 * radius_m / (3.0 * core::f64::consts::SQRT_2)
}

/// 1-based position of a square inside its cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SquarePos {
    /// Row from the top.
    pub x: usize,
    /// Column from the left.
    pub y: usize,
}

impl SquarePos {
    pub const fn new(x: usize, y: usize) -> Self {
        SquarePos { x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquareId {
    pub cell: CellId,
    pub pos: SquarePos,
    pub bounds: Rect,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InternalGrid {
    pub cell: CellId,
    pub bounds: Rect,
    pub n: usize,
    /// Nominal side from the antenna radius (or the override). Actual
    /// squares stretch so that `n` of them tile the cell.
    pub square_side_m: f64,
}

impl InternalGrid {
    pub fn contains(&self, pos: SquarePos) -> bool {
        (1..=self.n).contains(&pos.x) && (1..=self.n).contains(&pos.y)
    }

    fn edge_y(&self, k: usize) -> f64 {
        // k counts rows from the top; 0 is the top edge.
        if k == self.n {
            self.bounds.min_y
        } else {
            self.bounds.max_y - k as f64 * self.bounds.height() / self.n as f64
        }
    }

    fn edge_x(&self, k: usize) -> f64 {
        if k == self.n {
            self.bounds.max_x
        } else {
            self.bounds.min_x + k as f64 * self.bounds.width() / self.n as f64
        }
    }

    pub fn square_bounds(&self, pos: SquarePos) -> Rect {
        Rect::new(
            self.edge_x(pos.y - 1),
            self.edge_y(pos.x),
            self.edge_x(pos.y),
            self.edge_y(pos.x - 1),
        )
    }

    pub fn square(&self, pos: SquarePos) -> Option<SquareId> {
        self.contains(pos).then(|| SquareId {
            cell: self.cell,
            pos,
            bounds: self.square_bounds(pos),
        })
    }

    /// All positions, row-major from (1, 1).
    pub fn positions(&self) -> impl Iterator<Item = SquarePos> + '_ {
        (1..=self.n).flat_map(move |x| (1..=self.n).map(move |y| SquarePos::new(x, y)))
    }

    pub fn squares(&self) -> impl Iterator<Item = SquareId> + '_ {
        self.positions().map(move |pos| SquareId {
            cell: self.cell,
            pos,
            bounds: self.square_bounds(pos),
        })
    }

    /// Square owning `p`. A point on a shared edge belongs to the square
    /// above it, or to the one on its right.
    pub fn locate(&self, p: Point) -> Option<SquarePos> {
        if !self.bounds.contains(p) {
            return None;
        }
        let fx = (self.bounds.max_y - p.y) / self.bounds.height() * self.n as f64;
        let fy = (p.x - self.bounds.min_x) / self.bounds.width() * self.n as f64;
        let mut x = (libm::floor(fx) as usize + 1).min(self.n);
        let mut y = (libm::floor(fy) as usize + 1).min(self.n);
        // Correct for rounding at shared edges against the exact bounds.
        while x > 1 && p.y > self.edge_y(x - 1) {
            x -= 1;
        }
        while x < self.n && p.y <= self.edge_y(x) {
            x += 1;
        }
        while y > 1 && p.x < self.edge_x(y - 1) {
            y -= 1;
        }
        while y < self.n && p.x >= self.edge_x(y) {
            y += 1;
        }
        Some(SquarePos::new(x, y))
    }

    /// Position and side count used by the classifier.
    pub fn class_position(&self, square: &SquareId) -> (SquarePos, usize) {
        (square.pos, self.n)
    }

    /// Center of the cell, used for tie-breaking between equal scores.
    pub fn centroid(&self) -> Point {
        self.bounds.center()
    }
}

/// Splits `cell` into an n×n grid, `n = floor(cell_side / square_side)`,
/// at least 1. The square side is `square_side_override` when given,
/// otherwise derived from the antenna radius.
pub fn build_internal_grid(
    cell: &Cell,
    antenna_radius_m: f64,
    square_side_override: Option<f64>,
) -> Result<InternalGrid, GridError> {
    if antenna_radius_m.is_nan() || antenna_radius_m <= 0.0 {
        return Err(GridError::NonPositiveRadius(antenna_radius_m));
    }
    let side = match square_side_override {
        Some(s) if s.is_nan() || s <= 0.0 => return Err(GridError::NonPositiveSquareSide(s)),
        Some(s) => s,
        None => square_side_for_radius(antenna_radius_m),
    };
    let n = (libm::floor(cell.side_m / side + COUNT_SLACK) as usize).max(1);
    Ok(InternalGrid {
        cell: cell.id,
        bounds: cell.bounds,
        n,
        square_side_m: side,
    })
}
