//! Antenna footprints on the internal grid and per-cell coverage.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::grid::{CellId, InternalGrid, SquarePos};
use crate::miner::Fraction;
use crate::scoring::Placement;

/// Squares reached by one omni-directional antenna: its own square and
/// the eight around it, clipped to the cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Footprint {
    pub center: SquarePos,
    /// Row-major.
    pub covered: Vec<SquarePos>,
}

pub fn footprint(center: SquarePos, n: usize) -> Footprint {
    let lo = |v: usize| v.saturating_sub(1).max(1);
    let hi = |v: usize| (v + 1).min(n);
    let covered = (lo(center.x)..=hi(center.x))
        .flat_map(|x| (lo(center.y)..=hi(center.y)).map(move |y| SquarePos::new(x, y)))
        .collect();
    Footprint { center, covered }
}

/// Number of distinct squares covered by antennas at `centers`.
pub fn union_size(centers: &[SquarePos], n: usize) -> usize {
    centers
        .iter()
        .flat_map(|c| footprint(*c, n).covered)
        .collect::<BTreeSet<_>>()
        .len()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellCoverage {
    pub cell: CellId,
    pub n: usize,
    pub antennas: usize,
    pub covered: usize,
    pub total: usize,
    /// Row-major.
    pub uncovered: Vec<SquarePos>,
}

impl CellCoverage {
    pub fn fraction(&self) -> Fraction {
        Fraction::new(self.covered as u64, self.total as u64)
    }

    pub fn is_full(&self) -> bool {
        self.covered == self.total
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    /// Ordered by cell id.
    pub cells: Vec<CellCoverage>,
    pub total_squares: usize,
    pub covered_squares: usize,
    pub antennas: usize,
}

impl CoverageReport {
    pub fn fraction(&self) -> Fraction {
        Fraction::new(
            self.covered_squares as u64,
            self.total_squares.max(1) as u64,
        )
    }

    pub fn short_cells(&self) -> impl Iterator<Item = &CellCoverage> {
        self.cells.iter().filter(|c| !c.is_full())
    }
}

/// Union of footprints per cell. Footprints stop at the cell border, and
/// a grid without a placement counts as fully uncovered.
pub fn coverage(placements: &[Placement], grids: &[InternalGrid]) -> CoverageReport {
    let mut by_cell: BTreeMap<CellId, Vec<SquarePos>> = BTreeMap::new();
    for p in placements {
        by_cell
            .entry(p.cell)
            .or_default()
            .extend(p.squares.iter().copied());
    }
    let mut ordered: Vec<&InternalGrid> = grids.iter().collect();
    ordered.sort_by_key(|g| g.cell);
    let mut cells = Vec::with_capacity(ordered.len());
    for g in ordered {
        let centers = by_cell.get(&g.cell).map(Vec::as_slice).unwrap_or(&[]);
        let covered: BTreeSet<SquarePos> = centers
            .iter()
            .filter(|c| g.contains(**c))
            .flat_map(|c| footprint(*c, g.n).covered)
            .collect();
        let uncovered = g.positions().filter(|p| !covered.contains(p)).collect();
        cells.push(CellCoverage {
            cell: g.cell,
            n: g.n,
            antennas: centers.len(),
            covered: covered.len(),
            total: g.n * g.n,
            uncovered,
        });
    }
    CoverageReport {
        total_squares: cells.iter().map(|c| c.total).sum(),
        covered_squares: cells.iter().map(|c| c.covered).sum(),
        antennas: cells.iter().map(|c| c.antennas).sum(),
        cells,
    }
}
