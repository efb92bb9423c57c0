//! Priority classes, suitability, ratio of goodness and placement
//! selection for one cell.
//!
//! A square's goodness is its class score (100 for interior squares, 50
//! for border squares) plus a suitability percentage. Suitability is the
//! weighted mean of per-type table entries, each type weighted by how much
//! of the square it occupies.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::coverage::union_size;
use crate::grid::{CellId, InternalGrid, SquarePos};
use crate::miner::AssociationRule;
use crate::spatialdb::{Item, ObjectType, Occupancy, SquareRecord};

/// Share of a square credited to a point object.
pub const POINT_WEIGHT: f64 = 0.05;
/// Share of a square credited to a line object.
pub const LINE_WEIGHT: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScoringError {
    #[error("position ({x}, {y}) is outside a {n}x{n} grid")]
    OutOfRange { x: usize, y: usize, n: usize },
    #[error("cell {row},{col} has no scored squares")]
    EmptyCell { row: usize, col: usize },
    #[error("suitability must lie in 0..=100, got {0}")]
    InvalidPercent(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PriorityClass {
    First,
    Second,
}

/// Border squares are second priority, interior squares first.
pub fn classify(pos: SquarePos, n: usize) -> Result<PriorityClass, ScoringError> {
    if !(1..=n).contains(&pos.x) || !(1..=n).contains(&pos.y) {
        return Err(ScoringError::OutOfRange {
            x: pos.x,
            y: pos.y,
            n,
        });
    }
    if pos.x == 1 || pos.x == n || pos.y == 1 || pos.y == n {
        Ok(PriorityClass::Second)
    } else {
        Ok(PriorityClass::First)
    }
}

pub fn class_score(class: PriorityClass) -> u32 {
    match class {
        PriorityClass::First => 100,
        PriorityClass::Second => 50,
    }
}

/// Placement friendliness per object type, in percent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuitabilityTable {
    entries: [u32; 11],
    /// Applied to the part of a square no object occupies.
    pub empty_terrain: u32,
    /// Suitability of a square with no objects at all.
    pub empty_square: u32,
}

impl Default for SuitabilityTable {
    fn default() -> Self {
        SuitabilityTable {
            // town road river sea lake mine forest bridge highway peak trough
            entries: [20, 60, 40, 50, 40, 30, 55, 35, 60, 90, 10],
            empty_terrain: 50,
            empty_square: 50,
        }
    }
}

impl SuitabilityTable {
    pub fn get(&self, t: ObjectType) -> u32 {
        self.entries[usize::from(t.code()) - 1]
    }

    pub fn set(&mut self, t: ObjectType, percent: u32) -> Result<(), ScoringError> {
        if percent > 100 {
            return Err(ScoringError::InvalidPercent(percent));
        }
        self.entries[usize::from(t.code()) - 1] = percent;
        Ok(())
    }

    pub fn set_empty_terrain(&mut self, percent: u32) -> Result<(), ScoringError> {
        if percent > 100 {
            return Err(ScoringError::InvalidPercent(percent));
        }
        self.empty_terrain = percent;
        Ok(())
    }

    pub fn set_empty_square(&mut self, percent: u32) -> Result<(), ScoringError> {
        if percent > 100 {
            return Err(ScoringError::InvalidPercent(percent));
        }
        self.empty_square = percent;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Suitability {
    pub percent: u32,
    /// Weight per present type, ascending by type code.
    pub weights: Vec<(ObjectType, f64)>,
    pub empty_terrain_weight: f64,
    pub dominant_by_area: Option<ObjectType>,
    pub dominant_by_rules: Option<ObjectType>,
}

impl Suitability {
    /// Rules and area agree on the square's dominant type, or there are
    /// no rules to disagree.
    pub fn consistent(&self) -> bool {
        match (self.dominant_by_rules, self.dominant_by_area) {
            (Some(r), Some(a)) => r == a,
            _ => true,
        }
    }
}

fn argmax_type<I: IntoIterator<Item = (ObjectType, f64)>>(it: I) -> Option<ObjectType> {
    let mut best: Option<(ObjectType, f64)> = None;
    for (t, w) in it {
        // Iteration is ascending by type, so `>` keeps the lower code on ties.
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((t, w));
        }
    }
    best.map(|(t, _)| t)
}

/// Weighted suitability of one square.
///
/// Polygons weigh their clipped area fraction. Points and lines take
/// nominal shares ([`POINT_WEIGHT`], [`LINE_WEIGHT`]) out of the area no
/// polygon covers, scaled down when that area is too small; whatever is
/// left is empty terrain. Rules only cross-check the dominant type.
pub fn suitability(
    records: &[SquareRecord],
    rules: &[AssociationRule<Item>],
    table: &SuitabilityTable,
) -> Suitability {
    if records.is_empty() {
        return Suitability {
            percent: table.empty_square,
            weights: Vec::new(),
            empty_terrain_weight: 1.0,
            dominant_by_area: None,
            dominant_by_rules: None,
        };
    }
    let mut areal: BTreeMap<ObjectType, f64> = BTreeMap::new();
    let mut nominal: BTreeMap<ObjectType, f64> = BTreeMap::new();
    for r in records {
        match r.occupancy {
            Occupancy::Area(f) => *areal.entry(r.object_type).or_default() += f,
            Occupancy::Line => *nominal.entry(r.object_type).or_default() += LINE_WEIGHT,
            Occupancy::Point => *nominal.entry(r.object_type).or_default() += POINT_WEIGHT,
        }
    }
    let polygon_sum: f64 = areal.values().sum();
    if polygon_sum > 1.0 {
        // Overlapping polygons: share the whole square between them.
        areal.values_mut().for_each(|w| *w /= polygon_sum);
    }
    let remainder = (1.0 - polygon_sum).max(0.0);
    let nominal_sum: f64 = nominal.values().sum();
    if nominal_sum > remainder {
        let k = if nominal_sum > 0.0 {
            remainder / nominal_sum
        } else {
            0.0
        };
        nominal.values_mut().for_each(|w| *w *= k);
    }
    let empty_terrain_weight = (remainder - nominal_sum.min(remainder)).max(0.0);

    let mut weights: BTreeMap<ObjectType, f64> = areal;
    for (t, w) in nominal {
        *weights.entry(t).or_default() += w;
    }
    let value: f64 = weights
        .iter()
        .map(|(t, w)| w * f64::from(table.get(*t)))
        .sum::<f64>()
        + empty_terrain_weight * f64::from(table.empty_terrain);
    let percent = (libm::round(value).clamp(0.0, 100.0)) as u32;

    let weights: Vec<(ObjectType, f64)> = weights.into_iter().collect();
    let dominant_by_area = argmax_type(weights.iter().copied());

    let mut mentions: BTreeMap<ObjectType, f64> = BTreeMap::new();
    for rule in rules {
        for item in rule.antecedent.iter().chain(rule.consequent.iter()) {
            if let Item::Type(t) = item {
                *mentions.entry(*t).or_default() += 1.0;
            }
        }
    }
    // A tie between types gives no verdict.
    let top = mentions.values().cloned().fold(0.0, f64::max);
    let leaders: Vec<ObjectType> = mentions
        .iter()
        .filter(|(_, c)| **c == top)
        .map(|(t, _)| *t)
        .collect();
    let dominant_by_rules = match leaders.as_slice() {
        [only] => Some(*only),
        _ => None,
    };

    let s = Suitability {
        percent,
        weights,
        empty_terrain_weight,
        dominant_by_area,
        dominant_by_rules,
    };
    if !s.consistent() {
        log::warn!(
            "rules point to {:?} but area is dominated by {:?}; using area",
            s.dominant_by_rules,
            s.dominant_by_area
        );
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GoodnessScore {
    pub class_component: u32,
    pub suitability_component: u32,
}

impl GoodnessScore {
    pub fn new(class_component: u32, suitability_component: u32) -> Self {
        GoodnessScore {
            class_component,
            suitability_component,
        }
    }

    pub fn total(&self) -> u32 {
        self.class_component + self.suitability_component
    }
}

pub fn goodness(
    pos: SquarePos,
    n: usize,
    suitability_percent: u32,
) -> Result<GoodnessScore, ScoringError> {
    if suitability_percent > 100 {
        return Err(ScoringError::InvalidPercent(suitability_percent));
    }
    let class = classify(pos, n)?;
    Ok(GoodnessScore::new(class_score(class), suitability_percent))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScoredSquare {
    pub pos: SquarePos,
    pub class: PriorityClass,
    pub score: GoodnessScore,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlacementMode {
    Single,
    Dual,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Placement {
    pub cell: CellId,
    pub mode: PlacementMode,
    pub squares: Vec<SquarePos>,
    pub scores: Vec<GoodnessScore>,
    /// False when the best square fell below the threshold, whether or not
    /// a dual placement was possible.
    pub meets_threshold: bool,
}

/// Squared distance from a square's center to the cell centroid, in units
/// where symmetric positions compare exactly equal.
fn centroid_distance(grid: &InternalGrid, pos: SquarePos) -> f64 {
    let n = grid.n as f64;
    let w = grid.bounds.width() / n;
    let h = grid.bounds.height() / n;
    let dx = (2.0 * pos.y as f64 - n - 1.0) * w;
    let dy = (2.0 * pos.x as f64 - n - 1.0) * h;
    dx * dx + dy * dy
}

/// Picks the placement for one cell. The highest goodness wins (ties go
/// to the square nearest the cell centroid, then the lowest position). If
/// it is below `threshold`, two border squares are taken instead: the
/// pair whose footprints cover the most squares, then the highest summed
/// goodness, then the lowest pair.
pub fn select_placement(
    grid: &InternalGrid,
    scored: &[ScoredSquare],
    threshold: u32,
) -> Result<Placement, ScoringError> {
    let mut squares: Vec<ScoredSquare> = scored.to_vec();
    squares.sort_by_key(|s| s.pos);
    squares.dedup_by_key(|s| s.pos);
    let best = squares
        .iter()
        .min_by(|a, b| {
            b.score
                .total()
                .cmp(&a.score.total())
                .then_with(|| {
                    centroid_distance(grid, a.pos)
                        .partial_cmp(&centroid_distance(grid, b.pos))
                        .unwrap_or(Ordering::Equal)
                })
                .then_with(|| a.pos.cmp(&b.pos))
        })
        .ok_or(ScoringError::EmptyCell {
            row: grid.cell.row,
            col: grid.cell.col,
        })?;
    let single = Placement {
        cell: grid.cell,
        mode: PlacementMode::Single,
        squares: alloc::vec![best.pos],
        scores: alloc::vec![best.score],
        meets_threshold: best.score.total() >= threshold,
    };
    if single.meets_threshold {
        return Ok(single);
    }

    let border: Vec<&ScoredSquare> = squares
        .iter()
        .filter(|s| s.class == PriorityClass::Second)
        .collect();
    let mut best_pair: Option<((usize, u32), (usize, usize))> = None;
    for i in 0..border.len() {
        for j in i + 1..border.len() {
            let key = (
                union_size(&[border[i].pos, border[j].pos], grid.n),
                border[i].score.total() + border[j].score.total(),
            );
            // Pairs are visited in lexicographic order, so only a strictly
            // better key replaces the incumbent.
            if best_pair.is_none_or(|(k, _)| key > k) {
                best_pair = Some((key, (i, j)));
            }
        }
    }
    Ok(match best_pair {
        Some((_, (i, j))) => Placement {
            cell: grid.cell,
            mode: PlacementMode::Dual,
            squares: alloc::vec![border[i].pos, border[j].pos],
            scores: alloc::vec![border[i].score, border[j].score],
            meets_threshold: false,
        },
        None => single,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::spatialdb::{Level, ShapeCode, SizeClass};
    use alloc::string::String;
    use alloc::vec;

    fn grid(n: usize) -> InternalGrid {
        InternalGrid {
            cell: CellId { row: 0, col: 0 },
            bounds: Rect::new(0.0, 0.0, n as f64 * 400.0, n as f64 * 400.0),
            n,
            square_side_m: 400.0,
        }
    }

    fn record(t: ObjectType, occupancy: Occupancy) -> SquareRecord {
        let shape = match occupancy {
            Occupancy::Area(_) => ShapeCode::Polygon,
            Occupancy::Line => ShapeCode::Line,
            Occupancy::Point => ShapeCode::Point,
        };
        SquareRecord {
            object_id: String::from("O1"),
            object_type: t,
            size: SizeClass::Large,
            shape,
            direction: None,
            position: None,
            distance: None,
            population: Level::High,
            employment: Level::High,
            occupancy,
        }
    }

    fn score_all(g: &InternalGrid, f: impl Fn(SquarePos) -> u32) -> Vec<ScoredSquare> {
        g.positions()
            .map(|pos| ScoredSquare {
                pos,
                class: classify(pos, g.n).unwrap(),
                score: goodness(pos, g.n, f(pos)).unwrap(),
            })
            .collect()
    }

    #[test]
    fn classification() {
        assert_eq!(classify(SquarePos::new(3, 3), 5), Ok(PriorityClass::First));
        assert_eq!(classify(SquarePos::new(1, 4), 5), Ok(PriorityClass::Second));
        for n in 1..=2 {
            for x in 1..=n {
                for y in 1..=n {
                    assert_eq!(classify(SquarePos::new(x, y), n), Ok(PriorityClass::Second));
                }
            }
        }
        assert!(classify(SquarePos::new(0, 1), 3).is_err());
        assert!(classify(SquarePos::new(2, 4), 3).is_err());
    }

    #[test]
    fn class_scores() {
        assert_eq!(class_score(PriorityClass::First), 100);
        assert_eq!(class_score(PriorityClass::Second), 50);
        assert_eq!(class_score(classify(SquarePos::new(3, 3), 5).unwrap()), 100);
    }

    #[test]
    fn suitability_examples() {
        let t = SuitabilityTable::default();
        let sea = suitability(&[record(ObjectType::Sea, Occupancy::Area(1.0))], &[], &t);
        assert_eq!(sea.percent, 50);
        assert_eq!(suitability(&[], &[], &t).percent, 50);
        let mixed = suitability(
            &[
                record(ObjectType::Sea, Occupancy::Area(0.9)),
                record(ObjectType::Road, Occupancy::Line),
            ],
            &[],
            &t,
        );
        assert_eq!(mixed.percent, 51);
        assert_eq!(mixed.dominant_by_area, Some(ObjectType::Sea));
    }

    #[test]
    fn line_on_fully_covered_square_has_no_weight() {
        let t = SuitabilityTable::default();
        let s = suitability(
            &[
                record(ObjectType::Sea, Occupancy::Area(1.0)),
                record(ObjectType::Road, Occupancy::Line),
            ],
            &[],
            &t,
        );
        assert_eq!(s.percent, 50);
        assert_eq!(s.empty_terrain_weight, 0.0);
    }

    #[test]
    fn rules_disagreeing_with_area_are_flagged() {
        let t = SuitabilityTable::default();
        let rule = AssociationRule {
            antecedent: vec![Item::Type(ObjectType::Town)],
            consequent: vec![Item::Size(SizeClass::Large)],
            union_count: 1,
            antecedent_count: 1,
            total: 2,
        };
        let s = suitability(
            &[record(ObjectType::Sea, Occupancy::Area(0.9))],
            &[rule],
            &t,
        );
        assert!(!s.consistent());
        assert_eq!(s.percent, 50);
    }

    #[test]
    fn goodness_composition() {
        assert_eq!(goodness(SquarePos::new(3, 3), 5, 50).unwrap().total(), 150);
        assert_eq!(goodness(SquarePos::new(1, 1), 5, 50).unwrap().total(), 100);
        assert_eq!(goodness(SquarePos::new(2, 2), 5, 0).unwrap().total(), 100);
        assert!(goodness(SquarePos::new(2, 2), 5, 101).is_err());
    }

    #[test]
    fn single_placement_picks_argmax() {
        let g = grid(5);
        let scored = score_all(&g, |p| if p == SquarePos::new(3, 3) { 50 } else { 40 });
        let p = select_placement(&g, &scored, 100).unwrap();
        assert_eq!(p.mode, PlacementMode::Single);
        assert_eq!(p.squares, vec![SquarePos::new(3, 3)]);
        assert_eq!(p.scores[0].total(), 150);
    }

    #[test]
    fn ties_go_to_the_center() {
        for n in [3, 5, 7] {
            let g = grid(n);
            let scored: Vec<_> = g
                .positions()
                .map(|pos| ScoredSquare {
                    pos,
                    class: PriorityClass::First,
                    score: GoodnessScore::new(100, 50),
                })
                .collect();
            let p = select_placement(&g, &scored, 100).unwrap();
            assert_eq!(
                p.squares,
                vec![SquarePos::new(n.div_ceil(2), n.div_ceil(2))]
            );
        }
        // Even n: four squares tie on distance, the lowest position wins.
        let g = grid(4);
        let scored = score_all(&g, |_| 50);
        let p = select_placement(&g, &scored, 100).unwrap();
        assert_eq!(p.squares, vec![SquarePos::new(2, 2)]);
    }

    #[test]
    fn dual_fallback_on_three_by_three() {
        let g = grid(3);
        let scored = score_all(&g, |_| 50);
        let p = select_placement(&g, &scored, 170).unwrap();
        assert_eq!(p.mode, PlacementMode::Dual);
        assert!(!p.meets_threshold);
        assert_eq!(p.squares, vec![SquarePos::new(1, 2), SquarePos::new(3, 2)]);
        assert_eq!(union_size(&p.squares, 3), 9);
    }

    #[test]
    fn single_square_cell_cannot_go_dual() {
        let g = grid(1);
        let scored = score_all(&g, |_| 10);
        let p = select_placement(&g, &scored, 170).unwrap();
        assert_eq!(p.mode, PlacementMode::Single);
        assert!(!p.meets_threshold);
        assert_eq!(
            select_placement(&g, &[], 100),
            Err(ScoringError::EmptyCell { row: 0, col: 0 })
        );
    }
}
