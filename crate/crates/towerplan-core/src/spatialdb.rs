//! Coded spatial database: one record per (square, object) holding the
//! object's type/size/shape codes, its direction, position and distance
//! relation to the nearest other object in the square, and the
//! population/employment columns. Records encode into item-set
//! transactions for the miner.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use thiserror::Error;

use crate::geometry::{self, Geometry, GeometryError, GeometryKind};
use crate::grid::{InternalGrid, SquareId, SquarePos};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObjectType {
    Town = 1,
    Road = 2,
    River = 3,
    Sea = 4,
    Lake = 5,
    Mine = 6,
    Forest = 7,
    Bridge = 8,
    Highway = 9,
    Peak = 10,
    Trough = 11,
}

impl ObjectType {
    pub const ALL: [ObjectType; 11] = [
        ObjectType::Town,
        ObjectType::Road,
        ObjectType::River,
        ObjectType::Sea,
        ObjectType::Lake,
        ObjectType::Mine,
        ObjectType::Forest,
        ObjectType::Bridge,
        ObjectType::Highway,
        ObjectType::Peak,
        ObjectType::Trough,
    ];

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(usize::from(code).checked_sub(1)?).copied()
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectType::Town => "town",
            ObjectType::Road => "road",
            ObjectType::River => "river",
            ObjectType::Sea => "sea",
            ObjectType::Lake => "lake",
            ObjectType::Mine => "mine",
            ObjectType::Forest => "forest",
            ObjectType::Bridge => "bridge",
            ObjectType::Highway => "highway",
            ObjectType::Peak => "peak",
            ObjectType::Trough => "trough",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SizeClass {
    Large = 1,
    Medium = 2,
    Small = 3,
}

impl SizeClass {
    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(SizeClass::Large),
            2 => Some(SizeClass::Medium),
            3 => Some(SizeClass::Small),
            _ => None,
        }
    }

    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeCode {
    Point = 1,
    Line = 2,
    Polygon = 3,
}

impl ShapeCode {
    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(ShapeCode::Point),
            2 => Some(ShapeCode::Line),
            3 => Some(ShapeCode::Polygon),
            _ => None,
        }
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    fn matches(self, kind: GeometryKind) -> bool {
        matches!(
            (self, kind),
            (ShapeCode::Point, GeometryKind::Point)
                | (ShapeCode::Line, GeometryKind::Polyline)
                | (ShapeCode::Polygon, GeometryKind::Polygon)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    High,
    Medium,
    Low,
}

impl Level {
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "high" => Some(Level::High),
            "medium" => Some(Level::Medium),
            "low" => Some(Level::Low),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::High => "high",
            Level::Medium => "medium",
            Level::Low => "low",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObjectError {
    #[error("object {id}: {source}")]
    Geometry { id: String, source: GeometryError },
    #[error("object {id}: shape code {shape} does not match a {kind:?} geometry")]
    ShapeMismatch {
        id: String,
        shape: u8,
        kind: GeometryKind,
    },
}

/// One inventoried feature with its coded attributes.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialObject {
    pub id: String,
    pub object_type: ObjectType,
    pub size: SizeClass,
    pub shape: ShapeCode,
    pub geometry: Geometry,
    pub population: Level,
    pub employment: Level,
}

impl SpatialObject {
    pub fn new(
        id: impl Into<String>,
        object_type: ObjectType,
        size: SizeClass,
        shape: ShapeCode,
        geometry: Geometry,
        population: Level,
        employment: Level,
    ) -> Result<Self, ObjectError> {
        let id = id.into();
        if let Err(source) = geometry.validate() {
            return Err(ObjectError::Geometry { id, source });
        }
        if !shape.matches(geometry.kind()) {
            return Err(ObjectError::ShapeMismatch {
                id,
                shape: shape.code(),
                kind: geometry.kind(),
            });
        }
        Ok(SpatialObject {
            id,
            object_type,
            size,
            shape,
            geometry,
            population,
            employment,
        })
    }
}

/// Ordering of object labels that keeps `O2` before `O10`.
pub fn id_order(a: &str, b: &str) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Compass code A..H.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DirectionCode {
    /// north of
    A,
    /// south of
    B,
    /// east of
    C,
    /// west of
    D,
    /// north east of
    E,
    /// north west of
    F,
    /// south east of
    G,
    /// south west of
    H,
}

impl DirectionCode {
    // Clockwise from north.
    const SECTORS: [DirectionCode; 8] = [
        DirectionCode::A,
        DirectionCode::E,
        DirectionCode::C,
        DirectionCode::G,
        DirectionCode::B,
        DirectionCode::H,
        DirectionCode::D,
        DirectionCode::F,
    ];

    fn sector_index(self) -> usize {
        Self::SECTORS.iter().position(|c| *c == self).unwrap_or(0)
    }

    pub fn opposite(self) -> Self {
        Self::SECTORS[(self.sector_index() + 4) % 8]
    }

    pub fn letter(self) -> char {
        match self {
            DirectionCode::A => 'A',
            DirectionCode::B => 'B',
            DirectionCode::C => 'C',
            DirectionCode::D => 'D',
            DirectionCode::E => 'E',
            DirectionCode::F => 'F',
            DirectionCode::G => 'G',
            DirectionCode::H => 'H',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DirectionCode::A => "north of",
            DirectionCode::B => "south of",
            DirectionCode::C => "east of",
            DirectionCode::D => "west of",
            DirectionCode::E => "north east of",
            DirectionCode::F => "north west of",
            DirectionCode::G => "south east of",
            DirectionCode::H => "south west of",
        }
    }

    /// Sector of the bearing of `(dx, dy)` (east, north), measured
    /// clockwise from north. Sectors are 45° wide, centered on the compass
    /// points, and a boundary bearing belongs to the clockwise-next sector.
    ///
    /// Only the half-plane of bearings in [270°, 90°) is evaluated
    /// directly; the other half is the opposite of its negation, which
    /// makes `from_vector(-v) == from_vector(v).opposite()` hold exactly.
    pub fn from_vector(dx: f64, dy: f64) -> Option<Self> {
        if dx == 0.0 && dy == 0.0 {
            return None;
        }
        let canonical = dy > 0.0 || (dy == 0.0 && dx < 0.0);
        if !canonical {
            return Self::from_vector(-dx, -dy).map(Self::opposite);
        }
        let bearing = libm::atan2(dx, dy).to_degrees();
        let idx = libm::floor((bearing + 22.5) / 45.0) as i32;
        Some(Self::SECTORS[idx.rem_euclid(8) as usize])
    }
}

/// Topological position code I..V.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PositionCode {
    /// overlap
    I,
    /// meet
    II,
    /// covers
    III,
    /// covered by
    IV,
    /// disjoint
    V,
}

impl PositionCode {
    pub fn roman(self) -> &'static str {
        match self {
            PositionCode::I => "I",
            PositionCode::II => "II",
            PositionCode::III => "III",
            PositionCode::IV => "IV",
            PositionCode::V => "V",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PositionCode::I => "overlap",
            PositionCode::II => "meet",
            PositionCode::III => "covers",
            PositionCode::IV => "covered by",
            PositionCode::V => "disjoint",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error("direction undefined: centroids coincide")]
    CoincidentCentroids,
}

/// Compass sector of the bearing from `a`'s centroid to `b`'s centroid.
pub fn compute_direction(a: &Geometry, b: &Geometry) -> Result<DirectionCode, RelationError> {
    let (ca, cb) = (a.centroid(), b.centroid());
    DirectionCode::from_vector(cb.x - ca.x, cb.y - ca.y).ok_or(RelationError::CoincidentCentroids)
}

/// Position of `a` relative to `b`, first match wins: covers, covered by,
/// overlap (interiors meet), meet (only boundaries touch), disjoint.
pub fn compute_position(a: &Geometry, b: &Geometry) -> PositionCode {
    if geometry::covers(a, b) {
        PositionCode::III
    } else if geometry::covers(b, a) {
        PositionCode::IV
    } else if geometry::interiors_intersect(a, b) {
        PositionCode::I
    } else if geometry::intersects(a, b) {
        PositionCode::II
    } else {
        PositionCode::V
    }
}

/// Upper bounds of the distance bins, ascending; the last bin is open.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceBins {
    thresholds_m: Vec<f64>,
}

impl Default for DistanceBins {
    fn default() -> Self {
        DistanceBins {
            thresholds_m: alloc::vec![1_000.0, 10_000.0, 50_000.0],
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("distance bin thresholds must be positive and strictly ascending")]
pub struct BinsError;

impl DistanceBins {
    pub fn new(thresholds_m: Vec<f64>) -> Result<Self, BinsError> {
        let ascending = thresholds_m.windows(2).all(|w| w[0] < w[1]);
        if !ascending || thresholds_m.iter().any(|t| !t.is_finite() || *t <= 0.0) {
            return Err(BinsError);
        }
        Ok(DistanceBins { thresholds_m })
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds_m
    }

    pub fn label(&self, meters: f64) -> String {
        match self.thresholds_m.iter().find(|t| meters < **t) {
            Some(t) => format!("<{}", format_length(*t)),
            None => match self.thresholds_m.last() {
                Some(t) => format!("≥{}", format_length(*t)),
                None => String::from("any"),
            },
        }
    }
}

fn format_length(m: f64) -> String {
    if m >= 1000.0 && libm::fmod(m, 1000.0) == 0.0 {
        format!("{}km", m / 1000.0)
    } else {
        format!("{}m", m)
    }
}

/// Minimum distance between the geometries and its bin label.
pub fn compute_distance(a: &Geometry, b: &Geometry, bins: &DistanceBins) -> (f64, String) {
    let d = geometry::distance(a, b);
    (d, bins.label(d))
}

/// An object's presence in one square.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    /// Index into the object list.
    pub object: usize,
    /// The object's geometry clipped to the square.
    pub clipped: Vec<Geometry>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assignments {
    pub squares: BTreeMap<SquarePos, Vec<Assignment>>,
    /// Objects that touch no square of the grid.
    pub omitted: Vec<usize>,
}

/// Lists every object under each square its geometry reaches. Points go
/// to the single square that owns them; lines and polygons to every
/// square holding a piece of positive length or area.
pub fn assign_objects(objects: &[SpatialObject], grid: &InternalGrid) -> Assignments {
    let mut out = Assignments::default();
    for (idx, obj) in objects.iter().enumerate() {
        let mut placed = false;
        match &obj.geometry {
            Geometry::Point(p) => {
                if let Some(pos) = grid.locate(*p) {
                    out.squares.entry(pos).or_default().push(Assignment {
                        object: idx,
                        clipped: alloc::vec![obj.geometry.clone()],
                    });
                    placed = true;
                }
            }
            g => {
                let bb = g.bounding_rect();
                for sq in grid.squares() {
                    let b = sq.bounds;
                    if bb.max_x < b.min_x
                        || bb.min_x > b.max_x
                        || bb.max_y < b.min_y
                        || bb.min_y > b.max_y
                    {
                        continue;
                    }
                    let clipped = g.clip(&b);
                    if !clipped.is_empty() {
                        out.squares.entry(sq.pos).or_default().push(Assignment {
                            object: idx,
                            clipped,
                        });
                        placed = true;
                    }
                }
            }
        }
        if !placed {
            out.omitted.push(idx);
        }
    }
    out
}

/// How much of its square an object occupies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Occupancy {
    /// Fraction of the square's area covered by the clipped polygon.
    Area(f64),
    Line,
    Point,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectionRelation {
    pub code: DirectionCode,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PositionRelation {
    pub code: PositionCode,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceRelation {
    pub target: String,
    pub meters: f64,
    pub bin: String,
}

/// One row of a square's flat database.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareRecord {
    pub object_id: String,
    pub object_type: ObjectType,
    pub size: SizeClass,
    pub shape: ShapeCode,
    /// Where this object lies relative to the target, e.g. `(B, O2)` reads
    /// "south of O2".
    pub direction: Option<DirectionRelation>,
    pub position: Option<PositionRelation>,
    pub distance: Option<DistanceRelation>,
    pub population: Level,
    pub employment: Level,
    pub occupancy: Occupancy,
}

/// Builds the rows for one square. Each object is related to its nearest
/// other object in the square (ties broken by object id); a lone object
/// gets no relation fields, and coincident centroids leave the direction
/// empty.
pub fn build_square_database(
    square: &SquareId,
    objects: &[SpatialObject],
    assigned: &[Assignment],
    bins: &DistanceBins,
) -> Vec<SquareRecord> {
    let n = assigned.len();
    let mut dist = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = geometry::distance(
                &objects[assigned[i].object].geometry,
                &objects[assigned[j].object].geometry,
            );
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    let square_area = square.bounds.area();
    (0..n)
        .map(|i| {
            let obj = &objects[assigned[i].object];
            let nearest = (0..n).filter(|&j| j != i).min_by(|&j, &k| {
                dist[i * n + j]
                    .partial_cmp(&dist[i * n + k])
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| {
                        id_order(
                            &objects[assigned[j].object].id,
                            &objects[assigned[k].object].id,
                        )
                    })
            });
            let (direction, position, distance) = match nearest {
                None => (None, None, None),
                Some(j) => {
                    let other = &objects[assigned[j].object];
                    let target = other.id.clone();
                    // Direction names where this object lies as seen from
                    // the target.
                    let direction =
                        compute_direction(&other.geometry, &obj.geometry)
                            .ok()
                            .map(|code| DirectionRelation {
                                code,
                                target: target.clone(),
                            });
                    let position = PositionRelation {
                        code: compute_position(&obj.geometry, &other.geometry),
                        target: target.clone(),
                    };
                    let meters = dist[i * n + j];
                    let distance = DistanceRelation {
                        target,
                        meters,
                        bin: bins.label(meters),
                    };
                    (direction, Some(position), Some(distance))
                }
            };
            let occupancy = match obj.shape {
                ShapeCode::Point => Occupancy::Point,
                ShapeCode::Line => Occupancy::Line,
                ShapeCode::Polygon => {
                    let area: f64 = assigned[i].clipped.iter().map(Geometry::area).sum();
                    Occupancy::Area(if square_area > 0.0 {
                        (area / square_area).min(1.0)
                    } else {
                        0.0
                    })
                }
            };
            SquareRecord {
                object_id: obj.id.clone(),
                object_type: obj.object_type,
                size: obj.size,
                shape: obj.shape,
                direction,
                position,
                distance,
                population: obj.population,
                employment: obj.employment,
                occupancy,
            }
        })
        .collect()
}

/// Attribute item of a transaction. Variant order is the attribute rank
/// used for canonical item ordering.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Item {
    Type(ObjectType),
    Size(SizeClass),
    Direction(DirectionCode, String),
    Position(PositionCode, String),
    Distance { target: String, bin: String },
    Population(Level),
    Employment(Level),
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Type(t) => write!(f, "type={}", t.code()),
            Item::Size(s) => write!(f, "size={}", s.code()),
            Item::Direction(c, t) => write!(f, "dir={}:{}", c.letter(), t),
            Item::Position(c, t) => write!(f, "pos={}:{}", c.roman(), t),
            Item::Distance { target, bin } => write!(f, "dist={}:{}", target, bin),
            Item::Population(l) => write!(f, "pop={}", l.name()),
            Item::Employment(l) => write!(f, "emp={}", l.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transaction {
    pub square: SquarePos,
    pub object_id: String,
    /// Sorted, without duplicates.
    pub items: Vec<Item>,
}

/// One transaction per record. Shape is not a column of the flat table and
/// empty relation fields emit nothing.
pub fn encode_transactions(square: SquarePos, records: &[SquareRecord]) -> Vec<Transaction> {
    records
        .iter()
        .map(|r| {
            let mut items = alloc::vec![
                Item::Type(r.object_type),
                Item::Size(r.size),
                Item::Population(r.population),
                Item::Employment(r.employment),
            ];
            if let Some(d) = &r.direction {
                items.push(Item::Direction(d.code, d.target.clone()));
            }
            if let Some(p) = &r.position {
                items.push(Item::Position(p.code, p.target.clone()));
            }
            if let Some(d) = &r.distance {
                items.push(Item::Distance {
                    target: d.target.clone(),
                    bin: d.bin.clone(),
                });
            }
            items.sort();
            items.dedup();
            Transaction {
                square,
                object_id: r.object_id.to_string(),
                items,
            }
        })
        .collect()
}
