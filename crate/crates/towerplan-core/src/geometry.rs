//! Planar geometry in meters: points, polylines and simple polygons.
//!
//! Predicates are evaluated exactly on segment arithmetic. Containment and
//! interior tests split every edge at the other geometry's crossings and
//! classify the resulting sub-edge midpoints, which handles non-convex
//! simple polygons without triangulating them.

use alloc::vec::Vec;

use thiserror::Error;

/// Distance below which two boundaries are considered to touch.
pub const TOUCH_TOLERANCE_M: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }

    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    fn lerp(self, o: Point, t: f64) -> Point {
        Point::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }
}

/// Axis-aligned rectangle, `min` is the lower-left corner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Rect {
    pub const fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Self {
        Rect {
            min_x,
            min_y,
            max_x,
            max_y,
        }
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point {
        Point::new(
            (self.min_x + self.max_x) / 2.0,
            (self.min_y + self.max_y) / 2.0,
        )
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min_x && p.x <= self.max_x && p.y >= self.min_y && p.y <= self.max_y
    }

    /// True when the two rectangles share interior area.
    pub fn overlaps(&self, other: &Rect) -> bool {
        self.min_x < other.max_x
            && other.min_x < self.max_x
            && self.min_y < other.max_y
            && other.min_y < self.max_y
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.min_x, self.min_y),
            Point::new(self.max_x, self.min_y),
            Point::new(self.max_x, self.max_y),
            Point::new(self.min_x, self.max_y),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeometryKind {
    Point,
    Polyline,
    Polygon,
}

/// A point, an open polyline, or a simple polygon given by its ring
/// (the closing vertex is implicit).
#[derive(Clone, Debug, PartialEq)]
pub enum Geometry {
    Point(Point),
    Polyline(Vec<Point>),
    Polygon(Vec<Point>),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("coordinate is not finite")]
    NonFinite,
    #[error("polyline needs at least two distinct vertices")]
    DegeneratePolyline,
    #[error("polygon needs at least three vertices enclosing a positive area")]
    DegeneratePolygon,
}

impl Geometry {
    /// Builds a polygon, dropping a repeated closing vertex if present.
    pub fn polygon(mut ring: Vec<Point>) -> Self {
        if ring.len() > 1 && ring.first() == ring.last() {
            ring.pop();
        }
        Geometry::Polygon(ring)
    }

    pub fn rect(r: &Rect) -> Self {
        Geometry::Polygon(r.corners().to_vec())
    }

    pub fn kind(&self) -> GeometryKind {
        match self {
            Geometry::Point(_) => GeometryKind::Point,
            Geometry::Polyline(_) => GeometryKind::Polyline,
            Geometry::Polygon(_) => GeometryKind::Polygon,
        }
    }

    pub fn vertices(&self) -> &[Point] {
        match self {
            Geometry::Point(p) => core::slice::from_ref(p),
            Geometry::Polyline(v) | Geometry::Polygon(v) => v,
        }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if self
            .vertices()
            .iter()
            .any(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return Err(GeometryError::NonFinite);
        }
        match self {
            Geometry::Point(_) => Ok(()),
            Geometry::Polyline(v) => {
                if v.len() < 2 || self.length() <= 0.0 {
                    Err(GeometryError::DegeneratePolyline)
                } else {
                    Ok(())
                }
            }
            Geometry::Polygon(v) => {
                if v.len() < 3 || self.area() <= 0.0 {
                    Err(GeometryError::DegeneratePolygon)
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Edges as (start, end) pairs. A point yields one zero-length edge.
    pub fn segments(&self) -> Vec<(Point, Point)> {
        match self {
            Geometry::Point(p) => alloc::vec![(*p, *p)],
            Geometry::Polyline(v) => v.windows(2).map(|w| (w[0], w[1])).collect(),
            Geometry::Polygon(v) => (0..v.len()).map(|i| (v[i], v[(i + 1) % v.len()])).collect(),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Geometry::Polygon(v) => libm::fabs(signed_area(v)),
            _ => 0.0,
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Geometry::Point(_) => 0.0,
            g => g.segments().iter().map(|(a, b)| a.distance(*b)).sum(),
        }
    }

    pub fn bounding_rect(&self) -> Rect {
        let mut r = Rect::new(
            f64::INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::NEG_INFINITY,
        );
        for p in self.vertices() {
            r.min_x = r.min_x.min(p.x);
            r.min_y = r.min_y.min(p.y);
            r.max_x = r.max_x.max(p.x);
            r.max_y = r.max_y.max(p.y);
        }
        r
    }

    /// Area centroid for polygons, length-weighted centroid for polylines.
    pub fn centroid(&self) -> Point {
        match self {
            Geometry::Point(p) => *p,
            Geometry::Polyline(_) => {
                let total = self.length();
                if total <= 0.0 {
                    return vertex_mean(self.vertices());
                }
                let (mut cx, mut cy) = (0.0, 0.0);
                for (a, b) in self.segments() {
                    let l = a.distance(b);
                    cx += (a.x + b.x) / 2.0 * l;
                    cy += (a.y + b.y) / 2.0 * l;
                }
                Point::new(cx / total, cy / total)
            }
            Geometry::Polygon(v) => {
                let a = signed_area(v);
                if libm::fabs(a) <= f64::EPSILON {
                    return vertex_mean(v);
                }
                // Offsetting by the first vertex keeps the cross products small.
                let o = v[0];
                let (mut cx, mut cy) = (0.0, 0.0);
                for i in 0..v.len() {
                    let p = v[i].sub(o);
                    let q = v[(i + 1) % v.len()].sub(o);
                    let c = p.x * q.y - q.x * p.y;
                    cx += (p.x + q.x) * c;
                    cy += (p.y + q.y) * c;
                }
                Point::new(o.x + cx / (6.0 * a), o.y + cy / (6.0 * a))
            }
        }
    }

    /// Part of the geometry inside `rect`. Polygons are clipped with
    /// Sutherland-Hodgman (area exact, may carry zero-width bridges for
    /// non-convex input); polylines may split into several pieces.
    pub fn clip(&self, rect: &Rect) -> Vec<Geometry> {
        match self {
            Geometry::Point(p) => {
                if rect.contains(*p) {
                    alloc::vec![Geometry::Point(*p)]
                } else {
                    Vec::new()
                }
            }
            Geometry::Polyline(_) => clip_polyline(self, rect),
            Geometry::Polygon(v) => {
                let ring = clip_ring(v, rect);
                if ring.len() >= 3 && libm::fabs(signed_area(&ring)) > 0.0 {
                    alloc::vec![Geometry::Polygon(ring)]
                } else {
                    Vec::new()
                }
            }
        }
    }
}

fn vertex_mean(v: &[Point]) -> Point {
    let n = v.len() as f64;
    let (sx, sy) = v
        .iter()
        .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
    Point::new(sx / n, sy / n)
}

fn signed_area(v: &[Point]) -> f64 {
    if v.len() < 3 {
        return 0.0;
    }
    let o = v[0];
    let mut s = 0.0;
    for i in 1..v.len() - 1 {
        let p = v[i].sub(o);
        let q = v[i + 1].sub(o);
        s += p.x * q.y - q.x * p.y;
    }
    s / 2.0
}

fn cross(a: Point, b: Point) -> f64 {
    a.x * b.y - a.y * b.x
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    cross(b.sub(a), c.sub(a))
}

pub(crate) fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.x * ab.x + ab.y * ab.y;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2;
    p.distance(a.lerp(b, t.clamp(0.0, 1.0)))
}

fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
}

fn segment_distance(a: Point, b: Point, c: Point, d: Point) -> f64 {
    if segments_cross(a, b, c, d) {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

/// Parameters along `a→b` where it meets segment `c→d` (crossing point,
/// touching endpoints, or both ends of a collinear overlap).
fn hit_params(a: Point, b: Point, c: Point, d: Point, out: &mut Vec<f64>) {
    let r = b.sub(a);
    let len2 = r.x * r.x + r.y * r.y;
    if len2 == 0.0 {
        return;
    }
    let s = d.sub(c);
    let denom = cross(r, s);
    let ca = c.sub(a);
    let scale = libm::sqrt(len2) * libm::hypot(s.x, s.y);
    if libm::fabs(denom) > 1e-12 * scale {
        let t = cross(ca, s) / denom;
        let u = cross(ca, r) / denom;
        if (-1e-12..=1.0 + 1e-12).contains(&t) && (-1e-12..=1.0 + 1e-12).contains(&u) {
            out.push(t.clamp(0.0, 1.0));
        }
    }
    // Endpoints of the other segment that lie on this one; covers the
    // collinear case and near-parallel touches.
    for p in [c, d] {
        if point_segment_distance(p, a, b) < TOUCH_TOLERANCE_M {
            let t = ((p.x - a.x) * r.x + (p.y - a.y) * r.y) / len2;
            out.push(t.clamp(0.0, 1.0));
        }
    }
}

/// Sample points along each segment of `g`: the vertices plus the
/// midpoints of every piece obtained by splitting at `other`'s edges.
fn split_samples(g: &Geometry, other: &Geometry) -> (Vec<Point>, Vec<Point>) {
    let other_segs = other.segments();
    let mut vertices = Vec::new();
    let mut mids = Vec::new();
    for (a, b) in g.segments() {
        let mut ts = alloc::vec![0.0, 1.0];
        for &(c, d) in &other_segs {
            hit_params(a, b, c, d, &mut ts);
        }
        ts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
        ts.dedup_by(|x, y| libm::fabs(*x - *y) < 1e-12);
        vertices.push(a);
        for w in ts.windows(2) {
            mids.push(a.lerp(b, (w[0] + w[1]) / 2.0));
        }
    }
    if let Geometry::Polyline(v) = g {
        if let Some(last) = v.last() {
            vertices.push(*last);
        }
    }
    (vertices, mids)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// Locates `p` against a polygon ring, with a boundary band of
/// [`TOUCH_TOLERANCE_M`].
pub fn locate_in_ring(p: Point, ring: &[Point]) -> Location {
    let n = ring.len();
    for i in 0..n {
        if point_segment_distance(p, ring[i], ring[(i + 1) % n]) < TOUCH_TOLERANCE_M {
            return Location::Boundary;
        }
    }
    let mut inside = false;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

fn distance_to_path(p: Point, g: &Geometry) -> f64 {
    g.segments()
        .iter()
        .map(|&(a, b)| point_segment_distance(p, a, b))
        .fold(f64::INFINITY, f64::min)
}

/// Minimum Euclidean distance between two geometries; zero when they
/// intersect (including containment).
pub fn distance(a: &Geometry, b: &Geometry) -> f64 {
    if let Geometry::Polygon(ring) = a {
        if b.vertices()
            .iter()
            .any(|&p| locate_in_ring(p, ring) != Location::Outside)
        {
            return 0.0;
        }
    }
    if let Geometry::Polygon(ring) = b {
        if a.vertices()
            .iter()
            .any(|&p| locate_in_ring(p, ring) != Location::Outside)
        {
            return 0.0;
        }
    }
    let bs = b.segments();
    let mut best = f64::INFINITY;
    for (p, q) in a.segments() {
        for &(r, s) in &bs {
            best = best.min(segment_distance(p, q, r, s));
            if best == 0.0 {
                return 0.0;
            }
        }
    }
    best
}

/// Closures intersect (within the touch tolerance).
pub fn intersects(a: &Geometry, b: &Geometry) -> bool {
    distance(a, b) < TOUCH_TOLERANCE_M
}

/// `b` lies entirely within the closure of `a`.
pub fn covers(a: &Geometry, b: &Geometry) -> bool {
    match a {
        Geometry::Point(p) => b
            .vertices()
            .iter()
            .all(|q| p.distance(*q) < TOUCH_TOLERANCE_M),
        Geometry::Polyline(_) => {
            if matches!(b, Geometry::Polygon(_)) {
                return false;
            }
            let (verts, mids) = split_samples(b, a);
            verts
                .iter()
                .chain(mids.iter())
                .all(|&p| distance_to_path(p, a) < TOUCH_TOLERANCE_M)
        }
        Geometry::Polygon(ring) => {
            let (verts, mids) = split_samples(b, a);
            verts
                .iter()
                .chain(mids.iter())
                .all(|&p| locate_in_ring(p, ring) != Location::Outside)
        }
    }
}

/// Boundary points of a geometry: polyline end vertices (unless closed).
fn end_points(g: &Geometry) -> Vec<Point> {
    match g {
        Geometry::Polyline(v) if v.len() >= 2 && v.first() != v.last() => {
            alloc::vec![v[0], v[v.len() - 1]]
        }
        _ => Vec::new(),
    }
}

fn line_interiors_meet(a: &Geometry, b: &Geometry) -> bool {
    let ends: Vec<Point> = end_points(a).into_iter().chain(end_points(b)).collect();
    let bs = b.segments();
    for (p, q) in a.segments() {
        for &(r, s) in &bs {
            let mut ts = Vec::new();
            hit_params(p, q, r, s, &mut ts);
            if ts.is_empty() {
                continue;
            }
            let lo = ts.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            // A collinear overlap of positive length always holds interior
            // points of both lines.
            if p.lerp(q, lo).distance(p.lerp(q, hi)) >= TOUCH_TOLERANCE_M {
                return true;
            }
            let hit = p.lerp(q, lo);
            if ends.iter().all(|e| e.distance(hit) >= TOUCH_TOLERANCE_M) {
                return true;
            }
        }
    }
    false
}

fn path_enters_polygon(path: &Geometry, ring: &[Point], polygon: &Geometry) -> bool {
    let (verts, mids) = split_samples(path, polygon);
    verts
        .iter()
        .chain(mids.iter())
        .any(|&p| locate_in_ring(p, ring) == Location::Inside)
}

/// Interiors share at least one point. Containment is assumed to have
/// been ruled out by the caller for polygon pairs whose boundaries
/// coincide everywhere.
pub fn interiors_intersect(a: &Geometry, b: &Geometry) -> bool {
    use Geometry::*;
    match (a, b) {
        (Point(p), Point(q)) => p.distance(*q) < TOUCH_TOLERANCE_M,
        (Point(p), l @ Polyline(_)) | (l @ Polyline(_), Point(p)) => {
            distance_to_path(*p, l) < TOUCH_TOLERANCE_M
                && end_points(l)
                    .iter()
                    .all(|e| e.distance(*p) >= TOUCH_TOLERANCE_M)
        }
        (Point(p), Polygon(ring)) | (Polygon(ring), Point(p)) => {
            locate_in_ring(*p, ring) == Location::Inside
        }
        (Polyline(_), Polyline(_)) => line_interiors_meet(a, b),
        (l @ Polyline(_), g @ Polygon(ring)) | (g @ Polygon(ring), l @ Polyline(_)) => {
            path_enters_polygon(l, ring, g)
        }
        (Polygon(ra), Polygon(rb)) => {
            path_enters_polygon(b, ra, a) || path_enters_polygon(a, rb, b)
        }
    }
}

fn clip_ring(ring: &[Point], rect: &Rect) -> Vec<Point> {
    // (axis, bound, keep_greater)
    let planes = [
        (0, rect.min_x, true),
        (0, rect.max_x, false),
        (1, rect.min_y, true),
        (1, rect.max_y, false),
    ];
    let mut out: Vec<Point> = ring.to_vec();
    for &(axis, bound, keep_greater) in &planes {
        if out.is_empty() {
            break;
        }
        let coord = |p: &Point| if axis == 0 { p.x } else { p.y };
        let inside = |p: &Point| {
            if keep_greater {
                coord(p) >= bound
            } else {
                coord(p) <= bound
            }
        };
        let input = core::mem::take(&mut out);
        for i in 0..input.len() {
            let cur = input[i];
            let prev = input[(i + input.len() - 1) % input.len()];
            let (ci, pi) = (inside(&cur), inside(&prev));
            if ci != pi {
                let t = (bound - coord(&prev)) / (coord(&cur) - coord(&prev));
                let mut x = prev.lerp(cur, t);
                if axis == 0 {
                    x.x = bound;
                } else {
                    x.y = bound;
                }
                out.push(x);
            }
            if ci {
                out.push(cur);
            }
        }
    }
    out
}

fn clip_polyline(g: &Geometry, rect: &Rect) -> Vec<Geometry> {
    let mut pieces: Vec<Vec<Point>> = Vec::new();
    let mut current: Vec<Point> = Vec::new();
    for (a, b) in g.segments() {
        match clip_segment(a, b, rect) {
            Some((p, q)) => {
                if current.last().is_some_and(|l| *l == p) {
                    current.push(q);
                } else {
                    if current.len() >= 2 {
                        pieces.push(core::mem::take(&mut current));
                    }
                    current = alloc::vec![p, q];
                }
            }
            None => {
                if current.len() >= 2 {
                    pieces.push(core::mem::take(&mut current));
                }
                current.clear();
            }
        }
    }
    if current.len() >= 2 {
        pieces.push(current);
    }
    pieces
        .into_iter()
        .map(Geometry::Polyline)
        .filter(|p| p.length() > 0.0)
        .collect()
}

/// Liang-Barsky segment clipping.
fn clip_segment(a: Point, b: Point, rect: &Rect) -> Option<(Point, Point)> {
    let d = b.sub(a);
    let mut t0: f64 = 0.0;
    let mut t1: f64 = 1.0;
    let checks = [
        (-d.x, a.x - rect.min_x),
        (d.x, rect.max_x - a.x),
        (-d.y, a.y - rect.min_y),
        (d.y, rect.max_y - a.y),
    ];
    for (p, q) in checks {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    let p = if t0 == 0.0 { a } else { a.lerp(b, t0) };
    let q = if t1 == 1.0 { b } else { a.lerp(b, t1) };
    Some((p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn square(x0: f64, y0: f64, s: f64) -> Geometry {
        Geometry::rect(&Rect::new(x0, y0, x0 + s, y0 + s))
    }

    #[test]
    fn centroid_of_square_and_line() {
        let c = square(0.0, 0.0, 2.0).centroid();
        assert!((c.x - 1.0).abs() < 1e-12 && (c.y - 1.0).abs() < 1e-12);
        let l = Geometry::Polyline(vec![Point::new(0.0, 0.0), Point::new(4.0, 0.0)]);
        assert_eq!(l.centroid(), Point::new(2.0, 0.0));
    }

    #[test]
    fn closing_vertex_is_dropped() {
        let g = Geometry::polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 0.0),
        ]);
        assert_eq!(g.vertices().len(), 3);
        assert!((g.area() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_degenerate_shapes() {
        let flat = Geometry::Polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
        ]);
        assert_eq!(flat.validate(), Err(GeometryError::DegeneratePolygon));
        let dot = Geometry::Polyline(vec![Point::new(1.0, 1.0), Point::new(1.0, 1.0)]);
        assert_eq!(dot.validate(), Err(GeometryError::DegeneratePolyline));
        let nan = Geometry::Point(Point::new(f64::NAN, 0.0));
        assert_eq!(nan.validate(), Err(GeometryError::NonFinite));
    }

    #[test]
    fn distances() {
        let a = Geometry::Point(Point::new(0.0, 0.0));
        let b = Geometry::Point(Point::new(3000.0, 0.0));
        assert_eq!(distance(&a, &b), 3000.0);
        assert_eq!(
            distance(&square(0.0, 0.0, 1.0), &square(1.0, 0.0, 1.0)),
            0.0
        );
        assert_eq!(
            distance(&square(0.0, 0.0, 10.0), &square(2.0, 2.0, 1.0)),
            0.0
        );
        assert_eq!(
            distance(&square(0.0, 0.0, 1.0), &square(3.0, 0.0, 1.0)),
            2.0
        );
    }

    #[test]
    fn non_convex_containment() {
        // U shape: the notch between the prongs is outside.
        let u = Geometry::Polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(3.0, 0.0),
            Point::new(3.0, 3.0),
            Point::new(2.0, 3.0),
            Point::new(2.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 3.0),
            Point::new(0.0, 3.0),
        ]);
        let in_notch = square(1.2, 1.5, 0.5);
        assert!(!covers(&u, &in_notch));
        assert!(!intersects(&u, &in_notch));
        let bridging = Geometry::Polyline(vec![Point::new(0.5, 2.0), Point::new(2.5, 2.0)]);
        assert!(!covers(&u, &bridging));
        assert!(interiors_intersect(&u, &bridging));
        let in_base = Geometry::Polyline(vec![Point::new(0.5, 0.5), Point::new(2.5, 0.5)]);
        assert!(covers(&u, &in_base));
    }

    #[test]
    fn touching_squares_do_not_share_interior() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(1.0, 0.0, 1.0);
        assert!(intersects(&a, &b));
        assert!(!interiors_intersect(&a, &b));
        let c = square(0.5, 0.5, 1.0);
        assert!(interiors_intersect(&a, &c));
    }

    #[test]
    fn polylines_meeting_at_ends_do_not_share_interior() {
        let a = Geometry::Polyline(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)]);
        let b = Geometry::Polyline(vec![Point::new(1.0, 0.0), Point::new(1.0, 1.0)]);
        assert!(!interiors_intersect(&a, &b));
        let c = Geometry::Polyline(vec![Point::new(0.5, -1.0), Point::new(0.5, 1.0)]);
        assert!(interiors_intersect(&a, &c));
    }

    #[test]
    fn clip_polygon_and_polyline() {
        let r = Rect::new(0.0, 0.0, 1.0, 1.0);
        let clipped = square(0.5, 0.5, 1.0).clip(&r);
        assert_eq!(clipped.len(), 1);
        assert!((clipped[0].area() - 0.25).abs() < 1e-12);
        assert!(square(2.0, 2.0, 1.0).clip(&r).is_empty());

        let zig = Geometry::Polyline(vec![
            Point::new(-1.0, 0.5),
            Point::new(0.5, 0.5),
            Point::new(0.5, 2.0),
            Point::new(0.8, 2.0),
            Point::new(0.8, 0.2),
        ]);
        let pieces = zig.clip(&r);
        assert_eq!(pieces.len(), 2);
        let total: f64 = pieces.iter().map(Geometry::length).sum();
        assert!((total - (0.5 + 0.5 + 0.8)).abs() < 1e-12);
    }
}
