//! Object inventory files: a JSON array of coded features.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use towerplan_core::geometry::{Geometry, Point};
use towerplan_core::spatialdb::{
    Level, ObjectError, ObjectType, ShapeCode, SizeClass, SpatialObject,
};

#[derive(Debug, Error)]
pub enum ObjectsError {
    #[error("cannot read objects: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid objects JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("object #{index} ({id}): {message}")]
    Field {
        index: usize,
        id: String,
        message: String,
    },
    #[error("object #{index}: {source}")]
    Object { index: usize, source: ObjectError },
    #[error("object #{index}: duplicate id `{id}`")]
    DuplicateId { index: usize, id: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GeometryJson {
    Point { coords: [f64; 2] },
    Polyline { coords: Vec<[f64; 2]> },
    Polygon { coords: Vec<[f64; 2]> },
}

/// One element of the objects file, as written on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectJson {
    pub id: String,
    #[serde(rename = "type")]
    pub object_type: u8,
    pub size: u8,
    pub shape: u8,
    pub geometry: GeometryJson,
    pub population: String,
    pub employment: String,
}

fn points(coords: &[[f64; 2]]) -> Vec<Point> {
    coords.iter().map(|c| Point::new(c[0], c[1])).collect()
}

impl ObjectJson {
    pub fn into_object(self, index: usize) -> Result<SpatialObject, ObjectsError> {
        let field = |message: String| ObjectsError::Field {
            index,
            id: self.id.clone(),
            message,
        };
        let object_type = ObjectType::from_code(self.object_type)
            .ok_or_else(|| field(format!("type {} is not in 1..=11", self.object_type)))?;
        let size = SizeClass::from_code(self.size)
            .ok_or_else(|| field(format!("size {} is not in 1..=3", self.size)))?;
        let shape = ShapeCode::from_code(self.shape)
            .ok_or_else(|| field(format!("shape {} is not in 1..=3", self.shape)))?;
        let population = Level::from_name(&self.population).ok_or_else(|| {
            field(format!(
                "population `{}` is not high/medium/low",
                self.population
            ))
        })?;
        let employment = Level::from_name(&self.employment).ok_or_else(|| {
            field(format!(
                "employment `{}` is not high/medium/low",
                self.employment
            ))
        })?;
        let geometry = match &self.geometry {
            GeometryJson::Point { coords } => Geometry::Point(Point::new(coords[0], coords[1])),
            GeometryJson::Polyline { coords } => Geometry::Polyline(points(coords)),
            GeometryJson::Polygon { coords } => Geometry::polygon(points(coords)),
        };
        SpatialObject::new(
            self.id,
            object_type,
            size,
            shape,
            geometry,
            population,
            employment,
        )
        .map_err(|source| ObjectsError::Object { index, source })
    }
}

pub fn parse_objects(text: &str) -> Result<Vec<SpatialObject>, ObjectsError> {
    let raw: Vec<ObjectJson> = serde_json::from_str(text)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(raw.len());
    for (index, o) in raw.into_iter().enumerate() {
        if !seen.insert(o.id.clone()) {
            return Err(ObjectsError::DuplicateId { index, id: o.id });
        }
        out.push(o.into_object(index)?);
    }
    Ok(out)
}

pub fn read_objects(path: &Path) -> Result<Vec<SpatialObject>, ObjectsError> {
    parse_objects(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_polygon_and_point() {
        let text = r#"[
            {"id": "O1", "type": 4, "size": 1, "shape": 3,
             "geometry": {"kind": "polygon", "coords": [[0,0],[10,0],[10,10],[0,10],[0,0]]},
             "population": "high", "employment": "low"},
            {"id": "O2", "type": 10, "size": 3, "shape": 1,
             "geometry": {"kind": "point", "coords": [5, 5]},
             "population": "low", "employment": "medium"}
        ]"#;
        let objs = parse_objects(text).unwrap();
        assert_eq!(objs.len(), 2);
        assert_eq!(objs[0].object_type, ObjectType::Sea);
        assert_eq!(objs[0].geometry.area(), 100.0);
        assert_eq!(objs[1].employment, Level::Medium);
    }

    #[test]
    fn rejects_bad_codes_and_duplicates() {
        let bad_type = r#"[{"id": "O1", "type": 12, "size": 1, "shape": 1,
            "geometry": {"kind": "point", "coords": [0, 0]},
            "population": "high", "employment": "high"}]"#;
        assert!(matches!(
            parse_objects(bad_type),
            Err(ObjectsError::Field { index: 0, .. })
        ));

        let mismatch = r#"[{"id": "O1", "type": 2, "size": 1, "shape": 3,
            "geometry": {"kind": "polyline", "coords": [[0, 0], [1, 1]]},
            "population": "high", "employment": "high"}]"#;
        assert!(matches!(
            parse_objects(mismatch),
            Err(ObjectsError::Object { index: 0, .. })
        ));

        let dup = r#"[
            {"id": "O1", "type": 2, "size": 1, "shape": 1, "geometry": {"kind": "point", "coords": [0, 0]}, "population": "high", "employment": "high"},
            {"id": "O1", "type": 2, "size": 1, "shape": 1, "geometry": {"kind": "point", "coords": [1, 0]}, "population": "high", "employment": "high"}
        ]"#;
        assert!(matches!(
            parse_objects(dup),
            Err(ObjectsError::DuplicateId { index: 1, .. })
        ));
    }

    #[test]
    fn empty_file_is_empty_inventory() {
        assert!(parse_objects("[]").unwrap().is_empty());
    }
}
