//! Planner configuration: the JSON file, command-line overrides and the
//! validated settings the pipeline runs on.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;
use towerplan_core::miner::Fraction;
use towerplan_core::scoring::SuitabilityTable;
use towerplan_core::spatialdb::{DistanceBins, ObjectType};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("config field `{0}` is required")]
    Missing(&'static str),
    #[error("config field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

/// The config file as written. Every field may be omitted; required ones
/// are checked by [`PlanConfig::apply`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlanConfig {
    pub raster: Option<String>,
    pub objects: Option<String>,
    pub cell_side_m: Option<f64>,
    pub antenna_radius_m: Option<f64>,
    pub square_side_m: Option<f64>,
    pub minsup: f64,
    pub minconf: f64,
    pub threshold: u32,
    /// Suitability percent keyed by type code ("4") or name ("sea").
    pub suitability: BTreeMap<String, u32>,
    pub empty_terrain: u32,
    pub empty_square: u32,
    pub distance_bins_m: Vec<f64>,
    pub out: Option<String>,
    pub svg: Option<String>,
    pub jobs: Option<usize>,
    /// Directory that relative input paths are resolved against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl Default for PlanConfig {
    fn default() -> Self {
        let table = SuitabilityTable::default();
        PlanConfig {
            raster: None,
            objects: None,
            cell_side_m: None,
            antenna_radius_m: None,
            square_side_m: None,
            minsup: 0.5,
            minconf: 0.8,
            threshold: 100,
            suitability: BTreeMap::new(),
            empty_terrain: table.empty_terrain,
            empty_square: table.empty_square,
            distance_bins_m: DistanceBins::default().thresholds().to_vec(),
            out: None,
            svg: None,
            jobs: None,
            base_dir: None,
        }
    }
}

/// Values given on the command line; each one replaces the config's.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub raster: Option<String>,
    pub objects: Option<String>,
    pub cell_side_m: Option<f64>,
    pub antenna_radius_m: Option<f64>,
    pub square_side_m: Option<f64>,
    pub minsup: Option<f64>,
    pub minconf: Option<f64>,
    pub threshold: Option<u32>,
    pub out: Option<String>,
    pub svg: Option<String>,
}

/// The configuration as echoed into reports: everything that affects the
/// result, nothing that only says where output goes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub raster: String,
    pub objects: Option<String>,
    pub cell_side_m: f64,
    pub antenna_radius_m: f64,
    pub square_side_m: Option<f64>,
    pub minsup: f64,
    pub minconf: f64,
    pub threshold: u32,
    pub suitability: BTreeMap<String, u32>,
    pub empty_terrain: u32,
    pub empty_square: u32,
    pub distance_bins_m: Vec<f64>,
}

/// Validated settings.
#[derive(Clone, Debug)]
pub struct Settings {
    pub raster: PathBuf,
    pub objects: Option<PathBuf>,
    pub cell_side_m: f64,
    pub antenna_radius_m: f64,
    pub square_side_m: Option<f64>,
    pub minsup: Fraction,
    pub minconf: Fraction,
    pub threshold: u32,
    pub table: SuitabilityTable,
    pub bins: DistanceBins,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub echo: ConfigEcho,
}

fn parse_type_key(key: &str) -> Option<ObjectType> {
    match key.parse::<u8>() {
        Ok(code) => ObjectType::from_code(code),
        Err(_) => ObjectType::ALL.into_iter().find(|t| t.name() == key),
    }
}

fn positive(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(
            field,
            format!("must be a positive number, got {v}"),
        ))
    }
}

fn fraction(field: &str, v: f64) -> Result<Fraction, ConfigError> {
    if !(v > 0.0 && v <= 1.0) {
        return Err(invalid(field, format!("must lie in (0, 1], got {v}")));
    }
    Fraction::from_decimal(v).ok_or_else(|| invalid(field, format!("cannot represent {v}")))
}

impl PlanConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let mut cfg: PlanConfig =
            serde_json::from_str(text).map_err(|source| ConfigError::Json {
                path: path.to_path_buf(),
                source,
            })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    fn resolve(&self, p: &str) -> PathBuf {
        match &self.base_dir {
            Some(dir) if Path::new(p).is_relative() => dir.join(p),
            _ => PathBuf::from(p),
        }
    }

    /// Applies command-line values. Paths given there are taken relative
    /// to the working directory, not the config file.
    pub fn apply(&mut self, o: &Overrides) -> Result<Settings, ConfigError> {
        let raster = match &o.raster {
            Some(r) => (r.clone(), PathBuf::from(r)),
            None => {
                let r = self.raster.clone().ok_or(ConfigError::Missing("raster"))?;
                let p = self.resolve(&r);
                (r, p)
            }
        };
        let objects = match &o.objects {
            Some(r) => Some((r.clone(), PathBuf::from(r))),
            None => self.objects.clone().map(|r| {
                let p = self.resolve(&r);
                (r, p)
            }),
        };
        if let Some(v) = o.cell_side_m {
            self.cell_side_m = Some(v);
        }
        if let Some(v) = o.antenna_radius_m {
            self.antenna_radius_m = Some(v);
        }
        if let Some(v) = o.square_side_m {
            self.square_side_m = Some(v);
        }
        if let Some(v) = o.minsup {
            self.minsup = v;
        }
        if let Some(v) = o.minconf {
            self.minconf = v;
        }
        if let Some(v) = o.threshold {
            self.threshold = v;
        }
        let out = o
            .out
            .clone()
            .map(PathBuf::from)
            .or_else(|| self.out.as_deref().map(|p| self.resolve(p)));
        let svg = o
            .svg
            .clone()
            .map(PathBuf::from)
            .or_else(|| self.svg.as_deref().map(|p| self.resolve(p)));

        let cell_side_m = positive(
            "cell_side_m",
            self.cell_side_m
                .ok_or(ConfigError::Missing("cell_side_m"))?,
        )?;
        let antenna_radius_m = positive(
            "antenna_radius_m",
            self.antenna_radius_m
                .ok_or(ConfigError::Missing("antenna_radius_m"))?,
        )?;
        let square_side_m = self
            .square_side_m
            .map(|s| positive("square_side_m", s))
            .transpose()?;
        let minsup = fraction("minsup", self.minsup)?;
        let minconf = fraction("minconf", self.minconf)?;
        if self.jobs == Some(0) {
            return Err(invalid("jobs", "must be at least 1"));
        }

        let mut table = SuitabilityTable::default();
        for (key, &pct) in &self.suitability {
            let t = parse_type_key(key)
                .ok_or_else(|| invalid(format!("suitability.{key}"), "unknown object type"))?;
            table
                .set(t, pct)
                .map_err(|e| invalid(format!("suitability.{key}"), e.to_string()))?;
        }
        table
            .set_empty_terrain(self.empty_terrain)
            .map_err(|e| invalid("empty_terrain", e.to_string()))?;
        table
            .set_empty_square(self.empty_square)
            .map_err(|e| invalid("empty_square", e.to_string()))?;
        let bins = DistanceBins::new(self.distance_bins_m.clone())
            .map_err(|e| invalid("distance_bins_m", e.to_string()))?;

        let echo = ConfigEcho {
            raster: raster.0,
            objects: objects.as_ref().map(|o| o.0.clone()),
            cell_side_m,
            antenna_radius_m,
            square_side_m,
            minsup: self.minsup,
            minconf: self.minconf,
            threshold: self.threshold,
            suitability: ObjectType::ALL
                .into_iter()
                .map(|t| (t.code().to_string(), table.get(t)))
                .collect(),
            empty_terrain: table.empty_terrain,
            empty_square: table.empty_square,
            distance_bins_m: bins.thresholds().to_vec(),
        };
        Ok(Settings {
            raster: raster.1,
            objects: objects.map(|o| o.1),
            cell_side_m,
            antenna_radius_m,
            square_side_m,
            minsup,
            minconf,
            threshold: self.threshold,
            table,
            bins,
            out,
            svg,
            jobs: self.jobs,
            echo,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> PlanConfig {
        PlanConfig {
            raster: Some("dem.asc".into()),
            cell_side_m: Some(2000.0),
            antenna_radius_m: Some(850.0),
            ..PlanConfig::default()
        }
    }

    #[test]
    fn defaults_validate() {
        let s = base().apply(&Overrides::default()).unwrap();
        assert_eq!(s.minsup, Fraction::new(1, 2));
        assert_eq!(s.minconf, Fraction::new(4, 5));
        assert_eq!(s.threshold, 100);
        assert_eq!(s.table, SuitabilityTable::default());
        assert_eq!(s.echo.suitability["4"], 50);
        assert_eq!(s.echo.suitability.len(), 11);
    }

    #[test]
    fn paths_resolve_against_config_dir() {
        let cfg = PlanConfig::parse(
            r#"{"raster": "dem.asc", "objects": "/abs/o.json", "cell_side_m": 1, "antenna_radius_m": 1}"#,
            Path::new("/data/plan/config.json"),
        )
        .unwrap();
        let s = cfg.clone().apply(&Overrides::default()).unwrap();
        assert_eq!(s.raster, PathBuf::from("/data/plan/dem.asc"));
        assert_eq!(s.objects, Some(PathBuf::from("/abs/o.json")));
        assert_eq!(s.echo.raster, "dem.asc");
        let s = cfg
            .clone()
            .apply(&Overrides {
                raster: Some("other.asc".into()),
                ..Overrides::default()
            })
            .unwrap();
        assert_eq!(s.raster, PathBuf::from("other.asc"));
    }

    #[test]
    fn overrides_replace_config_values() {
        let s = base()
            .apply(&Overrides {
                minsup: Some(0.25),
                threshold: Some(151),
                ..Overrides::default()
            })
            .unwrap();
        assert_eq!(s.minsup, Fraction::new(1, 4));
        assert_eq!(s.threshold, 151);
    }

    #[test]
    fn suitability_keys_by_code_or_name() {
        let mut cfg = base();
        cfg.suitability.insert("4".into(), 70);
        cfg.suitability.insert("road".into(), 10);
        let s = cfg.apply(&Overrides::default()).unwrap();
        assert_eq!(s.table.get(ObjectType::Sea), 70);
        assert_eq!(s.table.get(ObjectType::Road), 10);
    }

    #[test]
    fn rejects_invalid_values() {
        let mut cfg = base();
        cfg.minsup = 0.0;
        assert!(matches!(
            cfg.apply(&Overrides::default()),
            Err(ConfigError::Invalid { .. })
        ));
        let mut cfg = base();
        cfg.cell_side_m = Some(-1.0);
        assert!(matches!(
            cfg.apply(&Overrides::default()),
            Err(ConfigError::Invalid { .. })
        ));
        let mut cfg = base();
        cfg.antenna_radius_m = None;
        assert!(matches!(
            cfg.apply(&Overrides::default()),
            Err(ConfigError::Missing("antenna_radius_m"))
        ));
        let mut cfg = base();
        cfg.suitability.insert("12".into(), 5);
        assert!(cfg.apply(&Overrides::default()).is_err());
        let mut cfg = base();
        cfg.suitability.insert("4".into(), 101);
        assert!(cfg.apply(&Overrides::default()).is_err());
        let mut cfg = base();
        cfg.distance_bins_m = vec![10.0, 5.0];
        assert!(cfg.apply(&Overrides::default()).is_err());
        assert!(PlanConfig::parse(r#"{"bogus": 1}"#, Path::new("c.json")).is_err());
    }
}
