#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use towerplan::objects::{GeometryJson, ObjectJson};
use towerplan::raster::to_ascii;
use towerplan_core::coverage::union_size;
use towerplan_core::grid::{ElevationRaster, SquarePos};

pub const LEVELS: [&str; 3] = ["high", "medium", "low"];

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn towerplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_towerplan"))
        .args(args)
        .env_remove("TOWERPLAN_JOBS")
        .env("RUST_LOG", "off")
        .output()
        .expect("binary runs")
}

pub fn stdout_of(args: &[&str]) -> String {
    let out = towerplan(args);
    assert!(
        out.status.success(),
        "towerplan {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

/// Star-shaped ring around `(cx, cy)`; every vertex sees the center.
fn star(rng: &mut ChaCha8Rng, cx: f64, cy: f64, r: f64) -> Vec<[f64; 2]> {
    let k = rng.random_range(4..8);
    let step = std::f64::consts::TAU / k as f64;
    (0..k)
        .map(|i| {
            let a = i as f64 * step + rng.random_range(-0.3..0.3) * step;
            let rr = r * rng.random_range(0.4..1.0);
            [cx + rr * a.cos(), cy + rr * a.sin()]
        })
        .collect()
}

fn random_object(rng: &mut ChaCha8Rng, id: usize, width: f64, height: f64) -> ObjectJson {
    let cx = rng.random_range(0.0..width);
    let cy = rng.random_range(0.0..height);
    let (shape, geometry) = match rng.random_range(0..3) {
        0 => (1, GeometryJson::Point { coords: [cx, cy] }),
        1 => {
            let k = rng.random_range(2..5);
            let coords = (0..k)
                .map(|_| {
                    [
                        cx + rng.random_range(-500.0..500.0),
                        cy + rng.random_range(-500.0..500.0),
                    ]
                })
                .collect();
            (2, GeometryJson::Polyline { coords })
        }
        _ => {
            let r = rng.random_range(80.0..700.0);
            (
                3,
                GeometryJson::Polygon {
                    coords: star(rng, cx, cy, r),
                },
            )
        }
    };
    ObjectJson {
        id: format!("O{}", id + 1),
        object_type: rng.random_range(1..=11),
        size: rng.random_range(1..=3),
        shape,
        geometry,
        population: LEVELS[rng.random_range(0..3)].into(),
        employment: LEVELS[rng.random_range(0..3)].into(),
    }
}

/// Writes `dem.asc`, `objects.json` and `config.json` for a row of
/// `cells` square cells of 2000 m, each split into `n`×`n` squares.
pub fn write_random_fixture(
    dir: &Path,
    seed: u64,
    cells: usize,
    n: usize,
    objects: usize,
    threshold: u32,
) -> PathBuf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ncols = 20 * cells;
    let values = (0..ncols * 20)
        .map(|_| f64::from(rng.random_range(0..500u32)))
        .collect();
    let raster = ElevationRaster::new(ncols, 20, 100.0, 0.0, 0.0, -9999.0, values).unwrap();
    fs::write(dir.join("dem.asc"), to_ascii(&raster)).unwrap();
    let objs: Vec<ObjectJson> = (0..objects)
        .map(|i| random_object(&mut rng, i, 2000.0 * cells as f64, 2000.0))
        .collect();
    fs::write(
        dir.join("objects.json"),
        serde_json::to_string_pretty(&objs).unwrap(),
    )
    .unwrap();
    let config = serde_json::json!({
        "raster": "dem.asc",
        "objects": "objects.json",
        "cell_side_m": 2000.0,
        "antenna_radius_m": 850.0,
        "square_side_m": 2000.0 / n as f64,
        "threshold": threshold,
    });
    let path = dir.join("config.json");
    fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    path
}

/// Best (union, summed goodness) over all unordered border pairs.
pub fn exhaustive_best(n: usize, goodness: impl Fn(SquarePos) -> u32) -> (usize, u32) {
    let border: Vec<SquarePos> = (1..=n)
        .flat_map(|x| (1..=n).map(move |y| SquarePos::new(x, y)))
        .filter(|p| p.x == 1 || p.x == n || p.y == 1 || p.y == n)
        .collect();
    let mut best = (0, 0);
    for (i, a) in border.iter().enumerate() {
        for b in &border[i + 1..] {
            best = best.max((union_size(&[*a, *b], n), goodness(*a) + goodness(*b)));
        }
    }
    best
}
