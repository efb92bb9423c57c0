use std::fs;

use proptest::prelude::*;
use towerplan::raster::{parse_raster, read_raster, to_ascii, RasterError};
use towerplan_core::grid::ElevationRaster;

fn cone(n: usize, cell: f64) -> ElevationRaster {
    let apex = (n / 2) as f64 + 0.5;
    let values = (0..n * n)
        .map(|i| {
            let (row, col) = ((i / n) as f64 + 0.5, (i % n) as f64 + 0.5);
            let r = ((row - apex).powi(2) + (col - apex).powi(2)).sqrt();
            (1000.0 - 10.0 * r).round()
        })
        .collect();
    ElevationRaster::new(n, n, cell, 0.0, 0.0, -9999.0, values).unwrap()
}

#[test]
fn cone_peak_is_at_the_center_cell() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cone.asc");
    fs::write(&path, to_ascii(&cone(100, 30.0))).unwrap();
    let r = read_raster(&path).unwrap();
    assert_eq!((r.ncols, r.nrows), (100, 100));
    let argmax = (0..r.values.len())
        .max_by(|&a, &b| {
            r.values[a]
                .partial_cmp(&r.values[b])
                .unwrap()
                .then(b.cmp(&a))
        })
        .unwrap();
    assert_eq!((argmax / 100, argmax % 100), (50, 50));
    assert_eq!(r.get(50, 50), Some(1000.0));
}

#[test]
fn parse_errors_are_distinct() {
    let header = "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 5\n";
    let cases = [
        ("ncols x\n".to_string(), "header"),
        (format!("{header}1 2\n3\n"), "row"),
        (format!("{header}1 2\n3 abc\n"), "value"),
        (format!("{header}1 2\n"), "count"),
    ];
    for (text, kind) in cases {
        let err = parse_raster(&text).unwrap_err();
        let ok = match kind {
            "header" => matches!(err, RasterError::Header { line: 1, .. }),
            "row" => matches!(err, RasterError::RowLength { line: 7, .. }),
            "value" => matches!(err, RasterError::NonNumeric { line: 7, .. }),
            _ => matches!(err, RasterError::RowCount { .. }),
        };
        assert!(ok, "{kind}: {err}");
    }
}

proptest! {
    #[test]
    fn canonical_text_round_trips_byte_for_byte(
        ncols in 1usize..12,
        nrows in 1usize..12,
        cell in 1u32..500,
        ox in -100000i32..100000,
        oy in -100000i32..100000,
        seed in prop::collection::vec(-500i32..5000, 144),
    ) {
        let values = (0..ncols * nrows).map(|i| f64::from(seed[i]) / 4.0).collect();
        let r = ElevationRaster::new(ncols, nrows, f64::from(cell), f64::from(ox), f64::from(oy), -9999.0, values).unwrap();
        let text = to_ascii(&r);
        let back = parse_raster(&text).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(to_ascii(&back), text);
    }
}
