mod common;

use std::fs;

use common::{fixture, stdout_of, towerplan, write_random_fixture};
use serde_json::Value;
use towerplan::report::{ClassifyDoc, MineDoc, PlanReport};

fn worked_config() -> String {
    fixture("worked/config.json").display().to_string()
}

fn worked_report() -> PlanReport {
    serde_json::from_str(&stdout_of(&["plan", "--config", &worked_config()])).unwrap()
}

#[test]
fn worked_example_selects_the_sea_square() {
    let report = worked_report();
    assert_eq!(report.cells.len(), 1);
    let cell = &report.cells[0];
    assert_eq!(cell.n, 5);
    assert_eq!(cell.placement.mode, "single");
    assert_eq!(cell.placement.squares, vec![[3, 3]]);
    let g = cell.placement.goodness[0];
    assert_eq!((g.class, g.suitability, g.total), (100, 50, 150));

    let sea = cell.squares.iter().find(|s| s.square == [3, 3]).unwrap();
    assert_eq!(sea.priority, "FIRST");
    let ids: Vec<&str> = sea.records.iter().map(|r| r.object.as_str()).collect();
    assert_eq!(ids, ["O1", "O2"]);
    let o1 = &sea.records[0];
    assert_eq!(o1.direction, Some(["B".to_string(), "O2".to_string()]));
    assert_eq!(o1.position, Some(["I".to_string(), "O2".to_string()]));
    assert_eq!(o1.distance.as_ref().unwrap().bin, "<1km");
    assert!(cell.squares.iter().all(|s| s.elevation_m.is_some()));
    assert!(cell
        .squares
        .iter()
        .filter(|s| s.square != [3, 3])
        .all(|s| s.goodness.total < 150));
}

#[test]
fn worked_example_coverage_is_nine_of_twenty_five() {
    let report = worked_report();
    let c = &report.coverage.cells[0];
    assert_eq!((c.covered, c.total), (9, 25));
    assert_eq!(c.fraction, 0.36);
    assert_eq!(c.uncovered.len(), 16);
    assert!(!report.coverage.full);
}

#[test]
fn classify_reports_sixteen_second_and_nine_first() {
    let doc: ClassifyDoc =
        serde_json::from_str(&stdout_of(&["classify", "--config", &worked_config()])).unwrap();
    let c = &doc.cells[0];
    assert_eq!((c.first, c.second), (9, 16));
    assert_eq!(c.map, ["SSSSS", "SFFFS", "SFFFS", "SFFFS", "SSSSS"]);
}

#[test]
fn mine_finds_the_sea_rule_shapes() {
    let doc: MineDoc = serde_json::from_str(&stdout_of(&[
        "mine",
        "--config",
        &worked_config(),
        "--minsup",
        "0.5",
        "--minconf",
        "0.8",
    ]))
    .unwrap();
    let sq = doc.cells[0]
        .squares
        .iter()
        .find(|s| s.square == [3, 3])
        .unwrap();
    assert_eq!(sq.transactions, 2);
    for consequent in ["pos=I:O2", "dist=O2:<1km"] {
        let rule = sq
            .rules
            .iter()
            .find(|r| r.antecedent == ["type=4"] && r.consequent == [consequent])
            .unwrap_or_else(|| panic!("no rule type=4 => {consequent}"));
        assert_eq!(rule.support, 0.5);
        assert!(rule.confidence >= 0.8);
        assert_eq!(rule.support_fraction().to_f64(), rule.support);
    }
}

#[test]
fn mine_and_classify_are_sub_documents_of_plan() {
    let cfg = worked_config();
    let plan: Value = serde_json::from_str(&stdout_of(&["plan", "--config", &cfg])).unwrap();
    let mine: Value = serde_json::from_str(&stdout_of(&["mine", "--config", &cfg])).unwrap();
    let classify: Value =
        serde_json::from_str(&stdout_of(&["classify", "--config", &cfg])).unwrap();
    assert_eq!(plan["mining"], mine);
    assert_eq!(plan["classification"], classify);
}

#[test]
fn fail_on_uncovered_exits_nonzero() {
    let out = towerplan(&[
        "plan",
        "--config",
        &worked_config(),
        "--fail-on-uncovered",
        "--out",
        "/dev/null",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("9 of 25"));
    let out = towerplan(&["plan", "--config", &worked_config(), "--out", "/dev/null"]);
    assert!(out.status.success());
}

#[test]
fn full_coverage_passes_fail_on_uncovered() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_random_fixture(dir.path(), 3, 1, 3, 4, 0);
    let out_path = dir.path().join("r.json");
    let out = towerplan(&[
        "plan",
        "--config",
        cfg.to_str().unwrap(),
        "--fail-on-uncovered",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: PlanReport = serde_json::from_str(&fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(report.cells[0].placement.squares, vec![[2, 2]]);
    assert!(report.coverage.full);
}

#[test]
fn render_counts_squares_highlights_and_hatching() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("plan.svg");
    let report_path = dir.path().join("plan.json");
    stdout_of(&[
        "plan",
        "--config",
        &worked_config(),
        "--out",
        report_path.to_str().unwrap(),
        "--svg",
        svg_path.to_str().unwrap(),
    ]);
    let svg = fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches(r#"class="square""#).count(), 25);
    assert_eq!(svg.matches(r#"class="placement""#).count(), 1);
    assert_eq!(svg.matches(r#"class="uncovered""#).count(), 16);
    assert_eq!(svg.matches(r#"class="footprint""#).count(), 9);

    let rendered = stdout_of(&["render", "--report", report_path.to_str().unwrap()]);
    assert_eq!(rendered, svg);
}

#[test]
fn dual_fixture_highlights_two_border_squares() {
    let cfg = fixture("dual/config.json").display().to_string();
    let report: PlanReport = serde_json::from_str(&stdout_of(&["plan", "--config", &cfg])).unwrap();
    let p = &report.cells[0].placement;
    assert_eq!(p.mode, "dual");
    assert!(!p.meets_threshold);
    assert_eq!(p.squares, vec![[1, 2], [4, 1]]);
    assert_eq!(report.coverage.cells[0].covered, 12);
    let svg = stdout_of(&["render", "--config", &cfg]);
    assert_eq!(svg.matches(r#"class="placement""#).count(), 2);
}

#[test]
fn empty_inventory_picks_the_central_square_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_random_fixture(dir.path(), 11, 3, 5, 0, 100);
    let report: PlanReport =
        serde_json::from_str(&stdout_of(&["plan", "--config", cfg.to_str().unwrap()])).unwrap();
    assert_eq!(report.cells.len(), 3);
    for cell in &report.cells {
        assert!(cell.squares.iter().all(|s| s.suitability.percent == 50));
        assert_eq!(cell.placement.squares, vec![[3, 3]]);
    }
}

#[test]
fn flags_alone_are_enough_without_a_config() {
    let raster = fixture("worked/dem.asc").display().to_string();
    let objects = fixture("worked/objects.json").display().to_string();
    let report: PlanReport = serde_json::from_str(&stdout_of(&[
        "plan",
        "--raster",
        &raster,
        "--objects",
        &objects,
        "--cell-side",
        "2000",
        "--radius",
        "850",
        "--square-side",
        "400",
    ]))
    .unwrap();
    assert_eq!(report.cells[0].placement.squares, vec![[3, 3]]);
    assert_eq!(report.config.raster, raster);
}

#[test]
fn threshold_flag_forces_dual_mode() {
    let report: PlanReport = serde_json::from_str(&stdout_of(&[
        "plan",
        "--config",
        &worked_config(),
        "--threshold",
        "151",
    ]))
    .unwrap();
    assert_eq!(report.config.threshold, 151);
    assert_eq!(report.cells[0].placement.mode, "dual");
}

#[test]
fn errors_name_the_stage_and_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.asc");
    fs::write(
        &bad,
        "ncols 3\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 100\n1 2 3\n4 5\n",
    )
    .unwrap();
    let out = towerplan(&[
        "plan",
        "--raster",
        bad.to_str().unwrap(),
        "--cell-side",
        "100",
        "--radius",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("raster stage"), "{err}");
    assert!(err.contains("line 7"), "{err}");

    let objs = dir.path().join("objects.json");
    fs::write(&objs, r#"[{"id": "O1", "type": 99, "size": 1, "shape": 1, "geometry": {"kind": "point", "coords": [0, 0]}, "population": "high", "employment": "high"}]"#).unwrap();
    let out = towerplan(&[
        "plan",
        "--config",
        &worked_config(),
        "--objects",
        objs.to_str().unwrap(),
    ]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("objects stage") && err.contains("O1"), "{err}");

    let out = towerplan(&["plan", "--config", &worked_config(), "--minsup", "1.5"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(!out.status.success() && err.contains("minsup"), "{err}");

    let out = towerplan(&["plan", "--config", &worked_config(), "--cell-side", "99999"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(!out.status.success() && err.contains("grid stage"), "{err}");
}

#[test]
fn objects_outside_the_raster_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let objs = dir.path().join("objects.json");
    fs::write(&objs, r#"[{"id": "far", "type": 10, "size": 1, "shape": 1, "geometry": {"kind": "point", "coords": [90000, 90000]}, "population": "low", "employment": "low"}]"#).unwrap();
    let report: PlanReport = serde_json::from_str(&stdout_of(&[
        "plan",
        "--config",
        &worked_config(),
        "--objects",
        objs.to_str().unwrap(),
    ]))
    .unwrap();
    assert_eq!(report.omitted_objects, ["far"]);
}
