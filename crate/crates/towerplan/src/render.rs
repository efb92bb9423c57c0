//! SVG picture of a plan report: the cell and square lattice, chosen
//! squares, antenna footprints and what they leave uncovered.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::report::{CellDoc, PlanReport};

const CANVAS_PX: f64 = 800.0;
const MARGIN_PX: f64 = 10.0;

struct Frame {
    min_x: f64,
    max_y: f64,
    scale: f64,
}

impl Frame {
    /// `[min_x, min_y, max_x, max_y]` in meters to `(x, y, w, h)` in pixels
    /// with y pointing down.
    fn rect(&self, b: [f64; 4]) -> (f64, f64, f64, f64) {
        (
            MARGIN_PX + (b[0] - self.min_x) * self.scale,
            MARGIN_PX + (self.max_y - b[3]) * self.scale,
            (b[2] - b[0]) * self.scale,
            (b[3] - b[1]) * self.scale,
        )
    }
}

fn rect_el(out: &mut String, class: &str, r: (f64, f64, f64, f64), extra: &str) {
    let _ = writeln!(
        out,
        r#"  <rect class="{class}" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"{extra}/>"#,
        r.0, r.1, r.2, r.3
    );
}

/// Fill for a square's goodness: pale for low totals, saturated for high.
fn shade(total: u32) -> String {
    let t = f64::from(total.min(200)) / 200.0;
    let g = (235.0 - 120.0 * t).round() as u8;
    format!("rgb({g},{},{g})", 240u8)
}

fn cell_elements(
    out: &mut String,
    frame: &Frame,
    cell: &CellDoc,
    uncovered: &BTreeSet<[usize; 2]>,
) {
    let key = format!("{},{}", cell.cell[0], cell.cell[1]);
    for sq in &cell.squares {
        let extra = format!(
            r#" fill="{}" data-cell="{key}" data-square="{},{}" data-goodness="{}""#,
            shade(sq.goodness.total),
            sq.square[0],
            sq.square[1],
            sq.goodness.total
        );
        rect_el(out, "square", frame.rect(sq.bounds), &extra);
    }
    for sq in &cell.squares {
        if !uncovered.contains(&sq.square) {
            rect_el(out, "footprint", frame.rect(sq.bounds), "");
        }
    }
    for sq in &cell.squares {
        if uncovered.contains(&sq.square) {
            rect_el(out, "uncovered", frame.rect(sq.bounds), "");
        }
    }
    for chosen in &cell.placement.squares {
        if let Some(sq) = cell.squares.iter().find(|s| s.square == *chosen) {
            let extra = format!(
                r#" data-cell="{key}" data-square="{},{}""#,
                chosen[0], chosen[1]
            );
            rect_el(out, "placement", frame.rect(sq.bounds), &extra);
        }
    }
    rect_el(
        out,
        "cell",
        frame.rect(cell.bounds),
        &format!(r#" data-cell="{key}""#),
    );
}

/// Renders the report as a standalone SVG document.
pub fn render_svg(report: &PlanReport) -> String {
    let b = report.grid.bounds;
    let span = (b[2] - b[0]).max(b[3] - b[1]).max(f64::MIN_POSITIVE);
    let frame = Frame {
        min_x: b[0],
        max_y: b[3],
        scale: CANVAS_PX / span,
    };
    let width = (b[2] - b[0]) * frame.scale + 2.0 * MARGIN_PX;
    let height = (b[3] - b[1]) * frame.scale + 2.0 * MARGIN_PX;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    out.push_str(concat!(
        "  <defs>\n",
        "    <pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">\n",
        "      <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n",
        "    </pattern>\n",
        "  </defs>\n",
        "  <style>\n",
        "    .square { stroke: #999; stroke-width: 0.5; }\n",
        "    .footprint { fill: #3498db; fill-opacity: 0.25; stroke: none; }\n",
        "    .uncovered { fill: url(#hatch); stroke: none; }\n",
        "    .placement { fill: none; stroke: #e67e22; stroke-width: 3; }\n",
        "    .cell { fill: none; stroke: #222; stroke-width: 2; }\n",
        "  </style>\n",
    ));
    for cell in &report.cells {
        let uncovered: BTreeSet<[usize; 2]> = report
            .coverage
            .cells
            .iter()
            .find(|c| c.cell == cell.cell)
            .map(|c| c.uncovered.iter().copied().collect())
            .unwrap_or_default();
        cell_elements(&mut out, &frame, cell, &uncovered);
    }
    out.push_str("</svg>\n");
    out
}
