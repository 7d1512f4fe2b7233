//! Flat SVG view of `Π_w^n` for `d = 2`: one marker per point of the grid
//! box, classed by role, plus the hull outline.

use std::fmt::Write as _;

use bimatch::polytope::multiobjective_polytope;
use bimatch::{Instance, Objective, OracleCounter, Projection};
use num_traits::ToPrimitive;

use crate::CliError;

pub const INFEASIBLE: &str = "infeasible";
pub const FEASIBLE_NON_VERTEX: &str = "feasible-non-vertex";
pub const VERTEX: &str = "vertex";
pub const OPTIMAL_VERTEX: &str = "optimal-vertex";

const CELL: f64 = 48.0;
const MARGIN: f64 = 40.0;

/// Role of a grid point in the rendered view.
pub fn classify(y: &Projection, feasible: bool, vertex: bool, optimal: Option<&Projection>) -> &'static str {
    match (feasible, vertex) {
        (_, true) if optimal == Some(y) => OPTIMAL_VERTEX,
        (_, true) => VERTEX,
        (true, false) => FEASIBLE_NON_VERTEX,
        (false, _) => INFEASIBLE,
    }
}

/// Renders the grid box `[s, t]`. The optimal vertex is the oracle-best
/// vertex under `objective`; without an objective none is highlighted.
pub fn render_polytope_svg(instance: &Instance, objective: Option<&Objective>) -> Result<String, CliError> {
    if instance.d() != 2 {
        return Err(CliError::Invalid(format!("d: polytope rendering needs d = 2, found {}", instance.d())));
    }
    let poly = multiobjective_polytope(instance)?;
    let optimal = match objective {
        Some(o) => o.best(poly.vertices.iter(), &OracleCounter::new())?.cloned(),
        None => None,
    };
    let coord = |v: &num_bigint::BigInt| v.to_f64().unwrap_or(0.0);
    let (x0, y0) = (coord(&poly.bounds.lower[0]), coord(&poly.bounds.lower[1]));
    let (x1, y1) = (coord(&poly.bounds.upper[0]), coord(&poly.bounds.upper[1]));
    let width = (x1 - x0) * CELL + 2.0 * MARGIN;
    let height = (y1 - y0) * CELL + 2.0 * MARGIN;
    // SVG's y axis points down.
    let px = |y: &Projection| (MARGIN + (coord(&y.0[0]) - x0) * CELL, height - MARGIN - (coord(&y.0[1]) - y0) * CELL);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    out.push_str(concat!(
        "<style>",
        ".infeasible{fill:#ccc}",
        ".feasible-non-vertex{fill:#1f6fd0}",
        ".vertex{fill:#2a9d4a}",
        ".optimal-vertex{fill:#d62828}",
        ".hull{fill:#2a9d4a;fill-opacity:0.12;stroke:#2a9d4a}",
        "</style>\n"
    ));

    let hull = hull_order(&poly.vertices);
    if hull.len() >= 2 {
        let pts: Vec<String> = hull.iter().map(|y| px(y)).map(|(a, b)| format!("{a},{b}")).collect();
        let _ = writeln!(out, r#"<polygon class="hull" points="{}"/>"#, pts.join(" "));
    }

    for y in poly.bounds.points() {
        let feasible = poly.feasible.contains(&y);
        let vertex = poly.vertices.contains(&y);
        let class = classify(&y, feasible, vertex, optimal.as_ref());
        let (cx, cy) = px(&y);
        let data = format!(r#"data-y1="{}" data-y2="{}""#, y.0[0], y.0[1]);
        match class {
            VERTEX => {
                let _ = writeln!(
                    out,
                    r#"<rect class="{class}" {data} x="{}" y="{}" width="12" height="12" transform="rotate(45 {cx} {cy})"/>"#,
                    cx - 6.0,
                    cy - 6.0
                );
            }
            OPTIMAL_VERTEX => {
                let _ = writeln!(out, r#"<rect class="{class}" {data} x="{}" y="{}" width="14" height="14"/>"#, cx - 7.0, cy - 7.0);
            }
            FEASIBLE_NON_VERTEX => {
                let _ = writeln!(out, r#"<circle class="{class}" {data} cx="{cx}" cy="{cy}" r="6"/>"#);
            }
            _ => {
                let _ = writeln!(out, r#"<circle class="{class}" {data} cx="{cx}" cy="{cy}" r="3"/>"#);
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Vertices in counterclockwise order around their centroid.
fn hull_order(vertices: &std::collections::BTreeSet<Projection>) -> Vec<Projection> {
    let pts: Vec<(f64, f64, &Projection)> = vertices
        .iter()
        .map(|y| (y.0[0].to_f64().unwrap_or(0.0), y.0[1].to_f64().unwrap_or(0.0), y))
        .collect();
    if pts.is_empty() {
        return Vec::new();
    }
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let mut pts = pts;
    pts.sort_by(|a, b| (a.1 - cy).atan2(a.0 - cx).total_cmp(&(b.1 - cy).atan2(b.0 - cx)));
    pts.into_iter().map(|p| p.2.clone()).collect()
}
