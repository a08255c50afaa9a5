//! Standalone SVG rendering of a deployment.

use std::fmt::Write as _;
use std::path::Path;

use wsn_core::{Deployment64, Scenario64};

use crate::error::{CliError, CliResult};

/// Width of the SVG viewBox in pixels; height follows the region aspect.
pub const VIEW_WIDTH: f64 = 800.0;

/// Region border, then per node a sensing disk (`rs`), a dashed
/// communication circle (`rc`) and a dot. World `y` points up.
pub fn render_svg(deployment: &Deployment64, scenario: &Scenario64) -> String {
    let region = scenario.region;
    let scale = VIEW_WIDTH / region.width();
    let height = region.height() * scale;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{VIEW_WIDTH}" height="{height}" viewBox="0 0 {VIEW_WIDTH} {height}">"#
    );
    let _ = writeln!(
        out,
        "  <title>{} nodes, {} x {} m, rs = {} m, rc = {} m</title>",
        deployment.len(),
        region.width(),
        region.height(),
        scenario.rs,
        scenario.rc
    );
    let _ = writeln!(
        out,
        r##"  <rect id="region" x="0" y="0" width="{VIEW_WIDTH}" height="{height}" fill="#ffffff" stroke="#000000" stroke-width="2"/>"##
    );
    let rs = scenario.rs * scale;
    let rc = scenario.rc * scale;
    for (i, p) in deployment.iter().enumerate() {
        let (cx, cy) = (p.x * scale, height - p.y * scale);
        let _ = writeln!(out, r#"  <g class="node" id="node-{i}">"#);
        let _ = writeln!(
            out,
            r##"    <circle class="sensing" cx="{cx:.3}" cy="{cy:.3}" r="{rs:.3}" fill="#1f77b4" fill-opacity="0.15" stroke="#1f77b4" stroke-width="1"/>"##
        );
        let _ = writeln!(
            out,
            r##"    <circle class="communication" cx="{cx:.3}" cy="{cy:.3}" r="{rc:.3}" fill="none" stroke="#7f7f7f" stroke-width="0.8" stroke-dasharray="6 4"/>"##
        );
        let _ = writeln!(out, r##"    <circle class="dot" cx="{cx:.3}" cy="{cy:.3}" r="3" fill="#0000ff"/>"##);
        let _ = writeln!(out, "  </g>");
    }
    out.push_str("</svg>\n");
    out
}

pub fn write_svg(path: &Path, deployment: &Deployment64, scenario: &Scenario64) -> CliResult<()> {
    std::fs::write(path, render_svg(deployment, scenario)).map_err(|e| CliError::io(path, e))
}
