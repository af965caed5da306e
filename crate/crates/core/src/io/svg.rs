//! Static SVG rendering of vortex trajectories: one polyline per vortex,
//! equal-aspect axes, the boundary line for half-plane runs, and markers at
//! detected events.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::error::VortexError;
use crate::integrate::{EventKind, Trajectory};
use crate::model::{Domain, Point};

#[derive(Clone, Debug)]
pub struct PlotOptions {
    /// Pixel width of the image; height follows from the data aspect ratio.
    pub width: f64,
    /// Fraction of the data extent added as margin on each side.
    pub margin_frac: f64,
    pub stroke_width: f64,
    /// Stroke colors, cycled per vortex.
    pub palette: Vec<String>,
    pub show_events: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            width: 900.0,
            margin_frac: 0.05,
            stroke_width: 1.6,
            palette: [
                "orange",
                "aquamarine",
                "steelblue",
                "crimson",
                "seagreen",
                "goldenrod",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            show_events: true,
        }
    }
}

/// Marker shapes attached to event locations.
#[derive(Clone, Debug)]
pub enum Marker {
    /// Dotted tie line between the two aligned vortices.
    Segment(Point, Point),
    /// Filled diamond at an instantaneous stop.
    Diamond(Point),
    /// Cross at a near-collision.
    Cross(Point),
}

/// Renders polyline series with equal-aspect autoscaling. `boundary` draws
/// the wall y = 0.
pub fn series_svg(
    series: &[Vec<Point>],
    boundary: bool,
    markers: &[Marker],
    opts: &PlotOptions,
) -> Result<String, VortexError> {
    let points = series.iter().flatten();
    let mut x0 = f64::INFINITY;
    let mut x1 = f64::NEG_INFINITY;
    let mut y0 = f64::INFINITY;
    let mut y1 = f64::NEG_INFINITY;
    let mut count = 0usize;
    for p in points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
        count += 1;
    }
    if count == 0 {
        return Err(VortexError::InvalidArgument(
            "nothing to plot: empty series".to_string(),
        ));
    }
    if boundary {
        y0 = y0.min(0.0);
        y1 = y1.max(0.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let pad = opts.margin_frac * span;
    x0 -= pad;
    x1 += pad;
    y0 -= pad;
    y1 += pad;

    let scale = opts.width / (x1 - x0);
    let height = (y1 - y0) * scale;
    let px = |p: Point| ((p.x - x0) * scale, height - (p.y - y0) * scale);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {:.2} {:.2}" width="{:.0}" height="{:.0}">"#,
        opts.width, height, opts.width, height
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{:.2}" height="{:.2}" fill="white"/>"#,
        opts.width, height
    );

    if boundary {
        let (bx0, by) = px(Point::new(x0, 0.0));
        let (bx1, _) = px(Point::new(x1, 0.0));
        let _ = writeln!(
            svg,
            r##"<line x1="{bx0:.2}" y1="{by:.2}" x2="{bx1:.2}" y2="{by:.2}" stroke="#444" stroke-width="1.2"/>"##
        );
    }

    for (v, path) in series.iter().enumerate() {
        if path.is_empty() {
            continue;
        }
        let color = &opts.palette[v % opts.palette.len()];
        let mut pts = String::new();
        for p in path {
            let (sx, sy) = px(*p);
            let _ = write!(pts, "{sx:.2},{sy:.2} ");
        }
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{:.2}" stroke-linejoin="round"/>"#,
            pts.trim_end(),
            opts.stroke_width
        );
    }

    for marker in markers {
        match marker {
            Marker::Segment(a, b) => {
                let (ax, ay) = px(*a);
                let (bx, by) = px(*b);
                let _ = writeln!(
                    svg,
                    r##"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="#333" stroke-width="1" stroke-dasharray="3 3"/>"##
                );
            }
            Marker::Diamond(p) => {
                let (cx, cy) = px(*p);
                let r = 5.0;
                let _ = writeln!(
                    svg,
                    r##"<path d="M {:.2} {:.2} L {:.2} {:.2} L {:.2} {:.2} L {:.2} {:.2} Z" fill="#c0392b"/>"##,
                    cx,
                    cy - r,
                    cx + r,
                    cy,
                    cx,
                    cy + r,
                    cx - r,
                    cy
                );
            }
            Marker::Cross(p) => {
                let (cx, cy) = px(*p);
                let r = 5.0;
                let _ = writeln!(
                    svg,
                    r##"<path d="M {:.2} {:.2} L {:.2} {:.2} M {:.2} {:.2} L {:.2} {:.2}" stroke="#7b1fa2" stroke-width="1.6"/>"##,
                    cx - r,
                    cy - r,
                    cx + r,
                    cy + r,
                    cx - r,
                    cy + r,
                    cx + r,
                    cy - r
                );
            }
        }
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

fn trajectory_markers(traj: &Trajectory) -> Vec<Marker> {
    traj.events
        .iter()
        .map(|e| {
            let (i, j) = e.vortex_indices;
            match e.kind {
                EventKind::VerticalAlignment => {
                    Marker::Segment(e.state.positions[i], e.state.positions[j])
                }
                EventKind::InstantaneousStop => {
                    let stopper = e
                        .diagnostics
                        .get("stop_vortex")
                        .map(|v| *v as usize)
                        .unwrap_or(i);
                    Marker::Diamond(e.state.positions[stopper])
                }
                EventKind::NearCollision => {
                    Marker::Cross((e.state.positions[i] + e.state.positions[j]) * 0.5)
                }
            }
        })
        .collect()
}

/// Renders a trajectory to an SVG document.
pub fn trajectory_svg(traj: &Trajectory, opts: &PlotOptions) -> Result<String, VortexError> {
    if traj.times.is_empty() {
        return Err(VortexError::InvalidArgument(
            "trajectory has no samples".to_string(),
        ));
    }
    let n = traj.system.len();
    let mut series = vec![Vec::with_capacity(traj.times.len()); n];
    for state in &traj.states {
        for (v, p) in state.positions.iter().enumerate() {
            series[v].push(*p);
        }
    }
    let markers = if opts.show_events {
        trajectory_markers(traj)
    } else {
        Vec::new()
    };
    series_svg(
        &series,
        traj.system.domain == Domain::HalfPlane,
        &markers,
        opts,
    )
}

pub fn plot_svg(traj: &Trajectory, path: &Path, opts: &PlotOptions) -> Result<(), VortexError> {
    let doc = trajectory_svg(traj, opts)?;
    let mut file = std::fs::File::create(path).map_err(|e| VortexError::io(path, e))?;
    file.write_all(doc.as_bytes())
        .map_err(|e| VortexError::io(path, e))
}
