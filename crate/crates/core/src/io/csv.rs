//! Trajectory CSV schema: `t,x1,y1,...,xN,yN,H,P[,Q,I][,W]`, one row per
//! sample, 17 significant digits, events appended as `# event,...` comment
//! lines after the data.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::dynamics::invariants;
use crate::error::VortexError;
use crate::integrate::Trajectory;
use crate::model::Point;

/// Formats with 17 significant digits, enough to reproduce an f64 exactly.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn header_columns(traj: &Trajectory) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    for i in 1..=traj.system.len() {
        cols.push(format!("x{i}"));
        cols.push(format!("y{i}"));
    }
    // fixed order, independent of the drift map's alphabetical keys
    let inv = invariants(&traj.system, &traj.states[0]).expect("trajectory states are valid");
    for (name, _) in inv.named() {
        cols.push(name.to_string());
    }
    cols
}

/// Renders the full CSV document, including event comment lines.
pub fn trajectory_csv(traj: &Trajectory) -> Result<String, VortexError> {
    if traj.times.is_empty() {
        return Err(VortexError::InvalidArgument(
            "trajectory has no samples".to_string(),
        ));
    }
    let mut out = String::new();
    out.push_str(&header_columns(traj).join(","));
    out.push('\n');
    for (t, state) in traj.times.iter().zip(&traj.states) {
        out.push_str(&fmt_f64(*t));
        for p in &state.positions {
            out.push(',');
            out.push_str(&fmt_f64(p.x));
            out.push(',');
            out.push_str(&fmt_f64(p.y));
        }
        let inv = invariants(&traj.system, state)?;
        for (_, value) in inv.named() {
            out.push(',');
            out.push_str(&fmt_f64(value));
        }
        out.push('\n');
    }
    for e in &traj.events {
        out.push_str(&format!(
            "# event,{},{},{},{}\n",
            e.kind,
            fmt_f64(e.time),
            e.vortex_indices.0,
            e.vortex_indices.1
        ));
    }
    Ok(out)
}

pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<(), VortexError> {
    let doc = trajectory_csv(traj)?;
    let mut file = std::fs::File::create(path).map_err(|e| VortexError::io(path, e))?;
    file.write_all(doc.as_bytes())
        .map_err(|e| VortexError::io(path, e))
}

/// An event comment line parsed back from a CSV document.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvEvent {
    pub kind: String,
    pub time: f64,
    pub i: usize,
    pub j: usize,
}

/// A trajectory read back from its CSV form. Strengths are not part of the
/// schema, so only geometry and the invariant columns are available.
#[derive(Clone, Debug)]
pub struct LoadedCsv {
    pub columns: Vec<String>,
    pub times: Vec<f64>,
    /// Outer index: vortex; inner: sample.
    pub paths: Vec<Vec<Point>>,
    pub invariant_columns: BTreeMap<String, Vec<f64>>,
    pub events: Vec<CsvEvent>,
}

impl LoadedCsv {
    pub fn vortex_count(&self) -> usize {
        self.paths.len()
    }

    /// The half-plane schema is the one without the plane-only columns.
    pub fn is_half_plane(&self) -> bool {
        !self.columns.iter().any(|c| c == "Q")
    }
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize) -> Result<T, VortexError> {
    field
        .parse()
        .map_err(|_| VortexError::Config(format!("unparsable value {field:?} on line {line}")))
}

pub fn parse_trajectory_csv(text: &str) -> Result<LoadedCsv, VortexError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| VortexError::Config("empty CSV document".to_string()))?;
    let columns: Vec<String> = header.split(',').map(|s| s.to_string()).collect();
    if columns.first().map(String::as_str) != Some("t") {
        return Err(VortexError::Config(format!(
            "expected a trajectory header starting with 't', got {header:?}"
        )));
    }
    let n = columns.iter().filter(|c| c.starts_with('x')).count();
    let inv_names: Vec<String> = columns[1 + 2 * n..].to_vec();

    let mut loaded = LoadedCsv {
        columns,
        times: Vec::new(),
        paths: vec![Vec::new(); n],
        invariant_columns: inv_names.iter().map(|c| (c.clone(), Vec::new())).collect(),
        events: Vec::new(),
    };

    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let fields: Vec<&str> = comment.trim().split(',').collect();
            if fields.first().copied() == Some("event") && fields.len() == 5 {
                loaded.events.push(CsvEvent {
                    kind: fields[1].to_string(),
                    time: parse_field(fields[2], lineno)?,
                    i: parse_field(fields[3], lineno)?,
                    j: parse_field(fields[4], lineno)?,
                });
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != loaded.columns.len() {
            return Err(VortexError::Config(format!(
                "line {lineno} has {} fields, header declares {}",
                fields.len(),
                loaded.columns.len()
            )));
        }
        loaded.times.push(parse_field(fields[0], lineno)?);
        for v in 0..n {
            let x = parse_field(fields[1 + 2 * v], lineno)?;
            let y = parse_field(fields[2 + 2 * v], lineno)?;
            loaded.paths[v].push(Point::new(x, y));
        }
        for (k, name) in inv_names.iter().enumerate() {
            let value = parse_field(fields[1 + 2 * n + k], lineno)?;
            loaded
                .invariant_columns
                .get_mut(name)
                .expect("initialized above")
                .push(value);
        }
    }
    Ok(loaded)
}

pub fn read_trajectory_csv(path: &Path) -> Result<LoadedCsv, VortexError> {
    let text = std::fs::read_to_string(path).map_err(|e| VortexError::io(path, e))?;
    parse_trajectory_csv(&text)
}
