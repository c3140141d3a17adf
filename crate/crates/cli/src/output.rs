//! Text and image encodings of sampled fields.
//!
//! Every number is written with 17 significant digits, enough to read back
//! the identical `f64`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use wdl_core::{DistributionField, Grid1D, Grid2D};

use crate::config::RunConfig;

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn header(config: &RunConfig, t: f64) -> String {
    format!("# config: {}\n# t: {}\n", config.canonical_json(), num(t))
}

/// `coordinate,value` rows of a 1-D density.
pub fn scan_csv(config: &RunConfig, field: &DistributionField) -> String {
    let grid = field.line().expect("1-D field");
    let mut out = header(config, field.time);
    let _ = writeln!(out, "# grid: {}:{}:{}", num(grid.min), num(grid.max), grid.count);
    out.push_str("coordinate,value\n");
    for (i, v) in field.values.iter().enumerate() {
        let _ = writeln!(out, "{},{}", num(grid.point(i)), num(*v));
    }
    out
}

/// Row-major Wigner matrix: one line per `x`, one column per `p`.
pub fn wigner_csv(config: &RunConfig, field: &DistributionField) -> String {
    let g = field.plane().expect("phase-space field");
    let mut out = header(config, field.time);
    let _ = writeln!(out, "# x: {}:{}:{}", num(g.x.min), num(g.x.max), g.x.count);
    let _ = writeln!(out, "# p: {}:{}:{}", num(g.p.min), num(g.p.max), g.p.count);
    let _ = writeln!(out, "# min: {}", num(field.min()));
    let _ = writeln!(out, "# max: {}", num(field.max()));
    for i in 0..g.x.count {
        let row: Vec<String> = field.row(i).iter().map(|v| num(*v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// 8-bit binary graymap, `[min, max]` mapped linearly onto `[0, 255]`.
/// Rows follow `x`, columns follow `p`; the range is kept in a comment.
pub fn pgm(field: &DistributionField) -> Vec<u8> {
    let g = field.plane().expect("phase-space field");
    let (min, max) = (field.min(), field.max());
    let span = max - min;
    let mut out = format!(
        "P5\n# min {} max {}\n{} {}\n255\n",
        num(min),
        num(max),
        g.p.count,
        g.x.count
    )
    .into_bytes();
    out.extend(field.values.iter().map(|&v| {
        if span > 0.0 {
            ((v - min) / span * 255.0).round().clamp(0.0, 255.0) as u8
        } else {
            0
        }
    }));
    out
}

/// Plots a Wigner CSV written next to it as a heat map.
pub fn gnuplot_script(csv_name: &str, g: &Grid2D) -> String {
    format!(
        "set datafile separator ','\n\
         set xlabel 'p'\nset ylabel 'x'\n\
         set palette gray\nset view map\n\
         dp = ({pmax} - {pmin}) / {pn1}.0\n\
         dx = ({xmax} - {xmin}) / {xn1}.0\n\
         plot '{csv_name}' matrix using ({pmin} + $1*dp):({xmin} + $2*dx):3 with image notitle\n",
        pmin = num(g.p.min),
        pmax = num(g.p.max),
        pn1 = g.p.count - 1,
        xmin = num(g.x.min),
        xmax = num(g.x.max),
        xn1 = g.x.count - 1,
    )
}

/// `out.csv` → `out_t3.csv` when several times are written.
pub fn indexed_path(path: &Path, index: usize, total: usize) -> PathBuf {
    if total <= 1 {
        return path.to_path_buf();
    }
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_t{index}.{}", ext.to_string_lossy()),
        None => format!("{stem}_t{index}"),
    };
    path.with_file_name(name)
}

/// A scan CSV read back.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanFile {
    pub config: RunConfig,
    pub t: f64,
    pub grid: Grid1D,
    pub rows: Vec<(f64, f64)>,
}

fn meta<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str, String> {
    let line = line.ok_or_else(|| format!("missing '# {key}:' line"))?;
    line.strip_prefix("# ")
        .and_then(|l| l.strip_prefix(key))
        .and_then(|l| l.strip_prefix(": "))
        .ok_or_else(|| format!("expected '# {key}: ...', got '{line}'"))
}

fn parse_num(s: &str) -> Result<f64, String> {
    s.trim().parse().map_err(|_| format!("'{s}' is not a number"))
}

pub fn read_scan(text: &str) -> Result<ScanFile, String> {
    let mut lines = text.lines();
    let config = RunConfig::from_json(meta(lines.next(), "config")?).map_err(|e| e.to_string())?;
    let t = parse_num(meta(lines.next(), "t")?)?;
    let grid: Vec<&str> = meta(lines.next(), "grid")?.split(':').collect();
    let [min, max, count] = grid[..] else {
        return Err("grid line needs min:max:count".into());
    };
    let count: usize = count.trim().parse().map_err(|_| format!("bad grid count '{count}'"))?;
    let grid = Grid1D::new(parse_num(min)?, parse_num(max)?, count).map_err(|e| e.to_string())?;
    if lines.next() != Some("coordinate,value") {
        return Err("missing 'coordinate,value' column header".into());
    }
    let rows = lines
        .map(|l| {
            let (c, v) = l.split_once(',').ok_or_else(|| format!("bad row '{l}'"))?;
            Ok((parse_num(c)?, parse_num(v)?))
        })
        .collect::<Result<Vec<_>, String>>()?;
    if rows.len() != grid.count {
        return Err(format!("{} rows for a {}-point grid", rows.len(), grid.count));
    }
    Ok(ScanFile { config, t, grid, rows })
}
