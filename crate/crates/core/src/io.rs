//! Tabular and graphical output: CSV, JSON and a small SVG line plot.
//!
//! Numbers are written with the shortest representation that parses back
//! to the same float, so a CSV round trip is lossless.

use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Real;
use crate::sweep::{track_branches, BandRow, ConvergenceRow, GaugeRow, SweepTable};

pub const SWEEP_HEADER: &str = "phi,branch_sign,index,eigenvalue";
pub const SPECTRUM_HEADER: &str = "index,eigenvalue";
pub const BAND_HEADER: &str = "q,n,energy";
pub const CONVERGENCE_HEADER: &str = "n_points,gauge_k,eigenvalue,error";
pub const GAUGE_HEADER: &str = "gauge_k,periodic_continuum,periodic_discrete,twisted_discrete";

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("nothing to write: table is empty")]
    Empty,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json encoding failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// One flattened sweep entry, the record type of the sweep CSV/JSON schema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord<T> {
    pub phi: T,
    pub branch_sign: i8,
    pub index: usize,
    pub eigenvalue: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumRecord<T> {
    pub index: usize,
    pub eigenvalue: T,
}

pub fn sweep_records<T: Real>(table: &SweepTable<T>) -> Vec<SweepRecord<T>> {
    table
        .rows
        .iter()
        .flat_map(|row| {
            row.eigenvalues.iter().enumerate().map(move |(index, &eigenvalue)| SweepRecord {
                phi: row.phi,
                branch_sign: row.branch_sign,
                index,
                eigenvalue,
            })
        })
        .collect()
}

pub fn spectrum_records<T: Real>(eigenvalues: &[T]) -> Vec<SpectrumRecord<T>> {
    eigenvalues
        .iter()
        .enumerate()
        .map(|(index, &eigenvalue)| SpectrumRecord { index, eigenvalue })
        .collect()
}

pub fn emit_sweep_csv<T: Real, W: Write>(table: &SweepTable<T>, mut out: W) -> Result<(), EmitError> {
    if table.rows.is_empty() {
        return Err(EmitError::Empty);
    }
    writeln!(out, "{SWEEP_HEADER}")?;
    for r in sweep_records(table) {
        writeln!(out, "{},{},{},{}", r.phi, r.branch_sign, r.index, r.eigenvalue)?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_spectrum_csv<T: Real, W: Write>(eigenvalues: &[T], mut out: W) -> Result<(), EmitError> {
    if eigenvalues.is_empty() {
        return Err(EmitError::Empty);
    }
    writeln!(out, "{SPECTRUM_HEADER}")?;
    for (i, e) in eigenvalues.iter().enumerate() {
        writeln!(out, "{i},{e}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_band_csv<T: Real, W: Write>(rows: &[BandRow<T>], mut out: W) -> Result<(), EmitError> {
    if rows.is_empty() {
        return Err(EmitError::Empty);
    }
    writeln!(out, "{BAND_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{}", r.q, r.n, r.energy)?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_convergence_csv<T: Real, W: Write>(rows: &[ConvergenceRow<T>], mut out: W) -> Result<(), EmitError> {
    if rows.is_empty() {
        return Err(EmitError::Empty);
    }
    writeln!(out, "{CONVERGENCE_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.n_points, r.gauge_k, r.eigenvalue, r.error)?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_gauge_csv<T: Real, W: Write>(rows: &[GaugeRow<T>], mut out: W) -> Result<(), EmitError> {
    if rows.is_empty() {
        return Err(EmitError::Empty);
    }
    writeln!(out, "{GAUGE_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.gauge_k, r.periodic_continuum, r.periodic_discrete, r.twisted_discrete
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Writes `rows` as a JSON array of objects with the same fields as the CSV schema.
pub fn emit_json<S: Serialize, W: Write>(rows: &[S], mut out: W) -> Result<(), EmitError> {
    if rows.is_empty() {
        return Err(EmitError::Empty);
    }
    serde_json::to_writer_pretty(&mut out, rows)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Reads back a sweep CSV written by [`emit_sweep_csv`].
pub fn parse_sweep_csv<T, R>(input: R) -> Result<Vec<SweepRecord<T>>, EmitError>
where
    T: Real + FromStr,
    R: BufRead,
{
    let mut lines = input.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header != SWEEP_HEADER {
        return Err(EmitError::Parse {
            line: 1,
            message: format!("expected header `{SWEEP_HEADER}`, found `{header}`"),
        });
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        let bad = |what: &str| EmitError::Parse {
            line: lineno,
            message: format!("invalid {what}"),
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(EmitError::Parse {
                line: lineno,
                message: format!("expected 4 fields, found {}", fields.len()),
            });
        }
        out.push(SweepRecord {
            phi: fields[0].parse().map_err(|_| bad("phi"))?,
            branch_sign: fields[1].parse().map_err(|_| bad("branch_sign"))?,
            index: fields[2].parse().map_err(|_| bad("index"))?,
            eigenvalue: fields[3].parse().map_err(|_| bad("eigenvalue"))?,
        });
    }
    Ok(out)
}

/// Vertical extent of the plot; `None` fits the data.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlotWindow {
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_X: f64 = 0.1 * WIDTH;
const MARGIN_Y: f64 = 0.1 * HEIGHT;

/// Draws eigenvalue against twist magnitude, one polyline per tracked branch.
pub fn render_svg<T: Real, W: Write>(
    table: &SweepTable<T>,
    window: PlotWindow,
    mut out: W,
) -> Result<(), EmitError> {
    if table.phi_values().len() < 2 {
        return Err(EmitError::Empty);
    }
    type Polyline = Vec<(f64, f64)>;
    let branches: Vec<(i8, Vec<Polyline>)> = [1i8, -1]
        .iter()
        .map(|&s| {
            let lines = track_branches(table, s)
                .into_iter()
                .map(|l| {
                    l.into_iter()
                        .map(|(x, y)| (x.to_f64().unwrap_or(f64::NAN), y.to_f64().unwrap_or(f64::NAN)))
                        .collect()
                })
                .collect();
            (s, lines)
        })
        .collect();

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (_, lines) in &branches {
        for &(_, y) in lines.iter().flatten() {
            lo = lo.min(y);
            hi = hi.max(y);
        }
    }
    let y_min = window.y_min.unwrap_or(lo);
    let y_max = window.y_max.unwrap_or(hi);
    let (y_min, y_max) = if y_max > y_min { (y_min, y_max) } else { (y_min - 1.0, y_min + 1.0) };

    let plot_w = WIDTH - 2.0 * MARGIN_X;
    let plot_h = HEIGHT - 2.0 * MARGIN_Y;
    let px = |phi: f64| MARGIN_X + phi / std::f64::consts::PI * plot_w;
    let py = |y: f64| MARGIN_Y + (y_max - y) / (y_max - y_min) * plot_h;

    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )?;
    writeln!(
        out,
        r#"<defs><clipPath id="plot-area"><rect x="{MARGIN_X}" y="{MARGIN_Y}" width="{plot_w}" height="{plot_h}"/></clipPath></defs>"#
    )?;
    writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#)?;
    writeln!(
        out,
        r#"<g stroke="black" stroke-width="1" fill="none"><rect x="{MARGIN_X}" y="{MARGIN_Y}" width="{plot_w}" height="{plot_h}"/></g>"#
    )?;

    // phi ticks at 0, pi/2, pi
    writeln!(out, r#"<g font-family="sans-serif" font-size="14" fill="black">"#)?;
    for (frac, label) in [(0.0, "0"), (0.5, "π/2"), (1.0, "π")] {
        let x = px(frac * std::f64::consts::PI);
        let y = HEIGHT - MARGIN_Y;
        writeln!(out, r#"<line x1="{x:.2}" y1="{y:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, y + 6.0)?;
        writeln!(out, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, y + 22.0)?;
    }
    let first_tick = y_min.ceil() as i64;
    let last_tick = y_max.floor() as i64;
    if last_tick - first_tick <= 40 {
        for t in first_tick..=last_tick {
            let y = py(t as f64);
            writeln!(out, r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_X}" y2="{y:.2}" stroke="black"/>"#, MARGIN_X - 6.0)?;
            writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{t}</text>"#, MARGIN_X - 10.0, y + 5.0)?;
        }
    }
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">twist phase |Φ| (rad)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    )?;
    writeln!(
        out,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">momentum eigenvalue (ħ = 1)</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    )?;
    writeln!(out, "</g>")?;

    writeln!(out, r#"<g clip-path="url(#plot-area)" fill="none" stroke-width="1.5">"#)?;
    for (sign, lines) in &branches {
        let colour = if *sign > 0 { "#1f4e9c" } else { "#c0392b" };
        for line in lines {
            let points: Vec<String> = line.iter().map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y))).collect();
            writeln!(
                out,
                r#"<polyline class="branch" data-sign="{sign}" stroke="{colour}" points="{}"/>"#,
                points.join(" ")
            )?;
        }
    }
    writeln!(out, "</g>")?;
    writeln!(out, "</svg>")?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_ring_grid;
    use crate::sweep::{band_table, phi_sweep};

    fn sweep(n: usize, steps: usize) -> SweepTable<f64> {
        phi_sweep(&make_ring_grid(n).unwrap(), 0.0, steps).unwrap()
    }

    #[test]
    fn sweep_csv_shape() {
        let mut buf = Vec::new();
        emit_sweep_csv(&sweep(20, 2), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines.len(), 1 + 2 * 2 * 20);
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }

    #[test]
    fn band_csv_rows() {
        let mut buf = Vec::new();
        emit_band_csv(&band_table::<f64>(-1, 1, 3).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some(BAND_HEADER));
        assert_eq!(text.lines().count(), 10);
        assert!(text.contains("\n0.5,0,0.25\n"));
    }

    #[test]
    fn spectrum_csv_contains_near_one_level() {
        let g = make_ring_grid::<f64>(20).unwrap();
        let ev = crate::eigen::analytic_twisted_spectrum(&g, 0.0, 0.0);
        let mut buf = Vec::new();
        emit_spectrum_csv(&ev, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let near_one = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
            .filter(|v| (v - 0.98363).abs() < 1e-5)
            .count();
        assert!(near_one >= 1);
    }

    #[test]
    fn empty_tables_rejected() {
        assert!(matches!(emit_spectrum_csv::<f64, _>(&[], Vec::new()), Err(EmitError::Empty)));
        assert!(matches!(emit_band_csv::<f64, _>(&[], Vec::new()), Err(EmitError::Empty)));
        assert!(matches!(emit_json::<SpectrumRecord<f64>, _>(&[], Vec::new()), Err(EmitError::Empty)));
    }

    #[test]
    fn json_mirrors_csv_fields() {
        let table = sweep(5, 2);
        let mut buf = Vec::new();
        emit_json(&sweep_records(&table), &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 20);
        let keys: Vec<&String> = arr[0].as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 4);
        for k in ["phi", "branch_sign", "index", "eigenvalue"] {
            assert!(arr[0].get(k).is_some());
        }
    }

    #[test]
    fn csv_parse_errors() {
        assert!(parse_sweep_csv::<f64, _>("a,b\n".as_bytes()).is_err());
        let bad = format!("{SWEEP_HEADER}\n0,1,x,0.5\n");
        match parse_sweep_csv::<f64, _>(bad.as_bytes()) {
            Err(EmitError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn svg_is_well_formed() {
        let mut buf = Vec::new();
        render_svg(&sweep(20, 2), PlotWindow::default(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        assert_eq!(doc.root_element().tag_name().name(), "svg");
        let polylines: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("polyline")).collect();
        assert_eq!(polylines.len(), 40);
        // two steps: every branch is a single straight segment
        for p in polylines {
            assert_eq!(p.attribute("points").unwrap().split(' ').count(), 2);
        }
    }
}
