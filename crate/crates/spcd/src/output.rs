//! Table and surface files.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use spcd_core::analysis::{EpsRow, MeshPair};
use spcd_core::{Level, TwoMeshReport};

use crate::error::{io_at, Error, Result};
use crate::sweep::Surfaces;

pub const TABLE_HEADER: [&str; 7] = ["eps_exp", "N", "M", "D", "P", "D_full", "P_full"];
pub const UNIFORM_LABEL: &str = "uniform";

/// Four significant digits with a two-digit signed exponent: `3.495E-02`.
pub fn sci4(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{v:.3E}");
    let (mantissa, exp) = s.split_once('E').expect("LowerExp output has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{:02}", exp.abs())
}

/// Shortest text that parses back to the same `f64`.
pub fn full(v: f64) -> String {
    format!("{v:e}")
}

fn order_text(v: f64) -> String {
    format!("{v:.3}")
}

pub fn table_stem(example: u32, level: Level) -> String {
    format!("table_example{example}_level{}", level.index())
}

pub fn write_table_csv<W: Write>(report: &TwoMeshReport, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(TABLE_HEADER)?;
    let mut emit = |label: &str, cells: &[MeshPair], orders: &[f64]| -> Result<()> {
        for (k, c) in cells.iter().enumerate() {
            let p = orders.get(k);
            out.write_record([
                label.to_string(),
                c.n.to_string(),
                c.m.to_string(),
                sci4(c.diff),
                p.map_or(String::new(), |&p| order_text(p)),
                full(c.diff),
                p.map_or(String::new(), |&p| full(p)),
            ])?;
        }
        Ok(())
    };
    for row in &report.rows {
        emit(&row.eps_exp.to_string(), &row.cells, &row.orders)?;
    }
    emit(UNIFORM_LABEL, &report.uniform, &report.uniform_orders)?;
    out.flush().map_err(io_at("<table csv>"))?;
    Ok(())
}

/// Rebuilds the report from its CSV form. Scheme residuals are not stored and read back as 0.
pub fn read_table_csv<R: Read>(example: u32, level: Level, r: R) -> Result<TwoMeshReport> {
    let mut rdr = csv::Reader::from_reader(r);
    if rdr.headers()?.iter().ne(TABLE_HEADER) {
        return Err(Error::Config("table csv has unexpected columns".into()));
    }
    let mut rows: Vec<EpsRow> = Vec::new();
    let (mut uniform, mut uniform_orders) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec?;
        let parse_f = |i: usize| -> Result<f64> {
            rec[i].parse().map_err(|_| Error::Config(format!("bad number `{}` in column {}", &rec[i], TABLE_HEADER[i])))
        };
        let parse_u = |i: usize| -> Result<usize> {
            rec[i]
                .parse()
                .map_err(|_| Error::Config(format!("bad integer `{}` in column {}", &rec[i], TABLE_HEADER[i])))
        };
        let cell = MeshPair { n: parse_u(1)?, m: parse_u(2)?, diff: parse_f(5)? };
        let order = if rec[6].is_empty() { None } else { Some(parse_f(6)?) };
        let (cells, orders) = if &rec[0] == UNIFORM_LABEL {
            (&mut uniform, &mut uniform_orders)
        } else {
            let e: u32 = rec[0].parse().map_err(|_| Error::Config(format!("bad eps_exp `{}`", &rec[0])))?;
            if rows.last().is_none_or(|r| r.eps_exp != e) {
                rows.push(EpsRow { eps_exp: e, cells: Vec::new(), orders: Vec::new(), max_residual: 0.0 });
            }
            let row = rows.last_mut().expect("just pushed");
            (&mut row.cells, &mut row.orders)
        };
        cells.push(cell);
        orders.extend(order);
    }
    Ok(TwoMeshReport { example, level, rows, uniform, uniform_orders })
}

fn column_title(c: &MeshPair) -> String {
    if c.n == c.m {
        format!("N=M={}", c.n)
    } else {
        format!("N={},M={}", c.n, c.m)
    }
}

/// Per-ε difference rows each followed by an order row; uniform rows last.
pub fn table_markdown(report: &TwoMeshReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Two-mesh differences, example {}, level {}", report.example, report.level.index());
    s.push('\n');
    let titles: Vec<String> = report.uniform.iter().map(column_title).collect();
    let _ = writeln!(s, "| | {} |", titles.join(" | "));
    let _ = writeln!(s, "|---|{}", "---|".repeat(titles.len()));
    let mut emit = |label: &str, cells: &[MeshPair], orders: &[f64], order_label: &str| {
        let d: Vec<String> = cells.iter().map(|c| sci4(c.diff)).collect();
        let mut p: Vec<String> = orders.iter().map(|&v| order_text(v)).collect();
        p.resize(cells.len(), String::new());
        let _ = writeln!(s, "| {label} | {} |", d.join(" | "));
        let _ = writeln!(s, "| {order_label} | {} |", p.join(" | "));
    };
    for row in &report.rows {
        emit(&format!("eps=2^-{}", row.eps_exp), &row.cells, &row.orders, "");
    }
    emit("D^{N,M}", &report.uniform, &report.uniform_orders, "P^{N,M}");
    s
}

pub fn surface_stem(kind: &str, example: u32, level: Level, s: &Surfaces) -> String {
    format!(
        "surface_{kind}_example{example}_level{}_eps{}_n{}_m{}",
        level.index(),
        s.request.eps_exp,
        s.request.n,
        s.request.m
    )
}

/// `x, t, value` rows, `x` fastest.
pub fn write_surface_csv<W: Write>(s: &Surfaces, values: &[f64], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x", "t", "value"])?;
    let mesh = s.y.mesh();
    let mut it = values.iter();
    for &t in mesh.time.nodes() {
        for &x in mesh.space.nodes() {
            let v = it.next().ok_or_else(|| Error::Config("surface values shorter than mesh".into()))?;
            out.write_record([full(x), full(t), full(*v)])?;
        }
    }
    out.flush().map_err(io_at("<surface csv>"))?;
    Ok(())
}

pub(crate) fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    fs::create_dir_all(dir).map_err(io_at(dir))?;
    let path = dir.join(name);
    let f = File::create(&path).map_err(io_at(&path))?;
    Ok((path, BufWriter::new(f)))
}

pub(crate) fn finish(path: &Path, mut w: BufWriter<File>) -> Result<()> {
    w.flush().map_err(io_at(path))
}

pub(crate) fn write_string(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let (path, mut w) = create(dir, name)?;
    w.write_all(text.as_bytes()).map_err(io_at(&path))?;
    finish(&path, w)?;
    Ok(path)
}
