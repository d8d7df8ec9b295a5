//! CSV persistence: `#` metadata lines, one header line, one row per cell.
//!
//! ```text
//! # hmbec sweep
//! # version: 0.1.0
//! # target: region
//! # fixed: k=0.0
//! # axes: alpha:-3.0:3.0:200;lambda:-2.0:2.0:200
//! alpha,lambda,label,phi0,phi_pi,z_boundary,ambiguous,error
//! ```
//!
//! Floats are written with 17 significant digits, integers plainly and
//! text verbatim. Failed cells leave the output fields empty and carry
//! their error in the last column.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Axis, Row, SweepResult, SweepSpec, Value};
use crate::error::{Error, Result};

const MAGIC: &str = "# hmbec sweep";

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn field(v: &Value) -> String {
    match v {
        Value::Num(x) => float(*x),
        Value::Int(i) => i.to_string(),
        Value::Text(s) => s.clone(),
    }
}

pub fn write_csv<W: Write>(r: &SweepResult, mut w: W) -> Result<()> {
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "# version: {}", r.version)?;
    writeln!(w, "# target: {}", r.spec.target)?;
    let fixed: Vec<String> = r.spec.fixed.iter().map(|(k, v)| format!("{k}={v:?}")).collect();
    writeln!(w, "# fixed: {}", fixed.join(";"))?;
    let axes: Vec<String> = r
        .spec
        .axes
        .iter()
        .map(|a| format!("{}:{:?}:{:?}:{}", a.name, a.start, a.stop, a.count))
        .collect();
    writeln!(w, "# axes: {}", axes.join(";"))?;
    let mut header: Vec<&str> = r.spec.axes.iter().map(|a| a.name.as_str()).collect();
    header.extend(r.outputs.iter().map(String::as_str));
    header.push("error");
    writeln!(w, "{}", header.join(","))?;
    for row in &r.rows {
        let mut cells: Vec<String> = row.point.iter().map(|&x| float(x)).collect();
        if row.error.is_some() {
            cells.extend(std::iter::repeat_n(String::new(), r.outputs.len()));
        } else {
            cells.extend(row.values.iter().map(field));
        }
        cells.push(row.error.clone().unwrap_or_default());
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn persist(r: &SweepResult, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_csv(r, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load(path: &Path) -> Result<SweepResult> {
    read_csv(File::open(path)?)
}

fn malformed(line: usize, reason: impl Into<String>) -> Error {
    Error::Malformed {
        line,
        reason: reason.into(),
    }
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse().map_err(|_| malformed(line, format!("'{s}' is not a number")))
}

fn parse_value(s: &str) -> Value {
    if let Ok(i) = s.parse::<i64>() {
        return Value::Int(i);
    }
    match s.parse::<f64>() {
        Ok(x) => Value::Num(x),
        Err(_) => Value::Text(s.to_string()),
    }
}

fn meta<'a>(line: Option<(usize, &'a str)>, key: &str) -> Result<(usize, &'a str)> {
    let (n, text) = line.ok_or_else(|| malformed(0, format!("missing '{key}' line")))?;
    let prefix = format!("# {key}:");
    text.strip_prefix(&prefix)
        .map(|rest| (n, rest.trim()))
        .ok_or_else(|| malformed(n, format!("expected '{prefix}'")))
}

pub fn read_csv<R: Read>(reader: R) -> Result<SweepResult> {
    let text: Vec<String> = BufReader::new(reader).lines().collect::<std::io::Result<_>>()?;
    let mut lines = text.iter().enumerate().map(|(i, l)| (i + 1, l.as_str()));
    match lines.next() {
        Some((_, l)) if l == MAGIC => {}
        _ => return Err(malformed(1, "not a sweep file")),
    }
    let (_, version) = meta(lines.next(), "version")?;
    let (n, target) = meta(lines.next(), "target")?;
    let target = target
        .parse()
        .map_err(|_| malformed(n, format!("unknown target '{target}'")))?;
    let (n, fixed_text) = meta(lines.next(), "fixed")?;
    let mut fixed = BTreeMap::new();
    for item in fixed_text.split(';').filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| malformed(n, format!("bad fixed entry '{item}'")))?;
        fixed.insert(k.to_string(), parse_f64(v, n)?);
    }
    let (n, axes_text) = meta(lines.next(), "axes")?;
    let mut axes = Vec::new();
    for item in axes_text.split(';').filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let [name, start, stop, count] = parts[..] else {
            return Err(malformed(n, format!("bad axis '{item}'")));
        };
        let count = count
            .parse()
            .map_err(|_| malformed(n, format!("bad axis count '{count}'")))?;
        axes.push(Axis::new(name, parse_f64(start, n)?, parse_f64(stop, n)?, count));
    }
    let spec = SweepSpec { target, fixed, axes };
    let (n, header) = lines
        .next()
        .ok_or_else(|| malformed(text.len() + 1, "missing header"))?;
    let cols: Vec<&str> = header.split(',').collect();
    let n_axes = spec.axes.len();
    if cols.len() < n_axes + 1
        || cols.last() != Some(&"error")
        || cols[..n_axes].iter().zip(&spec.axes).any(|(c, a)| *c != a.name)
    {
        return Err(malformed(n, "header does not match the axes"));
    }
    let outputs: Vec<String> = cols[n_axes..cols.len() - 1].iter().map(|s| s.to_string()).collect();
    let mut rows = Vec::new();
    for (n, line) in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != cols.len() {
            return Err(malformed(
                n,
                format!("expected {} fields, found {}", cols.len(), cells.len()),
            ));
        }
        let point = cells[..n_axes]
            .iter()
            .map(|c| parse_f64(c, n))
            .collect::<Result<Vec<_>>>()?;
        let err = cells[cells.len() - 1];
        let (values, error) = if err.is_empty() {
            (
                cells[n_axes..cells.len() - 1].iter().map(|c| parse_value(c)).collect(),
                None,
            )
        } else {
            (Vec::new(), Some(err.to_string()))
        };
        rows.push(Row { point, values, error });
    }
    if rows.len() != spec.cell_count() {
        return Err(malformed(
            text.len(),
            format!("expected {} rows, found {}", spec.cell_count(), rows.len()),
        ));
    }
    Ok(SweepResult {
        spec,
        version: version.to_string(),
        outputs,
        rows,
    })
}
