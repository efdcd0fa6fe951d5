//! File formats.
//!
//! Signals and spectra travel as CSV with header
//! `coord_0,...,coord_{d-1},re,im` and one row per group element in
//! row-major order (coordinate 0 most significant), so N and d are read off
//! the file itself. Index sets travel as JSON
//! `{"N": .., "d": .., "points": [[..], ..]}` with points sorted
//! lexicographically.
//!
//! Floats are written with the shortest round-trip representation, so a
//! write/read cycle is value-exact and regeneration is byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupSpec, IndexSet, Point, Signal, Spectrum};

fn render_csv(group: &GroupSpec, values: &[Complex64]) -> String {
    let d = group.dimension() as usize;
    let mut out = String::new();
    for k in 0..d {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "coord_{k}");
    }
    out.push_str(",re,im\n");
    for (i, v) in values.iter().enumerate() {
        for (k, c) in group.coords_of(i).iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let _ = write!(out, "{c}");
        }
        let _ = writeln!(out, ",{},{}", v.re, v.im);
    }
    out
}

fn parse_csv(text: &str, what: &'static str) -> Result<(GroupSpec, Vec<Complex64>)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or(Error::Parse {
        what,
        reason: "empty file".into(),
    })?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 3 || cols[cols.len() - 2] != "re" || cols[cols.len() - 1] != "im" {
        return Err(Error::Parse {
            what,
            reason: format!("bad header {header:?}; expected coord_0,...,re,im"),
        });
    }
    let d = cols.len() - 2;
    for (k, col) in cols[..d].iter().enumerate() {
        if *col != format!("coord_{k}") {
            return Err(Error::Parse {
                what,
                reason: format!("bad header column {col:?}"),
            });
        }
    }

    let mut rows: Vec<(Vec<u64>, Complex64)> = Vec::new();
    for (line_no, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != d + 2 {
            return Err(Error::Parse {
                what,
                reason: format!("row {}: expected {} fields", line_no + 2, d + 2),
            });
        }
        let mut coords = Vec::with_capacity(d);
        for f in &fields[..d] {
            coords.push(f.parse::<u64>().map_err(|e| Error::Parse {
                what,
                reason: format!("row {}: bad coordinate {f:?}: {e}", line_no + 2),
            })?);
        }
        let re: f64 = fields[d].parse().map_err(|e| Error::Parse {
            what,
            reason: format!("row {}: bad re: {e}", line_no + 2),
        })?;
        let im: f64 = fields[d + 1].parse().map_err(|e| Error::Parse {
            what,
            reason: format!("row {}: bad im: {e}", line_no + 2),
        })?;
        rows.push((coords, Complex64::new(re, im)));
    }

    let last = rows.last().ok_or(Error::Parse {
        what,
        reason: "no data rows".into(),
    })?;
    // All rows are present in row-major order, so the final row sits at
    // (N-1, ..., N-1).
    let modulus = last.0[0] + 1;
    let group = GroupSpec::new(modulus, d as u32)?;
    if rows.len() != group.size() {
        return Err(Error::Parse {
            what,
            reason: format!(
                "expected {} rows for {}, found {}",
                group.size(),
                group,
                rows.len()
            ),
        });
    }
    let mut values = Vec::with_capacity(rows.len());
    for (i, (coords, v)) in rows.into_iter().enumerate() {
        if coords != group.coords_of(i) {
            return Err(Error::Parse {
                what,
                reason: format!("row {} out of row-major order", i + 2),
            });
        }
        values.push(v);
    }
    Ok((group, values))
}

pub fn signal_to_csv(signal: &Signal) -> String {
    render_csv(signal.group(), signal.values())
}

pub fn spectrum_to_csv(spectrum: &Spectrum) -> String {
    render_csv(spectrum.group(), spectrum.values())
}

pub fn signal_from_csv(text: &str) -> Result<Signal> {
    let (group, values) = parse_csv(text, "signal csv")?;
    Signal::new(group, values)
}

pub fn spectrum_from_csv(text: &str) -> Result<Spectrum> {
    let (group, values) = parse_csv(text, "spectrum csv")?;
    Spectrum::new(group, values)
}

pub fn write_signal_csv<P: AsRef<Path>>(path: P, signal: &Signal) -> Result<()> {
    Ok(fs::write(path, signal_to_csv(signal))?)
}

pub fn read_signal_csv<P: AsRef<Path>>(path: P) -> Result<Signal> {
    signal_from_csv(&fs::read_to_string(path)?)
}

pub fn write_spectrum_csv<P: AsRef<Path>>(path: P, spectrum: &Spectrum) -> Result<()> {
    Ok(fs::write(path, spectrum_to_csv(spectrum))?)
}

pub fn read_spectrum_csv<P: AsRef<Path>>(path: P) -> Result<Spectrum> {
    spectrum_from_csv(&fs::read_to_string(path)?)
}

#[derive(Serialize, Deserialize)]
struct IndexSetJson {
    #[serde(rename = "N")]
    modulus: u64,
    d: u32,
    points: Vec<Vec<u64>>,
}

pub fn index_set_to_json(set: &IndexSet) -> Result<String> {
    let doc = IndexSetJson {
        modulus: set.group().modulus(),
        d: set.group().dimension(),
        points: set.points().iter().map(|p| p.coords().to_vec()).collect(),
    };
    Ok(serde_json::to_string(&doc)?)
}

pub fn index_set_from_json(text: &str) -> Result<IndexSet> {
    let doc: IndexSetJson = serde_json::from_str(text)?;
    let group = GroupSpec::new(doc.modulus, doc.d)?;
    let points: Result<Vec<Point>> = doc
        .points
        .iter()
        .map(|coords| Point::new(coords.clone(), &group))
        .collect();
    IndexSet::from_points(group, &points?)
}

pub fn write_index_set_json<P: AsRef<Path>>(path: P, set: &IndexSet) -> Result<()> {
    Ok(fs::write(path, index_set_to_json(set)?)?)
}

pub fn read_index_set_json<P: AsRef<Path>>(path: P) -> Result<IndexSet> {
    index_set_from_json(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let g = GroupSpec::new(3, 2).unwrap();
        let values: Vec<Complex64> = (0..9)
            .map(|i| Complex64::new(0.1 * i as f64, -1.0 / (i as f64 + 1.0)))
            .collect();
        let f = Signal::new(g, values).unwrap();
        let text = signal_to_csv(&f);
        assert!(text.starts_with("coord_0,coord_1,re,im\n"));
        let back = signal_from_csv(&text).unwrap();
        assert_eq!(back.group(), f.group());
        assert_eq!(back.values(), f.values());
        // byte-identical regeneration
        assert_eq!(signal_to_csv(&back), text);
    }

    #[test]
    fn csv_rejects_out_of_order_rows() {
        let good = "coord_0,re,im\n0,1,0\n1,0,0\n";
        assert!(signal_from_csv(good).is_ok());
        let bad = "coord_0,re,im\n1,1,0\n0,0,0\n";
        assert!(signal_from_csv(bad).is_err());
        let truncated = "coord_0,re,im\n0,1,0\n";
        assert!(signal_from_csv(truncated).is_err());
    }

    #[test]
    fn index_set_json_round_trip() {
        let g = GroupSpec::new(10, 2).unwrap();
        let set = IndexSet::from_flat_indices(g, vec![5, 17, 42, 99]).unwrap();
        let text = index_set_to_json(&set).unwrap();
        assert!(text.contains("\"N\":10"));
        let back = index_set_from_json(&text).unwrap();
        assert_eq!(back, set);
    }

    #[test]
    fn index_set_json_rejects_bad_points() {
        let text = r#"{"N":4,"d":1,"points":[[5]]}"#;
        assert!(index_set_from_json(text).is_err());
    }
}
