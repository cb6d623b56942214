//! CSV and JSON emission, and the small text parsers the CLI needs.
//!
//! Reals are written with 17 significant digits so every value round-trips.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::regions::RegionSlice;
use crate::harness::report::{SampleRecord, SteeringReport};
use crate::linalg::Vec3;

pub const REPORT_COLUMNS: [&str; 16] = [
    "t1", "t2", "t3", "p00", "p01", "p10", "p11", "C", "S", "chsh", "normS", "V", "frob", "s3lb", "s3est",
    "class",
];

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn report_fields(r: &SteeringReport) -> Vec<String> {
    let mut out: Vec<String> = r.t.iter().chain(&r.probabilities).map(|&x| fmt_real(x)).collect();
    out.extend(
        [r.concurrence, r.s, r.chsh, r.normalized_s, r.volume, r.frobenius, r.s3_lower]
            .map(fmt_real),
    );
    out.push(r.s3_estimate.map(fmt_real).unwrap_or_default());
    out.push(r.class.to_string());
    out
}

/// Rows prefixed by `key` (an index or a family parameter).
fn write_rows<W: Write, K: Copy>(
    w: W,
    key: &str,
    rows: impl IntoIterator<Item = (K, SteeringReport)>,
    show: impl Fn(K) -> String,
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(std::iter::once(key).chain(REPORT_COLUMNS))?;
    for (k, r) in rows {
        csv.write_record(std::iter::once(show(k)).chain(report_fields(&r)))?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_samples_csv<W: Write>(w: W, records: &[SampleRecord]) -> Result<()> {
    write_rows(w, "index", records.iter().map(|r| (r.index, r.report)), |i| i.to_string())
}

pub fn write_sweep_csv<W: Write>(w: W, rows: &[(f64, SteeringReport)]) -> Result<()> {
    write_rows(w, "param", rows.iter().copied(), fmt_real)
}

pub fn write_regions_csv<W: Write>(w: W, slice: &RegionSlice) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["t1", "t2", "t3", "label"])?;
    for c in &slice.cells {
        let mut rec: Vec<String> = c.t.iter().map(|&x| fmt_real(x)).collect();
        rec.push(c.label.as_str().to_string());
        csv.write_record(&rec)?;
    }
    csv.flush()?;
    Ok(())
}

/// Flat JSON object with the CSV column names as keys.
#[derive(Serialize)]
pub struct JsonReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "S")]
    pub s: f64,
    pub chsh: f64,
    #[serde(rename = "normS")]
    pub norm_s: f64,
    #[serde(rename = "V")]
    pub v: f64,
    pub frob: f64,
    pub s3lb: f64,
    pub s3est: Option<f64>,
    pub class: String,
}

impl JsonReport {
    pub fn new(index: Option<u64>, r: &SteeringReport) -> Self {
        let [t1, t2, t3] = r.t;
        let [p00, p01, p10, p11] = r.probabilities;
        JsonReport {
            index,
            t1,
            t2,
            t3,
            p00,
            p01,
            p10,
            p11,
            c: r.concurrence,
            s: r.s,
            chsh: r.chsh,
            norm_s: r.normalized_s,
            v: r.volume,
            frob: r.frobenius,
            s3lb: r.s3_lower,
            s3est: r.s3_estimate,
            class: r.class.to_string(),
        }
    }
}

pub fn report_json(r: &SteeringReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(&JsonReport::new(None, r))?)
}

pub fn samples_json(records: &[SampleRecord]) -> Result<String> {
    let rows: Vec<JsonReport> = records.iter().map(|r| JsonReport::new(Some(r.index), &r.report)).collect();
    Ok(serde_json::to_string_pretty(&rows)?)
}

fn parse_real(tok: &str, line: usize) -> Result<f64> {
    let x: f64 = tok.trim().parse().map_err(|_| Error::Parse {
        line,
        msg: format!("not a number: {tok:?}"),
    })?;
    if !x.is_finite() {
        return Err(Error::Parse {
            line,
            msg: format!("non-finite value {tok:?}"),
        });
    }
    Ok(x)
}

/// Exactly `n` comma-separated finite reals, e.g. `0.8,0.5,-0.3`.
pub fn parse_reals(s: &str, n: usize) -> Result<Vec<f64>> {
    let out = s.split(',').map(|tok| parse_real(tok, 1)).collect::<Result<Vec<_>>>()?;
    if out.len() != n {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected {n} comma-separated values, found {}", out.len()),
        });
    }
    Ok(out)
}

/// Four 3-vectors, one per line, components separated by whitespace. Blank
/// lines and lines starting with `#` are skipped.
pub fn parse_points(text: &str) -> Result<[Vec3; 4]> {
    let mut points = Vec::with_capacity(4);
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals = line
            .split_whitespace()
            .map(|tok| parse_real(tok, k + 1))
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != 3 {
            return Err(Error::Parse {
                line: k + 1,
                msg: format!("expected 3 components, found {}", vals.len()),
            });
        }
        if points.len() == 4 {
            return Err(Error::Parse {
                line: k + 1,
                msg: "more than four points".into(),
            });
        }
        points.push(Vec3::new(vals[0], vals[1], vals[2]));
    }
    points.try_into().map_err(|p: Vec<Vec3>| Error::Parse {
        line: text.lines().count(),
        msg: format!("expected four points, found {}", p.len()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::report::report;
    use crate::state::BellDiagonalState;

    #[test]
    fn reals() {
        assert_eq!(parse_reals("0.8, 0.5,-0.3", 3).unwrap(), [0.8, 0.5, -0.3]);
        assert!(parse_reals("0.8,0.5", 3).is_err());
        assert!(parse_reals("0.8,0.5,x", 3).is_err());
        assert!(parse_reals("0.8,0.5,inf", 3).is_err());
        assert!(parse_reals("", 1).is_err());
    }

    #[test]
    fn points() {
        let text = "# comment\n1 0 0\n\n0 1 0\n0 0 1\n -1 -1 -1 \n";
        let p = parse_points(text).unwrap();
        assert_eq!(p[3], Vec3::new(-1.0, -1.0, -1.0));
        assert!(parse_points("1 0 0\n0 1 0\n0 0 1\n").is_err());
        assert!(parse_points("1 0\n0 1 0\n0 0 1\n1 1 1\n").is_err());
        assert!(parse_points("1 0 0\n0 1 0\n0 0 1\n1 1 1\n2 2 2\n").is_err());
        assert!(parse_points("1 0 nan\n0 1 0\n0 0 1\n1 1 1\n").is_err());
    }

    #[test]
    fn csv_round_trips_values() {
        let r = report(&BellDiagonalState::from_t(0.8, 0.5, -0.3).unwrap(), false, 0).unwrap();
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, &[SampleRecord { index: 7, report: r }]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "index,t1,t2,t3,p00,p01,p10,p11,C,S,chsh,normS,V,frob,s3lb,s3est,class"
        );
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "7");
        assert_eq!(row[9].parse::<f64>().unwrap(), r.s);
        assert_eq!(row[15], "");
        assert_eq!(row[16], "entangled-unsteerable2-uncertified3");
    }

    #[test]
    fn json_keys() {
        let r = report(&BellDiagonalState::singlet(), false, 0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&report_json(&r).unwrap()).unwrap();
        for key in REPORT_COLUMNS {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["s3est"].is_null());
        assert_eq!(v["class"], "steerable2");
    }
}
