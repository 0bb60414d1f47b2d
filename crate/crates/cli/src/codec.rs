//! Text encodings of command output and their decoders.
//!
//! Energies are written in the shortest form that parses back to the same
//! `f64` (at most 17 significant digits). Half-integer labels are exact
//! strings such as `7/2`; shifts are `0`, `1/4`, `-1/4` or `sqrt(r)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use lmg_core::exact::Shift;
use lmg_core::Half;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("malformed input: {0}")]
    Syntax(String),
    #[error("invalid content: {0}")]
    Invalid(String),
}

/// Shortest round-trip decimal; `-0` is written as `0`. Magnitudes below
/// `1e-5` or from `1e16` up use exponent form (`4.2e-14`).
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.abs() < 1e-5 || x.abs() >= 1e16 {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub(crate) fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

pub(crate) fn finish_csv(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("writing to memory cannot fail");
    String::from_utf8(bytes).expect("csv fields are utf-8")
}

pub const SPECTRUM_CSV_HEADER: [&str; 5] = ["j", "J", "c", "energy", "degeneracy"];
pub const SWEEP_CSV_HEADER: [&str; 6] = ["delta", "j", "J", "c", "index", "energy"];

/// JSON document written by `spectrum --format json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumReport {
    pub params: ReportParams,
    pub entries: Vec<ReportEntry>,
    /// `"epsilon"` or `"absolute"`.
    pub units: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportParams {
    pub n: usize,
    pub delta: f64,
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportEntry {
    pub j: String,
    #[serde(rename = "J")]
    pub big_j: String,
    pub c: String,
    pub energy: f64,
    pub degeneracy: u64,
}

fn parse_half(field: &str, s: &str) -> Result<Half, DecodeError> {
    s.parse().map_err(|e| DecodeError::Invalid(format!("{field} = {s:?}: {e}")))
}

fn parse_shift(s: &str) -> Result<Shift, DecodeError> {
    s.parse().map_err(|e| DecodeError::Invalid(format!("c = {s:?}: {e}")))
}

/// Checks the semantic constraints serde cannot express.
pub fn validate_report(r: &SpectrumReport) -> Result<(), DecodeError> {
    let invalid = |m: String| Err(DecodeError::Invalid(m));
    if r.units != "epsilon" && r.units != "absolute" {
        return invalid(format!("units = {:?}", r.units));
    }
    let p = &r.params;
    if p.n == 0 || p.n > lmg_core::spectra::MAX_ASSEMBLED_PARTICLES {
        return invalid(format!("n = {}", p.n));
    }
    if !(p.delta.is_finite() && p.delta >= 0.0) {
        return invalid(format!("delta = {}", p.delta));
    }
    if !(p.epsilon.is_finite() && p.epsilon > 0.0) {
        return invalid(format!("epsilon = {}", p.epsilon));
    }
    if r.units == "epsilon" && p.epsilon != 1.0 {
        return invalid("epsilon-relative units need epsilon = 1".into());
    }
    let top = Half::from_twice(p.n as i64);
    let mut total: u64 = 0;
    let mut last = f64::NEG_INFINITY;
    for e in &r.entries {
        let j = parse_half("j", &e.j)?;
        let big_j = parse_half("J", &e.big_j)?;
        parse_shift(&e.c)?;
        if j.twice() < 0 || j > top || !j.same_parity(top) {
            return invalid(format!("j = {j} does not occur for N = {}", p.n));
        }
        if big_j.twice() < 0 || big_j > j {
            return invalid(format!("J = {big_j} outside 0..=j"));
        }
        if !e.energy.is_finite() {
            return invalid(format!("energy = {}", e.energy));
        }
        if e.energy < last {
            return invalid("entries are not sorted by energy".into());
        }
        last = e.energy;
        if e.degeneracy == 0 {
            return invalid("zero degeneracy".into());
        }
        total = total.checked_add(e.degeneracy).ok_or_else(|| DecodeError::Invalid("degeneracy overflow".into()))?;
    }
    if total != 1u64 << p.n {
        return invalid(format!("degeneracies sum to {total}, not 2^{}", p.n));
    }
    Ok(())
}

/// Parses and validates a spectrum report.
pub fn decode_spectrum_json(text: &str) -> Result<SpectrumReport, DecodeError> {
    let r: SpectrumReport = serde_json::from_str(text).map_err(|e| DecodeError::Syntax(e.to_string()))?;
    validate_report(&r)?;
    Ok(r)
}

/// One row of sweep CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub delta: f64,
    pub j: Half,
    pub big_j: Half,
    pub c: Shift,
    pub index: usize,
    pub energy: f64,
}

fn parse_f64(field: &str, s: &str) -> Result<f64, DecodeError> {
    let v: f64 = s.parse().map_err(|_| DecodeError::Invalid(format!("{field} = {s:?} is not a number")))?;
    if !v.is_finite() {
        return Err(DecodeError::Invalid(format!("{field} = {s:?} is not finite")));
    }
    Ok(v)
}

/// Parses sweep CSV, requiring the exact header.
pub fn decode_sweep_csv(text: &str) -> Result<Vec<SweepRecord>, DecodeError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| DecodeError::Syntax(e.to_string()))?.clone();
    if header.iter().ne(SWEEP_CSV_HEADER.iter().copied()) {
        return Err(DecodeError::Syntax(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| DecodeError::Syntax(e.to_string()))?;
        let delta = parse_f64("delta", &rec[0])?;
        if delta < 0.0 {
            return Err(DecodeError::Invalid(format!("delta = {delta} is negative")));
        }
        let j = parse_half("j", &rec[1])?;
        let big_j = parse_half("J", &rec[2])?;
        if j.twice() < 0 || big_j.twice() < 0 || big_j > j {
            return Err(DecodeError::Invalid(format!("labels j = {j}, J = {big_j}")));
        }
        let c = parse_shift(&rec[3])?;
        let index: usize = rec[4].parse().map_err(|_| DecodeError::Invalid(format!("index = {:?}", &rec[4])))?;
        let energy = parse_f64("energy", &rec[5])?;
        out.push(SweepRecord { delta, j, big_j, c, index, energy });
    }
    Ok(out)
}
