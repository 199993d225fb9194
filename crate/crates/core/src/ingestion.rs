//! Reading snapshots, gains tables and leader lists from CSV/JSON files, and
//! writing gains tables back out.
//!
//! Gains tables have the header `id[,score],g,r` (any column order). A `%`
//! suffix on `r` divides by 100, so `19.10%` and `0.191` read the same.
//! Numbers may carry thousands separators inside quoted fields
//! (`"2,752,518"`) or use scientific notation (`2.49E+12`). A table with
//! `score` and `r` but no `g` derives `g = score * r`.

use std::fmt;
use std::fs;
use std::io::Read;
use std::path::Path;

use serde::de::{Deserializer, MapAccess, Visitor};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{DeltaSystem, GainRecord, Snapshot};
use crate::ranking::MomentumTerm;

/// Parses a real number, accepting thousands separators and exponents.
pub fn parse_real(field: &str) -> std::result::Result<f64, String> {
    let cleaned: String = field.trim().chars().filter(|&c| c != ',' && c != '_').collect();
    if cleaned.is_empty() {
        return Err("empty number".into());
    }
    if cleaned.ends_with('%') {
        return Err(format!("`{}`: percent not allowed here", field.trim()));
    }
    let value: f64 = cleaned
        .parse()
        .map_err(|_| format!("`{}` is not a number", field.trim()))?;
    if !value.is_finite() {
        return Err(format!("`{}` is not finite", field.trim()));
    }
    Ok(value)
}

/// Parses a fraction that may be written as a percentage.
///
/// `x%` is read as the decimal x·10⁻² directly, so the result is the nearest
/// double to x/100 rather than the rounded quotient of two doubles.
pub fn parse_fraction(field: &str) -> std::result::Result<f64, String> {
    let trimmed = field.trim();
    let Some(body) = trimmed.strip_suffix('%') else {
        return parse_real(trimmed);
    };
    let body: String = body.trim().chars().filter(|&c| c != ',' && c != '_').collect();
    let shifted = match body.find(['e', 'E']) {
        Some(pos) => {
            let exponent: i64 = body[pos + 1..]
                .parse()
                .map_err(|_| format!("`{trimmed}` is not a percentage"))?;
            format!("{}e{}", &body[..pos], exponent - 2)
        }
        None => format!("{body}e-2"),
    };
    if body.is_empty() {
        return Err(format!("`{trimmed}` is not a percentage"));
    }
    let value: f64 = shifted
        .parse()
        .map_err(|_| format!("`{trimmed}` is not a percentage"))?;
    if !value.is_finite() {
        return Err(format!("`{trimmed}` is not finite"));
    }
    Ok(value)
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn with_path(err: Error, path: &Path) -> Error {
    match err {
        Error::Parse {
            path: None,
            line,
            column,
            message,
        } => Error::Parse {
            path: Some(path.to_owned()),
            line,
            column,
            message,
        },
        other => other,
    }
}

fn parse_error(line: Option<u64>, column: Option<&str>, message: impl Into<String>) -> Error {
    Error::Parse {
        path: None,
        line,
        column: column.map(str::to_owned),
        message: message.into(),
    }
}

fn csv_error(err: csv::Error) -> Error {
    let line = err.position().map(|p| p.line());
    parse_error(line, None, err.to_string())
}

/// Reads a snapshot from CSV (`id,score`) or JSON (`{timestamp, scores}`).
/// The format is chosen by extension, falling back to sniffing for `{`.
pub fn parse_snapshot(path: &Path) -> Result<Snapshot> {
    let text = read_file(path)?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || text.trim_start().starts_with('{');
    let parsed = if is_json {
        read_snapshot_json(&text)
    } else {
        read_snapshot_csv(text.as_bytes(), &stem(path))
    };
    parsed.map_err(|e| with_path(e, path))
}

pub fn read_snapshot_csv<R: Read>(reader: R, timestamp: &str) -> Result<Snapshot> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(parse_error(None, None, "no entities"));
    }
    let names: Vec<&str> = headers.iter().collect();
    if names != ["id", "score"] {
        return Err(parse_error(
            Some(1),
            None,
            format!("expected header `id,score`, found `{}`", names.join(",")),
        ));
    }
    let mut rows: Vec<(String, f64)> = Vec::new();
    let mut lines = std::collections::HashMap::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line());
        let id = record[0].to_owned();
        if id.is_empty() {
            return Err(parse_error(line, Some("id"), "empty id"));
        }
        let score = parse_real(&record[1]).map_err(|m| parse_error(line, Some("score"), m))?;
        if score < 0.0 {
            return Err(parse_error(line, Some("score"), format!("negative score for `{id}`")));
        }
        if let Some(first) = lines.insert(id.clone(), line) {
            return Err(parse_error(
                line,
                Some("id"),
                format!(
                    "duplicate id `{id}` (first seen on line {})",
                    first.unwrap_or_default()
                ),
            ));
        }
        rows.push((id, score));
    }
    if rows.is_empty() {
        return Err(parse_error(None, None, "no entities"));
    }
    Snapshot::new(timestamp, rows)
}

/// Score entries in file order, duplicates kept so they can be rejected.
struct ScoreEntries(Vec<(String, f64)>);

impl<'de> Deserialize<'de> for ScoreEntries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = ScoreEntries;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping entity ids to scores")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Self::Value, A::Error> {
                let mut entries = Vec::with_capacity(map.size_hint().unwrap_or(0));
                while let Some((id, score)) = map.next_entry::<String, f64>()? {
                    entries.push((id, score));
                }
                Ok(ScoreEntries(entries))
            }
        }

        deserializer.deserialize_map(EntriesVisitor)
    }
}

#[derive(Deserialize)]
struct JsonSnapshot {
    #[serde(default)]
    timestamp: String,
    scores: ScoreEntries,
}

pub fn read_snapshot_json(text: &str) -> Result<Snapshot> {
    let raw: JsonSnapshot = serde_json::from_str(text)
        .map_err(|e| parse_error(Some(e.line() as u64), None, e.to_string()))?;
    if raw.scores.0.is_empty() {
        return Err(parse_error(None, None, "no entities"));
    }
    Snapshot::new(raw.timestamp, raw.scores.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GainsColumn {
    Id,
    Score,
    Gain,
    Relative,
}

/// Reads a gains table; the window label is the file stem.
pub fn parse_gains_table(path: &Path) -> Result<DeltaSystem> {
    let text = read_file(path)?;
    read_gains_table(text.as_bytes(), &stem(path)).map_err(|e| with_path(e, path))
}

pub fn read_gains_table<R: Read>(reader: R, window: &str) -> Result<DeltaSystem> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let mut columns = Vec::with_capacity(headers.len());
    for name in headers.iter() {
        let column = match name {
            "id" => GainsColumn::Id,
            "score" => GainsColumn::Score,
            "g" => GainsColumn::Gain,
            "r" => GainsColumn::Relative,
            other => {
                return Err(parse_error(
                    Some(1),
                    Some(other),
                    "unknown column; expected header `id[,score],g,r`",
                ))
            }
        };
        if columns.contains(&column) {
            return Err(parse_error(Some(1), Some(name), "repeated column"));
        }
        columns.push(column);
    }
    let has = |c| columns.contains(&c);
    if !has(GainsColumn::Id) || !has(GainsColumn::Relative) {
        return Err(parse_error(Some(1), None, "header must contain `id` and `r`"));
    }
    if !has(GainsColumn::Gain) && !has(GainsColumn::Score) {
        return Err(parse_error(Some(1), None, "header must contain `g`, or `score` to derive it"));
    }

    let mut records = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line());
        let mut id = None;
        let mut score = None;
        let mut gain = None;
        let mut relative = None;
        for (field, (&column, name)) in record.iter().zip(columns.iter().zip(headers.iter())) {
            let fail = |m: String| parse_error(line, Some(name), m);
            match column {
                GainsColumn::Id => {
                    if field.is_empty() {
                        return Err(fail("empty id".into()));
                    }
                    id = Some(field.to_owned());
                }
                GainsColumn::Score if field.is_empty() => {}
                GainsColumn::Score => {
                    let s = parse_real(field).map_err(fail)?;
                    if s < 0.0 {
                        return Err(parse_error(line, Some(name), "negative score"));
                    }
                    score = Some(s);
                }
                GainsColumn::Gain => gain = Some(parse_real(field).map_err(fail)?),
                GainsColumn::Relative => relative = Some(parse_fraction(field).map_err(fail)?),
            }
        }
        let (Some(id), Some(relative)) = (id, relative) else {
            return Err(parse_error(line, None, "missing field"));
        };
        let gain = match (gain, score) {
            (Some(g), _) => g,
            (None, Some(s)) => s * relative,
            (None, None) => return Err(parse_error(line, Some("g"), "missing field")),
        };
        records.push(GainRecord::new(id, score, gain, relative));
    }
    DeltaSystem::build(records, window)
}

/// Writes `ds` as a gains table that [`read_gains_table`] reads back exactly.
/// Missing scores are written as empty fields.
pub fn write_gains_table(ds: &DeltaSystem) -> String {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let scored = ds.entities().iter().any(|e| e.score.is_some());
    let header: &[&str] = if scored {
        &["id", "score", "g", "r"]
    } else {
        &["id", "g", "r"]
    };
    // Writing into a Vec cannot fail.
    wtr.write_record(header).expect("in-memory write");
    for e in ds.entities() {
        let mut row = vec![e.id.to_string()];
        if scored {
            row.push(e.score.map(|s| s.to_string()).unwrap_or_default());
        }
        row.push(e.gain.to_string());
        row.push(e.relative_gain.to_string());
        wtr.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

/// Reads a pre-computed leader list with columns `r,w` and an optional `id`.
pub fn parse_leader_terms(path: &Path) -> Result<Vec<MomentumTerm>> {
    let text = read_file(path)?;
    read_leader_terms(text.as_bytes()).map_err(|e| with_path(e, path))
}

pub fn read_leader_terms<R: Read>(reader: R) -> Result<Vec<MomentumTerm>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let (Some(r_col), Some(w_col)) = (find("r"), find("w")) else {
        return Err(parse_error(Some(1), None, "leader list needs columns `r` and `w`"));
    };
    let id_col = find("id");
    if let Some(extra) = headers.iter().find(|h| !matches!(*h, "id" | "r" | "w")) {
        return Err(parse_error(Some(1), Some(extra), "unknown column"));
    }
    let mut terms = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line());
        let r = parse_fraction(&record[r_col]).map_err(|m| parse_error(line, Some("r"), m))?;
        let w = parse_fraction(&record[w_col]).map_err(|m| parse_error(line, Some("w"), m))?;
        let id = id_col.map_or_else(|| format!("m{}", i + 1), |c| record[c].to_owned());
        terms.push(MomentumTerm::new(id, r, w));
    }
    if terms.is_empty() {
        return Err(parse_error(None, None, "no leaders"));
    }
    Ok(terms)
}
