//! Knot records, dataset ingestion (CSV and JSON) and coefficient vectorization.
//!
//! CSV layout, one header row, UTF-8:
//!
//! ```text
//! name,crossings,alternating,jones,vol,longitude_length,meridian_length,mu_x,mu_y,cusp_volume,chern_simons,khovanov
//! 4_1,4,true,-2;1 -1 1 -1 1,2.0298832128,...
//! ```
//!
//! `jones` is `"min_exp;c0 c1 ... ck"`, `khovanov` is a semicolon separated list
//! of `"i,j,c"` triples. Empty numeric fields mean the invariant is unknown.
//! Rows may stop early; trailing columns are then treated as empty.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{LaurentPoly1, LaurentPoly2};

pub const CSV_COLUMNS: [&str; 12] = [
    "name",
    "crossings",
    "alternating",
    "jones",
    "vol",
    "longitude_length",
    "meridian_length",
    "mu_x",
    "mu_y",
    "cusp_volume",
    "chern_simons",
    "khovanov",
];

const REQUIRED_COLUMNS: [&str; 4] = ["name", "crossings", "alternating", "jones"];

/// Hyperbolic invariants of one knot. Every field may be unknown.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicInvariants {
    pub vol: Option<f64>,
    pub longitude_length: Option<f64>,
    pub meridian_length: Option<f64>,
    pub mu_x: Option<f64>,
    pub mu_y: Option<f64>,
    pub cusp_volume: Option<f64>,
    /// Representative in `[0, 0.5)`.
    pub chern_simons: Option<f64>,
}

impl HyperbolicInvariants {
    /// Checks signs and finiteness, and folds Chern-Simons into `[0, 0.5)`.
    fn normalized(mut self, row: usize) -> Result<Self> {
        let positive = [
            ("vol", self.vol),
            ("longitude_length", self.longitude_length),
            ("meridian_length", self.meridian_length),
            ("cusp_volume", self.cusp_volume),
        ];
        for (field, v) in positive {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::schema(row, format!("{field} must be positive, got {v}")));
                }
            }
        }
        for (field, v) in [("mu_x", self.mu_x), ("mu_y", self.mu_y), ("chern_simons", self.chern_simons)] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(Error::schema(row, format!("{field} is not finite")));
                }
            }
        }
        self.chern_simons = self.chern_simons.map(normalize_chern_simons);
        Ok(self)
    }
}

/// Maps a Chern-Simons value to its representative modulo 1/2 in `[0, 0.5)`.
pub fn normalize_chern_simons(v: f64) -> f64 {
    let r = v.rem_euclid(0.5);
    // rem_euclid can round up to the modulus for tiny negative inputs
    if r >= 0.5 {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnotRecord {
    pub name: String,
    pub crossing_number: u32,
    pub alternating: bool,
    pub jones: LaurentPoly1,
    pub khovanov: Option<LaurentPoly2>,
    pub hyperbolic: HyperbolicInvariants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KnotClass {
    All,
    #[serde(rename = "alt")]
    Alternating,
    #[serde(rename = "nonalt")]
    NonAlternating,
}

impl KnotClass {
    pub const EVERY: [KnotClass; 3] = [KnotClass::All, KnotClass::Alternating, KnotClass::NonAlternating];

    pub fn contains(self, rec: &KnotRecord) -> bool {
        match self {
            KnotClass::All => true,
            KnotClass::Alternating => rec.alternating,
            KnotClass::NonAlternating => !rec.alternating,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            KnotClass::All => "all",
            KnotClass::Alternating => "alt",
            KnotClass::NonAlternating => "nonalt",
        }
    }
}

impl fmt::Display for KnotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for KnotClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(KnotClass::All),
            "alt" | "alternating" => Ok(KnotClass::Alternating),
            "nonalt" | "non-alternating" | "nonalternating" => Ok(KnotClass::NonAlternating),
            other => Err(Error::Config(format!("unknown knot class {other:?}"))),
        }
    }
}

/// Ordered collection of knot records with pairwise distinct names.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    records: Vec<KnotRecord>,
    provenance: String,
}

impl Dataset {
    pub fn new(records: Vec<KnotRecord>, provenance: impl Into<String>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(records.len());
        for (idx, rec) in records.iter().enumerate() {
            if !seen.insert(rec.name.as_str()) {
                return Err(Error::DuplicateName {
                    row: idx + 1,
                    name: rec.name.clone(),
                });
            }
        }
        Ok(Dataset {
            records,
            provenance: provenance.into(),
        })
    }

    pub fn records(&self) -> &[KnotRecord] {
        &self.records
    }

    pub fn iter(&self) -> std::slice::Iter<'_, KnotRecord> {
        self.records.iter()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn get(&self, name: &str) -> Option<&KnotRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// Keeps the records for which `keep` returns true, preserving order.
    pub fn retain_cloned(&self, mut keep: impl FnMut(&KnotRecord) -> bool) -> Dataset {
        Dataset {
            records: self.records.iter().filter(|r| keep(r)).cloned().collect(),
            provenance: self.provenance.clone(),
        }
    }

    /// Subset by position; indices must be distinct.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            records: indices.iter().map(|&i| self.records[i].clone()).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn class_counts(&self) -> ClassCounts {
        let alternating = self.records.iter().filter(|r| r.alternating).count();
        ClassCounts {
            all: self.records.len(),
            alternating,
            non_alternating: self.records.len() - alternating,
        }
    }

    pub fn max_crossings(&self) -> Option<u32> {
        self.records.iter().map(|r| r.crossing_number).max()
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a KnotRecord;
    type IntoIter = std::slice::Iter<'a, KnotRecord>;
    fn into_iter(self) -> Self::IntoIter {
        self.records.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub all: usize,
    pub alternating: usize,
    pub non_alternating: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Csv,
    Json,
}

impl DataFormat {
    /// Picks the format from the file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> DataFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => DataFormat::Json,
            _ => DataFormat::Csv,
        }
    }
}

pub fn parse_dataset(path: impl AsRef<Path>, format: DataFormat) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let provenance = path.display().to_string();
    match format {
        DataFormat::Csv => parse_csv_str(&text, provenance),
        DataFormat::Json => parse_json_str(&text, provenance),
    }
}

/// Reads a dataset, choosing the format from the extension.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    parse_dataset(path, DataFormat::from_path(path))
}

pub fn parse_csv_str(text: &str, provenance: impl Into<String>) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| Error::schema(1, format!("unreadable header: {e}")))?
        .clone();
    if headers.iter().all(str::is_empty) {
        return Err(Error::schema(1, "missing header row"));
    }
    let index_of = |name: &str| headers.iter().position(|h| h == name);
    for col in REQUIRED_COLUMNS {
        if index_of(col).is_none() {
            return Err(Error::schema(1, format!("missing required column {col:?}")));
        }
    }
    let columns: Vec<Option<usize>> = CSV_COLUMNS.iter().map(|c| index_of(c)).collect();

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for result in reader.records() {
        let raw = result.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line() as usize);
            Error::schema(row, e.to_string())
        })?;
        let row = raw.position().map_or(records.len() + 2, |p| p.line() as usize);
        let field = |col: usize| -> &str {
            columns[col].and_then(|idx| raw.get(idx)).unwrap_or("")
        };
        let rec = parse_csv_row(row, &field)?;
        if !seen.insert(rec.name.clone()) {
            return Err(Error::DuplicateName { row, name: rec.name });
        }
        records.push(rec);
    }
    Dataset::new(records, provenance)
}

fn parse_csv_row<'a>(row: usize, field: &dyn Fn(usize) -> &'a str) -> Result<KnotRecord> {
    let name = field(0);
    if name.is_empty() {
        return Err(Error::schema(row, "empty name"));
    }
    let crossing_number: u32 = field(1)
        .parse()
        .ok()
        .filter(|&c| c > 0)
        .ok_or_else(|| Error::schema(row, format!("crossings must be a positive integer, got {:?}", field(1))))?;
    let alternating = match field(2).to_ascii_lowercase().as_str() {
        "true" | "y" | "yes" => true,
        "false" | "n" | "no" => false,
        other => return Err(Error::schema(row, format!("alternating must be true/false or Y/N, got {other:?}"))),
    };
    let jones = LaurentPoly1::parse(field(3)).map_err(|e| Error::schema(row, format!("jones: {e}")))?;

    let num = |col: usize| -> Result<Option<f64>> {
        let s = field(col);
        if s.is_empty() {
            return Ok(None);
        }
        s.parse::<f64>()
            .map(Some)
            .map_err(|_| Error::schema(row, format!("{}: not a number: {s:?}", CSV_COLUMNS[col])))
    };
    let hyperbolic = HyperbolicInvariants {
        vol: num(4)?,
        longitude_length: num(5)?,
        meridian_length: num(6)?,
        mu_x: num(7)?,
        mu_y: num(8)?,
        cusp_volume: num(9)?,
        chern_simons: num(10)?,
    }
    .normalized(row)?;

    let kh_text = field(11);
    let khovanov = if kh_text.is_empty() {
        None
    } else {
        Some(LaurentPoly2::parse(kh_text).map_err(|e| Error::schema(row, format!("khovanov: {e}")))?)
    };

    Ok(KnotRecord {
        name: name.to_string(),
        crossing_number,
        alternating,
        jones,
        khovanov,
        hyperbolic,
    })
}

#[derive(Serialize, Deserialize)]
struct JsonRecord {
    name: String,
    crossings: u32,
    alternating: bool,
    jones: LaurentPoly1,
    #[serde(default)]
    vol: Option<f64>,
    #[serde(default)]
    longitude_length: Option<f64>,
    #[serde(default)]
    meridian_length: Option<f64>,
    #[serde(default)]
    mu_x: Option<f64>,
    #[serde(default)]
    mu_y: Option<f64>,
    #[serde(default)]
    cusp_volume: Option<f64>,
    #[serde(default)]
    chern_simons: Option<f64>,
    #[serde(default)]
    khovanov: Option<LaurentPoly2>,
}

pub fn parse_json_str(text: &str, provenance: impl Into<String>) -> Result<Dataset> {
    let rows: Vec<serde_json::Value> =
        serde_json::from_str(text).map_err(|e| Error::schema(0, format!("expected a JSON array of records: {e}")))?;
    let mut records = Vec::with_capacity(rows.len());
    let mut seen = HashSet::new();
    for (idx, value) in rows.into_iter().enumerate() {
        let row = idx + 1;
        let raw: JsonRecord = serde_json::from_value(value).map_err(|e| Error::schema(row, e.to_string()))?;
        if raw.crossings == 0 {
            return Err(Error::schema(row, "crossings must be positive"));
        }
        if !seen.insert(raw.name.clone()) {
            return Err(Error::DuplicateName { row, name: raw.name });
        }
        let hyperbolic = HyperbolicInvariants {
            vol: raw.vol,
            longitude_length: raw.longitude_length,
            meridian_length: raw.meridian_length,
            mu_x: raw.mu_x,
            mu_y: raw.mu_y,
            cusp_volume: raw.cusp_volume,
            chern_simons: raw.chern_simons,
        }
        .normalized(row)?;
        records.push(KnotRecord {
            name: raw.name,
            crossing_number: raw.crossings,
            alternating: raw.alternating,
            jones: raw.jones,
            khovanov: raw.khovanov,
            hyperbolic,
        });
    }
    Dataset::new(records, provenance)
}

fn opt_num(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl Dataset {
    pub fn to_csv_string(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(CSV_COLUMNS).expect("in-memory write");
        for r in &self.records {
            let h = &r.hyperbolic;
            w.write_record([
                r.name.clone(),
                r.crossing_number.to_string(),
                r.alternating.to_string(),
                r.jones.to_string(),
                opt_num(h.vol),
                opt_num(h.longitude_length),
                opt_num(h.meridian_length),
                opt_num(h.mu_x),
                opt_num(h.mu_y),
                opt_num(h.cusp_volume),
                opt_num(h.chern_simons),
                r.khovanov.as_ref().map(|k| k.to_string()).unwrap_or_default(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    pub fn to_json_string(&self) -> String {
        let rows: Vec<JsonRecord> = self
            .records
            .iter()
            .map(|r| JsonRecord {
                name: r.name.clone(),
                crossings: r.crossing_number,
                alternating: r.alternating,
                jones: r.jones.clone(),
                vol: r.hyperbolic.vol,
                longitude_length: r.hyperbolic.longitude_length,
                meridian_length: r.hyperbolic.meridian_length,
                mu_x: r.hyperbolic.mu_x,
                mu_y: r.hyperbolic.mu_y,
                cusp_volume: r.hyperbolic.cusp_volume,
                chern_simons: r.hyperbolic.chern_simons,
                khovanov: r.khovanov.clone(),
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("records serialize")
    }

    pub fn write(&self, path: impl AsRef<Path>, format: DataFormat) -> Result<()> {
        let path = path.as_ref();
        let body = match format {
            DataFormat::Csv => self.to_csv_string(),
            DataFormat::Json => self.to_json_string(),
        };
        std::fs::write(path, body).map_err(|e| Error::io(path, e))
    }
}

pub fn filter_class(ds: &Dataset, class: KnotClass) -> Dataset {
    ds.retain_cloned(|r| class.contains(r))
}

/// Exponent range shared by all rows of a vectorized Jones matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JonesWindow {
    pub min_exp: i64,
    pub max_exp: i64,
}

impl JonesWindow {
    pub fn width(&self) -> usize {
        (self.max_exp - self.min_exp + 1) as usize
    }

    pub fn covers(&self, p: &LaurentPoly1) -> bool {
        p.min_exp() >= self.min_exp && p.max_exp() <= self.max_exp
    }

    /// Zero-padded coefficient row, or `None` if `p` sticks out of the window.
    pub fn encode(&self, p: &LaurentPoly1) -> Option<Vec<f64>> {
        if !self.covers(p) {
            return None;
        }
        let mut row = vec![0.0; self.width()];
        let offset = (p.min_exp() - self.min_exp) as usize;
        for (slot, &c) in row[offset..].iter_mut().zip(p.coeffs()) {
            *slot = c as f64;
        }
        Some(row)
    }

    /// Inverse of [`encode`](Self::encode) for rows holding integral values.
    pub fn decode(&self, row: &[f64]) -> Result<LaurentPoly1> {
        if row.len() != self.width() {
            return Err(Error::DimensionMismatch {
                expected: self.width(),
                got: row.len(),
            });
        }
        LaurentPoly1::new(self.min_exp, row.iter().map(|&v| v.round() as i64).collect())
    }
}

pub fn vectorize_jones(ds: &Dataset) -> Result<(Matrix, JonesWindow)> {
    let window = ds
        .iter()
        .map(|r| (r.jones.min_exp(), r.jones.max_exp()))
        .reduce(|(a, b), (c, d)| (a.min(c), b.max(d)))
        .map(|(min_exp, max_exp)| JonesWindow { min_exp, max_exp })
        .ok_or(Error::EmptyDataset)?;
    let matrix = vectorize_jones_in(ds, &window)?;
    Ok((matrix, window))
}

/// Vectorizes against a fixed window, failing on the first record that does not fit.
pub fn vectorize_jones_in(ds: &Dataset, window: &JonesWindow) -> Result<Matrix> {
    let mut m = Matrix::zeros(ds.len(), window.width());
    for (r, rec) in ds.iter().enumerate() {
        let row = window.encode(&rec.jones).ok_or_else(|| {
            Error::Config(format!(
                "Jones polynomial of {} spans [{}, {}], outside window [{}, {}]",
                rec.name,
                rec.jones.min_exp(),
                rec.jones.max_exp(),
                window.min_exp,
                window.max_exp
            ))
        })?;
        m.row_mut(r).copy_from_slice(&row);
    }
    Ok(m)
}

/// Bounding box of Khovanov exponents; rows are flattened with `i` outer and `j` inner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KhovanovGrid {
    pub i_min: i64,
    pub i_max: i64,
    pub j_min: i64,
    pub j_max: i64,
}

impl KhovanovGrid {
    pub fn width(&self) -> usize {
        ((self.i_max - self.i_min + 1) * (self.j_max - self.j_min + 1)) as usize
    }

    fn index(&self, i: i64, j: i64) -> Option<usize> {
        if i < self.i_min || i > self.i_max || j < self.j_min || j > self.j_max {
            return None;
        }
        let nj = self.j_max - self.j_min + 1;
        Some(((i - self.i_min) * nj + (j - self.j_min)) as usize)
    }

    pub fn encode(&self, p: &LaurentPoly2) -> Option<Vec<f64>> {
        let mut row = vec![0.0; self.width()];
        for t in p.terms() {
            row[self.index(t.i, t.j)?] = t.c as f64;
        }
        Some(row)
    }
}

pub fn vectorize_khovanov(ds: &Dataset) -> Result<(Matrix, KhovanovGrid)> {
    if ds.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut bbox: Option<(i64, i64, i64, i64)> = None;
    for rec in ds {
        let kh = rec.khovanov.as_ref().ok_or_else(|| Error::MissingKhovanov {
            name: rec.name.clone(),
        })?;
        if let Some(b) = kh.bounding_box() {
            bbox = Some(match bbox {
                None => b,
                Some(a) => (a.0.min(b.0), a.1.max(b.1), a.2.min(b.2), a.3.max(b.3)),
            });
        }
    }
    let (i_min, i_max, j_min, j_max) = bbox.ok_or(Error::EmptyDataset)?;
    let grid = KhovanovGrid {
        i_min,
        i_max,
        j_min,
        j_max,
    };
    let mut m = Matrix::zeros(ds.len(), grid.width());
    for (r, rec) in ds.iter().enumerate() {
        let kh = rec.khovanov.as_ref().expect("checked above");
        let row = grid.encode(kh).expect("grid is the bounding box");
        m.row_mut(r).copy_from_slice(&row);
    }
    Ok((m, grid))
}

/// Checks that all Khovanov terms sit on one diagonal `j - 2i = const` and that
/// the diagonal reproduces the Jones coefficients.
///
/// The diagonal offset is read from the data. The comparison accepts the
/// coefficient sequence with or without the `(-1)^i` sign, in either direction
/// (mirror convention), and up to a global sign.
pub fn check_khovanov_alternating(rec: &KnotRecord) -> Result<bool> {
    let kh = rec.khovanov.as_ref().ok_or_else(|| Error::MissingKhovanov {
        name: rec.name.clone(),
    })?;
    let Some((i_min, i_max, _, _)) = kh.bounding_box() else {
        return Ok(false);
    };
    let offsets: BTreeSet<i64> = kh.terms().map(|t| t.j - 2 * t.i).collect();
    if offsets.len() != 1 {
        return Ok(false);
    }
    let mut plain = vec![0i64; (i_max - i_min + 1) as usize];
    for t in kh.terms() {
        plain[(t.i - i_min) as usize] += t.c;
    }
    let signed: Vec<i64> = plain
        .iter()
        .enumerate()
        .map(|(k, &c)| if (i_min + k as i64).rem_euclid(2) == 0 { c } else { -c })
        .collect();

    let target = rec.jones.coeffs();
    let negated: Vec<i64> = target.iter().map(|c| -c).collect();
    let matches = |seq: &[i64]| -> bool {
        let rev: Vec<i64> = seq.iter().rev().copied().collect();
        [seq, rev.as_slice()]
            .iter()
            .any(|s| *s == target || *s == negated.as_slice())
    };
    Ok(matches(&plain) || matches(&signed))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str =
        "name,crossings,alternating,jones,vol,longitude_length,meridian_length,mu_x,mu_y,cusp_volume,chern_simons,khovanov\n";

    fn rec(name: &str, alternating: bool, jones: (i64, Vec<i64>)) -> KnotRecord {
        KnotRecord {
            name: name.into(),
            crossing_number: 5,
            alternating,
            jones: LaurentPoly1::new(jones.0, jones.1).unwrap(),
            khovanov: None,
            hyperbolic: HyperbolicInvariants::default(),
        }
    }

    #[test]
    fn parses_short_figure_eight_row() {
        // figure-eight: V = t^-2 - t^-1 + 1 - t + t^2, vol 2.0298832128 (KnotInfo)
        let text = format!("{HEADER}4_1,4,true,-2;1 -1 1 -1 1,2.0298832,\n");
        let ds = parse_csv_str(&text, "inline").unwrap();
        assert_eq!(ds.len(), 1);
        let r = &ds.records()[0];
        assert_eq!(r.name, "4_1");
        assert_eq!(r.crossing_number, 4);
        assert!(r.alternating);
        assert_eq!(r.jones.min_exp(), -2);
        assert_eq!(r.jones.coeffs(), &[1, -1, 1, -1, 1]);
        assert_eq!(r.hyperbolic.vol, Some(2.0298832));
        assert_eq!(r.hyperbolic.cusp_volume, None);
        assert!(r.khovanov.is_none());
    }

    #[test]
    fn header_only_is_empty_dataset() {
        let ds = parse_csv_str(HEADER, "inline").unwrap();
        assert!(ds.is_empty());
    }

    #[test]
    fn duplicate_name_names_row() {
        let text = format!("{HEADER}4_1,4,true,-2;1 -1 1 -1 1,,\n4_1,4,true,-2;1 -1 1 -1 1,,\n");
        match parse_csv_str(&text, "inline") {
            Err(Error::DuplicateName { row, name }) => {
                assert_eq!(row, 3);
                assert_eq!(name, "4_1");
            }
            other => panic!("expected duplicate-name error, got {other:?}"),
        }
    }

    #[test]
    fn schema_errors_carry_row() {
        let missing = "name,crossings,alternating\n4_1,4,true\n";
        assert!(matches!(parse_csv_str(missing, "x"), Err(Error::Schema { row: 1, .. })));

        let bad_coeff = format!("{HEADER}4_1,4,true,-2;1 -1 x,,\n");
        assert!(matches!(parse_csv_str(&bad_coeff, "x"), Err(Error::Schema { row: 2, .. })));

        let bad_bool = format!("{HEADER}5_2,5,true,1;1 -1 2 -1 1 -1,2.8,\n4_1,4,maybe,-2;1 -1 1 -1 1,,\n");
        assert!(matches!(parse_csv_str(&bad_bool, "x"), Err(Error::Schema { row: 3, .. })));

        let neg_vol = format!("{HEADER}4_1,4,true,-2;1 -1 1 -1 1,-2.0,\n");
        assert!(matches!(parse_csv_str(&neg_vol, "x"), Err(Error::Schema { row: 2, .. })));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = parse_dataset("/nonexistent/knots.csv", DataFormat::Csv).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn chern_simons_folded() {
        let text = format!("{HEADER}9_24,9,true,-4;1 -3 5 -7 8 -7 7 -4 2 -1,10.8,,,,,,-0.121749639,\n");
        let ds = parse_csv_str(&text, "x").unwrap();
        let cs = ds.records()[0].hyperbolic.chern_simons.unwrap();
        assert!((cs - 0.378250361).abs() < 1e-12);
        assert_eq!(normalize_chern_simons(0.25), 0.25);
        assert_eq!(normalize_chern_simons(0.5), 0.0);
        assert!(normalize_chern_simons(-1e-18) < 0.5);
    }

    #[test]
    fn json_reader_matches_csv() {
        let text = format!("{HEADER}4_1,4,true,-2;1 -1 1 -1 1,2.0298832128,,,,,,,\"-2,-4,1;-1,-2,1;0,0,1;1,2,1;2,4,1\"\n");
        let csv_ds = parse_csv_str(&text, "p").unwrap();
        let json_ds = parse_json_str(&csv_ds.to_json_string(), "p").unwrap();
        assert_eq!(csv_ds, json_ds);
        let dup = r#"[{"name":"a","crossings":3,"alternating":true,"jones":{"min_exp":0,"coeffs":[1]}},
                     {"name":"a","crossings":3,"alternating":true,"jones":{"min_exp":0,"coeffs":[1]}}]"#;
        assert!(matches!(parse_json_str(dup, "p"), Err(Error::DuplicateName { row: 2, .. })));
    }

    #[test]
    fn class_filter() {
        let ds = Dataset::new(
            vec![
                rec("a", true, (0, vec![1])),
                rec("b", false, (0, vec![1])),
                rec("c", true, (0, vec![1])),
                rec("d", false, (0, vec![1])),
                rec("e", true, (0, vec![1])),
            ],
            "t",
        )
        .unwrap();
        let alt = filter_class(&ds, KnotClass::Alternating);
        assert_eq!(alt.len(), 3);
        assert_eq!(
            alt.iter().map(|r| r.name.as_str()).collect::<Vec<_>>(),
            vec!["a", "c", "e"]
        );
        assert_eq!(filter_class(&ds, KnotClass::All), ds);
        assert!(filter_class(&alt, KnotClass::NonAlternating).is_empty());
    }

    #[test]
    fn jones_window_padding() {
        let ds = Dataset::new(
            vec![rec("a", true, (-2, vec![1, -1, 1, -1, 1])), rec("b", true, (0, vec![2, 0, 0, 3]))],
            "t",
        )
        .unwrap();
        let (m, w) = vectorize_jones(&ds).unwrap();
        assert_eq!(w, JonesWindow { min_exp: -2, max_exp: 3 });
        assert_eq!(m.cols(), 6);
        assert_eq!(m.row(0), &[1.0, -1.0, 1.0, -1.0, 1.0, 0.0]);
        assert_eq!(m.row(1), &[0.0, 0.0, 2.0, 0.0, 0.0, 3.0]);
        assert_eq!(w.decode(m.row(1)).unwrap(), ds.records()[1].jones);
    }

    #[test]
    fn jones_single_record_unpadded() {
        let ds = Dataset::new(vec![rec("a", true, (1, vec![1, 2, 3]))], "t").unwrap();
        let (m, _) = vectorize_jones(&ds).unwrap();
        assert_eq!(m.row(0), &[1.0, 2.0, 3.0]);
        let empty = Dataset::new(vec![], "t").unwrap();
        assert!(matches!(vectorize_jones(&empty), Err(Error::EmptyDataset)));
    }

    #[test]
    fn khovanov_flattening() {
        let mut a = rec("a", true, (0, vec![1]));
        a.khovanov = Some(LaurentPoly2::parse("0,0,1").unwrap());
        let mut b = rec("b", true, (0, vec![1]));
        b.khovanov = Some(LaurentPoly2::parse("1,2,-3").unwrap());
        let ds = Dataset::new(vec![a.clone(), b], "t").unwrap();
        let (m, g) = vectorize_khovanov(&ds).unwrap();
        assert_eq!(g, KhovanovGrid { i_min: 0, i_max: 1, j_min: 0, j_max: 2 });
        assert_eq!(m.cols(), 6);
        assert_eq!(m.row(0), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(m.row(1), &[0.0, 0.0, 0.0, 0.0, 0.0, -3.0]);

        let single = Dataset::new(vec![a], "t").unwrap();
        let (m, _) = vectorize_khovanov(&single).unwrap();
        assert_eq!(m.row(0), &[1.0]);

        let missing = Dataset::new(vec![rec("z", true, (0, vec![1]))], "t").unwrap();
        assert!(matches!(vectorize_khovanov(&missing), Err(Error::MissingKhovanov { .. })));
    }

    #[test]
    fn khovanov_diagonal_check() {
        let mut r = rec("4_1", true, (-2, vec![1, -1, 1, -1, 1]));
        assert!(check_khovanov_alternating(&r).is_err());

        // reduced Khovanov polynomial of the figure-eight knot
        r.khovanov = Some(LaurentPoly2::parse("-2,-4,1;-1,-2,1;0,0,1;1,2,1;2,4,1").unwrap());
        assert!(check_khovanov_alternating(&r).unwrap());

        let mut off = r.clone();
        off.khovanov = Some(LaurentPoly2::parse("-2,-4,1;-1,-2,1;0,0,1;1,2,1;2,4,1;0,2,1").unwrap());
        assert!(!check_khovanov_alternating(&off).unwrap());

        let mut empty = r.clone();
        empty.khovanov = Some(LaurentPoly2::default());
        assert!(!check_khovanov_alternating(&empty).unwrap());

        // shifted diagonal (offset 3) with mirrored coefficient order
        let mut shifted = rec("x", true, (0, vec![1, -2, 3]));
        shifted.khovanov = Some(LaurentPoly2::parse("0,3,3;1,5,2;2,7,1").unwrap());
        assert!(check_khovanov_alternating(&shifted).unwrap());
    }
}
