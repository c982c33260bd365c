//! Flat report records and their JSON, CSV and text renderings.
//!
//! Real numbers are carried as decimal strings so nothing is lost at the
//! boundary. Field order is the struct order and never changes between runs.

use std::fmt::Write as _;

use almost_identities::gallery::GalleryEntry;
use almost_identities::mellin::{DualCheck, LemmaCheck, MellinCheck};
use almost_identities::{BigReal, IdentityReport};
use serde::{Deserialize, Serialize};

/// Significant digits for error estimates, bounds and thresholds.
const BOUND_DIGITS: usize = 6;

fn full(x: &BigReal, digits: u32) -> String {
    x.to_sci_string(digits as usize)
}

fn short(x: &BigReal) -> String {
    x.to_sci_string(BOUND_DIGITS)
}

/// One row of a report.
pub trait Record: Serialize {
    const COLUMNS: &'static [&'static str];

    /// `None` when the row is descriptive rather than a verification.
    fn pass(&self) -> Option<bool>;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub n: u32,
    pub base: u64,
    pub digits: u32,
    pub u: String,
    pub target_rational: String,
    pub target_has_pi: bool,
    pub delta: String,
    pub r_predicted: String,
    pub residual: String,
    pub tail_bounds: String,
    pub pass: bool,
}

impl From<&IdentityReport> for IdentityRecord {
    fn from(r: &IdentityReport) -> Self {
        IdentityRecord {
            n: r.n,
            base: r.base_m,
            digits: r.digits,
            u: full(&r.u.value, r.digits),
            target_rational: r.target.q.to_string(),
            target_has_pi: r.target.has_pi,
            delta: full(&r.delta, r.digits),
            r_predicted: full(&r.r_predicted.value, r.digits),
            residual: short(&r.residual),
            tail_bounds: short(&r.combined_tail_bound()),
            pass: r.passed(),
        }
    }
}

impl Record for IdentityRecord {
    const COLUMNS: &'static [&'static str] = &[
        "n",
        "base",
        "digits",
        "u",
        "target_rational",
        "target_has_pi",
        "delta",
        "r_predicted",
        "residual",
        "tail_bounds",
        "pass",
    ];

    fn pass(&self) -> Option<bool> {
        Some(self.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MellinRecord {
    pub function: String,
    pub s: String,
    pub digits: u32,
    pub numeric: String,
    pub closed: String,
    pub abs_err: String,
    pub threshold: String,
    pub pass: bool,
}

impl MellinRecord {
    pub fn new(c: &MellinCheck, digits: u32) -> Self {
        MellinRecord {
            function: c.function.label(),
            s: full(&c.s, digits),
            digits,
            numeric: full(&c.numeric, digits),
            closed: full(&c.closed, digits),
            abs_err: short(&c.abs_err),
            threshold: short(&c.threshold),
            pass: c.passed(),
        }
    }
}

impl Record for MellinRecord {
    const COLUMNS: &'static [&'static str] = &[
        "function",
        "s",
        "digits",
        "numeric",
        "closed",
        "abs_err",
        "threshold",
        "pass",
    ];

    fn pass(&self) -> Option<bool> {
        Some(self.pass)
    }
}

/// Check of the dyadic factor `g*(s)/(2^s − 1)` against quadrature of the summed kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarmonicRecord {
    pub function: String,
    pub s: String,
    pub digits: u32,
    pub closed: String,
    pub abs_err: String,
    pub threshold: String,
    pub pass: bool,
}

impl Record for HarmonicRecord {
    const COLUMNS: &'static [&'static str] = &[
        "function",
        "s",
        "digits",
        "closed",
        "abs_err",
        "threshold",
        "pass",
    ];

    fn pass(&self) -> Option<bool> {
        Some(self.pass)
    }
}

impl HarmonicRecord {
    pub fn new(
        function: String,
        s: &BigReal,
        closed: &BigReal,
        abs_err: &BigReal,
        threshold: &BigReal,
        digits: u32,
    ) -> Self {
        HarmonicRecord {
            function,
            s: full(s, digits),
            digits,
            closed: full(closed, digits),
            abs_err: short(abs_err),
            threshold: short(threshold),
            pass: abs_err < threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualRecord {
    pub n: u32,
    pub x: String,
    pub digits: u32,
    pub direct: String,
    pub expansion: String,
    pub abs_err: String,
    pub threshold: String,
    pub pass: bool,
}

impl DualRecord {
    pub fn new(c: &DualCheck, digits: u32) -> Self {
        DualRecord {
            n: c.n,
            x: full(&c.x, digits),
            digits,
            direct: full(&c.direct, digits),
            expansion: full(&c.expansion, digits),
            abs_err: short(&c.abs_err),
            threshold: short(&c.threshold),
            pass: c.passed(),
        }
    }
}

impl Record for DualRecord {
    const COLUMNS: &'static [&'static str] = &[
        "n",
        "x",
        "digits",
        "direct",
        "expansion",
        "abs_err",
        "threshold",
        "pass",
    ];

    fn pass(&self) -> Option<bool> {
        Some(self.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaRecord {
    pub n: u32,
    pub k: i64,
    pub u: String,
    pub step: String,
    pub digits: u32,
    pub residual: String,
    pub bound: String,
    pub pass: bool,
}

impl LemmaRecord {
    pub fn new(c: &LemmaCheck, digits: u32) -> Self {
        LemmaRecord {
            n: c.n,
            k: c.k,
            u: full(&c.u, digits),
            step: short(&c.step),
            digits,
            residual: short(&c.residual),
            bound: short(&c.bound),
            pass: c.passed(),
        }
    }
}

impl Record for LemmaRecord {
    const COLUMNS: &'static [&'static str] =
        &["n", "k", "u", "step", "digits", "residual", "bound", "pass"];

    fn pass(&self) -> Option<bool> {
        Some(self.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GalleryRecord {
    pub id: String,
    pub description: String,
    pub digits: u32,
    pub value: String,
    pub reference: String,
    pub delta: String,
    /// Empty for entries without an assertion of their own.
    pub check: Option<bool>,
}

impl From<&GalleryEntry> for GalleryRecord {
    fn from(e: &GalleryEntry) -> Self {
        use almost_identities::gallery::Reference;
        let reference = match &e.reference {
            Reference::Integer(i) => i.to_string(),
            Reference::Real(r) => full(r, e.digits),
        };
        GalleryRecord {
            id: e.id.clone(),
            description: e.description.clone(),
            digits: e.digits,
            value: full(&e.value, e.digits),
            reference,
            delta: full(&e.delta, e.digits),
            check: e.check,
        }
    }
}

impl Record for GalleryRecord {
    const COLUMNS: &'static [&'static str] = &[
        "id",
        "description",
        "digits",
        "value",
        "reference",
        "delta",
        "check",
    ];

    fn pass(&self) -> Option<bool> {
        self.check
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// How a report with exactly one row is shaped in JSON.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Object,
    Array,
}

pub fn render<R: Record>(rows: &[R], format: Format, shape: Shape) -> String {
    match format {
        Format::Json => {
            let mut out = match (shape, rows) {
                (Shape::Object, [one]) => serde_json::to_string_pretty(one),
                _ => serde_json::to_string_pretty(rows),
            }
            .expect("records serialize");
            out.push('\n');
            out
        }
        Format::Csv => to_csv(rows),
        Format::Text => to_text(rows),
    }
}

fn to_csv<R: Record>(rows: &[R]) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(R::COLUMNS).expect("in-memory write");
    for row in rows {
        w.serialize(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn to_text<R: Record>(rows: &[R]) -> String {
    let width = R::COLUMNS.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let value = serde_json::to_value(row).expect("records serialize");
        let map = value.as_object().expect("records are structs");
        for (key, v) in map {
            let shown = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Null => "-".to_string(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "{key:<width$}  {shown}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use almost_identities::{verify_identity, PrecisionContext};

    fn record(n: u32) -> IdentityRecord {
        let ctx = PrecisionContext::new(30).unwrap();
        IdentityRecord::from(&verify_identity(n, 2, ctx).unwrap())
    }

    #[test]
    fn n2_target_fields() {
        let json = render(&[record(2)], Format::Json, Shape::Object);
        assert!(json.contains(r#""target_rational": "1/1""#), "{json}");
        assert!(json.contains(r#""target_has_pi": false"#));
    }

    #[test]
    fn json_round_trip() {
        let rows = vec![record(1), record(4)];
        let json = render(&rows, Format::Json, Shape::Array);
        let back: Vec<IdentityRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rows);
        let one = render(&rows[..1], Format::Json, Shape::Object);
        let back: IdentityRecord = serde_json::from_str(&one).unwrap();
        assert_eq!(back, rows[0]);
    }

    #[test]
    fn empty_csv_is_header_only() {
        let out = render::<IdentityRecord>(&[], Format::Csv, Shape::Array);
        assert_eq!(out, format!("{}\n", IdentityRecord::COLUMNS.join(",")));
    }

    #[test]
    fn csv_columns_match_serde_order() {
        let out = render(&[record(3)], Format::Csv, Shape::Array);
        let mut r = csv::ReaderBuilder::new().from_reader(out.as_bytes());
        let headers: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
        assert_eq!(headers, IdentityRecord::COLUMNS);
        let back: Vec<IdentityRecord> = r.deserialize().map(|x| x.unwrap()).collect();
        assert_eq!(back, vec![record(3)]);
    }

    #[test]
    fn csv_quotes_fields_with_commas() {
        let row = GalleryRecord {
            id: "x".into(),
            description: "a, b".into(),
            digits: 40,
            value: "1".into(),
            reference: "1".into(),
            delta: "0".into(),
            check: None,
        };
        let out = render(&[row], Format::Csv, Shape::Array);
        assert!(
            out.lines().nth(1).unwrap().starts_with(r#"x,"a, b",40"#),
            "{out}"
        );
    }

    #[test]
    fn text_lists_every_field() {
        let out = render(&[record(5)], Format::Text, Shape::Object);
        for col in IdentityRecord::COLUMNS {
            assert!(out.lines().any(|l| l.starts_with(col)), "{col} missing");
        }
    }
}
