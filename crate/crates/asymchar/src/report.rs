//! Output documents: `{config, results, provenance}` rendered as JSON, CSV
//! or a plain table.

use std::io;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};

use crate::config::OutputFormat;

/// A finished report. Everything in it is a pure function of the run
/// configuration, so the rendered bytes are too.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Document {
    pub config: Value,
    pub results: Value,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    /// Names of the methods that produced `results`.
    pub formula_tags: Vec<String>,
    pub crate_version: String,
}

impl Provenance {
    pub fn new<S: AsRef<str>>(tags: &[S]) -> Self {
        Provenance {
            formula_tags: tags.iter().map(|t| t.as_ref().to_string()).collect(),
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// `"num/den"`, always with an explicit denominator.
pub fn rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn rational_i64(q: &asymchar_core::linalg::Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Pretty JSON with every float printed to 17 significant digits.
struct SeventeenDigits(PrettyFormatter<'static>);

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json(value: &impl Serialize) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory JSON serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// Dotted path / value pairs of the leaves of `v`, in document order.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(m) => m.iter().for_each(|(k, x)| walk(&join(k), x, out)),
            Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| walk(&join(&i.to_string()), x, out)),
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            Value::Number(n) => out.push((prefix.to_string(), match n.as_f64() {
                Some(f) if !n.is_i64() && !n.is_u64() => format!("{f:.16e}"),
                _ => n.to_string(),
            })),
            Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
            Value::Null => out.push((prefix.to_string(), String::new())),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

impl Document {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => to_json(self),
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Table => self.render_table(),
        }
    }

    /// Columns `section,key,value` over the flattened document; a `table`
    /// entry in `results` (a list of flat records) is emitted instead as
    /// its own header and rows.
    fn render_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        if let Some(Value::Array(rows)) = self.results.get("table") {
            let header: Vec<String> = match rows.first() {
                Some(Value::Object(m)) => m.keys().cloned().collect(),
                _ => Vec::new(),
            };
            w.write_record(&header).expect("in-memory CSV");
            for row in rows {
                let cells: Vec<String> = header
                    .iter()
                    .map(|h| row.get(h).map(|c| flatten(c).into_iter().map(|(_, v)| v).collect::<Vec<_>>().join(";")).unwrap_or_default())
                    .collect();
                w.write_record(&cells).expect("in-memory CSV");
            }
        } else {
            w.write_record(["section", "key", "value"]).expect("in-memory CSV");
            for (section, v) in self.sections() {
                for (k, x) in flatten(&v) {
                    w.write_record([section, k.as_str(), x.as_str()]).expect("in-memory CSV");
                }
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory CSV")).expect("UTF-8")
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        for (section, v) in self.sections() {
            let rows = flatten(&v);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            out.push_str(&format!("[{section}]\n"));
            for (k, x) in rows {
                out.push_str(&format!("  {k:<width$}  {x}\n"));
            }
        }
        out
    }

    fn sections(&self) -> [(&'static str, Value); 3] {
        let prov = serde_json::to_value(&self.provenance).unwrap_or(Value::Object(Map::new()));
        [("config", self.config.clone()), ("results", self.results.clone()), ("provenance", prov)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use serde_json::json;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_json(&json!({"a": 0.1, "b": 3, "c": [1.5e-300]}));
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("\"b\": 3"));
        assert!(s.contains("1.5000000000000001e-300"), "{s}");
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.1));
    }

    #[test]
    fn rationals_keep_denominator() {
        let one = BigRational::from_integer(BigInt::from(1));
        assert_eq!(rational(&one), "1/1");
        let q = BigRational::new(BigInt::from(-6), BigInt::from(4));
        assert_eq!(rational(&q), "-3/2");
    }

    #[test]
    fn csv_and_table() {
        let doc = Document {
            config: json!({"command": "x"}),
            results: json!({"v": {"w": [1, 2]}, "s": "1/2"}),
            provenance: Provenance::new(&["m"]),
        };
        let csv = doc.render(OutputFormat::Csv);
        assert!(csv.starts_with("section,key,value\n"));
        assert!(csv.contains("results,v.w.1,2\n"));
        let t = doc.render(OutputFormat::Table);
        assert!(t.contains("[results]") && t.contains("v.w.0"));
        let tabular = Document { results: json!({"table": [{"a": 1, "b": [2, 3]}, {"a": 4, "b": [5, 6]}]}), ..doc };
        assert_eq!(tabular.render(OutputFormat::Csv), "a,b\n1,2;3\n4,5;6\n");
    }
}
