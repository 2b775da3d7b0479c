use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Jsonl,
    Csv,
    Human,
}

/// One output line: a kind tag plus named fields, in insertion order of a `BTreeMap`.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub kind: String,
    #[serde(flatten)]
    pub fields: Map<String, Value>,
}

impl Record {
    /// `fields` must be a JSON object.
    pub fn new(kind: &str, fields: Value) -> Self {
        let Value::Object(fields) = fields else {
            panic!("record fields must be an object");
        };
        Record {
            kind: kind.to_string(),
            fields,
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn write_records(out: &mut dyn Write, records: &[Record], format: Format) -> std::io::Result<()> {
    match format {
        Format::Jsonl => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["kind", "field", "value"])?;
            for r in records {
                for (k, v) in &r.fields {
                    w.write_record([r.kind.as_str(), k.as_str(), scalar_text(v).as_str()])?;
                }
            }
            w.flush()?;
        }
        Format::Human => {
            for r in records {
                writeln!(out, "[{}]", r.kind)?;
                for (k, v) in &r.fields {
                    writeln!(out, "  {k}: {}", scalar_text(v))?;
                }
            }
        }
    }
    Ok(())
}
