//! Row writers. CSV numbers carry 17 significant digits; JSON-lines objects
//! use the same column names.

use std::io::Write;

use serde_json::{Map, Value};

use crate::config::Format;

pub const PFA_COLUMNS: &[&str] = &[
    "variant",
    "N",
    "lambda",
    "icr_db",
    "interferer_cell",
    "trials",
    "declared",
    "pfa_hat",
    "ci_low",
    "ci_high",
    "seed",
];

pub const PD_COLUMNS: &[&str] = &[
    "variant", "N", "scr_db", "icr_db", "trials", "pd_hat", "ci_low", "ci_high", "seed",
];

/// One output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Text(String),
    Int(u64),
    Real(f64),
    /// Absent value (e.g. no interferer): empty in CSV, null in JSON.
    Missing,
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Text(s) => s.clone(),
            Field::Int(i) => i.to_string(),
            Field::Real(x) => format!("{x:.16e}"),
            Field::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Text(s) => Value::String(s.clone()),
            Field::Int(i) => Value::from(*i),
            Field::Real(x) => Value::from(*x),
            Field::Missing => Value::Null,
        }
    }
}

pub fn write_rows<W: Write + ?Sized>(
    out: &mut W,
    format: Format,
    columns: &[&str],
    rows: &[Vec<Field>],
) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "{}", columns.join(","))?;
            for row in rows {
                let line: Vec<String> = row.iter().map(Field::csv).collect();
                writeln!(out, "{}", line.join(","))?;
            }
        }
        Format::JsonLines => {
            for row in rows {
                let obj: Map<String, Value> = columns
                    .iter()
                    .zip(row)
                    .map(|(c, f)| (c.to_string(), f.json()))
                    .collect();
                writeln!(out, "{}", Value::Object(obj))?;
            }
        }
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_seventeen_digits() {
        let mut buf = Vec::new();
        let rows = vec![vec![Field::Text("case1".into()), Field::Real(0.1), Field::Missing, Field::Int(7)]];
        write_rows(&mut buf, Format::Csv, &["a", "b", "c", "d"], &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "a,b,c,d\ncase1,1.0000000000000001e-1,,7\n");
        let back: f64 = "1.0000000000000001e-1".parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn json_lines_rows() {
        let mut buf = Vec::new();
        let rows = vec![vec![Field::Int(3), Field::Missing]];
        write_rows(&mut buf, Format::JsonLines, &["x", "y"], &rows).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "{\"x\":3,\"y\":null}\n");
    }
}
