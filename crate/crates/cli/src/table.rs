use std::fmt::Write as _;

/// A CSV table with a fixed header. Values are written with Rust's
/// shortest round-trip float formatting, so output is byte-stable.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, metadata: &str) -> String {
        let mut out = String::new();
        writeln!(out, "# {metadata}").unwrap();
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            writeln!(out, "{}", row.join(",")).unwrap();
        }
        out
    }
}

pub fn num(v: f64) -> String {
    format!("{v}")
}

pub fn deg(rad: f64) -> String {
    format!("{:.2}", rad.to_degrees())
}

/// Scientific notation, for powers in watts.
pub fn sci(v: f64) -> String {
    format!("{v:e}")
}
