//! `key: value` result documents.

use std::fmt::Display;

use tpwalk::linalg::{Matrix, MinorWitness};

/// Floats at 17 significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    status: String,
    fields: Vec<(String, String)>,
    code: i32,
}

impl Report {
    pub fn new(status: impl Into<String>) -> Self {
        Report {
            status: status.into(),
            fields: Vec::new(),
            code: 0,
        }
    }

    pub fn with_code(mut self, code: i32) -> Self {
        self.code = code;
        self
    }

    pub fn code(&self) -> i32 {
        self.code
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl Display) -> &mut Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }

    pub fn float(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.field(key, float(value))
    }

    pub fn list<T: Display>(&mut self, key: impl Into<String>, items: &[T]) -> &mut Self {
        let joined: Vec<String> = items.iter().map(ToString::to_string).collect();
        self.field(key, joined.join(","))
    }

    /// `rows`, `cols`, then one `entry <row> <col>` line per entry, with
    /// rows and columns listed in the order given.
    pub fn matrix<T: Display>(&mut self, m: &Matrix<T>, rows: &[(usize, &str)], cols: &[(usize, &str)]) -> &mut Self {
        self.field("rows", rows.iter().map(|r| r.1).collect::<Vec<_>>().join(","));
        self.field("cols", cols.iter().map(|c| c.1).collect::<Vec<_>>().join(","));
        for &(i, rn) in rows {
            for &(j, cn) in cols {
                self.field(format!("entry {rn} {cn}"), m.get(i, j));
            }
        }
        self
    }

    pub fn witness<T: Display>(&mut self, w: &MinorWitness<T>, row_names: &[&str], col_names: &[&str]) -> &mut Self {
        let rows: Vec<&str> = w.rows.iter().map(|&i| row_names[i]).collect();
        let cols: Vec<&str> = w.cols.iter().map(|&j| col_names[j]).collect();
        self.field("witness-rows", rows.join(","));
        self.field("witness-cols", cols.join(","));
        self.field("witness-value", &w.value)
    }

    pub fn render(&self) -> String {
        let mut out = format!("status: {}\n", self.status);
        for (k, v) in &self.fields {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}
