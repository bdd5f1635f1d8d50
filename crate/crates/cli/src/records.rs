//! Experiment records and CSV emission. One file per experiment, header row,
//! comma separators, `.` decimals, and `NA` as the failure marker.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Str(String),
    Na,
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(f) => Some(*f),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn is_na(&self) -> bool {
        matches!(self, Value::Na)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) if x.is_finite() => write!(f, "{x}"),
            Value::Float(_) => write!(f, "NA"),
            Value::Str(s) => write!(f, "{s}"),
            Value::Na => write!(f, "NA"),
        }
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Str(v.to_string())
    }
}

/// A rectangular table with a fixed column schema.
#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the schema"
        );
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|&c| c == name)
    }

    /// Value at `(row, column-name)`; panics on an unknown column.
    pub fn get(&self, row: usize, column: &str) -> &Value {
        let idx = self
            .column_index(column)
            .unwrap_or_else(|| panic!("no column `{column}`"));
        &self.rows[row][idx]
    }

    /// All values of one column as `f64`, with `NA` mapped to `+inf` so
    /// failures sort as worst-case outliers in quantile summaries.
    pub fn column_f64_na_inf(&self, column: &str) -> Vec<f64> {
        (0..self.len())
            .map(|r| self.get(r, column).as_f64().unwrap_or(f64::INFINITY))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        fs::write(path, self.to_csv())
    }
}

/// Lower median of a sample (exact middle for odd lengths).
pub fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

/// Quantile by the nearest-rank-below rule on the sorted sample.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty());
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = ((v.len() - 1) as f64 * q).round() as usize;
    v[idx]
}

/// Inter-quartile range `q75 - q25`.
pub fn iqr(values: &[f64]) -> f64 {
    quantile(values, 0.75) - quantile(values, 0.25)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout_and_na_marker() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![Value::Int(1), Value::Float(0.5), Value::Na]);
        t.push(vec![Value::Int(-2), Value::Float(f64::NAN), "x".into()]);
        let csv = t.to_csv();
        assert_eq!(csv, "a,b,c\n1,0.5,NA\n-2,NA,x\n");
    }

    #[test]
    fn column_access() {
        let mut t = Table::new(&["k", "err"]);
        t.push(vec![2usize.into(), 0.25.into()]);
        t.push(vec![4usize.into(), Value::Na]);
        assert_eq!(t.get(0, "k").as_i64(), Some(2));
        assert_eq!(t.column_f64_na_inf("err"), vec![0.25, f64::INFINITY]);
    }

    #[test]
    fn quantiles_on_25_samples() {
        let v: Vec<f64> = (1..=25).map(|i| i as f64).collect();
        assert_eq!(median(&v), 13.0);
        assert_eq!(quantile(&v, 0.25), 7.0);
        assert_eq!(quantile(&v, 0.75), 19.0);
        assert_eq!(iqr(&v), 12.0);
    }
}
