//! Column-labelled numeric result tables and their CSV form.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableError {
    #[error("row has {got} values but the table has {expected} columns")]
    WidthMismatch { expected: usize, got: usize },
    #[error("non-finite value {value} in column `{column}` (row {row})")]
    NonFinite { column: String, row: usize, value: f64 },
    #[error("column sets differ; cannot concatenate")]
    SchemaMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self { name: name.to_owned(), unit: unit.to_owned() }
    }
}

/// Ordered columns plus rows of finite values.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultTable {
    columns: Vec<Column>,
    rows: Vec<Vec<f64>>,
}

impl ResultTable {
    /// `columns` as (name, unit) pairs.
    pub fn new(columns: &[(&str, &str)]) -> Self {
        Self { columns: columns.iter().map(|(n, u)| Column::new(n, u)).collect(), rows: Vec::new() }
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<(), TableError> {
        if row.len() != self.columns.len() {
            return Err(TableError::WidthMismatch { expected: self.columns.len(), got: row.len() });
        }
        if let Some((i, &value)) = row.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(TableError::NonFinite { column: self.columns[i].name.clone(), row: self.rows.len(), value });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Values of the named column, if present.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c.name == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// New table with a leading constant column.
    pub fn with_leading(&self, name: &str, unit: &str, value: f64) -> Result<Self, TableError> {
        let mut columns = vec![Column::new(name, unit)];
        columns.extend(self.columns.iter().cloned());
        let mut out = Self { columns, rows: Vec::with_capacity(self.rows.len()) };
        for row in &self.rows {
            let mut r = Vec::with_capacity(row.len() + 1);
            r.push(value);
            r.extend_from_slice(row);
            out.push(r)?;
        }
        Ok(out)
    }

    pub fn append(&mut self, other: ResultTable) -> Result<(), TableError> {
        if other.columns != self.columns {
            return Err(TableError::SchemaMismatch);
        }
        self.rows.extend(other.rows);
        Ok(())
    }

    /// CSV text: header `name[unit],…`, values with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.columns.iter().map(|c| format!("{}[{}]", c.name, c.unit)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write!(out, "{v:.16e}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}
