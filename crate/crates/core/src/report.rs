//! Plain tables rendered as markdown or CSV.
//!
//! Statistics print with 2 decimals, p-values with 3, correlations with 2 and
//! no leading zero when `Cell::Corr` is used.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Cell {
    Empty,
    Text(String),
    Int(i64),
    /// Two decimals.
    Stat(f64),
    /// Three decimals.
    P(f64),
    /// Two decimals without the leading zero, e.g. `.48` or `-.07`.
    Corr(f64),
    /// Correlation with significance stars, bracketed when highlighted.
    CorrMark {
        r: f64,
        stars: String,
        marked: bool,
    },
}

impl Cell {
    pub fn render(&self) -> String {
        self.render_with(2)
    }

    /// Statistics at `decimals` places, p-values at one more.
    pub fn render_with(&self, decimals: usize) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Stat(v) => fixed(*v, decimals),
            Cell::P(v) => fixed(*v, decimals + 1),
            Cell::Corr(v) => corr_with(*v, decimals),
            Cell::CorrMark { r, stars, marked } => {
                let s = format!("{}{stars}", corr_with(*r, decimals));
                if *marked {
                    format!("[{s}]")
                } else {
                    s
                }
            }
        }
    }
}

/// Fixed-point formatting that never prints `-0.00`.
pub fn fixed(v: f64, decimals: usize) -> String {
    if !v.is_finite() {
        return "NA".into();
    }
    let s = format!("{v:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Correlation style: two decimals, leading zero dropped.
pub fn corr(v: f64) -> String {
    corr_with(v, 2)
}

pub fn corr_with(v: f64, decimals: usize) -> String {
    let s = fixed(v, decimals);
    if let Some(rest) = s.strip_prefix("0.") {
        format!(".{rest}")
    } else if let Some(rest) = s.strip_prefix("-0.") {
        format!("-.{rest}")
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    pub cells: Vec<Cell>,
    /// Section headings render in italics and carry no cells.
    #[serde(default)]
    pub section: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: Vec<String>) -> Self {
        Table {
            title: title.into(),
            columns,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn section(&mut self, label: impl Into<String>) {
        self.rows.push(Row {
            label: label.into(),
            cells: Vec::new(),
            section: true,
        });
    }

    pub fn row(&mut self, label: impl Into<String>, cells: Vec<Cell>) {
        self.rows.push(Row {
            label: label.into(),
            cells,
            section: false,
        });
    }

    pub fn find_row(&self, label: &str) -> Option<&Row> {
        self.rows.iter().find(|r| !r.section && r.label == label)
    }

    pub fn to_markdown(&self) -> String {
        self.to_markdown_with(2)
    }

    pub fn to_markdown_with(&self, decimals: usize) -> String {
        let mut out = String::new();
        if !self.title.is_empty() {
            let _ = writeln!(out, "### {}\n", self.title);
        }
        let width = self.columns.len();
        let _ = writeln!(out, "| | {} |", self.columns.join(" | "));
        let _ = writeln!(out, "|---|{}", "---|".repeat(width));
        for row in &self.rows {
            let mut cells: Vec<String> =
                row.cells.iter().map(|c| c.render_with(decimals)).collect();
            cells.resize(width, String::new());
            let label = if row.section {
                format!("*{}*", row.label)
            } else {
                row.label.clone()
            };
            let _ = writeln!(out, "| {} | {} |", label, cells.join(" | "));
        }
        for note in &self.notes {
            let _ = writeln!(out, "\n{note}");
        }
        out
    }

    pub fn to_csv(&self) -> String {
        self.to_csv_with(2)
    }

    pub fn to_csv_with(&self, decimals: usize) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let mut header = vec![String::new()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).expect("csv write to memory");
        for row in &self.rows {
            let mut rec = vec![row.label.clone()];
            let mut cells: Vec<String> =
                row.cells.iter().map(|c| c.render_with(decimals)).collect();
            cells.resize(self.columns.len(), String::new());
            rec.extend(cells);
            w.write_record(&rec).expect("csv write to memory");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf-8")
    }
}
