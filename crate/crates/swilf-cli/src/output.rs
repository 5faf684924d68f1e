//! Rendering of command results as an aligned table, CSV, or JSON.
//!
//! Every command funnels through [`Table`], so identical inputs produce
//! byte-identical output in every format regardless of worker count.

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Column-ordered rows of string cells.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// For single-value results, the bare text that `table` format prints
    /// instead of an aligned grid.
    pub scalar: Option<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            scalar: None,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_table(&self) -> String {
        if let Some(scalar) = &self.scalar {
            return format!("{scalar}\n");
        }
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let render_row = |cells: &[String], widths: &[usize]| -> String {
            cells
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        out.push_str(&render_row(&self.columns, &widths));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&render_row(row, &widths));
            out.push('\n');
        }
        out
    }

    fn render_csv(&self) -> String {
        let quote = |cell: &str| -> String {
            if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
                format!("\"{}\"", cell.replace('"', "\"\""))
            } else {
                cell.to_string()
            }
        };
        let mut out = String::new();
        out.push_str(&self.columns.iter().map(|c| quote(c)).collect::<Vec<_>>().join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(|c| quote(c)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        // objects keep column order; all values are strings so exact counts
        // survive any consumer
        let mut out = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("\n  {");
            for (j, (col, cell)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                out.push_str(&serde_json::to_string(col).expect("string encodes"));
                out.push_str(": ");
                out.push_str(&serde_json::to_string(cell).expect("string encodes"));
            }
            out.push('}');
        }
        if !self.rows.is_empty() {
            out.push('\n');
        }
        out.push_str("]\n");
        out
    }
}

/// A decimal rendering with 10 significant digits.
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (9 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_commas() {
        let mut t = Table::new(&["pattern", "n"]);
        t.push(vec!["1,3,4,2".into(), "6".into()]);
        assert_eq!(t.render(Format::Csv), "pattern,n\n\"1,3,4,2\",6\n");
    }

    #[test]
    fn json_preserves_column_order() {
        let mut t = Table::new(&["z", "a"]);
        t.push(vec!["1".into(), "2".into()]);
        assert_eq!(t.render(Format::Json), "[\n  {\"z\": \"1\", \"a\": \"2\"}\n]\n");
    }

    #[test]
    fn scalar_table_prints_bare() {
        let mut t = Table::new(&["count"]);
        t.push(vec!["14".into()]);
        t.scalar = Some("14".into());
        assert_eq!(t.render(Format::Table), "14\n");
        assert_eq!(t.render(Format::Csv), "count\n14\n");
    }

    #[test]
    fn ten_significant_digits() {
        assert_eq!(sig10(14.65685424949238), "14.65685425");
        assert_eq!(sig10(0.7965588473), "0.7965588473");
        assert_eq!(sig10(4.0), "4.000000000");
    }
}
