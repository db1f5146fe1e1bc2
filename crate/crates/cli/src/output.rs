//! Deterministic CSV emission: a `#`-prefixed metadata block, one header row,
//! then data rows. Floats carry 17 significant digits so repeated runs are
//! byte-identical and values round-trip exactly.

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn write(&self, out: &mut String) {
        match self {
            Cell::Num(v) => out.push_str(&fmt_f64(*v)),
            Cell::Text(t) => out.push_str(t),
            Cell::Empty => {}
        }
    }
}

/// Full-precision float formatting (17 significant digits).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone)]
pub struct CsvDocument {
    pub comments: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvDocument {
    pub fn new(header: &[&str]) -> Self {
        Self {
            comments: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, key: &str, value: impl Into<String>) {
        self.comments.push((key.to_string(), value.into()));
    }

    pub fn comment_num(&mut self, key: &str, value: f64) {
        self.comments.push((key.to_string(), fmt_f64(value)));
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.comments {
            out.push_str("# ");
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(value);
            out.push('\n');
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for cell in row {
                if !first {
                    out.push(',');
                }
                cell.write(&mut out);
                first = false;
            }
            out.push('\n');
        }
        out
    }
}
