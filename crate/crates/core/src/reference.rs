//! Reference tables: comma-separated, `#` comment lines permitted, a header
//! row whose first column is `separation_nm`, numeric columns after it.

use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTable {
    pub columns: Vec<String>,
    pub rows: Vec<ReferenceRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRow {
    pub separation_nm: f64,
    pub values: Vec<f64>,
}

impl ReferenceTable {
    pub fn parse<R: BufRead>(source: R) -> Result<Self> {
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (idx, line) in source.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
            match &columns {
                None => {
                    if fields[0] != "separation_nm" {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("first header column must be 'separation_nm', found '{}'", fields[0]),
                        });
                    }
                    columns = Some(fields[1..].iter().map(|s| s.to_string()).collect());
                }
                Some(cols) => {
                    if fields.len() != cols.len() + 1 {
                        return Err(Error::Parse {
                            line: line_no,
                            message: format!("expected {} fields, found {}", cols.len() + 1, fields.len()),
                        });
                    }
                    let mut nums = fields.iter().map(|f| {
                        f.parse::<f64>().map_err(|_| Error::Parse {
                            line: line_no,
                            message: format!("'{f}' is not a number"),
                        })
                    });
                    let separation_nm = nums.next().expect("nonempty")?;
                    let values = nums.collect::<Result<Vec<_>>>()?;
                    rows.push(ReferenceRow { separation_nm, values });
                }
            }
        }
        let columns = columns.ok_or(Error::Parse {
            line: 0,
            message: "missing header row".into(),
        })?;
        Ok(Self { columns, rows })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
        Self::parse(std::io::BufReader::new(file))
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// (separation_nm, value) pairs for one named column.
    pub fn column(&self, name: &str) -> Option<Vec<(f64, f64)>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| (r.separation_nm, r.values[i])).collect())
    }

    /// Columns holding pressures, recognised by the `_mPa` suffix.
    pub fn pressure_columns(&self) -> Vec<&str> {
        self.columns.iter().filter(|c| c.ends_with("_mPa")).map(String::as_str).collect()
    }
}
