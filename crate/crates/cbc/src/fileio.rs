//! Text and JSON serialization of incidence matrices.
//!
//! Text format: line 1 is `m n k t` space-separated; then m lines of n
//! characters from {0,1}. Lines starting with '#' are comments. A trailing
//! newline is required on write and tolerated either way on read.

use crate::error::{Error, Result};
use crate::matrix::{CodeParams, IncidenceMatrix};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub params: CodeParams,
    pub matrix: IncidenceMatrix,
}

impl MatrixFile {
    pub fn new(params: CodeParams, matrix: IncidenceMatrix) -> Result<Self> {
        if matrix.m() != params.m || matrix.n() != params.n {
            return Err(Error::Format(format!(
                "header says {}x{} but body is {}x{}",
                params.m,
                params.n,
                matrix.m(),
                matrix.n()
            )));
        }
        Ok(MatrixFile { params, matrix })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty file".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|w| {
                w.parse::<usize>()
                    .map_err(|_| Error::Format(format!("bad header field {w:?}")))
            })
            .collect::<Result<_>>()?;
        let [m, n, k, t] = nums[..] else {
            return Err(Error::Format(format!(
                "header must be `m n k t`; got {} fields",
                nums.len()
            )));
        };
        let params = CodeParams::new(n, k, m, t)?;
        let mut cols = vec![0u64; n];
        for i in 0..m {
            let row = lines
                .next()
                .ok_or_else(|| Error::Format(format!("expected {m} rows, found {i}")))?;
            if row.chars().count() != n {
                return Err(Error::Format(format!(
                    "row {} has {} characters, expected {n}",
                    i + 1,
                    row.chars().count()
                )));
            }
            for (j, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => cols[j] |= 1 << i,
                    _ => {
                        return Err(Error::Format(format!(
                            "row {} column {}: invalid character {ch:?}",
                            i + 1,
                            j + 1
                        )))
                    }
                }
            }
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Format(format!("unexpected trailing line {extra:?}")));
        }
        let matrix = IncidenceMatrix::new(m, cols)?;
        MatrixFile::new(params, matrix)
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{} {} {} {}\n",
            self.params.m, self.params.n, self.params.k, self.params.t
        );
        for i in 0..self.params.m {
            for j in 0..self.params.n {
                out.push(if self.matrix.get(i, j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            m: self.params.m,
            n: self.params.n,
            k: self.params.k,
            t: self.params.t,
            total_storage: self.matrix.total_storage(),
            rows: (0..self.params.m)
                .map(|i| {
                    (0..self.params.n)
                        .map(|j| if self.matrix.get(i, j) { '1' } else { '0' })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Field-named mirror of the text format for machine consumers.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixJson {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub total_storage: u64,
    pub rows: Vec<String>,
}

impl MatrixJson {
    pub fn to_matrix_file(&self) -> Result<MatrixFile> {
        let mut text = format!("{} {} {} {}\n", self.m, self.n, self.k, self.t);
        for r in &self.rows {
            text.push_str(r);
            text.push('\n');
        }
        MatrixFile::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mat = IncidenceMatrix::new(3, vec![0b001, 0b010, 0b100, 0b011]).unwrap();
        let params = CodeParams::new(4, 2, 3, 1).unwrap();
        let f = MatrixFile::new(params, mat).unwrap();
        let text = f.render();
        assert!(text.ends_with('\n'));
        let g = MatrixFile::parse(&text).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# a comment\n3 2 2 1\n\n10\n# mid comment\n11\n01\n";
        let f = MatrixFile::parse(text).unwrap();
        assert_eq!(f.matrix.column(0), 0b011);
        assert_eq!(f.matrix.column(1), 0b110);
    }

    #[test]
    fn rejects_malformed() {
        assert!(MatrixFile::parse("").is_err());
        assert!(MatrixFile::parse("2 2 1").is_err());
        assert!(MatrixFile::parse("2 2 2 1\n10\n").is_err()); // missing row
        assert!(MatrixFile::parse("2 2 2 1\n10\n011\n").is_err()); // bad width
        assert!(MatrixFile::parse("2 2 2 1\n10\n2x\n").is_err()); // bad chars
        assert!(MatrixFile::parse("2 2 2 1\n10\n01\n11\n").is_err()); // extra row
    }

    #[test]
    fn json_mirror() {
        let text = "2 3 2 1\n101\n011\n";
        let f = MatrixFile::parse(text).unwrap();
        let j = f.to_json();
        assert_eq!(j.rows, vec!["101", "011"]);
        assert_eq!(j.total_storage, 4);
        let back = j.to_matrix_file().unwrap();
        assert_eq!(back, f);
        let s = serde_json::to_string(&j).unwrap();
        let j2: MatrixJson = serde_json::from_str(&s).unwrap();
        assert_eq!(j, j2);
    }
}
