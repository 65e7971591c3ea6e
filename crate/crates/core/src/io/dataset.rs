//! CSV datasets: a `time` column and an optional `status` column.
//!
//! The dialect is fixed: comma separator, one header row, `.` as decimal
//! point, UTF-8. Anything else fails with the offending line number.

use std::path::Path;

use crate::error::{Error, Result};
use crate::sample::{CensoredSample, Sample};

#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Complete(Vec<f64>),
    Censored { times: Vec<f64>, status: Vec<u8> },
}

impl Dataset {
    pub fn len(&self) -> usize {
        match self {
            Dataset::Complete(v) => v.len(),
            Dataset::Censored { times, .. } => times.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn times(&self) -> &[f64] {
        match self {
            Dataset::Complete(v) => v,
            Dataset::Censored { times, .. } => times,
        }
    }

    pub fn is_censored(&self) -> bool {
        matches!(self, Dataset::Censored { .. })
    }

    pub fn to_sample(&self) -> Result<Sample> {
        Sample::new(self.times().to_vec())
    }

    /// Censored view; a complete dataset is treated as fully observed.
    pub fn to_censored(&self) -> Result<CensoredSample> {
        match self {
            Dataset::Complete(v) => CensoredSample::uncensored(v),
            Dataset::Censored { times, status } => CensoredSample::from_parts(times, status),
        }
    }
}

fn csv_line(e: &csv::Error) -> u64 {
    e.position().map_or(0, |p| p.line())
}

/// The csv reader skips empty lines; a blank row is a missing time here.
fn reject_blank_lines(bytes: &[u8]) -> Result<()> {
    let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    for (i, line) in body.split(|&b| b == b'\n').enumerate() {
        if line.strip_suffix(b"\r").unwrap_or(line).is_empty() {
            return Err(Error::Parse {
                line: i as u64 + 1,
                message: "blank line".into(),
            });
        }
    }
    Ok(())
}

pub fn parse_dataset(bytes: &[u8]) -> Result<Dataset> {
    reject_blank_lines(bytes)?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::None)
        .from_reader(bytes);

    let header = rdr.headers().map_err(|e| Error::Parse {
        line: csv_line(&e).max(1),
        message: e.to_string(),
    })?;
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    let censored = match names.as_slice() {
        ["time"] => false,
        ["time", "status"] => true,
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "header must be `time` or `time,status`, got {:?}",
                    header.iter().collect::<Vec<_>>()
                ),
            })
        }
    };

    let mut times = Vec::new();
    let mut status = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            line: csv_line(&e),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = record.get(0).unwrap_or("").trim();
        let t = match cell.parse::<f64>() {
            Ok(v) if v.is_finite() => v,
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("time {cell:?} is not a finite number"),
                })
            }
        };
        times.push(t);
        if censored {
            let s = record.get(1).unwrap_or("").trim();
            status.push(match s {
                "0" => 0,
                "1" => 1,
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("status {s:?} must be 0 or 1"),
                    })
                }
            });
        }
    }
    if times.is_empty() {
        return Err(Error::Parse {
            line: 2,
            message: "no data rows".into(),
        });
    }
    Ok(if censored {
        Dataset::Censored { times, status }
    } else {
        Dataset::Complete(times)
    })
}

pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_dataset(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_file() {
        let d = parse_dataset(b"time\n0.1\n0.5\n0.25\n").unwrap();
        assert_eq!(d, Dataset::Complete(vec![0.1, 0.5, 0.25]));
        assert!(!d.is_censored());
    }

    #[test]
    fn censored_file() {
        let d = parse_dataset(b"time,status\n1.5,1\n2,0\n3,1\n").unwrap();
        assert_eq!(
            d,
            Dataset::Censored {
                times: vec![1.5, 2.0, 3.0],
                status: vec![1, 0, 1]
            }
        );
        assert_eq!(d.to_censored().unwrap().event_count(), 2);
    }

    fn line_of(input: &[u8]) -> u64 {
        match parse_dataset(input) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_input_with_line_numbers() {
        assert_eq!(line_of(b"x\n1\n"), 1);
        assert_eq!(line_of(b"time\n0.1\n\"\"\n"), 3);
        assert_eq!(line_of(b"time\n0.1\n\n0.3\n"), 3);
        assert_eq!(line_of(b"time\r\n0.1\r\n\r\n"), 3);
        assert_eq!(line_of(b"time\n0.1\nNaN\n"), 3);
        assert_eq!(line_of(b"time\n0.1\ninf\n"), 3);
        // decimal comma splits the field
        assert_eq!(line_of(b"time\n0.1\n0,5\n"), 3);
        assert_eq!(line_of(b"time;status\n0.1;1\n"), 1);
        assert_eq!(line_of(b"time,status\n0.1,1\n0.2,2\n"), 3);
        assert_eq!(line_of(b"time,status\n0.1,1\n0.2\n"), 3);
        assert_eq!(line_of(b"time\n"), 2);
        assert!(parse_dataset(b"time\n\xff\xfe\n").is_err());
    }
}
