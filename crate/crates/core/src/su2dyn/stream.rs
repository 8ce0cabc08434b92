use crate::polyring::Point7;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// One row of a point stream: `{"step": n, "x": [7 floats], "gen": name}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StreamRow {
    pub step: usize,
    pub x: Point7,
    pub gen: String,
}

pub fn write_jsonl<W: Write, I: IntoIterator<Item = StreamRow>>(mut w: W, rows: I) -> Result<usize, StreamError> {
    let mut n = 0;
    for row in rows {
        serde_json::to_writer(&mut w, &row).map_err(io::Error::from)?;
        w.write_all(b"\n")?;
        n += 1;
    }
    w.flush()?;
    Ok(n)
}

/// Blank lines are skipped; coordinates must be finite.
pub fn read_jsonl(text: &str) -> Result<Vec<StreamRow>, StreamError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: StreamRow = serde_json::from_str(line).map_err(|e| StreamError::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?;
        if row.x.iter().any(|v| !v.is_finite()) {
            return Err(StreamError::Parse {
                line: i + 1,
                msg: "non-finite coordinate".into(),
            });
        }
        out.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let rows = vec![
            StreamRow {
                step: 1,
                x: [0.3, 0.1, -0.2, 1.0, 0.5, -1.5, 2.0],
                gen: "tau12".into(),
            },
            StreamRow {
                step: 2,
                x: [0.3, 0.1, -0.2, 1.0, 0.25, -1.0, 1.75],
                gen: "tau0^-1".into(),
            },
        ];
        let mut buf = Vec::new();
        assert_eq!(write_jsonl(&mut buf, rows.clone()).unwrap(), 2);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(r#"{"step":1,"x":[0.3,0.1,-0.2,1.0,0.5,-1.5,2.0],"gen":"tau12"}"#));
        assert_eq!(read_jsonl(&text).unwrap(), rows);
    }

    #[test]
    fn rejects_malformed_rows() {
        let bad = [
            r#"{"step":1,"x":[0,0,0],"gen":"a"}"#,
            r#"{"step":-1,"x":[0,0,0,0,0,0,0],"gen":"a"}"#,
            r#"{"step":1,"x":[0,0,0,0,0,0,0]}"#,
            r#"{"step":1,"x":[0,0,0,0,0,0,0],"gen":"a","extra":1}"#,
            "not json",
        ];
        for line in bad {
            assert!(matches!(read_jsonl(line), Err(StreamError::Parse { line: 1, .. })), "{line}");
        }
    }
}
