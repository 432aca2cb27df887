//! Two-column text files: `x value` per line, `#` starts a comment.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub fn parse_two_column(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|f| !f.is_empty()).collect();
        if fields.len() != 2 {
            return Err(Error::Data(format!(
                "line {}: expected 2 columns, found {}",
                lineno + 1,
                fields.len()
            )));
        }
        let parse = |f: &str| {
            f.parse::<f64>()
                .map_err(|_| Error::Data(format!("line {}: '{f}' is not a number", lineno + 1)))
        };
        rows.push((parse(fields[0])?, parse(fields[1])?));
    }
    if rows.is_empty() {
        return Err(Error::Data("no samples found".into()));
    }
    Ok(rows)
}

pub fn format_two_column(rows: &[(f64, f64)], comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for (x, y) in rows {
        let _ = writeln!(out, "{x} {y}");
    }
    out
}

pub fn read_two_column(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_two_column(&text)
}

pub fn write_two_column(path: &Path, rows: &[(f64, f64)], comment: Option<&str>) -> Result<()> {
    std::fs::write(path, format_two_column(rows, comment))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let rows = vec![(-1.5, 0.25), (0.0, 1e-300), (2.0, -3.0)];
        let text = format_two_column(&rows, Some("a\nb"));
        assert!(text.starts_with("# a\n# b\n"));
        assert_eq!(parse_two_column(&text).unwrap(), rows);
    }

    #[test]
    fn malformed_lines() {
        assert!(parse_two_column("1 2 3\n").is_err());
        assert!(parse_two_column("1 x\n").is_err());
        assert!(parse_two_column("# only comments\n\n").is_err());
        assert_eq!(parse_two_column("1,2 # tail\n").unwrap(), vec![(1.0, 2.0)]);
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            read_two_column(Path::new("/nonexistent/spade/file.txt")),
            Err(Error::Io(_))
        ));
    }
}
