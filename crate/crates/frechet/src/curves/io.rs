//! Plain-text curve files: one vertex per line, space separated, `#` comments.

use std::fmt::Write as _;
use std::path::Path;

use super::Curve;
use crate::error::{Error, Result};

pub fn parse_curve(text: &str) -> Result<Curve> {
    let mut dim = None;
    let mut coords = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut count = 0;
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                line: k + 1,
                msg: format!("not a number: {tok:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: k + 1,
                    msg: format!("non-finite coordinate {tok:?}"),
                });
            }
            coords.push(v);
            count += 1;
        }
        match dim {
            None => dim = Some(count),
            Some(d) if d != count => {
                return Err(Error::Parse {
                    line: k + 1,
                    msg: format!("expected {d} coordinates, found {count}"),
                })
            }
            _ => {}
        }
    }
    match dim {
        None => Err(Error::EmptyCurve),
        Some(d) => Curve::from_flat(d, coords),
    }
}

pub fn read_curve(path: &Path) -> Result<Curve> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_curve(&text)
}

/// Coordinates are written with shortest round-trip formatting.
pub fn write_curve(path: &Path, curve: &Curve) -> Result<()> {
    let mut out = String::new();
    for v in curve.vertices() {
        let line: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    std::fs::write(path, out).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let c = parse_curve("# header\n0 0\n\n1.5 -2\n# x\n3 4\n").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.vertex(1), &[1.5, -2.0]);
    }

    #[test]
    fn dimension_is_enforced() {
        let e = parse_curve("0 0\n1 2 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn garbage_and_empty() {
        assert!(matches!(
            parse_curve("0 x\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert_eq!(parse_curve("# nothing\n"), Err(Error::EmptyCurve));
        assert!(parse_curve("nan 1\n").is_err());
    }

    #[test]
    fn round_trip() {
        let c = Curve::new(vec![vec![0.1, 1e-300], vec![-3.25, 7.0]]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.txt");
        write_curve(&p, &c).unwrap();
        assert_eq!(read_curve(&p).unwrap(), c);
    }
}
