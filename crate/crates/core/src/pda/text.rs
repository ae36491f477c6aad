//! Plain-text PDA files.
//!
//! ```text
//! PDA K=3 F=3
//! * 1 2
//! 1 * 3
//! 2 3 *
//! ```
//!
//! Z and S are derived on load. Blank lines after the last row are ignored.

use super::{Pda, PdaEntry, PdaError};

fn parse_err(line: usize, msg: impl Into<String>) -> PdaError {
    PdaError::Parse { line, msg: msg.into() }
}

fn header_field(token: Option<&str>, key: &str, line: usize) -> Result<usize, PdaError> {
    let token = token.ok_or_else(|| parse_err(line, format!("missing {key}=")))?;
    let value = token
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected {key}=<n>, found {token:?}")))?;
    value.parse().map_err(|_| parse_err(line, format!("bad {key} value {value:?}")))
}

pub fn parse_pda(text: &str) -> Result<Pda, PdaError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("PDA") {
        return Err(parse_err(1, "header must start with PDA"));
    }
    let k = header_field(tokens.next(), "K", 1)?;
    let f = header_field(tokens.next(), "F", 1)?;
    if tokens.next().is_some() {
        return Err(parse_err(1, "trailing tokens in header"));
    }
    if k == 0 || f == 0 {
        return Err(parse_err(1, "K and F must be positive"));
    }

    let mut grid = Vec::with_capacity(f);
    for (no, line) in lines {
        if grid.len() == f {
            if line.trim().is_empty() {
                continue;
            }
            return Err(parse_err(no, format!("more than F={f} rows")));
        }
        let row = line
            .split_whitespace()
            .map(|tok| match tok {
                "*" => Ok(PdaEntry::Star),
                _ => match tok.parse::<u32>() {
                    Ok(s) if s > 0 => Ok(PdaEntry::Ordinary(s)),
                    _ => Err(parse_err(no, format!("bad entry {tok:?}"))),
                },
            })
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != k {
            return Err(parse_err(no, format!("expected {k} entries, found {}", row.len())));
        }
        grid.push(row);
    }
    if grid.len() != f {
        return Err(parse_err(f + 1, format!("expected {f} rows, found {}", grid.len())));
    }
    Pda::validate(grid)
}

pub fn render_pda(pda: &Pda) -> String {
    let mut out = format!("PDA K={} F={}\n", pda.k(), pda.f());
    for row in pda.rows() {
        let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pda::man_pda;

    const TOY: &str = "PDA K=3 F=3\n* 1 2\n1 * 3\n2 3 *\n";

    #[test]
    fn parses_toy() {
        let p = parse_pda(TOY).unwrap();
        assert_eq!(p.params(), (3, 3, 1, 3));
        assert_eq!(render_pda(&p), TOY);
    }

    #[test]
    fn malformed() {
        let short_row = "PDA K=3 F=3\n* 1 2\n1 *\n2 3 *\n";
        assert!(matches!(parse_pda(short_row), Err(PdaError::Parse { line: 3, .. })));
        assert!(matches!(parse_pda("PDB K=3 F=3\n"), Err(PdaError::Parse { line: 1, .. })));
        assert!(matches!(parse_pda("PDA K=3\n"), Err(PdaError::Parse { .. })));
        assert!(matches!(parse_pda("PDA K=1 F=1\n0\n"), Err(PdaError::Parse { .. })));
        assert!(matches!(parse_pda("PDA K=1 F=2\n*\n"), Err(PdaError::Parse { .. })));
        assert!(matches!(parse_pda("PDA K=1 F=1\n*\n*\n"), Err(PdaError::Parse { line: 3, .. })));
        // structurally fine but not a PDA
        let bad = "PDA K=2 F=2\n1 1\n* *\n";
        assert!(matches!(parse_pda(bad), Err(PdaError::CollisionSameRowOrColumn { .. })));
        assert!(parse_pda("PDA K=1 F=1\n*\n\n\n").is_ok());
    }

    proptest::proptest! {
        #[test]
        fn render_parse_roundtrip(k in 1usize..8, t_frac in 0.0f64..=1.0) {
            let t = ((k as f64) * t_frac).round() as usize;
            let p = man_pda(k, t).unwrap();
            let text = render_pda(&p);
            let back = parse_pda(&text).unwrap();
            proptest::prop_assert_eq!(&back, &p);
            proptest::prop_assert_eq!(render_pda(&back), text);
        }
    }
}
