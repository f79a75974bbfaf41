//! Plain-text import and export of [`MixingMap`].
//!
//! ```text
//! # comment
//! particles 3
//! block 3 0 2 1
//! 0.1,0 0,0 0,0 0,0
//! ... (N+1 rows of N+1 "re,im" entries)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Every `block` header
//! `N_A N_B N_C N_D` is followed by exactly `N+1` rows. Blocks that are not
//! listed are zero. The full grammar is in `docs/map-format.md`.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{MixingMap, SectorPair};
use crate::{Error, Result};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        location: format!("line {line}"),
        message: message.into(),
    }
}

/// Serializes with shortest round-trip float formatting.
pub fn write_map(map: &MixingMap) -> String {
    let mut out = String::new();
    out.push_str("# modesplit mixing map\n");
    let _ = writeln!(out, "particles {}", map.total_particles());
    for (pair, block) in map.blocks() {
        let _ = writeln!(
            out,
            "block {} {} {} {}",
            pair.input.0, pair.input.1, pair.output.0, pair.output.1
        );
        for row in block.row_iter() {
            let entries: Vec<String> = row.iter().map(|z| format!("{},{}", z.re, z.im)).collect();
            out.push_str(&entries.join(" "));
            out.push('\n');
        }
    }
    out
}

/// Parses a complex entry `re,im` or a bare real.
pub fn parse_complex(token: &str) -> Option<Complex64> {
    match token.split_once(',') {
        Some((re, im)) => Some(Complex64::new(re.trim().parse().ok()?, im.trim().parse().ok()?)),
        None => Some(Complex64::new(token.trim().parse().ok()?, 0.0)),
    }
}

pub fn parse_map(text: &str) -> Result<MixingMap> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (first_line, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, "empty map file"))?;
    let total: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["particles", n] => n
            .parse()
            .map_err(|_| parse_error(first_line, format!("bad particle number '{n}'")))?,
        _ => return Err(parse_error(first_line, "expected 'particles <N>'")),
    };
    let dim = total + 1;
    let mut map = MixingMap::new(total);

    while let Some((line_no, line)) = lines.next() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.first() != Some(&"block") || fields.len() != 5 {
            return Err(parse_error(line_no, "expected 'block N_A N_B N_C N_D'"));
        }
        let mut nums = [0usize; 4];
        for (slot, field) in nums.iter_mut().zip(&fields[1..]) {
            *slot = field
                .parse()
                .map_err(|_| parse_error(line_no, format!("bad sector count '{field}'")))?;
        }
        let pair = SectorPair::new((nums[0], nums[1]), (nums[2], nums[3]));
        if nums[0] + nums[1] != total || nums[2] + nums[3] != total {
            return Err(parse_error(
                line_no,
                format!("block {pair} does not hold {total} particles on both sides"),
            ));
        }
        if map.block(&pair).is_some() {
            return Err(parse_error(line_no, format!("duplicate block {pair}")));
        }
        let mut block = DMatrix::<Complex64>::zeros(dim, dim);
        for row in 0..dim {
            let (row_line, text) = lines
                .next()
                .ok_or_else(|| parse_error(line_no, format!("block {pair} is missing rows")))?;
            let entries: Vec<&str> = text.split_whitespace().collect();
            if entries.len() != dim {
                return Err(parse_error(
                    row_line,
                    format!("expected {dim} entries, found {}", entries.len()),
                ));
            }
            for (col, token) in entries.iter().enumerate() {
                block[(row, col)] = parse_complex(token).ok_or_else(|| {
                    parse_error(row_line, format!("bad complex entry '{token}' in column {}", col + 1))
                })?;
            }
        }
        map.insert_block(pair, block)
            .map_err(|e| parse_error(line_no, e.to_string()))?;
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixing::induced_map;
    use crate::splitting::SplitterParams;

    #[test]
    fn roundtrip_is_exact() {
        let map = induced_map(&SplitterParams::from_angles(0.7, 1.1), 3);
        let text = write_map(&map);
        assert_eq!(parse_map(&text).unwrap(), map);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "particles 1\nblock 1 0 1 0\n1,0 0,0\n0,0\n";
        match parse_map(text) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "line 4"),
            other => panic!("{other:?}"),
        }
        let text = "# header\nparticles 1\nblock 1 0 2 0\n";
        match parse_map(text) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "line 3"),
            other => panic!("{other:?}"),
        }
        assert!(parse_map("").is_err());
        assert!(parse_map("particles x").is_err());
        let text = "particles 1\nblock 1 0 1 0\n1,0 0,q\n0,0 1,0\n";
        assert!(matches!(parse_map(text), Err(Error::Parse { .. })));
    }
}
