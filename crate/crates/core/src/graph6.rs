//! Dense graph6 reader and writer.
//!
//! A graph6 line is a size header followed by the upper triangle of the
//! adjacency matrix in column order (`x(0,1), x(0,2), x(1,2), x(0,3), ...`),
//! six bits per printable byte offset by 63.

use crate::error::{Error, Result};
use crate::graph::Graph;

const HEADER: &str = ">>graph6<<";

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn sixbits(bytes: &[u8], at: usize) -> Result<u64> {
    match bytes.get(at) {
        Some(&b) if (63..=126).contains(&b) => Ok((b - 63) as u64),
        Some(&b) => Err(parse_err(at, format!("byte 0x{b:02x} outside the printable graph6 range"))),
        None => Err(parse_err(at, "unexpected end of input")),
    }
}

/// Decodes one graph6 line. A single trailing newline and the optional
/// `>>graph6<<` header are accepted.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let line = text.strip_suffix('\n').unwrap_or(text);
    let line = line.strip_suffix('\r').unwrap_or(line);
    let (bytes, base) = match line.strip_prefix(HEADER) {
        Some(rest) => (rest.as_bytes(), HEADER.len()),
        None => (line.as_bytes(), 0),
    };
    let shift = |e: Error| match e {
        Error::Parse { offset, message } => Error::Parse {
            offset: offset + base,
            message,
        },
        other => other,
    };

    let (n, mut pos) = decode_size(bytes).map_err(shift)?;
    let pairs = n * n.saturating_sub(1) / 2;
    let body_len = pairs.div_ceil(6);
    if bytes.len() < pos + body_len {
        return Err(shift(parse_err(bytes.len(), format!("expected {body_len} adjacency bytes for {n} vertices"))));
    }
    if bytes.len() > pos + body_len {
        return Err(shift(parse_err(pos + body_len, "trailing bytes after adjacency data")));
    }

    let mut g = Graph::new(n);
    let mut bit = 0usize;
    let mut word = 0u64;
    'outer: for j in 1..n {
        for i in 0..j {
            if bit.is_multiple_of(6) {
                word = sixbits(bytes, pos).map_err(shift)?;
                pos += 1;
            }
            if word >> (5 - bit % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            bit += 1;
            if bit == pairs {
                break 'outer;
            }
        }
    }
    if !bit.is_multiple_of(6) {
        let pad_mask = (1u64 << (6 - bit % 6)) - 1;
        if word & pad_mask != 0 {
            return Err(shift(parse_err(pos - 1, "non-zero padding bits")));
        }
    }
    Ok(g)
}

fn decode_size(bytes: &[u8]) -> Result<(usize, usize)> {
    let first = *bytes.first().ok_or_else(|| parse_err(0, "empty graph6 line"))?;
    if (63..=125).contains(&first) {
        return Ok(((first - 63) as usize, 1));
    }
    if first != 126 {
        return Err(parse_err(0, format!("invalid size byte 0x{first:02x}")));
    }
    let (start, count) = if bytes.get(1) == Some(&126) { (2, 6) } else { (1, 3) };
    let mut n = 0u64;
    for k in 0..count {
        n = (n << 6) | sixbits(bytes, start + k)?;
    }
    let n = n as usize;
    let valid = if count == 3 { n >= 63 } else { n >= 258_048 };
    if !valid {
        return Err(parse_err(0, format!("non-canonical size header for n = {n}")));
    }
    Ok((n, start + count))
}

fn encode_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for k in (0..3).rev() {
            out.push(((n >> (6 * k)) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for k in (0..6).rev() {
            out.push(((n >> (6 * k)) & 63) as u8 + 63);
        }
    }
}

/// Encodes a graph as a header-less graph6 line (no trailing newline).
pub fn write_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    encode_size(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

/// Parses newline-delimited graph6, skipping blank lines.
pub fn parse_graph6_lines(text: &str) -> Result<Vec<Graph>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            parse_graph6(l.trim_end()).map_err(|e| match e {
                Error::Parse { offset, message } => Error::Parse {
                    offset,
                    message: format!("line {}: {message}", i + 1),
                },
                other => other,
            })
        })
        .collect()
}

impl serde::Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&write_graph6(self))
    }
}

impl<'de> serde::Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_graph6(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_codes() {
        assert_eq!(parse_graph6("A_").unwrap(), Graph::complete(2));
        assert_eq!(parse_graph6("A?").unwrap(), Graph::new(2));
        let star = parse_graph6("D?{").unwrap();
        assert_eq!(star.order(), 5);
        assert_eq!(star.edges().collect::<Vec<_>>(), vec![(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(write_graph6(&star), "D?{");
        assert_eq!(write_graph6(&Graph::new(0)), "?");
    }

    #[test]
    fn header_is_accepted() {
        assert_eq!(parse_graph6(">>graph6<<A_\n").unwrap(), Graph::complete(2));
    }

    #[test]
    fn errors_name_offsets() {
        match parse_graph6("D?{x") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("{other:?}"),
        }
        match parse_graph6("D?") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
        match parse_graph6("D?\u{7f}") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
        match parse_graph6(" ") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("{other:?}"),
        }
        // 'A' + '`' sets a padding bit.
        assert!(parse_graph6("A`").is_err());
    }

    #[test]
    fn large_header() {
        let g = Graph::path(70);
        let s = write_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }
}
