//! The graph6 text format for simple undirected graphs.

use crate::error::{Error, Result};
use crate::graph::Graph;

const HEADER: &str = ">>graph6<<";
const MAX_N: usize = (1 << 36) - 1;

pub fn encode(g: &Graph) -> Result<String> {
    if g.has_loops() {
        return Err(Error::Unsupported("graph6 cannot represent loops".into()));
    }
    let n = g.order();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
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
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

pub fn decode(text: &str) -> Result<Graph> {
    let trimmed = text.trim_end_matches(['\n', '\r']);
    let (base, body) = match trimmed.strip_prefix(HEADER) {
        Some(rest) => (HEADER.len(), rest.as_bytes()),
        None => (0, trimmed.as_bytes()),
    };
    for (i, &b) in body.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Error::parse(base + i, format!("byte {b:#04x} outside the graph6 range")));
        }
    }
    let (n, mut pos) = match body {
        [] => return Err(Error::parse(base, "missing vertex count")),
        [126, 126, rest @ ..] => (read_size(rest, 6, base + 2)?, 8),
        [126, rest @ ..] => (read_size(rest, 3, base + 1)?, 4),
        [b, ..] => ((b - 63) as usize, 1),
    };
    if n > MAX_N {
        return Err(Error::parse(base, "vertex count too large"));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let needed = pairs.div_ceil(6);
    if body.len() - pos < needed {
        return Err(Error::parse(base + body.len(), format!(
            "truncated adjacency data: need {needed} bytes, found {}",
            body.len() - pos
        )));
    }
    if body.len() - pos > needed {
        return Err(Error::parse(base + pos + needed, "trailing bytes after adjacency data"));
    }
    let mut g = Graph::new(n)?;
    let mut bit = 0;
    let mut word = 0u8;
    for j in 1..n {
        for i in 0..j {
            if bit == 0 {
                word = body[pos] - 63;
                pos += 1;
            }
            if word >> (5 - bit) & 1 == 1 {
                g.add_edge(i, j)?;
            }
            bit = (bit + 1) % 6;
        }
    }
    Ok(g)
}

fn read_size(bytes: &[u8], len: usize, offset: usize) -> Result<usize> {
    if bytes.len() < len {
        return Err(Error::parse(offset + bytes.len(), "truncated vertex count"));
    }
    Ok(bytes[..len].iter().fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use proptest::prelude::*;

    #[test]
    fn known_strings() {
        let g = Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(encode(&g).unwrap(), "DQc");
        assert_eq!(decode("DQc").unwrap(), g);
        assert_eq!(encode(&named::petersen()).unwrap(), "IheA@GUAo");
        assert_eq!(encode(&Graph::new(1).unwrap()).unwrap(), "@");
        assert_eq!(decode(">>graph6<<DQc\n").unwrap(), g);
    }

    #[test]
    fn malformed_inputs_report_offsets() {
        assert!(matches!(decode(""), Err(Error::Parse { offset: 0, .. })));
        assert!(matches!(decode("D"), Err(Error::Parse { offset: 1, .. })));
        assert!(matches!(decode("DQ c"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(decode("DQcc"), Err(Error::Parse { offset: 3, .. })));
        assert!(matches!(decode("~?"), Err(Error::Parse { .. })));
    }

    #[test]
    fn multi_byte_sizes() {
        let mut g = Graph::new(100).unwrap();
        g.add_edge(0, 99).unwrap();
        g.add_edge(50, 51).unwrap();
        let s = encode(&g).unwrap();
        assert!(s.starts_with('~'));
        assert_eq!(decode(&s).unwrap(), g);
        // 258048 = 63 * 4096: the first count needing the six-byte form
        assert_eq!(read_size(b"???~??", 6, 0).unwrap(), 258_048);
        assert!(matches!(decode("~~???~??"), Err(Error::Parse { offset: 8, .. })));
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..=70, seed in any::<u64>()) {
            let mut g = Graph::new(n).unwrap();
            let mut x = seed | 1;
            for i in 0..n {
                for j in i + 1..n {
                    x ^= x << 13; x ^= x >> 7; x ^= x << 17;
                    if x & 1 == 1 { g.add_edge(i, j).unwrap(); }
                }
            }
            prop_assert_eq!(decode(&encode(&g).unwrap()).unwrap(), g);
        }
    }
}
