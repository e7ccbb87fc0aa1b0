//! graph6 encoding of undirected graphs.
//!
//! Header: one byte `n + 63` for `n <= 62`; `126` followed by three 6-bit
//! groups for `n <= 258047`; `126 126` followed by six groups otherwise.
//! Body: the upper triangle `x(0,1), x(0,2), x(1,2), x(0,3), ...` packed
//! big-endian into 6-bit groups, each offset by 63, zero padded.

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {byte} at offset {offset} is outside 63..=126")]
    MalformedByte { offset: usize, byte: u8 },
    #[error("bit stream truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("{0} unexpected trailing bytes")]
    Trailing(usize),
}

const HEADER: &str = ">>graph6<<";

fn push_groups(out: &mut Vec<u8>, value: u64, groups: usize) {
    for i in (0..groups).rev() {
        out.push(((value >> (6 * i)) & 0x3f) as u8 + 63);
    }
}

pub fn encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        push_groups(&mut out, n as u64, 3);
    } else {
        out.push(126);
        out.push(126);
        push_groups(&mut out, n as u64, 6);
    }
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

pub fn decode(line: &str) -> Result<Graph, Graph6Error> {
    let s = line.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    if let Some((offset, &byte)) = bytes
        .iter()
        .enumerate()
        .find(|(_, &b)| !(63..=126).contains(&b))
    {
        return Err(Graph6Error::MalformedByte { offset, byte });
    }
    let group = |from: usize, count: usize| -> Result<u64, Graph6Error> {
        if bytes.len() < from + count {
            return Err(Graph6Error::Truncated {
                expected: from + count,
                found: bytes.len(),
            });
        }
        Ok(bytes[from..from + count]
            .iter()
            .fold(0u64, |acc, &b| (acc << 6) | (b - 63) as u64))
    };
    let (n, body) = if bytes[0] != 126 {
        ((bytes[0] - 63) as usize, 1)
    } else if bytes.len() > 1 && bytes[1] == 126 {
        (group(2, 6)? as usize, 8)
    } else {
        (group(1, 3)? as usize, 4)
    };
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    let found = bytes.len() - body;
    if found < need {
        return Err(Graph6Error::Truncated {
            expected: body + need,
            found: bytes.len(),
        });
    }
    if found > need {
        return Err(Graph6Error::Trailing(found - need));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let b = bytes[body + k / 6] - 63;
            if (b >> (5 - k % 6)) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::new(n, edges).expect("graph6 upper triangle is simple"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_vertex() {
        assert_eq!(encode(&Graph::empty(1)), "@");
        assert_eq!(decode("@").unwrap(), Graph::empty(1));
        assert_eq!(encode(&Graph::empty(0)), "?");
    }

    #[test]
    fn k33_matches_reference_encoder() {
        // produced by networkx.to_graph6_bytes on the same edge list, header stripped
        let k33 = Graph::new(6, (0..3).flat_map(|i| (3..6).map(move |j| (i, j)))).unwrap();
        assert_eq!(encode(&k33), "EFz_");
        assert_eq!(decode(">>graph6<<EFz_\n").unwrap(), k33);
    }

    #[test]
    fn long_header() {
        let n = 70;
        let g = Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap();
        let s = encode(&g);
        assert_eq!(s.as_bytes()[0], 126);
        assert_eq!(decode(&s).unwrap(), g);
    }

    #[test]
    fn errors() {
        assert_eq!(decode(""), Err(Graph6Error::Empty));
        assert!(matches!(decode("E z_"), Err(Graph6Error::MalformedByte { offset: 1, .. })));
        assert!(matches!(decode("EFz"), Err(Graph6Error::Truncated { .. })));
        assert_eq!(decode("EFz__"), Err(Graph6Error::Trailing(1)));
        assert!(matches!(decode("~?"), Err(Graph6Error::Truncated { .. })));
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..=62, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = rng.gen_range(0.0..1.0);
            let mut edges = Vec::new();
            for j in 1..n {
                for i in 0..j {
                    if rng.gen_bool(p) {
                        edges.push((i, j));
                    }
                }
            }
            let g = Graph::new(n, edges).unwrap();
            let s = encode(&g);
            prop_assert!(s.bytes().all(|b| (63..=126).contains(&b)));
            prop_assert_eq!(decode(&s).unwrap(), g);
        }
    }
}
