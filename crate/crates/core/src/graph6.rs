//! graph6 encoding for graphs with at most 62 vertices.
//!
//! Layout: one header byte `n + 63`, then the upper-triangle bits
//! `x(0,1), x(0,2), x(1,2), x(0,3), ...` (column by column), packed six per
//! byte most-significant first, each byte offset by 63, zero padded.

use crate::error::{Graph6ErrorKind, GraphError};
use crate::graph::Graph;

pub const GRAPH6_MAX_ORDER: usize = 62;

fn err(offset: usize, kind: Graph6ErrorKind) -> GraphError {
    GraphError::Graph6 { offset, kind }
}

fn payload_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Decodes one graph6 line. A trailing `\n` or `\r\n` is ignored.
pub fn parse_graph6(bytes: &[u8]) -> Result<Graph, GraphError> {
    let bytes = bytes
        .strip_suffix(b"\n")
        .map(|b| b.strip_suffix(b"\r").unwrap_or(b))
        .unwrap_or(bytes);
    let (&header, payload) = bytes
        .split_first()
        .ok_or(err(0, Graph6ErrorKind::Empty))?;
    if !(63..=63 + GRAPH6_MAX_ORDER as u8).contains(&header) {
        return Err(err(0, Graph6ErrorKind::Header(header)));
    }
    let n = (header - 63) as usize;
    let need = payload_len(n);
    if let Some(pos) = payload.iter().position(|b| !(63..=126).contains(b)) {
        return Err(err(pos + 1, Graph6ErrorKind::ByteRange(payload[pos])));
    }
    if payload.len() < need {
        return Err(err(bytes.len(), Graph6ErrorKind::Truncated));
    }
    if payload.len() > need {
        return Err(err(need + 1, Graph6ErrorKind::Trailing));
    }

    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = payload[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.insert_edge(i, j)?;
            }
            k += 1;
        }
    }
    if k % 6 != 0 {
        let last = payload[need - 1] - 63;
        if last & ((1 << (6 - k % 6)) - 1) != 0 {
            return Err(err(need, Graph6ErrorKind::Padding));
        }
    }
    Ok(g)
}

/// Encodes a graph by local index order (labels are not recorded).
pub fn encode_graph6(g: &Graph) -> Result<String, GraphError> {
    let n = g.order();
    if n > GRAPH6_MAX_ORDER {
        return Err(err(0, Graph6ErrorKind::TooLarge(n)));
    }
    let mut out = Vec::with_capacity(1 + payload_len(n));
    out.push(n as u8 + 63);
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            k += 1;
            if k % 6 == 0 {
                out.push(acc + 63);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push((acc << (6 - k % 6)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

/// Parses a newline-separated corpus. Blank lines are skipped. Errors carry
/// the byte offset within the offending line.
pub fn parse_graph6_corpus(text: &str) -> Result<Vec<Graph>, (usize, GraphError)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_graph6(l.trim_end().as_bytes()).map_err(|e| (i + 1, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, star};
    use proptest::prelude::*;

    #[test]
    fn decodes_complete_graphs() {
        // Header 'C' is n = 4; '~' sets all six pair bits.
        assert_eq!(parse_graph6(b"C~").unwrap(), complete(4).unwrap());
        assert_eq!(parse_graph6(b"Bw").unwrap(), complete(3).unwrap());
    }

    #[test]
    fn decodes_empty_pair() {
        let g = parse_graph6(b"A?").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn cf_round_trips_and_is_a_star() {
        let g = parse_graph6(b"CF\n").unwrap();
        assert_eq!(g.edges(), vec![(0, 3), (1, 3), (2, 3)]);
        assert_eq!(encode_graph6(&g).unwrap(), "CF");
        assert_eq!(g.degrees(), vec![1, 1, 1, 3]);
        let s = star(4).unwrap();
        assert_eq!(s.degrees(), vec![3, 1, 1, 1]);
    }

    #[test]
    fn reports_offsets() {
        assert_eq!(parse_graph6(b""), Err(err(0, Graph6ErrorKind::Empty)));
        assert_eq!(
            parse_graph6(b"~"),
            Err(err(0, Graph6ErrorKind::Header(b'~')))
        );
        assert_eq!(parse_graph6(b"D?"), Err(err(2, Graph6ErrorKind::Truncated)));
        assert_eq!(
            parse_graph6(b"C F"),
            Err(err(1, Graph6ErrorKind::ByteRange(b' ')))
        );
        assert_eq!(parse_graph6(b"A??"), Err(err(2, Graph6ErrorKind::Trailing)));
        assert_eq!(parse_graph6(b"A@"), Err(err(1, Graph6ErrorKind::Padding)));
    }

    #[test]
    fn single_vertex_and_null_graph() {
        assert_eq!(parse_graph6(b"@").unwrap().order(), 1);
        assert_eq!(encode_graph6(&Graph::empty(1).unwrap()).unwrap(), "@");
        assert_eq!(parse_graph6(b"?").unwrap().order(), 0);
    }

    #[test]
    fn corpus_lines() {
        let gs = parse_graph6_corpus("A_\n\nCF\nC~\n").unwrap();
        assert_eq!(gs.len(), 3);
        let (line, _) = parse_graph6_corpus("A_\nC\n").unwrap_err();
        assert_eq!(line, 2);
    }

    proptest! {
        #[test]
        fn round_trip(n in 0usize..=62, seed in any::<u64>(), p in 0.0f64..=1.0) {
            let g = if n == 0 { Graph::empty(0).unwrap() } else {
                crate::generators::random_gnp(n, p, seed).unwrap()
            };
            let s = encode_graph6(&g).unwrap();
            prop_assert_eq!(parse_graph6(s.as_bytes()).unwrap(), g);
        }
    }
}
