//! graph6 reader and writer.
//!
//! Only the dense graph6 form is supported, for `1 <= n <= 64`. sparse6
//! (`:`) and digraph6 (`&`) records are rejected.

use std::io::BufRead;

use thiserror::Error;

use crate::graph::Graph;

const HEADER: &[u8] = b">>graph6<<";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum G6Error {
    #[error("empty graph6 record")]
    Empty,
    #[error("byte {byte} at offset {offset} outside 63..=126")]
    ByteOutOfRange { offset: usize, byte: u8 },
    #[error("record truncated at offset {offset}: need {needed} more payload bytes")]
    Truncated { offset: usize, needed: usize },
    #[error("nonzero padding bits in byte at offset {offset}")]
    NonzeroPadding { offset: usize },
    #[error("unexpected trailing bytes from offset {offset}")]
    TrailingBytes { offset: usize },
    #[error("vertex count {n} at offset {offset} outside 1..=64")]
    VertexCount { offset: usize, n: usize },
    #[error("long size prefix at offset {offset} used for n = {n}; graph6 requires the short form")]
    NonCanonicalSize { offset: usize, n: usize },
    #[error("{format} records are not supported (offset {offset})")]
    Unsupported { offset: usize, format: &'static str },
    #[error("line {line}: {source}")]
    Line { line: usize, source: Box<G6Error> },
    #[error("read error: {0}")]
    Io(String),
}

/// Decodes one graph6 record (without its newline).
pub fn decode_graph6(line: &[u8]) -> Result<Graph, G6Error> {
    let Some(&first) = line.first() else {
        return Err(G6Error::Empty);
    };
    match first {
        b':' => return Err(G6Error::Unsupported { offset: 0, format: "sparse6" }),
        b'&' => return Err(G6Error::Unsupported { offset: 0, format: "digraph6" }),
        _ => {}
    }
    if let Some((offset, &byte)) =
        line.iter().enumerate().find(|(_, &b)| !(63..=126).contains(&b))
    {
        return Err(G6Error::ByteOutOfRange { offset, byte });
    }

    let (n, body_start) = if first < 126 {
        ((first - 63) as usize, 1)
    } else {
        if line.len() > 1 && line[1] == 126 {
            // eight-byte form: n >= 258144
            return Err(G6Error::VertexCount { offset: 0, n: usize::MAX });
        }
        if line.len() < 4 {
            return Err(G6Error::Truncated { offset: line.len(), needed: 4 - line.len() });
        }
        let n = line[1..4].iter().fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize);
        if n <= 62 {
            return Err(G6Error::NonCanonicalSize { offset: 0, n });
        }
        (n, 4)
    };
    if n == 0 || n > 64 {
        return Err(G6Error::VertexCount { offset: 0, n });
    }

    let nbits = n * (n - 1) / 2;
    let nbytes = nbits.div_ceil(6);
    let body = &line[body_start..];
    if body.len() < nbytes {
        return Err(G6Error::Truncated { offset: line.len(), needed: nbytes - body.len() });
    }
    if body.len() > nbytes {
        return Err(G6Error::TrailingBytes { offset: body_start + nbytes });
    }
    let pad = nbytes * 6 - nbits;
    if pad > 0 && (body[nbytes - 1] - 63) & ((1u8 << pad) - 1) != 0 {
        return Err(G6Error::NonzeroPadding { offset: body_start + nbytes - 1 });
    }

    let mut rows = vec![0u64; n];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let group = body[k / 6] - 63;
            if group >> (5 - k % 6) & 1 == 1 {
                rows[i] |= 1u64 << j;
                rows[j] |= 1u64 << i;
            }
            k += 1;
        }
    }
    Ok(Graph::from_adjacency(rows).expect("decoded rows are symmetric and in range"))
}

/// Encodes `g` as a graph6 record (without newline).
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::with_capacity(4 + (n * n).div_ceil(12));
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push((n >> shift & 63) as u8 + 63);
        }
    }
    let mut group = 0u8;
    let mut filled = 0;
    for j in 1..n {
        let row = g.neighbors(j);
        for i in 0..j {
            group = group << 1 | row.contains(i) as u8;
            filled += 1;
            if filled == 6 {
                out.push(group + 63);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((group << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

/// Newline-framed graph6 stream reader. A leading `>>graph6<<` header on
/// any line is skipped, as are blank lines.
pub struct Graph6Reader<R> {
    inner: R,
    line: usize,
    buf: Vec<u8>,
}

impl<R: BufRead> Graph6Reader<R> {
    pub fn new(inner: R) -> Self {
        Graph6Reader { inner, line: 0, buf: Vec::new() }
    }
}

impl<R: BufRead> Iterator for Graph6Reader<R> {
    type Item = Result<Graph, G6Error>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.inner.read_until(b'\n', &mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(G6Error::Io(e.to_string()))),
            }
            self.line += 1;
            let mut rec: &[u8] = &self.buf;
            while let Some((&last, rest)) = rec.split_last() {
                if last == b'\n' || last == b'\r' {
                    rec = rest;
                } else {
                    break;
                }
            }
            if let Some(stripped) = rec.strip_prefix(HEADER) {
                rec = stripped;
            }
            if rec.is_empty() {
                continue;
            }
            let line = self.line;
            return Some(
                decode_graph6(rec).map_err(|e| G6Error::Line { line, source: Box::new(e) }),
            );
        }
    }
}

/// Reads every record of a graph6 stream.
pub fn read_graph6<R: BufRead>(reader: R) -> Result<Vec<Graph>, G6Error> {
    Graph6Reader::new(reader).collect()
}
