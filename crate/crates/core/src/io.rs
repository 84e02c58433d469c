//! Plain-text edge-list format.
//!
//! ```text
//! # optional comments and blank lines anywhere
//! n m
//! u v      (m lines, tail then head, 0-indexed)
//! ```
//!
//! `write_digraph` emits edges in sorted order with single `\n` line endings,
//! so equal graphs always serialize to identical bytes.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::digraph::Digraph;
use crate::product::ProductLabeling;

/// Parse failures; every positional variant carries a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: syntax error: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("line {line}: loop edge")]
    LoopEdge { line: usize },
    #[error("line {line}: edge forms a digon with an earlier edge")]
    DigonPair { line: usize },
    #[error("line {line}: duplicate edge")]
    DuplicateEdge { line: usize },
    #[error("header declares {declared} edges but {actual} were given")]
    CountMismatch { declared: usize, actual: usize },
    #[error("line {line}: vertex id out of range")]
    VertexOutOfRange { line: usize },
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::SyntaxError { line, .. }
            | ParseError::LoopEdge { line }
            | ParseError::DigonPair { line }
            | ParseError::DuplicateEdge { line }
            | ParseError::VertexOutOfRange { line } => Some(*line),
            ParseError::CountMismatch { .. } => None,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::SyntaxError {
        line,
        message: message.into(),
    }
}

fn two_numbers(line: usize, text: &str) -> Result<(usize, usize), ParseError> {
    let mut fields = text.split_whitespace();
    let mut next = |what: &str| -> Result<usize, ParseError> {
        let field = fields
            .next()
            .ok_or_else(|| syntax(line, format!("missing {what}")))?;
        field
            .parse()
            .map_err(|_| syntax(line, format!("{what} {field:?} is not a non-negative integer")))
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if fields.next().is_some() {
        return Err(syntax(line, "expected exactly two fields"));
    }
    Ok((a, b))
}

pub fn parse_digraph(text: &str) -> Result<Digraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or_else(|| syntax(1, "missing header"))?;
    let (n, declared) = two_numbers(header_line, header)?;
    if n == 0 {
        return Err(syntax(header_line, "vertex count must be positive"));
    }

    let mut out = vec![FixedBitSet::with_capacity(n); n];
    let mut actual = 0;
    for (line, body) in lines {
        let (u, v) = two_numbers(line, body)?;
        if u >= n || v >= n {
            return Err(ParseError::VertexOutOfRange { line });
        }
        if u == v {
            return Err(ParseError::LoopEdge { line });
        }
        if out[u].contains(v) {
            return Err(ParseError::DuplicateEdge { line });
        }
        if out[v].contains(u) {
            return Err(ParseError::DigonPair { line });
        }
        out[u].insert(v);
        actual += 1;
    }
    if actual != declared {
        return Err(ParseError::CountMismatch { declared, actual });
    }
    Ok(Digraph::from_out_rows(n, out))
}

pub fn write_digraph(g: &Digraph) -> String {
    let mut s = String::with_capacity(8 + 6 * g.edge_count());
    let _ = writeln!(s, "{} {}", g.vertex_count(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(s, "{} {}", e.tail, e.head);
    }
    s
}

/// Table of `product d h` rows, one per product vertex.
pub fn write_labeling(labeling: &ProductLabeling) -> String {
    let mut s = String::from("# product d h\n");
    for (p, d, h) in labeling.rows() {
        let _ = writeln!(s, "{p} {d} {h}");
    }
    s
}

/// Pretty JSON with a trailing newline. Field order follows declaration
/// order, so equal values render to identical bytes.
pub fn render_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize infallibly");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let c3 = parse_digraph("3 3\n0 1\n1 2\n2 0\n").unwrap();
        assert_eq!(c3, Digraph::cycle(3).unwrap());
        assert_eq!(
            parse_digraph("3 2\n0 1\n1 0\n"),
            Err(ParseError::DigonPair { line: 3 })
        );
        let one = parse_digraph("2 1\n0 1\n# comment\n").unwrap();
        assert_eq!(one, Digraph::from_edges(2, &[(0, 1)]).unwrap());
    }

    #[test]
    fn parse_diagnostics() {
        assert_eq!(parse_digraph("3 1\n\n1 1\n"), Err(ParseError::LoopEdge { line: 3 }));
        assert_eq!(
            parse_digraph("3 2\n0 1\n0 1\n"),
            Err(ParseError::DuplicateEdge { line: 3 })
        );
        assert_eq!(
            parse_digraph("3 1\n0 3\n"),
            Err(ParseError::VertexOutOfRange { line: 2 })
        );
        assert_eq!(
            parse_digraph("3 2\n0 1\n"),
            Err(ParseError::CountMismatch { declared: 2, actual: 1 })
        );
        assert_eq!(
            parse_digraph("3 0\n0 1\n"),
            Err(ParseError::CountMismatch { declared: 0, actual: 1 })
        );
        for bad in ["", "# only\n", "3\n", "x 1\n", "3 0 0\n", "0 0\n", "3 1\n0 -1\n"] {
            let err = parse_digraph(bad).unwrap_err();
            assert!(matches!(err, ParseError::SyntaxError { .. }), "{bad:?} -> {err:?}");
            assert!(err.line().is_some());
        }
    }

    #[test]
    fn write_examples() {
        assert_eq!(write_digraph(&Digraph::cycle(3).unwrap()), "3 3\n0 1\n1 2\n2 0\n");
        assert_eq!(write_digraph(&Digraph::single_vertex()), "1 0\n");
    }

    #[test]
    fn labeling_table() {
        assert_eq!(
            write_labeling(&ProductLabeling::new(2, 2)),
            "# product d h\n0 0 0\n1 0 1\n2 1 0\n3 1 1\n"
        );
    }
}
