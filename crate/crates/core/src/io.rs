//! Edge-list fixtures and result documents.
//!
//! Edge-list format: the first non-comment line holds the vertex count `n`,
//! followed by `n - 1` lines `a b` with 0-based ids. Lines starting with `#`
//! are comments; blank lines are ignored.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{HausdorffResult, PairSet};
use crate::tree::{Tree, TreeError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing header line with the vertex count")]
    MissingHeader,
    #[error("line {line}, column {column}: bad header: {message}")]
    BadHeader {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: expected a non-negative integer, found {token:?}")]
    BadToken {
        line: usize,
        column: usize,
        token: String,
    },
    #[error("line {line}: expected exactly two vertex ids, found {found}")]
    BadArity { line: usize, found: usize },
    #[error("expected {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("invalid tree: {0}")]
    Tree(#[from] TreeError),
}

/// `(1-based column, token)` for each whitespace-separated token.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Tree, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        });

    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let htoks = tokens(header);
    if htoks.len() != 1 {
        return Err(ParseError::BadHeader {
            line: hline,
            column: htoks.get(1).map_or(1, |t| t.0),
            message: format!(
                "expected a single vertex count, found {} tokens",
                htoks.len()
            ),
        });
    }
    let (hcol, htok) = htoks[0];
    let n: usize = htok.parse().map_err(|_| ParseError::BadHeader {
        line: hline,
        column: hcol,
        message: format!("{htok:?} is not a vertex count"),
    })?;
    if n == 0 {
        return Err(ParseError::BadHeader {
            line: hline,
            column: hcol,
            message: "vertex count must be positive".into(),
        });
    }

    let mut edges = Vec::with_capacity(n - 1);
    for (line, body) in lines {
        let toks = tokens(body);
        if toks.len() != 2 {
            return Err(ParseError::BadArity {
                line,
                found: toks.len(),
            });
        }
        let mut ids = [0 as Vertex; 2];
        for (slot, &(column, tok)) in ids.iter_mut().zip(&toks) {
            *slot = tok.parse().map_err(|_| ParseError::BadToken {
                line,
                column,
                token: tok.to_string(),
            })?;
        }
        edges.push((ids[0], ids[1]));
    }
    if edges.len() != n - 1 {
        return Err(ParseError::EdgeCount {
            expected: n - 1,
            found: edges.len(),
        });
    }
    Ok(Tree::new(n, &edges)?)
}

/// Header plus one `a b` line per edge, `\n`-terminated, no comments.
pub fn write_edge_list(tree: &Tree) -> String {
    let mut out = format!("{}\n", tree.len());
    for &(a, b) in tree.edges() {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

/// Serialized form of a [`HausdorffResult`] plus the verifier's cover distance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub distance: u32,
    pub root1: Vertex,
    pub root2: Vertex,
    pub swapped: bool,
    /// `[first tree vertex, second tree vertex]`, sorted by first coordinate.
    pub mapping: Vec<[Vertex; 2]>,
    pub cover_distance: u32,
}

impl ResultDocument {
    pub fn new(result: &HausdorffResult, cover_distance: u32) -> Self {
        ResultDocument {
            distance: result.distance,
            root1: result.root1,
            root2: result.root2,
            swapped: result.swapped,
            mapping: result.mapping.iter().map(|(v, w)| [v, w]).collect(),
            cover_distance,
        }
    }

    pub fn to_result(&self) -> HausdorffResult {
        HausdorffResult {
            distance: self.distance,
            root1: self.root1,
            root2: self.root2,
            mapping: self
                .mapping
                .iter()
                .map(|&[v, w]| (v, w))
                .collect::<PairSet>(),
            swapped: self.swapped,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{hausdorff_distance, verify_mapping};

    #[test]
    fn single_vertex_document() {
        assert_eq!(parse_edge_list("1\n"), Ok(Tree::single_vertex()));
    }

    #[test]
    fn fig5_t2_document() {
        let t = parse_edge_list("8\n0 3\n1 3\n2 3\n3 7\n4 5\n5 6\n6 7\n").unwrap();
        assert_eq!(t.len(), 8);
        assert_eq!(t.neighbors(3), &[0, 1, 2, 7]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let t = parse_edge_list("# a path\n3\n\n0 1\n# middle\n1 2\n").unwrap();
        assert_eq!(t, Tree::path(3).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_edge_list("3\n0 1\n"),
            Err(ParseError::EdgeCount {
                expected: 2,
                found: 1
            })
        );
        assert_eq!(parse_edge_list("# only\n"), Err(ParseError::MissingHeader));
        assert!(matches!(
            parse_edge_list("x\n"),
            Err(ParseError::BadHeader {
                line: 1,
                column: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_edge_list("0\n"),
            Err(ParseError::BadHeader { line: 1, .. })
        ));
        assert_eq!(
            parse_edge_list("3\n0 1\n1  z\n"),
            Err(ParseError::BadToken {
                line: 3,
                column: 4,
                token: "z".into()
            })
        );
        assert_eq!(
            parse_edge_list("3\n0 1 2\n1 2\n"),
            Err(ParseError::BadArity { line: 2, found: 3 })
        );
        assert_eq!(
            parse_edge_list("4\n0 1\n1 2\n2 0\n"),
            Err(ParseError::Tree(TreeError::Disconnected))
        );
    }

    #[test]
    fn writer_is_bit_exact() {
        let t = Tree::new(4, &[(3, 1), (1, 0), (2, 1)]).unwrap();
        assert_eq!(write_edge_list(&t), "4\n0 1\n1 2\n1 3\n");
    }

    #[test]
    fn result_document_round_trip() {
        let a = Tree::path(5).unwrap();
        let b = Tree::star(5).unwrap();
        let r = hausdorff_distance(&a, &b);
        let cover = verify_mapping(&a, &b, &r).cover_distance.unwrap();
        let doc = ResultDocument::new(&r, cover);
        let json = doc.to_json();
        let back = ResultDocument::from_json(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_result(), r);
        // stable key order
        let keys: Vec<usize> = [
            "distance",
            "root1",
            "root2",
            "swapped",
            "mapping",
            "cover_distance",
        ]
        .iter()
        .map(|k| json.find(&format!("\"{k}\"")).unwrap())
        .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }
}
