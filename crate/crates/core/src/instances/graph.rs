use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Users posting on forums; `edges` are `(user, forum, weight)` with unique
/// pairs in ascending order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    pub users: usize,
    pub forums: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

/// A directed weighted graph without self-loops; `edges` are
/// `(source, target, weight)` with unique pairs in ascending order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SocialGraph {
    pub nodes: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

/// Sums duplicate pairs and sorts.
fn aggregate(edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Vec<(usize, usize, f64)> {
    let mut map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (a, b, w) in edges {
        *map.entry((a, b)).or_insert(0.0) += w;
    }
    map.into_iter().map(|((a, b), w)| (a, b, w)).collect()
}

impl BipartiteGraph {
    pub fn from_edges(edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let edges = aggregate(edges);
        validate_weights(&edges)?;
        let users = edges.iter().map(|e| e.0 + 1).max().unwrap_or(0);
        let forums = edges.iter().map(|e| e.1 + 1).max().unwrap_or(0);
        Ok(BipartiteGraph { users, forums, edges })
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of distinct forums each user posted on.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.users];
        for &(u, _, w) in &self.edges {
            if w > 0.0 {
                d[u] += 1;
            }
        }
        d
    }

    /// Users `0..users` and forums `0..forums`, keeping edges between them.
    pub fn subgraph(&self, users: usize, forums: usize) -> BipartiteGraph {
        let users = users.min(self.users);
        let forums = forums.min(self.forums);
        BipartiteGraph {
            users,
            forums,
            edges: self.edges.iter().copied().filter(|&(u, f, _)| u < users && f < forums).collect(),
        }
    }

    /// Dense `users × forums` weight rows.
    pub fn weight_rows(&self) -> Vec<Vec<f64>> {
        let mut w = vec![vec![0.0; self.forums]; self.users];
        for &(u, f, x) in &self.edges {
            w[u][f] = x;
        }
        w
    }
}

impl SocialGraph {
    /// Self-loops are dropped.
    pub fn from_edges(edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let edges = aggregate(edges.into_iter().filter(|e| e.0 != e.1));
        validate_weights(&edges)?;
        let nodes = edges.iter().map(|e| e.0.max(e.1) + 1).max().unwrap_or(0);
        Ok(SocialGraph { nodes, edges })
    }

    /// Adds the reverse of every edge.
    pub fn symmetrized(&self) -> SocialGraph {
        SocialGraph {
            nodes: self.nodes,
            edges: aggregate(self.edges.iter().flat_map(|&(a, b, w)| [(a, b, w), (b, a, w)])),
        }
    }

    /// Dense row-major weights with zero diagonal.
    pub fn weight_rows(&self) -> Vec<Vec<f64>> {
        let mut w = vec![vec![0.0; self.nodes]; self.nodes];
        for &(a, b, x) in &self.edges {
            w[a][b] = x;
        }
        w
    }
}

fn validate_weights(edges: &[(usize, usize, f64)]) -> Result<()> {
    match edges.iter().find(|e| !(e.2 >= 0.0) || !e.2.is_finite()) {
        Some(e) => Err(Error::InvalidParameter(format!("edge ({}, {}) has weight {}", e.0, e.1, e.2))),
        None => Ok(()),
    }
}

/// Parses whitespace-separated `src dst [weight]` lines. Blank lines and
/// lines starting with `#` or `%` are skipped, a missing weight is `1`, and
/// further columns are ignored.
pub fn parse_edge_list<R: BufRead>(reader: R, source: &Path) -> Result<Vec<(usize, usize, f64)>> {
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let err = |message: String| Error::Parse { path: source.to_path_buf(), line: lineno, message };
        let mut fields = trimmed.split_whitespace();
        let mut index = |name: &str| -> Result<usize> {
            let tok = fields.next().ok_or_else(|| err(format!("missing {name}")))?;
            tok.parse().map_err(|_| err(format!("{name} `{tok}` is not a non-negative integer")))
        };
        let src = index("source")?;
        let dst = index("target")?;
        let weight = match fields.next() {
            None => 1.0,
            Some(tok) => {
                let w: f64 = tok.parse().map_err(|_| err(format!("weight `{tok}` is not a number")))?;
                if !(w >= 0.0) || !w.is_finite() {
                    return Err(err(format!("weight {w} must be finite and >= 0")));
                }
                w
            }
        };
        edges.push((src, dst, weight));
    }
    Ok(edges)
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    Ok(BufReader::new(file))
}

/// Loads a user–forum edge list, summing repeated pairs.
pub fn load_bipartite(path: impl AsRef<Path>) -> Result<BipartiteGraph> {
    let path = path.as_ref();
    BipartiteGraph::from_edges(parse_edge_list(open(path)?, path)?)
}

/// Loads a directed edge list, summing repeated pairs and dropping
/// self-loops.
pub fn load_social(path: impl AsRef<Path>) -> Result<SocialGraph> {
    let path = path.as_ref();
    SocialGraph::from_edges(parse_edge_list(open(path)?, path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Vec<(usize, usize, f64)>> {
        parse_edge_list(text.as_bytes(), Path::new("mem"))
    }

    #[test]
    fn duplicates_are_summed() {
        let g = BipartiteGraph::from_edges(parse("0 0 3\n0 0 2\n").unwrap()).unwrap();
        assert_eq!(g.edges, vec![(0, 0, 5.0)]);
        assert_eq!((g.users, g.forums), (1, 1));
    }

    #[test]
    fn empty_input_is_empty_graph() {
        let g = BipartiteGraph::from_edges(parse("").unwrap()).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.users, 0);
    }

    #[test]
    fn comments_defaults_and_extra_columns() {
        let e = parse("% header\n# more\n\n1 2\n3 4 2.5 1082040961\n").unwrap();
        assert_eq!(e, vec![(1, 2, 1.0), (3, 4, 2.5)]);
    }

    #[test]
    fn malformed_line_reports_number() {
        match parse("0 1 1\n0 x 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("0 1 -2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn social_drops_self_loops() {
        let g = SocialGraph::from_edges(vec![(0, 0, 4.0), (0, 1, 1.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(g.edges, vec![(0, 1, 2.0)]);
        assert_eq!(g.symmetrized().edges, vec![(0, 1, 2.0), (1, 0, 2.0)]);
    }
}
