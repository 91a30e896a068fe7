//! Plain-text edge lists, pair files and terminal files.
//!
//! Edge lists hold one `u v` per line; pair files also hold `u v`; terminal
//! files hold one `u` per line. `#` starts a comment. Input labels may be any
//! nonnegative integers; they are relabeled densely in ascending order and the
//! map is kept so results can be written back in the original labels.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{EdgeSet, Graph, Vertex};
use crate::error::{Result, SpannerError};

#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub labels: LabelMap,
    /// Parallel edges dropped while loading.
    pub duplicates: usize,
}

/// Dense id ↔ original label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    original: Vec<u64>,
    dense: HashMap<u64, Vertex>,
}

impl LabelMap {
    pub fn identity(n: usize) -> LabelMap {
        LabelMap::from_labels((0..n as u64).collect())
    }

    fn from_labels(original: Vec<u64>) -> LabelMap {
        let dense = original.iter().enumerate().map(|(i, &l)| (l, i as Vertex)).collect();
        LabelMap { original, dense }
    }

    pub fn is_identity(&self) -> bool {
        self.original.iter().enumerate().all(|(i, &l)| l == i as u64)
    }

    pub fn original(&self, v: Vertex) -> u64 {
        self.original[v as usize]
    }

    pub fn dense(&self, label: u64) -> Option<Vertex> {
        self.dense.get(&label).copied()
    }

    pub fn len(&self) -> usize {
        self.original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.original.is_empty()
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# dense original")?;
        for (i, l) in self.original.iter().enumerate() {
            writeln!(out, "{i} {l}")?;
        }
        Ok(())
    }
}

fn tokens<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, Vec<u64>)>> {
    reader.lines().enumerate().filter_map(|(i, line)| {
        let line = match line {
            Ok(l) => l,
            Err(e) => return Some(Err(e.into())),
        };
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            return None;
        }
        let parsed: std::result::Result<Vec<u64>, _> = body.split_whitespace().map(str::parse).collect();
        Some(match parsed {
            Ok(v) => Ok((i + 1, v)),
            Err(e) => Err(SpannerError::Parse { line: i + 1, message: e.to_string() }),
        })
    })
}

/// Reads an edge list. A header line `n <count>` is not supported; isolated
/// vertices can be declared by listing them alone on a line.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph> {
    let mut raw = Vec::new();
    let mut isolated = Vec::new();
    for item in tokens(reader) {
        let (line, t) = item?;
        match t.as_slice() {
            [u] => isolated.push(*u),
            [u, v] => {
                if u == v {
                    return Err(SpannerError::Parse { line, message: format!("self-loop at {u}") });
                }
                raw.push((*u, *v));
            }
            _ => {
                return Err(SpannerError::Parse {
                    line,
                    message: "expected `u v`".into(),
                })
            }
        }
    }
    let mut labels: Vec<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).chain(isolated).collect();
    labels.sort_unstable();
    labels.dedup();
    let map = LabelMap::from_labels(labels);
    let mut edges: Vec<(Vertex, Vertex)> = raw
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (map.dense[&u], map.dense[&v]);
            (a.min(b), a.max(b))
        })
        .collect();
    let before = edges.len();
    edges.sort_unstable();
    edges.dedup();
    let graph = Graph::from_edges(map.len(), &edges)?;
    Ok(LoadedGraph { graph, labels: map, duplicates: before - edges.len() })
}

pub fn write_edges<W: Write>(mut out: W, edges: &EdgeSet, labels: &LabelMap) -> Result<()> {
    for (u, v) in edges.iter() {
        writeln!(out, "{} {}", labels.original(u), labels.original(v))?;
    }
    Ok(())
}

/// Edges, then isolated vertices on lines of their own so `n` survives a
/// round trip.
pub fn write_graph<W: Write>(mut out: W, g: &Graph, labels: &LabelMap) -> Result<()> {
    write_edges(&mut out, &g.edge_set(), labels)?;
    for v in 0..g.n() as Vertex {
        if g.degree(v) == 0 {
            writeln!(out, "{}", labels.original(v))?;
        }
    }
    Ok(())
}

fn lookup(labels: &LabelMap, line: usize, l: u64) -> Result<Vertex> {
    labels.dense(l).ok_or_else(|| SpannerError::Parse {
        line,
        message: format!("vertex {l} is not in the graph"),
    })
}

pub fn read_pairs<R: BufRead>(reader: R, labels: &LabelMap) -> Result<Vec<(Vertex, Vertex)>> {
    let mut out = Vec::new();
    for item in tokens(reader) {
        let (line, t) = item?;
        match t.as_slice() {
            [u, v] => out.push((lookup(labels, line, *u)?, lookup(labels, line, *v)?)),
            _ => return Err(SpannerError::Parse { line, message: "expected `u v`".into() }),
        }
    }
    Ok(out)
}

pub fn read_terminals<R: BufRead>(reader: R, labels: &LabelMap) -> Result<Vec<Vertex>> {
    let mut out = Vec::new();
    for item in tokens(reader) {
        let (line, t) = item?;
        match t.as_slice() {
            [u] => out.push(lookup(labels, line, *u)?),
            _ => return Err(SpannerError::Parse { line, message: "expected one vertex".into() }),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabels_sparse_ids_and_counts_duplicates() {
        let text = "# comment\n10 20\n20 30 # trailing\n\n30 10\n20 10\n";
        let loaded = read_edge_list(text.as_bytes()).unwrap();
        assert_eq!(loaded.graph.n(), 3);
        assert_eq!(loaded.graph.m(), 3);
        assert_eq!(loaded.duplicates, 1);
        assert_eq!(loaded.labels.original(2), 30);
        assert!(!loaded.labels.is_identity());
        let mut buf = Vec::new();
        write_graph(&mut buf, &loaded.graph, &loaded.labels).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "10 20\n10 30\n20 30\n");
    }

    #[test]
    fn rejects_self_loops_and_garbage() {
        assert!(matches!(
            read_edge_list("1 2\n3 3\n".as_bytes()),
            Err(SpannerError::Parse { line: 2, .. })
        ));
        assert!(read_edge_list("1 x\n".as_bytes()).is_err());
    }

    #[test]
    fn pairs_and_terminals_use_the_label_map() {
        let loaded = read_edge_list("5 7\n7 9\n".as_bytes()).unwrap();
        let pairs = read_pairs("5 9\n".as_bytes(), &loaded.labels).unwrap();
        assert_eq!(pairs, vec![(0, 2)]);
        let terms = read_terminals("9\n5\n9\n".as_bytes(), &loaded.labels).unwrap();
        assert_eq!(terms, vec![0, 2]);
        assert!(read_terminals("4\n".as_bytes(), &loaded.labels).is_err());
    }
}
