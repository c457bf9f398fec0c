//! Brute-force reference implementations used to check the engine.
//!
//! Deliberately naive: distances by Floyd-Warshall, shortest paths by
//! explicit enumeration, networks straight from their definitions. Only
//! std is used so other test targets can include this file by path.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

const INF: u32 = u32::MAX;

fn distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<u32>> {
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b) in edges {
        if a != b {
            d[a][b] = 1;
            d[b][a] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != INF && d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Every shortest path from `s` to `t`, as node sequences.
fn shortest_paths(adj: &[BTreeSet<usize>], d: &[Vec<u32>], s: usize, t: usize) -> Vec<Vec<usize>> {
    fn walk(
        adj: &[BTreeSet<usize>],
        d: &[Vec<u32>],
        t: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let cur = *path.last().unwrap();
        if cur == t {
            out.push(path.clone());
            return;
        }
        for &next in &adj[cur] {
            if d[next][t] != INF && d[next][t] + 1 == d[cur][t] {
                path.push(next);
                walk(adj, d, t, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    if d[s][t] != INF {
        walk(adj, d, t, &mut vec![s], &mut out);
    }
    out
}

/// Normalized betweenness of an undirected graph on nodes `0..n`: for every
/// unordered pair, the share of its shortest paths passing through each
/// interior node, divided by `(n-1)(n-2)/2`.
pub fn betweenness(n: usize, edges: &[(usize, usize)]) -> Vec<f64> {
    let mut b = vec![0.0; n];
    if n < 3 {
        return b;
    }
    let mut adj = vec![BTreeSet::new(); n];
    for &(a, c) in edges {
        if a != c {
            adj[a].insert(c);
            adj[c].insert(a);
        }
    }
    let d = distances(n, edges);
    for s in 0..n {
        for t in s + 1..n {
            let paths = shortest_paths(&adj, &d, s, t);
            if paths.is_empty() {
                continue;
            }
            let total = paths.len() as f64;
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    b[v] += 1.0 / total;
                }
            }
        }
    }
    let norm = ((n - 1) * (n - 2)) as f64 / 2.0;
    b.iter().map(|x| x / norm).collect()
}

pub fn centralization(b: &[f64]) -> f64 {
    if b.len() < 2 {
        return 0.0;
    }
    let max = b.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    b.iter().map(|x| max - x).sum::<f64>() / (b.len() - 1) as f64
}

pub fn density(n: usize, m: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    2.0 * m as f64 / (n * (n - 1)) as f64
}

/// Nodes and weighted edges keyed by ordered endpoint pairs.
pub type Graph = (BTreeSet<String>, BTreeMap<(String, String), u32>);

/// One note: id, author and the words it contains.
pub struct RefNote {
    pub id: String,
    pub author: String,
    pub words: BTreeSet<String>,
}

fn key(a: &str, b: &str) -> (String, String) {
    if a < b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Words are linked by the number of notes containing both.
pub fn word_network(notes: &[RefNote]) -> Graph {
    let nodes: BTreeSet<String> = notes.iter().flat_map(|n| n.words.iter().cloned()).collect();
    let mut edges = BTreeMap::new();
    for a in &nodes {
        for b in &nodes {
            if a < b {
                let w = notes
                    .iter()
                    .filter(|n| n.words.contains(a) && n.words.contains(b))
                    .count() as u32;
                if w > 0 {
                    edges.insert(key(a, b), w);
                }
            }
        }
    }
    (nodes, edges)
}

/// Notes are linked by the number of words they share.
pub fn note_network(notes: &[RefNote]) -> Graph {
    let nodes = notes.iter().map(|n| n.id.clone()).collect();
    let mut edges = BTreeMap::new();
    for (i, x) in notes.iter().enumerate() {
        for y in &notes[i + 1..] {
            let w = x.words.intersection(&y.words).count() as u32;
            if w > 0 {
                edges.insert(key(&x.id, &y.id), w);
            }
        }
    }
    (nodes, edges)
}

/// Agents are linked by the number of distinct words both have used.
pub fn agent_network(notes: &[RefNote]) -> Graph {
    let mut used: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for n in notes {
        used.entry(n.author.clone())
            .or_default()
            .extend(n.words.iter().cloned());
    }
    let nodes = used.keys().cloned().collect();
    let mut edges = BTreeMap::new();
    for (a, wa) in &used {
        for (b, wb) in &used {
            if a < b {
                let w = wa.intersection(wb).count() as u32;
                if w > 0 {
                    edges.insert(key(a, b), w);
                }
            }
        }
    }
    (nodes, edges)
}

/// Connected components as sorted node lists, by repeated flood fill.
pub fn components(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let d = distances(n, edges);
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let comp: BTreeSet<usize> = (0..n).filter(|&t| d[s][t] != INF).collect();
        for &t in &comp {
            seen[t] = true;
        }
        out.push(comp);
    }
    out
}
