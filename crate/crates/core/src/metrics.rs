//! Structural metrics over a [`Network`].
//!
//! Betweenness is computed on the binarized graph: weights never affect
//! shortest paths. Values are normalized by `(n-1)(n-2)/2`, the number of
//! node pairs excluding the node itself, where `n` counts every node of the
//! network including isolated ones. Centralization is the Freeman sum
//! `Σ (b_max - b_i) / (n - 1)` over normalized values, which is exactly 1 for
//! a star.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::ids::NodeId;
use crate::netbuild::Network;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("node `{0}` is not in the network")]
    UnknownNode(String),
}

/// Sources are accumulated in fixed-size chunks, each summed in source
/// order, and the chunk sums are then added in chunk order. Both execution
/// modes follow this order, so parallel and sequential results are
/// bit-identical.
const SOURCE_CHUNK: usize = 32;

/// Normalized betweenness of every node.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(transparent)]
pub struct BetweennessMap(BTreeMap<NodeId, f64>);

impl BetweennessMap {
    pub fn get(&self, node: &str) -> Option<f64> {
        self.0.get(node).copied()
    }

    pub fn values(&self) -> &BTreeMap<NodeId, f64> {
        &self.0
    }

    pub fn into_inner(self) -> BTreeMap<NodeId, f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> Option<f64> {
        self.0.values().copied().reduce(f64::max)
    }
}

impl FromIterator<(NodeId, f64)> for BetweennessMap {
    fn from_iter<I: IntoIterator<Item = (NodeId, f64)>>(iter: I) -> Self {
        BetweennessMap(iter.into_iter().collect())
    }
}

/// Node-indexed adjacency lists, nodes in ascending id order.
pub(crate) struct Indexed<'a> {
    pub ids: Vec<&'a NodeId>,
    pub adj: Vec<Vec<usize>>,
}

impl<'a> Indexed<'a> {
    pub fn of(net: &'a Network) -> Self {
        let ids: Vec<&NodeId> = net.nodes().iter().collect();
        let pos: BTreeMap<&NodeId, usize> = ids.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for (a, b) in net.edges().keys() {
            let (i, j) = (pos[a], pos[b]);
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Indexed { ids, adj }
    }
}

/// Single-source dependency accumulation; adds `δ_s(v)` into `acc`.
fn accumulate_source(adj: &[Vec<usize>], s: usize, acc: &mut [f64], scratch: &mut Scratch) {
    let n = adj.len();
    let Scratch {
        sigma,
        dist,
        delta,
        order,
        queue,
    } = scratch;
    sigma.clear();
    sigma.resize(n, 0.0);
    dist.clear();
    dist.resize(n, usize::MAX);
    delta.clear();
    delta.resize(n, 0.0);
    order.clear();
    queue.clear();

    sigma[s] = 1.0;
    dist[s] = 0;
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
            }
        }
    }
    for &w in order.iter().rev() {
        let coeff = (1.0 + delta[w]) / sigma[w];
        for &v in &adj[w] {
            if dist[v] != usize::MAX && dist[v] + 1 == dist[w] {
                delta[v] += sigma[v] * coeff;
            }
        }
        if w != s {
            acc[w] += delta[w];
        }
    }
}

#[derive(Default)]
struct Scratch {
    sigma: Vec<f64>,
    dist: Vec<usize>,
    delta: Vec<f64>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
}

/// Raw undirected betweenness, each unordered pair counted once.
pub(crate) fn raw_betweenness(adj: &[Vec<usize>], exec: Execution) -> Vec<f64> {
    let n = adj.len();
    let chunks = n.div_ceil(SOURCE_CHUNK);
    let partials = exec.map_range(chunks, |c| {
        let mut acc = vec![0.0; n];
        let mut scratch = Scratch::default();
        let end = ((c + 1) * SOURCE_CHUNK).min(n);
        for s in c * SOURCE_CHUNK..end {
            accumulate_source(adj, s, &mut acc, &mut scratch);
        }
        acc
    });
    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    // every pair was visited from both ends
    for t in &mut total {
        *t /= 2.0;
    }
    total
}

pub fn betweenness(net: &Network) -> BetweennessMap {
    betweenness_with(net, Execution::default())
}

pub fn betweenness_with(net: &Network, exec: Execution) -> BetweennessMap {
    let g = Indexed::of(net);
    let n = g.ids.len();
    if n < 3 {
        return g.ids.iter().map(|id| ((*id).clone(), 0.0)).collect();
    }
    let raw = raw_betweenness(&g.adj, exec);
    let pairs = ((n - 1) * (n - 2)) as f64 / 2.0;
    g.ids
        .iter()
        .zip(raw)
        .map(|(id, r)| ((*id).clone(), (r / pairs).clamp(0.0, 1.0)))
        .collect()
}

pub fn centralization(bm: &BetweennessMap) -> f64 {
    let n = bm.len();
    if n < 2 {
        return 0.0;
    }
    let max = bm.max().unwrap_or(0.0);
    let sum: f64 = bm.values().values().map(|b| max - b).sum();
    (sum / (n - 1) as f64).clamp(0.0, 1.0)
}

pub fn density(net: &Network) -> f64 {
    let n = net.node_count();
    if n < 2 {
        return 0.0;
    }
    2.0 * net.edge_count() as f64 / (n * (n - 1)) as f64
}

/// Connected components, largest first; equal sizes are ordered by their
/// smallest member id.
pub fn components(net: &Network) -> Vec<BTreeSet<NodeId>> {
    let g = Indexed::of(net);
    let mut seen = vec![false; g.ids.len()];
    let mut out = Vec::new();
    for start in 0..g.ids.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            comp.insert(g.ids[v].clone());
            for &w in &g.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out.push(comp);
    }
    // ids are sorted, so components are discovered in order of their minimum
    out.sort_by_key(|c| std::cmp::Reverse(c.len()));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectorReport {
    pub focal: NodeId,
    /// Nodes of the focal component that fall outside its largest remaining
    /// fragment once the focal node is removed.
    pub dependents: BTreeSet<NodeId>,
    pub component_sizes_before: Vec<usize>,
    pub component_sizes_after: Vec<usize>,
}

pub fn connector_report(net: &Network, focal: &str) -> Result<ConnectorReport, MetricsError> {
    let Some(focal) = net.nodes().get(focal).cloned() else {
        return Err(MetricsError::UnknownNode(focal.to_string()));
    };
    let before = components(net);
    let home = before
        .iter()
        .find(|c| c.contains(&focal))
        .expect("every node lies in some component");
    let reduced = net.without_node(&focal);
    let after = components(&reduced);
    // `after` is already in (size desc, smallest id) order, so the first
    // fragment of the home component is the largest one.
    let mut fragments = after.iter().filter(|c| c.iter().any(|n| home.contains(n)));
    let largest = fragments.next();
    let dependents = home
        .iter()
        .filter(|n| **n != focal && largest.is_none_or(|l| !l.contains(*n)))
        .cloned()
        .collect();
    Ok(ConnectorReport {
        focal,
        dependents,
        component_sizes_before: before.iter().map(BTreeSet::len).collect(),
        component_sizes_after: after.iter().map(BTreeSet::len).collect(),
    })
}
