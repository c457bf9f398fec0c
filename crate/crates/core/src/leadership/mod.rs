//! Corpus replay, per-turn leaders and rotation statistics.
//!
//! The series records, after each turn, the normalized betweenness of every
//! node present in the chosen network (agents by default) together with the
//! network's centralization and density. A node is absent from a turn's map
//! until it first appears.
//!
//! The leader at a turn is the set of present nodes attaining the maximum
//! betweenness. When every present node has the same value the turn is
//! degenerate: it names no leader and does not count as a change.

pub mod synth;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{note_word_sets, Corpus, NoteWordSet, Vocabulary};
use crate::exec::Execution;
use crate::ids::NodeId;
use crate::metrics::{betweenness_with, centralization, density};
use crate::netbuild::{
    derive_agent_network, derive_note_network, derive_word_network, Incidence, Network,
    NetworkKind, NetworkState,
};

pub use synth::{generate_synthetic, synthetic_vocabulary, Regime, SynthSpec};

/// Values closer than this are treated as tied when picking leaders.
pub const TIE_EPSILON: f64 = 1e-12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LeadershipError {
    #[error("corpus contains zero notes")]
    EmptyCorpus,
    #[error("turn {turn} out of range 1..={max}")]
    TurnOutOfRange { turn: usize, max: usize },
    #[error("top-k needs k >= 1")]
    ZeroK,
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeriesMethod {
    /// One sequential pass of incremental steps.
    #[default]
    Incremental,
    /// Every turn derived from scratch; turns are independent and may run in
    /// parallel.
    Rebuild(Execution),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsSeries {
    pub kind: NetworkKind,
    /// Entry `t - 1` holds the values after turn `t`.
    pub betweenness: Vec<BTreeMap<NodeId, f64>>,
    pub centralization: Vec<f64>,
    pub density: Vec<f64>,
}

impl MetricsSeries {
    pub fn turns(&self) -> usize {
        self.centralization.len()
    }

    pub fn at(&self, turn: usize) -> Result<&BTreeMap<NodeId, f64>, LeadershipError> {
        turn.checked_sub(1)
            .and_then(|i| self.betweenness.get(i))
            .ok_or(LeadershipError::TurnOutOfRange {
                turn,
                max: self.turns(),
            })
    }

    /// Every node that appears at some turn.
    pub fn roster(&self) -> BTreeSet<NodeId> {
        self.betweenness
            .last()
            .map(|m| m.keys().cloned().collect())
            .unwrap_or_default()
    }

    /// The trajectory of one node; `None` before it appears.
    pub fn trajectory(&self, node: &str) -> Vec<Option<f64>> {
        self.betweenness
            .iter()
            .map(|m| m.get(node).copied())
            .collect()
    }
}

struct TurnMetrics {
    betweenness: BTreeMap<NodeId, f64>,
    centralization: f64,
    density: f64,
}

fn measure(net: &Network) -> TurnMetrics {
    // per-turn networks are small; parallelism is spent across turns
    let bm = betweenness_with(net, Execution::Sequential);
    TurnMetrics {
        centralization: centralization(&bm),
        density: density(net),
        betweenness: bm.into_inner(),
    }
}

fn derive(inc: &Incidence, kind: NetworkKind) -> Network {
    match kind {
        NetworkKind::Word => derive_word_network(inc),
        NetworkKind::Note => derive_note_network(inc),
        NetworkKind::Agent => derive_agent_network(inc),
    }
}

fn collect(kind: NetworkKind, turns: Vec<TurnMetrics>) -> MetricsSeries {
    let mut s = MetricsSeries {
        kind,
        betweenness: Vec::with_capacity(turns.len()),
        centralization: Vec::with_capacity(turns.len()),
        density: Vec::with_capacity(turns.len()),
    };
    for t in turns {
        s.betweenness.push(t.betweenness);
        s.centralization.push(t.centralization);
        s.density.push(t.density);
    }
    s
}

pub fn series_from_word_sets(
    sets: &[NoteWordSet],
    kind: NetworkKind,
    method: SeriesMethod,
) -> Result<MetricsSeries, LeadershipError> {
    if sets.is_empty() {
        return Err(LeadershipError::EmptyCorpus);
    }
    let turns = match method {
        SeriesMethod::Incremental => {
            let mut state = NetworkState::empty();
            let mut out = Vec::with_capacity(sets.len());
            for (i, set) in sets.iter().enumerate() {
                state
                    .advance(i + 1, set.clone())
                    .expect("turns are fed in order");
                out.push(measure(state.network(kind)));
            }
            out
        }
        SeriesMethod::Rebuild(exec) => exec.map_range(sets.len(), |i| {
            let inc = Incidence::from_word_sets(sets, i + 1).expect("turn within range");
            measure(&derive(&inc, kind))
        }),
    };
    Ok(collect(kind, turns))
}

pub fn compute_series(
    corpus: &Corpus,
    vocab: &Vocabulary,
    kind: NetworkKind,
) -> Result<MetricsSeries, LeadershipError> {
    compute_series_with(corpus, vocab, kind, SeriesMethod::Incremental)
}

pub fn compute_series_with(
    corpus: &Corpus,
    vocab: &Vocabulary,
    kind: NetworkKind,
    method: SeriesMethod,
) -> Result<MetricsSeries, LeadershipError> {
    series_from_word_sets(&note_word_sets(corpus, vocab), kind, method)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    /// Population standard deviation (divisor N).
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

/// Summary of the centralization series.
pub fn summarize(series: &MetricsSeries) -> SummaryStats {
    summarize_values(&series.centralization)
}

pub fn summarize_values(values: &[f64]) -> SummaryStats {
    if values.is_empty() {
        return SummaryStats {
            mean: 0.0,
            sd: 0.0,
            min: 0.0,
            max: 0.0,
        };
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    SummaryStats {
        // rounding can push the mean a hair outside [min, max]
        mean: mean.clamp(min, max),
        sd: var.sqrt(),
        min,
        max,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeaderSet {
    pub agents: BTreeSet<NodeId>,
    /// All present nodes share one value.
    pub degenerate: bool,
}

pub fn leaders_of(values: &BTreeMap<NodeId, f64>) -> LeaderSet {
    let max = values.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.values().copied().fold(f64::INFINITY, f64::min);
    let agents = values
        .iter()
        .filter(|(_, v)| max - **v <= TIE_EPSILON)
        .map(|(k, _)| k.clone())
        .collect();
    LeaderSet {
        agents,
        degenerate: max - min <= TIE_EPSILON,
    }
}

pub fn leader_at(series: &MetricsSeries, turn: usize) -> Result<LeaderSet, LeadershipError> {
    series.at(turn).map(leaders_of)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Episode {
    pub agent: NodeId,
    pub turn: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeadershipStats {
    pub leaders_per_turn: Vec<LeaderSet>,
    pub change_count: usize,
    pub distinct_leaders: usize,
    /// Every leadership episode, highest value first.
    pub episodes: Vec<Episode>,
}

impl LeadershipStats {
    pub fn top(&self, k: usize) -> &[Episode] {
        &self.episodes[..k.min(self.episodes.len())]
    }

    pub fn leaders(&self) -> BTreeSet<NodeId> {
        self.leaders_per_turn
            .iter()
            .filter(|l| !l.degenerate)
            .flat_map(|l| l.agents.iter().cloned())
            .collect()
    }
}

/// Counts how often the leader set changes between non-degenerate turns.
/// Overlapping sets are not a change; degenerate turns are skipped and the
/// previous set carries over.
pub fn count_changes(sets: &[LeaderSet]) -> usize {
    let mut last: Option<&BTreeSet<NodeId>> = None;
    let mut changes = 0;
    for s in sets.iter().filter(|s| !s.degenerate) {
        if let Some(prev) = last {
            if prev.is_disjoint(&s.agents) {
                changes += 1;
            }
        }
        last = Some(&s.agents);
    }
    changes
}

/// Leadership runs: maximal stretches of consecutive turns in which one agent
/// belongs to the non-degenerate leader set. Each run becomes a single
/// episode at its peak (the earliest turn attaining it).
fn episodes_of(series: &MetricsSeries, sets: &[LeaderSet]) -> Vec<Episode> {
    let mut open: BTreeMap<NodeId, Episode> = BTreeMap::new();
    let mut done = Vec::new();
    for (i, set) in sets.iter().enumerate() {
        let turn = i + 1;
        let leading: &BTreeSet<NodeId> = if set.degenerate {
            &BTreeSet::new()
        } else {
            &set.agents
        };
        let closed: Vec<NodeId> = open
            .keys()
            .filter(|a| !leading.contains(*a))
            .cloned()
            .collect();
        for a in closed {
            done.extend(open.remove(&a));
        }
        for a in leading {
            let value = series.betweenness[i][a];
            open.entry(a.clone())
                .and_modify(|e| {
                    if value > e.value {
                        e.value = value;
                        e.turn = turn;
                    }
                })
                .or_insert_with(|| Episode {
                    agent: a.clone(),
                    turn,
                    value,
                });
        }
    }
    done.extend(open.into_values());
    done.sort_by(|a, b| {
        b.value
            .total_cmp(&a.value)
            .then(a.turn.cmp(&b.turn))
            .then_with(|| a.agent.cmp(&b.agent))
    });
    done
}

pub fn rotation_stats(series: &MetricsSeries) -> LeadershipStats {
    let leaders_per_turn: Vec<LeaderSet> = series.betweenness.iter().map(leaders_of).collect();
    let change_count = count_changes(&leaders_per_turn);
    let episodes = episodes_of(series, &leaders_per_turn);
    let mut stats = LeadershipStats {
        leaders_per_turn,
        change_count,
        distinct_leaders: 0,
        episodes,
    };
    stats.distinct_leaders = stats.leaders().len();
    stats
}

pub fn top_episodes(series: &MetricsSeries, k: usize) -> Result<Vec<Episode>, LeadershipError> {
    if k == 0 {
        return Err(LeadershipError::ZeroK);
    }
    Ok(rotation_stats(series).top(k).to_vec())
}
