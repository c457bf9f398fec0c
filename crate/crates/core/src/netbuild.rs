//! Word/note/agent networks derived from the word-by-note incidence.
//!
//! The incidence at turn `t` holds the matched word set of every note with
//! `seq <= t`. The three networks are projections of it:
//!
//! - word network: two words are linked when some note contains both; the
//!   weight counts such notes.
//! - note network: two notes are linked when they share a word; the weight
//!   counts shared words. Notes matching nothing stay as isolated nodes.
//! - agent network: two distinct authors are linked when some word appears in
//!   notes of both; the weight counts such distinct words.
//!
//! [`NetworkState::step`] advances one turn incrementally and must agree with
//! [`NetworkState::rebuild`] at every turn.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, Note, NoteWordSet, Vocabulary};
use crate::ids::{AgentId, NodeId, NoteId, WordId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("turn {turn} out of range 0..={max}")]
    TurnOutOfRange { turn: usize, max: usize },
    #[error("out-of-order note: expected seq {expected}, got {found}")]
    OutOfOrder { expected: usize, found: usize },
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum NetworkKind {
    Word,
    Note,
    #[default]
    Agent,
}

impl NetworkKind {
    pub const ALL: [NetworkKind; 3] = [NetworkKind::Agent, NetworkKind::Note, NetworkKind::Word];

    pub fn as_str(self) -> &'static str {
        match self {
            NetworkKind::Word => "word",
            NetworkKind::Note => "note",
            NetworkKind::Agent => "agent",
        }
    }
}

impl fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
#[error("unknown network kind `{0}` (expected agent, note or word)")]
pub struct UnknownKind(pub String);

impl std::str::FromStr for NetworkKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, UnknownKind> {
        match s {
            "word" => Ok(NetworkKind::Word),
            "note" => Ok(NetworkKind::Note),
            "agent" | "student" => Ok(NetworkKind::Agent),
            other => Err(UnknownKind(other.to_string())),
        }
    }
}

/// Undirected simple graph with positive integer edge weights.
///
/// Edges are keyed by their endpoints in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    kind: NetworkKind,
    nodes: BTreeSet<NodeId>,
    edges: BTreeMap<(NodeId, NodeId), u32>,
}

impl Network {
    pub fn new(kind: NetworkKind) -> Self {
        Network {
            kind,
            nodes: BTreeSet::new(),
            edges: BTreeMap::new(),
        }
    }

    /// Builds a network from explicit nodes and weighted edges. Endpoints are
    /// added as nodes; self-loops are ignored and repeated edges accumulate.
    pub fn from_edges<N, I>(kind: NetworkKind, nodes: N, edges: I) -> Self
    where
        N: IntoIterator,
        N::Item: Into<NodeId>,
        I: IntoIterator<Item = (NodeId, NodeId, u32)>,
    {
        let mut net = Network::new(kind);
        for n in nodes {
            net.add_node(n.into());
        }
        for (a, b, w) in edges {
            net.add_weight(a, b, w);
        }
        net
    }

    pub fn kind(&self) -> NetworkKind {
        self.kind
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeMap<(NodeId, NodeId), u32> {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, node: &str) -> bool {
        self.nodes.contains(node)
    }

    pub fn weight(&self, a: &NodeId, b: &NodeId) -> Option<u32> {
        let key = if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        self.edges.get(&key).copied()
    }

    pub fn add_node(&mut self, node: NodeId) {
        self.nodes.insert(node);
    }

    /// Adds `delta` to the weight of `{a, b}`, creating the edge and its
    /// endpoints if needed.
    pub fn add_weight(&mut self, a: NodeId, b: NodeId, delta: u32) {
        if a == b || delta == 0 {
            return;
        }
        self.nodes.insert(a.clone());
        self.nodes.insert(b.clone());
        let key = if a < b { (a, b) } else { (b, a) };
        *self.edges.entry(key).or_insert(0) += delta;
    }

    /// Copy of the network with `node` and its incident edges removed.
    pub fn without_node(&self, node: &NodeId) -> Network {
        Network {
            kind: self.kind,
            nodes: self.nodes.iter().filter(|n| *n != node).cloned().collect(),
            edges: self
                .edges
                .iter()
                .filter(|((a, b), _)| a != node && b != node)
                .map(|(k, w)| (k.clone(), *w))
                .collect(),
        }
    }
}

/// Matched word sets of the first `turn` notes, in turn order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Incidence {
    notes: Vec<NoteWordSet>,
}

impl Incidence {
    pub fn from_word_sets(sets: &[NoteWordSet], turn: usize) -> Result<Self, BuildError> {
        if turn > sets.len() {
            return Err(BuildError::TurnOutOfRange {
                turn,
                max: sets.len(),
            });
        }
        Ok(Incidence {
            notes: sets[..turn].to_vec(),
        })
    }

    pub fn turn(&self) -> usize {
        self.notes.len()
    }

    pub fn notes(&self) -> &[NoteWordSet] {
        &self.notes
    }

    /// All `(word, note)` pairs.
    pub fn pairs(&self) -> BTreeSet<(WordId, NoteId)> {
        self.notes
            .iter()
            .flat_map(|n| n.words.iter().map(move |w| (w.clone(), n.note_id.clone())))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.notes.iter().all(|n| n.words.is_empty())
    }
}

pub fn build_incidence(
    corpus: &Corpus,
    vocab: &Vocabulary,
    turn: usize,
) -> Result<Incidence, BuildError> {
    if turn > corpus.len() {
        return Err(BuildError::TurnOutOfRange {
            turn,
            max: corpus.len(),
        });
    }
    Ok(Incidence {
        notes: corpus.notes()[..turn]
            .iter()
            .map(|n| NoteWordSet::of(n, vocab))
            .collect(),
    })
}

fn pairs_of<T: Clone>(items: &[T]) -> impl Iterator<Item = (T, T)> + '_ {
    items
        .iter()
        .enumerate()
        .flat_map(move |(i, a)| items[i + 1..].iter().map(move |b| (a.clone(), b.clone())))
}

pub fn derive_word_network(inc: &Incidence) -> Network {
    let mut net = Network::new(NetworkKind::Word);
    for note in &inc.notes {
        let words: Vec<NodeId> = note.words.iter().map(NodeId::from).collect();
        for w in &words {
            net.add_node(w.clone());
        }
        for (a, b) in pairs_of(&words) {
            net.add_weight(a, b, 1);
        }
    }
    net
}

pub fn derive_note_network(inc: &Incidence) -> Network {
    let mut net = Network::new(NetworkKind::Note);
    let mut by_word: BTreeMap<&WordId, Vec<NodeId>> = BTreeMap::new();
    for note in &inc.notes {
        net.add_node(NodeId::from(&note.note_id));
        for w in &note.words {
            by_word
                .entry(w)
                .or_default()
                .push(NodeId::from(&note.note_id));
        }
    }
    for notes in by_word.values() {
        for (a, b) in pairs_of(notes) {
            net.add_weight(a, b, 1);
        }
    }
    net
}

pub fn derive_agent_network(inc: &Incidence) -> Network {
    let mut net = Network::new(NetworkKind::Agent);
    let mut by_word: BTreeMap<&WordId, BTreeSet<NodeId>> = BTreeMap::new();
    for note in &inc.notes {
        net.add_node(NodeId::from(&note.author_id));
        for w in &note.words {
            by_word
                .entry(w)
                .or_default()
                .insert(NodeId::from(&note.author_id));
        }
    }
    for agents in by_word.values() {
        let agents: Vec<NodeId> = agents.iter().cloned().collect();
        for (a, b) in pairs_of(&agents) {
            net.add_weight(a, b, 1);
        }
    }
    net
}

/// Lookup tables kept alongside a state so a step touches only what the new
/// note can reach.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct StepIndex {
    word_notes: BTreeMap<WordId, Vec<NoteId>>,
    word_agents: BTreeMap<WordId, BTreeSet<AgentId>>,
    agent_words: BTreeMap<AgentId, BTreeSet<WordId>>,
}

impl StepIndex {
    fn from_incidence(inc: &Incidence) -> Self {
        let mut idx = StepIndex::default();
        for note in &inc.notes {
            idx.agent_words.entry(note.author_id.clone()).or_default();
            for w in &note.words {
                idx.word_notes
                    .entry(w.clone())
                    .or_default()
                    .push(note.note_id.clone());
                idx.word_agents
                    .entry(w.clone())
                    .or_default()
                    .insert(note.author_id.clone());
                idx.agent_words
                    .entry(note.author_id.clone())
                    .or_default()
                    .insert(w.clone());
            }
        }
        idx
    }
}

/// The incidence and its three networks at one turn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkState {
    incidence: Incidence,
    word_net: Network,
    note_net: Network,
    agent_net: Network,
    index: StepIndex,
}

impl Default for NetworkState {
    fn default() -> Self {
        NetworkState::empty()
    }
}

impl NetworkState {
    /// Turn 0: nothing ingested.
    pub fn empty() -> Self {
        NetworkState {
            incidence: Incidence::default(),
            word_net: Network::new(NetworkKind::Word),
            note_net: Network::new(NetworkKind::Note),
            agent_net: Network::new(NetworkKind::Agent),
            index: StepIndex::default(),
        }
    }

    /// From-scratch derivation of all three networks.
    pub fn rebuild(incidence: Incidence) -> Self {
        NetworkState {
            word_net: derive_word_network(&incidence),
            note_net: derive_note_network(&incidence),
            agent_net: derive_agent_network(&incidence),
            index: StepIndex::from_incidence(&incidence),
            incidence,
        }
    }

    pub fn build(corpus: &Corpus, vocab: &Vocabulary, turn: usize) -> Result<Self, BuildError> {
        build_incidence(corpus, vocab, turn).map(Self::rebuild)
    }

    pub fn turn(&self) -> usize {
        self.incidence.turn()
    }

    pub fn incidence(&self) -> &Incidence {
        &self.incidence
    }

    pub fn word_net(&self) -> &Network {
        &self.word_net
    }

    pub fn note_net(&self) -> &Network {
        &self.note_net
    }

    pub fn agent_net(&self) -> &Network {
        &self.agent_net
    }

    pub fn network(&self, kind: NetworkKind) -> &Network {
        match kind {
            NetworkKind::Word => &self.word_net,
            NetworkKind::Note => &self.note_net,
            NetworkKind::Agent => &self.agent_net,
        }
    }

    /// Returns the state one turn later; `self` is left untouched.
    pub fn step(&self, next: &Note, vocab: &Vocabulary) -> Result<Self, BuildError> {
        self.step_matched(next.seq, NoteWordSet::of(next, vocab))
    }

    pub fn step_matched(&self, seq: usize, set: NoteWordSet) -> Result<Self, BuildError> {
        let mut next = self.clone();
        next.advance(seq, set)?;
        Ok(next)
    }

    /// In-place form of [`step_matched`](Self::step_matched).
    pub fn advance(&mut self, seq: usize, set: NoteWordSet) -> Result<(), BuildError> {
        let expected = self.turn() + 1;
        if seq != expected {
            return Err(BuildError::OutOfOrder {
                expected,
                found: seq,
            });
        }
        let note = NodeId::from(&set.note_id);
        let author = NodeId::from(&set.author_id);

        self.note_net.add_node(note.clone());
        let mut shared: BTreeMap<&NoteId, u32> = BTreeMap::new();
        for w in &set.words {
            if let Some(others) = self.index.word_notes.get(w) {
                for m in others {
                    *shared.entry(m).or_insert(0) += 1;
                }
            }
        }
        for (m, count) in shared {
            self.note_net
                .add_weight(note.clone(), NodeId::from(m), count);
        }

        let words: Vec<NodeId> = set.words.iter().map(NodeId::from).collect();
        for w in &words {
            self.word_net.add_node(w.clone());
        }
        for (a, b) in pairs_of(&words) {
            self.word_net.add_weight(a, b, 1);
        }

        self.agent_net.add_node(author.clone());
        let known = self
            .index
            .agent_words
            .entry(set.author_id.clone())
            .or_default();
        for w in &set.words {
            if !known.insert(w.clone()) {
                continue;
            }
            let holders = self.index.word_agents.entry(w.clone()).or_default();
            for b in holders.iter() {
                if *b != set.author_id {
                    self.agent_net
                        .add_weight(author.clone(), NodeId::from(b), 1);
                }
            }
            holders.insert(set.author_id.clone());
        }

        for w in &set.words {
            self.index
                .word_notes
                .entry(w.clone())
                .or_default()
                .push(set.note_id.clone());
        }
        self.incidence.notes.push(set);
        Ok(())
    }
}

/// State at `turn` for a matched corpus, rebuilt from scratch.
pub fn state_at(sets: &[NoteWordSet], turn: usize) -> Result<NetworkState, BuildError> {
    Incidence::from_word_sets(sets, turn).map(NetworkState::rebuild)
}
