#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rotnet_core::corpus::NoteWordSet;
use rotnet_core::netbuild::Network;
use rotnet_core::NodeId;

use oracle::{Graph, RefNote};

/// Dense integer labelling of a network: ids in sorted order and edges as
/// index pairs.
pub fn indexed(net: &Network) -> (Vec<NodeId>, Vec<(usize, usize)>) {
    let ids: Vec<NodeId> = net.nodes().iter().cloned().collect();
    let pos = |n: &NodeId| ids.binary_search(n).unwrap();
    let edges = net.edges().keys().map(|(a, b)| (pos(a), pos(b))).collect();
    (ids, edges)
}

pub fn as_graph(net: &Network) -> Graph {
    (
        net.nodes().iter().map(|n| n.to_string()).collect(),
        net.edges()
            .iter()
            .map(|((a, b), w)| ((a.to_string(), b.to_string()), *w))
            .collect(),
    )
}

pub fn ref_notes(sets: &[NoteWordSet]) -> Vec<RefNote> {
    sets.iter()
        .map(|s| RefNote {
            id: s.note_id.to_string(),
            author: s.author_id.to_string(),
            words: s.words.iter().map(|w| w.to_string()).collect(),
        })
        .collect()
}

/// Random matched notes: up to `max_notes` notes by up to `max_agents`
/// agents drawing from `max_words` words.
pub fn word_sets(
    max_notes: usize,
    max_agents: usize,
    max_words: usize,
) -> impl Strategy<Value = Vec<NoteWordSet>> {
    prop::collection::vec(
        (
            0..max_agents,
            prop::collection::btree_set(0..max_words, 0..=4.min(max_words)),
        ),
        1..=max_notes,
    )
    .prop_map(|notes| {
        notes
            .into_iter()
            .enumerate()
            .map(|(i, (agent, words))| NoteWordSet {
                note_id: format!("n{:03}", i + 1).into(),
                author_id: format!("a{agent}").into(),
                words: words
                    .into_iter()
                    .map(|w| format!("w{w:02}").into())
                    .collect(),
            })
            .collect()
    })
}

/// Random simple graph on `1..=max_n` nodes as an edge list.
pub fn small_graph(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        let len = pairs.len();
        (Just(n), prop::collection::vec(any::<bool>(), len)).prop_map(move |(n, keep)| {
            let edges = pairs
                .iter()
                .zip(keep)
                .filter(|(_, k)| *k)
                .map(|(p, _)| *p)
                .collect();
            (n, edges)
        })
    })
}

pub fn network_of(n: usize, edges: &[(usize, usize)]) -> Network {
    let name = |i: usize| NodeId::from(format!("v{i:02}"));
    Network::from_edges(
        rotnet_core::netbuild::NetworkKind::Agent,
        (0..n).map(name),
        edges.iter().map(|&(a, b)| (name(a), name(b), 1)),
    )
}

pub fn set(items: &[&str]) -> BTreeSet<NodeId> {
    items.iter().map(|s| NodeId::from(*s)).collect()
}
