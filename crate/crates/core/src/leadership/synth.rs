//! Deterministic synthetic corpora with a known leadership regime.
//!
//! Every agent-network edge is created by a dedicated word that exactly two
//! agents ever use: one writes it in a note, the other picks it up in a later
//! note. Between those edge events the corpus is padded with notes in which
//! an agent repeats words it already used, which leaves the agent network
//! unchanged. The generator therefore controls the agent network's growth
//! edge by edge.
//!
//! - `centralized`: every word links the hub (the first agent) to one other
//!   agent in round-robin order, so the agent network is a growing star.
//! - `rotating`: edges are chosen greedily so that, whenever possible, a new
//!   edge makes an agent that has not led yet the unique betweenness leader,
//!   then one that differs from the current leader, preferring the least
//!   centralized outcome.

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::LeadershipError;
use crate::corpus::{Corpus, NoteRecord, Vocabulary};
use crate::exec::Execution;
use crate::ids::{AgentId, NoteId};
use crate::metrics::raw_betweenness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Centralized,
    Rotating,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub agent_count: usize,
    pub note_count: usize,
    pub vocab_size: usize,
    pub regime: Regime,
    #[serde(default)]
    pub seed: u64,
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), LeadershipError> {
        for (name, v) in [
            ("agent_count", self.agent_count),
            ("note_count", self.note_count),
            ("vocab_size", self.vocab_size),
        ] {
            if v == 0 {
                return Err(LeadershipError::InvalidSpec(format!("{name} must be >= 1")));
            }
        }
        Ok(())
    }

    pub fn agent_id(&self, i: usize) -> AgentId {
        AgentId::from(format!("u{:0w$}", i + 1, w = width(self.agent_count, 2)))
    }

    /// The hub of the centralized regime.
    pub fn hub(&self) -> AgentId {
        self.agent_id(0)
    }
}

fn width(count: usize, min: usize) -> usize {
    count.to_string().len().max(min)
}

const WORDS: &[&str] = &[
    "light",
    "shadow",
    "mirror",
    "reflection",
    "angle",
    "wave",
    "line",
    "straight",
    "refraction",
    "lens",
    "prism",
    "rainbow",
    "colour",
    "spectrum",
    "absorption",
    "transparent",
    "translucent",
    "opaque",
    "beam",
    "ray",
    "source",
    "sun",
    "bulb",
    "flashlight",
    "candle",
    "fire",
    "energy",
    "heat",
    "eye",
    "retina",
    "pupil",
    "vision",
    "brightness",
    "darkness",
    "glass",
    "water",
    "bend",
    "bounce",
    "scatter",
    "particle",
    "photon",
    "speed",
    "travel",
    "distance",
    "image",
    "magnify",
    "microscope",
    "telescope",
    "periscope",
    "kaleidoscope",
    "concave",
    "convex",
    "focus",
    "filter",
    "red",
    "green",
    "blue",
    "violet",
    "white",
    "black",
    "ultraviolet",
    "infrared",
    "laser",
    "fluorescent",
    "incandescent",
    "luminous",
    "sunlight",
    "moonlight",
    "eclipse",
    "night",
    "day",
    "solar",
    "electricity",
    "battery",
    "shiny",
    "dull",
    "surface",
    "smooth",
    "rough",
    "diffuse",
    "glare",
    "blind",
    "camera",
    "projector",
    "screen",
    "pinhole",
    "lightning",
    "firefly",
    "glow",
    "bioluminescence",
    "star",
    "moon",
    "planet",
    "orbit",
    "atmosphere",
    "sky",
    "cloud",
    "vapor",
    "crystal",
    "diamond",
    "window",
];

const OPENERS: &[&str] = &[
    "I think",
    "My theory is that",
    "I wonder if",
    "We noticed that",
    "Maybe",
    "I agree that",
    "Another idea is that",
    "I used to think",
];

const CLOSERS: &[&str] = &[
    "matter here.",
    "are connected.",
    "work together.",
    "could explain it.",
    "need more research.",
    "make sense to me.",
];

fn word(i: usize) -> String {
    WORDS
        .get(i)
        .map(|w| w.to_string())
        .unwrap_or_else(|| format!("term{:03}", i + 1))
}

pub fn synthetic_vocabulary(spec: &SynthSpec) -> Result<Vocabulary, LeadershipError> {
    spec.validate()?;
    Vocabulary::from_surfaces((0..spec.vocab_size).map(word))
        .map_err(|e| LeadershipError::InvalidSpec(e.to_string()))
}

struct Planned {
    author: usize,
    words: Vec<usize>,
}

/// Tracks who has used which word and emits the notes.
struct Planner<'a> {
    spec: &'a SynthSpec,
    rng: ChaCha8Rng,
    notes: Vec<Planned>,
    agent_words: Vec<Vec<usize>>,
    present: Vec<bool>,
    adj: Vec<Vec<bool>>,
    next_word: usize,
}

impl<'a> Planner<'a> {
    fn new(spec: &'a SynthSpec) -> Self {
        let a = spec.agent_count;
        Planner {
            spec,
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            notes: Vec::with_capacity(spec.note_count),
            agent_words: vec![Vec::new(); a],
            present: vec![false; a],
            adj: vec![vec![false; a]; a],
            next_word: 0,
        }
    }

    fn event_budget(&self) -> usize {
        (self.spec.note_count / 2).min(self.spec.vocab_size)
    }

    fn write(&mut self, author: usize, fresh: Option<usize>) {
        let mut words: Vec<usize> = fresh.into_iter().collect();
        let own = &self.agent_words[author];
        if !own.is_empty() && (words.is_empty() || self.rng.random_bool(0.5)) {
            let extra = self.rng.random_range(1..=own.len().min(2));
            for &w in own.choose_multiple(&mut self.rng, extra) {
                if !words.contains(&w) {
                    words.push(w);
                }
            }
        }
        if let Some(w) = fresh {
            if !self.agent_words[author].contains(&w) {
                self.agent_words[author].push(w);
            }
        }
        self.present[author] = true;
        self.notes.push(Planned { author, words });
    }

    /// Links `a` and `b` through a fresh word: two notes.
    fn link(&mut self, a: usize, b: usize) {
        let w = self.next_word;
        self.next_word += 1;
        let (first, second) = if !self.present[a] && self.present[b] {
            (b, a)
        } else {
            (a, b)
        };
        self.write(first, Some(w));
        self.write(second, Some(w));
        self.adj[a][b] = true;
        self.adj[b][a] = true;
    }

    fn filler(&mut self, count: usize) {
        for _ in 0..count {
            let speakers: Vec<usize> = (0..self.spec.agent_count)
                .filter(|&i| !self.agent_words[i].is_empty())
                .collect();
            match speakers.choose(&mut self.rng) {
                Some(&author) => self.write(author, None),
                None => {
                    // nothing said yet: open with a fresh word
                    let w = self.next_word;
                    self.next_word += 1;
                    self.write(0, Some(w));
                }
            }
        }
    }

    /// Emits the planned edges with padding spread evenly between them, then
    /// tops the corpus up to `note_count`.
    fn emit(&mut self, edges: &[(usize, usize)]) {
        let e = edges.len();
        let padding = self.spec.note_count - 2 * e;
        for (i, &(a, b)) in edges.iter().enumerate() {
            self.link(a, b);
            self.filler(padding * (i + 1) / e - padding * i / e);
        }
        let left = self.spec.note_count - self.notes.len();
        self.filler(left);
    }
}

fn centralized_edges(spec: &SynthSpec, budget: usize) -> Vec<(usize, usize)> {
    if spec.agent_count < 2 {
        return Vec::new();
    }
    (0..budget)
        .map(|j| (0, 1 + j % (spec.agent_count - 1)))
        .collect()
}

/// (new leader nobody has held yet, leader changed, -centralization, tiebreak)
type CandidateKey = (bool, bool, f64, u64);

/// Betweenness-driven edge selection for the rotating regime.
fn rotating_edges(spec: &SynthSpec, budget: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let a = spec.agent_count;
    let mut order: Vec<usize> = (0..a).collect();
    order.shuffle(rng);
    let mut adj = vec![vec![false; a]; a];
    let mut present = vec![false; a];
    let mut led = vec![false; a];
    let mut current: Option<usize> = None;
    let mut edges = Vec::new();

    while edges.len() < budget {
        let any_present = present.iter().any(|p| *p);
        let mut best: Option<(CandidateKey, (usize, usize), Option<usize>)> = None;
        for (oi, &x) in order.iter().enumerate() {
            for &y in &order[oi + 1..] {
                if adj[x][y] || (!present[x] && !present[y] && any_present) {
                    continue;
                }
                adj[x][y] = true;
                adj[y][x] = true;
                let (was_x, was_y) = (present[x], present[y]);
                present[x] = true;
                present[y] = true;
                let (leader, cent) = evaluate(&adj, &present);
                adj[x][y] = false;
                adj[y][x] = false;
                present[x] = was_x;
                present[y] = was_y;

                let fresh = leader.is_some_and(|l| !led[l]);
                let changed = leader.is_some() && leader != current;
                let key = (fresh, changed, -cent, rng.random::<u64>());
                if best.as_ref().is_none_or(|(k, _, _)| key_gt(&key, k)) {
                    best = Some((key, (x, y), leader));
                }
            }
        }
        let Some((_, (x, y), leader)) = best else {
            break;
        };
        adj[x][y] = true;
        adj[y][x] = true;
        present[x] = true;
        present[y] = true;
        if let Some(l) = leader {
            led[l] = true;
            current = Some(l);
        }
        edges.push((x, y));
    }
    edges
}

fn key_gt(a: &CandidateKey, b: &CandidateKey) -> bool {
    a.0.cmp(&b.0)
        .then(a.1.cmp(&b.1))
        .then(a.2.total_cmp(&b.2))
        .then(a.3.cmp(&b.3))
        .is_gt()
}

/// Unique betweenness leader (if any) and centralization of the present
/// subgraph.
fn evaluate(adj: &[Vec<bool>], present: &[bool]) -> (Option<usize>, f64) {
    let ids: Vec<usize> = (0..adj.len()).filter(|&i| present[i]).collect();
    let n = ids.len();
    if n < 3 {
        return (None, 0.0);
    }
    let lists: Vec<Vec<usize>> = ids
        .iter()
        .map(|&i| (0..n).filter(|&j| adj[i][ids[j]]).collect())
        .collect();
    let raw = raw_betweenness(&lists, Execution::Sequential);
    let pairs = ((n - 1) * (n - 2)) as f64 / 2.0;
    let norm: Vec<f64> = raw.iter().map(|r| r / pairs).collect();
    let max = norm.iter().copied().fold(0.0, f64::max);
    let cent = norm.iter().map(|b| max - b).sum::<f64>() / (n - 1) as f64;
    let top: Vec<usize> = (0..n)
        .filter(|&i| max - norm[i] <= super::TIE_EPSILON)
        .collect();
    let leader = (top.len() == 1 && max > super::TIE_EPSILON).then(|| ids[top[0]]);
    (leader, cent)
}

fn render_text(words: &[String], rng: &mut ChaCha8Rng) -> String {
    let opener = OPENERS.choose(rng).expect("non-empty");
    let closer = CLOSERS.choose(rng).expect("non-empty");
    let body = match words {
        [] => "nothing new".to_string(),
        [w] => w.to_string(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    };
    format!("{opener} {body} {closer}")
}

fn start_time() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2010, 1, 4, 9, 0, 0)
        .single()
        .expect("valid date")
}

pub fn generate_synthetic(spec: &SynthSpec) -> Result<Corpus, LeadershipError> {
    spec.validate()?;
    let mut planner = Planner::new(spec);
    let budget = planner.event_budget();
    let edges = match spec.regime {
        Regime::Centralized => centralized_edges(spec, budget),
        Regime::Rotating => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x9e37_79b9_7f4a_7c15);
            rotating_edges(spec, budget, &mut rng)
        }
    };
    planner.emit(&edges);

    let note_w = width(spec.note_count, 3);
    let mut text_rng = ChaCha8Rng::seed_from_u64(spec.seed.wrapping_add(1));
    let mut ts = start_time();
    let records = planner
        .notes
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut words: Vec<String> = p.words.iter().map(|&w| word(w)).collect();
            words.sort();
            ts += Duration::minutes(20 + text_rng.random_range(0..90));
            NoteRecord {
                note_id: NoteId::from(format!("n{:0note_w$}", i + 1)),
                author_id: spec.agent_id(p.author),
                timestamp: ts,
                text: render_text(&words, &mut text_rng),
            }
        })
        .collect();
    Ok(Corpus::from_records(records).expect("generated notes are non-empty with unique ids"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{match_words, tokenize};

    fn spec(regime: Regime) -> SynthSpec {
        SynthSpec {
            agent_count: 8,
            note_count: 120,
            vocab_size: 30,
            regime,
            seed: 7,
        }
    }

    #[test]
    fn deterministic() {
        for regime in [Regime::Centralized, Regime::Rotating] {
            let mut a = Vec::new();
            let mut b = Vec::new();
            generate_synthetic(&spec(regime))
                .unwrap()
                .write_csv(&mut a)
                .unwrap();
            generate_synthetic(&spec(regime))
                .unwrap()
                .write_csv(&mut b)
                .unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn counts_and_vocabulary() {
        for regime in [Regime::Centralized, Regime::Rotating] {
            let s = spec(regime);
            let c = generate_synthetic(&s).unwrap();
            let v = synthetic_vocabulary(&s).unwrap();
            assert_eq!(c.len(), 120);
            assert_eq!(v.len(), 30);
            assert!(c.agents().len() <= 8);
            for n in c.notes() {
                assert!(!match_words(&n.text, &v).is_empty(), "{}", n.text);
            }
        }
    }

    use std::collections::BTreeSet;

    #[test]
    fn filler_prose_stays_outside_the_word_list() {
        let words: BTreeSet<&str> = WORDS.iter().copied().collect();
        assert_eq!(words.len(), WORDS.len());
        for phrase in OPENERS.iter().chain(CLOSERS).chain(&["nothing new", "and"]) {
            for t in tokenize(phrase) {
                assert!(!words.contains(t.as_str()), "{t}");
            }
        }
    }

    #[test]
    fn degenerate_specs() {
        let mut s = spec(Regime::Rotating);
        s.note_count = 1;
        assert_eq!(generate_synthetic(&s).unwrap().len(), 1);
        s.agent_count = 1;
        s.note_count = 5;
        assert_eq!(generate_synthetic(&s).unwrap().agents().len(), 1);
        s.regime = Regime::Centralized;
        s.vocab_size = 1;
        assert_eq!(generate_synthetic(&s).unwrap().len(), 5);
        s.agent_count = 0;
        assert!(matches!(
            generate_synthetic(&s).unwrap_err(),
            LeadershipError::InvalidSpec(_)
        ));
    }
}
