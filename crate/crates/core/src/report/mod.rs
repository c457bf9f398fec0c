//! Analysis bundles and the sessions that serve them.
//!
//! A bundle is one canonical JSON document holding the manifest, the metric
//! series, leadership and summary statistics, the final-turn snapshots of all
//! three networks and the matched word set of every note. Snapshots at other
//! turns are recomputed from those word sets on demand.

pub mod canon;
pub mod export;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{
    self, note_word_sets, validate_corpus, Corpus, CorpusError, CorpusFormat, NoteWordSet,
    ValidationIssue, Vocabulary,
};
use crate::ids::WordId;
use crate::leadership::{
    rotation_stats, series_from_word_sets, summarize, Episode, LeadershipError, LeadershipStats,
    MetricsSeries, SeriesMethod, SummaryStats,
};
use crate::netbuild::{state_at, BuildError, Network, NetworkKind};

use canon::to_canonical_string;
use export::GraphDoc;

pub const TOOL_NAME: &str = "rotnet";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Modelling choices recorded in every manifest.
pub const DECISIONS: &[&str] = &[
    "tokens: whitespace split, non-alphanumeric edges trimmed, lowercased",
    "matching: exact contiguous token sequence, no stemming, presence only",
    "turn: one note, ordered by timestamp then input order",
    "agent edge weight: number of distinct shared words",
    "networks accumulate over the whole history",
    "betweenness: unweighted shortest paths, normalized by (n-1)(n-2)/2 over all nodes",
    "centralization: sum(b_max - b_i) / (n-1) over normalized betweenness",
    "leaders: maximum within 1e-12; all-equal turns are degenerate and skipped",
    "episodes: one per contiguous leadership run, at its peak",
    "summary sd: population (divisor N)",
];

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Leadership(#[from] LeadershipError),
    #[error("word ids not in the base vocabulary: {}", .0.join(", "))]
    UnknownWords(Vec<String>),
    #[error("vocabulary filter is empty")]
    EmptyFilter,
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{} is not a valid bundle: {source}", path.display())]
    BadBundle {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeOptions {
    pub network: NetworkKind,
    pub top_k: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            network: NetworkKind::Agent,
            top_k: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub corpus_digest: String,
    pub vocabulary_digest: String,
    pub network: NetworkKind,
    pub top_k: usize,
    pub note_count: usize,
    pub agent_count: usize,
    pub vocabulary_size: usize,
    pub decisions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisBundle {
    pub manifest: Manifest,
    pub series: MetricsSeries,
    pub leadership: LeadershipStats,
    pub summary: SummaryStats,
    pub top_episodes: Vec<Episode>,
    pub warnings: Vec<ValidationIssue>,
    /// Final-turn snapshots keyed by network kind.
    pub final_networks: BTreeMap<NetworkKind, GraphDoc>,
    /// Matched words of every note in turn order.
    pub notes: Vec<NoteWordSet>,
}

impl AnalysisBundle {
    pub fn turns(&self) -> usize {
        self.notes.len()
    }

    /// The network of `kind` recomputed at `turn`.
    pub fn snapshot(&self, turn: usize, kind: NetworkKind) -> Result<Network, BuildError> {
        Ok(state_at(&self.notes, turn)?.network(kind).clone())
    }

    pub fn snapshot_doc(
        &self,
        turn: usize,
        kind: NetworkKind,
        format: export::SnapshotFormat,
    ) -> Result<String, BuildError> {
        Ok(export::render(&self.snapshot(turn, kind)?, turn, format))
    }

    pub fn to_json(&self) -> String {
        to_canonical_string(self)
    }

    /// Body of the leadership endpoint.
    pub fn leadership_json(&self) -> String {
        #[derive(Serialize)]
        struct Leadership<'a> {
            leadership: &'a LeadershipStats,
            summary: &'a SummaryStats,
            top_episodes: &'a [Episode],
        }
        to_canonical_string(&Leadership {
            leadership: &self.leadership,
            summary: &self.summary,
            top_episodes: &self.top_episodes,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ReportError> {
        let text = fs::read_to_string(path).map_err(|source| ReportError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| ReportError::BadBundle {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), ReportError> {
        fs::write(path, self.to_json()).map_err(|source| ReportError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// A corpus analysed under one vocabulary.
#[derive(Debug, Clone)]
pub struct Session {
    corpus: Arc<Corpus>,
    vocab: Vocabulary,
    options: AnalyzeOptions,
    bundle: AnalysisBundle,
}

impl Session {
    pub fn analyze(
        corpus: Arc<Corpus>,
        vocab: Vocabulary,
        options: AnalyzeOptions,
    ) -> Result<Self, ReportError> {
        let report = validate_corpus(&corpus, &vocab);
        debug_assert!(report.errors.is_empty(), "{:?}", report.errors);
        let notes = note_word_sets(&corpus, &vocab);
        let series = series_from_word_sets(&notes, options.network, SeriesMethod::Incremental)?;
        let leadership = rotation_stats(&series);
        let top_episodes = leadership.top(options.top_k.max(1)).to_vec();
        let final_state = state_at(&notes, notes.len())?;
        let final_networks = NetworkKind::ALL
            .iter()
            .map(|&k| (k, GraphDoc::of(final_state.network(k), notes.len())))
            .collect();
        let manifest = Manifest {
            tool: TOOL_NAME.to_string(),
            version: TOOL_VERSION.to_string(),
            corpus_digest: corpus.digest(),
            vocabulary_digest: vocab.digest(),
            network: options.network,
            top_k: options.top_k,
            note_count: corpus.len(),
            agent_count: corpus.agents().len(),
            vocabulary_size: vocab.len(),
            decisions: DECISIONS.iter().map(|d| d.to_string()).collect(),
        };
        let bundle = AnalysisBundle {
            manifest,
            summary: summarize(&series),
            series,
            leadership,
            top_episodes,
            warnings: report.warnings,
            final_networks,
            notes,
        };
        Ok(Session {
            corpus,
            vocab,
            options,
            bundle,
        })
    }

    pub fn from_paths(
        corpus_path: &Path,
        vocab_path: &Path,
        options: AnalyzeOptions,
    ) -> Result<Self, ReportError> {
        let vocab = corpus::load_vocabulary(vocab_path)?;
        let corpus = corpus::load_corpus(corpus_path, CorpusFormat::from_path(corpus_path))?;
        Self::analyze(Arc::new(corpus), vocab, options)
    }

    /// The same corpus re-analysed under a subset of the vocabulary.
    pub fn filtered(&self, word_ids: &BTreeSet<WordId>) -> Result<Self, ReportError> {
        if word_ids.is_empty() {
            return Err(ReportError::EmptyFilter);
        }
        let unknown: Vec<String> = word_ids
            .iter()
            .filter(|w| !self.vocab.contains(w.as_str()))
            .map(|w| w.to_string())
            .collect();
        if !unknown.is_empty() {
            return Err(ReportError::UnknownWords(unknown));
        }
        let vocab = self.vocab.restrict(word_ids)?;
        Self::analyze(Arc::clone(&self.corpus), vocab, self.options)
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn bundle(&self) -> &AnalysisBundle {
        &self.bundle
    }

    /// Stable identifier derived from the vocabulary in force.
    pub fn id(&self) -> String {
        format!("s{}", &self.bundle.manifest.vocabulary_digest[..16])
    }
}
