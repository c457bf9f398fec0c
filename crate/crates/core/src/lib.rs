//! Temporal discourse-network analysis.
//!
//! A corpus of authored notes is replayed one note per turn. At each turn the
//! notes' vocabulary matches define a word network, a note network and an
//! agent network; betweenness and centralization of the agent network over
//! time give the leadership series, from which per-turn leaders, rotation
//! counts and top episodes are derived.
//!
//! ```
//! use rotnet_core::corpus::{parse_corpus, Vocabulary, CorpusFormat};
//! use rotnet_core::leadership::{compute_series, rotation_stats};
//! use rotnet_core::netbuild::NetworkKind;
//!
//! let corpus = parse_corpus(
//!     "note_id,author_id,timestamp,text\n\
//!      n1,A,2020-01-01T00:00:00Z,light and mirror\n\
//!      n2,B,2020-01-02T00:00:00Z,the mirror\n\
//!      n3,C,2020-01-03T00:00:00Z,light again\n",
//!     CorpusFormat::Csv,
//! )?;
//! let vocab = Vocabulary::from_surfaces(["light", "mirror"])?;
//! let series = compute_series(&corpus, &vocab, NetworkKind::Agent)?;
//! let stats = rotation_stats(&series);
//! assert_eq!(stats.distinct_leaders, 1); // A bridges B and C
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod corpus;
pub mod exec;
pub mod ids;
pub mod leadership;
pub mod metrics;
pub mod netbuild;
pub mod report;

pub use exec::Execution;
pub use ids::{AgentId, NodeId, NoteId, WordId};
