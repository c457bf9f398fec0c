//! Corpus and vocabulary ingestion, tokenization and word matching.
//!
//! A corpus is a time-ordered list of authored notes. Each note is one turn
//! of the replay: notes are ordered by timestamp, and notes sharing a
//! timestamp keep their file order.
//!
//! Matching is exact on normalized tokens. Text is split on Unicode
//! whitespace, every token loses its leading and trailing non-alphanumeric
//! characters and is lowercased. A vocabulary entry matches a note when its
//! token sequence occurs contiguously in the note's token stream. Presence is
//! boolean; repeated mentions are discarded.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, NaiveDateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::ids::{AgentId, NoteId, WordId};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: missing required field `{field}`")]
    MissingField { line: u64, field: &'static str },
    #[error("line {line}: duplicate note_id `{note_id}`")]
    DuplicateNoteId { line: u64, note_id: String },
    #[error("line {line}: unparseable timestamp `{value}`")]
    BadTimestamp { line: u64, value: String },
    #[error("corpus contains zero notes")]
    Empty,
    #[error("vocabulary contains zero entries")]
    EmptyVocabulary,
    #[error("line {line}: vocabulary entry `{entry}` normalizes to zero tokens")]
    EmptyEntry { line: u64, entry: String },
    #[error("unsupported corpus format `{0}` (expected csv or jsonl)")]
    UnknownFormat(String),
}

pub type Result<T, E = CorpusError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Csv,
    Jsonl,
}

impl CorpusFormat {
    /// Picks the format from a file extension; anything but `.jsonl`/`.json`
    /// is read as CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("jsonl") || ext.eq_ignore_ascii_case("json") => {
                CorpusFormat::Jsonl
            }
            _ => CorpusFormat::Csv,
        }
    }
}

impl std::str::FromStr for CorpusFormat {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(CorpusFormat::Csv),
            "jsonl" => Ok(CorpusFormat::Jsonl),
            other => Err(CorpusError::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Note {
    pub note_id: NoteId,
    pub author_id: AgentId,
    pub timestamp: DateTime<Utc>,
    pub text: String,
    /// 1-based turn index.
    pub seq: usize,
}

/// An unordered note as read from a file, before turn assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoteRecord {
    pub note_id: NoteId,
    pub author_id: AgentId,
    pub timestamp: DateTime<Utc>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    notes: Vec<Note>,
    agents: BTreeSet<AgentId>,
}

impl Corpus {
    /// Assigns turns by ascending timestamp; ties keep record order.
    ///
    /// `lines` optionally carries the source line of each record for error
    /// reporting.
    fn from_records_with_lines(records: Vec<NoteRecord>, lines: &[u64]) -> Result<Self> {
        if records.is_empty() {
            return Err(CorpusError::Empty);
        }
        let mut seen = HashSet::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if !seen.insert(r.note_id.clone()) {
                return Err(CorpusError::DuplicateNoteId {
                    line: lines.get(i).copied().unwrap_or(i as u64 + 1),
                    note_id: r.note_id.to_string(),
                });
            }
        }
        let mut records = records;
        // stable: equal timestamps keep input order
        records.sort_by_key(|r| r.timestamp);
        let agents = records.iter().map(|r| r.author_id.clone()).collect();
        let notes = records
            .into_iter()
            .enumerate()
            .map(|(i, r)| Note {
                note_id: r.note_id,
                author_id: r.author_id,
                timestamp: r.timestamp,
                text: r.text,
                seq: i + 1,
            })
            .collect();
        Ok(Corpus { notes, agents })
    }

    pub fn from_records(records: Vec<NoteRecord>) -> Result<Self> {
        Self::from_records_with_lines(records, &[])
    }

    pub fn notes(&self) -> &[Note] {
        &self.notes
    }

    pub fn agents(&self) -> &BTreeSet<AgentId> {
        &self.agents
    }

    pub fn len(&self) -> usize {
        self.notes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.notes.is_empty()
    }

    pub fn note_at(&self, seq: usize) -> Option<&Note> {
        seq.checked_sub(1).and_then(|i| self.notes.get(i))
    }

    pub fn write_csv<W: Write>(&self, w: W) -> io::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["note_id", "author_id", "timestamp", "text"])?;
        for n in &self.notes {
            wtr.write_record([
                n.note_id.as_str(),
                n.author_id.as_str(),
                &format_timestamp(&n.timestamp),
                &n.text,
            ])?;
        }
        wtr.flush()
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> io::Result<()> {
        for n in &self.notes {
            let row = RawRow {
                note_id: Some(n.note_id.to_string()),
                author_id: Some(n.author_id.to_string()),
                timestamp: Some(format_timestamp(&n.timestamp)),
                text: Some(n.text.clone()),
            };
            serde_json::to_writer(&mut w, &row)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    /// SHA-256 over the canonical JSONL form, so CSV and JSONL encodings of
    /// the same corpus share a digest.
    pub fn digest(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf)
            .expect("writing to a Vec cannot fail");
        hex_digest(&buf)
    }
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn format_timestamp(ts: &DateTime<Utc>) -> String {
    ts.to_rfc3339_opts(SecondsFormat::AutoSi, true)
}

/// Accepts RFC 3339 instants; a timestamp without offset is read as UTC.
pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    let s = s.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.with_timezone(&Utc));
    }
    ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"]
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
        .map(|t| t.and_utc())
}

#[derive(Debug, Serialize, Deserialize)]
struct RawRow {
    note_id: Option<String>,
    author_id: Option<String>,
    timestamp: Option<String>,
    text: Option<String>,
}

impl RawRow {
    fn into_record(self, line: u64) -> Result<NoteRecord> {
        fn required(v: Option<String>, line: u64, field: &'static str) -> Result<String> {
            match v {
                Some(s) if !s.trim().is_empty() => Ok(s),
                _ => Err(CorpusError::MissingField { line, field }),
            }
        }
        let note_id = required(self.note_id, line, "note_id")?;
        let author_id = required(self.author_id, line, "author_id")?;
        let raw_ts = required(self.timestamp, line, "timestamp")?;
        let text = self.text.ok_or(CorpusError::MissingField {
            line,
            field: "text",
        })?;
        let timestamp = parse_timestamp(&raw_ts).ok_or(CorpusError::BadTimestamp {
            line,
            value: raw_ts,
        })?;
        Ok(NoteRecord {
            note_id: NoteId::from(note_id.trim()),
            author_id: AgentId::from(author_id.trim()),
            timestamp,
            text,
        })
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus> {
    let content = read_file(path)?;
    parse_corpus(&content, format)
}

pub fn parse_corpus(content: &str, format: CorpusFormat) -> Result<Corpus> {
    match format {
        CorpusFormat::Csv => parse_csv(content),
        CorpusFormat::Jsonl => parse_jsonl(content),
    }
}

fn parse_csv(content: &str) -> Result<Corpus> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(content.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| CorpusError::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    for field in ["note_id", "author_id", "timestamp", "text"] {
        if !headers.iter().any(|h| h.trim() == field) {
            return Err(CorpusError::MissingField { line: 1, field });
        }
    }
    let mut records = Vec::new();
    let mut lines = Vec::new();
    for row in rdr.deserialize::<RawRow>() {
        let mut row = row.map_err(|e| CorpusError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        // the column is known to exist; an empty cell is an empty note
        row.text.get_or_insert_with(String::new);
        let line = lines.len() as u64 + 2;
        records.push(row.into_record(line)?);
        lines.push(line);
    }
    Corpus::from_records_with_lines(records, &lines)
}

fn parse_jsonl(content: &str) -> Result<Corpus> {
    let mut records = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in content.lines().enumerate() {
        let line = i as u64 + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let row: RawRow = serde_json::from_str(raw).map_err(|e| CorpusError::Parse {
            line,
            message: e.to_string(),
        })?;
        records.push(row.into_record(line)?);
        lines.push(line);
    }
    Corpus::from_records_with_lines(records, &lines)
}

/// Splits on whitespace, trims non-alphanumeric characters off both ends of
/// each token and lowercases it. Tokens left empty are dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let t = raw.trim_matches(|c: char| !c.is_alphanumeric());
            (!t.is_empty()).then(|| t.to_lowercase())
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabEntry {
    pub word_id: WordId,
    pub tokens: Vec<String>,
}

/// The matching rule applied to note text. There is only one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchingPolicy {
    #[default]
    ExactTokenSequence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    entries: Vec<VocabEntry>,
    policy: MatchingPolicy,
    by_first: HashMap<String, Vec<usize>>,
}

impl Vocabulary {
    /// Builds a vocabulary from raw surface strings; duplicates after
    /// normalization collapse onto the first occurrence.
    pub fn from_surfaces<I, S>(surfaces: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut entries: Vec<VocabEntry> = Vec::new();
        let mut seen = HashSet::new();
        for (i, s) in surfaces.into_iter().enumerate() {
            let tokens = tokenize(s.as_ref());
            if tokens.is_empty() {
                return Err(CorpusError::EmptyEntry {
                    line: i as u64 + 1,
                    entry: s.as_ref().to_string(),
                });
            }
            let id = tokens.join(" ");
            if seen.insert(id.clone()) {
                entries.push(VocabEntry {
                    word_id: WordId::from(id),
                    tokens,
                });
            }
        }
        Self::from_entries(entries)
    }

    fn from_entries(entries: Vec<VocabEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(CorpusError::EmptyVocabulary);
        }
        let mut by_first: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            by_first.entry(e.tokens[0].clone()).or_default().push(i);
        }
        Ok(Vocabulary {
            entries,
            policy: MatchingPolicy::default(),
            by_first,
        })
    }

    /// Keeps only the listed entries, in their original order.
    pub fn restrict(&self, keep: &BTreeSet<WordId>) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .filter(|e| keep.contains(&e.word_id))
            .cloned()
            .collect();
        Self::from_entries(entries)
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn policy(&self) -> MatchingPolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.entries.iter().any(|e| e.word_id.as_str() == id)
    }

    pub fn word_ids(&self) -> impl Iterator<Item = &WordId> {
        self.entries.iter().map(|e| &e.word_id)
    }

    /// One entry per line, in vocabulary order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            s.push_str(e.word_id.as_str());
            s.push('\n');
        }
        s
    }

    /// SHA-256 over the sorted word ids, independent of file layout.
    pub fn digest(&self) -> String {
        let ids: BTreeSet<&str> = self.entries.iter().map(|e| e.word_id.as_str()).collect();
        let mut buf = String::new();
        for id in ids {
            buf.push_str(id);
            buf.push('\n');
        }
        hex_digest(buf.as_bytes())
    }
}

pub fn load_vocabulary(path: &Path) -> Result<Vocabulary> {
    parse_vocabulary(&read_file(path)?)
}

/// One entry per line; blank lines and `#` comments are skipped.
pub fn parse_vocabulary(content: &str) -> Result<Vocabulary> {
    let mut surfaces = Vec::new();
    for (i, raw) in content.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if tokenize(line).is_empty() {
            return Err(CorpusError::EmptyEntry {
                line: i as u64 + 1,
                entry: line.to_string(),
            });
        }
        surfaces.push(line);
    }
    Vocabulary::from_surfaces(surfaces)
}

pub fn match_words(text: &str, vocab: &Vocabulary) -> BTreeSet<WordId> {
    let tokens = tokenize(text);
    let mut found = BTreeSet::new();
    for start in 0..tokens.len() {
        let Some(candidates) = vocab.by_first.get(&tokens[start]) else {
            continue;
        };
        for &i in candidates {
            let entry = &vocab.entries[i];
            let end = start + entry.tokens.len();
            if end <= tokens.len() && tokens[start..end] == entry.tokens[..] {
                found.insert(entry.word_id.clone());
            }
        }
    }
    found
}

/// The set of vocabulary words present in one note.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoteWordSet {
    pub note_id: NoteId,
    pub author_id: AgentId,
    pub words: BTreeSet<WordId>,
}

impl NoteWordSet {
    pub fn of(note: &Note, vocab: &Vocabulary) -> Self {
        NoteWordSet {
            note_id: note.note_id.clone(),
            author_id: note.author_id.clone(),
            words: match_words(&note.text, vocab),
        }
    }
}

/// Word sets for every note, in turn order.
pub fn note_word_sets(corpus: &Corpus, vocab: &Vocabulary) -> Vec<NoteWordSet> {
    corpus
        .notes()
        .iter()
        .map(|n| NoteWordSet::of(n, vocab))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationIssue {
    NoteMatchesNothing { note_id: NoteId },
    AgentMatchesNothing { agent_id: AgentId },
    DuplicateNoteId { note_id: NoteId },
    SeqGap { expected: usize, found: usize },
    TimestampOrder { note_id: NoteId },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub warnings: Vec<ValidationIssue>,
    pub errors: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty() && self.errors.is_empty()
    }
}

pub fn validate_corpus(corpus: &Corpus, vocab: &Vocabulary) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut ids = HashSet::new();
    let mut matched_agents: BTreeMap<&AgentId, bool> =
        corpus.agents().iter().map(|a| (a, false)).collect();
    let mut prev_ts = None;
    for (i, note) in corpus.notes().iter().enumerate() {
        if !ids.insert(&note.note_id) {
            report.errors.push(ValidationIssue::DuplicateNoteId {
                note_id: note.note_id.clone(),
            });
        }
        if note.seq != i + 1 {
            report.errors.push(ValidationIssue::SeqGap {
                expected: i + 1,
                found: note.seq,
            });
        }
        if prev_ts.is_some_and(|p| p > note.timestamp) {
            report.errors.push(ValidationIssue::TimestampOrder {
                note_id: note.note_id.clone(),
            });
        }
        prev_ts = Some(note.timestamp);
        if match_words(&note.text, vocab).is_empty() {
            report.warnings.push(ValidationIssue::NoteMatchesNothing {
                note_id: note.note_id.clone(),
            });
        } else if let Some(m) = matched_agents.get_mut(&note.author_id) {
            *m = true;
        }
    }
    for (agent, matched) in matched_agents {
        if !matched {
            report.warnings.push(ValidationIssue::AgentMatchesNothing {
                agent_id: agent.clone(),
            });
        }
    }
    report
}
