//! Command implementations behind the `rotnet` binary.

pub mod server;

use std::fs;
use std::io;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use rotnet_core::corpus::CorpusFormat;
use rotnet_core::leadership::{
    generate_synthetic, synthetic_vocabulary, LeadershipError, SynthSpec,
};
use rotnet_core::netbuild::NetworkKind;
use rotnet_core::report::export::SnapshotFormat;
use rotnet_core::report::{AnalysisBundle, AnalyzeOptions, ReportError, Session};

#[derive(Debug, Parser)]
#[command(
    name = "rotnet",
    version,
    about = "Temporal discourse-network analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replay a corpus and write the analysis bundle
    Analyze {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "agent")]
        network: NetworkKind,
        /// Number of leadership episodes listed in the bundle
        #[arg(long, default_value_t = 5)]
        top_k: usize,
    },
    /// Export one network at one turn from a bundle
    Snapshot {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        turn: usize,
        #[arg(long, default_value = "agent")]
        kind: NetworkKind,
        #[arg(long, default_value = "json")]
        format: SnapshotFormat,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve analyses over HTTP on a local address
    Serve {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long, default_value = "127.0.0.1:7878")]
        addr: SocketAddr,
    },
    /// Generate a synthetic corpus and its vocabulary
    Gen {
        #[arg(long)]
        spec: PathBuf,
        /// Corpus output; `.jsonl` selects JSON lines, anything else CSV
        #[arg(long)]
        out: PathBuf,
        /// Vocabulary output; defaults to `<out stem>.vocab.txt`
        #[arg(long)]
        vocab_out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Synth(#[from] LeadershipError),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("{} is not a valid spec: {source}", path.display())]
    BadSpec {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("server error: {0}")]
    Serve(io::Error),
}

impl CliError {
    /// 2 for bad or missing inputs, 1 for failures while producing output.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Write { .. } | CliError::Serve(_) => 1,
            _ => 2,
        }
    }
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn analyze(
    corpus: &Path,
    vocab: &Path,
    out: &Path,
    options: AnalyzeOptions,
) -> Result<Session, CliError> {
    let session = Session::from_paths(corpus, vocab, options)?;
    write_file(out, session.bundle().to_json())?;
    Ok(session)
}

pub fn snapshot(
    bundle: &Path,
    turn: usize,
    kind: NetworkKind,
    format: SnapshotFormat,
    out: &Path,
) -> Result<(), CliError> {
    let bundle = AnalysisBundle::load(bundle)?;
    let doc = bundle
        .snapshot_doc(turn, kind, format)
        .map_err(ReportError::from)?;
    write_file(out, doc)
}

pub fn default_vocab_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("corpus");
    out.with_file_name(format!("{stem}.vocab.txt"))
}

pub fn gen(spec: &Path, out: &Path, vocab_out: Option<&Path>) -> Result<PathBuf, CliError> {
    let text = fs::read_to_string(spec).map_err(|source| CliError::Read {
        path: spec.to_path_buf(),
        source,
    })?;
    let spec_value: SynthSpec =
        serde_json::from_str(&text).map_err(|source| CliError::BadSpec {
            path: spec.to_path_buf(),
            source,
        })?;
    let corpus = generate_synthetic(&spec_value)?;
    let vocab = synthetic_vocabulary(&spec_value)?;
    let mut buf = Vec::new();
    match CorpusFormat::from_path(out) {
        CorpusFormat::Csv => corpus.write_csv(&mut buf),
        CorpusFormat::Jsonl => corpus.write_jsonl(&mut buf),
    }
    .expect("writing to a Vec cannot fail");
    write_file(out, buf)?;
    let vocab_path = vocab_out.map_or_else(|| default_vocab_path(out), Path::to_path_buf);
    write_file(&vocab_path, vocab.to_text())?;
    Ok(vocab_path)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze {
            corpus,
            vocab,
            out,
            network,
            top_k,
        } => {
            let session = analyze(&corpus, &vocab, &out, AnalyzeOptions { network, top_k })?;
            let b = session.bundle();
            eprintln!(
                "{} turns, {} agents; centralization mean {:.3} sd {:.3}; {} distinct leaders, {} changes",
                b.turns(),
                b.manifest.agent_count,
                b.summary.mean,
                b.summary.sd,
                b.leadership.distinct_leaders,
                b.leadership.change_count
            );
            for w in &b.warnings {
                eprintln!("warning: {}", serde_json::to_string(w).unwrap_or_default());
            }
            Ok(())
        }
        Command::Snapshot {
            bundle,
            turn,
            kind,
            format,
            out,
        } => snapshot(&bundle, turn, kind, format, &out),
        Command::Serve {
            corpus,
            vocab,
            addr,
        } => {
            let session = Session::from_paths(&corpus, &vocab, AnalyzeOptions::default())?;
            if !addr.ip().is_loopback() {
                eprintln!("warning: serving on non-loopback address {addr}");
            }
            let rt = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(CliError::Serve)?;
            rt.block_on(server::serve(session, addr))
                .map_err(CliError::Serve)
        }
        Command::Gen {
            spec,
            out,
            vocab_out,
        } => {
            let vocab_path = gen(&spec, &out, vocab_out.as_deref())?;
            eprintln!("wrote {} and {}", out.display(), vocab_path.display());
            Ok(())
        }
    }
}
