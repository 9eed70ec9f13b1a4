//! Line-oriented transcript files.
//!
//! The first line is a header:
//! `ace-transcript/1 backend=<name> params=<hex> config=<hex> head=<hex> entries=<n>`.
//! Every following line is the base64 of one canonical [`BoardEntry`]. The
//! header repeats the genesis hashes and pins the chain head, so truncation
//! and edits to the last entry are caught as well.

use std::fmt::Write as _;
use std::path::Path;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;

use super::{BoardEntry, Transcript};
use crate::codec::CodecError;
use crate::group::{Backend, PrimeGroup, Ristretto, Tiny23};

pub const FILE_MAGIC: &str = "ace-transcript/1";

#[derive(Debug, thiserror::Error)]
pub enum PersistError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad transcript file: {0}")]
    Format(String),
    #[error("entry {line}: {source}")]
    Codec { line: usize, source: CodecError },
    #[error("integrity check failed: {0}")]
    Integrity(String),
}

struct Header {
    backend: Backend,
    params: [u8; 32],
    config: [u8; 32],
    head: [u8; 32],
    entries: usize,
}

fn parse_hash(v: &str, what: &str) -> Result<[u8; 32], PersistError> {
    let bytes = hex::decode(v).map_err(|_| PersistError::Format(format!("{what} is not hex")))?;
    bytes.try_into().map_err(|_| PersistError::Format(format!("{what} is not 32 bytes")))
}

fn parse_header(line: &str) -> Result<Header, PersistError> {
    let mut parts = line.split(' ');
    if parts.next() != Some(FILE_MAGIC) {
        return Err(PersistError::Format("missing format header".into()));
    }
    let mut fields = [None, None, None, None, None];
    const KEYS: [&str; 5] = ["backend", "params", "config", "head", "entries"];
    for p in parts {
        let (k, v) = p.split_once('=').ok_or_else(|| PersistError::Format(format!("bad header field {p:?}")))?;
        let idx = KEYS.iter().position(|key| *key == k).ok_or_else(|| PersistError::Format(format!("unknown key {k}")))?;
        if fields[idx].replace(v).is_some() {
            return Err(PersistError::Format(format!("repeated key {k}")));
        }
    }
    let get = |i: usize| fields[i].ok_or_else(|| PersistError::Format(format!("missing {}", KEYS[i])));
    let backend: Backend = get(0)?.parse().map_err(|_| PersistError::Format("unknown backend".into()))?;
    let entries = get(4)?;
    if entries.is_empty() || (entries.len() > 1 && entries.starts_with('0')) {
        return Err(PersistError::Format("bad entry count".into()));
    }
    Ok(Header {
        backend,
        params: parse_hash(get(1)?, "params")?,
        config: parse_hash(get(2)?, "config")?,
        head: parse_hash(get(3)?, "head")?,
        entries: entries.parse().map_err(|_| PersistError::Format("bad entry count".into()))?,
    })
}

impl<G: PrimeGroup> Transcript<G> {
    /// Serializes to the file format. Requires a genesis entry.
    pub fn to_file_string(&self) -> String {
        let (params, config) = self.params().map(|p| (p.params_hash, p.config_digest)).unwrap_or(([0; 32], [0; 32]));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{FILE_MAGIC} backend={} params={} config={} head={} entries={}",
            G::BACKEND.name(),
            hex::encode(params),
            hex::encode(config),
            hex::encode(self.head()),
            self.entries.len()
        );
        for e in &self.entries {
            out.push_str(&STANDARD.encode(e.to_bytes()));
            out.push('\n');
        }
        out
    }

    /// Decodes the file without checking the chain. Header fields and entry
    /// count are still enforced; a truncated file is a format error.
    pub fn parse_file_str(text: &str) -> Result<Self, PersistError> {
        Ok(Self::parse_with_header(text)?.0)
    }

    fn parse_with_header(text: &str) -> Result<(Self, Header), PersistError> {
        let body = text.strip_suffix('\n').ok_or_else(|| PersistError::Format("missing final newline".into()))?;
        let mut lines = body.split('\n');
        let header = parse_header(lines.next().unwrap_or_default())?;
        if header.backend != G::BACKEND {
            return Err(PersistError::Format(format!("file is for backend {}", header.backend)));
        }
        let mut entries = Vec::new();
        for (i, line) in lines.enumerate() {
            let bytes = STANDARD.decode(line).map_err(|_| PersistError::Format(format!("entry {i} is not base64")))?;
            entries.push(BoardEntry::from_bytes(&bytes).map_err(|source| PersistError::Codec { line: i, source })?);
        }
        if entries.len() != header.entries {
            return Err(PersistError::Format(format!(
                "header lists {} entries, file has {}",
                header.entries,
                entries.len()
            )));
        }
        Ok((Transcript { entries }, header))
    }

    /// Decodes the file and checks the chain against the header.
    pub fn from_file_str(text: &str) -> Result<Self, PersistError> {
        let (t, header) = Self::parse_with_header(text)?;
        t.verify_chain().map_err(|e| PersistError::Integrity(e.to_string()))?;
        if t.head() != header.head {
            return Err(PersistError::Integrity("chain head differs from header".into()));
        }
        let (params, config) = t.params().map(|p| (p.params_hash, p.config_digest)).unwrap_or(([0; 32], [0; 32]));
        if params != header.params || config != header.config {
            return Err(PersistError::Integrity("genesis hashes differ from header".into()));
        }
        Ok(t)
    }

    pub fn persist(&self, path: &Path) -> Result<(), PersistError> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }
}

pub fn load<G: PrimeGroup>(path: &Path) -> Result<Transcript<G>, PersistError> {
    Transcript::from_file_str(&read_text(path)?)
}

fn read_text(path: &Path) -> Result<String, PersistError> {
    let bytes = std::fs::read(path)?;
    String::from_utf8(bytes).map_err(|_| PersistError::Format("file is not UTF-8".into()))
}

/// A transcript whose backend was read from the file header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyTranscript {
    Production(Transcript<Ristretto>),
    TinyTest(Transcript<Tiny23>),
}

impl AnyTranscript {
    pub fn from_file_str(text: &str) -> Result<Self, PersistError> {
        let first = text.split('\n').next().unwrap_or_default();
        match parse_header(first)?.backend {
            Backend::Production => Ok(AnyTranscript::Production(Transcript::from_file_str(text)?)),
            Backend::TinyTest => Ok(AnyTranscript::TinyTest(Transcript::from_file_str(text)?)),
        }
    }

    /// Like [`AnyTranscript::from_file_str`] without the chain checks.
    pub fn parse_file_str(text: &str) -> Result<Self, PersistError> {
        let first = text.split('\n').next().unwrap_or_default();
        match parse_header(first)?.backend {
            Backend::Production => Ok(AnyTranscript::Production(Transcript::parse_file_str(text)?)),
            Backend::TinyTest => Ok(AnyTranscript::TinyTest(Transcript::parse_file_str(text)?)),
        }
    }
}

pub fn load_any(path: &Path) -> Result<AnyTranscript, PersistError> {
    AnyTranscript::from_file_str(&read_text(path)?)
}

/// Reads a transcript of either backend, leaving chain checks to the caller.
pub fn parse_any(path: &Path) -> Result<AnyTranscript, PersistError> {
    AnyTranscript::parse_file_str(&read_text(path)?)
}
