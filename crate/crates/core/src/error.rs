use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("unknown flag {name:?}; valid flags are {valid}")]
    UnknownFlag { name: String, valid: String },

    #[error("invalid Buckwalter character {ch:?} at position {pos}")]
    Translit { pos: usize, ch: char },

    #[error("transliteration table line {line}: {msg}")]
    TranslitTable { line: usize, msg: String },

    #[error("{source_name} line {line}: {msg}")]
    Parse {
        source_name: String,
        line: usize,
        msg: String,
    },

    #[error("lexicon: {0}")]
    Lexicon(String),

    #[error("review batch still has pending candidates: {0}")]
    PendingCandidates(String),

    #[error("XML error at byte {pos}: {msg}")]
    Xml { pos: u64, msg: String },

    #[error("TEI document: {0}")]
    Tei(String),

    #[error("language model: {0}")]
    Model(String),

    #[error("evaluation: {0}")]
    Eval(String),
}

impl Error {
    pub(crate) fn parse(source_name: &str, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            msg: msg.into(),
        }
    }
}
