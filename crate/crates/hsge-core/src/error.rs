//! Error types shared across the symbolic layer.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum KgError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file} file line {line}: expected {expected} tab-separated columns, found {found}")]
    Malformed {
        file: String,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("entity {label:?} has no type assignment")]
    UntypedEntity { label: String },
    #[error("unknown {kind} id {id}")]
    UnknownId { kind: &'static str, id: u32 },
}

#[derive(Debug, Error)]
pub enum LfError {
    #[error("type error at {path}: expected {expected}, found {found}")]
    Type {
        path: String,
        expected: String,
        found: String,
    },
    #[error("structure error at token {position}: {message}")]
    Structure { position: usize, message: String },
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown label {label:?} for {kind}")]
    UnknownLabel { kind: &'static str, label: String },
    #[error(transparent)]
    Kg(#[from] KgError),
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid world spec: {0}")]
    InvalidSpec(String),
    #[error("dialogue line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("gold form of turn {turn} does not execute to the stored answer")]
    GoldMismatch { turn: usize },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Lf(#[from] LfError),
    #[error(transparent)]
    Kg(#[from] KgError),
}
