use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate entry `{surface}`")]
    Duplicate { line: usize, surface: String },
    #[error("line {line}: irregular form `{form}` refers to unknown root `{root}`")]
    UnknownRoot { line: usize, root: String, form: String },
    #[error("line {line}: `{form}` is the regular {kind} of `{root}`, not an irregular one")]
    RegularForm {
        line: usize,
        root: String,
        kind: String,
        form: String,
    },
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorphologyError {
    #[error("`{0}` is not on the word list")]
    NotListed(String),
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("input is not valid UTF-8 (byte offset {0})")]
    InvalidUtf8(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalyzeError {
    #[error("coverage is undefined for an empty corpus")]
    EmptyCorpus,
}

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("sample is empty")]
    Empty,
    #[error("sample values must be positive integers (got {0})")]
    NonPositive(u64),
    #[error("degenerate sample: all values equal {0}")]
    Degenerate(u64),
    #[error("tail at xmin = {xmin} has {size} point(s); at least two distinct values are required")]
    DegenerateTail { xmin: u64, size: usize },
    #[error("xmin mismatch between fits ({power_law} vs {exponential})")]
    XminMismatch { power_law: u64, exponential: u64 },
}
