//! One error type for the whole crate, with a stable machine-readable kind
//! string for the CLI.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input contains no topes")]
    EmptyInput,

    #[error("line {line}: tope has length {found}, expected {expected}")]
    RaggedInput {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: bad symbol {symbol:?}, alphabet is exactly '+' and '-'")]
    BadSymbol { line: usize, symbol: char },

    #[error("tope set is not closed under negation: opposite of {tope} is missing")]
    NotSymmetric { tope: String },

    #[error("duplicate tope {tope} (line {line})")]
    Duplicate { tope: String, line: usize },

    #[error("ground elements {e} and {f} are {relation}: their sign columns coincide up to global sign")]
    ParallelElements {
        e: usize,
        f: usize,
        relation: &'static str,
    },

    #[error("ground index {index} out of range 1..={t}")]
    IndexOutOfRange { index: usize, t: usize },

    #[error("tope {tope} is not a member of the tope set")]
    NotSubset { tope: String },

    #[error("cardinality {k} out of range 1..={max}")]
    BadCardinality { k: usize, max: usize },

    #[error("vector has {found} components, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("expected an opposite-free count vector, got a general one")]
    WrongVariant,

    #[error("member-set size {h} out of range 1..={max}")]
    BadH { h: usize, max: usize },

    #[error("{what} budget exceeded: limit {limit}")]
    BudgetExceeded { what: &'static str, limit: u64 },

    #[error("{what} = {value} out of range {range}")]
    BadRange {
        what: &'static str,
        value: i64,
        range: &'static str,
    },

    #[error("not an antichain: {lower} is contained in {upper}")]
    BadAntichain { lower: String, upper: String },

    #[error("threshold {r} outside [0, 1)")]
    BadThreshold { r: String },

    #[error("floor(r*k)+1 = {needed} exceeds the minimum antichain rank {min_rank}")]
    ThresholdRankConflict { needed: u64, min_rank: u64 },

    #[error("{what} exceeds the supported size: {value} > {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("arrangement exceeds desk scale: d={d}, t={t} (limits d<=4, t<=8)")]
    ScaleExceeded { d: usize, t: usize },

    #[error("degenerate normals: {detail}")]
    DegenerateNormals { detail: String },

    #[error("unknown canonical instance {name:?}")]
    UnknownName { name: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path} line {line}: {msg}")]
    BadFile {
        path: PathBuf,
        line: usize,
        msg: String,
    },
}

impl Error {
    /// Stable identifier used as `error_kind` in CLI JSON output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyInput => "EmptyInput",
            Error::RaggedInput { .. } => "RaggedInput",
            Error::BadSymbol { .. } => "BadSymbol",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::Duplicate { .. } => "Duplicate",
            Error::ParallelElements { .. } => "ParallelElements",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::NotSubset { .. } => "NotSubset",
            Error::BadCardinality { .. } => "BadCardinality",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::WrongVariant => "WrongVariant",
            Error::BadH { .. } => "BadH",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::BadRange { .. } => "BadRange",
            Error::BadAntichain { .. } => "BadAntichain",
            Error::BadThreshold { .. } => "BadThreshold",
            Error::ThresholdRankConflict { .. } => "ThresholdRankConflict",
            Error::TooLarge { .. } => "TooLarge",
            Error::ScaleExceeded { .. } => "ScaleExceeded",
            Error::DegenerateNormals { .. } => "DegenerateNormals",
            Error::UnknownName { .. } => "UnknownName",
            Error::Io { .. } => "Io",
            Error::BadFile { .. } => "BadFile",
        }
    }

    /// CLI process exit code: 3 for exhausted budgets, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 3,
            _ => 2,
        }
    }
}
