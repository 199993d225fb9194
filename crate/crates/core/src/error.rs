use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the momentum library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate entity id `{0}`")]
    DuplicateId(String),

    #[error("entity `{id}` has negative score {score}")]
    NegativeScore { id: String, score: f64 },

    #[error("entity `{id}` has a non-finite {field}")]
    NonFinite { id: String, field: &'static str },

    #[error("entity id must not be empty")]
    EmptyId,

    #[error("the delta system has no entities")]
    EmptySystem,

    #[error("no entity with id `{0}`")]
    UnknownEntity(String),

    #[error("entity `{0}` is not a momentum leader")]
    NotALeader(String),

    #[error("weights require scores for every entity")]
    ScoresUnavailable,

    #[error("total score is zero; weights are undefined")]
    ZeroTotalScore,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{}", parse_location(.path, .line, .column, .message))]
    Parse {
        path: Option<PathBuf>,
        line: Option<u64>,
        column: Option<String>,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn parse_location(
    path: &Option<PathBuf>,
    line: &Option<u64>,
    column: &Option<String>,
    message: &str,
) -> String {
    let mut out = String::new();
    if let Some(path) = path {
        out.push_str(&path.display().to_string());
        out.push_str(": ");
    }
    if let Some(line) = line {
        out.push_str(&format!("line {line}: "));
    }
    if let Some(column) = column {
        out.push_str(&format!("column `{column}`: "));
    }
    out.push_str(message);
    out
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
