//! Crate-wide error type.

use crate::topology::LinkId;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Generation targets cannot be met (e.g. density below the spanning
    /// tree minimum, or the search budget ran out).
    #[error("unreachable: {0}")]
    Unreachable(String),

    /// A structural invariant of a topology does not hold.
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    /// A link id was queried that is not a vertex of the conflict graph.
    #[error("link {0:?} is not a vertex of the conflict graph")]
    LinkNotInGraph(LinkId),

    /// Links whose endpoint radios share no common channel.
    #[error("broken links (no common channel): {}", format_links(.0))]
    BrokenLinks(Vec<LinkId>),

    /// An unknown channel assignment scheme label.
    #[error("unknown CA scheme: {0}")]
    UnknownScheme(String),

    /// Metric preconditions violated (empty input, parameter mismatch...).
    #[error("metric error: {0}")]
    Metric(String),

    /// Scenario construction could not find enough eligible flow endpoints.
    #[error("no eligible pairs: {0}")]
    NoEligiblePairs(String),

    /// Evaluation inputs are inconsistent (key mismatch, too few CAs...).
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// A text file failed to parse.
    #[error("parse error in {file} line {line}: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },

    /// Configuration file or value problem.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_links(links: &[LinkId]) -> String {
    links
        .iter()
        .map(|l| l.0.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

impl Error {
    /// Process exit code for the CLI: 2 for infeasible targets, 3 for
    /// any other runtime failure (1 is reserved for usage errors).
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Unreachable(_) => 2,
            _ => 3,
        }
    }
}
