use crate::graph::VertexId;

/// Errors produced by the library.
///
/// Variants are grouped into coarse [`ErrorKind`]s so front ends can map
/// them onto exit codes without matching every variant.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("graph is empty")]
    EmptyGraph,

    #[error("line {line}: {message} (near `{token}`)")]
    Parse {
        line: usize,
        token: String,
        message: String,
    },

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("degenerate embedding: pair {index} has zero embedding distance at graph distance {graph_distance}")]
    DegenerateEmbedding { index: usize, graph_distance: f64 },

    #[error("missing data for {} vertices: {missing:?}", missing.len())]
    Coverage { missing: Vec<VertexId> },

    #[error("unknown tokens: {tokens:?}")]
    UnknownTokens { tokens: Vec<String> },

    #[error("instance too large: {what} is {actual}, limit {limit}")]
    SizeGuard {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("bound is vacuous: group distance is unreachable")]
    VacuousBound,

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Argument,
    Parse,
    Coverage,
    Invariant,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. } | Error::UnknownTokens { .. } => ErrorKind::Parse,
            Error::Coverage { .. } => ErrorKind::Coverage,
            Error::Invariant(_) => ErrorKind::Invariant,
            Error::Io(_) => ErrorKind::Io,
            Error::EmptyGraph
            | Error::VertexOutOfRange { .. }
            | Error::Argument(_)
            | Error::DegenerateEmbedding { .. }
            | Error::SizeGuard { .. }
            | Error::VacuousBound => ErrorKind::Argument,
        }
    }

    pub(crate) fn parse(line: usize, token: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            token: token.into(),
            message: message.into(),
        }
    }

    pub(crate) fn arg(message: impl Into<String>) -> Self {
        Error::Argument(message.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
