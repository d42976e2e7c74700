use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("instance sequence is empty")]
    EmptySequence,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("schedule has {len} entries but round {round} was requested")]
    ScheduleExhausted { round: usize, len: usize },

    #[error("oracle failure at round {round}: {source}")]
    OracleFailure {
        round: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("malformed linear program: {0}")]
    MalformedProgram(String),

    /// The unrestricted LP has no unique nondegenerate optimum for this objective.
    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),

    #[error("restricted linear program is infeasible")]
    InfeasibleRestriction,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("witness requested for a bottom output")]
    BotWitness,

    #[error("universe id {id} out of range for universe of size {size}")]
    IdOutOfRange { id: usize, size: usize },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
