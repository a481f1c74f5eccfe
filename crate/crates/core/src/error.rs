use thiserror::Error;

/// Errors raised by chain construction, solving, analysis and simulation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `p_A = p_B = 0`: no rally is ever won by the server, so neither absorbing state is reachable.
    #[error("degenerate chain: p_A = p_B = 0 makes both absorbing states inaccessible")]
    DegenerateChain,

    /// A linear block of `I - Q` turned out singular.
    #[error("singular block of I - Q while eliminating states {0:?}")]
    SingularBlock(Vec<usize>),

    #[error("state {0} is not part of this state space")]
    InvalidState(String),

    /// Operation called with arguments that do not fit its shape.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// Closed-form denominator vanished at the evaluation point.
    #[error("denominator vanishes at {0}")]
    ZeroDenominator(String),

    /// A simulated game exceeded the rally guard; indicates a rules bug.
    #[error("simulated game exceeded {0} rallies")]
    Runaway(u64),
}

impl Error {
    /// Short machine-readable tag used in CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::DegenerateChain => "degenerate_chain",
            Error::SingularBlock(_) => "singular_block",
            Error::InvalidState(_) => "invalid_state",
            Error::Usage(_) => "usage",
            Error::Parse(_) => "parse",
            Error::ZeroDenominator(_) => "zero_denominator",
            Error::Runaway(_) => "runaway",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
