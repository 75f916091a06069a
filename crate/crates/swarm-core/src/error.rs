use core::fmt;

/// Errors shared by the whole crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on an argument was violated.
    InvalidArgument(&'static str),
    /// Geometrically degenerate input (coincident points, zero modulus, ...).
    DegenerateInput(&'static str),
    /// A point fell on (or too close to) a pole of a fractional map.
    /// Carries the offending agent id when known.
    Pole { agent: Option<usize> },
    /// Two patterns that should describe the same agents do not.
    MismatchedAgents,
    /// The simulation produced a non-finite value at the given tick.
    NumericDivergence { tick: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::DegenerateInput(msg) => write!(f, "degenerate input: {msg}"),
            Error::Pole { agent: Some(i) } => {
                write!(f, "agent {i} lies on a pole of the map")
            }
            Error::Pole { agent: None } => write!(f, "input lies on a pole of the map"),
            Error::MismatchedAgents => write!(f, "patterns have mismatched agents"),
            Error::NumericDivergence { tick } => {
                write!(f, "non-finite state at tick {tick}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
