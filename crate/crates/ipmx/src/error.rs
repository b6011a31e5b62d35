use std::fmt;

/// Errors surfaced by index construction and queries.
///
/// `ChainViolation` and `SparsityViolation` signal internal-consistency bugs:
/// structures that the combinatorics guarantee turned out malformed. They are
/// surfaced rather than silently repaired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The index requires a non-empty text.
    EmptyText,
    /// A fragment lies outside the host text.
    FragmentOutOfBounds { start: usize, end: usize, n: usize },
    /// A query precondition was violated (e.g. |y| > 2|x| for an IPM query).
    ConstraintViolation(&'static str),
    /// Progressions that were guaranteed to merge into one did not.
    ChainViolation(&'static str),
    /// A locator was handed a set that is not d-sparse.
    SparsityViolation {
        set: usize,
        a: usize,
        b: usize,
        d: usize,
    },
    /// The candidate-set retry loop exhausted its attempt budget.
    AttemptCap {
        attempts: u32,
        last_total: usize,
        budget: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyText => write!(f, "text must be non-empty"),
            Error::FragmentOutOfBounds { start, end, n } => {
                write!(f, "fragment [{start},{end}] out of bounds for text of length {n}")
            }
            Error::ConstraintViolation(what) => write!(f, "constraint violation: {what}"),
            Error::ChainViolation(what) => write!(f, "progression chain violation: {what}"),
            Error::SparsityViolation { set, a, b, d } => {
                write!(f, "set {set} is not {d}-sparse: positions {a} and {b}")
            }
            Error::AttemptCap { attempts, last_total, budget } => write!(
                f,
                "candidate construction exceeded {attempts} attempts (last total {last_total}, budget {budget})"
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
