use thiserror::Error;

/// A problem in an automaton file, tagged with its 1-based line number
/// (0 when the file ended before a required line).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected `{0}` line")]
    MissingHeader(&'static str),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("invalid letter symbol `{0}` (expected a single lowercase ASCII character)")]
    BadSymbol(String),
    #[error("duplicate letter `{0}`")]
    DuplicateLetter(char),
    #[error("unknown letter `{0}`")]
    UnknownLetter(char),
    #[error("weight must be a positive integer, got `{0}`")]
    BadWeight(String),
    #[error("transition target `{0}` out of range")]
    TargetOutOfRange(String),
    #[error("letter `{sym}` has {got} transition targets, expected {expected}")]
    WrongArity {
        sym: char,
        expected: usize,
        got: usize,
    },
    #[error("transitions for `{0}` given twice")]
    DuplicateTransitions(char),
    #[error("no transitions given for letter `{0}`")]
    MissingTransitions(char),
    #[error("unexpected line: {0}")]
    Unexpected(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(char),
    #[error("m = {m} out of range, expected 2 <= m <= {n}")]
    MOutOfRange { m: usize, n: usize },
    #[error("automaton has {n} states, above the exact-search cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("subset must contain at least two states")]
    SubsetTooSmall,
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
