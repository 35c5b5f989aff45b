use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size must be at least 2, got {0}")]
    InvalidAlphabet(usize),
    #[error("letter {letter} is out of range for an alphabet of size {alphabet}")]
    InvalidLetter { letter: usize, alphabet: usize },
    #[error("alphabet sizes differ: {0} vs {1}")]
    AlphabetMismatch(usize, usize),
    #[error("refinement map expects {expected} coarse letters, automaton has {found}")]
    RefinementMismatch { expected: usize, found: usize },
    #[error("rooted permutation of state {0} does not preserve block prefixes")]
    NotPrefixPreserving(usize),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i64),
    #[error("integer overflow during {0}")]
    Overflow(&'static str),
    #[error("word is not reduced at position {0}")]
    NotReduced(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape error: {0}")]
    Shape(String),
}
