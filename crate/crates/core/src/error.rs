use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter {letter} outside the alphabet 1..={alphabet}")]
    LetterOutOfRange { letter: u32, alphabet: u8 },
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u8),
    #[error("word {0} is periodic; split it into root and power first")]
    Periodic(String),
    #[error("empty word where a nonempty one is required")]
    Empty,
    #[error("malformed word literal {0:?}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(u8, u8),
    #[error("matrix unit needs |J| = |K| >= 1, got lengths {0} and {1}")]
    MatrixUnitShape(usize, usize),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("generator images violate the Cuntz relations: {0}")]
    NotCuntzFamily(String),
    #[error("permutation is not a bijection on words of length {0}")]
    NotBijective(usize),
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("{0} is not unitary")]
    NotUnitary(String),
    #[error("unknown morphism name {0:?}")]
    UnknownName(String),
    #[error("{0} is only defined for N = 3")]
    RequiresThreeGenerators(String),
    #[error("this map is only defined for N = 2")]
    RequiresTwoGenerators,
    #[error("malformed permutation {0:?}")]
    BadPermutation(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepsError {
    #[error("alphabet mismatch between representation ({0}) and operator ({1})")]
    AlphabetMismatch(u8, u8),
    #[error("orbit search exceeded {cap} steps from seed {seed}")]
    IterationCap { cap: usize, seed: String },
    #[error("orbit from seed {0} did not terminate in a recorded component")]
    Incomplete(String),
    #[error("morphism is not monomial: {0}")]
    NotMonomial(String),
    #[error("operation needs a cycle base")]
    NeedsCycle,
    #[error("not derivable by the GP rule calculus: {0}")]
    NotDerivable(String),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FermionError {
    #[error("fermion index must be at least 1, got {0}")]
    BadIndex(u32),
    #[error("mixture index {0} is not a half-integer")]
    NotHalfInteger(String),
    #[error("morphism does not preserve the gauge grade")]
    NotGradePreserving,
    #[error("unknown fermion representation {0:?}")]
    UnknownRep(String),
    #[error(transparent)]
    Reps(#[from] RepsError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("unknown table {0:?}")]
    UnknownTable(String),
    #[error("alphabet or order mismatch")]
    Mismatch,
    #[error("morphism does not preserve the gauge grade")]
    NotGradePreserving,
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Reps(#[from] RepsError),
}
