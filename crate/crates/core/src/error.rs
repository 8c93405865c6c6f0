use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground set must have between 1 and {max} elements, got {got}")]
    GroundSetSize { got: usize, max: usize },
    #[error("duplicate ground-set label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown ground-set label {0:?}")]
    UnknownLabel(String),
    #[error("operation would leave an empty ground set")]
    EmptyGroundSet,
    #[error("not a matroid: {0}")]
    NotAMatroid(String),
    #[error("every element is a loop")]
    AllLoops,
    #[error("sets must be disjoint")]
    DisjointnessViolated,
    #[error("set is not modular (violating flat {violating_flat:?})")]
    NotModular { violating_flat: Vec<String> },
    #[error("{0:?} is not a circuit-hyperplane")]
    NotCircuitHyperplane(Vec<String>),
    #[error("{0:?} is not a flat")]
    NotAFlat(Vec<String>),
    #[error("not a modular cut: {first:?} and {second:?} form a modular pair whose intersection is missing")]
    NotAModularCut {
        first: Vec<String>,
        second: Vec<String>,
    },
    #[error("label {0:?} already present")]
    LabelCollision(String),
    #[error("{0:?} is not a triangle")]
    NotATriangle(Vec<String>),
    #[error("the gluing triangle is not modular in either operand")]
    NotModularInEither,
    #[error("unsupported field order {0}")]
    UnsupportedField(usize),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error(
        "group of order {0} is too large for a rank-3 Dowling geometry on at most 16 elements"
    )]
    GroupTooLarge(usize),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("must-use element {0:?} is not in the host")]
    MustUseNotInHost(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("bad pool spec: {0}")]
    BadSpec(String),
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("excluded-minor test and representability search disagree for {0}")]
    CrossCheckMismatch(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
