use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("duplicate edge between s{0} and s{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge s{0}-s{1} has label {2}, labels must be at least 3")]
    LabelBelow3(usize, usize, u32),
    #[error("coxeter graph is disconnected")]
    DisconnectedGraph,
    #[error("coxeter graph is neither a tree nor a cycle")]
    NotTreeOrCycle,
    #[error("generator s{0} is outside 1..={1}")]
    GeneratorOutOfRange(usize, usize),
    #[error("word problem search exceeded its budget of {0} visited words")]
    SearchBudgetExceeded(usize),
    #[error("graph has no root")]
    NoRoot,
    #[error("element is not below the boolean reflection or the pair is not comparable")]
    NotBelow,
    #[error("element is not a minimal coset representative for J")]
    NotInQuotient,
    #[error("parabolic subgroup exceeds {0} elements")]
    ParabolicSubgroupTooLarge(usize),
    #[error("diagram is not a tree diagram")]
    NotTreeDiagram,
    #[error("diagram is not a cyclic diagram")]
    NotCycleDiagram,
    #[error("invalid window notation: {0}")]
    InvalidWindow(String),
    #[error("window is not a boolean element")]
    NotBooleanWindow,
    #[error("permutations are not comparable in Bruhat order")]
    NotComparable,
    #[error("element is not below the chosen maximal boolean reflection")]
    WrongVariant,
    #[error("closed formula needs a tree with at most one branch vertex")]
    UnsupportedGraphShape,
    #[error("closed formula is outside its hypotheses: {0}")]
    FormulaHypothesis(String),
    #[error("generator s{0} is not a leftmost vertex of the diagram")]
    NotLeftmost(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
