use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("degenerate line: spanning points are dependent")]
    DegenerateLine,
    #[error("matrix of size {0} is too small (need at least 4)")]
    TooSmall(usize),
    #[error("parameters outside validity range: N={n}, l={l} (need N >= 4 and 1 <= l <= 2N-5)")]
    OutOfRange { n: usize, l: usize },
    #[error("matrices are linearly dependent")]
    Dependent,
    #[error("singular matrix")]
    Singular,
    #[error("repeated root of the Pfaffian")]
    RepeatedRoot,
    #[error("irrational roots; irreducible factor degrees {0:?}")]
    IrrationalRoot(Vec<usize>),
    #[error("member of corank {corank} found at ({lambda}:{mu})")]
    HighCorank { corank: usize, lambda: String, mu: String },
    #[error("generality violated: {0}")]
    Generality(String),
    #[error("square root of {0} is not rational")]
    IrrationalSqrt(String),
    #[error("not an automorphism: matrix {index} has residual {residual}")]
    NotAutomorphism { index: usize, residual: String },
    #[error("line is not contained in the section")]
    LineNotInSection,
    #[error("no suitable instance found after {0} attempts")]
    RetryCap(usize),
    #[error("unrecognized normal form")]
    Unrecognized,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("triangle is a polar triangle")]
    IsPolarTriangle,
    #[error("distinct collinear vertices contradict smoothness of the conic")]
    CollinearVertices,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
