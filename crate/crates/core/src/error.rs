use alloc::string::String;
use core::fmt;

/// Failures raised by the algebraic core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    ZeroElement,
    NoExtensionLayer,
    /// A second quadratic layer was requested on top of an existing one.
    NestedExtension,
    /// The declared extension generator is already a square.
    SquareGenerator,
    /// Two operands carry different quadratic extensions.
    ExtensionMismatch,
    /// A square root would need a constant outside Q(i).
    ConstantExtensionRequired,
    ZeroForm,
    NotSquarefree,
    UnsupportedFactorDegree(usize),
    UnexpectedRank { expected: usize, found: usize },
    WrongRank(usize),
    VertexOnHyperplane,
    NotOnQuadric,
    SingularPoint,
    RankNotTwo(usize),
    OddExchangeSet(usize),
    UnsupportedDegree(String),
    /// The square-class data forces an odd exchange, which no even-exchange
    /// action can realise.
    EvenExchangeViolated(String),
    NonIntegralLift,
    NotFiniteOrder,
    GroupTooLarge { order: usize, bound: usize },
    NotASubgroupImage,
    StarViolated(String),
    MissingTangentForm(usize),
    StepRejected { index: usize, reason: String },
    IndeterminateReduction,
    UnsupportedValuation(String),
    /// Malformed input caught by a constructor.
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroElement => f.write_str("zero element where a unit was required"),
            Error::NoExtensionLayer => f.write_str("operation needs a quadratic extension layer"),
            Error::NestedExtension => f.write_str("only one quadratic extension layer is supported"),
            Error::SquareGenerator => f.write_str("extension generator is already a square"),
            Error::ExtensionMismatch => f.write_str("operands live in different quadratic extensions"),
            Error::ConstantExtensionRequired => {
                f.write_str("square root needs a constant outside Q(i)")
            }
            Error::ZeroForm => f.write_str("binary form is identically zero"),
            Error::NotSquarefree => f.write_str("binary form is not squarefree"),
            Error::UnsupportedFactorDegree(d) => {
                write!(f, "irreducible factor of degree {d} in the degeneracy locus")
            }
            Error::UnexpectedRank { expected, found } => {
                write!(f, "expected a quadric of rank {expected}, found rank {found}")
            }
            Error::WrongRank(r) => write!(f, "wrong rank {r}"),
            Error::VertexOnHyperplane => f.write_str("hyperplane contains the vertex"),
            Error::NotOnQuadric => f.write_str("point does not lie on the quadric"),
            Error::SingularPoint => f.write_str("point is the vertex of the quadric"),
            Error::RankNotTwo(r) => write!(f, "tangent section has rank {r}, expected 2"),
            Error::OddExchangeSet(n) => write!(f, "odd exchange set of size {n}"),
            Error::UnsupportedDegree(s) => write!(f, "unsupported closed point: {s}"),
            Error::EvenExchangeViolated(s) => write!(f, "even-exchange condition violated: {s}"),
            Error::NonIntegralLift => f.write_str("(d - g d)/2 is not integral"),
            Error::NotFiniteOrder => f.write_str("matrix does not have the stated finite order"),
            Error::GroupTooLarge { order, bound } => {
                write!(f, "group of order {order} exceeds bound {bound}")
            }
            Error::NotASubgroupImage => f.write_str("restriction target is not a subgroup"),
            Error::StarViolated(s) => write!(f, "condition (*) fails: {s}"),
            Error::MissingTangentForm(i) => write!(f, "no tangent form for locus point {i}"),
            Error::StepRejected { index, reason } => {
                write!(f, "rewrite step {index} rejected: {reason}")
            }
            Error::IndeterminateReduction => f.write_str("slot entry reduces to zero"),
            Error::UnsupportedValuation(s) => write!(f, "unsupported valuation: {s}"),
            Error::Invalid(s) => f.write_str(s),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
