use thiserror::Error;

use crate::game::Coalition;

/// Every failure mode of the engine.
///
/// Variants carry enough context to reproduce the failing input; the CLI maps
/// them onto stable machine-readable codes through [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("player count {0} is outside the supported range {1}..={2}")]
    PlayerCountOutOfRange(usize, usize, usize),
    #[error("coalition {0} is assigned more than once")]
    DuplicateCoalition(Coalition),
    #[error("the empty coalition must have worth 0")]
    NonzeroEmptySet,
    #[error("coalition {0} does not belong to a game on {1} players")]
    CoalitionOutOfRange(Coalition, usize),
    #[error("a unanimity game or subgame needs a nonempty carrier")]
    EmptyCarrier,
    #[error("games with different player counts cannot be combined")]
    MixedPlayerCounts,
    #[error("expected a nonempty list of games")]
    EmptyList,
    #[error("game is not additive: v({0}) differs from the sum of its singleton worths")]
    NotAdditive(Coalition),
    #[error("game is not in the required class: {0}")]
    NotInClass(String),
    #[error("game is not zero-monotone: {0}")]
    NotZeroMonotone(String),
    #[error("game is not weakly superadditive: v({0} + {1}) < v({0}) + v({1})")]
    NotWeaklySuperadditive(Coalition, usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("problem exceeds the desk-scale limit: {0}")]
    SizeLimit(String),
    #[error("cone contains a line")]
    NotPointed,
    #[error("constraint system has a nonzero right-hand side and is not a cone")]
    NotACone,
    #[error("point is outside the support of the fan")]
    OutsideSupport,
    #[error("invalid probabilistic weights: {0}")]
    InvalidWeights(String),
    #[error("the allocation set K is empty")]
    EmptyK,
    #[error("the allocation set K is unbounded")]
    UnboundedK,
    #[error("the given games do not form a basis of the game space")]
    NotABasis,
    #[error("no tabulated solution for generator {0}")]
    MissingTableEntry(usize),
    #[error("zero-normalized part of the game lies outside the cone")]
    OutsideCone,
    #[error("fan does not subdivide the given cone: {0}")]
    FanMismatch(String),
    #[error("games disagree on the worth of the grand coalition")]
    GrandCoalitionMismatch,
    #[error("invalid selector: {0}")]
    InvalidSelector(String),
    #[error("invalid permutation")]
    InvalidPermutation,
}

impl Error {
    /// Stable identifier used in serialized error documents.
    pub fn code(&self) -> &'static str {
        match self {
            Error::PlayerCountOutOfRange(..) => "PlayerCountOutOfRange",
            Error::DuplicateCoalition(_) => "DuplicateCoalition",
            Error::NonzeroEmptySet => "NonzeroEmptySet",
            Error::CoalitionOutOfRange(..) => "CoalitionOutOfRange",
            Error::EmptyCarrier => "EmptyCarrier",
            Error::MixedPlayerCounts => "MixedPlayerCounts",
            Error::EmptyList => "EmptyList",
            Error::NotAdditive(_) => "NotAdditive",
            Error::NotInClass(_) => "NotInClass",
            Error::NotZeroMonotone(_) => "NotZeroMonotone",
            Error::NotWeaklySuperadditive(..) => "NotWeaklySuperadditive",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::Unbounded => "Unbounded",
            Error::SizeLimit(_) => "SizeLimit",
            Error::NotPointed => "NotPointed",
            Error::NotACone => "NotACone",
            Error::OutsideSupport => "OutsideSupport",
            Error::InvalidWeights(_) => "InvalidWeights",
            Error::EmptyK => "EmptyK",
            Error::UnboundedK => "UnboundedK",
            Error::NotABasis => "NotABasis",
            Error::MissingTableEntry(_) => "MissingTableEntry",
            Error::OutsideCone => "OutsideCone",
            Error::FanMismatch(_) => "FanMismatch",
            Error::GrandCoalitionMismatch => "GrandCoalitionMismatch",
            Error::InvalidSelector(_) => "InvalidSelector",
            Error::InvalidPermutation => "InvalidPermutation",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
