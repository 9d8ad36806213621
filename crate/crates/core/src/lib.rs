//! Exact PSL₂(C) and SL₂(C) Casson invariants for Seifert fibered homology
//! spheres, small Seifert fibered spaces over S²(p,q,r), and odd-numerator
//! surgeries on twist knots, together with the homology groups, character
//! censuses, and a brute-force character-enumeration oracle used to check
//! the closed forms.
//!
//! All values are exact: invariants are [`QuarterRational`]s and every
//! integer operation is overflow-checked.

pub mod arith;
pub mod formulas;
pub mod manifold;
pub mod oracle;
pub mod report;
pub mod snf;

pub use arith::QuarterRational;
pub use formulas::{CharacterCensus, InvariantReport};
pub use manifold::{
    parse_manifold_expr, ManifoldExpr, ManifoldSpec, SeifertHSSpec, SmallSeifertSpec, TwistSurgerySpec,
};
pub use snf::{AbelianGroup, IntMatrix};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] arith::ArithError),
    #[error(transparent)]
    Snf(#[from] snf::SnfError),
    #[error(transparent)]
    Validation(#[from] manifold::ValidationError),
    #[error(transparent)]
    Parse(#[from] manifold::ParseError),
    #[error("enumeration of {size} class triples exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("SL(2,C) value {0} is not an integer")]
    NonIntegralSl(QuarterRational),
}

pub type Result<T> = std::result::Result<T, Error>;
