//! Corecursive and completely iterative algebras over finitary signatures.
//!
//! The engine solves flat guarded equation systems uniquely as rational
//! Σ-trees, decomposes solutions for unary signatures into a finite-word part
//! and an eventually periodic stream part, works with presentations of
//! finitary set functors by flat equations, and checks corecursiveness and
//! complete iterativity of finite algebras by exhaustive enumeration.

pub mod algebra;
pub mod checker;
pub mod error;
mod graph;
pub mod lasso;
pub mod presentation;
pub mod rtree;
pub mod solver;
pub mod term;

pub use algebra::FiniteAlgebra;
pub use error::{Error, Result};
pub use lasso::Lasso;
pub use presentation::{Presentation, Verdict3};
pub use rtree::{LeafCount, RationalTree, Step};
pub use term::{is_reserved, Atom, EquationSystem, FiniteTree, FlatTerm, Rhs, Signature, Symbol, BOTTOM, BOTTOM_ASCII};

/// Upper bound on the size of an exhaustive enumeration or saturation.
///
/// Operations check the size of the space they are about to enumerate
/// against the budget up front and fail with
/// [`Error::SizeLimitExceeded`] instead of truncating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Budget(u64);

impl Budget {
    pub const DEFAULT: u64 = 1_000_000;

    pub fn new(limit: u64) -> Self {
        Budget(limit.max(1))
    }

    pub fn limit(self) -> u64 {
        self.0
    }

    pub fn check(self, needed: u128) -> Result<()> {
        if needed > u128::from(self.0) {
            Err(Error::SizeLimitExceeded {
                needed,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget(Self::DEFAULT)
    }
}
