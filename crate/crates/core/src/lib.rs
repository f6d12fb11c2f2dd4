//! Finite relational structures and the machinery around them: morphism
//! search, permutation orbits and reversibility, a small first-order formula
//! language with syntactic classes, extremal membership/maximality search,
//! a gallery of graph constructions, and condensation-order censuses.

pub mod condorder;
pub mod error;
pub mod extremal;
pub mod formula;
pub mod gallery;
pub mod morphism;
pub mod structure;

pub use condorder::CondOrderCensus;
pub use error::{Error, Result};
pub use extremal::{
    Builtin, CensusWhat, ChainOp, ClassSpec, DefBound, Direction, ExtremeReport, Guarantee,
    SearchMode, TieBreak,
};
pub use formula::{Formula, SyntacticClass, Valuation};
pub use gallery::{Deg2Classification, HensonDefect};
pub use morphism::MorphismKind;
pub use structure::{DomainMap, Signature, Structure};
