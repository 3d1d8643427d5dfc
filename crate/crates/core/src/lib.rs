//! A proof checker, cut eliminator, finite model finder and bounded prover
//! for a classical sequent calculus with predicate abstracts and Russellian
//! definite descriptions.

pub mod cli;
pub mod cutelim;
pub mod fixtures;
pub mod kernel;
pub mod parse;
pub mod print;
pub mod search;
pub mod semantics;
pub mod proof;
mod stack;
pub mod syntax;
pub mod translate;

pub use kernel::{check_proof, KernelOptions, Proof, Rejection};
pub use parse::{parse_formula, parse_proof, parse_sequent, ParseError, SourceText};
pub use proof::{Annotations, ProofNode, Rule};
pub use syntax::{alpha_equal, substitute, Formula, LamArg, NameSupply, Sequent, Term};
