//! Satisfiability of cnf-xor formulas: a CDCL core coupled with a parity reasoner that
//! finds every implied literal by incremental Gauss-Jordan elimination, split along the
//! biconnected components of the xor-part.

pub mod bits;
pub mod cdcl;
pub mod decompose;
pub mod dimacs;
pub mod eliminate;
pub mod formula;
pub mod oracle;
pub mod pipeline;
pub mod preprocess;
pub mod tableau;
pub mod xorengine;

pub use formula::{Assignment, Clause, CnfXorFormula, Lit, Var, XorConstraint};
