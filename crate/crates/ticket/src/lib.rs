//! Decision procedure for the implicational relevance logic with axioms B, B', I, W.
//!
//! Formulas are decided through normal inhabitants of a restricted lambda calculus,
//! their blueprints, and a bounded enumeration of compact shadows.

pub mod blueprint;
pub mod cli;
pub mod combinator;
pub mod compact;
pub mod formula;
pub mod oracle;
pub mod shadow;
pub mod term;
