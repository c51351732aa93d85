//! Templates for Answer Set Programming.
//!
//! A template is a named set of rules. Predicates whose name starts with a
//! double underscore are local to each application of a template and are
//! renamed with a freshly generated UUID suffix, so expanded programs can be
//! concatenated with any other program without name clashes. The crate also
//! provides a desk-scale model theory (stable, here-and-there and equilibrium
//! models) used to check template invariants.

pub mod syntax;
pub mod semantics;
pub mod templates;
pub mod validation;
pub mod corelib;
