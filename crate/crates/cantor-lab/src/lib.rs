//! Desk-scale verification and synthesis toolkit for the finite
//! combinatorics of binary words and cylinder sets.
//!
//! The crate is organized around eight subsystems:
//!
//! - [`words`]: finite binary words, the length-then-lex enumeration, and
//!   the padded dense sequence.
//! - [`ruler`]: the 2-adic ruler function, ruler-generated 0/1 sequences,
//!   and finitely-described index sets with exact membership.
//! - [`level_graph`]: spanning trees on the words of each length, unique
//!   paths, and the breadth-first level ordering.
//! - [`cylinders`]: clopen-set algebra, prefix-rewrite maps, eventually
//!   periodic points, and exact relation deciders.
//! - [`conditions`]: window-translation and orthogonality conditions with
//!   replayable witness certificates.
//! - [`synthesizer`]: level-by-level construction of reduction tables,
//!   with an independent verifier.
//! - [`structures`]: doubling transforms on finite relations and the
//!   property-class analysis.
//! - [`kst`]: coordinate-rearrangement maps from nested index sets and
//!   their absorption law.
//!
//! The `examples/` directory has one runnable tour per subsystem; the
//! `cantor-lab` binary exposes the same checks as subcommands and the
//! [`suite`] module assembles them into deterministic JSON reports.

pub mod conditions;
pub mod cylinders;
pub mod kst;
pub mod level_graph;
pub mod ruler;
pub mod structures;
pub mod suite;
pub mod synthesizer;
pub mod words;
