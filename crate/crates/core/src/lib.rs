//! Proof checking and model construction for CC, a theory of constructive
//! concepts: a set-theoretic language with a provability box, extensionality
//! and a comprehension scheme whose right-hand side is boxed.
//!
//! * [`syntax`] parses, prints and classifies formulas.
//! * [`kernel`] checks natural-deduction proof scripts.
//! * [`theories`] describes CC, its definitional extensions and the box-free
//!   target theories.
//! * [`interp`] checks weak-interpretation certificates by box deletion.
//! * [`semantics`] builds finite fragments of the stagewise rejection
//!   construction and audits them.
//! * [`corpus`] bundles the derivations and certificates.

pub mod corpus;
pub mod interp;
pub mod kernel;
pub mod semantics;
pub mod syntax;
pub mod theories;
