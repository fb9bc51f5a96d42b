//! Terms and formulas of the concept language: parsing, printing,
//! substitution and the syntactic classifiers.

mod ast;
mod classify;
mod parse;
mod print;
mod vars;

pub use ast::{Abstraction, Constant, Flavor, Formula, Ident, Sentence, SyntaxError, Term};
pub use classify::{
    box_delete, contains_bot, contains_box, is_implication_free, is_increasing, is_positive, level, universal_closure,
};
pub use parse::{parse_formula, parse_ident, parse_term, ParseError};
pub use vars::{
    alpha_eq, alpha_eq_term, canonical, free_vars, free_vars_term, fresh, occurs_free, substitute, substitute_term,
};
