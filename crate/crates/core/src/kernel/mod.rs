//! Natural-deduction proof checking.

mod check;
mod leibniz;
mod schemes;
mod script;

pub use check::{check_lines, check_proof, CheckError, Verdict};
pub use leibniz::is_replacement;
pub use schemes::{
    extract_params, instantiate_open, instantiate_scheme, match_scheme, SchemeError, SchemeId, SchemeMatch,
    SchemeParams,
};
pub use script::{parse_script, ProofLine, ProofScript, RuleId, ScriptError, UnknownRule};
