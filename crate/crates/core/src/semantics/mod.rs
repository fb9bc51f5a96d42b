//! Finite fragments of the stagewise rejection construction, and their
//! consistency audit.

mod audit;
mod fragment;
mod saturate;

pub use audit::{
    audit_consistency, audited_fragment, axiom_instances, rule_scans, run, AuditReport, AxiomFinding, RuleScan,
    RunError, FRAGMENT_RELATIVE,
};
pub use fragment::{
    base_definitions, constant_term, definition_at, successor_definitions, Fragment, FragmentError, FragmentSpec, Node,
    NodeId,
};
pub use saturate::{level_order, saturate, saturate_in_order, saturation_step, SaturationError, Stage, StageFamily};
