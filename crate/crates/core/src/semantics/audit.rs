//! Consistency audit of a saturated fragment: no axiom closure is
//! rejected, the rules preserve non-rejection, and `bot` is rejected.
//!
//! Every conclusion is relative to the fragment: quantifiers range over
//! its constant pool only.

use serde::Serialize;

use super::fragment::{Fragment, FragmentError, FragmentSpec, Node, NodeId};
use super::saturate::{saturate, SaturationError, Stage, StageFamily};
use crate::kernel::{instantiate_scheme, SchemeId, SchemeParams};
use crate::syntax::{free_vars, Constant, Formula, Ident, Term};

pub const FRAGMENT_RELATIVE: &str = "fragment-relative";

/// Closed instances of the axioms of CC expressible in the fragment,
/// grouped by scheme.
///
/// Unary schemes range over all parameters, binary ones over pairs of
/// generation-0 parameters. Quantified instances need a nonempty pool, and
/// comprehension is instantiated for each parameter whose constant is in
/// the pool.
pub fn axiom_instances(pool: &[Constant], parameters: &[Formula]) -> Vec<(SchemeId, Formula)> {
    let r = Ident::r();
    let quantified = !pool.is_empty();
    let base: Vec<&Formula> = parameters.iter().filter(|p| is_base(p)).collect();
    let close = |scheme, params| instantiate_scheme(scheme, &params).expect("parameters fit the scheme");
    let mut out = Vec::new();
    for p in parameters {
        out.push((SchemeId::Truth, close(SchemeId::Truth, SchemeParams::One(p.clone()))));
    }
    for (a, b) in base.iter().flat_map(|a| base.iter().map(move |b| (*a, *b))) {
        for scheme in [SchemeId::BoxAnd, SchemeId::BoxOr, SchemeId::BoxImp] {
            out.push((scheme, close(scheme, SchemeParams::Two(a.clone(), b.clone()))));
        }
    }
    if quantified {
        for p in parameters {
            for scheme in [SchemeId::BoxExists, SchemeId::BoxForall] {
                out.push((scheme, close(scheme, SchemeParams::Quantified(r.clone(), p.clone()))));
            }
        }
        out.push((
            SchemeId::Extensionality,
            close(
                SchemeId::Extensionality,
                SchemeParams::Terms(Term::var("x"), Term::var("y")),
            ),
        ));
        for p in parameters {
            let defines_pool_constant = pool
                .iter()
                .any(|c| c.definition() == Some(&crate::syntax::canonical(p)));
            if defines_pool_constant {
                out.push((
                    SchemeId::Comprehension,
                    close(
                        SchemeId::Comprehension,
                        SchemeParams::Comprehension(Ident::new("x"), p.clone()),
                    ),
                ));
            }
        }
    }
    out
}

/// A generation-0 parameter mentions no constant.
fn is_base(f: &Formula) -> bool {
    let mut constant = false;
    f.for_each_term(&mut |t| constant |= matches!(t, Term::Const(_)));
    !constant
}

/// Builds the fragment with the audited axiom closures among its roots.
pub fn audited_fragment(spec: &FragmentSpec) -> Result<Fragment, FragmentError> {
    Fragment::generate_with(spec, |pool, params| {
        axiom_instances(pool, params).into_iter().map(|(_, f)| f).collect()
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomFinding {
    pub scheme: String,
    pub instances: usize,
    /// Closures found in the final stage; expected empty.
    pub rejected: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleScan {
    pub rule: &'static str,
    pub applications: usize,
    pub violations: usize,
    /// Up to five offending conclusions.
    pub examples: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub scope: &'static str,
    pub axioms: Vec<AxiomFinding>,
    pub rules: Vec<RuleScan>,
    pub bot_rejected: bool,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.bot_rejected
            && self.axioms.iter().all(|a| a.rejected.is_empty())
            && self.rules.iter().all(|r| r.violations == 0)
    }

    pub fn rule(&self, name: &str) -> Option<&RuleScan> {
        self.rules.iter().find(|r| r.rule == name)
    }
}

struct Scanner<'a> {
    fragment: &'a Fragment,
    last: &'a Stage,
    scans: Vec<RuleScan>,
}

impl Scanner<'_> {
    fn accepted(&self, id: NodeId) -> bool {
        !self.last[id]
    }

    /// Records an application with accepted premises and its conclusion.
    fn apply(&mut self, rule: &'static str, conclusion: NodeId) {
        let ok = self.accepted(conclusion);
        let text = (!ok).then(|| self.fragment.sentences[conclusion].to_string());
        let scan = match self.scans.iter_mut().find(|s| s.rule == rule) {
            Some(s) => s,
            None => {
                self.scans.push(RuleScan {
                    rule,
                    applications: 0,
                    violations: 0,
                    examples: Vec::new(),
                });
                self.scans.last_mut().unwrap()
            }
        };
        scan.applications += 1;
        if let Some(text) = text {
            scan.violations += 1;
            if scan.examples.len() < 5 {
                scan.examples.push(text);
            }
        }
    }
}

/// Applies each rule to every premise combination of accepted sentences in
/// the fragment and counts conclusions that are rejected.
pub fn rule_scans(fragment: &Fragment, last: &Stage) -> Vec<RuleScan> {
    let mut s = Scanner {
        fragment,
        last,
        scans: Vec::new(),
    };
    for name in [
        "modus ponens",
        "and-intro",
        "and-elim",
        "or-intro",
        "unbox",
        "forall-elim",
        "exists-intro",
    ] {
        s.scans.push(RuleScan {
            rule: name,
            applications: 0,
            violations: 0,
            examples: Vec::new(),
        });
    }
    for (id, node) in fragment.nodes.iter().enumerate() {
        match node {
            Node::Imp(a, b) if s.accepted(id) && s.accepted(*a) => s.apply("modus ponens", *b),
            Node::And(a, b) => {
                if s.accepted(*a) && s.accepted(*b) {
                    s.apply("and-intro", id);
                }
                if s.accepted(id) {
                    s.apply("and-elim", *a);
                    s.apply("and-elim", *b);
                }
            }
            Node::Or(a, b) => {
                for part in [*a, *b] {
                    if s.accepted(part) {
                        s.apply("or-intro", id);
                    }
                }
            }
            Node::Box(a) if s.accepted(id) => s.apply("unbox", *a),
            Node::Forall(xs) if s.accepted(id) => {
                for x in xs {
                    s.apply("forall-elim", *x);
                }
            }
            Node::Exists(xs) => {
                for x in xs {
                    if s.accepted(*x) {
                        s.apply("exists-intro", id);
                    }
                }
            }
            _ => {}
        }
    }
    s.scans
}

pub fn audit_consistency(fragment: &Fragment, family: &StageFamily) -> AuditReport {
    let last = family.last();
    let mut axioms: Vec<AxiomFinding> = SchemeId::ALL
        .iter()
        .map(|s| AxiomFinding {
            scheme: scheme_label(*s),
            instances: 0,
            rejected: Vec::new(),
        })
        .collect();
    for (scheme, f) in axiom_instances(&fragment.pool, &fragment.parameters) {
        debug_assert!(free_vars(&f).is_empty());
        let finding = &mut axioms[usize::from(scheme.number()) - 1];
        finding.instances += 1;
        let id = fragment.lookup(&f).expect("axiom closures are fragment roots");
        if last[id] {
            finding.rejected.push(f.to_string());
        }
    }
    let bot = fragment.lookup(&Formula::Bot).expect("bot is a root");
    AuditReport {
        scope: FRAGMENT_RELATIVE,
        axioms,
        rules: rule_scans(fragment, last),
        bot_rejected: last[bot],
    }
}

fn scheme_label(s: SchemeId) -> String {
    match s {
        SchemeId::Extensionality => "extensionality".into(),
        SchemeId::Comprehension => "comprehension".into(),
        other => format!("axiom {}", other.number()),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Fragment(#[from] FragmentError),
    #[error(transparent)]
    Saturation(#[from] SaturationError),
}

/// Generates, saturates and audits.
pub fn run(spec: &FragmentSpec) -> Result<(Fragment, StageFamily, AuditReport), RunError> {
    let fragment = audited_fragment(spec)?;
    let family = saturate(&fragment)?;
    let report = audit_consistency(&fragment, &family);
    Ok((fragment, family, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn truth_axiom_for_bot_is_not_rejected() {
        let (frag, fam, report) = run(&FragmentSpec::new(0, 5)).unwrap();
        let id = frag.lookup(&parse_formula("bot -> []bot").unwrap()).unwrap();
        assert!(!fam.last()[id]);
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn depth_one_audit_passes() {
        let (_, _, report) = run(&FragmentSpec::new(1, 9)).unwrap();
        assert!(report.passed(), "{report:#?}");
        assert!(report.rule("modus ponens").unwrap().applications > 0);
        assert_eq!(report.axioms[7].instances, 12);
    }
}
