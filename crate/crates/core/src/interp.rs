//! Weak interpretations by box deletion.
//!
//! A certificate lists target-theory formulas, each with a source-theory
//! proof whose goal loses its boxes to become the target.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{check_proof, parse_script, ProofLine, ProofScript, RuleId, Verdict};
use crate::syntax::{
    alpha_eq, box_delete, is_increasing, parse_formula, substitute, universal_closure, Formula, Ident, Term,
};
use crate::theories::{TheoryDescriptor, TheoryId, TheoryScheme};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EntryVerdict {
    Accepted,
    MissingProof,
    LoadFailed {
        message: String,
    },
    ScriptMalformed {
        message: String,
    },
    /// The script's theory is not contained in the certificate's source.
    WrongTheory {
        script: TheoryId,
        source: TheoryId,
    },
    KernelRejected {
        line: usize,
        error: String,
    },
    ErasureMismatch {
        erased: String,
        target: String,
        left: String,
        right: String,
    },
    NotIncreasing {
        goal: String,
    },
}

impl EntryVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, EntryVerdict::Accepted)
    }
}

/// The first pair of corresponding subformulas that differ, in preorder.
pub fn first_difference(a: &Formula, b: &Formula) -> Option<(Formula, Formula)> {
    if alpha_eq(a, b) {
        return None;
    }
    let pair = || Some((a.clone(), b.clone()));
    match (a, b) {
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Imp(a1, a2), Formula::Imp(b1, b2)) => first_difference(a1, b1)
            .or_else(|| first_difference(a2, b2))
            .or_else(pair),
        (Formula::Box(a1), Formula::Box(b1)) => first_difference(a1, b1),
        (Formula::Forall(x, a1), Formula::Forall(y, b1)) | (Formula::Exists(x, a1), Formula::Exists(y, b1))
            if x == y =>
        {
            first_difference(a1, b1).or_else(pair)
        }
        _ => pair(),
    }
}

/// Accepts when the script checks, its goal is increasing, and deleting
/// the goal's boxes gives `target` up to renaming of bound variables.
pub fn erase_and_match(script: &ProofScript, target: &Formula) -> EntryVerdict {
    if let Verdict::Rejected { line, error } = check_proof(script) {
        return EntryVerdict::KernelRejected {
            line,
            error: error.to_string(),
        };
    }
    let erased = box_delete(&script.goal);
    if let Some((left, right)) = first_difference(&erased, target) {
        return EntryVerdict::ErasureMismatch {
            erased: erased.to_string(),
            target: target.to_string(),
            left: left.to_string(),
            right: right.to_string(),
        };
    }
    if !is_increasing(&script.goal) {
        return EntryVerdict::NotIncreasing {
            goal: script.goal.to_string(),
        };
    }
    EntryVerdict::Accepted
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateEntry {
    pub target: Formula,
    /// Path of the proof script, resolved by the caller's loader.
    pub proof: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpretationCertificate {
    pub source: TheoryId,
    pub target: TheoryId,
    pub entries: Vec<CertificateEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
}

/// Parses the certificate format:
///
/// ```text
/// source CC''
/// target PA2-
/// target: 0 in omega
/// proof: cc2/zero_in_omega.proof
/// ```
pub fn parse_certificate(text: &str) -> Result<InterpretationCertificate, CertificateError> {
    let mut source = None;
    let mut target = None;
    let mut entries: Vec<CertificateEntry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        let malformed = |message: String| CertificateError::Malformed { line, message };
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("target:") {
            let f = parse_formula(rest).map_err(|e| malformed(e.to_string()))?;
            entries.push(CertificateEntry { target: f, proof: None });
        } else if let Some(rest) = trimmed.strip_prefix("proof:") {
            let entry = entries
                .last_mut()
                .ok_or_else(|| malformed("`proof:` before any `target:`".into()))?;
            if entry.proof.is_some() {
                return Err(malformed("entry already has a proof".into()));
            }
            entry.proof = Some(rest.trim().to_string());
        } else if let Some(rest) = trimmed.strip_prefix("source ") {
            source = Some(
                rest.trim()
                    .parse()
                    .map_err(|e: crate::theories::UnknownTheory| malformed(e.to_string()))?,
            );
        } else if let Some(rest) = trimmed.strip_prefix("target ") {
            target = Some(
                rest.trim()
                    .parse()
                    .map_err(|e: crate::theories::UnknownTheory| malformed(e.to_string()))?,
            );
        } else {
            return Err(malformed(format!("unexpected `{trimmed}`")));
        }
    }
    Ok(InterpretationCertificate {
        source: source.ok_or(CertificateError::MissingHeader("source"))?,
        target: target.ok_or(CertificateError::MissingHeader("target"))?,
        entries,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub index: usize,
    pub target: String,
    pub proof: Option<String>,
    /// The axiom or scheme of the target theory this entry instantiates.
    pub target_axiom: Option<String>,
    #[serde(flatten)]
    pub verdict: EntryVerdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub source: TheoryId,
    pub target: TheoryId,
    pub entries: Vec<EntryReport>,
    pub accepted: usize,
    pub rejected: usize,
    /// Axioms and schemes of the target theory with no accepted entry.
    pub uncovered: Vec<String>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.rejected == 0
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("certificate {} -> {}\n", self.source, self.target);
        for e in &self.entries {
            let status = if e.verdict.is_accepted() {
                "ACCEPTED"
            } else {
                "REJECTED"
            };
            let _ = writeln!(out, "  [{status}] #{} {}", e.index, e.target);
            if !e.verdict.is_accepted() {
                let _ = writeln!(out, "      {:?}", e.verdict);
            }
        }
        let _ = writeln!(out, "  {} accepted, {} rejected", self.accepted, self.rejected);
        if !self.uncovered.is_empty() {
            let _ = writeln!(out, "  uncovered: {}", self.uncovered.join(", "));
        }
        out
    }
}

/// Which closed axiom or scheme of `theory` the formula is, if any.
pub fn target_axiom(theory: &TheoryDescriptor, f: &Formula) -> Option<String> {
    if let Some(a) = theory.closed_axioms.iter().find(|a| alpha_eq(&a.formula, f)) {
        return Some(a.name.to_string());
    }
    let mut candidate = f;
    loop {
        if let Some(s) = theory.schemes.iter().find(|s| s.recognize(candidate).is_some()) {
            return Some(s.name().to_string());
        }
        match candidate {
            Formula::Forall(_, body) => candidate = body,
            _ => return None,
        }
    }
}

fn check_entry(
    cert: &InterpretationCertificate,
    entry: &CertificateEntry,
    load: &dyn Fn(&str) -> Result<String, String>,
) -> EntryVerdict {
    let Some(path) = &entry.proof else {
        return EntryVerdict::MissingProof;
    };
    let text = match load(path) {
        Ok(t) => t,
        Err(message) => return EntryVerdict::LoadFailed { message },
    };
    let script = match parse_script(&text) {
        Ok(s) => s,
        Err(e) => return EntryVerdict::ScriptMalformed { message: e.to_string() },
    };
    if !cert.source.extends(script.theory) {
        return EntryVerdict::WrongTheory {
            script: script.theory,
            source: cert.source,
        };
    }
    erase_and_match(&script, &entry.target)
}

/// Checks every entry. `load` resolves `proof:` paths to script text.
pub fn check_certificate(
    cert: &InterpretationCertificate,
    load: &dyn Fn(&str) -> Result<String, String>,
) -> CertificateReport {
    let theory = TheoryDescriptor::get(cert.target);
    let entries: Vec<EntryReport> = cert
        .entries
        .iter()
        .enumerate()
        .map(|(i, entry)| EntryReport {
            index: i + 1,
            target: entry.target.to_string(),
            proof: entry.proof.clone(),
            target_axiom: target_axiom(&theory, &entry.target),
            verdict: check_entry(cert, entry, load),
        })
        .collect();
    let accepted = entries.iter().filter(|e| e.verdict.is_accepted()).count();
    let covered: Vec<&str> = entries
        .iter()
        .filter(|e| e.verdict.is_accepted())
        .filter_map(|e| e.target_axiom.as_deref())
        .collect();
    let uncovered = theory
        .closed_axioms
        .iter()
        .map(|a| a.name)
        .chain(theory.schemes.iter().map(|s| s.name()))
        .filter(|name| !covered.contains(name))
        .map(str::to_string)
        .collect();
    CertificateReport {
        source: cert.source,
        target: cert.target,
        rejected: entries.len() - accepted,
        accepted,
        entries,
        uncovered,
    }
}

/// Positive bodies of the bundled abstraction instances, as `(binder, body)`.
pub fn comprehension_bodies() -> Vec<(Ident, Formula)> {
    [
        "x in x",
        "x = z",
        "exists w. (x in w & w in x)",
        "forall w. (w in x | x in w)",
        "x in a | a in x",
    ]
    .iter()
    .map(|src| (Ident::new("x"), parse_formula(src).expect("bundled body parses")))
    .collect()
}

/// A CC' derivation of the closed abstraction axiom for a positive body,
/// with `y` (or a fresh variant) as the member. Its box deletion is the
/// matching COMP comprehension instance, returned alongside.
pub fn abstraction_template(binder: &Ident, body: &Formula) -> Result<(ProofScript, Formula), String> {
    let mut avoid = crate::syntax::free_vars(body);
    avoid.insert(binder.clone());
    let y = Ident::new("y");
    let member = if avoid.contains(&y) {
        crate::syntax::fresh(&y, &avoid)
    } else {
        y
    };
    let inst = TheoryScheme::BoxedAbstraction
        .instantiate(binder, &Formula::boxed(body.clone()), &Term::Var(member))
        .map_err(|e| e.to_string())?;
    let target = box_delete(&universal_closure(&inst).into_formula());
    // rejects bodies that are not positive
    TheoryScheme::PositiveComprehension
        .instantiate(binder, body, &Term::var("y"))
        .map_err(|e| e.to_string())?;

    let mut lines = vec![ProofLine::new(
        1,
        inst.clone(),
        RuleId::TheoryAxiom("abstraction".into()),
        &[],
    )];
    let mut current = inst.clone();
    for v in crate::syntax::free_vars(&inst).into_iter().rev() {
        current = Formula::Forall(v.clone(), Box::new(current));
        let n = lines.len() + 1;
        let mut line = ProofLine::new(n, current.clone(), RuleId::ForallIntro, &[n - 1]);
        line.var = Some(v);
        lines.push(line);
    }
    Ok((
        ProofScript {
            theory: TheoryId::CcPrime,
            goal: current,
            lines,
        },
        target,
    ))
}

#[derive(Debug, Clone)]
pub struct InconsistencyDemo {
    /// The two Russell theorems of CC with their boxes deleted.
    pub pair: [Formula; 2],
    /// The comprehension instance for the Russell concept, boxes deleted.
    pub comprehension: Formula,
    /// Pure intuitionistic derivation of `pair -> comprehension -> bot`.
    pub script: ProofScript,
    /// The same derivation attempted in CC with the boxes left in place.
    pub boxed_script: ProofScript,
}

fn consequent(f: &Formula) -> Formula {
    match f {
        Formula::Imp(_, b) => (**b).clone(),
        other => panic!("expected an implication, found {other}"),
    }
}

fn russell_script(theory: TheoryId, first: &Formula, second: &Formula, comprehension: &Formula) -> ProofScript {
    let Formula::Exists(x, body) = comprehension else {
        panic!("comprehension instance is existential")
    };
    let xv = Term::Var(x.clone());
    let inst = |f: &Formula| match f {
        Formula::Forall(v, b) => substitute(b, v, &xv),
        other => panic!("expected a universal formula, found {other}"),
    };
    let l5 = inst(first);
    let l7 = inst(second);
    let mut lines = vec![
        ProofLine::new(1, first.clone(), RuleId::Assume, &[]),
        ProofLine::new(2, second.clone(), RuleId::Assume, &[]),
        ProofLine::new(3, comprehension.clone(), RuleId::Assume, &[]),
        ProofLine::new(4, (**body).clone(), RuleId::Assume, &[]),
        ProofLine::new(5, l5.clone(), RuleId::ForallElim, &[1]),
        ProofLine::new(6, consequent(&l5), RuleId::ImplElim, &[5, 4]),
        ProofLine::new(7, l7.clone(), RuleId::ForallElim, &[2]),
        ProofLine::new(8, consequent(&l7), RuleId::ImplElim, &[7, 4]),
        ProofLine::new(9, Formula::Bot, RuleId::ImplElim, &[6, 8]),
        ProofLine::new(10, Formula::Bot, RuleId::ExistsElim, &[3, 9]),
    ];
    lines[4].term = Some(xv.clone());
    lines[6].term = Some(xv);
    lines[9].discharges = vec![4];
    lines[9].var = Some(x.clone());
    let goal3 = Formula::imp(comprehension.clone(), Formula::Bot);
    let goal2 = Formula::imp(second.clone(), goal3.clone());
    let goal1 = Formula::imp(first.clone(), goal2.clone());
    for (n, (f, d)) in [(goal3, 3), (goal2.clone(), 2), (goal1.clone(), 1)]
        .into_iter()
        .enumerate()
    {
        let mut line = ProofLine::new(11 + n, f, RuleId::ImplIntro, &[10 + n]);
        line.discharges = vec![d];
        lines.push(line);
    }
    ProofScript {
        theory,
        goal: goal1,
        lines,
    }
}

/// Deleting the boxes from the two Russell theorems of CC and from the
/// comprehension instance that defines the Russell concept yields an
/// intuitionistically inconsistent set.
pub fn erased_inconsistency_demo() -> InconsistencyDemo {
    let targets = crate::theories::corpus_targets(TheoryId::Cc);
    let first = targets[0].formula().clone();
    let second = targets[1].formula().clone();
    let comprehension = parse_formula("exists x. forall r. (r in x <-> [](r notin r))").expect("parses");
    let pair = [box_delete(&first), box_delete(&second)];
    let erased_comprehension = box_delete(&comprehension);
    let script = russell_script(TheoryId::Il, &pair[0], &pair[1], &erased_comprehension);
    let boxed_script = russell_script(TheoryId::Cc, &first, &second, &comprehension);
    InconsistencyDemo {
        pair,
        comprehension: erased_comprehension,
        script,
        boxed_script,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse_script;
    use crate::syntax::contains_box;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn distinct_concepts_erase_to_axiom_d() {
        let script = crate::corpus::script("cc/distinct_concepts.proof");
        assert_eq!(
            erase_and_match(&script, &p("exists x. exists y. (x != y)")),
            EntryVerdict::Accepted
        );
    }

    #[test]
    fn erasure_mismatch_reports_the_differing_atom() {
        let script = crate::corpus::script("cc/distinct_concepts.proof");
        let verdict = erase_and_match(&script, &p("exists x. exists y. (x notin y)"));
        let EntryVerdict::ErasureMismatch { left, right, .. } = verdict else {
            panic!("{verdict:?}")
        };
        assert_eq!((left.as_str(), right.as_str()), ("x = y", "x in y"));
    }

    #[test]
    fn succ_nonzero_erases() {
        let script = crate::corpus::script("cc2/succ_nonzero.proof");
        assert_eq!(
            erase_and_match(&script, &p("forall x. (S(x) = 0 -> bot)")),
            EntryVerdict::Accepted
        );
    }

    #[test]
    fn certificate_parsing() {
        let cert =
            parse_certificate("source CC''\ntarget PA2-\n# c\ntarget: 0 in omega\nproof: a.proof\ntarget: bot\n")
                .unwrap();
        assert_eq!(cert.source, TheoryId::CcDoublePrime);
        assert_eq!(cert.entries.len(), 2);
        assert_eq!(cert.entries[1].proof, None);
        assert!(parse_certificate("target PA2-\n").is_err());
        assert!(parse_certificate("source CC\ntarget IL\nproof: x\n").is_err());
    }

    #[test]
    fn entry_without_proof_is_rejected() {
        let cert = parse_certificate("source CC''\ntarget PA2-\ntarget: 0 in omega\n").unwrap();
        let report = check_certificate(&cert, &crate::corpus::loader);
        assert_eq!(report.entries[0].verdict, EntryVerdict::MissingProof);
        assert!(!report.passed());
    }

    #[test]
    fn template_scripts_check() {
        for (binder, body) in comprehension_bodies() {
            let (script, target) = abstraction_template(&binder, &body).unwrap();
            assert_eq!(erase_and_match(&script, &target), EntryVerdict::Accepted, "{script}");
            assert_eq!(
                target_axiom(&TheoryDescriptor::get(TheoryId::Comp), &target).as_deref(),
                Some("comprehension")
            );
        }
        assert!(abstraction_template(&Ident::new("x"), &p("x in x -> bot")).is_err());
    }

    #[test]
    fn demo_shapes() {
        let demo = erased_inconsistency_demo();
        assert!(!contains_box(&demo.pair[0]));
        assert_eq!(
            demo.pair[1],
            p("forall x. ((forall r. (r in x <-> r notin r)) -> (x in x -> bot))")
        );
        assert!(
            check_proof(&demo.script).is_accepted(),
            "{:?}",
            check_proof(&demo.script)
        );
        assert_eq!(demo.script.lines.len(), 13);
        assert!(!check_proof(&demo.boxed_script).is_accepted());
        let reparsed = parse_script(&demo.script.to_string()).unwrap();
        assert_eq!(reparsed, demo.script);
    }
}
