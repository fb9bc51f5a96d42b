use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use super::leibniz::is_replacement;
use super::schemes::{match_scheme, SchemeMatch};
use super::script::{ProofLine, ProofScript, RuleId};
use crate::syntax::{alpha_eq, alpha_eq_term, free_vars, substitute, Formula, Ident, Term};
use crate::theories::{TheoryDescriptor, TheoryId};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckError {
    #[error("the script has no lines")]
    EmptyScript,
    #[error("{rule} expects {expected} premise(s), found {found}")]
    PremiseCount {
        rule: String,
        expected: usize,
        found: usize,
    },
    #[error("premise {premise} does not refer to an earlier line")]
    PremiseOutOfRange { premise: usize },
    #[error("{rule} expects {expected} discharged assumption(s), found {found}")]
    DischargeCount {
        rule: String,
        expected: usize,
        found: usize,
    },
    #[error("discharged line {line} is not an earlier assumption")]
    DischargeInvalid { line: usize },
    #[error("{rule} needs a `{what}` witness")]
    MissingWitness { rule: String, what: String },
    #[error("{0}")]
    Shape(String),
    #[error("expected `{expected}`, found `{found}`")]
    FormulaMismatch { expected: String, found: String },
    #[error("eigenvariable `{var}` occurs free in {location}")]
    Eigenvariable { var: String, location: String },
    #[error("Unbox applied to line {premise}, which depends on open assumptions {open:?}")]
    UnboxUnderAssumptions { premise: usize, open: Vec<usize> },
    #[error("side condition fails: {0}")]
    SideCondition(String),
    #[error("not an instance of {rule}")]
    NotAnInstance { rule: String },
    #[error("{0}")]
    Unlicensed(String),
    #[error("{rule} is not a rule of {theory}")]
    RuleNotInTheory { rule: String, theory: TheoryId },
    #[error("{theory} has no axiom or scheme named `{name}`")]
    UnknownTheoryAxiom { name: String, theory: TheoryId },
    #[error("last line proves `{found}`, but the goal is `{goal}`")]
    GoalMismatch { goal: String, found: String },
    #[error("last line still depends on assumptions {open:?}")]
    OpenAssumptions { open: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Accepted,
    Rejected { line: usize, error: CheckError },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

/// Checks every line in order and stops at the first failure.
pub fn check_proof(script: &ProofScript) -> Verdict {
    match check_lines(script) {
        Ok(_) => Verdict::Accepted,
        Err((line, error)) => Verdict::Rejected { line, error },
    }
}

/// The open assumptions of every line, or the first failing line.
pub fn check_lines(script: &ProofScript) -> Result<Vec<BTreeSet<usize>>, (usize, CheckError)> {
    let theory = TheoryDescriptor::get(script.theory);
    let mut checker = Checker {
        theory: &theory,
        lines: &script.lines,
        open: Vec::new(),
    };
    for (i, line) in script.lines.iter().enumerate() {
        let open = checker.line(line).map_err(|e| (i + 1, e))?;
        checker.open.push(open);
    }
    let Some(last) = script.lines.last() else {
        return Err((0, CheckError::EmptyScript));
    };
    let n = script.lines.len();
    if !alpha_eq(&last.formula, &script.goal) {
        return Err((
            n,
            CheckError::GoalMismatch {
                goal: script.goal.to_string(),
                found: last.formula.to_string(),
            },
        ));
    }
    if !checker.open[n - 1].is_empty() {
        return Err((
            n,
            CheckError::OpenAssumptions {
                open: checker.open[n - 1].iter().copied().collect(),
            },
        ));
    }
    Ok(checker.open)
}

struct Checker<'a> {
    theory: &'a TheoryDescriptor,
    lines: &'a [ProofLine],
    /// Open assumptions of each checked line.
    open: Vec<BTreeSet<usize>>,
}

fn mismatch(expected: &Formula, found: &Formula) -> CheckError {
    CheckError::FormulaMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn same(expected: &Formula, found: &Formula) -> Result<(), CheckError> {
    if alpha_eq(expected, found) {
        Ok(())
    } else {
        Err(mismatch(expected, found))
    }
}

impl Checker<'_> {
    fn formula(&self, n: usize) -> &Formula {
        &self.lines[n - 1].formula
    }

    fn open_of(&self, n: usize) -> &BTreeSet<usize> {
        &self.open[n - 1]
    }

    fn premises(&self, line: &ProofLine, count: usize) -> Result<Vec<usize>, CheckError> {
        if line.premises.len() != count {
            return Err(CheckError::PremiseCount {
                rule: line.rule.to_string(),
                expected: count,
                found: line.premises.len(),
            });
        }
        for &p in &line.premises {
            if p == 0 || p >= line.index {
                return Err(CheckError::PremiseOutOfRange { premise: p });
            }
        }
        Ok(line.premises.clone())
    }

    fn discharges(&self, line: &ProofLine, count: usize) -> Result<Vec<usize>, CheckError> {
        if line.discharges.len() != count {
            return Err(CheckError::DischargeCount {
                rule: line.rule.to_string(),
                expected: count,
                found: line.discharges.len(),
            });
        }
        for &d in &line.discharges {
            if d == 0 || d >= line.index || self.lines[d - 1].rule != RuleId::Assume {
                return Err(CheckError::DischargeInvalid { line: d });
            }
        }
        Ok(line.discharges.clone())
    }

    fn var<'l>(&self, line: &'l ProofLine) -> Result<&'l Ident, CheckError> {
        line.var.as_ref().ok_or_else(|| CheckError::MissingWitness {
            rule: line.rule.to_string(),
            what: "var".into(),
        })
    }

    fn term<'l>(&self, line: &'l ProofLine) -> Result<&'l Term, CheckError> {
        let t = line.term.as_ref().ok_or_else(|| CheckError::MissingWitness {
            rule: line.rule.to_string(),
            what: "term".into(),
        })?;
        self.theory
            .check_term(t)
            .map_err(|e| CheckError::Unlicensed(e.to_string()))?;
        Ok(t)
    }

    fn no_witnesses(&self, line: &ProofLine) -> Result<(), CheckError> {
        if line.var.is_some() || line.term.is_some() || !line.discharges.is_empty() {
            return Err(CheckError::Shape(format!(
                "{} takes no var, term or discharge",
                line.rule
            )));
        }
        Ok(())
    }

    fn modal(&self, line: &ProofLine) -> Result<(), CheckError> {
        if self.theory.modal {
            Ok(())
        } else {
            Err(CheckError::RuleNotInTheory {
                rule: line.rule.to_string(),
                theory: self.theory.id,
            })
        }
    }

    /// `var` must not occur free in any formula among `lines`.
    fn eigen_free(&self, var: &Ident, lines: &BTreeSet<usize>) -> Result<(), CheckError> {
        for &k in lines {
            if free_vars(self.formula(k)).contains(var) {
                return Err(CheckError::Eigenvariable {
                    var: var.to_string(),
                    location: format!("assumption {k}"),
                });
            }
        }
        Ok(())
    }

    fn line(&self, line: &ProofLine) -> Result<BTreeSet<usize>, CheckError> {
        self.theory
            .check_formula(&line.formula)
            .map_err(|e| CheckError::Unlicensed(e.to_string()))?;
        let f = &line.formula;
        let shape = |msg: String| CheckError::Shape(msg);
        match &line.rule {
            RuleId::Assume => {
                self.premises(line, 0)?;
                self.no_witnesses(line)?;
                Ok(BTreeSet::from([line.index]))
            }
            RuleId::ImplIntro => {
                let [body] = self.premises(line, 1)?[..] else {
                    unreachable!()
                };
                let [assumption] = self.discharges(line, 1)?[..] else {
                    unreachable!()
                };
                let Formula::Imp(a, b) = f else {
                    return Err(shape("ImplIntro concludes an implication".into()));
                };
                same(self.formula(assumption), a)?;
                same(self.formula(body), b)?;
                let mut open = self.open_of(body).clone();
                open.remove(&assumption);
                Ok(open)
            }
            RuleId::ImplElim => {
                let [imp, arg] = self.premises(line, 2)?[..] else {
                    unreachable!()
                };
                self.no_witnesses(line)?;
                let Formula::Imp(a, b) = self.formula(imp) else {
                    return Err(shape(format!("premise {imp} is not an implication")));
                };
                same(a, self.formula(arg))?;
                same(b, f)?;
                Ok(self.open_of(imp) | self.open_of(arg))
            }
            RuleId::ConjIntro => {
                let [l, r] = self.premises(line, 2)?[..] else {
                    unreachable!()
                };
                self.no_witnesses(line)?;
                same(&Formula::and(self.formula(l).clone(), self.formula(r).clone()), f)?;
                Ok(self.open_of(l) | self.open_of(r))
            }
            RuleId::ConjElim1 | RuleId::ConjElim2 => {
                let [p] = self.premises(line, 1)?[..] else {
                    unreachable!()
                };
                self.no_witnesses(line)?;
                let Formula::And(a, b) = self.formula(p) else {
                    return Err(shape(format!("premise {p} is not a conjunction")));
                };
                same(if line.rule == RuleId::ConjElim1 { a } else { b }, f)?;
                Ok(self.open_of(p).clone())
            }
            RuleId::DisjIntro1 | RuleId::DisjIntro2 => {
                let [p] = self.premises(line, 1)?[..] else {
                    unreachable!()
                };
                self.no_witnesses(line)?;
                let Formula::Or(a, b) = f else {
                    return Err(shape("DisjIntro concludes a disjunction".into()));
                };
                same(if line.rule == RuleId::DisjIntro1 { a } else { b }, self.formula(p))?;
                Ok(self.open_of(p).clone())
            }
            RuleId::DisjElim => {
                let [d, left, right] = self.premises(line, 3)?[..] else {
                    unreachable!()
                };
                let [da, db] = self.discharges(line, 2)?[..] else {
                    unreachable!()
                };
                let Formula::Or(a, b) = self.formula(d) else {
                    return Err(shape(format!("premise {d} is not a disjunction")));
                };
                same(a, self.formula(da))?;
                same(b, self.formula(db))?;
                same(self.formula(left), f)?;
                same(self.formula(right), f)?;
                let mut open = self.open_of(d).clone();
                open.extend(self.open_of(left).iter().filter(|k| **k != da));
                open.extend(self.open_of(right).iter().filter(|k| **k != db));
                Ok(open)
            }
            RuleId::ForallIntro => {
                let [p] = self.premises(line, 1)?[..] else {
                    unreachable!()
                };
                let x = self.var(line)?;
                self.eigen_free(x, self.open_of(p))?;
                same(&Formula::Forall(x.clone(), Box::new(self.formula(p).clone())), f)?;
                Ok(self.open_of(p).clone())
            }
            RuleId::ForallElim => {
                let [p] = self.premises(line, 1)?[..] else {
                    unreachable!()
                };
                let t = self.term(line)?;
                let Formula::Forall(x, body) = self.formula(p) else {
                    return Err(shape(format!("premise {p} is not a universal formula")));
                };
                same(&substitute(body, x, t), f)?;
                Ok(self.open_of(p).clone())
            }
            RuleId::ExistsIntro => {
                let [p] = self.premises(line, 1)?[..] else {
                    unreachable!()
                };
                let t = self.term(line)?;
                let Formula::Exists(x, body) = f else {
                    return Err(shape("ExistsIntro concludes an existential formula".into()));
                };
                same(&substitute(body, x, t), self.formula(p))?;
                Ok(self.open_of(p).clone())
            }
            RuleId::ExistsElim => {
                let [ex, body_line] = self.premises(line, 2)?[..] else {
                    unreachable!()
                };
                let [assumption] = self.discharges(line, 1)?[..] else {
                    unreachable!()
                };
                let y = self.var(line)?;
                let Formula::Exists(x, body) = self.formula(ex) else {
                    return Err(shape(format!("premise {ex} is not an existential formula")));
                };
                same(&substitute(body, x, &Term::Var(y.clone())), self.formula(assumption))?;
                if free_vars(self.formula(ex)).contains(y) {
                    return Err(CheckError::Eigenvariable {
                        var: y.to_string(),
                        location: format!("line {ex}"),
                    });
                }
                if free_vars(self.formula(body_line)).contains(y) {
                    return Err(CheckError::Eigenvariable {
                        var: y.to_string(),
                        location: "the conclusion".into(),
                    });
                }
                let mut rest = self.open_of(body_line).clone();
                rest.remove(&assumption);
                self.eigen_free(y, &rest)?;
                same(self.formula(body_line), f)?;
                Ok(self.open_of(ex) | &rest)
            }
            RuleId::ExFalso => {
                let [p] = self.premises(line, 1)?[..] else {
                    unreachable!()
                };
                self.no_witnesses(line)?;
                same(&Formula::Bot, self.formula(p))?;
                Ok(self.open_of(p).clone())
            }
            RuleId::EqRefl => {
                self.premises(line, 0)?;
                match f {
                    Formula::Eq(s, t) if alpha_eq_term(s, t) => Ok(BTreeSet::new()),
                    _ => Err(shape("EqRefl concludes `t = t`".into())),
                }
            }
            RuleId::EqLeibniz => {
                let [eq, src] = self.premises(line, 2)?[..] else {
                    unreachable!()
                };
                self.no_witnesses(line)?;
                let Formula::Eq(s, t) = self.formula(eq) else {
                    return Err(shape(format!("premise {eq} is not an equation")));
                };
                if !is_replacement(self.formula(src), f, s, t) {
                    return Err(shape(format!(
                        "`{f}` does not arise from line {src} by replacing `{s}` with `{t}`"
                    )));
                }
                Ok(self.open_of(eq) | self.open_of(src))
            }
            RuleId::Scheme(scheme) => {
                self.modal(line)?;
                self.premises(line, 0)?;
                self.no_witnesses(line)?;
                match match_scheme(*scheme, f) {
                    SchemeMatch::Instance => Ok(BTreeSet::new()),
                    SchemeMatch::SideCondition(e) => Err(CheckError::SideCondition(e.to_string())),
                    SchemeMatch::NotAnInstance => Err(CheckError::NotAnInstance {
                        rule: line.rule.to_string(),
                    }),
                }
            }
            RuleId::TheoryAxiom(name) => {
                self.premises(line, 0)?;
                self.no_witnesses(line)?;
                self.theory_axiom(name, f)?;
                Ok(BTreeSet::new())
            }
            RuleId::Unbox => {
                self.modal(line)?;
                let [p] = self.premises(line, 1)?[..] else {
                    unreachable!()
                };
                self.no_witnesses(line)?;
                let Formula::Box(inner) = self.formula(p) else {
                    return Err(shape(format!("premise {p} is not boxed")));
                };
                if !self.open_of(p).is_empty() {
                    return Err(CheckError::UnboxUnderAssumptions {
                        premise: p,
                        open: self.open_of(p).iter().copied().collect(),
                    });
                }
                same(inner, f)?;
                Ok(BTreeSet::new())
            }
        }
    }

    /// Closed axioms must match exactly; theory schemes may be instantiated
    /// and then generalized.
    fn theory_axiom(&self, name: &str, f: &Formula) -> Result<(), CheckError> {
        let unknown = || CheckError::UnknownTheoryAxiom {
            name: name.to_string(),
            theory: self.theory.id,
        };
        if let Some(axiom) = self.theory.closed_axiom(name) {
            return same(axiom, f);
        }
        let scheme = self.theory.scheme(name).ok_or_else(unknown)?;
        let mut candidate = f;
        loop {
            if scheme.recognize(candidate).is_some() {
                return Ok(());
            }
            match candidate {
                Formula::Forall(_, body) => candidate = body,
                _ => {
                    return Err(CheckError::NotAnInstance {
                        rule: format!("TheoryAxiom({name})"),
                    })
                }
            }
        }
    }
}
