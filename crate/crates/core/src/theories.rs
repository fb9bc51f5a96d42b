//! Theory descriptors: which term formers a theory licenses, whether it has
//! the modal base (schemes 1-6, extensionality, comprehension, unboxing),
//! and its own closed axioms and schemes.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{
    alpha_eq, box_delete, parse_formula, substitute, universal_closure, Flavor, Formula, Ident, Sentence, Term,
};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, PartialOrd, Ord)]
pub enum TheoryId {
    /// The base concept theory.
    #[serde(rename = "CC")]
    Cc,
    /// CC with boxed abstraction terms `{x | []A}`.
    #[serde(rename = "CC'")]
    CcPrime,
    /// CC with the arithmetic constants `0`, `S`, `omega`.
    #[serde(rename = "CC''")]
    CcDoublePrime,
    /// Positive comprehension with abstraction terms plus the axiom D.
    #[serde(rename = "COMP")]
    Comp,
    /// Box-free second-order arithmetic without induction, as an axiom list.
    #[serde(rename = "PA2-")]
    Pa2Minus,
    /// Pure intuitionistic predicate logic with equality.
    #[serde(rename = "IL")]
    Il,
}

impl TheoryId {
    pub const ALL: [TheoryId; 6] = [
        TheoryId::Cc,
        TheoryId::CcPrime,
        TheoryId::CcDoublePrime,
        TheoryId::Comp,
        TheoryId::Pa2Minus,
        TheoryId::Il,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            TheoryId::Cc => "CC",
            TheoryId::CcPrime => "CC'",
            TheoryId::CcDoublePrime => "CC''",
            TheoryId::Comp => "COMP",
            TheoryId::Pa2Minus => "PA2-",
            TheoryId::Il => "IL",
        }
    }

    /// Every theorem of `other` is a theorem of `self`.
    pub fn extends(self, other: TheoryId) -> bool {
        self == other
            || other == TheoryId::Il
            || (other == TheoryId::Cc && matches!(self, TheoryId::CcPrime | TheoryId::CcDoublePrime))
    }
}

impl fmt::Display for TheoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown theory `{0}` (expected CC, CC', CC'', COMP, PA2- or IL)")]
pub struct UnknownTheory(pub String);

impl FromStr for TheoryId {
    type Err = UnknownTheory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoryId::ALL
            .into_iter()
            .find(|t| t.keyword().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownTheory(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TermFormers {
    pub boxed_abstraction: bool,
    pub positive_abstraction: bool,
    pub arithmetic: bool,
}

/// Axiom schemes owned by a particular theory rather than by the modal base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TheoryScheme {
    /// `y in {x | []A} <-> []A(y)`.
    BoxedAbstraction,
    /// `y in {x | A} <-> A(y)` for positive `A`.
    PositiveComprehension,
}

impl TheoryScheme {
    pub fn name(self) -> &'static str {
        match self {
            TheoryScheme::BoxedAbstraction => "abstraction",
            TheoryScheme::PositiveComprehension => "comprehension",
        }
    }

    fn flavor(self) -> Flavor {
        match self {
            TheoryScheme::BoxedAbstraction => Flavor::Boxed,
            TheoryScheme::PositiveComprehension => Flavor::Positive,
        }
    }

    /// `s in {x | body} <-> body[s/x]`.
    pub fn instantiate(self, binder: &Ident, body: &Formula, member: &Term) -> Result<Formula, TheoryError> {
        let abs =
            crate::syntax::Abstraction::with_flavor(binder.clone(), body.clone(), self.flavor()).map_err(|e| {
                TheoryError::SchemeBody {
                    scheme: self.name(),
                    detail: e.to_string(),
                }
            })?;
        let unfolded = substitute(body, binder, member);
        Ok(Formula::iff(Formula::Mem(member.clone(), Term::Abs(abs)), unfolded))
    }

    /// Recognizes an (open) instance and returns `(binder, body, member)`.
    pub fn recognize(self, f: &Formula) -> Option<(Ident, Formula, Term)> {
        let (lhs, rhs) = f.as_iff()?;
        let Formula::Mem(member, Term::Abs(abs)) = lhs else {
            return None;
        };
        if abs.flavor() != self.flavor() {
            return None;
        }
        let expected = substitute(abs.body(), abs.binder(), member);
        alpha_eq(&expected, rhs).then(|| (abs.binder().clone(), abs.body().clone(), member.clone()))
    }
}

#[derive(Clone, Debug)]
pub struct NamedAxiom {
    pub name: &'static str,
    pub formula: Formula,
}

#[derive(Clone, Debug)]
pub struct TheoryDescriptor {
    pub id: TheoryId,
    pub terms: TermFormers,
    /// Schemes 1-6, extensionality, comprehension and the unboxing rule.
    pub modal: bool,
    pub closed_axioms: Vec<NamedAxiom>,
    pub schemes: Vec<TheoryScheme>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("{theory} does not license {what}")]
    Unlicensed { theory: TheoryId, what: String },
    #[error("body not admissible for the {scheme} scheme: {detail}")]
    SchemeBody { scheme: &'static str, detail: String },
}

fn axiom(src: &str) -> Formula {
    parse_formula(src).expect("built-in axiom parses")
}

/// `forall r. (r in 0 <-> []bot)`
pub fn zero_axiom() -> Formula {
    axiom("forall r. (r in 0 <-> []bot)")
}

/// `forall x. forall r. (r in S(x) <-> [](r = x))`
pub fn successor_axiom() -> Formula {
    axiom("forall x. forall r. (r in S(x) <-> [](r = x))")
}

/// `forall r. (r in omega <-> [](forall z. ((0 in z & forall x. (x in z -> S(x) in z)) -> r in z)))`
pub fn omega_axiom() -> Formula {
    axiom("forall r. (r in omega <-> [](forall z. ((0 in z & forall x. (x in z -> S(x) in z)) -> r in z)))")
}

/// The axiom D: there are two distinct sets.
pub fn axiom_d() -> Formula {
    axiom("exists x. exists y. (x != y)")
}

/// The five arithmetic statements proved in CC'', in order: zero is a
/// number, numbers are closed under successor, zero is not a successor,
/// successor is injective, and the boxed induction transport.
pub fn arithmetic_targets() -> Vec<Sentence> {
    [
        "0 in omega",
        "x in omega -> S(x) in omega",
        "S(x) = 0 -> []bot",
        "S(x) = S(y) -> [](x = y)",
        "(0 in z & forall x. (x in z -> S(x) in z)) -> forall y. (y in omega -> [](y in z))",
    ]
    .iter()
    .map(|src| universal_closure(&axiom(src)))
    .collect()
}

const PA2_AXIOM_NAMES: [&str; 4] = ["zero_in_omega", "omega_closed", "succ_nonzero", "succ_injective"];

/// The induction axiom, which is the box erasure of the fifth arithmetic
/// target and is not part of PA2-.
pub fn pa2_induction() -> Formula {
    box_delete(arithmetic_targets()[4].formula())
}

/// Goals of the bundled derivations for a theory. Empty for theories
/// without a bundled corpus.
pub fn corpus_targets(id: TheoryId) -> Vec<Sentence> {
    let sentences = |srcs: &[&str]| -> Vec<Sentence> {
        srcs.iter()
            .map(|s| Sentence::new(axiom(s)).expect("target is closed"))
            .collect()
    };
    match id {
        TheoryId::Cc => sentences(&[
            "forall x. ((forall r. (r in x <-> [](r notin r))) -> ~(x notin x))",
            "forall x. ((forall r. (r in x <-> [](r notin r))) -> ((x in x) -> []bot))",
            "exists x. exists y. ((x = y) -> []bot)",
        ]),
        TheoryId::CcPrime => crate::interp::comprehension_bodies()
            .iter()
            .map(|(binder, body)| {
                let member = Term::var("y");
                let inst = TheoryScheme::BoxedAbstraction
                    .instantiate(binder, &Formula::boxed(body.clone()), &member)
                    .expect("boxed body");
                universal_closure(&inst)
            })
            .chain(sentences(&["exists x. exists y. ((x = y) -> []bot)"]))
            .collect(),
        TheoryId::CcDoublePrime => arithmetic_targets(),
        TheoryId::Comp | TheoryId::Pa2Minus | TheoryId::Il => Vec::new(),
    }
}

impl TheoryDescriptor {
    pub fn get(id: TheoryId) -> TheoryDescriptor {
        let no_terms = TermFormers {
            boxed_abstraction: false,
            positive_abstraction: false,
            arithmetic: false,
        };
        let base = TheoryDescriptor {
            id,
            terms: no_terms,
            modal: true,
            closed_axioms: Vec::new(),
            schemes: Vec::new(),
        };
        match id {
            TheoryId::Cc => base,
            TheoryId::CcPrime => TheoryDescriptor {
                terms: TermFormers {
                    boxed_abstraction: true,
                    ..no_terms
                },
                schemes: vec![TheoryScheme::BoxedAbstraction],
                ..base
            },
            TheoryId::CcDoublePrime => TheoryDescriptor {
                terms: TermFormers {
                    arithmetic: true,
                    ..no_terms
                },
                closed_axioms: vec![
                    NamedAxiom {
                        name: "zero",
                        formula: zero_axiom(),
                    },
                    NamedAxiom {
                        name: "succ",
                        formula: successor_axiom(),
                    },
                    NamedAxiom {
                        name: "omega",
                        formula: omega_axiom(),
                    },
                ],
                ..base
            },
            TheoryId::Comp => TheoryDescriptor {
                terms: TermFormers {
                    positive_abstraction: true,
                    ..no_terms
                },
                modal: false,
                closed_axioms: vec![NamedAxiom {
                    name: "D",
                    formula: axiom_d(),
                }],
                schemes: vec![TheoryScheme::PositiveComprehension],
                ..base
            },
            TheoryId::Pa2Minus => TheoryDescriptor {
                terms: TermFormers {
                    arithmetic: true,
                    ..no_terms
                },
                modal: false,
                closed_axioms: PA2_AXIOM_NAMES
                    .iter()
                    .zip(arithmetic_targets())
                    .map(|(name, target)| NamedAxiom {
                        name,
                        formula: box_delete(target.formula()),
                    })
                    .collect(),
                ..base
            },
            TheoryId::Il => TheoryDescriptor { modal: false, ..base },
        }
    }

    /// Rejects formulas using a term former or the box outside this theory.
    pub fn check_formula(&self, f: &Formula) -> Result<(), TheoryError> {
        if !self.modal && crate::syntax::contains_box(f) {
            return Err(self.unlicensed("the box operator"));
        }
        let mut err = None;
        f.for_each_term(&mut |t| {
            if err.is_none() {
                err = self.check_term_node(t).err();
            }
        });
        err.map_or(Ok(()), Err)
    }

    pub fn check_term(&self, t: &Term) -> Result<(), TheoryError> {
        self.check_formula(&Formula::Eq(t.clone(), t.clone()))
    }

    fn check_term_node(&self, t: &Term) -> Result<(), TheoryError> {
        use crate::syntax::Constant;
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(Constant::Zero) | Term::Const(Constant::Omega) | Term::Succ(_) if self.terms.arithmetic => {
                Ok(())
            }
            Term::Const(Constant::Zero) => Err(self.unlicensed("the constant 0")),
            Term::Const(Constant::Omega) => Err(self.unlicensed("the constant omega")),
            Term::Succ(_) => Err(self.unlicensed("the successor symbol S")),
            Term::Const(Constant::Generated(_)) => Err(self.unlicensed("generated constants")),
            Term::Abs(abs) => match abs.flavor() {
                Flavor::Boxed if self.terms.boxed_abstraction => Ok(()),
                Flavor::Positive if self.terms.positive_abstraction => Ok(()),
                flavor => Err(self.unlicensed(&format!("{flavor:?} abstraction terms like {t}"))),
            },
        }
    }

    fn unlicensed(&self, what: &str) -> TheoryError {
        TheoryError::Unlicensed {
            theory: self.id,
            what: what.to_string(),
        }
    }

    pub fn closed_axiom(&self, name: &str) -> Option<&Formula> {
        self.closed_axioms.iter().find(|a| a.name == name).map(|a| &a.formula)
    }

    pub fn scheme(&self, name: &str) -> Option<TheoryScheme> {
        self.schemes.iter().copied().find(|s| s.name() == name)
    }
}

/// Summary of a theory's axiomatization, for reports.
#[derive(Clone, Debug, Serialize)]
pub struct TheoryAxioms {
    pub theory: TheoryId,
    pub base_schemes: Vec<&'static str>,
    pub theory_schemes: Vec<String>,
    pub closed_axioms: Vec<(String, String)>,
}

pub fn theory_axioms(id: TheoryId) -> TheoryAxioms {
    let d = TheoryDescriptor::get(id);
    let base_schemes = if d.modal {
        vec![
            "Axiom1",
            "Axiom2",
            "Axiom3",
            "Axiom4",
            "Axiom5",
            "Axiom6",
            "Extensionality",
            "Comprehension",
        ]
    } else {
        Vec::new()
    };
    let theory_schemes = d
        .schemes
        .iter()
        .map(|s| match s {
            TheoryScheme::BoxedAbstraction => "abstraction: y in {x | []A} <-> []A(y)".to_string(),
            TheoryScheme::PositiveComprehension => "comprehension: y in {x | A} <-> A(y), A positive".to_string(),
        })
        .collect();
    let closed_axioms = d
        .closed_axioms
        .iter()
        .map(|a| (a.name.to_string(), a.formula.to_string()))
        .collect();
    TheoryAxioms {
        theory: id,
        base_schemes,
        theory_schemes,
        closed_axioms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{is_increasing, parse_term};

    #[test]
    fn keywords_round_trip() {
        for id in TheoryId::ALL {
            assert_eq!(id.keyword().parse::<TheoryId>().unwrap(), id);
        }
        assert!("ZF".parse::<TheoryId>().is_err());
    }

    #[test]
    fn cc_has_only_the_base() {
        let ax = theory_axioms(TheoryId::Cc);
        assert_eq!(ax.base_schemes.len(), 8);
        assert!(ax.closed_axioms.is_empty() && ax.theory_schemes.is_empty());
    }

    #[test]
    fn arithmetic_axioms_present() {
        let d = TheoryDescriptor::get(TheoryId::CcDoublePrime);
        assert!(alpha_eq(
            d.closed_axiom("zero").unwrap(),
            &axiom("forall r. ((r in 0) <-> [] bot)")
        ));
        let comp = TheoryDescriptor::get(TheoryId::Comp);
        assert!(alpha_eq(
            comp.closed_axiom("D").unwrap(),
            &axiom("exists x. exists y. ((x = y) -> bot)")
        ));
    }

    #[test]
    fn term_licensing() {
        let cc = TheoryDescriptor::get(TheoryId::Cc);
        let boxed = axiom("y in {x | [](x in x)}");
        assert!(cc.check_formula(&boxed).is_err());
        assert!(TheoryDescriptor::get(TheoryId::CcPrime).check_formula(&boxed).is_ok());
        assert!(TheoryDescriptor::get(TheoryId::Comp).check_formula(&boxed).is_err());
        let positive = axiom("y in {x | x in x}");
        assert!(TheoryDescriptor::get(TheoryId::Comp).check_formula(&positive).is_ok());
        assert!(TheoryDescriptor::get(TheoryId::CcPrime)
            .check_formula(&positive)
            .is_err());
        assert!(cc.check_formula(&axiom("0 in omega")).is_err());
        assert!(TheoryDescriptor::get(TheoryId::Pa2Minus)
            .check_formula(&axiom("[](0 in omega)"))
            .is_err());
        assert!(cc.check_term(&parse_term("c\"bot\"").unwrap()).is_err());
    }

    #[test]
    fn comp_scheme_rejects_non_positive_bodies() {
        let err = TheoryScheme::PositiveComprehension
            .instantiate(&"x".into(), &axiom("x notin x"), &Term::var("y"))
            .unwrap_err();
        assert!(matches!(err, TheoryError::SchemeBody { .. }));
        let inst = TheoryScheme::PositiveComprehension
            .instantiate(&"x".into(), &axiom("x in x"), &Term::var("y"))
            .unwrap();
        assert_eq!(inst.to_string(), "y in {x | x in x} <-> y in y");
        assert!(TheoryScheme::PositiveComprehension.recognize(&inst).is_some());
        assert!(TheoryScheme::BoxedAbstraction.recognize(&inst).is_none());
    }

    #[test]
    fn arithmetic_target_classification() {
        let targets = arithmetic_targets();
        assert_eq!(targets[0].formula(), &axiom("0 in omega"));
        assert!(alpha_eq(
            targets[3].formula(),
            &axiom("forall x. forall y. ((S(x) = S(y)) -> [](x = y))")
        ));
        let increasing: Vec<bool> = targets.iter().map(|t| is_increasing(t.formula())).collect();
        assert_eq!(increasing, [true, true, true, true, false]);
    }

    #[test]
    fn pa2_axioms_are_erased_targets() {
        let d = TheoryDescriptor::get(TheoryId::Pa2Minus);
        let names: Vec<_> = d.closed_axioms.iter().map(|a| a.name).collect();
        assert_eq!(names, PA2_AXIOM_NAMES);
        assert!(alpha_eq(
            d.closed_axiom("succ_nonzero").unwrap(),
            &axiom("forall x. (S(x) = 0 -> bot)")
        ));
        assert!(alpha_eq(
            &pa2_induction(),
            &axiom("forall z. ((0 in z & forall x. (x in z -> S(x) in z)) -> forall y. (y in omega -> y in z))")
        ));
    }

    #[test]
    fn corpus_target_lists() {
        assert_eq!(corpus_targets(TheoryId::Cc).len(), 3);
        assert_eq!(corpus_targets(TheoryId::CcDoublePrime).len(), 5);
        assert!(corpus_targets(TheoryId::Il).is_empty());
        assert_eq!(
            corpus_targets(TheoryId::Cc)[2].to_string(),
            "exists x. exists y. (x = y -> []bot)"
        );
    }
}
