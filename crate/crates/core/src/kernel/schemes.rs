//! The modal base: schemes (1)-(6), extensionality and comprehension.
//!
//! ```text
//! (1) A -> []A
//! (2) [](A & B) <-> ([]A & []B)
//! (3) [](A | B) <-> ([]A | []B)
//! (4) [](exists x. A) <-> exists x. []A
//! (5) [](forall x. A) <-> forall x. []A
//! (6) [](A -> B) -> ([]A -> []B)
//! (7) s = t <-> forall u. (u in s <-> u in t)
//! (8) exists x. forall r. (r in x <-> []A)      x not free in A
//! ```

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{alpha_eq, free_vars, free_vars_term, fresh, universal_closure, Formula, Ident, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SchemeId {
    Truth,
    BoxAnd,
    BoxOr,
    BoxExists,
    BoxForall,
    BoxImp,
    Extensionality,
    Comprehension,
}

impl SchemeId {
    pub const ALL: [SchemeId; 8] = [
        SchemeId::Truth,
        SchemeId::BoxAnd,
        SchemeId::BoxOr,
        SchemeId::BoxExists,
        SchemeId::BoxForall,
        SchemeId::BoxImp,
        SchemeId::Extensionality,
        SchemeId::Comprehension,
    ];

    /// Number of the scheme in the axiom list, 1 to 8.
    pub fn number(self) -> u8 {
        SchemeId::ALL.iter().position(|s| *s == self).unwrap() as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<SchemeId> {
        SchemeId::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.number())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SchemeParams {
    /// For (1).
    One(Formula),
    /// For (2), (3), (6).
    Two(Formula, Formula),
    /// For (4), (5): the quantified variable and the body.
    Quantified(Ident, Formula),
    /// For (7): the two compared terms.
    Terms(Term, Term),
    /// For (8): the witness variable and the body `A`, in which `r` is the
    /// membership variable.
    Comprehension(Ident, Formula),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("scheme {scheme} takes different parameters")]
    WrongParams { scheme: SchemeId },
    #[error("side condition of scheme {scheme} fails: `{var}` is free in the body")]
    VariableFree { scheme: SchemeId, var: Ident },
}

/// Builds the open instance: free parameters stay free.
pub fn instantiate_open(scheme: SchemeId, params: &SchemeParams) -> Result<Formula, SchemeError> {
    use SchemeParams as P;
    let bx = Formula::boxed;
    let f = match (scheme, params) {
        (SchemeId::Truth, P::One(a)) => Formula::imp(a.clone(), bx(a.clone())),
        (SchemeId::BoxAnd, P::Two(a, b)) => Formula::iff(
            bx(Formula::and(a.clone(), b.clone())),
            Formula::and(bx(a.clone()), bx(b.clone())),
        ),
        (SchemeId::BoxOr, P::Two(a, b)) => Formula::iff(
            bx(Formula::or(a.clone(), b.clone())),
            Formula::or(bx(a.clone()), bx(b.clone())),
        ),
        (SchemeId::BoxExists, P::Quantified(x, a)) => Formula::iff(
            bx(Formula::Exists(x.clone(), Box::new(a.clone()))),
            Formula::Exists(x.clone(), Box::new(bx(a.clone()))),
        ),
        (SchemeId::BoxForall, P::Quantified(x, a)) => Formula::iff(
            bx(Formula::Forall(x.clone(), Box::new(a.clone()))),
            Formula::Forall(x.clone(), Box::new(bx(a.clone()))),
        ),
        (SchemeId::BoxImp, P::Two(a, b)) => Formula::imp(
            bx(Formula::imp(a.clone(), b.clone())),
            Formula::imp(bx(a.clone()), bx(b.clone())),
        ),
        (SchemeId::Extensionality, P::Terms(s, t)) => {
            let mut avoid = free_vars_term(s);
            avoid.extend(free_vars_term(t));
            let u = if avoid.contains(&Ident::new("u")) {
                fresh(&Ident::new("u"), &avoid)
            } else {
                Ident::new("u")
            };
            let uv = Term::Var(u.clone());
            Formula::iff(
                Formula::Eq(s.clone(), t.clone()),
                Formula::Forall(
                    u,
                    Box::new(Formula::iff(
                        Formula::Mem(uv.clone(), s.clone()),
                        Formula::Mem(uv, t.clone()),
                    )),
                ),
            )
        }
        (SchemeId::Comprehension, P::Comprehension(x, a)) => {
            if free_vars(a).contains(x) {
                return Err(SchemeError::VariableFree { scheme, var: x.clone() });
            }
            if *x == Ident::r() {
                return Err(SchemeError::VariableFree { scheme, var: x.clone() });
            }
            let r = Ident::r();
            Formula::Exists(
                x.clone(),
                Box::new(Formula::Forall(
                    r.clone(),
                    Box::new(Formula::iff(
                        Formula::Mem(Term::Var(r), Term::Var(x.clone())),
                        bx(a.clone()),
                    )),
                )),
            )
        }
        _ => return Err(SchemeError::WrongParams { scheme }),
    };
    Ok(f)
}

/// The axiom instance, universally closed over its free parameters.
pub fn instantiate_scheme(scheme: SchemeId, params: &SchemeParams) -> Result<Formula, SchemeError> {
    instantiate_open(scheme, params).map(|f| universal_closure(&f).into_formula())
}

fn unbox(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Box(a) => Some(a),
        _ => None,
    }
}

/// Reads the parameters off a candidate open instance. The caller confirms
/// the match by re-instantiating and comparing up to alpha-equivalence.
pub fn extract_params(scheme: SchemeId, f: &Formula) -> Option<SchemeParams> {
    match scheme {
        SchemeId::Truth => match f {
            Formula::Imp(a, _) => Some(SchemeParams::One((**a).clone())),
            _ => None,
        },
        SchemeId::BoxAnd | SchemeId::BoxOr => {
            let (lhs, _) = f.as_iff()?;
            match unbox(lhs)? {
                Formula::And(a, b) if scheme == SchemeId::BoxAnd => {
                    Some(SchemeParams::Two((**a).clone(), (**b).clone()))
                }
                Formula::Or(a, b) if scheme == SchemeId::BoxOr => Some(SchemeParams::Two((**a).clone(), (**b).clone())),
                _ => None,
            }
        }
        SchemeId::BoxExists | SchemeId::BoxForall => {
            let (lhs, _) = f.as_iff()?;
            match unbox(lhs)? {
                Formula::Exists(x, a) if scheme == SchemeId::BoxExists => {
                    Some(SchemeParams::Quantified(x.clone(), (**a).clone()))
                }
                Formula::Forall(x, a) if scheme == SchemeId::BoxForall => {
                    Some(SchemeParams::Quantified(x.clone(), (**a).clone()))
                }
                _ => None,
            }
        }
        SchemeId::BoxImp => match f {
            Formula::Imp(lhs, _) => match unbox(lhs)? {
                Formula::Imp(a, b) => Some(SchemeParams::Two((**a).clone(), (**b).clone())),
                _ => None,
            },
            _ => None,
        },
        SchemeId::Extensionality => match f.as_iff()?.0 {
            Formula::Eq(s, t) => Some(SchemeParams::Terms(s.clone(), t.clone())),
            _ => None,
        },
        SchemeId::Comprehension => {
            let Formula::Exists(x, inner) = f else { return None };
            let Formula::Forall(b, body) = &**inner else {
                return None;
            };
            let (lhs, rhs) = body.as_iff()?;
            let (Formula::Mem(Term::Var(m), Term::Var(w)), Formula::Box(a)) = (lhs, rhs) else {
                return None;
            };
            if m != b || w != x || b == x {
                return None;
            }
            // Put the body in terms of the designated variable r.
            let a = if *b == Ident::r() {
                (**a).clone()
            } else if !free_vars(a).contains(&Ident::r()) {
                crate::syntax::substitute(a, b, &Term::Var(Ident::r()))
            } else {
                return None;
            };
            Some(SchemeParams::Comprehension(x.clone(), a))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeMatch {
    Instance,
    NotAnInstance,
    SideCondition(SchemeError),
}

/// Decides whether `f` is an instance of `scheme`, allowing any prefix of
/// universal quantifiers in front of an open instance.
pub fn match_scheme(scheme: SchemeId, f: &Formula) -> SchemeMatch {
    let mut candidate = f;
    let mut side_failure = None;
    loop {
        if let Some(params) = extract_params(scheme, candidate) {
            match instantiate_open(scheme, &params) {
                Ok(inst) if alpha_eq(&inst, candidate) => return SchemeMatch::Instance,
                Ok(_) => {}
                Err(e) => side_failure = side_failure.or(Some(e)),
            }
        }
        match candidate {
            Formula::Forall(_, body) => candidate = body,
            _ => break,
        }
    }
    match side_failure {
        Some(e) => SchemeMatch::SideCondition(e),
        None => SchemeMatch::NotAnInstance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn truth_scheme_instance() {
        let f = instantiate_open(SchemeId::Truth, &SchemeParams::One(p("r in x"))).unwrap();
        assert_eq!(f, p("(r in x) -> [](r in x)"));
        let closed = instantiate_scheme(SchemeId::Truth, &SchemeParams::One(p("r in x"))).unwrap();
        assert!(alpha_eq(&closed, &p("forall r. forall x. ((r in x) -> [](r in x))")));
    }

    #[test]
    fn box_or_scheme_instance() {
        let f = instantiate_open(SchemeId::BoxOr, &SchemeParams::Two(p("a in b"), p("c in d"))).unwrap();
        assert_eq!(f, p("[](a in b | c in d) <-> ([](a in b) | [](c in d))"));
    }

    #[test]
    fn russell_comprehension_instance() {
        let f = instantiate_scheme(
            SchemeId::Comprehension,
            &SchemeParams::Comprehension("x".into(), p("(r in r) -> bot")),
        )
        .unwrap();
        assert_eq!(f, p("exists x. forall r. ((r in x) <-> []((r in r) -> bot))"));
    }

    #[test]
    fn comprehension_side_condition() {
        let err = instantiate_scheme(
            SchemeId::Comprehension,
            &SchemeParams::Comprehension("x".into(), p("r in x")),
        )
        .unwrap_err();
        assert_eq!(
            err,
            SchemeError::VariableFree {
                scheme: SchemeId::Comprehension,
                var: "x".into()
            }
        );
        assert!(matches!(
            match_scheme(
                SchemeId::Comprehension,
                &p("exists x. forall r. (r in x <-> [](r in x))")
            ),
            SchemeMatch::NotAnInstance | SchemeMatch::SideCondition(_)
        ));
    }

    #[test]
    fn matching_accepts_instances_and_closures() {
        let cases = [
            (SchemeId::Truth, "forall x. (x in x -> [](x in x))"),
            (SchemeId::BoxAnd, "[](a in b & bot) <-> []a in b & []bot"),
            (SchemeId::BoxExists, "[](exists x. (x in y)) <-> exists z. [](z in y)"),
            (SchemeId::BoxForall, "[](forall x. (x in y)) <-> forall x. [](x in y)"),
            (SchemeId::BoxImp, "[](a in b -> bot) -> ([](a in b) -> []bot)"),
            (
                SchemeId::Extensionality,
                "forall x. forall y. (x = y <-> forall u. (u in x <-> u in y))",
            ),
            (SchemeId::Extensionality, "a = b <-> forall w. (w in a <-> w in b)"),
            (SchemeId::Comprehension, "exists y. forall s. (s in y <-> [](s = s))"),
            (
                SchemeId::Comprehension,
                "forall p. exists x. forall r. (r in x <-> [](r in p))",
            ),
        ];
        for (scheme, src) in cases {
            assert_eq!(match_scheme(scheme, &p(src)), SchemeMatch::Instance, "{src}");
        }
    }

    #[test]
    fn matching_rejects_near_misses() {
        let cases = [
            (SchemeId::Truth, "[](x in x) -> x in x"),
            (SchemeId::BoxAnd, "[](a in b & c in d) <-> []a in b & []d in c"),
            (SchemeId::BoxOr, "[](a in b | c in d) <-> ([](a in b) & [](c in d))"),
            (SchemeId::BoxForall, "[](forall x. (x in y)) <-> forall y. [](y in y)"),
            (SchemeId::BoxImp, "[](a in b -> bot) -> ([]bot -> [](a in b))"),
            (SchemeId::Extensionality, "x = y <-> forall x. (x in x <-> x in y)"),
            (SchemeId::Extensionality, "x = y -> forall u. (u in x <-> u in y)"),
            (SchemeId::Comprehension, "exists x. forall r. (r in x <-> r notin r)"),
            (
                SchemeId::Comprehension,
                "exists x. forall r. (x in r <-> [](r notin r))",
            ),
        ];
        for (scheme, src) in cases {
            assert_ne!(match_scheme(scheme, &p(src)), SchemeMatch::Instance, "{src}");
        }
    }
}
