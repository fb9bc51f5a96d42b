use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::classify;
use super::vars;

/// A variable name. Cheap to clone; compared and ordered lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident(Arc<str>);

impl Ident {
    pub fn new(name: &str) -> Self {
        Ident(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The designated comprehension variable.
    pub fn r() -> Self {
        Ident::new("r")
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Ident {
    fn from(s: &str) -> Self {
        Ident::new(s)
    }
}

/// Constant symbols. `Zero` and `Omega` belong to the arithmetic extension;
/// `Generated` is the constant `c_A` naming a formula `A` whose only free
/// variable (if any) is `r`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Constant {
    Zero,
    Omega,
    Generated(Arc<Formula>),
}

impl Constant {
    /// Builds `c_A`. The defining formula is stored in alpha-normal form so
    /// that alpha-equivalent definitions name the same constant.
    pub fn generated(definition: Formula) -> Result<Self, SyntaxError> {
        let extra: Vec<Ident> = vars::free_vars(&definition)
            .into_iter()
            .filter(|v| *v != Ident::r())
            .collect();
        if !extra.is_empty() {
            return Err(SyntaxError::ConstantNotQualifying(extra));
        }
        Ok(Constant::Generated(Arc::new(vars::canonical(&definition))))
    }

    pub fn definition(&self) -> Option<&Formula> {
        match self {
            Constant::Generated(def) => Some(def),
            _ => None,
        }
    }
}

/// Which comprehension discipline an abstraction body satisfies.
///
/// `Boxed` bodies have the shape `[]A`; `Positive` bodies are positive
/// formulas. `General` only arises as the box-erasure of a boxed term whose
/// body is neither, and no theory licenses it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub enum Flavor {
    Boxed,
    Positive,
    General,
}

impl Flavor {
    pub fn of_body(body: &Formula) -> Flavor {
        if matches!(body, Formula::Box(_)) {
            Flavor::Boxed
        } else if classify::is_positive(body) {
            Flavor::Positive
        } else {
            Flavor::General
        }
    }
}

/// The term `{x | A}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Abstraction {
    binder: Ident,
    body: Box<Formula>,
    flavor: Flavor,
}

impl Abstraction {
    /// The flavor is read off the body, so the shape invariant holds by
    /// construction.
    pub fn new(binder: Ident, body: Formula) -> Self {
        let flavor = Flavor::of_body(&body);
        Abstraction {
            binder,
            body: Box::new(body),
            flavor,
        }
    }

    /// Builds an abstraction that must have the requested flavor.
    pub fn with_flavor(binder: Ident, body: Formula, flavor: Flavor) -> Result<Self, SyntaxError> {
        let abs = Abstraction::new(binder, body);
        if abs.flavor != flavor {
            return Err(SyntaxError::AbstractionFlavor {
                expected: flavor,
                found: abs.flavor,
            });
        }
        Ok(abs)
    }

    pub fn binder(&self) -> &Ident {
        &self.binder
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(Ident),
    Const(Constant),
    Succ(Box<Term>),
    Abs(Abstraction),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Ident::new(name))
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn abs(binder: &str, body: Formula) -> Term {
        Term::Abs(Abstraction::new(Ident::new(binder), body))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Succ(t) => 1 + t.size(),
            Term::Abs(a) => 1 + a.body.size(),
        }
    }
}

/// Formulas of the concept language. Negation, the biconditional, `notin`
/// and `!=` are abbreviations and have no node of their own.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Mem(Term, Term),
    Eq(Term, Term),
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(Ident, Box<Formula>),
    Exists(Ident, Box<Formula>),
    Box(Box<Formula>),
}

impl Formula {
    pub fn mem(s: Term, t: Term) -> Formula {
        Formula::Mem(s, t)
    }

    pub fn eq(s: Term, t: Term) -> Formula {
        Formula::Eq(s, t)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    /// `~A`, i.e. `A -> bot`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Bot)
    }

    /// `A <-> B`, i.e. `(A -> B) & (B -> A)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn forall(x: &str, body: Formula) -> Formula {
        Formula::Forall(Ident::new(x), Box::new(body))
    }

    pub fn exists(x: &str, body: Formula) -> Formula {
        Formula::Exists(Ident::new(x), Box::new(body))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Box::new(a))
    }

    pub fn not_mem(s: Term, t: Term) -> Formula {
        Formula::not(Formula::Mem(s, t))
    }

    pub fn neq(s: Term, t: Term) -> Formula {
        Formula::not(Formula::Eq(s, t))
    }

    /// Recognizes a desugared biconditional `(A -> B) & (B -> A)`.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::And(l, r) => match (&**l, &**r) {
                (Formula::Imp(a, b), Formula::Imp(b2, a2)) if vars::alpha_eq(a, a2) && vars::alpha_eq(b, b2) => {
                    Some((a, b))
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// Recognizes `A -> bot`.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Imp(a, b) if **b == Formula::Bot => Some(a),
            _ => None,
        }
    }

    /// Node count; terms count their own nodes, constants count one.
    pub fn size(&self) -> usize {
        match self {
            Formula::Mem(s, t) | Formula::Eq(s, t) => 1 + s.size() + t.size(),
            Formula::Bot => 1,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, a) | Formula::Exists(_, a) | Formula::Box(a) => 1 + a.size(),
        }
    }

    /// Visits every term occurring in the formula, including terms nested in
    /// abstraction bodies. Generated constants are opaque.
    pub fn for_each_term(&self, visit: &mut dyn FnMut(&Term)) {
        fn walk_term(t: &Term, visit: &mut dyn FnMut(&Term)) {
            visit(t);
            match t {
                Term::Succ(inner) => walk_term(inner, visit),
                Term::Abs(abs) => abs.body().for_each_term(visit),
                Term::Var(_) | Term::Const(_) => {}
            }
        }
        match self {
            Formula::Mem(s, t) | Formula::Eq(s, t) => {
                walk_term(s, visit);
                walk_term(t, visit);
            }
            Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.for_each_term(visit);
                b.for_each_term(visit);
            }
            Formula::Forall(_, a) | Formula::Exists(_, a) | Formula::Box(a) => a.for_each_term(visit),
        }
    }
}

/// A formula with no free variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sentence(Formula);

impl Sentence {
    pub fn new(formula: Formula) -> Result<Self, SyntaxError> {
        let free = vars::free_vars(&formula);
        if free.is_empty() {
            Ok(Sentence(formula))
        } else {
            Err(SyntaxError::NotASentence(free.into_iter().collect()))
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("constant definition has free variables other than r: {0:?}")]
    ConstantNotQualifying(Vec<Ident>),
    #[error("abstraction body is {found:?}, expected {expected:?}")]
    AbstractionFlavor { expected: Flavor, found: Flavor },
    #[error("formula is not closed; free variables {0:?}")]
    NotASentence(Vec<Ident>),
}
