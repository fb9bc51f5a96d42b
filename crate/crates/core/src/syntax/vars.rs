//! Free variables, capture-avoiding substitution and alpha-equivalence.

use std::collections::BTreeSet;

use super::ast::{Abstraction, Constant, Formula, Ident, Term};

pub fn free_vars(f: &Formula) -> BTreeSet<Ident> {
    let mut out = BTreeSet::new();
    collect_formula(f, &mut Vec::new(), &mut out);
    out
}

pub fn free_vars_term(t: &Term) -> BTreeSet<Ident> {
    let mut out = BTreeSet::new();
    collect_term(t, &mut Vec::new(), &mut out);
    out
}

fn collect_formula(f: &Formula, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
    match f {
        Formula::Mem(s, t) | Formula::Eq(s, t) => {
            collect_term(s, bound, out);
            collect_term(t, bound, out);
        }
        Formula::Bot => {}
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            collect_formula(a, bound, out);
            collect_formula(b, bound, out);
        }
        Formula::Box(a) => collect_formula(a, bound, out),
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            bound.push(x.clone());
            collect_formula(a, bound, out);
            bound.pop();
        }
    }
}

fn collect_term(t: &Term, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        // c_A is closed: its `r` belongs to the definition.
        Term::Const(_) => {}
        Term::Succ(inner) => collect_term(inner, bound, out),
        Term::Abs(abs) => {
            bound.push(abs.binder().clone());
            collect_formula(abs.body(), bound, out);
            bound.pop();
        }
    }
}

pub fn occurs_free(v: &Ident, f: &Formula) -> bool {
    free_vars(f).contains(v)
}

/// Primes `base` until the name avoids `avoid`.
pub fn fresh(base: &Ident, avoid: &BTreeSet<Ident>) -> Ident {
    let mut name = base.as_str().to_string();
    loop {
        name.push('\'');
        let candidate = Ident::new(&name);
        if !avoid.contains(&candidate) {
            return candidate;
        }
    }
}

/// `f[t/v]`, renaming binders of `f` that would capture free variables of `t`.
pub fn substitute(f: &Formula, v: &Ident, t: &Term) -> Formula {
    let fv_t = free_vars_term(t);
    Subst { v, t, fv_t: &fv_t }.formula(f)
}

pub fn substitute_term(target: &Term, v: &Ident, t: &Term) -> Term {
    let fv_t = free_vars_term(t);
    Subst { v, t, fv_t: &fv_t }.term(target)
}

struct Subst<'a> {
    v: &'a Ident,
    t: &'a Term,
    fv_t: &'a BTreeSet<Ident>,
}

impl Subst<'_> {
    fn formula(&self, f: &Formula) -> Formula {
        match f {
            Formula::Mem(a, b) => Formula::Mem(self.term(a), self.term(b)),
            Formula::Eq(a, b) => Formula::Eq(self.term(a), self.term(b)),
            Formula::Bot => Formula::Bot,
            Formula::And(a, b) => Formula::and(self.formula(a), self.formula(b)),
            Formula::Or(a, b) => Formula::or(self.formula(a), self.formula(b)),
            Formula::Imp(a, b) => Formula::imp(self.formula(a), self.formula(b)),
            Formula::Box(a) => Formula::boxed(self.formula(a)),
            Formula::Forall(x, body) => {
                let (x, body) = self.binder(x, body);
                Formula::Forall(x, Box::new(body))
            }
            Formula::Exists(x, body) => {
                let (x, body) = self.binder(x, body);
                Formula::Exists(x, Box::new(body))
            }
        }
    }

    fn binder(&self, x: &Ident, body: &Formula) -> (Ident, Formula) {
        if x == self.v || !occurs_free(self.v, body) {
            return (x.clone(), body.clone());
        }
        if self.fv_t.contains(x) {
            let mut avoid = free_vars(body);
            avoid.extend(self.fv_t.iter().cloned());
            avoid.insert(self.v.clone());
            let renamed = fresh(x, &avoid);
            let body = substitute(body, x, &Term::Var(renamed.clone()));
            (renamed, self.formula(&body))
        } else {
            (x.clone(), self.formula(body))
        }
    }

    fn term(&self, t: &Term) -> Term {
        match t {
            Term::Var(x) if x == self.v => self.t.clone(),
            Term::Var(_) | Term::Const(_) => t.clone(),
            Term::Succ(inner) => Term::succ(self.term(inner)),
            Term::Abs(abs) => {
                let (x, body) = self.binder(abs.binder(), abs.body());
                Term::Abs(Abstraction::new(x, body))
            }
        }
    }
}

/// Alpha-equivalence: equality up to renaming of bound variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    Alpha::default().formula(a, b)
}

pub fn alpha_eq_term(a: &Term, b: &Term) -> bool {
    Alpha::default().term(a, b)
}

#[derive(Default)]
struct Alpha {
    left: Vec<Ident>,
    right: Vec<Ident>,
}

impl Alpha {
    fn formula(&mut self, a: &Formula, b: &Formula) -> bool {
        match (a, b) {
            (Formula::Mem(a1, a2), Formula::Mem(b1, b2)) | (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) => {
                self.term(a1, b1) && self.term(a2, b2)
            }
            (Formula::Bot, Formula::Bot) => true,
            (Formula::And(a1, a2), Formula::And(b1, b2))
            | (Formula::Or(a1, a2), Formula::Or(b1, b2))
            | (Formula::Imp(a1, a2), Formula::Imp(b1, b2)) => self.formula(a1, b1) && self.formula(a2, b2),
            (Formula::Box(a1), Formula::Box(b1)) => self.formula(a1, b1),
            (Formula::Forall(x, a1), Formula::Forall(y, b1)) | (Formula::Exists(x, a1), Formula::Exists(y, b1)) => {
                self.under(x, y, |s| s.formula(a1, b1))
            }
            _ => false,
        }
    }

    fn under(&mut self, x: &Ident, y: &Ident, inner: impl FnOnce(&mut Self) -> bool) -> bool {
        self.left.push(x.clone());
        self.right.push(y.clone());
        let ok = inner(self);
        self.left.pop();
        self.right.pop();
        ok
    }

    fn term(&mut self, a: &Term, b: &Term) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let i = self.left.iter().rposition(|n| n == x);
                let j = self.right.iter().rposition(|n| n == y);
                match (i, j) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::Const(c), Term::Const(d)) => match (c, d) {
                (Constant::Generated(p), Constant::Generated(q)) => alpha_eq(p, q),
                _ => c == d,
            },
            (Term::Succ(s), Term::Succ(t)) => self.term(s, t),
            (Term::Abs(p), Term::Abs(q)) => self.under(p.binder(), q.binder(), |s| s.formula(p.body(), q.body())),
            _ => false,
        }
    }
}

/// Alpha-normal form: the binder at depth `d` is renamed to the `d`-th name
/// of `v0, v1, ...` that is not free in the formula. Two formulas are
/// alpha-equivalent exactly when their canonical forms are equal.
pub fn canonical(f: &Formula) -> Formula {
    let free = free_vars(f);
    Canon {
        free: &free,
        names: Vec::new(),
        env: Vec::new(),
    }
    .formula(f)
}

struct Canon<'a> {
    free: &'a BTreeSet<Ident>,
    names: Vec<Ident>,
    env: Vec<(Ident, Ident)>,
}

impl Canon<'_> {
    fn name_at(&mut self, depth: usize) -> Ident {
        let mut k = self
            .names
            .last()
            .map_or(0, |n| n.as_str()[1..].parse::<usize>().unwrap() + 1);
        while self.names.len() <= depth {
            let candidate = Ident::new(&format!("v{k}"));
            k += 1;
            if !self.free.contains(&candidate) {
                self.names.push(candidate);
            }
        }
        self.names[depth].clone()
    }

    fn bind<T>(&mut self, x: &Ident, inner: impl FnOnce(&mut Self) -> T) -> (Ident, T) {
        let depth = self.env.len();
        let name = self.name_at(depth);
        self.env.push((x.clone(), name.clone()));
        let out = inner(self);
        self.env.pop();
        (name, out)
    }

    fn formula(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::Mem(a, b) => Formula::Mem(self.term(a), self.term(b)),
            Formula::Eq(a, b) => Formula::Eq(self.term(a), self.term(b)),
            Formula::Bot => Formula::Bot,
            Formula::And(a, b) => Formula::and(self.formula(a), self.formula(b)),
            Formula::Or(a, b) => Formula::or(self.formula(a), self.formula(b)),
            Formula::Imp(a, b) => Formula::imp(self.formula(a), self.formula(b)),
            Formula::Box(a) => Formula::boxed(self.formula(a)),
            Formula::Forall(x, a) => {
                let (x, a) = self.bind(x, |s| s.formula(a));
                Formula::Forall(x, Box::new(a))
            }
            Formula::Exists(x, a) => {
                let (x, a) = self.bind(x, |s| s.formula(a));
                Formula::Exists(x, Box::new(a))
            }
        }
    }

    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(x) => match self.env.iter().rev().find(|(orig, _)| orig == x) {
                Some((_, renamed)) => Term::Var(renamed.clone()),
                None => t.clone(),
            },
            Term::Const(_) => t.clone(),
            Term::Succ(inner) => Term::succ(self.term(inner)),
            Term::Abs(abs) => {
                let (x, body) = self.bind(abs.binder(), |s| s.formula(abs.body()));
                Term::Abs(Abstraction::new(x, body))
            }
        }
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
    fn free_vars_examples() {
        let names = |f: &Formula| free_vars(f).into_iter().map(|i| i.to_string()).collect::<Vec<_>>();
        assert_eq!(names(&p("r in x")), ["r", "x"]);
        assert_eq!(names(&p("forall r. (r in x)")), ["x"]);
        let t = Term::abs("x", p("[](x in y)"));
        let fv: Vec<_> = free_vars_term(&t).into_iter().map(|i| i.to_string()).collect();
        assert_eq!(fv, ["y"]);
    }

    #[test]
    fn substitute_examples() {
        let c_bot = Term::Const(Constant::generated(Formula::Bot).unwrap());
        let out = substitute(&p("r in x"), &Ident::r(), &c_bot);
        assert_eq!(out, Formula::Mem(c_bot, Term::var("x")));

        let f = p("forall x. (r in x)");
        assert_eq!(substitute(&f, &"x".into(), &Term::var("y")), f);

        let out = substitute(&p("exists y. (r = y)"), &Ident::r(), &Term::var("y"));
        assert_eq!(out.to_string(), "exists y'. (y = y')");
        assert_eq!(free_vars(&out).into_iter().collect::<Vec<_>>(), vec![Ident::new("y")]);
    }

    #[test]
    fn substitution_renames_inside_abstractions() {
        let f = p("y in {x | [](x in r)}");
        let out = substitute(&f, &Ident::r(), &Term::var("x"));
        assert!(alpha_eq(&out, &p("y in {z | [](z in x)}")));
    }

    #[test]
    fn alpha_equivalence() {
        assert!(alpha_eq(&p("forall x. (x in y)"), &p("forall z. (z in y)")));
        assert!(!alpha_eq(&p("forall x. (x in y)"), &p("forall y. (y in y)")));
        assert!(!alpha_eq(
            &p("forall x. forall y. (x in y)"),
            &p("forall y. forall x. (x in y)")
        ));
        assert!(alpha_eq(&p("{x | x in a} = b"), &p("{w | w in a} = b")));
    }

    #[test]
    fn canonical_avoids_free_names() {
        let f = p("forall v0. (v0 in v1) & exists x. (x = v0)");
        let c = canonical(&f);
        assert!(alpha_eq(&f, &c));
        assert_eq!(free_vars(&c), free_vars(&f));
        assert_eq!(canonical(&c), c);
    }
}
