//! Replacement of equals: does `target` arise from `source` by replacing
//! some free occurrences of `from` by `to`?

use crate::syntax::{alpha_eq_term, free_vars, free_vars_term, substitute, Abstraction, Formula, Ident, Term};

pub fn is_replacement(source: &Formula, target: &Formula, from: &Term, to: &Term) -> bool {
    let mut guarded: Vec<Ident> = free_vars_term(from).into_iter().collect();
    guarded.extend(free_vars_term(to));
    Walk {
        from,
        to,
        guarded: &guarded,
        bound: Vec::new(),
    }
    .formula(source, target)
}

struct Walk<'a> {
    from: &'a Term,
    to: &'a Term,
    guarded: &'a [Ident],
    bound: Vec<Ident>,
}

impl Walk<'_> {
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
                self.binder(x, a1, y, b1)
            }
            _ => false,
        }
    }

    /// Aligns the target's binder name with the source's, then descends.
    fn binder(&mut self, x: &Ident, a: &Formula, y: &Ident, b: &Formula) -> bool {
        let renamed;
        let b = if x == y {
            b
        } else if !free_vars(b).contains(x) {
            renamed = substitute(b, y, &Term::Var(x.clone()));
            &renamed
        } else {
            return false;
        };
        self.bound.push(x.clone());
        let ok = self.formula(a, b);
        self.bound.pop();
        ok
    }

    fn replaceable(&self, a: &Term, b: &Term) -> bool {
        alpha_eq_term(a, self.from) && alpha_eq_term(b, self.to) && !self.guarded.iter().any(|v| self.bound.contains(v))
    }

    fn term(&mut self, a: &Term, b: &Term) -> bool {
        if self.replaceable(a, b) {
            return true;
        }
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => x == y,
            (Term::Const(c), Term::Const(d)) => alpha_eq_term(&Term::Const(c.clone()), &Term::Const(d.clone())),
            (Term::Succ(s), Term::Succ(t)) => self.term(s, t),
            (Term::Abs(p), Term::Abs(q)) => self.abstraction(p, q),
            _ => false,
        }
    }

    fn abstraction(&mut self, p: &Abstraction, q: &Abstraction) -> bool {
        self.binder(p.binder(), p.body(), q.binder(), q.body())
    }
}
