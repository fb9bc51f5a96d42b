//! Syntactic measures and classifiers: level, positivity, the increasing
//! property, box deletion and universal closure.

use super::ast::{Abstraction, Formula, Sentence, Term};
use super::vars::free_vars;

/// Atomic formulas and boxed formulas have level 1; connectives and
/// quantifiers add one to the level of their components.
pub fn level(f: &Formula) -> usize {
    match f {
        Formula::Mem(..) | Formula::Eq(..) | Formula::Bot | Formula::Box(_) => 1,
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => level(a).max(level(b)) + 1,
        Formula::Forall(_, a) | Formula::Exists(_, a) => level(a) + 1,
    }
}

/// Built from membership and equality atoms with `&`, `|`, `forall`,
/// `exists` only, and every abstraction inside has a positive body.
pub fn is_positive(f: &Formula) -> bool {
    match f {
        Formula::Mem(s, t) | Formula::Eq(s, t) => term_is_positive(s) && term_is_positive(t),
        Formula::Bot | Formula::Imp(..) | Formula::Box(_) => false,
        Formula::And(a, b) | Formula::Or(a, b) => is_positive(a) && is_positive(b),
        Formula::Forall(_, a) | Formula::Exists(_, a) => is_positive(a),
    }
}

fn term_is_positive(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Const(_) => true,
        Term::Succ(inner) => term_is_positive(inner),
        Term::Abs(abs) => is_positive(abs.body()),
    }
}

/// True when no implication node occurs anywhere in `f`, abstraction bodies
/// included.
pub fn is_implication_free(f: &Formula) -> bool {
    match f {
        Formula::Imp(..) => false,
        Formula::Mem(s, t) | Formula::Eq(s, t) => term_implication_free(s) && term_implication_free(t),
        Formula::Bot => true,
        Formula::And(a, b) | Formula::Or(a, b) => is_implication_free(a) && is_implication_free(b),
        Formula::Forall(_, a) | Formula::Exists(_, a) | Formula::Box(a) => is_implication_free(a),
    }
}

fn term_implication_free(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Const(_) => true,
        Term::Succ(inner) => term_implication_free(inner),
        Term::Abs(abs) => is_implication_free(abs.body()),
    }
}

/// No implication occurs in the premise of another implication. Negations
/// count as implications, and the scan passes through boxes, quantifiers
/// and abstraction bodies.
pub fn is_increasing(f: &Formula) -> bool {
    match f {
        Formula::Imp(a, b) => is_implication_free(a) && is_increasing(b),
        Formula::Mem(s, t) | Formula::Eq(s, t) => term_increasing(s) && term_increasing(t),
        Formula::Bot => true,
        Formula::And(a, b) | Formula::Or(a, b) => is_increasing(a) && is_increasing(b),
        Formula::Forall(_, a) | Formula::Exists(_, a) | Formula::Box(a) => is_increasing(a),
    }
}

fn term_increasing(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Const(_) => true,
        Term::Succ(inner) => term_increasing(inner),
        Term::Abs(abs) => is_increasing(abs.body()),
    }
}

/// Deletes every box, including boxes inside abstraction bodies.
pub fn box_delete(f: &Formula) -> Formula {
    match f {
        Formula::Box(a) => box_delete(a),
        Formula::Mem(s, t) => Formula::Mem(term_box_delete(s), term_box_delete(t)),
        Formula::Eq(s, t) => Formula::Eq(term_box_delete(s), term_box_delete(t)),
        Formula::Bot => Formula::Bot,
        Formula::And(a, b) => Formula::and(box_delete(a), box_delete(b)),
        Formula::Or(a, b) => Formula::or(box_delete(a), box_delete(b)),
        Formula::Imp(a, b) => Formula::imp(box_delete(a), box_delete(b)),
        Formula::Forall(x, a) => Formula::Forall(x.clone(), Box::new(box_delete(a))),
        Formula::Exists(x, a) => Formula::Exists(x.clone(), Box::new(box_delete(a))),
    }
}

fn term_box_delete(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::Succ(inner) => Term::succ(term_box_delete(inner)),
        Term::Abs(abs) => Term::Abs(Abstraction::new(abs.binder().clone(), box_delete(abs.body()))),
    }
}

pub fn contains_box(f: &Formula) -> bool {
    let mut found = false;
    fn walk(f: &Formula, found: &mut bool) {
        match f {
            Formula::Box(_) => *found = true,
            Formula::Mem(..) | Formula::Eq(..) | Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                walk(a, found);
                walk(b, found);
            }
            Formula::Forall(_, a) | Formula::Exists(_, a) => walk(a, found),
        }
    }
    walk(f, &mut found);
    f.for_each_term(&mut |t| {
        if let Term::Abs(abs) = t {
            if contains_box(abs.body()) {
                found = true;
            }
        }
    });
    found
}

pub fn contains_bot(f: &Formula) -> bool {
    match f {
        Formula::Bot => true,
        Formula::Mem(..) | Formula::Eq(..) => {
            let mut found = false;
            f.for_each_term(&mut |t| {
                if let Term::Abs(abs) = t {
                    found |= contains_bot(abs.body());
                }
            });
            found
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => contains_bot(a) || contains_bot(b),
        Formula::Forall(_, a) | Formula::Exists(_, a) | Formula::Box(a) => contains_bot(a),
    }
}

/// Prefixes universal quantifiers for the free variables of `f`, the
/// lexicographically smallest name outermost.
pub fn universal_closure(f: &Formula) -> Sentence {
    let closed = free_vars(f)
        .into_iter()
        .rev()
        .fold(f.clone(), |body, x| Formula::Forall(x, Box::new(body)));
    Sentence::new(closed).expect("closure binds every free variable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_formula};

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn levels() {
        assert_eq!(level(&p("r in x")), 1);
        assert_eq!(level(&p("(r in x) -> bot")), 2);
        assert_eq!(level(&p("[](forall x. (r in x))")), 1);
        assert_eq!(level(&p("forall x. exists y. (x = y & y = x)")), 4);
    }

    #[test]
    fn positivity() {
        assert!(is_positive(&p("r in x")));
        assert!(is_positive(&p("forall x. ((x in y) | (x = y))")));
        assert!(!is_positive(&p("(r in x) -> bot")));
        assert!(!is_positive(&p("[](r in x)")));
        assert!(!is_positive(&p("y in {x | [](x in x)}")));
        assert!(is_positive(&p("y in {x | x in x & x = y}")));
    }

    #[test]
    fn increasing() {
        let ext = universal_closure(&p("x = y <-> forall u. (u in x <-> u in y)"));
        assert!(!is_increasing(ext.formula()));
        assert!(is_increasing(&p("exists x. exists y. ((x = y) -> [] bot)")));
        assert!(!is_increasing(&p("((r in r) -> bot) -> bot")));
        // the scan passes through boxes in the premise
        assert!(!is_increasing(&p("[](a in b -> bot) -> c in d")));
        // and through abstraction bodies
        assert!(!is_increasing(&p("y in {x | []((x in x -> bot) -> x in y)}")));
        assert!(is_increasing(&p("y in {x | [](x in x)} <-> [](y in y)")));
    }

    #[test]
    fn box_deletion() {
        assert_eq!(box_delete(&p("(x in x) -> [] bot")), p("(x in x) -> bot"));
        assert_eq!(box_delete(&p("[] [] (r in x)")), p("r in x"));
        let plain = p("forall x. (x in y | ~(y in x))");
        assert_eq!(box_delete(&plain), plain);
        let erased = box_delete(&p("y in {x | [](x in x)}"));
        assert_eq!(erased, p("y in {x | x in x}"));
        assert!(!contains_box(&erased));
        assert!(contains_box(&p("y in {x | [](x in x)}")));
    }

    #[test]
    fn closure_order() {
        assert_eq!(universal_closure(&p("x = x")).into_formula(), p("forall x. (x = x)"));
        let closed = p("forall x. (x = x)");
        assert_eq!(universal_closure(&closed).into_formula(), closed);
        let c = universal_closure(&p("r in x"));
        assert!(alpha_eq(c.formula(), &p("forall r. forall x. (r in x)")));
        assert_eq!(c.to_string(), "forall r. forall x. (r in x)");
    }
}
