use std::fmt;

use super::ast::{Constant, Formula, Term};

// Binding strength used to decide where parentheses are needed.
const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;
const ATOM: u8 = 6;

enum View<'a> {
    Iff(&'a Formula, &'a Formula),
    NotIn(&'a Term, &'a Term),
    NotEq(&'a Term, &'a Term),
    Not(&'a Formula),
    Plain,
}

// Only exact copies are folded back into `<->`, so printing never hides a
// renamed binder.
fn view(f: &Formula) -> View<'_> {
    match f {
        Formula::And(l, r) => match (&**l, &**r) {
            (Formula::Imp(a, b), Formula::Imp(b2, a2)) if a == a2 && b == b2 => View::Iff(a, b),
            _ => View::Plain,
        },
        Formula::Imp(a, b) if **b == Formula::Bot => match &**a {
            Formula::Mem(s, t) => View::NotIn(s, t),
            Formula::Eq(s, t) => View::NotEq(s, t),
            _ => View::Not(a),
        },
        _ => View::Plain,
    }
}

fn strength(f: &Formula) -> u8 {
    match view(f) {
        View::Iff(..) => IFF,
        View::NotIn(..) | View::NotEq(..) => ATOM,
        View::Not(_) => UNARY,
        View::Plain => match f {
            Formula::Mem(..) | Formula::Eq(..) | Formula::Bot => ATOM,
            Formula::And(..) => AND,
            Formula::Or(..) => OR,
            Formula::Imp(..) => IMP,
            Formula::Box(_) => UNARY,
            Formula::Forall(..) | Formula::Exists(..) => QUANT,
        },
    }
}

fn write_at(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let s = strength(f);
    // A quantifier swallows everything to its right, so it is bracketed
    // whenever it is an operand.
    if s < min || (s == QUANT && min > QUANT) {
        write!(out, "(")?;
        write_plain(f, out)?;
        write!(out, ")")
    } else {
        write_plain(f, out)
    }
}

fn write_operand_of_unary(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if matches!(f, Formula::Bot) {
        return write!(out, "bot");
    }
    if strength(f) == ATOM {
        write!(out, "(")?;
        write_plain(f, out)?;
        return write!(out, ")");
    }
    write_at(f, UNARY, out)
}

fn write_plain(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match view(f) {
        View::Iff(a, b) => {
            write_at(a, IMP, out)?;
            write!(out, " <-> ")?;
            return write_at(b, IFF, out);
        }
        View::NotIn(s, t) => return write!(out, "{s} notin {t}"),
        View::NotEq(s, t) => return write!(out, "{s} != {t}"),
        View::Not(a) => {
            write!(out, "~")?;
            return write_operand_of_unary(a, out);
        }
        View::Plain => {}
    }
    match f {
        Formula::Mem(s, t) => write!(out, "{s} in {t}"),
        Formula::Eq(s, t) => write!(out, "{s} = {t}"),
        Formula::Bot => write!(out, "bot"),
        Formula::And(a, b) => {
            write_at(a, AND, out)?;
            write!(out, " & ")?;
            write_at(b, UNARY, out)
        }
        Formula::Or(a, b) => {
            write_at(a, OR, out)?;
            write!(out, " | ")?;
            write_at(b, AND, out)
        }
        Formula::Imp(a, b) => {
            write_at(a, OR, out)?;
            write!(out, " -> ")?;
            write_at(b, IMP, out)
        }
        Formula::Box(a) => {
            write!(out, "[]")?;
            write_operand_of_unary(a, out)
        }
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let kw = if matches!(f, Formula::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            write!(out, "{kw} {x}. ")?;
            if matches!(**body, Formula::Forall(..) | Formula::Exists(..)) {
                write_plain(body, out)
            } else {
                write!(out, "(")?;
                write_plain(body, out)?;
                write!(out, ")")
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_plain(self, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Const(Constant::Zero) => write!(f, "0"),
            Term::Const(Constant::Omega) => write!(f, "omega"),
            Term::Const(Constant::Generated(def)) => write!(f, "c\"{def}\""),
            Term::Succ(t) => write!(f, "S({t})"),
            Term::Abs(abs) => write!(f, "{{{} | {}}}", abs.binder(), abs.body()),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::parse_formula;

    fn roundtrip(s: &str) -> String {
        parse_formula(s).unwrap().to_string()
    }

    #[test]
    fn prints_sugar_back() {
        assert_eq!(roundtrip("~(r in r)"), "r notin r");
        assert_eq!(roundtrip("[](r notin r)"), "[](r notin r)");
        assert_eq!(
            roundtrip("x = y <-> forall u. (u in x <-> u in y)"),
            "x = y <-> (forall u. (u in x <-> u in y))"
        );
        assert_eq!(roundtrip("(x in x) -> [] bot"), "x in x -> []bot");
        assert_eq!(roundtrip("~~(x in x)"), "~(x notin x)");
        assert_eq!(
            roundtrip("exists x. exists y. (x != y)"),
            "exists x. exists y. (x != y)"
        );
    }

    #[test]
    fn brackets_where_needed() {
        for src in [
            "(a in b -> c in d) -> e in f",
            "a in b & (c in d & e in f)",
            "(a in b | c in d) & e in f",
            "(forall x. (x in a)) & b in c",
            "~(a in b & c in d)",
            "[](a in b -> bot)",
            "(a in b <-> c in d) <-> e in f",
            "{x | x in a | a in x} in S(0)",
        ] {
            let f = parse_formula(src).unwrap();
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f, "{src} printed as {f}");
        }
    }
}
