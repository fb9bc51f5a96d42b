#![allow(dead_code)]

use std::collections::HashMap;

use concepts::corpus;
use concepts::kernel::{ProofScript, RuleId, SchemeId};
use concepts::semantics::Fragment;
use concepts::syntax::{substitute, Constant, Formula, Ident, Term};
use rand::Rng;

/// A single-line change to a script.
#[derive(Clone, Debug)]
pub enum Mutation {
    PremiseShift { line: usize },
    BoxWrap { line: usize },
    RuleSwap { line: usize, to: RuleId },
}

fn swapped(rule: &RuleId) -> RuleId {
    use RuleId::*;
    match rule {
        Assume => EqRefl,
        ImplIntro => ImplElim,
        ImplElim => ConjIntro,
        ConjIntro => DisjIntro1,
        ConjElim1 => ConjElim2,
        ConjElim2 => ConjElim1,
        DisjIntro1 => DisjIntro2,
        DisjIntro2 => DisjIntro1,
        DisjElim => ExistsElim,
        ForallIntro => ForallElim,
        ForallElim => ExistsIntro,
        ExistsIntro => ForallElim,
        ExistsElim => DisjElim,
        ExFalso => Unbox,
        EqRefl => Assume,
        EqLeibniz => ImplElim,
        Scheme(SchemeId::Truth) => Scheme(SchemeId::BoxImp),
        Scheme(_) => Scheme(SchemeId::Truth),
        TheoryAxiom(_) => Scheme(SchemeId::Comprehension),
        Unbox => ExFalso,
    }
}

pub fn apply(script: &ProofScript, m: &Mutation) -> ProofScript {
    let mut s = script.clone();
    match m {
        Mutation::PremiseShift { line } => {
            let l = &mut s.lines[line - 1];
            l.premises[0] = if l.premises[0] > 1 {
                l.premises[0] - 1
            } else {
                l.premises[0] + 1
            };
        }
        Mutation::BoxWrap { line } => {
            let l = &mut s.lines[line - 1];
            l.formula = Formula::boxed(l.formula.clone());
        }
        Mutation::RuleSwap { line, to } => s.lines[line - 1].rule = to.clone(),
    }
    s
}

/// Three mutations per bundled script: shift the first premise of its
/// first line with premises, box the middle line, swap the rule of the
/// line after that.
pub fn tamper_cases() -> Vec<(&'static str, Mutation, ProofScript)> {
    let mut out = Vec::new();
    for f in corpus::SCRIPTS {
        let script = corpus::script(f.path);
        let n = script.lines.len();
        let mut mutations = Vec::new();
        if let Some(l) = script.lines.iter().find(|l| !l.premises.is_empty()) {
            mutations.push(Mutation::PremiseShift { line: l.index });
        }
        mutations.push(Mutation::BoxWrap { line: n.div_ceil(2) });
        let k = (n / 2 + 1).min(n);
        mutations.push(Mutation::RuleSwap {
            line: k,
            to: swapped(&script.lines[k - 1].rule),
        });
        for m in mutations {
            let mutated = apply(&script, &m);
            out.push((f.path, m, mutated));
        }
    }
    out
}

pub const UNBOX_PROBE: &str = "\
theory CC
goal [](x in x) -> x in x
1. [](x in x) ; Assume
2. x in x ; Unbox 1
3. [](x in x) -> x in x ; ImplIntro 2 discharge 1
";

/// A random positive formula over the variables `x`, `z`, `w` with at most
/// `depth` nested connectives.
pub fn random_positive(rng: &mut impl Rng, depth: usize) -> Formula {
    let vars = ["x", "z", "w"];
    let var = |rng: &mut dyn rand::RngCore| Term::var(vars[rng.gen_range(0..vars.len())]);
    if depth == 0 || rng.gen_bool(0.3) {
        let (s, t) = (var(rng), var(rng));
        return if rng.gen_bool(0.5) {
            Formula::mem(s, t)
        } else {
            Formula::eq(s, t)
        };
    }
    match rng.gen_range(0..4) {
        0 => Formula::and(random_positive(rng, depth - 1), random_positive(rng, depth - 1)),
        1 => Formula::or(random_positive(rng, depth - 1), random_positive(rng, depth - 1)),
        2 => Formula::Forall(
            Ident::new(vars[rng.gen_range(1..3)]),
            Box::new(random_positive(rng, depth - 1)),
        ),
        _ => Formula::Exists(
            Ident::new(vars[rng.gen_range(1..3)]),
            Box::new(random_positive(rng, depth - 1)),
        ),
    }
}

/// Direct recursive evaluation of the stage clauses on formulas, with no
/// shared code with the engine beyond substitution.
pub struct Oracle<'a> {
    pool: Vec<Term>,
    memo: HashMap<(usize, Formula), bool>,
    _fragment: &'a Fragment,
}

impl<'a> Oracle<'a> {
    pub fn new(fragment: &'a Fragment) -> Self {
        let pool = fragment.pool.iter().map(|c| Term::Const(c.clone())).collect();
        Oracle {
            pool,
            memo: HashMap::new(),
            _fragment: fragment,
        }
    }

    fn instance(c: &Constant, t: &Term) -> Option<Formula> {
        c.definition().map(|d| substitute(d, &Ident::r(), t))
    }

    pub fn member(&mut self, alpha: usize, f: &Formula) -> bool {
        if let Some(&v) = self.memo.get(&(alpha, f.clone())) {
            return v;
        }
        let v = match f {
            Formula::Bot => true,
            Formula::Mem(s, Term::Const(c)) => match Self::instance(c, s) {
                Some(inst) => (0..alpha).any(|b| self.member(b, &inst)),
                None => false,
            },
            Formula::Mem(..) => false,
            Formula::Eq(Term::Const(a), Term::Const(b)) => {
                let pool = self.pool.clone();
                (0..alpha).any(|beta| {
                    pool.iter().any(|c| match (Self::instance(a, c), Self::instance(b, c)) {
                        (Some(x), Some(y)) => self.member(beta, &x) != self.member(beta, &y),
                        _ => false,
                    })
                })
            }
            Formula::Eq(..) => false,
            Formula::Box(a) => (0..alpha).any(|b| self.member(b, a)),
            Formula::And(a, b) => self.member(alpha, a) || self.member(alpha, b),
            Formula::Or(a, b) => self.member(alpha, a) && self.member(alpha, b),
            Formula::Imp(a, b) => (0..=alpha).any(|beta| self.member(beta, b) && !self.member(beta, a)),
            Formula::Forall(x, a) => {
                let pool = self.pool.clone();
                pool.iter().any(|c| self.member(alpha, &substitute(a, x, c)))
            }
            Formula::Exists(x, a) => {
                let pool = self.pool.clone();
                pool.iter().all(|c| self.member(alpha, &substitute(a, x, c)))
            }
        };
        self.memo.insert((alpha, f.clone()), v);
        v
    }
}
