//! Finite fragments of the constant-extended language.
//!
//! Generation 0 defines constants from a fixed stock of small formulas in
//! the membership variable `r`; each later generation defines `r in c` and
//! `[]~(r in c)` for every constant `c` of the generation before. The
//! fragment is the closure of a set of root sentences under the instances
//! the stage clauses consult.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{canonical, free_vars, level, parse_formula, substitute, Constant, Formula, Ident, Sentence, Term};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FragmentSpec {
    /// Number of generations of constants.
    pub constant_depth: usize,
    /// Node-count cap on constant definitions and scheme parameters.
    pub max_formula_size: usize,
    /// Extra sentences to include, in concrete syntax.
    #[serde(default)]
    pub seed_formulas: Vec<String>,
    /// Generation stops with an error beyond this many sentences.
    #[serde(default = "default_sentence_limit")]
    pub sentence_limit: usize,
}

fn default_sentence_limit() -> usize {
    1_000_000
}

impl FragmentSpec {
    pub fn new(constant_depth: usize, max_formula_size: usize) -> Self {
        FragmentSpec {
            constant_depth,
            max_formula_size,
            seed_formulas: Vec::new(),
            sentence_limit: default_sentence_limit(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FragmentError {
    #[error("max_formula_size must be positive")]
    ZeroSize,
    #[error("seed `{seed}`: {message}")]
    BadSeed { seed: String, message: String },
    #[error(
        "fragment overflow: more than {limit} sentences ({constants} constants, {pending} sentences still queued)"
    )]
    Overflow {
        limit: usize,
        constants: usize,
        pending: usize,
    },
}

/// How a sentence's membership in a stage is decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Bot,
    /// `c_B in c_A`, decided by the instance `A(c_B)`. `None` when the
    /// right-hand side is not a generated constant.
    Mem(Option<NodeId>),
    /// `c_A = c_A'`: the pairs `(A(c_B), A'(c_B))` over the pool.
    Eq(Vec<(NodeId, NodeId)>),
    Box(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Imp(NodeId, NodeId),
    /// Instances at every pool constant.
    Forall(Vec<NodeId>),
    Exists(Vec<NodeId>),
}

#[derive(Clone, Debug)]
pub struct Fragment {
    pub spec: FragmentSpec,
    /// The constants quantifiers range over, generation by generation.
    pub pool: Vec<Constant>,
    /// Generation of each pool constant.
    pub generations: Vec<usize>,
    /// Definitions usable as scheme parameters.
    pub parameters: Vec<Formula>,
    pub sentences: Vec<Formula>,
    pub nodes: Vec<Node>,
    pub levels: Vec<usize>,
    index: HashMap<Formula, NodeId>,
}

/// `c_A` as a term.
pub fn constant_term(def: &Formula) -> Term {
    Term::Const(Constant::generated(def.clone()).expect("definitions mention only r"))
}

/// The generation-0 definitions within the size cap.
pub fn base_definitions(max_size: usize) -> Vec<Formula> {
    let r = || Term::Var(Ident::r());
    let atoms = [Formula::Bot, Formula::mem(r(), r()), Formula::eq(r(), r())];
    let mut out = Vec::new();
    for a in atoms {
        for shaped in [
            a.clone(),
            Formula::not(a.clone()),
            Formula::boxed(a.clone()),
            Formula::boxed(Formula::not(a)),
        ] {
            if shaped.size() <= max_size {
                out.push(shaped);
            }
        }
    }
    out
}

/// The definitions built on a constant of the previous generation.
pub fn successor_definitions(c: &Constant, max_size: usize) -> Vec<Formula> {
    let m = Formula::mem(Term::Var(Ident::r()), Term::Const(c.clone()));
    [m.clone(), Formula::boxed(Formula::not(m))]
        .into_iter()
        .filter(|f| f.size() <= max_size)
        .collect()
}

/// `A(t)` for a constant `c_A`; `None` for other constants.
pub fn definition_at(c: &Constant, t: &Term) -> Option<Formula> {
    c.definition().map(|def| substitute(def, &Ident::r(), t))
}

fn generated_only(f: &Formula) -> Result<(), String> {
    let mut bad = None;
    f.for_each_term(&mut |t| match t {
        Term::Const(Constant::Generated(_)) | Term::Var(_) => {}
        other => bad = bad.take().or(Some(other.to_string())),
    });
    match bad {
        Some(t) => Err(format!("`{t}` is not in the language of CC with generated constants")),
        None => Ok(()),
    }
}

struct Builder {
    pool: Vec<Term>,
    sentences: Vec<Formula>,
    index: HashMap<Formula, NodeId>,
    queue: Vec<NodeId>,
    limit: usize,
}

impl Builder {
    fn intern(&mut self, f: Formula) -> Result<NodeId, FragmentError> {
        let key = canonical(&f);
        if let Some(&id) = self.index.get(&key) {
            return Ok(id);
        }
        if self.sentences.len() >= self.limit {
            return Err(FragmentError::Overflow {
                limit: self.limit,
                constants: self.pool.len(),
                pending: self.queue.len(),
            });
        }
        let id = self.sentences.len();
        self.sentences.push(key.clone());
        self.index.insert(key, id);
        self.queue.push(id);
        Ok(id)
    }

    fn instances(&mut self, x: &Ident, body: &Formula) -> Result<Vec<NodeId>, FragmentError> {
        let pool = self.pool.clone();
        pool.iter().map(|c| self.intern(substitute(body, x, c))).collect()
    }

    fn node(&mut self, f: &Formula) -> Result<Node, FragmentError> {
        Ok(match f {
            Formula::Bot => Node::Bot,
            Formula::Mem(s, Term::Const(c)) => match definition_at(c, s) {
                Some(inst) => Node::Mem(Some(self.intern(inst)?)),
                None => Node::Mem(None),
            },
            Formula::Mem(..) => Node::Mem(None),
            Formula::Eq(Term::Const(a), Term::Const(b)) => {
                let pool = self.pool.clone();
                let mut pairs = Vec::new();
                for c in &pool {
                    if let (Some(x), Some(y)) = (definition_at(a, c), definition_at(b, c)) {
                        pairs.push((self.intern(x)?, self.intern(y)?));
                    }
                }
                Node::Eq(pairs)
            }
            Formula::Eq(..) => Node::Eq(Vec::new()),
            Formula::Box(a) => Node::Box(self.intern((**a).clone())?),
            Formula::And(a, b) => Node::And(self.intern((**a).clone())?, self.intern((**b).clone())?),
            Formula::Or(a, b) => Node::Or(self.intern((**a).clone())?, self.intern((**b).clone())?),
            Formula::Imp(a, b) => Node::Imp(self.intern((**a).clone())?, self.intern((**b).clone())?),
            Formula::Forall(x, a) => Node::Forall(self.instances(x, a)?),
            Formula::Exists(x, a) => Node::Exists(self.instances(x, a)?),
        })
    }
}

impl Fragment {
    /// Builds the fragment whose roots are `bot`, the seeds, every atom over
    /// the pool, and the `extra` sentences (the audited axiom closures).
    pub fn generate(spec: &FragmentSpec) -> Result<Fragment, FragmentError> {
        Self::generate_with(spec, |_, _| Vec::new())
    }

    /// As [`Fragment::generate`], with `extra` computing further roots from
    /// the pool and the parameter list.
    pub fn generate_with(
        spec: &FragmentSpec,
        extra: impl FnOnce(&[Constant], &[Formula]) -> Vec<Formula>,
    ) -> Result<Fragment, FragmentError> {
        if spec.max_formula_size == 0 {
            return Err(FragmentError::ZeroSize);
        }
        let mut seeds = Vec::new();
        for src in &spec.seed_formulas {
            let bad = |message: String| FragmentError::BadSeed {
                seed: src.clone(),
                message,
            };
            let f = parse_formula(src).map_err(|e| bad(e.to_string()))?;
            let s = Sentence::new(f).map_err(|e| bad(e.to_string()))?;
            generated_only(s.formula()).map_err(bad)?;
            seeds.push(s.into_formula());
        }

        let mut pool = Vec::new();
        let mut generations = Vec::new();
        let mut parameters = base_definitions(spec.max_formula_size);
        let mut definers = parameters.clone();
        for generation in 0..spec.constant_depth {
            let constants: Vec<Constant> = definers
                .iter()
                .map(|d| Constant::generated(d.clone()).expect("definitions mention only r"))
                .collect();
            definers = constants
                .iter()
                .flat_map(|c| successor_definitions(c, spec.max_formula_size))
                .collect();
            if generation + 1 < spec.constant_depth {
                parameters.extend(definers.iter().cloned());
            }
            generations.extend(constants.iter().map(|_| generation));
            pool.extend(constants);
        }
        if pool.is_empty() {
            parameters.retain(|p| free_vars(p).is_empty());
        }

        let mut builder = Builder {
            pool: pool.iter().map(|c| Term::Const(c.clone())).collect(),
            sentences: Vec::new(),
            index: HashMap::new(),
            queue: Vec::new(),
            limit: spec.sentence_limit,
        };
        builder.intern(Formula::Bot)?;
        for s in seeds {
            builder.intern(s)?;
        }
        for a in &pool {
            for b in &pool {
                builder.intern(Formula::mem(Term::Const(a.clone()), Term::Const(b.clone())))?;
                builder.intern(Formula::eq(Term::Const(a.clone()), Term::Const(b.clone())))?;
            }
        }
        for f in extra(&pool, &parameters) {
            builder.intern(f)?;
        }

        let mut nodes: BTreeMap<NodeId, Node> = BTreeMap::new();
        while let Some(id) = builder.queue.pop() {
            let f = builder.sentences[id].clone();
            let node = builder.node(&f)?;
            nodes.insert(id, node);
        }
        let nodes: Vec<Node> = nodes.into_values().collect();
        let levels = builder.sentences.iter().map(level).collect();
        Ok(Fragment {
            spec: spec.clone(),
            pool,
            generations,
            parameters,
            sentences: builder.sentences,
            nodes,
            levels,
            index: builder.index,
        })
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// The node for a sentence, up to renaming of bound variables.
    pub fn lookup(&self, f: &Formula) -> Option<NodeId> {
        self.index.get(&canonical(f)).copied()
    }

    pub fn max_level(&self) -> usize {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    /// Number of sentences at each level, from level 1.
    pub fn level_census(&self) -> Vec<usize> {
        let mut census = vec![0; self.max_level()];
        for &l in &self.levels {
            census[l - 1] += 1;
        }
        census
    }
}
