//! Proof scripts and their text format.
//!
//! ```text
//! theory CC
//! goal forall x. (x = x)
//! 1. x = x ; EqRefl
//! 2. forall x. (x = x) ; ForallIntro 1 var x
//! ```
//!
//! Each step is `<n>. <formula> ; <rule> [premises] [discharge k,..]
//! [var x] [term t]`. `term` must come last. Lines starting with `#` are
//! comments.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::schemes::SchemeId;
use crate::syntax::{parse_formula, parse_ident, parse_term, Formula, Ident, ParseError, Term};
use crate::theories::TheoryId;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RuleId {
    Assume,
    ImplIntro,
    ImplElim,
    ConjIntro,
    ConjElim1,
    ConjElim2,
    DisjIntro1,
    DisjIntro2,
    DisjElim,
    ForallIntro,
    ForallElim,
    ExistsIntro,
    ExistsElim,
    ExFalso,
    EqRefl,
    EqLeibniz,
    /// Schemes (1)-(8) of the modal base.
    Scheme(SchemeId),
    /// A closed axiom or scheme belonging to the script's theory.
    TheoryAxiom(String),
    Unbox,
}

impl RuleId {
    /// Every rule with a fixed name, in a stable order.
    pub fn simple_rules() -> Vec<RuleId> {
        use RuleId::*;
        let mut rules = vec![
            Assume,
            ImplIntro,
            ImplElim,
            ConjIntro,
            ConjElim1,
            ConjElim2,
            DisjIntro1,
            DisjIntro2,
            DisjElim,
            ForallIntro,
            ForallElim,
            ExistsIntro,
            ExistsElim,
            ExFalso,
            EqRefl,
            EqLeibniz,
            Unbox,
        ];
        rules.extend(SchemeId::ALL.iter().map(|s| Scheme(*s)));
        rules
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::Scheme(SchemeId::Extensionality) => f.write_str("Extensionality"),
            RuleId::Scheme(SchemeId::Comprehension) => f.write_str("Comprehension"),
            RuleId::Scheme(s) => write!(f, "Axiom{}", s.number()),
            RuleId::TheoryAxiom(name) => write!(f, "TheoryAxiom({name})"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(name) = s.strip_prefix("TheoryAxiom(").and_then(|rest| rest.strip_suffix(')')) {
            if !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Ok(RuleId::TheoryAxiom(name.to_string()));
            }
        }
        RuleId::simple_rules()
            .into_iter()
            .find(|r| r.to_string() == s)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofLine {
    /// 1-based line number.
    pub index: usize,
    pub formula: Formula,
    pub rule: RuleId,
    pub premises: Vec<usize>,
    pub discharges: Vec<usize>,
    pub var: Option<Ident>,
    pub term: Option<Term>,
}

impl ProofLine {
    pub fn new(index: usize, formula: Formula, rule: RuleId, premises: &[usize]) -> Self {
        ProofLine {
            index,
            formula,
            rule,
            premises: premises.to_vec(),
            discharges: Vec::new(),
            var: None,
            term: None,
        }
    }
}

impl fmt::Display for ProofLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[usize]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}. {} ; {}", self.index, self.formula, self.rule)?;
        if !self.premises.is_empty() {
            write!(f, " {}", join(&self.premises))?;
        }
        if !self.discharges.is_empty() {
            write!(f, " discharge {}", join(&self.discharges))?;
        }
        if let Some(x) = &self.var {
            write!(f, " var {x}")?;
        }
        if let Some(t) = &self.term {
            write!(f, " term {t}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofScript {
    pub theory: TheoryId,
    pub goal: Formula,
    pub lines: Vec<ProofLine>,
}

impl fmt::Display for ProofScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theory {}", self.theory)?;
        writeln!(f, "goal {}", self.goal)?;
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
    #[error("line {line}: {source}")]
    Rule { line: usize, source: UnknownRule },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("missing `{0}` header")]
    MissingHeader(&'static str),
}

fn parse_numbers(text: &str, line: usize) -> Result<Vec<usize>, ScriptError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim().parse::<usize>().map_err(|_| ScriptError::Malformed {
                line,
                message: format!("bad line number `{s}`"),
            })
        })
        .collect()
}

fn parse_step(text: &str, line: usize, expected_index: usize) -> Result<ProofLine, ScriptError> {
    let malformed = |message: String| ScriptError::Malformed { line, message };
    let (number, rest) = text
        .split_once('.')
        .ok_or_else(|| malformed("expected `<n>. <formula> ; <rule>`".into()))?;
    let index: usize = number
        .trim()
        .parse()
        .map_err(|_| malformed(format!("bad step number `{number}`")))?;
    if index != expected_index {
        return Err(malformed(format!(
            "steps must be numbered consecutively; expected {expected_index}, found {index}"
        )));
    }
    let (formula_text, justification) = rest
        .split_once(';')
        .ok_or_else(|| malformed("missing `;` before the rule".into()))?;
    let formula = parse_formula(formula_text).map_err(|source| ScriptError::Formula { line, source })?;

    let mut words = justification.split_whitespace().peekable();
    let rule_text = words.next().ok_or_else(|| malformed("missing rule".into()))?;
    let rule: RuleId = rule_text.parse().map_err(|source| ScriptError::Rule { line, source })?;
    let mut premise_text = String::new();
    while let Some(w) = words.peek() {
        if w.chars().all(|c| c.is_ascii_digit() || c == ',') {
            premise_text.push_str(w);
            words.next();
        } else {
            break;
        }
    }
    let mut step = ProofLine::new(index, formula, rule, &parse_numbers(&premise_text, line)?);
    while let Some(keyword) = words.next() {
        match keyword {
            "discharge" => {
                let arg = words
                    .next()
                    .ok_or_else(|| malformed("`discharge` needs line numbers".into()))?;
                step.discharges = parse_numbers(arg, line)?;
            }
            "var" => {
                let arg = words.next().ok_or_else(|| malformed("`var` needs a variable".into()))?;
                step.var = Some(parse_ident(arg).map_err(|source| ScriptError::Formula { line, source })?);
            }
            "term" => {
                let arg: Vec<&str> = words.by_ref().collect();
                if arg.is_empty() {
                    return Err(malformed("`term` needs a term".into()));
                }
                step.term = Some(parse_term(&arg.join(" ")).map_err(|source| ScriptError::Formula { line, source })?);
            }
            other => return Err(malformed(format!("unexpected `{other}` in justification"))),
        }
    }
    Ok(step)
}

pub fn parse_script(text: &str) -> Result<ProofScript, ScriptError> {
    let mut theory = None;
    let mut goal = None;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("theory ") {
            let id = rest
                .trim()
                .parse()
                .map_err(|e: crate::theories::UnknownTheory| ScriptError::Malformed {
                    line,
                    message: e.to_string(),
                })?;
            theory = Some(id);
        } else if let Some(rest) = trimmed.strip_prefix("goal ") {
            goal = Some(parse_formula(rest).map_err(|source| ScriptError::Formula { line, source })?);
        } else {
            lines.push(parse_step(trimmed, line, lines.len() + 1)?);
        }
    }
    Ok(ProofScript {
        theory: theory.ok_or(ScriptError::MissingHeader("theory"))?,
        goal: goal.ok_or(ScriptError::MissingHeader("goal"))?,
        lines,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_names_round_trip() {
        for rule in RuleId::simple_rules() {
            assert_eq!(rule.to_string().parse::<RuleId>().unwrap(), rule);
        }
        assert_eq!(
            "TheoryAxiom(zero)".parse::<RuleId>().unwrap(),
            RuleId::TheoryAxiom("zero".into())
        );
        assert_eq!("Axiom8".parse::<RuleId>(), Err(UnknownRule("Axiom8".into())));
        assert!("Modus".parse::<RuleId>().is_err());
    }

    #[test]
    fn parses_a_small_script() {
        let text = "\
# reflexivity, generalized
theory CC
goal forall x. (x = x)
1. x = x ; EqRefl
2. forall x. (x = x) ; ForallIntro 1 var x
3. S(x) in {y | y = y} ; ForallElim 2, 1 discharge 4,5 term {y | y = y}
";
        let script = parse_script(text).unwrap();
        assert_eq!(script.theory, TheoryId::Cc);
        assert_eq!(script.lines.len(), 3);
        assert_eq!(script.lines[1].var, Some(Ident::new("x")));
        assert_eq!(script.lines[2].premises, vec![2, 1]);
        assert_eq!(script.lines[2].discharges, vec![4, 5]);
        assert_eq!(script.lines[2].term.as_ref().unwrap().to_string(), "{y | y = y}");
        let reparsed = parse_script(&script.to_string()).unwrap();
        assert_eq!(reparsed, script);
    }

    #[test]
    fn reports_bad_lines() {
        let err = parse_script("theory CC\ngoal bot\n1. bot ; Magic 1\n").unwrap_err();
        assert!(matches!(err, ScriptError::Rule { line: 3, .. }));
        let err = parse_script("theory CC\ngoal bot\n2. bot ; Assume\n").unwrap_err();
        assert!(matches!(err, ScriptError::Malformed { line: 3, .. }));
        let err = parse_script("goal bot\n").unwrap_err();
        assert_eq!(err, ScriptError::MissingHeader("theory"));
        let err = parse_script("theory CC\ngoal bot\n1. bot in ; Assume\n").unwrap_err();
        assert!(matches!(err, ScriptError::Formula { line: 3, .. }));
    }
}
