//! Recursive-descent parser for the ASCII formula grammar.
//!
//! Precedence, tightest first: `[]` and `~`; `&`; `|`; `->` (right
//! associative); `<->`. Quantifiers extend as far right as possible.
//! Abbreviations are expanded while parsing.

use thiserror::Error;

use super::ast::{Abstraction, Constant, Formula, Ident, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

const KEYWORDS: &[&str] = &["in", "notin", "forall", "exists", "bot", "omega", "S"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Bar,
    Amp,
    Arrow,
    DoubleArrow,
    Tilde,
    BoxOp,
    Dot,
    Equals,
    NotEquals,
    ConstOpen,
    Quote,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::BoxOp => "`[]`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Equals => "`=`".into(),
            Tok::NotEquals => "`!=`".into(),
            Tok::ConstOpen => "`c\"`".into(),
            Tok::Quote => "`\"`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        let next = bytes.get(i + 1).map(|&(_, c)| c);
        let next2 = bytes.get(i + 2).map(|&(_, c)| c);
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, width) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            '|' => (Tok::Bar, 1),
            '&' => (Tok::Amp, 1),
            '~' => (Tok::Tilde, 1),
            '.' => (Tok::Dot, 1),
            '=' => (Tok::Equals, 1),
            '"' => (Tok::Quote, 1),
            '0' => (Tok::Zero, 1),
            '-' if next == Some('>') => (Tok::Arrow, 2),
            '<' if next == Some('-') && next2 == Some('>') => (Tok::DoubleArrow, 3),
            '!' if next == Some('=') => (Tok::NotEquals, 2),
            '[' if next == Some(']') => (Tok::BoxOp, 2),
            'c' if next == Some('"') => (Tok::ConstOpen, 2),
            c if is_ident_start(c) => {
                let mut j = i;
                while j < bytes.len() && is_ident_char(bytes[j].1) {
                    j += 1;
                }
                let end = bytes.get(j).map_or(text.len(), |&(p, _)| p);
                (Tok::Ident(text[pos..end].to_string()), j - i)
            }
            other => return Err(error_at(text, pos, format!("unexpected character `{other}`"))),
        };
        out.push((tok, pos));
        i += width;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn error_at(text: &str, offset: usize, message: String) -> ParseError {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    ParseError {
        offset,
        line,
        column,
        message,
    }
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self, ParseError> {
        Ok(Parser {
            text,
            toks: tokenize(text)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn offset(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.at].0.clone();
        if tok != Tok::End {
            self.at += 1;
        }
        tok
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        error_at(self.text, self.offset(), message.into())
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe())))
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            other => Err(self.error(format!("unexpected {} after end of formula", other.describe()))),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::BoxOp => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::Ident(kw) if kw == "forall" || kw == "exists" => {
                let universal = kw == "forall";
                self.bump();
                let x = self.binder()?;
                self.expect(Tok::Dot)?;
                let body = Box::new(self.formula()?);
                Ok(if universal {
                    Formula::Forall(x, body)
                } else {
                    Formula::Exists(x, body)
                })
            }
            _ => self.primary(),
        }
    }

    fn binder(&mut self) -> Result<Ident, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                Ok(Ident::new(&name))
            }
            other => Err(self.error(format!("expected a variable, found {}", other.describe()))),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let inner = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(inner);
        }
        if self.at_keyword("bot") {
            self.bump();
            return Ok(Formula::Bot);
        }
        let lhs = self.term()?;
        let op = self.peek().clone();
        match op {
            Tok::Ident(ref kw) if kw == "in" || kw == "notin" => {
                self.bump();
                let rhs = self.term()?;
                let atom = Formula::Mem(lhs, rhs);
                Ok(if kw == "in" { atom } else { Formula::not(atom) })
            }
            Tok::Equals => {
                self.bump();
                Ok(Formula::Eq(lhs, self.term()?))
            }
            Tok::NotEquals => {
                self.bump();
                Ok(Formula::neq(lhs, self.term()?))
            }
            other => Err(self.error(format!(
                "expected `in`, `notin`, `=` or `!=` after a term, found {}",
                other.describe()
            ))),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let start = self.offset();
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Term::Const(Constant::Zero))
            }
            Tok::Ident(kw) if kw == "omega" => {
                self.bump();
                Ok(Term::Const(Constant::Omega))
            }
            Tok::Ident(kw) if kw == "S" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let arg = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(Term::succ(arg))
            }
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                Ok(Term::Var(Ident::new(&name)))
            }
            Tok::LBrace => {
                self.bump();
                let x = self.binder()?;
                self.expect(Tok::Bar)?;
                let body = self.formula()?;
                self.expect(Tok::RBrace)?;
                Ok(Term::Abs(Abstraction::new(x, body)))
            }
            Tok::ConstOpen => {
                self.bump();
                let def = self.formula()?;
                self.expect(Tok::Quote)?;
                Constant::generated(def)
                    .map(Term::Const)
                    .map_err(|e| error_at(self.text, start, e.to_string()))
            }
            other => Err(self.error(format!("expected a term, found {}", other.describe()))),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Accepts a bare identifier usable as a variable.
pub fn parse_ident(text: &str) -> Result<Ident, ParseError> {
    let mut p = Parser::new(text)?;
    let x = p.binder()?;
    p.finish()?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn grammar_forced_shapes() {
        assert_eq!(
            p("[](r in x)"),
            Formula::boxed(Formula::mem(Term::var("r"), Term::var("x")))
        );
        assert_eq!(
            p("~(r in r)"),
            Formula::imp(Formula::mem(Term::var("r"), Term::var("r")), Formula::Bot)
        );
        assert_eq!(p("r notin r"), p("~(r in r)"));
        assert_eq!(p("x != y"), p("(x = y) -> bot"));
    }

    #[test]
    fn extensionality_desugars_to_nested_implications() {
        let f = p("x = y <-> forall u. (u in x <-> u in y)");
        let (lhs, rhs) = f.as_iff().expect("top-level biconditional");
        assert_eq!(*lhs, p("x = y"));
        let Formula::Forall(_, body) = rhs else {
            panic!("expected a quantifier")
        };
        let Formula::And(l, r) = &**body else {
            panic!("expected a conjunction")
        };
        assert!(matches!(**l, Formula::Imp(..)) && matches!(**r, Formula::Imp(..)));
        assert!(body.as_iff().is_some());
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("a in b & c in d | e in f"), p("(a in b & c in d) | e in f"));
        assert_eq!(p("a in b -> c in d -> e in f"), p("a in b -> (c in d -> e in f)"));
        assert_eq!(p("~a in b & c in d"), p("(~(a in b)) & c in d"));
        assert_eq!(p("[]a in b -> bot"), p("([](a in b)) -> bot"));
        assert_eq!(
            p("a in b & forall x. x in b | bot"),
            p("a in b & (forall x. (x in b | bot))")
        );
    }

    #[test]
    fn terms() {
        let f = p("S(S(0)) in omega");
        assert_eq!(
            f,
            Formula::mem(
                Term::succ(Term::succ(Term::Const(Constant::Zero))),
                Term::Const(Constant::Omega)
            )
        );
        let t = parse_term("{x | [](x in y)}").unwrap();
        let Term::Abs(abs) = t else { panic!() };
        assert_eq!(abs.flavor(), crate::syntax::Flavor::Boxed);
        let t = parse_term("{x | x in y | y in x}").unwrap();
        let Term::Abs(abs) = t else { panic!() };
        assert_eq!(abs.flavor(), crate::syntax::Flavor::Positive);
    }

    #[test]
    fn nested_generated_constants() {
        let f = p("c\"r in c\"bot\"\" in c\"bot\"");
        let Formula::Mem(Term::Const(outer), _) = &f else {
            panic!()
        };
        let def = outer.definition().unwrap();
        assert_eq!(def.to_string(), "r in c\"bot\"");
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_formula("r in").unwrap_err();
        assert_eq!((err.line, err.column), (1, 5));
        let err = parse_formula("forall in. bot").unwrap_err();
        assert!(err.message.contains("variable"));
        let err = parse_formula("a in b\n & $").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(parse_formula("c\"x in r\" in y").is_err());
        assert!(parse_formula("(a in b").is_err());
        assert!(parse_formula("a in b)").is_err());
    }
}
