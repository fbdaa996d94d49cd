//! Implicational formulas: parsing, printing, subformulas and signatures.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A formula built from atoms and `->`.
///
/// Equality is structural; atoms are identified by name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Arc<str>),
    Imp(Arc<Formula>, Arc<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Arc::new(a), Arc::new(b))
    }

    /// `prefix[0] -> (prefix[1] -> ... -> target)`; returns `target` for an empty prefix.
    pub fn chain(prefix: &[Formula], target: Formula) -> Formula {
        prefix
            .iter()
            .rev()
            .fold(target, |acc, f| Formula::imp(f.clone(), acc))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(a, b) => Some((a, b)),
            Formula::Atom(_) => None,
        }
    }

    /// Strips `n` antecedents, returning them and the remaining consequent.
    pub fn uncurry(&self, n: usize) -> Option<(Vec<Formula>, Formula)> {
        let mut prefix = Vec::with_capacity(n);
        let mut cur = self;
        for _ in 0..n {
            let (a, b) = cur.as_imp()?;
            prefix.push(a.clone());
            cur = b;
        }
        Some((prefix, cur.clone()))
    }

    /// Number of atom and connective occurrences.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn arrows(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Imp(a, b) => 1 + a.arrows() + b.arrows(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(name) => write!(f, "{name}"),
            Formula::Imp(a, b) => {
                if a.is_atom() {
                    write!(f, "{a}->{b}")
                } else {
                    write!(f, "({a})->{b}")
                }
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    // F ::= primary ("->" F)?
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.primary()?;
        if self.peek() == Some(b'-') {
            if self.src.get(self.pos + 1) != Some(&b'>') {
                self.pos += 1;
                return self.err("expected '>' after '-'");
            }
            self.pos += 2;
            let rhs = self.formula()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.formula()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                // the slice is ASCII by construction
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
                Ok(Formula::atom(name))
            }
            Some(_) => self.err("expected an atom or '('"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `F ::= atom | F "->" F | "(" F ")"` with `->` right-associative.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let f = p.formula()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(f)
}

pub fn subformulas(f: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    collect_sub(f, &mut out);
    out
}

fn collect_sub(f: &Formula, out: &mut BTreeSet<Formula>) {
    if !out.insert(f.clone()) {
        return;
    }
    if let Formula::Imp(a, b) = f {
        collect_sub(a, out);
        collect_sub(b, out);
    }
}

/// Leaf symbols and application tags a blueprint may use.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    pub leaf_formulas: BTreeSet<Formula>,
    pub app_tags: BTreeSet<Formula>,
}

impl Signature {
    pub fn new(
        leaves: impl IntoIterator<Item = Formula>,
        tags: impl IntoIterator<Item = Formula>,
    ) -> Self {
        Signature {
            leaf_formulas: leaves.into_iter().collect(),
            app_tags: tags.into_iter().collect(),
        }
    }
}

pub fn signature_of(f: &Formula) -> Signature {
    let sub = subformulas(f);
    Signature {
        leaf_formulas: sub.clone(),
        app_tags: sub,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            p("a->a"),
            Formula::imp(Formula::atom("a"), Formula::atom("a"))
        );
        assert_eq!(
            p("a->b->c"),
            Formula::imp(
                Formula::atom("a"),
                Formula::imp(Formula::atom("b"), Formula::atom("c"))
            )
        );
        let b = p("(x->y)->((p->x)->(p->y))");
        assert_eq!(b.to_string(), "(x->y)->(p->x)->p->y");
        assert_eq!(p(&b.to_string()), b);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        assert_eq!(parse_formula("a->").unwrap_err().offset, 3);
        assert_eq!(parse_formula("(a->b").unwrap_err().offset, 5);
        assert_eq!(parse_formula("a b").unwrap_err().offset, 2);
        assert_eq!(parse_formula("a-b").unwrap_err().offset, 2);
        assert!(parse_formula("").is_err());
        assert!(parse_formula("1a").is_err());
    }

    #[test]
    fn whitespace_and_identifiers() {
        assert_eq!(p(" ( a_1 -> B2 ) -> c "), p("(a_1->B2)->c"));
    }

    #[test]
    fn subformula_counts() {
        assert_eq!(subformulas(&p("a->a")).len(), 2);
        assert_eq!(subformulas(&p("a")).len(), 1);
        let b = subformulas(&p("(x->y)->((p->x)->(p->y))"));
        assert_eq!(b.len(), 8);
        for s in ["x->y", "p->x", "p->y", "(p->x)->p->y", "x", "y", "p"] {
            assert!(b.contains(&p(s)), "{s}");
        }
    }

    #[test]
    fn signature_examples() {
        let s = signature_of(&p("a->a"));
        assert_eq!(s.leaf_formulas, s.app_tags);
        assert_eq!(s.leaf_formulas.len(), 2);
        let w = signature_of(&p("(p->(p->c))->(p->c)"));
        assert_eq!(w.leaf_formulas.len(), 5);
        assert_eq!(w.app_tags.len(), 5);
    }

    #[test]
    fn chain_and_uncurry() {
        let f = Formula::chain(&[p("a"), p("b")], p("c"));
        assert_eq!(f, p("a->b->c"));
        assert_eq!(f.uncurry(2), Some((vec![p("a"), p("b")], p("c"))));
        assert_eq!(f.uncurry(3), None);
    }
}
