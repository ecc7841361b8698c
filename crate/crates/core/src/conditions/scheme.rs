//! Congruence-inclusion schemes and their one-line syntax.
//!
//! Variables are single letters, `^` is meet (binds tighter), `*` is
//! composition, a trailing `'` is converse, and an inclusion is written
//! `LHS <= RHS`. The left side must have the restricted shape
//! `α ^ (C1 * C2 * … * Cm)` where every `Ci` is a meet of variables; the
//! outer variable may be omitted.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Expression over relation variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelAst {
    Var(char),
    Meet(Vec<RelAst>),
    Compose(Vec<RelAst>),
    Converse(Box<RelAst>),
}

impl RelAst {
    pub fn vars_into(&self, out: &mut BTreeSet<char>) {
        match self {
            RelAst::Var(c) => {
                out.insert(*c);
            }
            RelAst::Meet(xs) | RelAst::Compose(xs) => {
                for x in xs {
                    x.vars_into(out);
                }
            }
            RelAst::Converse(x) => x.vars_into(out),
        }
    }

    /// Alternating product `a ∘ b ∘ a ∘ …` with `m` factors as an AST;
    /// zero factors yield an empty compose (the diagonal).
    pub fn alternating(a: RelAst, b: RelAst, m: usize) -> RelAst {
        let factors = (0..m)
            .map(|i| if i % 2 == 0 { a.clone() } else { b.clone() })
            .collect();
        RelAst::Compose(factors)
    }

    pub fn meet_of(vars: &[char]) -> RelAst {
        if vars.len() == 1 {
            RelAst::Var(vars[0])
        } else {
            RelAst::Meet(vars.iter().map(|&v| RelAst::Var(v)).collect())
        }
    }
}

impl fmt::Display for RelAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn prec(ast: &RelAst) -> u8 {
            match ast {
                RelAst::Var(_) | RelAst::Converse(_) => 3,
                RelAst::Meet(_) => 2,
                RelAst::Compose(_) => 1,
            }
        }
        fn write_child(f: &mut fmt::Formatter<'_>, child: &RelAst, min: u8) -> fmt::Result {
            if prec(child) < min {
                write!(f, "({child})")
            } else {
                write!(f, "{child}")
            }
        }
        match self {
            RelAst::Var(c) => write!(f, "{c}"),
            RelAst::Meet(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "^")?;
                    }
                    write_child(f, x, 3)?;
                }
                Ok(())
            }
            RelAst::Compose(xs) => {
                if xs.is_empty() {
                    return write!(f, "0");
                }
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write_child(f, x, 2)?;
                }
                Ok(())
            }
            RelAst::Converse(x) => {
                write_child(f, x, 3)?;
                write!(f, "'")
            }
        }
    }
}

/// A congruence inclusion with restricted left shape: optional outer meet
/// variable and a chain of meets of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionScheme {
    pub outer: Option<char>,
    pub chain: Vec<BTreeSet<char>>,
    pub rhs: RelAst,
}

impl InclusionScheme {
    pub fn new(outer: Option<char>, chain: Vec<BTreeSet<char>>, rhs: RelAst) -> Result<Self> {
        if chain.is_empty() || chain.iter().any(|c| c.is_empty()) {
            return Err(Error::Scheme("left chain must have nonempty factors".into()));
        }
        Ok(InclusionScheme { outer, chain, rhs })
    }

    /// Number of free-algebra generators the Pixley–Wille reduction needs.
    pub fn generators(&self) -> usize {
        self.chain.len() + 1
    }

    pub fn variables(&self) -> BTreeSet<char> {
        let mut out = BTreeSet::new();
        if let Some(a) = self.outer {
            out.insert(a);
        }
        for c in &self.chain {
            out.extend(c.iter().copied());
        }
        self.rhs.vars_into(&mut out);
        out
    }

    pub fn parse(input: &str) -> Result<Self> {
        let mut p = Parser { chars: input.chars().collect(), pos: 0, input };
        let lhs = p.expr()?;
        p.skip_ws();
        if !p.eat_str("<=") {
            return Err(p.err("expected `<=`"));
        }
        let rhs = p.expr()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.err("trailing input"));
        }
        let (outer, chain) = normalize_lhs(&lhs)?;
        InclusionScheme::new(outer, chain, rhs)
    }
}

impl fmt::Display for InclusionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(a) = self.outer {
            write!(f, "{a}^(")?;
        }
        for (i, set) in self.chain.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            let vars: Vec<String> = set.iter().map(|c| c.to_string()).collect();
            write!(f, "{}", vars.join("^"))?;
        }
        if self.outer.is_some() {
            write!(f, ")")?;
        }
        write!(f, " <= {}", self.rhs)
    }
}

/// Rejects left sides outside `α ^ (C1 * … * Cm)` with a shape diagnostic.
fn normalize_lhs(ast: &RelAst) -> Result<(Option<char>, Vec<BTreeSet<char>>)> {
    fn factor_set(ast: &RelAst) -> Result<BTreeSet<char>> {
        match ast {
            RelAst::Var(c) => Ok(BTreeSet::from([*c])),
            RelAst::Meet(xs) => {
                let mut set = BTreeSet::new();
                for x in xs {
                    match x {
                        RelAst::Var(c) => {
                            set.insert(*c);
                        }
                        _ => {
                            return Err(Error::Scheme(
                                "left-side chain factors must be meets of variables".into(),
                            ))
                        }
                    }
                }
                Ok(set)
            }
            _ => Err(Error::Scheme(
                "left-side chain factors must be meets of variables".into(),
            )),
        }
    }
    match ast {
        RelAst::Var(_) => Ok((None, vec![factor_set(ast)?])),
        RelAst::Compose(xs) => {
            let chain = xs.iter().map(factor_set).collect::<Result<Vec<_>>>()?;
            Ok((None, chain))
        }
        RelAst::Meet(xs) => {
            let mut outer: Option<char> = None;
            let mut chain: Option<Vec<BTreeSet<char>>> = None;
            let mut loose: BTreeSet<char> = BTreeSet::new();
            for x in xs {
                match x {
                    RelAst::Var(c) => {
                        if outer.is_some() {
                            loose.insert(*c);
                        } else {
                            outer = Some(*c);
                        }
                    }
                    RelAst::Compose(fs) => {
                        if chain.is_some() {
                            return Err(Error::Scheme(
                                "left side may contain at most one composition".into(),
                            ));
                        }
                        chain = Some(fs.iter().map(factor_set).collect::<Result<Vec<_>>>()?);
                    }
                    _ => {
                        return Err(Error::Scheme(
                            "left side must be an outer variable meeting one composition".into(),
                        ))
                    }
                }
            }
            match chain {
                Some(chain) => {
                    if !loose.is_empty() {
                        return Err(Error::Scheme(
                            "left side admits a single outer variable".into(),
                        ));
                    }
                    Ok((outer, chain))
                }
                None => {
                    // pure meet of variables: a single chain factor
                    let mut set = loose;
                    if let Some(o) = outer {
                        set.insert(o);
                    }
                    match set.len() {
                        0 => Err(Error::Scheme("empty left side".into())),
                        1 => Ok((None, vec![set])),
                        _ => {
                            // α ^ β reads as outer α with chain {β}
                            let mut it = set.into_iter();
                            let o = it.next().unwrap();
                            let rest: BTreeSet<char> = it.collect();
                            Ok((Some(o), vec![rest]))
                        }
                    }
                }
            }
        }
        RelAst::Converse(_) => Err(Error::Scheme("no converse on the left side".into())),
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    input: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Scheme(format!("{msg} at column {} in `{}`", self.pos + 1, self.input))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let end = self.pos + s.chars().count();
        if end <= self.chars.len() && self.chars[self.pos..end].iter().collect::<String>() == s {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RelAst> {
        let mut factors = vec![self.meets()?];
        while self.peek() == Some('*') {
            self.pos += 1;
            factors.push(self.meets()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { RelAst::Compose(factors) })
    }

    fn meets(&mut self) -> Result<RelAst> {
        let mut parts = vec![self.postfix()?];
        while self.peek() == Some('^') {
            self.pos += 1;
            parts.push(self.postfix()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { RelAst::Meet(parts) })
    }

    fn postfix(&mut self) -> Result<RelAst> {
        let mut a = self.atom()?;
        while self.eat('\'') {
            a = RelAst::Converse(Box::new(a));
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<RelAst> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_lowercase() => {
                self.pos += 1;
                // `<=` must not be eaten as a variable
                Ok(RelAst::Var(c))
            }
            Some(c) => Err(self.err(&format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_shapes() {
        let s = InclusionScheme::parse("a^(b*c) <= a^b * a^c * a^b").unwrap();
        assert_eq!(s.outer, Some('a'));
        assert_eq!(s.chain.len(), 2);
        assert_eq!(s.generators(), 3);
        assert_eq!(s.to_string(), "a^(b*c) <= a^b*a^c*a^b");

        // Day shape: meets of variables inside chain factors
        let d = InclusionScheme::parse("a^(b*(a^c)*b) <= a^b * a^c").unwrap();
        assert_eq!(d.chain.len(), 3);
        assert!(d.chain[1].contains(&'a') && d.chain[1].contains(&'c'));

        // no outer variable
        let n = InclusionScheme::parse("b*c*b <= b*c").unwrap();
        assert_eq!(n.outer, None);
        assert_eq!(n.chain.len(), 3);

        // converse postfix on the right
        let c = InclusionScheme::parse("a^(b*c) <= (a^b)' * a^c").unwrap();
        match &c.rhs {
            RelAst::Compose(fs) => assert!(matches!(fs[0], RelAst::Converse(_))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reject_bad_shapes() {
        assert!(InclusionScheme::parse("a' <= a").is_err());
        assert!(InclusionScheme::parse("(a*b)^(c*d) <= a").is_err());
        assert!(InclusionScheme::parse("a^b^(c*d) <= a").is_err());
        assert!(InclusionScheme::parse("a <= ").is_err());
        assert!(InclusionScheme::parse("a^(b*) <= a").is_err());
        assert!(InclusionScheme::parse("a^(b*c) <= a^B").is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in ["a^(b*c) <= a^b*a^c", "b <= b*b", "a^(b*(a^c)*b) <= a^b*a^c*a^b"] {
            let s = InclusionScheme::parse(text).unwrap();
            let re = InclusionScheme::parse(&s.to_string()).unwrap();
            assert_eq!(s, re, "{text} vs {s}");
        }
    }
}
