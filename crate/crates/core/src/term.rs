//! Terms, identities, clauses and substitutions over a finite signature.
//!
//! Terms are written as s-expressions: a variable is a bare identifier
//! matching `[a-z][a-z0-9_]*`, an application is `(symbol arg ...)`. A
//! nullary symbol may be written either `(bot)` or bare `bot`; a bare
//! identifier that names a declared constant is always read as that constant.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite algebraic signature: operation symbols with their arities, in
/// declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(String, usize)>", into = "Vec<(String, usize)>")]
pub struct Signature {
    ops: Vec<(String, usize)>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl Signature {
    pub fn new<S: Into<String>>(ops: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let ops: Vec<(String, usize)> = ops.into_iter().map(|(s, a)| (s.into(), a)).collect();
        let mut index = HashMap::new();
        for (i, (name, _)) in ops.iter().enumerate() {
            if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == '(' || c == ')') {
                return Err(Error::Invalid(format!("bad operation symbol `{name}`")));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate operation symbol `{name}`")));
            }
        }
        Ok(Signature { ops, index })
    }

    pub fn ops(&self) -> &[(String, usize)] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Position of `symbol` in declaration order.
    pub fn position(&self, symbol: &str) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.position(symbol).map(|i| self.ops[i].1)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(|(_, a)| *a).max().unwrap_or(0)
    }

    pub fn has_constants(&self) -> bool {
        self.ops.iter().any(|(_, a)| *a == 0)
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.ops.iter().filter(|(_, a)| *a == 0).map(|(s, _)| s.as_str())
    }
}

impl TryFrom<Vec<(String, usize)>> for Signature {
    type Error = Error;
    fn try_from(ops: Vec<(String, usize)>) -> Result<Self> {
        Signature::new(ops)
    }
}

impl From<Signature> for Vec<(String, usize)> {
    fn from(sig: Signature) -> Self {
        sig.ops
    }
}

/// True when `name` belongs to the variable pool `[a-z][a-z0-9_]*`.
pub fn is_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// The first `n` identifiers `v0, v1, ...` not contained in `avoid`.
pub fn fresh_vars(n: usize, avoid: &BTreeSet<String>) -> Vec<String> {
    (0..)
        .map(|i| format!("v{i}"))
        .filter(|v| !avoid.contains(v))
        .take(n)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(symbol: impl Into<String>) -> Term {
        Term::App(symbol.into(), Vec::new())
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    pub fn binary(symbol: &str, lhs: Term, rhs: Term) -> Term {
        Term::App(symbol.to_string(), vec![lhs, rhs])
    }

    pub fn unary(symbol: &str, arg: Term) -> Term {
        Term::App(symbol.to_string(), vec![arg])
    }

    /// Parses an s-expression against `sig`.
    pub fn parse(text: &str, sig: &Signature) -> Result<Term> {
        let mut p = Parser { src: text, pos: 0, sig };
        let t = p.term()?;
        p.skip_ws();
        if p.pos < text.len() {
            return Err(Error::Syntax {
                pos: p.pos,
                msg: "trailing input after term".into(),
            });
        }
        Ok(t)
    }

    /// Variables occurring in the term.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Checks every symbol against `sig`.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(f, args) => {
                let arity = sig.arity(f).ok_or_else(|| {
                    Error::SignatureMismatch(format!("symbol `{f}` is not in the signature"))
                })?;
                if arity != args.len() {
                    return Err(Error::SignatureMismatch(format!(
                        "symbol `{f}` has arity {arity}, applied to {} argument(s)",
                        args.len()
                    )));
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    /// Replaces variables using `f`; variables mapped to `None` are kept.
    pub fn map_vars(&self, f: &mut impl FnMut(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(s, args) if args.is_empty() => f.write_str(s),
            Term::App(s, args) => {
                write!(f, "({s}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn atom(&mut self) -> Result<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        let src: &'a str = self.src;
        let rest = &src[start..];
        let len = rest
            .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(Error::Syntax {
                pos: start,
                msg: match rest.chars().next() {
                    None => "unexpected end of input".into(),
                    Some(c) => format!("expected an identifier, found `{c}`"),
                },
            });
        }
        self.pos += len;
        Ok((start, &src[start..start + len]))
    }

    fn term(&mut self) -> Result<Term> {
        self.skip_ws();
        match self.peek() {
            None => Err(Error::Syntax {
                pos: self.pos,
                msg: "unexpected end of input".into(),
            }),
            Some(')') => Err(Error::Syntax {
                pos: self.pos,
                msg: "unexpected `)`".into(),
            }),
            Some('(') => {
                self.pos += 1;
                let (spos, sym) = self.atom()?;
                let sym = sym.to_string();
                let arity = self.sig.arity(&sym).ok_or_else(|| Error::UnknownSymbol {
                    symbol: sym.clone(),
                    pos: spos,
                })?;
                let mut args = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        None => {
                            return Err(Error::Syntax {
                                pos: self.pos,
                                msg: "unclosed `(`".into(),
                            })
                        }
                        _ => args.push(self.term()?),
                    }
                }
                if args.len() != arity {
                    return Err(Error::Arity {
                        symbol: sym,
                        pos: spos,
                        expected: arity,
                        found: args.len(),
                    });
                }
                Ok(Term::App(sym, args))
            }
            Some(_) => {
                let (pos, name) = self.atom()?;
                match self.sig.arity(name) {
                    Some(0) => Ok(Term::constant(name)),
                    Some(k) => Err(Error::Arity {
                        symbol: name.to_string(),
                        pos,
                        expected: k,
                        found: 0,
                    }),
                    None if is_variable_name(name) => Ok(Term::var(name)),
                    None => Err(Error::UnknownSymbol {
                        symbol: name.to_string(),
                        pos,
                    }),
                }
            }
        }
    }
}

/// An identity `lhs ≈ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    pub fn parse(lhs: &str, rhs: &str, sig: &Signature) -> Result<Self> {
        Ok(Identity::new(Term::parse(lhs, sig)?, Term::parse(rhs, sig)?))
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = self.lhs.vars();
        self.rhs.collect_vars(&mut out);
        out
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        self.lhs.check(sig)?;
        self.rhs.check(sig)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Variables of a set of identities.
pub fn vars_of<'a>(ids: impl IntoIterator<Item = &'a Identity>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for id in ids {
        id.lhs.collect_vars(&mut out);
        id.rhs.collect_vars(&mut out);
    }
    out
}

/// A clause `premises ⇒ conclusions`; an empty conclusion set is allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub premises: Vec<Identity>,
    pub conclusions: Vec<Identity>,
}

impl Clause {
    pub fn new(premises: Vec<Identity>, conclusions: Vec<Identity>) -> Self {
        Clause {
            premises,
            conclusions,
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        vars_of(self.premises.iter().chain(&self.conclusions))
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        self.premises
            .iter()
            .chain(&self.conclusions)
            .try_for_each(|id| id.check(sig))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ids: &[Identity]| {
            ids.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "{{{}}} => {{{}}}", join(&self.premises), join(&self.conclusions))
    }
}

/// A substitution `X → Fm(Y)` with explicit domain `X` and codomain
/// variables `Y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Substitution {
    map: BTreeMap<String, Term>,
    codomain: BTreeSet<String>,
}

impl Substitution {
    /// Builds a substitution whose codomain is exactly the variables
    /// occurring in the images.
    pub fn new(map: BTreeMap<String, Term>) -> Self {
        let mut codomain = BTreeSet::new();
        map.values().for_each(|t| t.collect_vars(&mut codomain));
        Substitution { map, codomain }
    }

    /// Builds a substitution with a declared codomain, which must contain
    /// every variable occurring in the images.
    pub fn with_codomain(map: BTreeMap<String, Term>, codomain: BTreeSet<String>) -> Result<Self> {
        for (x, t) in &map {
            if let Some(v) = t.vars().into_iter().find(|v| !codomain.contains(v)) {
                return Err(Error::DomainMismatch(format!(
                    "image of `{x}` uses `{v}` outside the declared codomain"
                )));
            }
        }
        Ok(Substitution { map, codomain })
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, Term)>) -> Self {
        Substitution::new(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn identity(domain: &BTreeSet<String>) -> Self {
        Substitution {
            map: domain.iter().map(|x| (x.clone(), Term::var(x.clone()))).collect(),
            codomain: domain.clone(),
        }
    }

    pub fn domain(&self) -> BTreeSet<String> {
        self.map.keys().cloned().collect()
    }

    pub fn codomain_vars(&self) -> &BTreeSet<String> {
        &self.codomain
    }

    pub fn get(&self, x: &str) -> Option<&Term> {
        self.map.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Homomorphic replacement of variables; every variable of `t` must lie
    /// in the domain.
    pub fn apply(&self, t: &Term) -> Result<Term> {
        match t {
            Term::Var(v) => self
                .map
                .get(v)
                .cloned()
                .ok_or_else(|| Error::DomainMismatch(format!("variable `{v}` is outside the substitution domain"))),
            Term::App(s, args) => Ok(Term::App(
                s.clone(),
                args.iter().map(|a| self.apply(a)).collect::<Result<_>>()?,
            )),
        }
    }

    pub fn apply_identity(&self, id: &Identity) -> Result<Identity> {
        Ok(Identity::new(self.apply(&id.lhs)?, self.apply(&id.rhs)?))
    }

    /// `self ∘ sigma`: maps `x ↦ self(sigma(x))`.
    pub fn compose(&self, sigma: &Substitution) -> Result<Substitution> {
        if let Some(v) = sigma.codomain.iter().find(|v| !self.map.contains_key(*v)) {
            return Err(Error::DomainMismatch(format!(
                "codomain variable `{v}` is outside the domain of the outer substitution"
            )));
        }
        let map = sigma
            .map
            .iter()
            .map(|(x, t)| Ok((x.clone(), self.apply(t)?)))
            .collect::<Result<_>>()?;
        Ok(Substitution {
            map,
            codomain: self.codomain.clone(),
        })
    }

    /// Applies the substitution, leaving variables outside the domain fixed.
    pub fn apply_extended(&self, t: &Term) -> Term {
        t.map_vars(&mut |v| self.map.get(v).cloned())
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        self.map.values().try_for_each(|t| t.check(sig))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} -> {t}")?;
        }
        f.write_str("}")
    }
}
