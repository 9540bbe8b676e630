//! The variety with one binary operation and constants 0, 1 defined by
//! `0x = x0 = 0`, `1x = 0`, `x(yz) = 0` and, for every n, the left-associated
//! scheme `x y z1 .. zn y = x y z1 .. zn 1`.
//!
//! It has no finite generating algebra here, so it is handled by rewriting
//! rather than through [`VarietySpec`](crate::variety::VarietySpec).

pub mod rewrite;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::term::{Identity, Signature, Substitution, Term};
use rewrite::{as_product, mul, normalize, one, spine, zero, RewriteStep, APP, ONE, ZERO};

pub fn willard_signature() -> Signature {
    Signature::new([(APP, 2), (ZERO, 0), (ONE, 0)]).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailEntry {
    Var(String),
    One,
}

impl fmt::Display for TailEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailEntry::Var(x) => f.write_str(x),
            TailEntry::One => f.write_str("1"),
        }
    }
}

/// `0`, `1`, or a left-associated word `h t1 .. tn` whose non-1 tail
/// entries are pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WillardNormalForm {
    Zero,
    One,
    Word { head: String, tail: Vec<TailEntry> },
}

impl WillardNormalForm {
    pub fn var(x: impl Into<String>) -> Self {
        WillardNormalForm::Word {
            head: x.into(),
            tail: Vec::new(),
        }
    }

    /// Number of factors; constants count as one.
    pub fn word_len(&self) -> usize {
        match self {
            WillardNormalForm::Word { tail, .. } => tail.len() + 1,
            _ => 1,
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            WillardNormalForm::Zero => zero(),
            WillardNormalForm::One => one(),
            WillardNormalForm::Word { head, tail } => tail.iter().fold(Term::var(head.as_str()), |acc, e| {
                mul(
                    acc,
                    match e {
                        TailEntry::Var(x) => Term::var(x.as_str()),
                        TailEntry::One => one(),
                    },
                )
            }),
        }
    }

    /// Normal form of the product of two normal forms.
    pub fn product(&self, rhs: &Self) -> Self {
        use WillardNormalForm::*;
        let (head, tail) = match self {
            Zero | One => return Zero,
            Word { head, tail } => (head, tail),
        };
        let entry = match rhs {
            Zero => return Zero,
            One => TailEntry::One,
            Word { tail: t, .. } if !t.is_empty() => return Zero,
            Word { head: y, .. } => {
                let e = TailEntry::Var(y.clone());
                if tail.contains(&e) {
                    TailEntry::One
                } else {
                    e
                }
            }
        };
        let mut tail = tail.clone();
        tail.push(entry);
        Word {
            head: head.clone(),
            tail,
        }
    }

    fn from_normal_term(t: &Term) -> Self {
        match t {
            Term::App(c, _) if c == ZERO => WillardNormalForm::Zero,
            Term::App(c, _) if c == ONE => WillardNormalForm::One,
            _ => {
                let sp = spine(t);
                let Term::Var(head) = sp[0] else {
                    unreachable!("irreducible word with a constant head: {t}")
                };
                let tail = sp[1..]
                    .iter()
                    .map(|e| match e {
                        Term::Var(x) => TailEntry::Var(x.clone()),
                        _ => TailEntry::One,
                    })
                    .collect();
                WillardNormalForm::Word {
                    head: head.clone(),
                    tail,
                }
            }
        }
    }
}

impl fmt::Display for WillardNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WillardNormalForm::Zero => f.write_str("0"),
            WillardNormalForm::One => f.write_str("1"),
            WillardNormalForm::Word { head, tail } => {
                f.write_str(head)?;
                tail.iter().try_for_each(|e| write!(f, " {e}"))
            }
        }
    }
}

/// Renders a term as left-associated juxtaposition, e.g. `x y (z w) 1`.
pub fn willard_display(t: &Term) -> String {
    match t {
        Term::Var(x) => x.clone(),
        Term::App(c, _) if c == ZERO => "0".into(),
        Term::App(c, _) if c == ONE => "1".into(),
        _ => match as_product(t) {
            Some((a, b)) if as_product(b).is_some() => format!("{} ({})", willard_display(a), willard_display(b)),
            Some((a, b)) => format!("{} {}", willard_display(a), willard_display(b)),
            None => t.to_string(),
        },
    }
}

pub fn willard_nf(t: &Term) -> Result<WillardNormalForm> {
    Ok(willard_nf_traced(t)?.0)
}

/// The normal form together with the leftmost-innermost rewrite trace.
pub fn willard_nf_traced(t: &Term) -> Result<(WillardNormalForm, Vec<RewriteStep>)> {
    t.check(&willard_signature())?;
    let (n, trace) = normalize(t);
    Ok((WillardNormalForm::from_normal_term(&n), trace))
}

pub fn willard_equal(t1: &Term, t2: &Term) -> Result<bool> {
    Ok(willard_nf(t1)? == willard_nf(t2)?)
}

pub fn willard_is_unifier(s: &Substitution, sigma: &[Identity]) -> Result<bool> {
    for id in sigma {
        let inst = s.apply_identity(id)?;
        if !willard_equal(&inst.lhs, &inst.rhs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn word(vars: &[&str]) -> Term {
    vars[1..]
        .iter()
        .fold(Term::var(vars[0]), |acc, x| mul(acc, Term::var(*x)))
}

/// `{x ↦ x, y ↦ 1}`.
pub fn willard_sigma() -> Substitution {
    Substitution::from_pairs([("x", Term::var("x")), ("y", one())])
}

/// `σ_n = {x ↦ x y z1 .. zn, y ↦ y}`.
pub fn willard_sigma_family(n: usize) -> Substitution {
    let zs: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
    let mut names = vec!["x", "y"];
    names.extend(zs.iter().map(String::as_str));
    Substitution::from_pairs([("x", word(&names)), ("y", Term::var("y"))])
}

/// Three most general exact unifiers of `{xy = 0}`: `x ↦ 1`, `x ↦ 0`, and
/// `y ↦ yz`.
pub fn willard_exact_unifiers_xy0() -> Vec<Substitution> {
    let out = vec![
        Substitution::from_pairs([("x", one()), ("y", Term::var("y"))]),
        Substitution::from_pairs([("x", zero()), ("y", Term::var("y"))]),
        Substitution::from_pairs([("x", Term::var("x")), ("y", word(&["y", "z"]))]),
    ];
    let sigma = [Identity::new(word(&["x", "y"]), zero())];
    for s in &out {
        assert!(willard_is_unifier(s, &sigma).expect("closed over the signature"));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstantiationSearch {
    /// `τ` with `τ ∘ s1 = s2` in the variety.
    True(Substitution),
    /// No `τ` with images of word length at most the given depth.
    FalseUpTo(usize),
}

/// Candidate images: normal forms over `vars` of word length at most
/// `depth`, constants first, then words by length and lexicographically.
fn candidates(vars: &[String], depth: usize) -> Vec<WillardNormalForm> {
    if depth == 0 {
        return Vec::new();
    }
    let mut out = vec![WillardNormalForm::Zero, WillardNormalForm::One];
    let mut layer: Vec<WillardNormalForm> = vars.iter().map(|x| WillardNormalForm::var(x.as_str())).collect();
    for _ in 0..depth {
        out.extend(layer.iter().cloned());
        let mut next = Vec::new();
        for w in &layer {
            let WillardNormalForm::Word { head, tail } = w else { continue };
            for e in std::iter::once(TailEntry::One).chain(vars.iter().map(|x| TailEntry::Var(x.clone()))) {
                if e != TailEntry::One && tail.contains(&e) {
                    continue;
                }
                let mut t = tail.clone();
                t.push(e);
                next.push(WillardNormalForm::Word {
                    head: head.clone(),
                    tail: t,
                });
            }
        }
        layer = next;
    }
    out
}

#[derive(Clone, Copy)]
enum Atom {
    Var(usize),
    One,
}

/// A source image as a factor list over the search variables.
enum Shape {
    Const(WillardNormalForm),
    Word(Vec<Atom>),
}

fn consistent(shape: &Shape, assign: &[Option<usize>], cands: &[WillardNormalForm], target: &WillardNormalForm) -> bool {
    let atoms = match shape {
        Shape::Const(c) => return c == target,
        Shape::Word(a) => a,
    };
    let value = |a: &Atom| -> Option<WillardNormalForm> {
        match a {
            Atom::One => Some(WillardNormalForm::One),
            Atom::Var(i) => assign[*i].map(|c| cands[c].clone()),
        }
    };
    let Some(mut acc) = value(&atoms[0]) else {
        return true;
    };
    let mut done = 1;
    for a in &atoms[1..] {
        match value(a) {
            Some(b) => acc = acc.product(&b),
            None => break,
        }
        done += 1;
    }
    let remaining = atoms.len() - done;
    if remaining == 0 {
        return &acc == target;
    }
    match (&acc, target) {
        (_, WillardNormalForm::Zero) => true,
        (WillardNormalForm::Word { head, tail }, WillardNormalForm::Word { head: th, tail: tt }) => {
            head == th && tt.len() == tail.len() + remaining && tt.starts_with(tail)
        }
        _ => false,
    }
}

/// Searches for `τ` on the codomain of `s1`, with images over the codomain of
/// `s2` of word length at most `depth`, such that `τ ∘ s1 = s2` (that is,
/// `s2 ≼ s1`). The least witness in candidate order is returned.
pub fn willard_instantiation_le(s2: &Substitution, s1: &Substitution, depth: usize) -> Result<InstantiationSearch> {
    if s1.domain() != s2.domain() {
        return Err(Error::DomainMismatch("substitutions have different domains".into()));
    }
    let sig = willard_signature();
    s1.check(&sig)?;
    s2.check(&sig)?;
    let mut order: Vec<String> = Vec::new();
    let mut index = BTreeMap::new();
    let mut shapes = Vec::new();
    let mut targets = Vec::new();
    for (x, t) in s1.iter() {
        targets.push(willard_nf(s2.get(x).expect("same domain"))?);
        let shape = match willard_nf(t)? {
            WillardNormalForm::Word { head, tail } => {
                let mut atom = |v: &str| {
                    let i = *index.entry(v.to_string()).or_insert_with(|| {
                        order.push(v.to_string());
                        order.len() - 1
                    });
                    Atom::Var(i)
                };
                let mut atoms = vec![atom(&head)];
                atoms.extend(tail.iter().map(|e| match e {
                    TailEntry::Var(v) => atom(v),
                    TailEntry::One => Atom::One,
                }));
                Shape::Word(atoms)
            }
            c => Shape::Const(c),
        };
        shapes.push(shape);
    }
    let vars2: Vec<String> = s2.codomain_vars().iter().cloned().collect();
    let cands = candidates(&vars2, depth);
    let ok = |assign: &[Option<usize>]| {
        shapes
            .iter()
            .zip(&targets)
            .all(|(s, t)| consistent(s, assign, &cands, t))
    };

    let n = order.len();
    let mut assign: Vec<Option<usize>> = vec![None; n];
    let found = if !ok(&assign) {
        false
    } else {
        let mut k = 0;
        loop {
            if k == n {
                break true;
            }
            let next = assign[k].map_or(0, |c| c + 1);
            if next < cands.len() {
                assign[k] = Some(next);
                if ok(&assign) {
                    k += 1;
                }
            } else {
                assign[k] = None;
                if k == 0 {
                    break false;
                }
                k -= 1;
            }
        }
    };
    if !found {
        return Ok(InstantiationSearch::FalseUpTo(depth));
    }

    let mut map: BTreeMap<String, Term> = order
        .iter()
        .zip(&assign)
        .map(|(v, c)| (v.clone(), cands[c.expect("complete")].to_term()))
        .collect();
    // codomain variables that vanish from every normal form are unconstrained
    for v in s1.codomain_vars() {
        map.entry(v.clone()).or_insert_with(zero);
    }
    let tau = Substitution::with_codomain(map, vars2.into_iter().collect::<BTreeSet<_>>())?;
    for (x, t) in s1.iter() {
        debug_assert!(willard_equal(&tau.apply_extended(t), s2.get(x).unwrap())?);
    }
    Ok(InstantiationSearch::True(tau))
}
