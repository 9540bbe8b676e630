//! Oracles and generators shared by the integration tests and the
//! acceptance harness. Nothing here calls the search routines it is used to
//! check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use exunify::finalg::quotient;
use exunify::term::{Identity, Signature, Substitution, Term};
use exunify::variety::catalog::builtin;
use exunify::variety::{construct_bn_prime, VarietySpec};
use exunify::{Congruence, FiniteAlgebra};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

// ---------------------------------------------------------------------------
// finite algebras

/// Every set partition of `0..n` as a restricted growth string.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            go(i + 1, n, max.max(b + 1), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, 0, &mut Vec::new(), &mut out);
    out
}

fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Whether the labelling is compatible with every operation, checked on all
/// pairs of related argument tuples.
pub fn labels_compatible(alg: &FiniteAlgebra, labels: &[usize]) -> bool {
    let n = alg.size();
    for (op, (_, arity)) in alg.signature().ops().iter().enumerate() {
        let tuples = all_tuples(n, *arity);
        for a in &tuples {
            for b in &tuples {
                if a.iter().zip(b).all(|(x, y)| labels[*x] == labels[*y])
                    && labels[alg.apply(op, a)] != labels[alg.apply(op, b)]
                {
                    return false;
                }
            }
        }
    }
    true
}

/// Congruences by filtering all partitions, as sorted block-label vectors.
pub fn brute_force_congruences(alg: &FiniteAlgebra) -> BTreeSet<Vec<usize>> {
    set_partitions(alg.size())
        .into_iter()
        .filter(|p| labels_compatible(alg, p))
        .collect()
}

pub fn canonical_labels(c: &Congruence) -> Vec<usize> {
    let mut seen = BTreeMap::new();
    (0..c.len())
        .map(|a| {
            let n = seen.len();
            *seen.entry(c.block_of(a)).or_insert(n)
        })
        .collect()
}

/// Whether `map` commutes with every operation, on every argument tuple.
pub fn commutes(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[usize]) -> bool {
    a.signature().ops().iter().enumerate().all(|(op, (_, arity))| {
        all_tuples(a.size(), *arity).iter().all(|args| {
            let image: Vec<usize> = args.iter().map(|&x| map[x]).collect();
            map[a.apply(op, args)] == b.apply(op, &image)
        })
    })
}

/// Whether some injective map `a -> b` is a homomorphism, trying every one.
pub fn brute_force_embedding_exists(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    fn go(i: usize, a: &FiniteAlgebra, b: &FiniteAlgebra, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        if i == a.size() {
            return commutes(a, b, map);
        }
        for y in 0..b.size() {
            if !used[y] {
                used[y] = true;
                map.push(y);
                if go(i + 1, a, b, map, used) {
                    return true;
                }
                map.pop();
                used[y] = false;
            }
        }
        false
    }
    a.size() <= b.size() && go(0, a, b, &mut Vec::new(), &mut vec![false; b.size()])
}

/// Named small algebras from the catalog: generators, small free algebras,
/// and their quotients, of size at most `max`.
pub fn catalog_algebras(max: usize) -> Vec<(String, FiniteAlgebra)> {
    let mut out: Vec<(String, FiniteAlgebra)> = Vec::new();
    for name in ["bool", "dl", "bdl", "stone", "b2", "b3", "kleene", "demorgan"] {
        let v = builtin(name).unwrap();
        for (i, g) in v.generators().iter().enumerate() {
            out.push((format!("{name}/gen{i}"), g.clone()));
        }
        for n in 0..=3 {
            if n == 0 && !v.signature().has_constants() {
                continue;
            }
            let Ok(f) = v.clone().with_cap(64).free_algebra_n(n) else {
                break;
            };
            if f.size() > max.max(12) {
                break;
            }
            out.push((format!("{name}/F({n})"), f.algebra().clone()));
        }
    }
    for n in 1..=3 {
        out.push((format!("bn_prime({n})"), construct_bn_prime(n).unwrap()));
    }
    out.retain(|(_, a)| a.size() <= max);
    out
}

/// Proper nontrivial quotients of `alg`, one per brute-force congruence.
pub fn quotients(alg: &FiniteAlgebra) -> Vec<FiniteAlgebra> {
    brute_force_congruences(alg)
        .into_iter()
        .filter(|l| {
            let blocks = l.iter().max().map_or(0, |m| m + 1);
            blocks > 1 && blocks < alg.size()
        })
        .map(|l| quotient(alg, &Congruence::from_labels(&l)).unwrap().0)
        .collect()
}

// ---------------------------------------------------------------------------
// terms

pub fn random_term(rng: &mut impl Rng, sig: &Signature, vars: &[&str], depth: usize) -> Term {
    let ops = sig.ops();
    let leaf = |rng: &mut dyn rand::RngCore| {
        let consts: Vec<&String> = ops.iter().filter(|(_, a)| *a == 0).map(|(s, _)| s).collect();
        if !vars.is_empty() && (consts.is_empty() || rng.gen_bool(0.8)) {
            Term::var(*vars.choose(rng).unwrap())
        } else {
            Term::constant(consts.choose(rng).unwrap().as_str())
        }
    };
    if depth == 0 || rng.gen_bool(0.3) {
        return leaf(rng);
    }
    let non_const: Vec<&(String, usize)> = ops.iter().filter(|(_, a)| *a > 0).collect();
    let (s, arity) = non_const.choose(rng).unwrap();
    Term::app(s.as_str(), (0..*arity).map(|_| random_term(rng, sig, vars, depth - 1)).collect())
}

pub fn random_substitution(rng: &mut impl Rng, sig: &Signature, domain: &[&str], codomain: &[&str], depth: usize) -> Substitution {
    let map = domain
        .iter()
        .map(|x| (x.to_string(), random_term(rng, sig, codomain, depth)))
        .collect();
    Substitution::with_codomain(map, codomain.iter().map(|s| s.to_string()).collect()).unwrap()
}

/// Proptest strategy for terms over `sig` and `vars`.
pub fn term_strategy(sig: Signature, vars: Vec<String>) -> BoxedStrategy<Term> {
    let consts: Vec<Term> = sig
        .ops()
        .iter()
        .filter(|(_, a)| *a == 0)
        .map(|(s, _)| Term::constant(s.as_str()))
        .collect();
    let mut leaves: Vec<Term> = vars.iter().map(|v| Term::var(v.as_str())).collect();
    leaves.extend(consts);
    let ops: Vec<(String, usize)> = sig.ops().iter().filter(|(_, a)| *a > 0).cloned().collect();
    prop::sample::select(leaves)
        .prop_recursive(4, 24, 2, move |inner| {
            let ops = ops.clone();
            (prop::sample::select(ops), prop::collection::vec(inner, 2)).prop_map(|((s, arity), mut args)| {
                args.truncate(arity);
                Term::app(s, args)
            })
        })
        .boxed()
}

// ---------------------------------------------------------------------------
// semantics by direct evaluation

/// Every valuation of `vars` into `alg`.
pub fn valuations(alg: &FiniteAlgebra, vars: &[String]) -> Vec<BTreeMap<String, usize>> {
    all_tuples(alg.size(), vars.len())
        .into_iter()
        .map(|t| vars.iter().cloned().zip(t).collect())
        .collect()
}

/// `V ⊨ l ≈ r`, checked in every generator under every valuation.
pub fn holds(v: &VarietySpec, l: &Term, r: &Term) -> bool {
    let mut vars: BTreeSet<String> = l.vars();
    vars.extend(r.vars());
    let vars: Vec<String> = vars.into_iter().collect();
    v.generators().iter().all(|g| {
        valuations(g, &vars)
            .iter()
            .all(|val| g.eval(l, val).unwrap() == g.eval(r, val).unwrap())
    })
}

pub fn unifies(v: &VarietySpec, s: &Substitution, sigma: &[Identity]) -> bool {
    sigma
        .iter()
        .all(|id| holds(v, &s.apply(&id.lhs).unwrap(), &s.apply(&id.rhs).unwrap()))
}

/// For each term, its values under `s` followed by every valuation of the
/// codomain into every generator. Equal vectors mean equal images in `V`.
pub fn kernel_labels(v: &VarietySpec, s: &Substitution, terms: &[Term]) -> Vec<Vec<usize>> {
    let ys: Vec<String> = s.codomain_vars().iter().cloned().collect();
    let images: Vec<Term> = terms.iter().map(|t| s.apply(t).unwrap()).collect();
    let mut out = vec![Vec::new(); terms.len()];
    for g in v.generators() {
        for val in valuations(g, &ys) {
            for (o, t) in out.iter_mut().zip(&images) {
                o.push(g.eval(t, &val).unwrap());
            }
        }
    }
    out
}

/// `ker(s1) ⊆ ker(s2)` restricted to the given terms.
pub fn kernel_included_on(v: &VarietySpec, s1: &Substitution, s2: &Substitution, terms: &[Term]) -> bool {
    let (a, b) = (kernel_labels(v, s1, terms), kernel_labels(v, s2, terms));
    let mut seen: BTreeMap<&Vec<usize>, &Vec<usize>> = BTreeMap::new();
    for (ka, kb) in a.iter().zip(&b) {
        if let Some(prev) = seen.insert(ka, kb) {
            if prev != kb {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// syntactic unifier enumeration

/// Number of distinct ⊆-minimal kernels among all unifiers of `sigma` that
/// send `vars` into the free algebra on `k` fresh variables. Kernels are
/// computed on `F(vars)` by evaluating representative terms.
pub fn mu_size_by_enumeration(v: &VarietySpec, sigma: &[Identity], vars: &[String], k: usize) -> usize {
    let fx = v.free_algebra(&vars.iter().cloned().collect()).unwrap();
    let fresh: BTreeSet<String> = (0..k).map(|i| format!("w{i}")).collect();
    let fy = v.free_algebra(&fresh).unwrap();
    let target = fy.algebra();

    let mut kernels: BTreeSet<Vec<usize>> = BTreeSet::new();
    for images in all_tuples(target.size(), vars.len()) {
        let val: BTreeMap<String, usize> = vars.iter().cloned().zip(images).collect();
        let ok = sigma
            .iter()
            .all(|id| target.eval(&id.lhs, &val).unwrap() == target.eval(&id.rhs, &val).unwrap());
        if !ok {
            continue;
        }
        let labels: Vec<usize> = fx
            .representatives()
            .iter()
            .map(|t| target.eval(t, &val).unwrap())
            .collect();
        kernels.insert(canonical_labels(&Congruence::from_labels(&labels)));
    }
    let ks: Vec<Congruence> = kernels.iter().map(|l| Congruence::from_labels(l)).collect();
    ks.iter()
        .filter(|a| !ks.iter().any(|b| b != *a && b.is_below(a)))
        .count()
}

// ---------------------------------------------------------------------------
// preorders

/// A random preorder on `n` points: reflexive-transitive closure of a random relation.
pub fn random_preorder(rng: &mut impl Rng, n: usize, density: f64) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = i == j || rng.gen_bool(density);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

/// Number of maximal equivalence classes of a preorder (`le[i][j]`: i below j).
pub fn maximal_class_count(le: &[Vec<bool>]) -> usize {
    let n = le.len();
    let maximal: Vec<usize> = (0..n)
        .filter(|&i| (0..n).all(|j| !le[i][j] || le[j][i]))
        .collect();
    let mut classes: Vec<usize> = Vec::new();
    for &i in &maximal {
        if !classes.iter().any(|&c| le[c][i] && le[i][c]) {
            classes.push(i);
        }
    }
    classes.len()
}

// ---------------------------------------------------------------------------
// problem corpora

pub fn ids(v: &VarietySpec, pairs: &[(&str, &str)]) -> Vec<Identity> {
    pairs
        .iter()
        .map(|(l, r)| Identity::parse(l, r, v.signature()).unwrap())
        .collect()
}

/// Unifiable lattice problems over at most four variables.
pub fn dl_corpus() -> Vec<Vec<(&'static str, &'static str)>> {
    vec![
        vec![("x", "y")],
        vec![("(meet x y)", "x")],
        vec![("(join x y)", "x")],
        vec![("(meet x y)", "(join x y)")],
        vec![("(meet x y)", "(join z w)")],
        vec![("(meet x y)", "z")],
        vec![("(join x y)", "z")],
        vec![("(meet x (join y z))", "x")],
        vec![("(join x (meet y z))", "(meet x (join y z))")],
        vec![("(meet x y)", "x"), ("(meet y z)", "y")],
        vec![("(meet x z)", "(meet y z)"), ("(join x z)", "(join y z)")],
        vec![("(join x y)", "(join x z)")],
        vec![("(meet x y)", "(meet x z)")],
        vec![("(meet (join x y) z)", "(join x (meet y z))")],
        vec![("(join (meet x y) (meet z w))", "(meet (join x z) (join y w))")],
        vec![("(meet x y)", "w"), ("(join x y)", "z")],
        vec![("x", "y"), ("z", "w")],
        vec![("(meet x (join y w))", "(join z w)")],
        vec![("(join x y)", "(meet z w)"), ("x", "w")],
        vec![("(meet (join x y) (join z w))", "(join (meet x y) (meet z w))")],
        vec![("(join x w)", "(meet y z)")],
        vec![("(meet x y)", "(meet z w)"), ("(join x y)", "(join z w)")],
    ]
}

/// Unifiable Stone-algebra problems over at most two variables.
pub fn stone_corpus() -> Vec<Vec<(&'static str, &'static str)>> {
    vec![
        vec![("(join x (star x))", "top")],
        vec![("(star x)", "bot")],
        vec![("(star x)", "top")],
        vec![("(meet x y)", "bot")],
        vec![("(join x y)", "top")],
        vec![("(star (star x))", "x")],
        vec![("(star x)", "y")],
        vec![("(meet x (star y))", "bot")],
        vec![("(join (star x) (star y))", "top")],
        vec![("(star (meet x y))", "(join (star x) (star y))")],
        vec![("x", "y")],
        vec![("(meet x y)", "x")],
        vec![("(join x y)", "(meet x y)")],
        vec![("(star x)", "(star y)")],
        vec![("(meet x (star x))", "x")],
        vec![("(join x (star y))", "top")],
        vec![("(star (join x y))", "bot")],
        vec![("(meet (star x) y)", "y")],
        vec![("(star (star x))", "(star (star y))")],
        vec![("(join x y)", "top"), ("(meet x y)", "bot")],
        vec![("x", "top")],
        vec![("(meet x y)", "(star x)")],
    ]
}

/// Boolean problems with solutions, over at most three variables.
pub fn bool_corpus() -> Vec<Vec<(&'static str, &'static str)>> {
    vec![
        vec![("(join x y)", "top")],
        vec![("(meet x y)", "top")],
        vec![("(meet x y)", "bot")],
        vec![("x", "(neg y)")],
        vec![("(join x y)", "z")],
        vec![("(meet x (neg y))", "bot")],
        vec![("(join (meet x y) z)", "top")],
        vec![("x", "y"), ("(join y z)", "top")],
        vec![("(meet x (join y z))", "x")],
        vec![("(join x (neg z))", "(meet y z)")],
    ]
}
