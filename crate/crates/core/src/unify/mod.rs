//! Unifiers, the instantiation and exact preorders, μ-sets, and exact
//! unification types via congruences of finitely presented algebras.

mod constructions;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use constructions::{
    boolean_mgu, boolean_mgu_over, dl_unifier_from_points, mgeu_distributive_lattice,
    mgeu_distributive_lattice_over, satisfying_points, DlMgeu,
};

use crate::error::{Error, Result};
use crate::finalg::{all_congruences, odometer_step, quotient, CompiledTerm, Congruence, Homomorphism};
use crate::term::{vars_of, Identity, Substitution};
use crate::variety::{
    AlgebraOrigin, ExactWitness, ExactnessVerdict, FreeAlgebra, PresentedAlgebra, VarietySpec,
};

/// Exact unification type of a unification problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeVerdict {
    Unitary,
    Finitary(usize),
    NotUnifiable,
}

impl TypeVerdict {
    /// Type of a preorder with a μ-set of the given size.
    pub fn from_mu_size(k: usize) -> Self {
        match k {
            0 => TypeVerdict::NotUnifiable,
            1 => TypeVerdict::Unitary,
            k => TypeVerdict::Finitary(k),
        }
    }
}

impl fmt::Display for TypeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeVerdict::Unitary => f.write_str("unitary"),
            TypeVerdict::Finitary(k) => write!(f, "finitary({k})"),
            TypeVerdict::NotUnifiable => f.write_str("not unifiable"),
        }
    }
}

/// Whether `s` unifies every identity of `sigma` in `v`.
pub fn is_unifier(v: &VarietySpec, s: &Substitution, sigma: &[Identity]) -> Result<bool> {
    for id in sigma {
        if !v.validates_identity(&s.apply_identity(id)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The kernel of `F(X) → F(Y)`, `x ↦ h(σ(x))`, as a congruence on `F(X)`.
#[derive(Debug, Clone)]
pub struct KernelCongruence {
    pub substitution: Substitution,
    pub free_domain: Arc<FreeAlgebra>,
    pub congruence: Congruence,
}

/// Computes the kernel without building `F(Y)`: two elements of `F(X)` are
/// identified iff they agree at every point `(σ(x) evaluated at g)_x` for
/// valuations `g` of `Y` into the generators.
pub fn kernel_congruence(v: &VarietySpec, s: &Substitution) -> Result<KernelCongruence> {
    s.check(v.signature())?;
    let domain = s.domain();
    let free = v.free_algebra(&domain)?;
    let coords = substitution_points(v, &free, s)?;
    let congruence = restrict_to_coordinates(&free, &coords);
    Ok(KernelCongruence {
        substitution: s.clone(),
        free_domain: free,
        congruence,
    })
}

/// Coordinates of `F(X)` hit by the points of `s`, in increasing order.
fn substitution_points(v: &VarietySpec, free: &FreeAlgebra, s: &Substitution) -> Result<Vec<usize>> {
    let ys: Vec<String> = s.codomain_vars().iter().cloned().collect();
    let compiled = free
        .vars()
        .iter()
        .map(|x| CompiledTerm::compile_with_vars(s.get(x).unwrap(), v.signature(), &ys))
        .collect::<Result<Vec<_>>>()?;
    let mut hit = vec![false; free.dimension()];
    let mut stack = Vec::new();
    let mut point = vec![0usize; compiled.len()];
    for (gi, a) in v.generators().iter().enumerate() {
        let mut g = vec![0usize; ys.len()];
        loop {
            for (i, c) in compiled.iter().enumerate() {
                point[i] = c.eval(a, &g, &mut stack);
            }
            hit[free.coordinate_of(gi, &point)] = true;
            if !odometer_step(&mut g, a.size()) {
                break;
            }
        }
    }
    Ok((0..hit.len()).filter(|&c| hit[c]).collect())
}

/// Identifies elements of `F(X)` whose tuples agree on `coords`.
pub(crate) fn restrict_to_coordinates(free: &FreeAlgebra, coords: &[usize]) -> Congruence {
    let projected: Vec<Vec<u8>> = (0..free.size())
        .map(|e| {
            let t = free.tuple(e);
            coords.iter().map(|&c| t[c]).collect()
        })
        .collect();
    let labels: Vec<&[u8]> = projected.iter().map(|p| p.as_slice()).collect();
    Congruence::from_labels(&labels)
}

fn same_domain(s2: &Substitution, s1: &Substitution) -> Result<()> {
    if s1.domain() != s2.domain() {
        return Err(Error::DomainMismatch("substitutions have different domains".into()));
    }
    Ok(())
}

/// `s2 ⊑ s1`: every identity unified by `s1` is unified by `s2`.
pub fn exact_le(v: &VarietySpec, s2: &Substitution, s1: &Substitution) -> Result<bool> {
    same_domain(s2, s1)?;
    let k1 = kernel_congruence(v, s1)?;
    let k2 = kernel_congruence(v, s2)?;
    Ok(k1.congruence.is_below(&k2.congruence))
}

/// `s2 ≼ s1`: some `τ` from the codomain of `s1` into terms over the
/// codomain of `s2` has `τ∘s1 = s2` modulo `v`. Returns such a `τ`.
pub fn instantiation_witness(v: &VarietySpec, s2: &Substitution, s1: &Substitution) -> Result<Option<Substitution>> {
    same_domain(s2, s1)?;
    s1.check(v.signature())?;
    s2.check(v.signature())?;
    let y2 = s2.codomain_vars();
    if y2.is_empty() && !v.signature().has_constants() {
        return Err(Error::Invalid(
            "the instantiated substitution has no codomain variables and the signature has no constants".into(),
        ));
    }
    let f2 = v.free_algebra(y2)?;
    let y1: Vec<String> = s1.codomain_vars().iter().cloned().collect();
    let mut checks: Vec<Vec<(CompiledTerm, usize)>> = vec![Vec::new(); y1.len() + 1];
    for (x, t1) in s1.iter() {
        let target = f2.canonical_image(s2.get(x).unwrap())?;
        let last = t1
            .vars()
            .iter()
            .map(|y| y1.binary_search(y).unwrap() + 1)
            .max()
            .unwrap_or(0);
        checks[last].push((CompiledTerm::compile_with_vars(t1, v.signature(), &y1)?, target));
    }
    let alg = f2.algebra();
    let mut stack = Vec::new();
    let mut tau = vec![0usize; y1.len()];
    let ok_at = |level: usize, tau: &[usize], stack: &mut Vec<usize>| {
        checks[level].iter().all(|(c, t)| c.eval(alg, tau, stack) == *t)
    };
    if !ok_at(0, &tau, &mut stack) {
        return Ok(None);
    }
    // depth-first over τ values in order
    let n = alg.size();
    let mut depth = 0usize;
    let found = if y1.is_empty() {
        true
    } else {
        let mut next = vec![0usize; y1.len()];
        loop {
            if next[depth] == n {
                next[depth] = 0;
                if depth == 0 {
                    break false;
                }
                depth -= 1;
                continue;
            }
            tau[depth] = next[depth];
            next[depth] += 1;
            if ok_at(depth + 1, &tau, &mut stack) {
                if depth + 1 == y1.len() {
                    break true;
                }
                depth += 1;
            }
        }
    };
    if !found {
        return Ok(None);
    }
    let map = y1
        .iter()
        .zip(&tau)
        .map(|(y, &e)| (y.clone(), f2.representative(e).clone()))
        .collect();
    Ok(Some(Substitution::with_codomain(map, y2.clone())?))
}

pub fn instantiation_le(v: &VarietySpec, s2: &Substitution, s1: &Substitution) -> Result<bool> {
    Ok(instantiation_witness(v, s2, s1)?.is_some())
}

/// Whether `h∘σ∘σ = h∘σ`. Only meaningful when the codomain variables lie
/// in the domain; otherwise `false`.
pub fn is_idempotent_mod(v: &VarietySpec, s: &Substitution) -> Result<bool> {
    let dom = s.domain();
    if !s.codomain_vars().is_subset(&dom) {
        return Ok(false);
    }
    for (_, t) in s.iter() {
        let tt = s.apply(t)?;
        if !v.validates_identity(&Identity::new(tt, t.clone()))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indices of a μ-set of the preorder `le` on `elements`: the least index
/// of each maximal class.
pub fn mu_set<T>(elements: &[T], le: impl Fn(&T, &T) -> bool) -> Vec<usize> {
    let n = elements.len();
    let mut out = Vec::new();
    'outer: for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            let up = le(&elements[i], &elements[j]);
            let down = le(&elements[j], &elements[i]);
            if up && !down {
                continue 'outer;
            }
            if up && down && j < i {
                continue 'outer;
            }
        }
        out.push(i);
    }
    out
}

/// Type of a finite preorder.
pub fn preorder_type<T>(elements: &[T], le: impl Fn(&T, &T) -> bool) -> TypeVerdict {
    TypeVerdict::from_mu_size(mu_set(elements, le).len())
}

#[derive(Debug, Clone)]
pub struct CoexactMember {
    pub congruence: Congruence,
    pub verdict: ExactnessVerdict,
}

/// The ⊆-minimal congruences of `Fp(Σ, X)` with exact quotient.
#[derive(Debug, Clone)]
pub struct CoexactMuSet {
    pub presented: PresentedAlgebra,
    pub members: Vec<CoexactMember>,
    /// Some congruence was rejected only because no embedding turned up
    /// within the search bound.
    pub bound_relative: bool,
    /// The congruences behind `bound_relative`: not above a member, and
    /// neither certified exact nor ruled out.
    pub undetermined: Vec<Congruence>,
    /// Number of congruences whose quotient was tested.
    pub tested: usize,
}

impl CoexactMuSet {
    pub fn type_verdict(&self) -> TypeVerdict {
        TypeVerdict::from_mu_size(self.members.len())
    }

    /// Pulls a congruence of `Fp` back to `F(X)`.
    pub fn pullback(&self, theta: &Congruence) -> Congruence {
        let labels: Vec<usize> = self.presented.rho.map.iter().map(|&b| theta.block_of(b)).collect();
        Congruence::from_labels(&labels)
    }

    /// A unifier for member `i`, using its embedding witness or searching
    /// free algebras on up to `bound` generators for one.
    pub fn unifier(&self, v: &VarietySpec, i: usize, bound: usize) -> Result<Option<Substitution>> {
        let m = &self.members[i];
        let (q, _) = quotient(&self.presented.algebra, &m.congruence)?;
        let witness = match &m.verdict {
            ExactnessVerdict::Exact(w @ ExactWitness::Embedding { .. }) => Some(w.clone()),
            _ => v.find_exactness_embedding(&q, bound)?,
        };
        match witness {
            Some(ExactWitness::Embedding { target_vars, map, .. }) => {
                let target = v.free_algebra(&target_vars.into_iter().collect())?;
                Ok(Some(unifier_from_congruence(v, &self.presented, &m.congruence, &target, &map)?))
            }
            _ => Ok(None),
        }
    }
}

/// Computes the exact μ-set through `Con_e(Fp(Σ, X))`.
pub fn coexact_mu_set(
    v: &VarietySpec,
    sigma: &[Identity],
    vars: &BTreeSet<String>,
    bound: Option<usize>,
) -> Result<CoexactMuSet> {
    let presented = v.finitely_presented(sigma, vars)?;
    let a = &presented.algebra;
    let mut members: Vec<CoexactMember> = Vec::new();
    let mut undetermined: Vec<Congruence> = Vec::new();
    let mut tested = 0;
    let mut classify = |theta: &Congruence| -> Result<ExactnessVerdict> {
        let (q, _) = quotient(a, theta)?;
        tested += 1;
        v.is_exact_algebra(&q, bound, AlgebraOrigin::FinitelyPresented)
    };

    let identity = Congruence::identity(a.size());
    let verdict = classify(&identity)?;
    if verdict.is_exact() {
        members.push(CoexactMember {
            congruence: identity,
            verdict,
        });
    } else {
        if verdict.is_bound_relative() {
            undetermined.push(identity.clone());
        }
        // congruences above an obstructed one collapse the same constants
        let mut obstructed: Vec<Congruence> = Vec::new();
        if !verdict.is_bound_relative() {
            obstructed.push(identity.clone());
        }
        for theta in all_congruences(a)?.into_iter().filter(|c| *c != identity) {
            let below_theta = |c: &Congruence| c.is_below(&theta);
            if members.iter().map(|m| &m.congruence).any(below_theta) || obstructed.iter().any(below_theta) {
                continue;
            }
            let verdict = classify(&theta)?;
            if verdict.is_exact() {
                members.push(CoexactMember {
                    congruence: theta,
                    verdict,
                });
            } else if verdict.is_bound_relative() {
                undetermined.push(theta);
            } else {
                obstructed.push(theta);
            }
        }
    }
    Ok(CoexactMuSet {
        presented,
        members,
        bound_relative: !undetermined.is_empty(),
        undetermined,
        tested,
    })
}

/// Exact type together with whether it depends on the search bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactType {
    pub verdict: TypeVerdict,
    pub bound_relative: bool,
}

pub fn exact_type(
    v: &VarietySpec,
    sigma: &[Identity],
    vars: &BTreeSet<String>,
    bound: Option<usize>,
) -> Result<ExactType> {
    let mu = coexact_mu_set(v, sigma, vars, bound)?;
    Ok(ExactType {
        verdict: mu.type_verdict(),
        bound_relative: mu.bound_relative,
    })
}

/// Turns an embedding `e: Fp/θ → F(Y)` into the unifier
/// `x ↦ representative of e(θ-class of ρ(x))`.
pub fn unifier_from_congruence(
    v: &VarietySpec,
    p: &PresentedAlgebra,
    theta: &Congruence,
    target: &FreeAlgebra,
    e: &Homomorphism,
) -> Result<Substitution> {
    let (q, proj) = quotient(&p.algebra, theta)?;
    if q.signature() != v.signature() || !e.is_homomorphism(&q, target.algebra()) {
        return Err(Error::NotEmbedding("map is not a homomorphism into the target free algebra".into()));
    }
    if !e.is_injective() {
        return Err(Error::NotEmbedding("map is not injective".into()));
    }
    let map = p
        .vars()
        .iter()
        .zip(p.generator_images())
        .map(|(x, a)| (x.clone(), target.representative(e.image(proj.image(a))).clone()))
        .collect();
    Substitution::with_codomain(map, target.vars().iter().cloned().collect())
}

/// Variables of `sigma`, sorted.
pub fn problem_vars(sigma: &[Identity]) -> BTreeSet<String> {
    vars_of(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;
    use crate::variety::catalog::builtin;

    fn subst(v: &VarietySpec, pairs: &[(&str, &str)]) -> Substitution {
        Substitution::from_pairs(pairs.iter().map(|(x, t)| (*x, Term::parse(t, v.signature()).unwrap())))
    }

    fn ids(v: &VarietySpec, pairs: &[(&str, &str)]) -> Vec<Identity> {
        pairs.iter().map(|(l, r)| Identity::parse(l, r, v.signature()).unwrap()).collect()
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn unifier_examples() {
        let b = builtin("bool").unwrap();
        let s = subst(&b, &[("x", "top"), ("y", "top")]);
        assert!(is_unifier(&b, &s, &ids(&b, &[("(meet x y)", "top")])).unwrap());
        let dl = builtin("dl").unwrap();
        let id = Substitution::identity(&set(&["x", "y"]));
        assert!(!is_unifier(&dl, &id, &ids(&dl, &[("x", "y")])).unwrap());
        let partial = subst(&dl, &[("x", "y")]);
        assert!(is_unifier(&dl, &partial, &ids(&dl, &[("x", "z")])).is_err());
    }

    #[test]
    fn kernel_examples() {
        let dl = builtin("dl").unwrap();
        let collapse = subst(&dl, &[("x", "z"), ("y", "z")]);
        assert!(kernel_congruence(&dl, &collapse).unwrap().congruence.is_total());
        let id = Substitution::identity(&set(&["x", "y"]));
        assert!(kernel_congruence(&dl, &id).unwrap().congruence.is_identity());
    }

    #[test]
    fn kernel_matches_pairwise_identity_checks() {
        let dl = builtin("dl").unwrap();
        let s = subst(&dl, &[("x", "(meet u w)"), ("y", "(join u w)"), ("z", "u")]);
        let k = kernel_congruence(&dl, &s).unwrap();
        let f = &k.free_domain;
        for a in 0..f.size() {
            for b in 0..f.size() {
                let id = Identity::new(s.apply(f.representative(a)).unwrap(), s.apply(f.representative(b)).unwrap());
                assert_eq!(k.congruence.related(a, b), dl.validates_identity(&id).unwrap());
            }
        }
    }

    #[test]
    fn exact_and_instantiation_examples() {
        let dl = builtin("dl").unwrap();
        let collapse = subst(&dl, &[("x", "z"), ("y", "z")]);
        let id = Substitution::identity(&set(&["x", "y"]));
        assert!(exact_le(&dl, &collapse, &id).unwrap());
        assert!(!exact_le(&dl, &id, &collapse).unwrap());
        assert!(exact_le(&dl, &collapse, &collapse).unwrap());

        let s2 = subst(&dl, &[("x", "w")]);
        let s1 = subst(&dl, &[("x", "(meet y z)")]);
        let tau = instantiation_witness(&dl, &s2, &s1).unwrap().unwrap();
        assert_eq!(tau.get("y"), Some(&Term::var("w")));
        assert!(instantiation_le(&dl, &s1, &s1).unwrap());
        assert!(instantiation_le(&dl, &collapse, &id).unwrap());
        assert!(!instantiation_le(&dl, &id, &collapse).unwrap());
        assert!(exact_le(&dl, &s2, &s1).is_ok());
        let other = subst(&dl, &[("y", "w")]);
        assert!(matches!(exact_le(&dl, &other, &s1), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn instantiation_needs_targets() {
        let dl = builtin("dl").unwrap();
        let s1 = Substitution::identity(&set(&["x"]));
        let ground = Substitution::with_codomain(
            [("x".to_string(), Term::var("x"))].into(),
            set(&["x"]),
        )
        .unwrap();
        assert!(instantiation_le(&dl, &ground, &s1).unwrap());
        let bdl = builtin("bdl").unwrap();
        let s2 = subst(&bdl, &[("x", "top")]);
        assert!(instantiation_le(&bdl, &s2, &s1).unwrap());
        let empty_dl = Substitution::with_codomain(Default::default(), BTreeSet::new()).unwrap();
        assert!(instantiation_le(&dl, &empty_dl, &empty_dl).is_err());
    }

    #[test]
    fn mu_set_examples() {
        let le = |a: &u32, b: &u32| a <= b;
        assert_eq!(mu_set(&[1u32, 3, 2], le), vec![1]);
        // incomparable pair
        let div = |a: &u32, b: &u32| b.is_multiple_of(*a);
        assert_eq!(mu_set(&[2u32, 3], div), vec![0, 1]);
        // a class of equivalent elements
        let eq = |_: &u32, _: &u32| true;
        assert_eq!(mu_set(&[5u32, 4, 6], eq), vec![0]);
        assert_eq!(preorder_type(&[2u32, 3, 6], div), TypeVerdict::Unitary);
        assert_eq!(preorder_type::<u32>(&[], div), TypeVerdict::NotUnifiable);
    }

    #[test]
    fn coexact_examples() {
        let dl = builtin("dl").unwrap();
        let sigma = ids(&dl, &[("(meet x y)", "(join z w)")]);
        let mu = coexact_mu_set(&dl, &sigma, &problem_vars(&sigma), None).unwrap();
        assert_eq!(mu.members.len(), 1);
        assert!(!mu.bound_relative);

        let b2 = builtin("b2").unwrap();
        let sigma = ids(&b2, &[("(join x (star x))", "top")]);
        let mu = coexact_mu_set(&b2, &sigma, &set(&["x"]), None).unwrap();
        assert_eq!(mu.members.len(), 2);
        assert_eq!(mu.type_verdict(), TypeVerdict::Finitary(2));

        let bdl = builtin("bdl").unwrap();
        let sigma = ids(&bdl, &[("bot", "top")]);
        let mu = coexact_mu_set(&bdl, &sigma, &set(&["x"]), None).unwrap();
        assert!(mu.members.is_empty());
        assert!(!mu.bound_relative);
        assert_eq!(
            exact_type(&bdl, &sigma, &set(&["x"]), None).unwrap().verdict,
            TypeVerdict::NotUnifiable
        );
    }

    #[test]
    fn unifiers_from_congruences() {
        let dl = builtin("dl").unwrap();
        let xy = set(&["x", "y"]);
        let sigma = ids(&dl, &[("(meet x y)", "x")]);
        let p = dl.finitely_presented(&sigma, &xy).unwrap();
        let target = dl.free_algebra(&xy).unwrap();
        // the 2-chain Fp onto {x∧y, x}
        let img = |s: &str| target.canonical_image(&Term::parse(s, dl.signature()).unwrap()).unwrap();
        let (low, high) = (img("(meet x y)"), img("x"));
        let gx = p.generator_images();
        // rho(x) is the bottom of the chain, rho(y) the top
        let mut map = vec![0; 2];
        map[gx[0]] = low;
        map[gx[1]] = high;
        let theta = Congruence::identity(2);
        let s = unifier_from_congruence(&dl, &p, &theta, &target, &Homomorphism::new(map)).unwrap();
        assert_eq!(s.get("x").unwrap().to_string(), "(meet x y)");
        assert_eq!(s.get("y").unwrap(), &Term::var("x"));
        assert!(is_unifier(&dl, &s, &sigma).unwrap());

        let total = Congruence::total(2);
        let z = dl.free_algebra(&set(&["z"])).unwrap();
        let s = unifier_from_congruence(&dl, &p, &total, &z, &Homomorphism::new(vec![0])).unwrap();
        assert_eq!(s.get("x"), Some(&Term::var("z")));
        assert_eq!(s.get("y"), Some(&Term::var("z")));

        let bad = Homomorphism::new(vec![low, low]);
        assert!(unifier_from_congruence(&dl, &p, &theta, &target, &bad).is_err());
    }

    #[test]
    fn coexact_unifiers_have_the_pulled_back_kernel() {
        for (name, l, r, xs) in [
            ("b2", "(join x (star x))", "top", vec!["x"]),
            ("dl", "(meet x y)", "x", vec!["x", "y"]),
            ("kleene", "(meet x (neg x))", "bot", vec!["x"]),
        ] {
            let v = builtin(name).unwrap();
            let sigma = ids(&v, &[(l, r)]);
            let mu = coexact_mu_set(&v, &sigma, &set(&xs), None).unwrap();
            for (i, m) in mu.members.iter().enumerate() {
                let s = mu.unifier(&v, i, 2).unwrap().expect("an embedding within the bound");
                assert!(is_unifier(&v, &s, &sigma).unwrap());
                let k = kernel_congruence(&v, &s).unwrap();
                assert_eq!(k.congruence, mu.pullback(&m.congruence));
            }
        }
    }

    #[test]
    fn idempotence() {
        let dl = builtin("dl").unwrap();
        assert!(is_idempotent_mod(&dl, &Substitution::identity(&set(&["x", "y"]))).unwrap());
        assert!(is_idempotent_mod(&dl, &subst(&dl, &[("x", "(meet x y)"), ("y", "y")])).unwrap());
        assert!(!is_idempotent_mod(&dl, &subst(&dl, &[("x", "y"), ("y", "x")])).unwrap());
        assert!(!is_idempotent_mod(&dl, &subst(&dl, &[("x", "z")])).unwrap());
    }
}
