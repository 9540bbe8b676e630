//! Closed-form unifiers for distributive lattices and Boolean algebras.

use std::collections::{BTreeMap, BTreeSet};

use super::{coexact_mu_set, kernel_congruence, restrict_to_coordinates};
use crate::error::{Error, Result};
use crate::finalg::{odometer_step, CompiledTerm, FiniteAlgebra};
use crate::term::{fresh_vars, vars_of, Identity, Substitution, Term};
use crate::variety::catalog::builtin;

/// Valuations of `vars` into `alg` satisfying every identity of `sigma`,
/// in lexicographic order (first variable most significant).
pub fn satisfying_points(alg: &FiniteAlgebra, sigma: &[Identity], vars: &[String]) -> Result<Vec<Vec<usize>>> {
    let sides = sigma
        .iter()
        .map(|id| {
            Ok((
                CompiledTerm::compile_with_vars(&id.lhs, alg.signature(), vars)?,
                CompiledTerm::compile_with_vars(&id.rhs, alg.signature(), vars)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    let mut stack = Vec::new();
    let mut val = vec![0usize; vars.len()];
    loop {
        if sides
            .iter()
            .all(|(l, r)| l.eval(alg, &val, &mut stack) == r.eval(alg, &val, &mut stack))
        {
            out.push(val.clone());
        }
        if !odometer_step(&mut val, alg.size()) {
            break;
        }
    }
    Ok(out)
}

fn join_all(mut terms: impl Iterator<Item = Term>) -> Option<Term> {
    let first = terms.next()?;
    Some(terms.fold(first, |acc, t| Term::binary("join", acc, t)))
}

/// The lattice unifier built from 0/1 points `f_1, .., f_m` of `vars`:
/// `σ(x) = φ ∨ ⋁{y_j : f_j(x) = 1}` with `φ = ⋁{y_i ∧ y_j : i < j}`.
///
/// With a single point, `σ(x) = y_1` where `f_1(x) = 1` and `y_1 ∧ y_2`
/// elsewhere; `fresh` must then hold two names.
pub fn dl_unifier_from_points(vars: &[String], points: &[Vec<usize>], fresh: &[String]) -> Substitution {
    let y = |j: usize| Term::var(fresh[j].as_str());
    let m = points.len();
    let mut map = BTreeMap::new();
    if m == 1 {
        for (k, x) in vars.iter().enumerate() {
            let t = if points[0][k] == 1 {
                y(0)
            } else {
                Term::binary("meet", y(0), y(1))
            };
            map.insert(x.clone(), t);
        }
        return Substitution::new(map);
    }
    let pairs = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j)));
    let phi = join_all(pairs.map(|(i, j)| Term::binary("meet", y(i), y(j)))).expect("at least two points");
    for (k, x) in vars.iter().enumerate() {
        let ups = (0..m).filter(|&j| points[j][k] == 1).map(y);
        map.insert(x.clone(), join_all(std::iter::once(phi.clone()).chain(ups)).unwrap());
    }
    Substitution::new(map)
}

/// Result of the distributive-lattice construction.
#[derive(Debug, Clone)]
pub struct DlMgeu {
    pub substitution: Substitution,
    /// The satisfying 0/1 points, in the order their fresh variables were allocated.
    pub points: Vec<Vec<usize>>,
    pub fresh: Vec<String>,
    /// The closed form failed its kernel check and the congruence route was used.
    pub via_fallback: bool,
}

/// Most general exact unifier of `sigma` in distributive lattices, over `Var(sigma)`.
pub fn mgeu_distributive_lattice(sigma: &[Identity]) -> Result<DlMgeu> {
    mgeu_distributive_lattice_over(sigma, &vars_of(sigma))
}

pub fn mgeu_distributive_lattice_over(sigma: &[Identity], vars: &BTreeSet<String>) -> Result<DlMgeu> {
    let dl = builtin("dl")?;
    for id in sigma {
        id.check(dl.signature())?;
    }
    let xs: Vec<String> = vars.iter().cloned().collect();
    let two = &dl.generators()[0];
    let points = satisfying_points(two, sigma, &xs)?;
    if points.is_empty() {
        return Err(Error::NotUnifiable("no 0/1 assignment satisfies the identities".into()));
    }
    let m = points.len();
    let fresh = fresh_vars(m.max(2), vars);
    let substitution = dl_unifier_from_points(&xs, &points, &fresh);

    // kernel must equal the intersection of the kernels of the points
    let free = dl.free_algebra(vars)?;
    let mut coords: Vec<usize> = points.iter().map(|p| free.coordinate_of(0, p)).collect();
    coords.sort_unstable();
    let expected = restrict_to_coordinates(&free, &coords);
    let got = kernel_congruence(&dl, &substitution)?.congruence;
    if got == expected && super::is_unifier(&dl, &substitution, sigma)? {
        return Ok(DlMgeu {
            substitution,
            points,
            fresh,
            via_fallback: false,
        });
    }
    let mu = coexact_mu_set(&dl, sigma, vars, None)?;
    if mu.members.is_empty() {
        return Err(Error::NotUnifiable("no exact quotient".into()));
    }
    let bound = free.vars().len().max(1);
    let substitution = mu
        .unifier(&dl, 0, bound)?
        .ok_or_else(|| Error::ResourceLimit(format!("no embedding into F({bound}) found")))?;
    Ok(DlMgeu {
        substitution,
        points,
        fresh: Vec::new(),
        via_fallback: true,
    })
}

fn sum(a: Term, b: Term) -> Term {
    Term::binary(
        "join",
        Term::binary("meet", a.clone(), Term::unary("neg", b.clone())),
        Term::binary("meet", Term::unary("neg", a), b),
    )
}

/// Most general Boolean unifier of `sigma` over `Var(sigma)`.
pub fn boolean_mgu(sigma: &[Identity]) -> Result<Substitution> {
    boolean_mgu_over(sigma, &vars_of(sigma))
}

/// Folds `sigma` into `χ ≈ ⊥` with `χ = ⋁(φ_i + ψ_i)` and returns
/// `σ(x) = (¬χ ∧ x) ∨ (χ ∧ σ₀(x))`, where `σ₀` is the lexicographically
/// greatest 0/1 assignment with `χ = 0`.
pub fn boolean_mgu_over(sigma: &[Identity], vars: &BTreeSet<String>) -> Result<Substitution> {
    let b = builtin("bool")?;
    for id in sigma {
        id.check(b.signature())?;
        if let Some(v) = id.vars().into_iter().find(|v| !vars.contains(v)) {
            return Err(Error::UnboundVariable(v));
        }
    }
    let chi = join_all(sigma.iter().map(|id| sum(id.lhs.clone(), id.rhs.clone()))).unwrap_or(Term::constant("bot"));
    let xs: Vec<String> = vars.iter().cloned().collect();
    let solved = Identity::new(chi.clone(), Term::constant("bot"));
    let points = satisfying_points(&b.generators()[0], std::slice::from_ref(&solved), &xs)?;
    let sigma0 = points
        .last()
        .ok_or_else(|| Error::NotUnifiable("no 0/1 assignment satisfies the identities".into()))?;
    let map = xs
        .iter()
        .zip(sigma0)
        .map(|(x, &bit)| {
            let c = Term::constant(if bit == 1 { "top" } else { "bot" });
            let t = Term::binary(
                "join",
                Term::binary("meet", Term::unary("neg", chi.clone()), Term::var(x.as_str())),
                Term::binary("meet", chi.clone(), c),
            );
            (x.clone(), t)
        })
        .collect();
    Substitution::with_codomain(map, vars.clone())
}

#[cfg(test)]
mod tests {
    use super::super::{exact_le, is_unifier};
    use super::*;
    use crate::variety::VarietySpec;

    fn ids(v: &VarietySpec, pairs: &[(&str, &str)]) -> Vec<Identity> {
        pairs.iter().map(|(l, r)| Identity::parse(l, r, v.signature()).unwrap()).collect()
    }

    fn equiv(v: &VarietySpec, a: &Term, b: &str) -> bool {
        v.validates_identity(&Identity::new(a.clone(), Term::parse(b, v.signature()).unwrap())).unwrap()
    }

    #[test]
    fn dl_point_counts() {
        let dl = builtin("dl").unwrap();
        let r = mgeu_distributive_lattice(&ids(&dl, &[("(meet x y)", "(join z w)")])).unwrap();
        assert_eq!(r.points.len(), 6);
        assert_eq!(r.fresh.len(), 6);
        assert!(!r.via_fallback);
        let r = mgeu_distributive_lattice(&ids(&dl, &[("(meet x y)", "x")])).unwrap();
        assert_eq!(r.points, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn dl_trivial_identity() {
        let dl = builtin("dl").unwrap();
        let r = mgeu_distributive_lattice(&ids(&dl, &[("x", "x")])).unwrap();
        assert_eq!(r.points, vec![vec![0], vec![1]]);
        assert_eq!(r.substitution.get("x").unwrap().to_string(), "(join (meet v0 v1) v1)");
    }

    #[test]
    fn dl_single_point_shape() {
        let xs = vec!["x".to_string(), "y".to_string()];
        let fresh = vec!["v0".to_string(), "v1".to_string()];
        let s = dl_unifier_from_points(&xs, &[vec![1, 0]], &fresh);
        assert_eq!(s.get("x"), Some(&Term::var("v0")));
        assert_eq!(s.get("y").unwrap().to_string(), "(meet v0 v1)");
    }

    #[test]
    fn dl_mgeu_dominates_simple_unifiers() {
        let dl = builtin("dl").unwrap();
        let sigma = ids(&dl, &[("(meet x y)", "x")]);
        let r = mgeu_distributive_lattice(&sigma).unwrap();
        assert!(is_unifier(&dl, &r.substitution, &sigma).unwrap());
        let other = Substitution::from_pairs([("x", Term::var("u")), ("y", Term::var("u"))]);
        assert!(exact_le(&dl, &other, &r.substitution).unwrap());
    }

    #[test]
    fn boolean_examples() {
        let b = builtin("bool").unwrap();
        let s = boolean_mgu(&ids(&b, &[("(meet x y)", "top")])).unwrap();
        assert!(equiv(&b, s.get("x").unwrap(), "top"));
        assert!(equiv(&b, s.get("y").unwrap(), "top"));

        let s = boolean_mgu(&ids(&b, &[("x", "x")])).unwrap();
        assert!(equiv(&b, s.get("x").unwrap(), "x"));

        let sigma = ids(&b, &[("(join x y)", "top")]);
        let s = boolean_mgu(&sigma).unwrap();
        assert!(equiv(&b, s.get("x").unwrap(), "(join x (meet (neg x) (neg y)))"));
        assert!(equiv(&b, s.get("y").unwrap(), "(join y (meet (neg x) (neg y)))"));
        assert!(is_unifier(&b, &s, &sigma).unwrap());

        assert!(matches!(
            boolean_mgu(&ids(&b, &[("x", "(neg x)")])),
            Err(Error::NotUnifiable(_))
        ));
        assert!(boolean_mgu(&[]).unwrap().is_empty());
    }
}
