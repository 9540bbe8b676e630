//! Admissibility of clauses, decided through exact unifiers or by sweeping
//! valuations into free algebras.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finalg::{odometer_step, CompiledTerm};
use crate::term::{fresh_vars, Clause, Identity, Substitution};
use crate::unify::{coexact_mu_set, exact_type, is_unifier, CoexactMuSet, TypeVerdict};
use crate::variety::VarietySpec;

/// Valuations tried per free algebra by the sweep before giving up.
pub const DEFAULT_SWEEP_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Cover every minimal exact congruence by a conclusion.
    CoexactMuSet,
    /// Look for a valuation into a free algebra that refutes the clause.
    FreeValuationSweep,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissVerdict {
    Admissible,
    /// `witness` unifies the premises and no conclusion, when one was found.
    NotAdmissible { witness: Option<Substitution> },
    /// The sweep found no refutation in free algebras on up to `bound`
    /// generators.
    BoundRelative { bound: usize },
}

impl AdmissVerdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, AdmissVerdict::Admissible)
    }

    pub fn is_not_admissible(&self) -> bool {
        matches!(self, AdmissVerdict::NotAdmissible { .. })
    }
}

/// Which minimal exact congruences a conclusion lies in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConclusionCoverage {
    pub conclusion: Identity,
    /// Indices into the μ-set.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub clause: Clause,
    pub verdict: AdmissVerdict,
    pub method: Method,
    /// The verdict rests on exactness checks that are only complete up to
    /// the search bound.
    pub bound_relative: bool,
    /// Size of the exact μ-set of the premises (method A only).
    pub mu_size: Option<usize>,
    /// Empty for the sweep.
    pub coverage: Vec<ConclusionCoverage>,
}

fn clause_vars(c: &Clause) -> BTreeSet<String> {
    c.vars()
}

/// Whether `s` unifies the premises of `c` and none of its conclusions.
pub fn refutes(v: &VarietySpec, c: &Clause, s: &Substitution) -> Result<bool> {
    if !is_unifier(v, s, &c.premises)? {
        return Ok(false);
    }
    for d in &c.conclusions {
        if is_unifier(v, s, std::slice::from_ref(d))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Images in `Fp` of both sides of each conclusion.
fn conclusion_pairs(mu: &CoexactMuSet, c: &Clause) -> Result<Vec<(usize, usize)>> {
    let p = &mu.presented;
    c.conclusions
        .iter()
        .map(|d| {
            Ok((
                p.rho.image(p.free.canonical_image(&d.lhs)?),
                p.rho.image(p.free.canonical_image(&d.rhs)?),
            ))
        })
        .collect()
}

/// Decides admissibility of `c` in `v` with the given method.
///
/// `bound` is the exactness search bound for method A (per-quotient default
/// when `None`) and the largest free algebra swept by method B (default 3).
pub fn is_admissible(v: &VarietySpec, c: &Clause, method: Method, bound: Option<usize>) -> Result<AdmissibilityReport> {
    c.check(v.signature())?;
    match method {
        Method::CoexactMuSet => method_a(v, c, bound),
        Method::FreeValuationSweep => {
            let verdict = sweep(v, c, bound.unwrap_or(3), DEFAULT_SWEEP_BUDGET)?;
            Ok(AdmissibilityReport {
                clause: c.clone(),
                bound_relative: matches!(verdict, AdmissVerdict::BoundRelative { .. }),
                verdict,
                method,
                mu_size: None,
                coverage: Vec::new(),
            })
        }
    }
}

fn method_a(v: &VarietySpec, c: &Clause, bound: Option<usize>) -> Result<AdmissibilityReport> {
    let vars = clause_vars(c);
    let mu = coexact_mu_set(v, &c.premises, &vars, bound)?;
    let pairs = conclusion_pairs(&mu, c)?;
    let coverage: Vec<ConclusionCoverage> = c
        .conclusions
        .iter()
        .zip(&pairs)
        .map(|(d, &(a, b))| ConclusionCoverage {
            conclusion: d.clone(),
            members: (0..mu.members.len())
                .filter(|&i| mu.members[i].congruence.related(a, b))
                .collect(),
        })
        .collect();
    let uncovered = (0..mu.members.len()).find(|i| !coverage.iter().any(|cc| cc.members.contains(i)));
    let mut bound_relative = false;
    let verdict = match uncovered {
        Some(i) => {
            let witness_bound = bound.unwrap_or(vars.len()).max(1);
            let mut witness = mu.unifier(v, i, witness_bound)?;
            if witness.is_none() {
                if let AdmissVerdict::NotAdmissible { witness: w } = sweep(v, c, witness_bound, DEFAULT_SWEEP_BUDGET)? {
                    witness = w;
                }
            }
            AdmissVerdict::NotAdmissible { witness }
        }
        None => {
            // an exact congruence refuting the clause would have to be one of
            // the undetermined ones and avoid every conclusion
            bound_relative = mu
                .undetermined
                .iter()
                .any(|theta| !pairs.iter().any(|&(a, b)| theta.related(a, b)));
            AdmissVerdict::Admissible
        }
    };
    Ok(AdmissibilityReport {
        clause: c.clone(),
        verdict,
        method: Method::CoexactMuSet,
        bound_relative,
        mu_size: Some(mu.members.len()),
        coverage,
    })
}

/// Sweeps valuations of the clause variables into `F(1)`, .., `F(bound)` in
/// lexicographic order and returns the first refuting one.
fn sweep(v: &VarietySpec, c: &Clause, bound: usize, budget: u64) -> Result<AdmissVerdict> {
    let vars: Vec<String> = clause_vars(c).into_iter().collect();
    let avoid: BTreeSet<String> = vars.iter().cloned().collect();
    let mut left = budget;
    for n in 1..=bound {
        let names: BTreeSet<String> = fresh_vars(n, &avoid).into_iter().collect();
        let f = match v.free_algebra(&names) {
            Ok(f) => f,
            Err(Error::ResourceLimit(_)) => return Ok(AdmissVerdict::BoundRelative { bound: n - 1 }),
            Err(e) => return Err(e),
        };
        let alg = f.algebra();
        let compile = |ids: &[Identity]| -> Result<Vec<(CompiledTerm, CompiledTerm)>> {
            ids.iter()
                .map(|d| Ok((f.compile(&d.lhs, &vars)?, f.compile(&d.rhs, &vars)?)))
                .collect()
        };
        let prem = compile(&c.premises)?;
        let conc = compile(&c.conclusions)?;
        let mut stack = Vec::new();
        let mut val = vec![0usize; vars.len()];
        loop {
            if left == 0 {
                return Ok(AdmissVerdict::BoundRelative { bound: n - 1 });
            }
            left -= 1;
            let holds = |(l, r): &(CompiledTerm, CompiledTerm), stack: &mut Vec<usize>| {
                l.eval(alg, &val, stack) == r.eval(alg, &val, stack)
            };
            if prem.iter().all(|p| holds(p, &mut stack)) && !conc.iter().any(|d| holds(d, &mut stack)) {
                let map = vars
                    .iter()
                    .zip(&val)
                    .map(|(x, &e)| (x.clone(), f.representative(e).clone()))
                    .collect();
                let witness = Substitution::with_codomain(map, names)?;
                return Ok(AdmissVerdict::NotAdmissible { witness: Some(witness) });
            }
            if !odometer_step(&mut val, alg.size()) {
                break;
            }
        }
    }
    Ok(AdmissVerdict::BoundRelative { bound })
}

/// Method A, cross-checked by a sweep up to `sweep_bound` when its verdict
/// is bound-relative.
pub fn admissibility(v: &VarietySpec, c: &Clause, bound: Option<usize>, sweep_bound: usize) -> Result<AdmissibilityReport> {
    let mut report = is_admissible(v, c, Method::CoexactMuSet, bound)?;
    if report.bound_relative {
        if let found @ AdmissVerdict::NotAdmissible { .. } = sweep(v, c, sweep_bound, DEFAULT_SWEEP_BUDGET)? {
            report.verdict = found;
            report.method = Method::FreeValuationSweep;
            report.bound_relative = false;
        }
    }
    Ok(report)
}

/// A subset of the conclusions, at most as large as the exact μ-set of the
/// premises, that keeps the clause admissible. Chosen greedily: repeatedly
/// take the conclusion covering the most still-uncovered μ-set members,
/// earliest first on ties.
pub fn reduce_consequent(v: &VarietySpec, c: &Clause, bound: Option<usize>) -> Result<Vec<Identity>> {
    let report = is_admissible(v, c, Method::CoexactMuSet, bound)?;
    match &report.verdict {
        AdmissVerdict::Admissible => {}
        AdmissVerdict::NotAdmissible { .. } => {
            return Err(Error::NotAdmissible(c.to_string()));
        }
        AdmissVerdict::BoundRelative { .. } => unreachable!("method A never sweeps"),
    }
    let mut uncovered: BTreeSet<usize> = (0..report.mu_size.unwrap_or(0)).collect();
    let mut picked: Vec<usize> = Vec::new();
    while !uncovered.is_empty() {
        let (best, gain) = report
            .coverage
            .iter()
            .enumerate()
            .map(|(i, cc)| (i, cc.members.iter().filter(|m| uncovered.contains(m)).count()))
            .fold((0, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
        debug_assert!(gain > 0);
        for m in &report.coverage[best].members {
            uncovered.remove(m);
        }
        picked.push(best);
    }
    picked.sort_unstable();
    let reduced: Vec<Identity> = picked.iter().map(|&i| c.conclusions[i].clone()).collect();
    let check = is_admissible(
        v,
        &Clause::new(c.premises.clone(), reduced.clone()),
        Method::CoexactMuSet,
        bound,
    )?;
    if !check.verdict.is_admissible() {
        return Err(Error::Invalid("reduced clause failed to re-verify".into()));
    }
    Ok(reduced)
}

/// Property (★): the premises have a single most general exact unifier.
pub fn star_property(v: &VarietySpec, sigma: &[Identity], vars: &BTreeSet<String>, bound: Option<usize>) -> Result<bool> {
    let t = exact_type(v, sigma, vars, bound)?;
    match t.verdict {
        TypeVerdict::NotUnifiable => Err(Error::NotUnifiable(format!(
            "no exact unifier found{}",
            if t.bound_relative { " within the bound" } else { "" }
        ))),
        verdict => Ok(verdict == TypeVerdict::Unitary),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variety::catalog::builtin;

    fn clause(v: &VarietySpec, prem: &[(&str, &str)], conc: &[(&str, &str)]) -> Clause {
        let p = |xs: &[(&str, &str)]| {
            xs.iter()
                .map(|(l, r)| Identity::parse(l, r, v.signature()).unwrap())
                .collect::<Vec<_>>()
        };
        Clause::new(p(prem), p(conc))
    }

    const EXCL: (&str, &str) = ("(join x (star x))", "top");

    #[test]
    fn b2_clauses() {
        let b2 = builtin("b2").unwrap();
        let both = clause(&b2, &[EXCL], &[("x", "top"), ("(star x)", "top")]);
        let r = is_admissible(&b2, &both, Method::CoexactMuSet, None).unwrap();
        assert_eq!(r.verdict, AdmissVerdict::Admissible);
        assert_eq!(r.mu_size, Some(2));

        for single in [("x", "top"), ("(star x)", "top")] {
            let c = clause(&b2, &[EXCL], &[single]);
            let r = is_admissible(&b2, &c, Method::CoexactMuSet, None).unwrap();
            match r.verdict {
                AdmissVerdict::NotAdmissible { witness: Some(w) } => assert!(refutes(&b2, &c, &w).unwrap()),
                v => panic!("unexpected {v:?}"),
            }
            let r = is_admissible(&b2, &c, Method::FreeValuationSweep, Some(1)).unwrap();
            match r.verdict {
                AdmissVerdict::NotAdmissible { witness: Some(w) } => assert!(refutes(&b2, &c, &w).unwrap()),
                v => panic!("unexpected {v:?}"),
            }
        }
    }

    #[test]
    fn dl_admissibility_is_validity() {
        let dl = builtin("dl").unwrap();
        let c = clause(&dl, &[("(meet x y)", "(join x y)")], &[("x", "y")]);
        let r = is_admissible(&dl, &c, Method::CoexactMuSet, None).unwrap();
        assert!(r.verdict.is_admissible());
        assert!(dl.validates_clause(&c).unwrap());
        let c = clause(&dl, &[("(meet x y)", "x")], &[("x", "y")]);
        assert!(is_admissible(&dl, &c, Method::CoexactMuSet, None).unwrap().verdict.is_not_admissible());
    }

    #[test]
    fn empty_conclusions() {
        let dl = builtin("dl").unwrap();
        let c = clause(&dl, &[("x", "y")], &[]);
        assert!(is_admissible(&dl, &c, Method::CoexactMuSet, None).unwrap().verdict.is_not_admissible());
        let bdl = builtin("bdl").unwrap();
        let c = clause(&bdl, &[("bot", "top")], &[]);
        assert!(is_admissible(&bdl, &c, Method::CoexactMuSet, None).unwrap().verdict.is_admissible());
    }

    #[test]
    fn reduction() {
        let b2 = builtin("b2").unwrap();
        let c = clause(&b2, &[EXCL], &[("x", "top"), ("(star x)", "top"), ("bot", "bot")]);
        let reduced = reduce_consequent(&b2, &c, None).unwrap();
        assert_eq!(reduced, vec![Identity::parse("bot", "bot", b2.signature()).unwrap()]);
        let c = clause(&b2, &[EXCL], &[("x", "top"), ("(star x)", "top")]);
        assert_eq!(reduce_consequent(&b2, &c, None).unwrap().len(), 2);
        let c = clause(&b2, &[EXCL], &[("x", "top")]);
        assert!(matches!(reduce_consequent(&b2, &c, None), Err(Error::NotAdmissible(_))));

        let dl = builtin("dl").unwrap();
        let c = clause(&dl, &[("(meet x y)", "(join x y)")], &[("x", "y"), ("(meet x y)", "y")]);
        assert_eq!(reduce_consequent(&dl, &c, None).unwrap().len(), 1);
    }

    #[test]
    fn star() {
        let dl = builtin("dl").unwrap();
        let s = vec![Identity::parse("(meet x y)", "(join z w)", dl.signature()).unwrap()];
        assert!(star_property(&dl, &s, &crate::term::vars_of(&s), None).unwrap());
        let b2 = builtin("b2").unwrap();
        let s = vec![Identity::parse(EXCL.0, EXCL.1, b2.signature()).unwrap()];
        assert!(!star_property(&b2, &s, &crate::term::vars_of(&s), None).unwrap());
        let b = builtin("bool").unwrap();
        let s = vec![Identity::parse("(join x y)", "top", b.signature()).unwrap()];
        assert!(star_property(&b, &s, &crate::term::vars_of(&s), None).unwrap());
    }
}
