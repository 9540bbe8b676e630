//! Executes problems and collects result records.

use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use exunify::admiss::{admissibility, reduce_consequent, AdmissVerdict, AdmissibilityReport};
use exunify::finalg::all_congruences;
use exunify::unify::{
    boolean_mgu_over, coexact_mu_set, exact_type, is_unifier, mgeu_distributive_lattice_over, CoexactMuSet,
    TypeVerdict,
};
use exunify::variety::catalog::lattice_signature;
use exunify::variety::{ExactWitness, ExactnessVerdict, PresentedAlgebra, VarietySpec};
use exunify::willard::{willard_display, willard_is_unifier, willard_nf_traced};
use exunify::{Clause, Congruence, Error, Identity, Substitution, Term};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dot::{hasse, Diagram, Node};
use crate::problem::{Problem, Query, Session, Target};

/// Element listings are omitted above this size.
pub const MAX_LISTED_ELEMENTS: usize = 1024;
/// Covering relations are omitted above this many congruences.
pub const MAX_DRAWN_CONGRUENCES: usize = 4096;
/// Largest free algebra swept when a coexact verdict needs a cross-check.
pub const DEFAULT_SWEEP_BOUND: usize = 2;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Exactness search bound when a problem gives none.
    pub bound: Option<usize>,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub id: String,
    pub query: Query,
    pub status: Status,
    pub bound_relative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    #[serde(skip)]
    pub summary: String,
    #[serde(skip)]
    pub diagram: Option<Diagram>,
}

struct Outcome {
    result: Value,
    summary: String,
    bound_relative: bool,
    diagram: Option<Diagram>,
}

impl Outcome {
    fn new(result: Value, summary: impl Into<String>) -> Self {
        Outcome {
            result,
            summary: summary.into(),
            bound_relative: false,
            diagram: None,
        }
    }

    fn bound_relative(mut self, flag: bool) -> Self {
        self.bound_relative = flag;
        self
    }
}

/// Runs every problem, in parallel, keeping input order.
pub fn run(session: &Session, opts: &RunOptions) -> Result<Vec<ResultRecord>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build()?;
    Ok(pool.install(|| {
        session
            .problems
            .par_iter()
            .map(|p| run_problem(&session.target, p, opts))
            .collect()
    }))
}

pub fn run_problem(target: &Target, p: &Problem, opts: &RunOptions) -> ResultRecord {
    let start = Instant::now();
    let outcome = execute(target, p, p.bound.or(opts.bound));
    let timing_ms = opts.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    match outcome {
        Ok(o) => ResultRecord {
            id: p.id.clone(),
            query: p.query,
            status: Status::Ok,
            bound_relative: o.bound_relative,
            result: Some(o.result),
            error: None,
            timing_ms,
            summary: o.summary,
            diagram: o.diagram,
        },
        Err(e) => ResultRecord {
            id: p.id.clone(),
            query: p.query,
            status: Status::Error,
            bound_relative: false,
            result: None,
            error: Some(format!("{e:#}")),
            timing_ms,
            summary: String::new(),
            diagram: None,
        },
    }
}

fn execute(target: &Target, p: &Problem, bound: Option<usize>) -> Result<Outcome> {
    let v = match target {
        Target::Willard => {
            return match p.query {
                Query::WillardNf => willard_query(p),
                Query::UnifyCheck => check_given(p, |s, ids| Ok(willard_is_unifier(s, ids)?)),
                q => bail!("query `{q}` needs a finitely generated variety"),
            }
        }
        Target::Finite(v) => v,
    };
    match p.query {
        Query::UnifyCheck if p.substitution.is_some() => check_given(p, |s, ids| Ok(is_unifier(v, s, ids)?)),
        Query::UnifyCheck => unify_check(v, p, bound),
        Query::ExactType => exact_type_query(v, p, bound),
        Query::ExactMuSet => mu_set_query(v, p, bound),
        Query::MgeuDl => mgeu_dl_query(p),
        Query::BooleanMgu => boolean_mgu_query(p),
        Query::Admissible => admissible_query(v, p, bound),
        Query::ReduceDelta => reduce_query(v, p, bound),
        Query::Star => star_query(v, p, bound),
        Query::Free => free_query(v, p),
        Query::Fp => fp_query(v, p),
        Query::Conlat => conlat_query(v, p),
        Query::WillardNf => bail!("willard-nf needs the `willard` variety"),
    }
}

fn subst_json(s: &Substitution) -> BTreeMap<String, String> {
    s.iter().map(|(x, t)| (x.clone(), t.to_string())).collect()
}

fn identity_json(id: &Identity) -> [String; 2] {
    [id.lhs.to_string(), id.rhs.to_string()]
}

fn delta(p: &Problem) -> Result<&[Identity]> {
    p.delta
        .as_deref()
        .ok_or_else(|| anyhow!("query `{}` needs `delta`", p.query))
}

fn check_given(p: &Problem, unifies: impl Fn(&Substitution, &[Identity]) -> Result<bool>) -> Result<Outcome> {
    let s = p.substitution.as_ref().expect("caller checked");
    let ok = unifies(s, &p.sigma)?;
    let conclusions = p
        .delta
        .iter()
        .flatten()
        .map(|d| unifies(s, std::slice::from_ref(d)))
        .collect::<Result<Vec<_>>>()?;
    let mut summary = format!("{} a unifier", if ok { "is" } else { "is not" });
    if p.delta.is_some() {
        let n = conclusions.iter().filter(|&&b| b).count();
        summary.push_str(&format!("; unifies {n} of {} conclusions", conclusions.len()));
    }
    let mut result = json!({ "unifier": ok, "substitution": subst_json(s) });
    if p.delta.is_some() {
        result["conclusions_unified"] = json!(conclusions);
    }
    Ok(Outcome::new(result, summary))
}

fn search_bound(p: &Problem, bound: Option<usize>) -> usize {
    bound.unwrap_or_else(|| p.vars.len().max(1))
}

/// A unifier for member `i`, or `None` when none turns up within the bound.
fn member_unifier(v: &VarietySpec, p: &Problem, mu: &CoexactMuSet, i: usize, bound: Option<usize>) -> Result<Option<Substitution>> {
    if v.signature() == &lattice_signature() && mu.members.len() == 1 {
        return Ok(Some(mgeu_distributive_lattice_over(&p.sigma, &p.vars)?.substitution));
    }
    match mu.unifier(v, i, search_bound(p, bound)) {
        Err(Error::ResourceLimit(_)) => Ok(None),
        r => Ok(r?),
    }
}

fn unify_check(v: &VarietySpec, p: &Problem, bound: Option<usize>) -> Result<Outcome> {
    let mu = coexact_mu_set(v, &p.sigma, &p.vars, bound)?;
    let unifiable = !mu.members.is_empty();
    let unifier = if unifiable { member_unifier(v, p, &mu, 0, bound)? } else { None };
    let summary = match (unifiable, mu.bound_relative) {
        (true, _) => "unifiable".to_string(),
        (false, false) => "not unifiable".to_string(),
        (false, true) => "no exact unifier within the bound".to_string(),
    };
    Ok(Outcome::new(
        json!({ "unifiable": unifiable, "unifier": unifier.as_ref().map(subst_json) }),
        summary,
    )
    .bound_relative(!unifiable && mu.bound_relative))
}

fn type_json(t: TypeVerdict) -> Value {
    let size = match t {
        TypeVerdict::NotUnifiable => 0,
        TypeVerdict::Unitary => 1,
        TypeVerdict::Finitary(k) => k,
    };
    json!({ "type": t.to_string(), "mu_size": size })
}

fn exact_type_query(v: &VarietySpec, p: &Problem, bound: Option<usize>) -> Result<Outcome> {
    let t = exact_type(v, &p.sigma, &p.vars, bound)?;
    Ok(Outcome::new(type_json(t.verdict), t.verdict.to_string()).bound_relative(t.bound_relative))
}

/// Names for the elements of `Fp`: the representative of the first free
/// element mapped onto each.
fn fp_names(p: &PresentedAlgebra) -> Vec<String> {
    let mut names = vec![None; p.algebra.size()];
    for (a, &b) in p.rho.map.iter().enumerate() {
        names[b].get_or_insert_with(|| p.free.representative(a).to_string());
    }
    names.into_iter().map(|n| n.expect("rho is onto")).collect()
}

fn nontrivial_blocks(c: &Congruence, names: &[String]) -> Vec<Vec<String>> {
    c.blocks()
        .into_iter()
        .filter(|b| b.len() > 1)
        .map(|b| b.into_iter().map(|e| names[e].clone()).collect())
        .collect()
}

fn congruence_node(c: &Congruence, names: &[String]) -> Node {
    let id = format!(
        "c{}",
        c.labels().iter().map(usize::to_string).collect::<Vec<_>>().join("_")
    );
    let label = if c.is_identity() {
        "identity".to_string()
    } else {
        nontrivial_blocks(c, names)
            .iter()
            .map(|b| format!("{{{}}}", b.join(", ")))
            .collect::<Vec<_>>()
            .join("\n")
    };
    Node { id, label }
}

fn mu_set_query(v: &VarietySpec, p: &Problem, bound: Option<usize>) -> Result<Outcome> {
    let mu = coexact_mu_set(v, &p.sigma, &p.vars, bound)?;
    let names = fp_names(&mu.presented);
    let mut members = Vec::new();
    for (i, m) in mu.members.iter().enumerate() {
        let witness = match &m.verdict {
            ExactnessVerdict::Exact(ExactWitness::VarietyRule) => json!("variety_rule"),
            ExactnessVerdict::Exact(ExactWitness::Embedding { n, target_vars, .. }) => {
                json!({ "embedding": { "n": n, "target_vars": target_vars } })
            }
            ExactnessVerdict::NotExactUpTo { .. } => unreachable!("members are exact"),
        };
        let unifier = member_unifier(v, p, &mu, i, bound)?;
        members.push(json!({
            "quotient_size": m.congruence.num_blocks(),
            "identified": nontrivial_blocks(&m.congruence, &names),
            "witness": witness,
            "unifier": unifier.as_ref().map(subst_json),
        }));
    }
    let t = mu.type_verdict();
    let mut result = type_json(t);
    result["fp_size"] = json!(mu.presented.algebra.size());
    result["members"] = json!(members);
    result["undetermined"] = json!(mu.undetermined.len());
    let nodes: Vec<Node> = mu.members.iter().map(|m| congruence_node(&m.congruence, &names)).collect();
    let covers = hasse(nodes.len(), |a, b| mu.members[a].congruence.is_below(&mu.members[b].congruence));
    let mut o = Outcome::new(result, format!("{t}, {} member(s)", mu.members.len())).bound_relative(mu.bound_relative);
    o.diagram = Some(Diagram {
        title: format!("{} exact mu-set", p.id),
        nodes,
        covers,
        empty_note: "not unifiable".into(),
    });
    Ok(o)
}

fn mgeu_dl_query(p: &Problem) -> Result<Outcome> {
    let r = mgeu_distributive_lattice_over(&p.sigma, &p.vars)?;
    let result = json!({
        "substitution": subst_json(&r.substitution),
        "points": r.points,
        "fresh": r.fresh,
        "via_fallback": r.via_fallback,
    });
    Ok(Outcome::new(result, format!("m = {}: {}", r.points.len(), r.substitution)))
}

fn boolean_mgu_query(p: &Problem) -> Result<Outcome> {
    let s = boolean_mgu_over(&p.sigma, &p.vars)?;
    Ok(Outcome::new(json!({ "substitution": subst_json(&s) }), s.to_string()))
}

fn verdict_json(r: &AdmissibilityReport) -> (Value, String) {
    match &r.verdict {
        AdmissVerdict::Admissible => (json!("admissible"), "admissible".into()),
        AdmissVerdict::NotAdmissible { witness } => {
            let text = match witness {
                Some(w) => format!("not admissible, witness {w}"),
                None => "not admissible".into(),
            };
            (json!({ "not_admissible": { "witness": witness.as_ref().map(subst_json) } }), text)
        }
        AdmissVerdict::BoundRelative { bound } => (
            json!({ "bound_relative": { "bound": bound } }),
            format!("no refutation up to {bound} generators"),
        ),
    }
}

fn admissible_query(v: &VarietySpec, p: &Problem, bound: Option<usize>) -> Result<Outcome> {
    let c = Clause::new(p.sigma.clone(), delta(p)?.to_vec());
    let r = admissibility(v, &c, bound, bound.unwrap_or(DEFAULT_SWEEP_BOUND))?;
    let (verdict, summary) = verdict_json(&r);
    let coverage: Vec<Value> = r
        .coverage
        .iter()
        .map(|cc| json!({ "conclusion": identity_json(&cc.conclusion), "members": cc.members }))
        .collect();
    let result = json!({
        "verdict": verdict,
        "method": r.method,
        "mu_size": r.mu_size,
        "coverage": coverage,
    });
    Ok(Outcome::new(result, summary).bound_relative(r.bound_relative))
}

fn reduce_query(v: &VarietySpec, p: &Problem, bound: Option<usize>) -> Result<Outcome> {
    let c = Clause::new(p.sigma.clone(), delta(p)?.to_vec());
    let reduced = reduce_consequent(v, &c, bound)?;
    let shown: Vec<String> = reduced.iter().map(Identity::to_string).collect();
    let result = json!({ "delta": reduced.iter().map(identity_json).collect::<Vec<_>>() });
    Ok(Outcome::new(result, format!("{{{}}}", shown.join(", "))))
}

fn star_query(v: &VarietySpec, p: &Problem, bound: Option<usize>) -> Result<Outcome> {
    let t = exact_type(v, &p.sigma, &p.vars, bound)?;
    if t.verdict == TypeVerdict::NotUnifiable {
        bail!(Error::NotUnifiable("the premises have no exact unifier".into()));
    }
    let star = t.verdict == TypeVerdict::Unitary;
    Ok(
        Outcome::new(json!({ "star": star, "type": t.verdict.to_string() }), format!("star: {star}"))
            .bound_relative(t.bound_relative),
    )
}

fn listing(names: impl FnOnce() -> Vec<String>, size: usize) -> Value {
    if size <= MAX_LISTED_ELEMENTS {
        json!(names())
    } else {
        Value::Null
    }
}

fn free_query(v: &VarietySpec, p: &Problem) -> Result<Outcome> {
    let f = v.free_algebra(&p.vars)?;
    let result = json!({
        "vars": f.vars(),
        "size": f.size(),
        "elements": listing(|| f.representatives().iter().map(Term::to_string).collect(), f.size()),
    });
    Ok(Outcome::new(result, format!("{} elements", f.size())))
}

fn fp_query(v: &VarietySpec, p: &Problem) -> Result<Outcome> {
    let fp = v.finitely_presented(&p.sigma, &p.vars)?;
    let size = fp.algebra.size();
    let result = json!({
        "vars": fp.vars(),
        "size": size,
        "free_size": fp.free.size(),
        "elements": listing(|| fp_names(&fp), size),
    });
    Ok(Outcome::new(result, format!("{size} elements (free: {})", fp.free.size())))
}

fn conlat_query(v: &VarietySpec, p: &Problem) -> Result<Outcome> {
    let fp = v.finitely_presented(&p.sigma, &p.vars)?;
    let names = fp_names(&fp);
    let cons = all_congruences(&fp.algebra)?;
    let covers =
        (cons.len() <= MAX_DRAWN_CONGRUENCES).then(|| hasse(cons.len(), |a, b| cons[a].is_below(&cons[b])));
    let result = json!({
        "algebra_size": fp.algebra.size(),
        "elements": names,
        "congruences": cons.iter().map(Congruence::blocks).collect::<Vec<_>>(),
        "covers": covers,
    });
    let mut o = Outcome::new(result, format!("{} congruences on {} elements", cons.len(), fp.algebra.size()));
    o.diagram = Some(Diagram {
        title: format!("{} congruence lattice", p.id),
        nodes: cons.iter().map(|c| congruence_node(c, &names)).collect(),
        covers: covers.unwrap_or_default(),
        empty_note: String::new(),
    });
    Ok(o)
}

fn willard_query(p: &Problem) -> Result<Outcome> {
    let nf = |t: &Term| -> Result<Value> {
        let (n, steps) = willard_nf_traced(t)?;
        Ok(json!({
            "term": t.to_string(),
            "normal_form": n.to_string(),
            "normal_term": n.to_term().to_string(),
            "steps": steps.len(),
        }))
    };
    let forms = p.terms.iter().map(nf).collect::<Result<Vec<_>>>()?;
    let mut identities = Vec::new();
    for id in &p.sigma {
        let (l, _) = willard_nf_traced(&id.lhs)?;
        let (r, _) = willard_nf_traced(&id.rhs)?;
        identities.push(json!({
            "identity": identity_json(id),
            "lhs": l.to_string(),
            "rhs": r.to_string(),
            "equal": l == r,
        }));
    }
    let mut parts: Vec<String> = p
        .terms
        .iter()
        .zip(&forms)
        .map(|(t, f)| format!("{} => {}", willard_display(t), f["normal_form"].as_str().unwrap()))
        .collect();
    parts.extend(identities.iter().map(|i| {
        format!(
            "{} {} {}",
            i["lhs"].as_str().unwrap(),
            if i["equal"] == json!(true) { "=" } else { "!=" },
            i["rhs"].as_str().unwrap()
        )
    }));
    Ok(Outcome::new(
        json!({ "normal_forms": forms, "identities": identities }),
        parts.join("; "),
    ))
}
