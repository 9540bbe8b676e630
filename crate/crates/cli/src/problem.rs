//! Problem files: parsing, validation and variety resolution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use exunify::term::vars_of;
use exunify::variety::catalog::builtin;
use exunify::variety::{ExactnessRule, VarietySpec};
use exunify::willard::willard_signature;
use exunify::{FiniteAlgebra, Identity, Signature, Substitution, Term};
use serde::{Deserialize, Serialize};

/// Name under which Willard's rewriting variety is selected.
pub const WILLARD: &str = "willard";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default)]
    pub signature: Option<Signature>,
    #[serde(default)]
    pub variety: Option<VarietyField>,
    pub problems: Vec<ProblemSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum VarietyField {
    Builtin(String),
    Inline(InlineVariety),
}

/// A variety given by generator tables. The file's `signature` fixes the
/// operation order.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineVariety {
    #[serde(default = "inline_name")]
    pub name: String,
    pub generators: Vec<GeneratorTables>,
    #[serde(default)]
    pub exactness: Option<ExactnessRule>,
}

fn inline_name() -> String {
    "inline".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorTables {
    pub size: usize,
    #[serde(default)]
    pub names: Option<Vec<String>>,
    /// Row-major operation tables keyed by symbol; constants have one entry.
    pub tables: BTreeMap<String, Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Query {
    UnifyCheck,
    ExactType,
    ExactMuSet,
    MgeuDl,
    BooleanMgu,
    Admissible,
    ReduceDelta,
    Star,
    Free,
    Fp,
    Conlat,
    WillardNf,
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("query serializes");
        f.write_str(s.as_str().expect("query is a string"))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub id: String,
    pub query: Query,
    #[serde(default)]
    pub sigma: Vec<(String, String)>,
    #[serde(default)]
    pub delta: Option<Vec<(String, String)>>,
    #[serde(default)]
    pub vars: Option<Vec<String>>,
    #[serde(default)]
    pub bound: Option<usize>,
    /// Candidate unifier checked by `unify-check`.
    #[serde(default)]
    pub substitution: Option<BTreeMap<String, String>>,
    /// Extra terms normalised by `willard-nf`.
    #[serde(default)]
    pub terms: Option<Vec<String>>,
}

/// The class the problems are posed in.
#[derive(Debug, Clone)]
pub enum Target {
    Finite(VarietySpec),
    Willard,
}

impl Target {
    pub fn name(&self) -> &str {
        match self {
            Target::Finite(v) => v.name(),
            Target::Willard => WILLARD,
        }
    }

    pub fn signature(&self) -> Signature {
        match self {
            Target::Finite(v) => v.signature().clone(),
            Target::Willard => willard_signature(),
        }
    }
}

/// A problem with its terms parsed and checked.
#[derive(Debug, Clone)]
pub struct Problem {
    pub id: String,
    pub query: Query,
    pub sigma: Vec<Identity>,
    pub delta: Option<Vec<Identity>>,
    pub vars: BTreeSet<String>,
    pub bound: Option<usize>,
    pub substitution: Option<Substitution>,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone)]
pub struct Session {
    pub target: Target,
    pub problems: Vec<Problem>,
}

/// Overrides taken from the command line.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub variety: Option<String>,
    pub cap: Option<usize>,
}

pub fn read_file(path: &Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_file(&text).with_context(|| format!("invalid problem file {}", path.display()))
}

pub fn parse_file(text: &str) -> Result<ProblemFile> {
    Ok(serde_json::from_str(text)?)
}

/// Resolves the variety and parses every problem. Any failure here is a
/// file error.
pub fn prepare(file: &ProblemFile, opts: &LoadOptions) -> Result<Session> {
    let field = match &opts.variety {
        Some(name) => VarietyField::Builtin(name.clone()),
        None => file.variety.clone().ok_or_else(|| anyhow!("no variety given in the file or on the command line"))?,
    };
    let mut target = resolve_variety(&field, file.signature.as_ref())?;
    if let (Target::Finite(v), Some(cap)) = (&target, opts.cap) {
        target = Target::Finite(v.clone().with_cap(cap));
    }
    let sig = target.signature();
    if let Some(declared) = &file.signature {
        if declared != &sig {
            bail!("declared signature does not match variety `{}`", target.name());
        }
    }
    let mut seen = BTreeSet::new();
    let mut problems = Vec::with_capacity(file.problems.len());
    for p in &file.problems {
        if !seen.insert(p.id.as_str()) {
            bail!("duplicate problem id `{}`", p.id);
        }
        problems.push(prepare_problem(p, &sig).with_context(|| format!("problem `{}`", p.id))?);
    }
    Ok(Session { target, problems })
}

fn resolve_variety(field: &VarietyField, sig: Option<&Signature>) -> Result<Target> {
    match field {
        VarietyField::Builtin(name) if name == WILLARD => Ok(Target::Willard),
        VarietyField::Builtin(name) => Ok(Target::Finite(builtin(name)?)),
        VarietyField::Inline(inline) => {
            let sig = sig.ok_or_else(|| anyhow!("an inline variety needs a top-level signature"))?;
            let generators = inline
                .generators
                .iter()
                .enumerate()
                .map(|(i, g)| build_generator(g, sig).with_context(|| format!("generator {i}")))
                .collect::<Result<Vec<_>>>()?;
            let rule = inline.exactness.unwrap_or(ExactnessRule::BoundedSearch { default_bound: None });
            Ok(Target::Finite(VarietySpec::new(inline.name.clone(), generators, rule)?))
        }
    }
}

fn build_generator(g: &GeneratorTables, sig: &Signature) -> Result<FiniteAlgebra> {
    if let Some(extra) = g.tables.keys().find(|k| sig.position(k).is_none()) {
        bail!("table for `{extra}`, which is not in the signature");
    }
    let tables = sig
        .ops()
        .iter()
        .map(|(name, _)| g.tables.get(name).cloned().ok_or_else(|| anyhow!("missing table for `{name}`")))
        .collect::<Result<Vec<_>>>()?;
    let alg = FiniteAlgebra::new(sig.clone(), g.size, tables)?;
    Ok(match &g.names {
        Some(names) => alg.with_names(names.clone())?,
        None => alg,
    })
}

fn parse_identities(pairs: &[(String, String)], sig: &Signature) -> Result<Vec<Identity>> {
    pairs
        .iter()
        .map(|(l, r)| Identity::parse(l, r, sig).with_context(|| format!("identity {l} = {r}")))
        .collect()
}

fn prepare_problem(p: &ProblemSpec, sig: &Signature) -> Result<Problem> {
    let sigma = parse_identities(&p.sigma, sig)?;
    let delta = p.delta.as_deref().map(|d| parse_identities(d, sig)).transpose()?;
    let terms = p
        .terms
        .iter()
        .flatten()
        .map(|t| Term::parse(t, sig).with_context(|| format!("term {t}")))
        .collect::<Result<Vec<_>>>()?;
    let mut used = vars_of(sigma.iter().chain(delta.iter().flatten()));
    for t in &terms {
        t.collect_vars(&mut used);
    }
    let vars = match &p.vars {
        Some(vs) => {
            let vars: BTreeSet<String> = vs.iter().cloned().collect();
            if let Some(bad) = vars.iter().find(|v| !exunify::term::is_variable_name(v)) {
                bail!("`{bad}` is not a variable name");
            }
            if let Some(missing) = used.difference(&vars).next() {
                bail!("variable `{missing}` occurs but is not listed in vars");
            }
            vars
        }
        None => used,
    };
    if p.bound == Some(0) {
        bail!("bound must be at least 1");
    }
    let substitution = p
        .substitution
        .as_ref()
        .map(|m| -> Result<Substitution> {
            let map = m
                .iter()
                .map(|(x, t)| Ok((x.clone(), Term::parse(t, sig).with_context(|| format!("substitution term {t}"))?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            Ok(Substitution::new(map))
        })
        .transpose()?;
    Ok(Problem {
        id: p.id.clone(),
        query: p.query,
        sigma,
        delta,
        vars,
        bound: p.bound,
        substitution,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(json: &str) -> Result<Session> {
        prepare(&parse_file(json)?, &LoadOptions::default())
    }

    #[test]
    fn builtin_and_defaults() {
        let s = load(r#"{"variety":"dl","problems":[{"id":"a","query":"exact-type","sigma":[["(meet x y)","z"]]}]}"#)
            .unwrap();
        assert_eq!(s.target.name(), "dl");
        assert_eq!(s.problems[0].vars.len(), 3);
    }

    #[test]
    fn inline_variety() {
        let s = load(
            r#"{"signature":[["meet",2]],
                "variety":{"name":"sl","generators":[{"size":2,"tables":{"meet":[0,0,0,1]}}]},
                "problems":[]}"#,
        )
        .unwrap();
        let Target::Finite(v) = &s.target else { panic!() };
        assert_eq!(v.generators()[0].size(), 2);
    }

    #[test]
    fn rejects_bad_files() {
        for bad in [
            r#"{"problems":[]}"#,
            r#"{"variety":"nope","problems":[]}"#,
            r#"{"variety":"dl","problems":[{"id":"a","query":"exact-type","sigma":[["(meet x)","x"]]}]}"#,
            r#"{"variety":"dl","problems":[{"id":"a","query":"exact-type","sigma":[["x","y"]],"vars":["x"]}]}"#,
            r#"{"variety":"dl","problems":[{"id":"a","query":"free"},{"id":"a","query":"free"}]}"#,
            r#"{"variety":"dl","problems":[{"id":"a","query":"frobnicate"}]}"#,
            r#"{"variety":"dl","signature":[["meet",2]],"problems":[]}"#,
            r#"{"signature":[["meet",2]],"variety":{"generators":[{"size":2,"tables":{}}]},"problems":[]}"#,
        ] {
            assert!(load(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn query_names() {
        assert_eq!(Query::WillardNf.to_string(), "willard-nf");
        assert_eq!(Query::MgeuDl.to_string(), "mgeu-dl");
    }
}
