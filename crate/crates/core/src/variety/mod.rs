//! Varieties presented by finite generating algebras: validity of
//! identities and clauses, free and finitely presented algebras, and
//! exactness of finite algebras.

pub mod catalog;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finalg::{
    congruence_generated, find_embedding_within, odometer_step, quotient, CompiledTerm, Congruence,
    EmbeddingSearch, FiniteAlgebra, Homomorphism, MAX_TABLE_ENTRIES,
};
use crate::term::{fresh_vars, Clause, Identity, Signature, Term};

/// Default cap on the number of elements of a free algebra.
pub const DEFAULT_FREE_CAP: usize = 500_000;

/// Default number of operation evaluations allowed per embedding search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 200_000_000;

/// How exactness of finite algebras is decided for a variety.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactnessRule {
    /// Every nontrivial finitely presented algebra is exact.
    AllFpExact,
    /// Search for embeddings into free algebras on `1..=bound` generators.
    /// Without a default bound the size of the algebra is used.
    BoundedSearch { default_bound: Option<usize> },
}

/// Where a finite algebra handed to [`VarietySpec::is_exact_algebra`] comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraOrigin {
    /// A quotient of a free algebra of the variety by a finitely generated congruence.
    FinitelyPresented,
    Arbitrary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactWitness {
    /// Exact by the variety's blanket rule; no embedding was computed.
    VarietyRule,
    /// `map` embeds the algebra into the free algebra over `target_vars`.
    Embedding {
        n: usize,
        target_vars: Vec<String>,
        map: Homomorphism,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactnessVerdict {
    Exact(ExactWitness),
    /// No embedding into `F(n)` for `n <= bound`. With an `obstruction` the
    /// algebra is certainly not exact, whatever the bound.
    NotExactUpTo { bound: usize, obstruction: Option<String> },
}

impl ExactnessVerdict {
    pub fn is_exact(&self) -> bool {
        matches!(self, ExactnessVerdict::Exact(_))
    }

    /// True when the verdict depends on the search bound.
    pub fn is_bound_relative(&self) -> bool {
        matches!(
            self,
            ExactnessVerdict::NotExactUpTo {
                obstruction: None,
                ..
            }
        )
    }
}

type FreeCache = Arc<Mutex<BTreeMap<Vec<String>, Arc<FreeAlgebra>>>>;

/// The class `HSP(generators)`.
#[derive(Clone)]
pub struct VarietySpec {
    name: String,
    generators: Vec<FiniteAlgebra>,
    rule: ExactnessRule,
    cap: usize,
    search_budget: u64,
    cache: FreeCache,
}

impl fmt::Debug for VarietySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VarietySpec")
            .field("name", &self.name)
            .field("generators", &self.generators.len())
            .field("rule", &self.rule)
            .field("cap", &self.cap)
            .finish()
    }
}

impl VarietySpec {
    pub fn new(name: impl Into<String>, generators: Vec<FiniteAlgebra>, rule: ExactnessRule) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Invalid("a variety needs at least one generator".into()))?;
        for g in &generators[1..] {
            first.ensure_same_signature(g)?;
        }
        if let Some(g) = generators.iter().find(|g| g.size() > 256) {
            return Err(Error::Invalid(format!(
                "generator with {} elements; at most 256 are supported",
                g.size()
            )));
        }
        if let ExactnessRule::BoundedSearch { default_bound: Some(0) } = rule {
            return Err(Error::Invalid("exactness bound must be at least 1".into()));
        }
        Ok(VarietySpec {
            name: name.into(),
            generators,
            rule,
            cap: DEFAULT_FREE_CAP,
            search_budget: DEFAULT_SEARCH_BUDGET,
            cache: Arc::default(),
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self.cache = Arc::default();
        self
    }

    pub fn with_search_budget(mut self, budget: u64) -> Self {
        self.search_budget = budget;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[FiniteAlgebra] {
        &self.generators
    }

    pub fn signature(&self) -> &Signature {
        self.generators[0].signature()
    }

    pub fn rule(&self) -> ExactnessRule {
        self.rule
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Exactness search bound used when the caller gives none.
    pub fn default_bound(&self, algebra_size: usize) -> usize {
        match self.rule {
            ExactnessRule::BoundedSearch { default_bound: Some(b) } => b,
            _ => algebra_size.max(1),
        }
    }

    fn check_signature(&self, what: impl FnOnce(&Signature) -> Result<()>) -> Result<()> {
        what(self.signature()).map_err(|e| match e {
            Error::UnknownSymbol { symbol, .. } => {
                Error::SignatureMismatch(format!("symbol `{symbol}` is not in the signature of {}", self.name))
            }
            Error::Arity { symbol, .. } => Error::SignatureMismatch(format!("wrong arity for `{symbol}`")),
            e => e,
        })
    }

    /// Calls `f(generator, compiled terms' values)` for every valuation of
    /// `vars` into every generator; stops early when `f` returns `false`.
    fn sweep(
        &self,
        terms: &[&Term],
        vars: &[String],
        mut f: impl FnMut(&[usize]) -> bool,
    ) -> Result<bool> {
        let compiled = terms
            .iter()
            .map(|t| CompiledTerm::compile_with_vars(t, self.signature(), vars))
            .collect::<Result<Vec<_>>>()?;
        let mut stack = Vec::new();
        let mut vals = vec![0usize; terms.len()];
        for a in &self.generators {
            let mut val = vec![0usize; vars.len()];
            loop {
                for (i, c) in compiled.iter().enumerate() {
                    vals[i] = c.eval(a, &val, &mut stack);
                }
                if !f(&vals) {
                    return Ok(false);
                }
                if !odometer_step(&mut val, a.size()) {
                    break;
                }
            }
        }
        Ok(true)
    }

    /// Whether every generator satisfies `id`.
    pub fn validates_identity(&self, id: &Identity) -> Result<bool> {
        self.check_signature(|s| id.check(s))?;
        let vars: Vec<String> = id.vars().into_iter().collect();
        self.sweep(&[&id.lhs, &id.rhs], &vars, |v| v[0] == v[1])
    }

    /// Whether every generator satisfies the universal clause
    /// `premises => some conclusion`.
    /// `V ⊨ Σ ⇒ Δ`: some conclusion already holds in `Fp(Σ, Var(c))` under
    /// the canonical valuation, through which every other valuation factors.
    pub fn validates_clause(&self, c: &Clause) -> Result<bool> {
        self.check_signature(|s| c.check(s))?;
        if c.conclusions.is_empty() {
            // the trivial algebra satisfies every premise
            return Ok(false);
        }
        let p = self.finitely_presented(&c.premises, &c.vars())?;
        for d in &c.conclusions {
            let a = p.rho.image(p.free.canonical_image(&d.lhs)?);
            let b = p.rho.image(p.free.canonical_image(&d.rhs)?);
            if a == b {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Validity in each generator under every valuation, i.e. in the
    /// class of subalgebras of products of generators. Agrees with
    /// [`validates_clause`](Self::validates_clause) on single-conclusion
    /// clauses when that class is the whole variety.
    pub fn validates_clause_in_generators(&self, c: &Clause) -> Result<bool> {
        self.check_signature(|s| c.check(s))?;
        let vars: Vec<String> = c.vars().into_iter().collect();
        let mut terms = Vec::new();
        for id in c.premises.iter().chain(&c.conclusions) {
            terms.push(&id.lhs);
            terms.push(&id.rhs);
        }
        let np = c.premises.len();
        self.sweep(&terms, &vars, |v| {
            let holds = |i: usize| v[2 * i] == v[2 * i + 1];
            !(0..np).all(holds) || (np..np + c.conclusions.len()).any(holds)
        })
    }

    /// The free algebra over `vars`, cached per variable set.
    pub fn free_algebra(&self, vars: &BTreeSet<String>) -> Result<Arc<FreeAlgebra>> {
        let key: Vec<String> = vars.iter().cloned().collect();
        if let Some(f) = self.cache.lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let f = Arc::new(FreeAlgebra::build(self, key.clone())?);
        self.cache.lock().unwrap().insert(key, f.clone());
        Ok(f)
    }

    /// The free algebra over `v0, .., v(n-1)`.
    pub fn free_algebra_n(&self, n: usize) -> Result<Arc<FreeAlgebra>> {
        let vars: BTreeSet<String> = fresh_vars(n, &BTreeSet::new()).into_iter().collect();
        self.free_algebra(&vars)
    }

    /// `F(X)` modulo the congruence generated by the images of `sigma`.
    pub fn finitely_presented(&self, sigma: &[Identity], vars: &BTreeSet<String>) -> Result<PresentedAlgebra> {
        for id in sigma {
            self.check_signature(|s| id.check(s))?;
            if let Some(v) = id.vars().iter().find(|v| !vars.contains(*v)) {
                return Err(Error::UnboundVariable(v.clone()));
            }
        }
        let free = self.free_algebra(vars)?;
        let pairs = sigma
            .iter()
            .map(|id| Ok((free.canonical_image(&id.lhs)?, free.canonical_image(&id.rhs)?)))
            .collect::<Result<Vec<_>>>()?;
        let theta = congruence_generated(free.algebra(), &pairs)?;
        let (algebra, rho) = quotient(free.algebra(), &theta)?;
        Ok(PresentedAlgebra {
            sigma: sigma.to_vec(),
            free,
            theta,
            algebra,
            rho,
        })
    }

    /// Pairs of constants that `b` identifies but the variety keeps apart.
    fn constant_obstruction(&self, b: &FiniteAlgebra) -> Result<Option<String>> {
        let consts = b.constants();
        for (i, &(op_i, val_i)) in consts.iter().enumerate() {
            for &(op_j, val_j) in &consts[i + 1..] {
                if val_i != val_j {
                    continue;
                }
                let ops = self.signature().ops();
                let (ci, cj) = (&ops[op_i].0, &ops[op_j].0);
                let id = Identity::new(Term::constant(ci.as_str()), Term::constant(cj.as_str()));
                if !self.validates_identity(&id)? {
                    return Ok(Some(format!("identifies `{ci}` and `{cj}`, which the variety separates")));
                }
            }
        }
        Ok(None)
    }

    /// Decides whether `b` embeds into some free algebra of the variety.
    ///
    /// `Exact` is always sound. `NotExactUpTo` without an obstruction only
    /// says that no embedding into `F(1)`, .., `F(bound)` exists, or that the
    /// search stopped at a resource limit before reaching `bound`, in which
    /// case the reported bound is the last one fully searched.
    pub fn is_exact_algebra(
        &self,
        b: &FiniteAlgebra,
        bound: Option<usize>,
        origin: AlgebraOrigin,
    ) -> Result<ExactnessVerdict> {
        if b.signature() != self.signature() {
            return Err(Error::SignatureMismatch(format!(
                "algebra is not over the signature of {}",
                self.name
            )));
        }
        let bound = bound.unwrap_or_else(|| self.default_bound(b.size()));
        if let Some(why) = self.constant_obstruction(b)? {
            return Ok(ExactnessVerdict::NotExactUpTo {
                bound,
                obstruction: Some(why),
            });
        }
        if self.rule == ExactnessRule::AllFpExact && origin == AlgebraOrigin::FinitelyPresented {
            return Ok(ExactnessVerdict::Exact(ExactWitness::VarietyRule));
        }
        for n in 1..=bound {
            let f = match self.free_algebra_n(n) {
                Ok(f) => f,
                Err(Error::ResourceLimit(_)) => {
                    return Ok(ExactnessVerdict::NotExactUpTo {
                        bound: n - 1,
                        obstruction: None,
                    })
                }
                Err(e) => return Err(e),
            };
            match find_embedding_within(b, f.algebra(), self.search_budget)? {
                EmbeddingSearch::Found(map) => {
                    return Ok(ExactnessVerdict::Exact(ExactWitness::Embedding {
                        n,
                        target_vars: f.vars().to_vec(),
                        map,
                    }))
                }
                EmbeddingSearch::NotFound => {}
                EmbeddingSearch::BudgetExhausted => {
                    return Ok(ExactnessVerdict::NotExactUpTo {
                        bound: n - 1,
                        obstruction: None,
                    })
                }
            }
        }
        Ok(ExactnessVerdict::NotExactUpTo {
            bound,
            obstruction: None,
        })
    }

    /// Searches for an embedding even when the variety's rule would answer
    /// without one.
    pub fn find_exactness_embedding(&self, b: &FiniteAlgebra, bound: usize) -> Result<Option<ExactWitness>> {
        let plain = VarietySpec {
            rule: ExactnessRule::BoundedSearch { default_bound: None },
            ..self.clone()
        };
        match plain.is_exact_algebra(b, Some(bound), AlgebraOrigin::Arbitrary)? {
            ExactnessVerdict::Exact(w) => Ok(Some(w)),
            _ => Ok(None),
        }
    }
}

/// The free algebra `F(X)`, realized as the subalgebra of
/// `prod_A A^(A^X)` generated by the projections.
#[derive(Debug, Clone)]
pub struct FreeAlgebra {
    vars: Vec<String>,
    algebra: FiniteAlgebra,
    dim: usize,
    coords: Vec<u8>,
    /// `(generator index, first coordinate)` per generator.
    segments: Vec<(usize, usize)>,
    generator_sizes: Vec<usize>,
    generator_elements: Vec<usize>,
    terms: Vec<Term>,
}

struct Closure<'a> {
    spec: &'a VarietySpec,
    dim: usize,
    coord_gen: Vec<u8>,
    coords: Vec<u8>,
    index: HashMap<Box<[u8]>, u32>,
    terms: Vec<Term>,
    levels: Vec<Vec<u32>>,
    scratch: Vec<u8>,
}

impl Closure<'_> {
    fn compute(&mut self, op: usize, args: &[usize]) {
        let gens = &self.spec.generators;
        self.scratch.clear();
        let mut vals = [0usize; 8];
        let mut heap = Vec::new();
        for c in 0..self.dim {
            let a = &gens[self.coord_gen[c] as usize];
            let r = if args.len() <= 8 {
                for (i, &e) in args.iter().enumerate() {
                    vals[i] = self.coords[e * self.dim + c] as usize;
                }
                a.apply(op, &vals[..args.len()])
            } else {
                heap.clear();
                heap.extend(args.iter().map(|&e| self.coords[e * self.dim + c] as usize));
                a.apply(op, &heap)
            };
            self.scratch.push(r as u8);
        }
    }

    /// Adds the tuple in `scratch` if new; returns its index.
    fn insert(&mut self, level: usize, term: impl FnOnce(&[Term]) -> Term) -> Result<(usize, bool)> {
        if let Some(&e) = self.index.get(self.scratch.as_slice()) {
            return Ok((e as usize, false));
        }
        let e = self.terms.len();
        if e >= self.spec.cap {
            return Err(Error::ResourceLimit(format!(
                "free algebra exceeds the cap of {} elements",
                self.spec.cap
            )));
        }
        let max_arity = self.spec.signature().max_arity() as u32;
        if max_arity > 0 && (e as u64 + 1).checked_pow(max_arity).is_none_or(|t| t > MAX_TABLE_ENTRIES as u64) {
            return Err(Error::ResourceLimit(format!(
                "free algebra with more than {e} elements exceeds the table limit"
            )));
        }
        self.coords.extend_from_slice(&self.scratch);
        self.index.insert(self.scratch.clone().into_boxed_slice(), e as u32);
        let t = term(&self.terms);
        self.terms.push(t);
        if self.levels.len() <= level {
            self.levels.resize(level + 1, Vec::new());
        }
        self.levels[level].push(e as u32);
        Ok((e, true))
    }
}

/// All compositions of `total` into `k` parts, each in `1..=max`, in lex order.
fn compositions(total: usize, k: usize, max: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, k: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for p in 1..=max.min(total) {
            if total - p < k - 1 || total - p > (k - 1) * max {
                continue;
            }
            cur.push(p);
            go(total - p, k - 1, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, k, max, &mut Vec::new(), &mut out);
    out
}

impl FreeAlgebra {
    fn build(spec: &VarietySpec, vars: Vec<String>) -> Result<FreeAlgebra> {
        let sig = spec.signature().clone();
        if vars.is_empty() && !sig.has_constants() {
            return Err(Error::EmptyGeneration);
        }
        let nx = vars.len() as u32;
        let mut segments = Vec::new();
        let mut coord_gen = Vec::new();
        let mut dim = 0usize;
        for (gi, a) in spec.generators.iter().enumerate() {
            let count = a
                .size()
                .checked_pow(nx)
                .filter(|&c| c <= spec.cap.max(1 << 20))
                .ok_or_else(|| Error::ResourceLimit(format!("{} valuations into a generator", a.size())))?;
            segments.push((gi, dim));
            coord_gen.extend(std::iter::repeat_n(gi as u8, count));
            dim += count;
        }
        let mut cl = Closure {
            spec,
            dim,
            coord_gen,
            coords: Vec::new(),
            index: HashMap::new(),
            terms: Vec::new(),
            levels: vec![Vec::new(), Vec::new()],
            scratch: Vec::with_capacity(dim),
        };
        // projections: coordinate (A, g) of x_i is g(x_i)
        let mut generator_elements = Vec::with_capacity(vars.len());
        for (i, x) in vars.iter().enumerate() {
            cl.scratch.clear();
            for a in &spec.generators {
                let mut val = vec![0usize; vars.len()];
                loop {
                    cl.scratch.push(val[i] as u8);
                    if !odometer_step(&mut val, a.size()) {
                        break;
                    }
                }
            }
            let (e, _) = cl.insert(1, |_| Term::var(x.as_str()))?;
            generator_elements.push(e);
        }
        let ops: Vec<(usize, String, usize)> = sig
            .ops()
            .iter()
            .enumerate()
            .map(|(i, (n, k))| (i, n.clone(), *k))
            .collect();
        for (op, name, _) in ops.iter().filter(|(_, _, k)| *k == 0) {
            cl.compute(*op, &[]);
            cl.insert(1, |_| Term::constant(name.as_str()))?;
        }
        let max_arity = sig.max_arity();
        let mut level = 2;
        loop {
            let top = (1..cl.levels.len()).rev().find(|&s| !cl.levels[s].is_empty()).unwrap_or(0);
            if level - 1 > max_arity * top {
                break;
            }
            for (op, name, k) in ops.iter().filter(|(_, _, k)| *k > 0) {
                for parts in compositions(level - 1, *k, top) {
                    if parts.iter().any(|&p| cl.levels[p].is_empty()) {
                        continue;
                    }
                    let lens: Vec<usize> = parts.iter().map(|&p| cl.levels[p].len()).collect();
                    let mut pick = vec![0usize; *k];
                    let mut args = vec![0usize; *k];
                    loop {
                        for i in 0..*k {
                            args[i] = cl.levels[parts[i]][pick[i]] as usize;
                        }
                        cl.compute(*op, &args);
                        cl.insert(level, |terms| {
                            Term::app(name.as_str(), args.iter().map(|&e| terms[e].clone()).collect())
                        })?;
                        // advance the mixed-radix counter
                        let mut d = *k;
                        let mut more = false;
                        while d > 0 {
                            d -= 1;
                            pick[d] += 1;
                            if pick[d] < lens[d] {
                                more = true;
                                break;
                            }
                            pick[d] = 0;
                        }
                        if !more {
                            break;
                        }
                    }
                }
            }
            level += 1;
        }
        let size = cl.terms.len();
        let algebra = {
            let cl = &mut cl;
            FiniteAlgebra::from_fn(sig, size, |op, args| {
                cl.compute(op, args);
                cl.index[cl.scratch.as_slice()] as usize
            })?
        };
        let names = cl.terms.iter().map(|t| t.to_string()).collect();
        let algebra = algebra.with_names(names)?;
        Ok(FreeAlgebra {
            vars,
            algebra,
            dim,
            coords: cl.coords,
            segments,
            generator_sizes: spec.generators.iter().map(|a| a.size()).collect(),
            generator_elements,
            terms: cl.terms,
        })
    }

    /// The free generators, sorted.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn size(&self) -> usize {
        self.algebra.size()
    }

    pub fn generator_elements(&self) -> &[usize] {
        &self.generator_elements
    }

    pub fn generator_element(&self, x: &str) -> Option<usize> {
        self.vars
            .binary_search_by(|v| v.as_str().cmp(x))
            .ok()
            .map(|i| self.generator_elements[i])
    }

    /// A shortest term denoting `e`.
    pub fn representative(&self, e: usize) -> &Term {
        &self.terms[e]
    }

    pub fn representatives(&self) -> &[Term] {
        &self.terms
    }

    /// Number of coordinates of the defining tuples.
    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn tuple(&self, e: usize) -> &[u8] {
        &self.coords[e * self.dim..(e + 1) * self.dim]
    }

    /// Coordinate index of the valuation `val` (values per sorted variable)
    /// into generator `gen`.
    pub fn coordinate_of(&self, gen: usize, val: &[usize]) -> usize {
        let n = self.generator_sizes[gen];
        self.segments[gen].1 + val.iter().fold(0, |acc, &v| acc * n + v)
    }

    /// Value of `e` under the valuation `val` into generator `gen`.
    pub fn value_at(&self, e: usize, gen: usize, val: &[usize]) -> usize {
        self.coords[e * self.dim + self.coordinate_of(gen, val)] as usize
    }

    /// The image of `t` under the canonical map onto `F(X)`.
    pub fn canonical_image(&self, t: &Term) -> Result<usize> {
        let mut val = BTreeMap::new();
        for (x, &e) in self.vars.iter().zip(&self.generator_elements) {
            val.insert(x.clone(), e);
        }
        self.algebra.eval(t, &val)
    }

    /// Compiles `t` for repeated evaluation in this algebra; variables are
    /// numbered by their position in `vars`.
    pub fn compile(&self, t: &Term, vars: &[String]) -> Result<CompiledTerm> {
        CompiledTerm::compile_with_vars(t, self.algebra.signature(), vars)
    }
}

/// `Fp(Σ, X)`: the free algebra over `X` modulo the congruence generated by Σ.
#[derive(Debug, Clone)]
pub struct PresentedAlgebra {
    pub sigma: Vec<Identity>,
    pub free: Arc<FreeAlgebra>,
    pub theta: Congruence,
    pub algebra: FiniteAlgebra,
    pub rho: Homomorphism,
}

impl PresentedAlgebra {
    pub fn vars(&self) -> &[String] {
        self.free.vars()
    }

    /// `rho(h(x))` for each variable, in variable order.
    pub fn generator_images(&self) -> Vec<usize> {
        self.free.generator_elements().iter().map(|&e| self.rho.image(e)).collect()
    }
}

/// `B'_n`: the Boolean lattice with `n` atoms plus a new top, with its
/// pseudocomplement. Elements `0..2^n` are atom bitmasks and `2^n` is the new
/// top. Signature: meet, join, star, bot, top.
pub fn construct_bn_prime(n: usize) -> Result<FiniteAlgebra> {
    if n > 7 {
        return Err(Error::ResourceLimit(format!("B'_{n} has more than 256 elements")));
    }
    let full = (1usize << n) - 1;
    let top = 1usize << n;
    let size = top + 1;
    let sig = Signature::new([("meet", 2), ("join", 2), ("star", 1), ("bot", 0), ("top", 0)])?;
    let alg = FiniteAlgebra::from_fn(sig, size, |op, a| match op {
        0 => match (a[0] == top, a[1] == top) {
            (true, _) => a[1],
            (_, true) => a[0],
            _ => a[0] & a[1],
        },
        1 => {
            if a[0] == top || a[1] == top {
                top
            } else {
                a[0] | a[1]
            }
        }
        2 => match a[0] {
            0 => top,
            x if x == top => 0,
            x => full & !x,
        },
        3 => 0,
        _ => top,
    })?;
    let names = (0..size)
        .map(|e| {
            if e == top {
                "top'".to_string()
            } else if e == 0 {
                "bot".to_string()
            } else {
                format!("{e:0n$b}")
            }
        })
        .collect();
    alg.with_names(names)
}
