//! Finite algebras given by operation tables.
//!
//! Elements are `0..size`. Each operation of arity `k` is a row-major table
//! of length `size^k`: the entry for `(a1, ..., ak)` sits at index
//! `((a1 * n + a2) * n + ...) + ak`.

mod congruence;
mod search;

use std::collections::{BTreeMap, HashMap};

pub use congruence::{all_congruences, congruence_generated, minimal_members, Congruence, UnionFind};
pub use search::{find_embedding, find_embedding_within, homomorphisms, EmbeddingSearch};

use crate::error::{Error, Result};
use crate::term::{Signature, Term};

/// Largest number of table entries a single algebra may hold.
pub const MAX_TABLE_ENTRIES: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    sig: Signature,
    size: usize,
    tables: Vec<Vec<u32>>,
    names: Option<Vec<String>>,
}

fn table_len(size: usize, arity: usize) -> Result<usize> {
    let mut len: usize = 1;
    for _ in 0..arity {
        len = len
            .checked_mul(size)
            .filter(|&l| l <= MAX_TABLE_ENTRIES)
            .ok_or_else(|| {
                Error::ResourceLimit(format!(
                    "operation table of arity {arity} over {size} elements exceeds {MAX_TABLE_ENTRIES} entries"
                ))
            })?;
    }
    Ok(len)
}

impl FiniteAlgebra {
    pub fn new(sig: Signature, size: usize, tables: Vec<Vec<u32>>) -> Result<Self> {
        if size == 0 {
            return Err(Error::Invalid("algebra carrier must be nonempty".into()));
        }
        if tables.len() != sig.len() {
            return Err(Error::Invalid(format!(
                "{} operation table(s) given for a signature with {} symbol(s)",
                tables.len(),
                sig.len()
            )));
        }
        for ((name, arity), table) in sig.ops().iter().zip(&tables) {
            let expected = table_len(size, *arity)?;
            if table.len() != expected {
                return Err(Error::Invalid(format!(
                    "table for `{name}` has {} entries, expected {expected}",
                    table.len()
                )));
            }
            if let Some(bad) = table.iter().find(|&&v| v as usize >= size) {
                return Err(Error::Invalid(format!("table for `{name}` contains out-of-range value {bad}")));
            }
        }
        Ok(FiniteAlgebra {
            sig,
            size,
            tables,
            names: None,
        })
    }

    /// Builds the tables by calling `f(op_index, args)` on every argument tuple.
    pub fn from_fn(sig: Signature, size: usize, mut f: impl FnMut(usize, &[usize]) -> usize) -> Result<Self> {
        let mut tables = Vec::with_capacity(sig.len());
        for (i, (_, arity)) in sig.ops().iter().enumerate() {
            let len = table_len(size, *arity)?;
            let mut table = Vec::with_capacity(len);
            let mut args = vec![0usize; *arity];
            for _ in 0..len {
                table.push(f(i, &args) as u32);
                odometer_step(&mut args, size);
            }
            tables.push(table);
        }
        FiniteAlgebra::new(sig, size, tables)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.size {
            return Err(Error::Invalid(format!(
                "{} element name(s) for {} element(s)",
                names.len(),
                self.size
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn tables(&self) -> &[Vec<u32>] {
        &self.tables
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn element_name(&self, e: usize) -> String {
        match &self.names {
            Some(n) => n[e].clone(),
            None => e.to_string(),
        }
    }

    #[inline]
    pub fn index(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.size + a)
    }

    /// Applies operation `op` (by declaration index) to `args`.
    #[inline]
    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        self.tables[op][self.index(args)] as usize
    }

    #[inline]
    pub fn apply2(&self, op: usize, a: usize, b: usize) -> usize {
        self.tables[op][a * self.size + b] as usize
    }

    pub fn apply_named(&self, symbol: &str, args: &[usize]) -> Option<usize> {
        let op = self.sig.position(symbol)?;
        (self.sig.ops()[op].1 == args.len()).then(|| self.apply(op, args))
    }

    pub fn ensure_same_signature(&self, other: &FiniteAlgebra) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(
                "algebras are over different signatures".into(),
            ));
        }
        Ok(())
    }

    /// Evaluates `t` under `valuation`.
    pub fn eval(&self, t: &Term, valuation: &BTreeMap<String, usize>) -> Result<usize> {
        match t {
            Term::Var(v) => {
                let e = *valuation
                    .get(v)
                    .ok_or_else(|| Error::UnboundVariable(v.clone()))?;
                if e >= self.size {
                    return Err(Error::Invalid(format!("value {e} of `{v}` is outside the carrier")));
                }
                Ok(e)
            }
            Term::App(f, args) => {
                let op = self.sig.position(f).ok_or_else(|| {
                    Error::SignatureMismatch(format!("symbol `{f}` is not in the signature"))
                })?;
                if self.sig.ops()[op].1 != args.len() {
                    return Err(Error::SignatureMismatch(format!("wrong arity for `{f}`")));
                }
                let vals = args
                    .iter()
                    .map(|a| self.eval(a, valuation))
                    .collect::<Result<Vec<_>>>()?;
                Ok(self.apply(op, &vals))
            }
        }
    }

    /// Indices of the constants in declaration order together with their values.
    pub fn constants(&self) -> Vec<(usize, usize)> {
        self.sig
            .ops()
            .iter()
            .enumerate()
            .filter(|(_, (_, a))| *a == 0)
            .map(|(i, _)| (i, self.tables[i][0] as usize))
            .collect()
    }
}

/// Advances `args` as a base-`n` counter, most significant digit first.
/// Returns `false` after wrapping around to all zeros.
pub(crate) fn odometer_step(args: &mut [usize], n: usize) -> bool {
    for d in args.iter_mut().rev() {
        *d += 1;
        if *d < n {
            return true;
        }
        *d = 0;
    }
    false
}

/// A term flattened into postfix form over numbered variables, for fast
/// repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledTerm {
    code: Vec<Instr>,
}

#[derive(Debug, Clone, Copy)]
enum Instr {
    Var(usize),
    Op(usize, usize),
}

impl CompiledTerm {
    /// Compiles `t`; `var_index` numbers the variables.
    pub fn compile(t: &Term, sig: &Signature, var_index: &impl Fn(&str) -> Option<usize>) -> Result<Self> {
        let mut code = Vec::new();
        fn go(
            t: &Term,
            sig: &Signature,
            var_index: &impl Fn(&str) -> Option<usize>,
            code: &mut Vec<Instr>,
        ) -> Result<()> {
            match t {
                Term::Var(v) => code.push(Instr::Var(
                    var_index(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?,
                )),
                Term::App(f, args) => {
                    let op = sig.position(f).ok_or_else(|| {
                        Error::SignatureMismatch(format!("symbol `{f}` is not in the signature"))
                    })?;
                    if sig.ops()[op].1 != args.len() {
                        return Err(Error::SignatureMismatch(format!("wrong arity for `{f}`")));
                    }
                    for a in args {
                        go(a, sig, var_index, code)?;
                    }
                    code.push(Instr::Op(op, args.len()));
                }
            }
            Ok(())
        }
        go(t, sig, var_index, &mut code)?;
        Ok(CompiledTerm { code })
    }

    /// Compiles against an ordered variable list.
    pub fn compile_with_vars(t: &Term, sig: &Signature, vars: &[String]) -> Result<Self> {
        let idx: HashMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        CompiledTerm::compile(t, sig, &|v| idx.get(v).copied())
    }

    pub fn eval(&self, alg: &FiniteAlgebra, valuation: &[usize], stack: &mut Vec<usize>) -> usize {
        stack.clear();
        for ins in &self.code {
            match *ins {
                Instr::Var(i) => stack.push(valuation[i]),
                Instr::Op(op, k) => {
                    let at = stack.len() - k;
                    let v = alg.apply(op, &stack[at..]);
                    stack.truncate(at);
                    stack.push(v);
                }
            }
        }
        stack[0]
    }
}

/// A map between carriers; whether it is a homomorphism is checked against
/// explicit source and target algebras.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    pub map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(map: Vec<usize>) -> Self {
        Homomorphism { map }
    }

    pub fn identity(n: usize) -> Self {
        Homomorphism { map: (0..n).collect() }
    }

    #[inline]
    pub fn image(&self, a: usize) -> usize {
        self.map[a]
    }

    /// Exhaustive check that the map commutes with every operation.
    pub fn is_homomorphism(&self, source: &FiniteAlgebra, target: &FiniteAlgebra) -> bool {
        if source.sig != target.sig || self.map.len() != source.size {
            return false;
        }
        if self.map.iter().any(|&b| b >= target.size) {
            return false;
        }
        for (op, (_, arity)) in source.sig.ops().iter().enumerate() {
            let mut args = vec![0usize; *arity];
            let mut img = vec![0usize; *arity];
            loop {
                for (i, &a) in args.iter().enumerate() {
                    img[i] = self.map[a];
                }
                if self.map[source.apply(op, &args)] != target.apply(op, &img) {
                    return false;
                }
                if !odometer_step(&mut args, source.size) {
                    break;
                }
            }
        }
        true
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.map.iter().all(|b| seen.insert(*b))
    }

    pub fn kernel(&self) -> Congruence {
        Congruence::from_labels(&self.map)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism::new(self.map.iter().map(|&b| other.map[b]).collect())
    }
}

/// Direct product; elements are ordered lexicographically by coordinate
/// tuple, first factor most significant.
pub fn product(algebras: &[FiniteAlgebra]) -> Result<FiniteAlgebra> {
    let first = algebras
        .first()
        .ok_or_else(|| Error::Invalid("product of an empty list".into()))?;
    for a in &algebras[1..] {
        first.ensure_same_signature(a)?;
    }
    let sizes: Vec<usize> = algebras.iter().map(|a| a.size).collect();
    let size = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .ok_or_else(|| Error::ResourceLimit("product carrier too large".into()))?;
    let decode = |mut e: usize| {
        let mut coords = vec![0usize; sizes.len()];
        for i in (0..sizes.len()).rev() {
            coords[i] = e % sizes[i];
            e /= sizes[i];
        }
        coords
    };
    let coords: Vec<Vec<usize>> = (0..size).map(decode).collect();
    let alg = FiniteAlgebra::from_fn(first.sig.clone(), size, |op, args| {
        let mut e = 0;
        let mut fargs = vec![0usize; args.len()];
        for (i, f) in algebras.iter().enumerate() {
            for (j, &a) in args.iter().enumerate() {
                fargs[j] = coords[a][i];
            }
            e = e * sizes[i] + f.apply(op, &fargs);
        }
        e
    })?;
    if algebras.iter().all(|a| a.names.is_some()) {
        let names = coords
            .iter()
            .map(|c| {
                let parts: Vec<String> = c.iter().zip(algebras).map(|(&x, a)| a.element_name(x)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        return alg.with_names(names);
    }
    Ok(alg)
}

/// Quotient by a congruence: blocks ordered by least member, together with
/// the canonical projection.
pub fn quotient(a: &FiniteAlgebra, theta: &Congruence) -> Result<(FiniteAlgebra, Homomorphism)> {
    if theta.len() != a.size {
        return Err(Error::NotCongruence("partition size differs from the carrier".into()));
    }
    if !theta.is_compatible(a) {
        return Err(Error::NotCongruence("partition is not compatible with the operations".into()));
    }
    let reps = theta.representatives();
    let q = FiniteAlgebra::from_fn(a.sig.clone(), reps.len(), |op, args| {
        let rargs: Vec<usize> = args.iter().map(|&b| reps[b]).collect();
        theta.block_of(a.apply(op, &rargs))
    })?;
    let q = match &a.names {
        Some(n) => {
            let names = reps.iter().map(|&r| format!("[{}]", n[r])).collect();
            q.with_names(names)?
        }
        None => q,
    };
    Ok((q, Homomorphism::new(theta.labels())))
}

/// Least subuniverse containing `gens` and all constants. Elements are
/// listed in discovery order starting from the sorted generators.
pub fn subalgebra_generated(a: &FiniteAlgebra, gens: &[usize]) -> Result<(FiniteAlgebra, Homomorphism)> {
    if gens.iter().any(|&g| g >= a.size) {
        return Err(Error::Invalid("generator outside the carrier".into()));
    }
    if gens.is_empty() && !a.sig.has_constants() {
        return Err(Error::EmptyGeneration);
    }
    let mut seeds: Vec<usize> = gens.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    let mut elems: Vec<usize> = Vec::new();
    let mut pos: HashMap<usize, usize> = HashMap::new();
    let push = |e: usize, elems: &mut Vec<usize>, pos: &mut HashMap<usize, usize>| {
        pos.entry(e).or_insert_with(|| {
            elems.push(e);
            elems.len() - 1
        });
    };
    for &g in &seeds {
        push(g, &mut elems, &mut pos);
    }
    for (_, c) in a.constants() {
        push(c, &mut elems, &mut pos);
    }
    let ops: Vec<(usize, usize)> = a
        .sig
        .ops()
        .iter()
        .enumerate()
        .filter(|(_, (_, k))| *k > 0)
        .map(|(i, (_, k))| (i, *k))
        .collect();
    let mut i = 0;
    while i < elems.len() {
        for &(op, k) in &ops {
            // every tuple over elems[0..=i] whose largest index is i
            let mut idx = vec![0usize; k];
            loop {
                if idx.contains(&i) {
                    let args: Vec<usize> = idx.iter().map(|&j| elems[j]).collect();
                    let r = a.apply(op, &args);
                    push(r, &mut elems, &mut pos);
                }
                if !odometer_step(&mut idx, i + 1) {
                    break;
                }
            }
        }
        i += 1;
    }
    let sub = FiniteAlgebra::from_fn(a.sig.clone(), elems.len(), |op, args| {
        let real: Vec<usize> = args.iter().map(|&j| elems[j]).collect();
        pos[&a.apply(op, &real)]
    })?;
    let sub = match &a.names {
        Some(n) => sub.with_names(elems.iter().map(|&e| n[e].clone()).collect())?,
        None => sub,
    };
    Ok((sub, Homomorphism::new(elems)))
}
