use std::collections::HashSet;

use super::{odometer_step, FiniteAlgebra};
use crate::error::{Error, Result};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] as usize != a {
            let gp = self.parent[self.parent[a] as usize];
            self.parent[a] = gp;
            a = gp as usize;
        }
        a
    }

    /// Merges the classes of `a` and `b`; returns `true` if they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn into_congruence(mut self) -> Congruence {
        let roots: Vec<usize> = (0..self.parent.len()).map(|a| self.find(a)).collect();
        Congruence::from_labels(&roots)
    }
}

/// An equivalence relation on `0..n` stored as block ids, blocks numbered
/// in order of their least member. Two equal relations always have equal
/// representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    blocks: Vec<u32>,
}

impl Congruence {
    pub fn identity(n: usize) -> Self {
        Congruence {
            blocks: (0..n as u32).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        Congruence { blocks: vec![0; n] }
    }

    /// Canonicalizes an arbitrary labelling: elements with equal labels
    /// share a block.
    pub fn from_labels<L: Eq + std::hash::Hash + Copy>(labels: &[L]) -> Self {
        let mut ids = std::collections::HashMap::new();
        let blocks = labels
            .iter()
            .map(|l| {
                let next = ids.len() as u32;
                *ids.entry(*l).or_insert(next)
            })
            .collect();
        Congruence { blocks }
    }

    /// Equivalence closure of `pairs` (no compatibility closure).
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut uf = UnionFind::new(n);
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Invalid(format!("pair ({a}, {b}) outside a carrier of size {n}")));
            }
            uf.union(a, b);
        }
        Ok(uf.into_congruence())
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    #[inline]
    pub fn block_of(&self, a: usize) -> usize {
        self.blocks[a] as usize
    }

    #[inline]
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.blocks[a] == self.blocks[b]
    }

    pub fn block_ids(&self) -> &[u32] {
        &self.blocks
    }

    pub fn labels(&self) -> Vec<usize> {
        self.blocks.iter().map(|&b| b as usize).collect()
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    /// Least member of each block, in block order.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = Vec::with_capacity(self.num_blocks());
        for (a, &b) in self.blocks.iter().enumerate() {
            if b as usize == reps.len() {
                reps.push(a);
            }
        }
        reps
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (a, &b) in self.blocks.iter().enumerate() {
            out[b as usize].push(a);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.num_blocks() == self.len()
    }

    pub fn is_total(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// `self ⊆ other` as sets of pairs.
    pub fn is_below(&self, other: &Congruence) -> bool {
        debug_assert_eq!(self.len(), other.len());
        let mut image = vec![u32::MAX; self.num_blocks()];
        for (a, &b) in self.blocks.iter().enumerate() {
            let slot = &mut image[b as usize];
            if *slot == u32::MAX {
                *slot = other.blocks[a];
            } else if *slot != other.blocks[a] {
                return false;
            }
        }
        true
    }

    pub fn join(&self, other: &Congruence) -> Congruence {
        let n = self.len();
        let mut uf = UnionFind::new(n);
        let mut first = vec![usize::MAX; n];
        let mut first_o = vec![usize::MAX; n];
        for a in 0..n {
            let b = self.blocks[a] as usize;
            if first[b] == usize::MAX {
                first[b] = a;
            } else {
                uf.union(first[b], a);
            }
            let c = other.blocks[a] as usize;
            if first_o[c] == usize::MAX {
                first_o[c] = a;
            } else {
                uf.union(first_o[c], a);
            }
        }
        uf.into_congruence()
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        let pairs: Vec<(u32, u32)> = self.blocks.iter().copied().zip(other.blocks.iter().copied()).collect();
        Congruence::from_labels(&pairs)
    }

    /// Checks that related arguments give related results for every operation.
    pub fn is_compatible(&self, alg: &FiniteAlgebra) -> bool {
        if self.len() != alg.size() {
            return false;
        }
        let reps = self.representatives();
        for (op, (_, arity)) in alg.signature().ops().iter().enumerate() {
            let mut args = vec![0usize; *arity];
            let mut rargs = vec![0usize; *arity];
            loop {
                for (i, &a) in args.iter().enumerate() {
                    rargs[i] = reps[self.block_of(a)];
                }
                if !self.related(alg.apply(op, &args), alg.apply(op, &rargs)) {
                    return false;
                }
                if !odometer_step(&mut args, alg.size()) {
                    break;
                }
            }
        }
        true
    }
}

/// Least congruence containing `pairs`.
///
/// Each merge `a ~ b` performed by the union-find is an edge of a spanning
/// forest of the relation; translating every edge by every unary polynomial
/// `f(c1, .., a, .., ck)` and merging the results reaches the fixpoint.
pub fn congruence_generated(alg: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Result<Congruence> {
    let n = alg.size();
    let mut uf = UnionFind::new(n);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return Err(Error::Invalid(format!("pair ({a}, {b}) outside a carrier of size {n}")));
        }
        if uf.union(a, b) {
            edges.push((a, b));
        }
    }
    let ops: Vec<(usize, usize)> = alg
        .signature()
        .ops()
        .iter()
        .enumerate()
        .filter(|(_, (_, k))| *k > 0)
        .map(|(i, (_, k))| (i, *k))
        .collect();
    let mut args = Vec::new();
    while let Some((a, b)) = edges.pop() {
        for &(op, k) in &ops {
            if k == 2 {
                for c in 0..n {
                    let (x, y) = (alg.apply2(op, a, c), alg.apply2(op, b, c));
                    if uf.union(x, y) {
                        edges.push((x, y));
                    }
                    let (x, y) = (alg.apply2(op, c, a), alg.apply2(op, c, b));
                    if uf.union(x, y) {
                        edges.push((x, y));
                    }
                }
                continue;
            }
            for pos in 0..k {
                let mut others = vec![0usize; k - 1];
                loop {
                    args.clear();
                    args.extend_from_slice(&others[..pos]);
                    args.push(a);
                    args.extend_from_slice(&others[pos..]);
                    let x = alg.apply(op, &args);
                    args[pos] = b;
                    let y = alg.apply(op, &args);
                    if uf.union(x, y) {
                        edges.push((x, y));
                    }
                    if !odometer_step(&mut others, n) {
                        break;
                    }
                }
            }
        }
    }
    Ok(uf.into_congruence())
}

/// Largest congruence lattice `all_congruences` will build.
pub const MAX_CONGRUENCES: usize = 1 << 20;

/// The whole congruence lattice, as the join closure of the principal
/// congruences. Finer congruences come first (descending block count, ties
/// by block array), which is a linear extension of inclusion.
pub fn all_congruences(alg: &FiniteAlgebra) -> Result<Vec<Congruence>> {
    let n = alg.size();
    let mut principals: Vec<Congruence> = Vec::new();
    let mut seen_p: HashSet<Congruence> = HashSet::new();
    for a in 0..n {
        for b in a + 1..n {
            // skip pairs already collapsed by a principal congruence generated by an equivalent pair
            let c = congruence_generated(alg, &[(a, b)])?;
            if seen_p.insert(c.clone()) {
                principals.push(c);
            }
        }
    }
    let mut all: Vec<Congruence> = vec![Congruence::identity(n)];
    let mut seen: HashSet<Congruence> = all.iter().cloned().collect();
    for p in &principals {
        if seen.insert(p.clone()) {
            all.push(p.clone());
        }
    }
    let mut i = 0;
    while i < all.len() {
        for p in &principals {
            if p.is_below(&all[i]) {
                continue;
            }
            let j = all[i].join(p);
            if !seen.contains(&j) {
                if all.len() >= MAX_CONGRUENCES {
                    return Err(Error::ResourceLimit(format!(
                        "congruence lattice has more than {MAX_CONGRUENCES} members"
                    )));
                }
                seen.insert(j.clone());
                all.push(j);
            }
        }
        i += 1;
    }
    all.sort_by(|x, y| y.num_blocks().cmp(&x.num_blocks()).then_with(|| x.cmp(y)));
    Ok(all)
}

/// The ⊆-minimal members, in input order; duplicates are collapsed to their
/// first occurrence.
pub fn minimal_members(congruences: &[Congruence]) -> Vec<Congruence> {
    let mut out: Vec<Congruence> = Vec::new();
    for (i, c) in congruences.iter().enumerate() {
        if congruences[..i].contains(c) {
            continue;
        }
        let dominated = congruences.iter().any(|d| d != c && d.is_below(c));
        if !dominated {
            out.push(c.clone());
        }
    }
    out
}
