//! Backtracking search for homomorphisms between finite algebras.
//!
//! The source is covered by a greedy generating set. Generators are assigned
//! one at a time and the partial map is closed under the operations after
//! each choice, so conflicts surface as soon as the generated part of the
//! source sees them.

use super::{odometer_step, FiniteAlgebra, Homomorphism};
use crate::error::{Error, Result};

const UNSET: u32 = u32::MAX;

/// Outcome of a budgeted embedding search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingSearch {
    Found(Homomorphism),
    NotFound,
    BudgetExhausted,
}

/// Largest number of homomorphisms `homomorphisms` will return.
pub const MAX_HOMOMORPHISMS: usize = 1 << 20;

struct Searcher<'a> {
    src: &'a FiniteAlgebra,
    tgt: &'a FiniteAlgebra,
    injective: bool,
    ops: Vec<(usize, usize)>,
    gens: Vec<usize>,
    map: Vec<u32>,
    used: Vec<bool>,
    order: Vec<usize>,
    budget: u64,
    exhausted: bool,
    args: Vec<usize>,
    img: Vec<usize>,
    idx: Vec<usize>,
}

enum Step {
    Ok,
    Conflict,
    Exhausted,
}

impl<'a> Searcher<'a> {
    fn new(src: &'a FiniteAlgebra, tgt: &'a FiniteAlgebra, injective: bool, budget: u64) -> Self {
        let ops = src
            .signature()
            .ops()
            .iter()
            .enumerate()
            .filter(|(_, (_, k))| *k > 0)
            .map(|(i, (_, k))| (i, *k))
            .collect();
        Searcher {
            src,
            tgt,
            injective,
            ops,
            gens: Vec::new(),
            map: vec![UNSET; src.size()],
            used: vec![false; tgt.size()],
            order: Vec::new(),
            budget,
            exhausted: false,
            args: Vec::new(),
            img: Vec::new(),
            idx: Vec::new(),
        }
    }

    fn assign(&mut self, a: usize, b: usize) -> bool {
        let cur = self.map[a];
        if cur != UNSET {
            return cur as usize == b;
        }
        if self.injective {
            if self.used[b] {
                return false;
            }
            self.used[b] = true;
        }
        self.map[a] = b as u32;
        self.order.push(a);
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.order.len() > len {
            let a = self.order.pop().unwrap();
            if self.injective {
                self.used[self.map[a] as usize] = false;
            }
            self.map[a] = UNSET;
        }
    }

    /// Closes the partial map over `order[from..]` and everything it produces.
    fn close(&mut self, from: usize) -> Step {
        let mut i = from;
        while i < self.order.len() {
            for oi in 0..self.ops.len() {
                let (op, k) = self.ops[oi];
                self.idx.clear();
                self.idx.resize(k, 0);
                loop {
                    if self.idx.contains(&i) {
                        if self.budget == 0 {
                            self.exhausted = true;
                            return Step::Exhausted;
                        }
                        self.budget -= 1;
                        self.args.clear();
                        self.img.clear();
                        for &j in &self.idx {
                            let a = self.order[j];
                            self.args.push(a);
                            self.img.push(self.map[a] as usize);
                        }
                        let r = self.src.apply(op, &self.args);
                        let hr = self.tgt.apply(op, &self.img);
                        if !self.assign(r, hr) {
                            return Step::Conflict;
                        }
                    }
                    if !odometer_step(&mut self.idx, i + 1) {
                        break;
                    }
                }
            }
            i += 1;
        }
        Step::Ok
    }

    /// Fixes the constants and picks generators greedily in carrier order.
    /// Returns `false` if the constants already conflict.
    fn prepare(&mut self) -> bool {
        let tconst = self.tgt.constants();
        for (idx, (_, c)) in self.src.constants().into_iter().enumerate() {
            if !self.assign(c, tconst[idx].1) {
                return false;
            }
        }
        if !matches!(self.close(0), Step::Ok) {
            return false;
        }
        // greedy generating set, computed on a scratch copy of the closure
        let mut covered: Vec<bool> = self.map.iter().map(|&m| m != UNSET).collect();
        let mut elems: Vec<usize> = self.order.clone();
        for a in 0..self.src.size() {
            if covered[a] {
                continue;
            }
            self.gens.push(a);
            covered[a] = true;
            elems.push(a);
            let mut i = elems.len() - 1;
            while i < elems.len() {
                for &(op, k) in &self.ops {
                    let mut idx = vec![0usize; k];
                    loop {
                        if idx.contains(&i) {
                            let args: Vec<usize> = idx.iter().map(|&j| elems[j]).collect();
                            let r = self.src.apply(op, &args);
                            if !covered[r] {
                                covered[r] = true;
                                elems.push(r);
                            }
                        }
                        if !odometer_step(&mut idx, i + 1) {
                            break;
                        }
                    }
                }
                i += 1;
            }
        }
        true
    }

    /// Depth-first over generator images; `visit` returns `false` to stop.
    fn run(&mut self, level: usize, visit: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if level == self.gens.len() {
            return visit(&self.map);
        }
        let g = self.gens[level];
        for b in 0..self.tgt.size() {
            let mark = self.order.len();
            if self.assign(g, b) {
                match self.close(mark) {
                    Step::Ok => {
                        if !self.run(level + 1, visit) {
                            self.undo_to(mark);
                            return false;
                        }
                    }
                    Step::Conflict => {}
                    Step::Exhausted => {
                        self.undo_to(mark);
                        return false;
                    }
                }
            }
            self.undo_to(mark);
        }
        true
    }
}

fn to_hom(map: &[u32]) -> Homomorphism {
    Homomorphism::new(map.iter().map(|&b| b as usize).collect())
}

/// All homomorphisms from `a` to `b`, in lexicographic order of their maps.
pub fn homomorphisms(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Vec<Homomorphism>> {
    a.ensure_same_signature(b)?;
    let mut s = Searcher::new(a, b, false, u64::MAX);
    let mut out = Vec::new();
    if !s.prepare() {
        return Ok(out);
    }
    let mut overflow = false;
    s.run(0, &mut |m| {
        if out.len() >= MAX_HOMOMORPHISMS {
            overflow = true;
            return false;
        }
        out.push(to_hom(m));
        true
    });
    if overflow {
        return Err(Error::ResourceLimit(format!(
            "more than {MAX_HOMOMORPHISMS} homomorphisms"
        )));
    }
    Ok(out)
}

/// Lexicographically least embedding of `a` into `b`, if any.
pub fn find_embedding(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Option<Homomorphism>> {
    match find_embedding_within(a, b, u64::MAX)? {
        EmbeddingSearch::Found(h) => Ok(Some(h)),
        _ => Ok(None),
    }
}

/// Like [`find_embedding`], giving up after `budget` operation evaluations.
pub fn find_embedding_within(a: &FiniteAlgebra, b: &FiniteAlgebra, budget: u64) -> Result<EmbeddingSearch> {
    a.ensure_same_signature(b)?;
    if a.size() > b.size() {
        return Ok(EmbeddingSearch::NotFound);
    }
    let mut s = Searcher::new(a, b, true, budget);
    if !s.prepare() {
        return Ok(if s.exhausted {
            EmbeddingSearch::BudgetExhausted
        } else {
            EmbeddingSearch::NotFound
        });
    }
    let mut found = None;
    s.run(0, &mut |m| {
        found = Some(to_hom(m));
        false
    });
    Ok(match found {
        Some(h) => EmbeddingSearch::Found(h),
        None if s.exhausted => EmbeddingSearch::BudgetExhausted,
        None => EmbeddingSearch::NotFound,
    })
}
