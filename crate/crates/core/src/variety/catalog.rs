//! Built-in varieties.

use super::{construct_bn_prime, ExactnessRule, VarietySpec};
use crate::error::{Error, Result};
use crate::finalg::FiniteAlgebra;
use crate::term::Signature;

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &["bool", "dl", "bdl", "stone", "b2", "b3", "kleene", "demorgan", "idemsg"];

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

pub fn lattice_signature() -> Signature {
    Signature::new([("meet", 2), ("join", 2)]).unwrap()
}

pub fn bounded_lattice_signature() -> Signature {
    Signature::new([("meet", 2), ("join", 2), ("bot", 0), ("top", 0)]).unwrap()
}

/// Signature shared by Boolean, Kleene and De Morgan algebras.
pub fn negation_signature() -> Signature {
    Signature::new([("meet", 2), ("join", 2), ("neg", 1), ("bot", 0), ("top", 0)]).unwrap()
}

/// Lattice operations on a chain `0 < 1 < .. < n-1` plus `extra` for the remaining symbols.
fn chain_with(sig: Signature, n: usize, extra: impl Fn(usize, &[usize]) -> usize) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(sig, n, |op, a| match op {
        0 => a[0].min(a[1]),
        1 => a[0].max(a[1]),
        _ => extra(op, a),
    })
    .unwrap()
}

pub fn two_element_lattice() -> FiniteAlgebra {
    chain_with(lattice_signature(), 2, |_, _| unreachable!())
        .with_names(names(&["0", "1"]))
        .unwrap()
}

pub fn two_element_bounded_lattice() -> FiniteAlgebra {
    chain_with(bounded_lattice_signature(), 2, |op, _| if op == 2 { 0 } else { 1 })
        .with_names(names(&["0", "1"]))
        .unwrap()
}

pub fn two_element_boolean_algebra() -> FiniteAlgebra {
    chain_with(negation_signature(), 2, |op, a| match op {
        2 => 1 - a[0],
        3 => 0,
        _ => 1,
    })
    .with_names(names(&["0", "1"]))
    .unwrap()
}

/// The chain `0 < 1/2 < 1` with `neg` reversing it.
pub fn three_element_kleene_algebra() -> FiniteAlgebra {
    chain_with(negation_signature(), 3, |op, a| match op {
        2 => 2 - a[0],
        3 => 0,
        _ => 2,
    })
    .with_names(names(&["0", "1/2", "1"]))
    .unwrap()
}

/// The four-element Boolean lattice `0 < a, b < 1` with `neg` fixing `a`
/// and `b` and swapping the bounds. Elements are bitmasks: `a = 01`, `b = 10`.
pub fn four_element_de_morgan_algebra() -> FiniteAlgebra {
    FiniteAlgebra::from_fn(negation_signature(), 4, |op, a| match op {
        0 => a[0] & a[1],
        1 => a[0] | a[1],
        2 => match a[0] {
            0 => 3,
            3 => 0,
            x => x,
        },
        3 => 0,
        _ => 3,
    })
    .unwrap()
    .with_names(names(&["0", "a", "b", "1"]))
    .unwrap()
}

/// Looks up a built-in variety by name.
pub fn builtin(name: &str) -> Result<VarietySpec> {
    let bounded = |d| ExactnessRule::BoundedSearch { default_bound: Some(d) };
    match name {
        "bool" => VarietySpec::new(name, vec![two_element_boolean_algebra()], bounded(3)),
        "dl" => VarietySpec::new(name, vec![two_element_lattice()], ExactnessRule::AllFpExact),
        "bdl" => VarietySpec::new(name, vec![two_element_bounded_lattice()], bounded(3)),
        "stone" => VarietySpec::new(name, vec![construct_bn_prime(1)?], ExactnessRule::AllFpExact),
        "b2" => VarietySpec::new(name, vec![construct_bn_prime(2)?], bounded(2)),
        "b3" => VarietySpec::new(name, vec![construct_bn_prime(3)?], bounded(1)),
        "kleene" => VarietySpec::new(name, vec![three_element_kleene_algebra()], bounded(2)),
        "demorgan" => VarietySpec::new(name, vec![four_element_de_morgan_algebra()], bounded(2)),
        "idemsg" => Err(Error::Invalid(
            "idemsg has no built-in generators; supply generator tables for an idempotent semigroup variety".into(),
        )),
        _ => Err(Error::Invalid(format!(
            "unknown variety `{name}`; built-ins are {}",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}
