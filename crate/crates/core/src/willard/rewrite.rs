//! Rewrite rules of the Willard variety, with traced normalization.

use serde::Serialize;

use crate::term::Term;

pub const APP: &str = "app";
pub const ZERO: &str = "c0";
pub const ONE: &str = "c1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `0x -> 0`
    ZeroLeft,
    /// `x0 -> 0`
    ZeroRight,
    /// `1x -> 0`
    OneLeft,
    /// `x(yz) -> 0`
    RightProduct,
    /// `x y z1 .. zn y -> x y z1 .. zn 1`
    Repeat,
}

impl Rule {
    pub const ALL: [Rule; 5] = [
        Rule::ZeroLeft,
        Rule::ZeroRight,
        Rule::OneLeft,
        Rule::RightProduct,
        Rule::Repeat,
    ];

    /// The identity the rule orients.
    pub fn identity(self) -> &'static str {
        match self {
            Rule::ZeroLeft => "0 x = 0",
            Rule::ZeroRight => "x 0 = 0",
            Rule::OneLeft => "1 x = 0",
            Rule::RightProduct => "x (y z) = 0",
            Rule::Repeat => "x y z1 .. zn y = x y z1 .. zn 1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Redex {
    /// Child indices from the root.
    pub position: Vec<usize>,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: Rule,
    pub position: Vec<usize>,
    pub redex: Term,
    pub contractum: Term,
}

pub fn zero() -> Term {
    Term::constant(ZERO)
}

pub fn one() -> Term {
    Term::constant(ONE)
}

pub fn mul(a: Term, b: Term) -> Term {
    Term::binary(APP, a, b)
}

fn is_const(t: &Term, c: &str) -> bool {
    matches!(t, Term::App(s, args) if s == c && args.is_empty())
}

pub(crate) fn as_product(t: &Term) -> Option<(&Term, &Term)> {
    match t {
        Term::App(s, args) if s == APP && args.len() == 2 => Some((&args[0], &args[1])),
        _ => None,
    }
}

/// The left spine of `t`: `[h, t1, .., tk]` for `t = h t1 .. tk`.
pub(crate) fn spine(mut t: &Term) -> Vec<&Term> {
    let mut out = Vec::new();
    while let Some((l, r)) = as_product(t) {
        out.push(r);
        t = l;
    }
    out.push(t);
    out.reverse();
    out
}

/// The first rule applicable at the root of `t` and its contractum.
pub fn rule_at(t: &Term) -> Option<(Rule, Term)> {
    let (a, b) = as_product(t)?;
    if is_const(a, ZERO) {
        Some((Rule::ZeroLeft, zero()))
    } else if is_const(b, ZERO) {
        Some((Rule::ZeroRight, zero()))
    } else if is_const(a, ONE) {
        Some((Rule::OneLeft, zero()))
    } else if as_product(b).is_some() {
        Some((Rule::RightProduct, zero()))
    } else if !is_const(b, ONE) && spine(a)[1..].contains(&b) {
        Some((Rule::Repeat, mul(a.clone(), one())))
    } else {
        None
    }
}

/// All redexes in post-order, so the first is the leftmost-innermost one.
pub fn redexes(t: &Term) -> Vec<Redex> {
    fn go(t: &Term, pos: &mut Vec<usize>, out: &mut Vec<Redex>) {
        if let Term::App(_, args) = t {
            for (i, a) in args.iter().enumerate() {
                pos.push(i);
                go(a, pos, out);
                pos.pop();
            }
        }
        if let Some((rule, _)) = rule_at(t) {
            out.push(Redex {
                position: pos.clone(),
                rule,
            });
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

pub fn subterm_at<'t>(t: &'t Term, pos: &[usize]) -> Option<&'t Term> {
    pos.iter().try_fold(t, |t, &i| match t {
        Term::App(_, args) => args.get(i),
        Term::Var(_) => None,
    })
}

fn replace_at(t: &Term, pos: &[usize], new: Term) -> Term {
    match (pos.split_first(), t) {
        (None, _) => new,
        (Some((&i, rest)), Term::App(s, args)) => {
            let mut args = args.clone();
            args[i] = replace_at(&args[i], rest, new);
            Term::App(s.clone(), args)
        }
        (Some(_), Term::Var(_)) => panic!("position runs past a variable"),
    }
}

/// Contracts the redex at `pos`.
pub fn step(t: &Term, pos: &[usize]) -> Option<(Term, RewriteStep)> {
    let redex = subterm_at(t, pos)?;
    let (rule, contractum) = rule_at(redex)?;
    let next = replace_at(t, pos, contractum.clone());
    Some((
        next,
        RewriteStep {
            rule,
            position: pos.to_vec(),
            redex: redex.clone(),
            contractum,
        },
    ))
}

/// Leftmost-innermost normalization.
pub fn normalize(t: &Term) -> (Term, Vec<RewriteStep>) {
    normalize_with(t, &mut |_| 0)
}

/// Normalization contracting, at each step, the redex `choose(n)` (mod `n`)
/// among the `n` current redexes in post-order.
pub fn normalize_with(t: &Term, choose: &mut impl FnMut(usize) -> usize) -> (Term, Vec<RewriteStep>) {
    let mut cur = t.clone();
    let mut trace = Vec::new();
    loop {
        let rs = redexes(&cur);
        if rs.is_empty() {
            return (cur, trace);
        }
        let r = &rs[choose(rs.len()) % rs.len()];
        let (next, s) = step(&cur, &r.position).expect("redex position is valid");
        trace.push(s);
        cur = next;
    }
}

/// Whether `redex -> contractum` is an instance of `rule`, checked from the
/// rule's identity rather than through [`rule_at`].
pub fn is_instance(rule: Rule, redex: &Term, contractum: &Term) -> bool {
    let Some((a, b)) = as_product(redex) else {
        return false;
    };
    let to_zero = is_const(contractum, ZERO);
    match rule {
        Rule::ZeroLeft => to_zero && is_const(a, ZERO),
        Rule::ZeroRight => to_zero && is_const(b, ZERO),
        Rule::OneLeft => to_zero && is_const(a, ONE),
        Rule::RightProduct => to_zero && as_product(b).is_some(),
        Rule::Repeat => {
            // redex = x y z1 .. zn y with x = the prefix before some earlier y
            let Some((a2, b2)) = as_product(contractum) else {
                return false;
            };
            if a2 != a || !is_const(b2, ONE) {
                return false;
            }
            let mut prefix = a;
            while let Some((x, y)) = as_product(prefix) {
                if y == b {
                    return true;
                }
                prefix = x;
            }
            false
        }
    }
}

/// Replays `trace` from `start`, checking each step is a rule instance at
/// its recorded position, and that it ends at `end`.
pub fn audit(start: &Term, trace: &[RewriteStep], end: &Term) -> bool {
    let mut cur = start.clone();
    for s in trace {
        if subterm_at(&cur, &s.position) != Some(&s.redex) || !is_instance(s.rule, &s.redex, &s.contractum) {
            return false;
        }
        cur = replace_at(&cur, &s.position, s.contractum.clone());
    }
    &cur == end
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn rules_at_root() {
        assert_eq!(rule_at(&mul(zero(), v("x"))).unwrap().0, Rule::ZeroLeft);
        assert_eq!(rule_at(&mul(v("x"), zero())).unwrap().0, Rule::ZeroRight);
        assert_eq!(rule_at(&mul(one(), v("x"))).unwrap().0, Rule::OneLeft);
        assert_eq!(rule_at(&mul(v("x"), mul(v("y"), v("z")))).unwrap().0, Rule::RightProduct);
        let t = mul(mul(mul(v("x"), v("y")), v("z")), v("y"));
        assert_eq!(rule_at(&t).unwrap(), (Rule::Repeat, mul(mul(mul(v("x"), v("y")), v("z")), one())));
        // the head is not a tail entry
        assert!(rule_at(&mul(v("x"), v("x"))).is_none());
        assert!(rule_at(&mul(mul(v("x"), one()), one())).is_none());
    }

    #[test]
    fn innermost_order_and_audit() {
        let t = mul(mul(mul(v("x"), v("y")), v("y")), v("y"));
        let (n, trace) = normalize(&t);
        assert_eq!(trace.len(), 2);
        assert_eq!(trace[0].position, vec![0]);
        assert_eq!(n, mul(mul(mul(v("x"), v("y")), one()), one()));
        assert!(audit(&t, &trace, &n));
        let mut bad = trace.clone();
        bad[0].rule = Rule::ZeroLeft;
        assert!(!audit(&t, &bad, &n));
    }

    #[test]
    fn instance_check_rejects_non_instances() {
        let w = mul(v("x"), v("y"));
        assert!(!is_instance(Rule::Repeat, &mul(w.clone(), v("z")), &mul(w.clone(), one())));
        assert!(!is_instance(Rule::Repeat, &mul(v("x"), v("x")), &mul(v("x"), one())));
        assert!(!is_instance(Rule::ZeroLeft, &mul(v("x"), zero()), &zero()));
    }
}
