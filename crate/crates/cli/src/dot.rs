//! Hasse diagrams in Graphviz DOT.

use std::fmt::Write;

/// A finite preorder ready for drawing. Node ids must be unique and stable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagram {
    pub title: String,
    pub nodes: Vec<Node>,
    /// Covering pairs `(lower, upper)` as node indices.
    pub covers: Vec<(usize, usize)>,
    /// Shown as a lone node when there is nothing else to draw.
    pub empty_note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub label: String,
}

/// Covering pairs of the preorder `le` on `0..n`. Equivalent elements are
/// drawn as separate nodes joined both ways.
pub fn hasse(n: usize, le: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let words = n.div_ceil(64);
    let mut up = vec![vec![0u64; words]; n];
    let mut down = vec![vec![0u64; words]; n];
    for (i, row) in up.iter_mut().enumerate() {
        for j in (0..n).filter(|&j| j != i && le(i, j)) {
            row[j / 64] |= 1 << (j % 64);
            down[j][i / 64] |= 1 << (i % 64);
        }
    }
    let strict = |i: usize, j: usize| up[i][j / 64] >> (j % 64) & 1 == 1 && up[j][i / 64] >> (i % 64) & 1 == 0;
    let mut covers = Vec::new();
    for (i, ui) in up.iter().enumerate() {
        for j in 0..n {
            if i == j || ui[j / 64] >> (j % 64) & 1 == 0 {
                continue;
            }
            if !strict(i, j) {
                covers.push((i, j));
                continue;
            }
            // something strictly between i and j
            let between = (0..words).any(|w| {
                let mut bits = ui[w] & down[j][w];
                while bits != 0 {
                    let k = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if strict(i, k) && strict(k, j) {
                        return true;
                    }
                }
                false
            });
            if !between {
                covers.push((i, j));
            }
        }
    }
    covers
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Renders `d` bottom-up.
pub fn emit_dot(d: &Diagram) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(&d.title)).unwrap();
    writeln!(out, "  rankdir=BT;").unwrap();
    writeln!(out, "  node [shape=box, fontname=\"monospace\"];").unwrap();
    if d.nodes.is_empty() {
        writeln!(out, "  empty [shape=plaintext, label={}];", quote(&d.empty_note)).unwrap();
    }
    for n in &d.nodes {
        writeln!(out, "  {} [label={}];", quote(&n.id), quote(&n.label)).unwrap();
    }
    for &(a, b) in &d.covers {
        writeln!(out, "  {} -> {};", quote(&d.nodes[a].id), quote(&d.nodes[b].id)).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_and_diamond() {
        assert_eq!(hasse(3, |a, b| a <= b), vec![(0, 1), (1, 2)]);
        // subsets of {0, 1}
        let c = hasse(4, |a, b| a & b == a);
        assert_eq!(c, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn equivalent_nodes() {
        assert_eq!(hasse(2, |_, _| true), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn empty_note() {
        let d = Diagram {
            title: "mu".into(),
            empty_note: "not unifiable".into(),
            ..Default::default()
        };
        let s = emit_dot(&d);
        assert!(s.contains("label=\"not unifiable\""));
        assert_eq!(s.matches("label=").count(), 1);
    }

    #[test]
    fn quoting() {
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
    }
}
