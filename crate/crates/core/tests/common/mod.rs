//! Enumerators and helpers shared by the integration and acceptance tests.
#![allow(dead_code)]

use xcsp::model::{Atom, Quantifier, Sentence, Structure};

pub fn var(i: usize) -> String {
    format!("x{i}")
}

/// A graph sentence with variables `x0..` quantified in order.
pub fn edge_sentence(thresholds: &[usize], edges: &[(usize, usize)]) -> Sentence {
    let prefix = thresholds
        .iter()
        .enumerate()
        .map(|(i, &j)| Quantifier::exists(j, var(i)))
        .collect();
    let atoms = edges.iter().map(|&(u, v)| Atom::edge(&var(u), &var(v))).collect();
    Sentence::new(prefix, atoms).expect("well-formed sentence")
}

/// All sets of at most `max_atoms` undirected edges (loops included when
/// asked) over `q` vertices, each as a sorted list.
pub fn edge_sets(q: usize, max_atoms: usize, loops: bool) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..q)
        .flat_map(|u| (u..q).map(move |v| (u, v)))
        .filter(|&(u, v)| loops || u != v)
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        pairs: &[(usize, usize)],
        start: usize,
        left: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for i in start..pairs.len() {
            cur.push(pairs[i]);
            rec(pairs, i + 1, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(&pairs, 0, max_atoms, &mut cur, &mut out);
    out
}

/// All threshold sequences of length `q` drawn from `choices`.
pub fn threshold_sequences(q: usize, choices: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..q {
        out = out
            .into_iter()
            .flat_map(|p| {
                choices.iter().map(move |&j| {
                    let mut p = p.clone();
                    p.push(j);
                    p
                })
            })
            .collect();
    }
    out
}

/// Every graph sentence with 1 to `max_q` variables, at most `max_atoms`
/// atoms, and thresholds from `choices`.
pub fn graph_sentences(max_q: usize, max_atoms: usize, choices: &[usize]) -> Vec<Sentence> {
    let mut out = Vec::new();
    for q in 1..=max_q {
        let sets = edge_sets(q, max_atoms, true);
        for ts in threshold_sequences(q, choices) {
            for es in &sets {
                out.push(edge_sentence(&ts, es));
            }
        }
    }
    out
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
    Structure::graph(n, edges).expect("valid graph")
}
pub mod naive;
pub mod suites;
