use std::collections::{BTreeMap, BTreeSet};

use super::{Element, Graph, ModelError, Signature, Structure};

/// The template families the classifier and generators know about.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TemplateFamily {
    /// `K_n`.
    Clique(usize),
    /// `C_n`, vertices `0..n` with `i ~ i±1 mod n`.
    Cycle(usize),
    /// `C_n` with a loop on every vertex.
    ReflexiveCycle(usize),
    /// `P_n` on `n` vertices `0 - 1 - ... - n-1`.
    Path(usize),
    /// `K_{1,n}` with centre 0 and leaves `1..=n`.
    Star(usize),
    /// `K_{k,l}` with sides `0..k` and `k..k+l`.
    CompleteBipartite(usize, usize),
    /// An acyclic loop-free graph on `n` vertices.
    ForestFromEdges(usize, Vec<(Element, Element)>),
    /// A loop-free graph on `n` vertices.
    GeneralGraph(usize, Vec<(Element, Element)>),
    /// `{0,1}` with the ternary not-all-equal relation `R`.
    NAEBoolean,
    /// `B_n` over unary `U = {0..j-1}` and ternary `R`, used by the
    /// single-quantifier hardness reduction.
    SingleQuantifierTemplate(usize, usize),
    /// `C_n` with two pendant vertices on every cycle vertex; cycle vertex
    /// `i` carries pendants `n+2i` and `n+2i+1`.
    HairyCycle(usize),
    /// `C_6` plus `j-3` vertices each adjacent to 1, 3 and 5.
    HjTemplate(usize),
}

/// A fragment of the logic: either a fixed threshold set `X` or the
/// bounded-prefix fragment `[2^m 1^*]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FragmentSpec {
    ThresholdSet(BTreeSet<usize>),
    BoundedPrefix(usize),
}

impl FragmentSpec {
    pub fn threshold_set<I: IntoIterator<Item = usize>>(xs: I) -> Result<Self, ModelError> {
        let set: BTreeSet<usize> = xs.into_iter().collect();
        if set.is_empty() {
            return Err(ModelError::InvalidFragment("empty threshold set".into()));
        }
        if set.contains(&0) {
            return Err(ModelError::InvalidFragment("threshold 0".into()));
        }
        Ok(FragmentSpec::ThresholdSet(set))
    }
}

fn invalid(msg: impl Into<String>) -> ModelError {
    ModelError::InvalidFamily(msg.into())
}

fn cycle_edges(n: usize) -> Vec<(Element, Element)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

fn check_simple(n: usize, edges: &[(Element, Element)]) -> Result<(), ModelError> {
    if n == 0 {
        return Err(ModelError::EmptyDomain);
    }
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(ModelError::ElementOutOfRange {
                element: u.max(v),
                domain: n,
            });
        }
        if u == v {
            return Err(invalid(format!("loop on vertex {u}")));
        }
    }
    Ok(())
}

/// Builds the structure for a family, following the vertex numbering
/// documented on each variant.
pub fn build_template(family: &TemplateFamily) -> Result<Structure, ModelError> {
    use TemplateFamily::*;
    match family {
        Clique(n) => {
            if *n == 0 {
                return Err(ModelError::EmptyDomain);
            }
            let edges: Vec<_> = (0..*n)
                .flat_map(|u| (u + 1..*n).map(move |v| (u, v)))
                .collect();
            Structure::graph(*n, &edges)
        }
        Cycle(n) => {
            if *n < 3 {
                return Err(invalid(format!("cycle needs n >= 3, got {n}")));
            }
            Structure::graph(*n, &cycle_edges(*n))
        }
        ReflexiveCycle(n) => {
            if *n < 3 {
                return Err(invalid(format!("cycle needs n >= 3, got {n}")));
            }
            let mut edges = cycle_edges(*n);
            edges.extend((0..*n).map(|i| (i, i)));
            Structure::graph(*n, &edges)
        }
        Path(n) => {
            if *n == 0 {
                return Err(ModelError::EmptyDomain);
            }
            let edges: Vec<_> = (1..*n).map(|i| (i - 1, i)).collect();
            Structure::graph(*n, &edges)
        }
        Star(n) => {
            if *n == 0 {
                return Err(invalid("star needs at least one leaf"));
            }
            let edges: Vec<_> = (1..=*n).map(|i| (0, i)).collect();
            Structure::graph(n + 1, &edges)
        }
        CompleteBipartite(k, l) => {
            if *k == 0 || *l == 0 {
                return Err(invalid("complete bipartite sides must be nonempty"));
            }
            let edges: Vec<_> = (0..*k)
                .flat_map(|u| (*k..k + l).map(move |v| (u, v)))
                .collect();
            Structure::graph(k + l, &edges)
        }
        ForestFromEdges(n, edges) => {
            check_simple(*n, edges)?;
            if !Graph::from_edges(*n, edges).is_forest() {
                return Err(invalid("forest edge list contains a cycle"));
            }
            Structure::graph(*n, edges)
        }
        GeneralGraph(n, edges) => {
            check_simple(*n, edges)?;
            Structure::graph(*n, edges)
        }
        NAEBoolean => {
            let tuples: Vec<Vec<Element>> = all_tuples(2, 3)
                .filter(|t| !(t[0] == t[1] && t[1] == t[2]))
                .collect();
            Structure::new(
                Signature::new([("R", 3)])?,
                2,
                vec![tuples],
                BTreeMap::new(),
            )
        }
        SingleQuantifierTemplate(n, j) => {
            if *n < 3 || *j < 2 || *j >= *n {
                return Err(invalid(format!("B_n needs n >= 3 and 1 < j < n, got n={n} j={j}")));
            }
            let bound = if *j <= n / 2 { n - 1 } else { n - j };
            let excluded = |t: &[Element]| {
                t.iter().all(|&a| a <= bound) && (t[0] % 2 == t[1] % 2 && t[1] % 2 == t[2] % 2)
            };
            let r: Vec<Vec<Element>> = all_tuples(*n, 3).filter(|t| !excluded(t)).collect();
            let u: Vec<Vec<Element>> = (0..*j).map(|a| vec![a]).collect();
            Structure::new(
                Signature::new([("U", 1), ("R", 3)])?,
                *n,
                vec![u, r],
                BTreeMap::new(),
            )
        }
        HairyCycle(n) => {
            if *n < 3 {
                return Err(invalid(format!("cycle needs n >= 3, got {n}")));
            }
            let mut edges = cycle_edges(*n);
            for i in 0..*n {
                edges.push((i, n + 2 * i));
                edges.push((i, n + 2 * i + 1));
            }
            Structure::graph(3 * n, &edges)
        }
        HjTemplate(j) => {
            if *j < 3 {
                return Err(invalid(format!("H_j needs j >= 3, got {j}")));
            }
            let mut edges = cycle_edges(6);
            for extra in 6..j + 3 {
                edges.extend([(extra, 1), (extra, 3), (extra, 5)]);
            }
            Structure::graph(j + 3, &edges)
        }
    }
}

/// All tuples in `{0..n}^k`, lexicographically.
pub(crate) fn all_tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<Element>> {
    let total = n.checked_pow(k as u32).unwrap_or(0);
    (0..total).map(move |mut code| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        t
    })
}
