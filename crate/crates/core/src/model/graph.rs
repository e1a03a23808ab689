use std::collections::{BTreeSet, VecDeque};

use super::{ModelError, Sentence, Threshold};

/// A finite undirected graph with loops recorded separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
    loops: Vec<bool>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
            loops: vec![false; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            self.loops[u] = true;
        } else {
            self.adj[u].insert(v);
            self.adj[v].insert(u);
        }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbours(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == v {
            self.loops[u]
        } else {
            self.adj[u].contains(&v)
        }
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.loops[v]
    }

    pub fn has_loops(&self) -> bool {
        self.loops.iter().any(|&l| l)
    }

    /// Proper edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb.range(u + 1..) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Component index of every vertex.
    pub fn component_ids(&self) -> Vec<usize> {
        let mut ids = vec![0; self.order()];
        for (i, comp) in self.components().iter().enumerate() {
            for &v in comp {
                ids[v] = i;
            }
        }
        ids
    }

    /// A proper 2-colouring (the smallest vertex of every component gets
    /// colour 0), or `None` if the graph has a loop or an odd cycle.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        if self.has_loops() {
            return None;
        }
        let n = self.order();
        let mut colour = vec![u8::MAX; n];
        for s in 0..n {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if colour[v] == u8::MAX {
                        colour[v] = 1 - colour[u];
                        queue.push_back(v);
                    } else if colour[v] == colour[u] {
                        return None;
                    }
                }
            }
        }
        Some(colour)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    pub fn is_forest(&self) -> bool {
        !self.has_loops() && self.edge_count() + self.components().len() == self.order()
    }

    /// BFS distances from `s`; `None` for unreachable vertices.
    pub fn distances_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.order()];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Largest finite distance between two vertices.
    pub fn diameter(&self) -> usize {
        (0..self.order())
            .flat_map(|s| self.distances_from(s).into_iter().flatten())
            .max()
            .unwrap_or(0)
    }

    /// Length of a shortest cycle (loops count as length 1), `None` if acyclic.
    pub fn girth(&self) -> Option<usize> {
        if self.has_loops() {
            return Some(1);
        }
        let n = self.order();
        let mut best: Option<usize> = None;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        let len = dist[u] + dist[v] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Whether some four vertices induce (not necessarily induced) a 4-cycle.
    pub fn contains_c4(&self) -> bool {
        let n = self.order();
        for u in 0..n {
            for v in u + 1..n {
                if self.adj[u].intersection(&self.adj[v]).nth(1).is_some() {
                    return true;
                }
            }
        }
        false
    }

    /// Larger side of the bipartition, maximised over components.
    pub fn largest_side(&self) -> Option<usize> {
        let colour = self.bipartition()?;
        let mut best = 0;
        for comp in self.components() {
            let zeros = comp.iter().filter(|&&v| colour[v] == 0).count();
            best = best.max(zeros).max(comp.len() - zeros);
        }
        Some(best)
    }

    /// `(k, l)` with `k <= l` if the graph is `K_{k,l}`.
    pub fn complete_bipartite_sides(&self) -> Option<(usize, usize)> {
        if self.order() < 2 || self.components().len() != 1 {
            return None;
        }
        let colour = self.bipartition()?;
        let k = colour.iter().filter(|&&c| c == 0).count();
        let l = self.order() - k;
        if self.edge_count() != k * l {
            return None;
        }
        Some((k.min(l), k.max(l)))
    }

    pub fn is_complete(&self) -> bool {
        !self.has_loops() && self.edge_count() * 2 == self.order() * (self.order() - 1)
    }

    /// Whether the graph is a single irreflexive cycle through all vertices.
    pub fn is_cycle(&self) -> bool {
        self.order() >= 3
            && !self.has_loops()
            && self.components().len() == 1
            && (0..self.order()).all(|v| self.degree(v) == 2)
    }

    /// Whether the graph is a path through all its vertices.
    pub fn is_path(&self) -> bool {
        let n = self.order();
        if n == 0 || self.has_loops() || self.components().len() != 1 {
            return false;
        }
        if n == 1 {
            return true;
        }
        self.edge_count() == n - 1 && (0..n).all(|v| self.degree(v) <= 2)
    }
}

/// The graph `D_ψ` of a sentence over a single binary relation, with its
/// vertices in quantifier order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceGraph {
    vertices: Vec<String>,
    thresholds: Vec<Threshold>,
    graph: Graph,
}

impl InstanceGraph {
    pub fn from_sentence(s: &Sentence) -> Result<Self, ModelError> {
        let rels = s.used_relations();
        if rels.len() > 1 {
            return Err(ModelError::NotAGraphSentence(format!(
                "{} relations",
                rels.len()
            )));
        }
        if let Some((name, arity)) = rels.first() {
            if *arity != 2 {
                return Err(ModelError::NotAGraphSentence(format!(
                    "`{name}` of arity {arity}"
                )));
            }
        }
        let mut graph = Graph::new(s.variable_count());
        for a in s.atoms() {
            let u = s.variable_index(&a.args[0]).expect("validated sentence");
            let v = s.variable_index(&a.args[1]).expect("validated sentence");
            graph.add_edge(u, v);
        }
        Ok(InstanceGraph {
            vertices: s.variables().map(str::to_string).collect(),
            thresholds: s.prefix().iter().map(|q| q.threshold).collect(),
            graph,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn threshold(&self, v: usize) -> Threshold {
        self.thresholds[v]
    }

    pub fn resolved_threshold(&self, v: usize, domain_size: usize) -> usize {
        self.thresholds[v].resolve(domain_size)
    }

    pub fn has_loops(&self) -> bool {
        self.graph.has_loops()
    }

    /// Earlier-quantified neighbours of `v`, in quantifier order.
    pub fn predecessors(&self, v: usize) -> Vec<usize> {
        self.graph.neighbours(v).range(..v).copied().collect()
    }

    /// The quantifier-first vertex of `v`'s component.
    pub fn component_first(&self) -> Vec<usize> {
        let mut first = vec![0; self.len()];
        for comp in self.graph.components() {
            for &v in &comp {
                first[v] = comp[0];
            }
        }
        first
    }
}
