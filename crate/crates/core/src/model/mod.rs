//! Core domain types: relational templates, counting-quantifier sentences,
//! instance graphs and the template families used throughout the crate.

mod canonical;
mod family;
mod graph;

pub use canonical::{
    canonical_database, canonical_form, canonical_query, is_isomorphic, CanonicalForm,
};
pub use family::{build_template, FragmentSpec, TemplateFamily};
pub use graph::{Graph, InstanceGraph};

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

/// A domain element. Domains are always `0..n`.
pub type Element = usize;

/// Name of the single binary relation used by every graph template.
pub const EDGE: &str = "E";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate relation `{0}`")]
    DuplicateRelation(String),
    #[error("relation `{0}` must have arity at least 1")]
    ZeroArity(String),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("relation `{name}` has arity {expected}, got a tuple of length {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("element {element} out of range for domain of size {domain}")]
    ElementOutOfRange { element: usize, domain: usize },
    #[error("domain must be nonempty")]
    EmptyDomain,
    #[error("quantifier threshold must be at least 1 (variable `{0}`)")]
    ZeroThreshold(String),
    #[error("variable `{0}` quantified twice")]
    DuplicateVariable(String),
    #[error("variable `{0}` occurs in an atom but is not quantified")]
    UnboundVariable(String),
    #[error("relation `{0}` used with inconsistent arities")]
    InconsistentArity(String),
    #[error("invalid template parameters: {0}")]
    InvalidFamily(String),
    #[error("instance graphs need a single binary relation, found {0}")]
    NotAGraphSentence(String),
    #[error("invalid fragment: {0}")]
    InvalidFragment(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
}

/// A finite relational signature. Relation names are unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    relations: Vec<RelationSymbol>,
}

impl Signature {
    pub fn new<I, S>(relations: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (name, arity) in relations {
            let name = name.into();
            if arity == 0 {
                return Err(ModelError::ZeroArity(name));
            }
            if !seen.insert(name.clone()) {
                return Err(ModelError::DuplicateRelation(name));
            }
            out.push(RelationSymbol { name, arity });
        }
        Ok(Signature { relations: out })
    }

    /// The signature `{E/2}` of graphs.
    pub fn graph() -> Self {
        Signature {
            relations: vec![RelationSymbol {
                name: EDGE.to_string(),
                arity: 2,
            }],
        }
    }

    pub fn relations(&self) -> &[RelationSymbol] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.relations[i].arity)
    }
}

/// A finite structure over a signature, with domain `0..domain_size` and
/// optionally named constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    signature: Signature,
    domain_size: usize,
    relations: Vec<BTreeSet<Vec<Element>>>,
    constants: BTreeMap<String, Element>,
}

impl Structure {
    /// Builds and validates a structure. `tuples[i]` belongs to the `i`th
    /// relation of the signature.
    pub fn new(
        signature: Signature,
        domain_size: usize,
        tuples: Vec<Vec<Vec<Element>>>,
        constants: BTreeMap<String, Element>,
    ) -> Result<Self, ModelError> {
        if domain_size == 0 {
            return Err(ModelError::EmptyDomain);
        }
        let mut relations = vec![BTreeSet::new(); signature.len()];
        if tuples.len() > signature.len() {
            return Err(ModelError::UnknownRelation(format!(
                "#{}",
                signature.len()
            )));
        }
        for (idx, rel_tuples) in tuples.into_iter().enumerate() {
            let sym = &signature.relations[idx];
            for t in rel_tuples {
                if t.len() != sym.arity {
                    return Err(ModelError::ArityMismatch {
                        name: sym.name.clone(),
                        expected: sym.arity,
                        found: t.len(),
                    });
                }
                if let Some(&e) = t.iter().find(|&&e| e >= domain_size) {
                    return Err(ModelError::ElementOutOfRange {
                        element: e,
                        domain: domain_size,
                    });
                }
                relations[idx].insert(t);
            }
        }
        for &e in constants.values() {
            if e >= domain_size {
                return Err(ModelError::ElementOutOfRange {
                    element: e,
                    domain: domain_size,
                });
            }
        }
        Ok(Structure {
            signature,
            domain_size,
            relations,
            constants,
        })
    }

    /// An undirected graph on `n` vertices over the signature `{E/2}`; both
    /// orientations of every edge are stored. `(v, v)` gives a loop.
    pub fn graph(n: usize, edges: &[(Element, Element)]) -> Result<Self, ModelError> {
        let mut tuples = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            tuples.push(vec![u, v]);
            tuples.push(vec![v, u]);
        }
        Structure::new(Signature::graph(), n, vec![tuples], BTreeMap::new())
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn tuples(&self, relation: usize) -> &BTreeSet<Vec<Element>> {
        &self.relations[relation]
    }

    pub fn relation(&self, name: &str) -> Option<&BTreeSet<Vec<Element>>> {
        self.signature.index_of(name).map(|i| &self.relations[i])
    }

    pub fn contains(&self, name: &str, tuple: &[Element]) -> bool {
        self.relation(name).is_some_and(|r| r.contains(tuple))
    }

    pub fn constants(&self) -> &BTreeMap<String, Element> {
        &self.constants
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(BTreeSet::len).sum()
    }

    pub fn with_constants(
        mut self,
        constants: BTreeMap<String, Element>,
    ) -> Result<Self, ModelError> {
        for &e in constants.values() {
            if e >= self.domain_size {
                return Err(ModelError::ElementOutOfRange {
                    element: e,
                    domain: self.domain_size,
                });
            }
        }
        self.constants = constants;
        Ok(self)
    }

    /// Closes every binary relation under reversal.
    pub fn symmetrized(mut self) -> Self {
        for (idx, sym) in self.signature.relations.iter().enumerate() {
            if sym.arity == 2 {
                let reversed: Vec<Vec<Element>> = self.relations[idx]
                    .iter()
                    .map(|t| vec![t[1], t[0]])
                    .collect();
                self.relations[idx].extend(reversed);
            }
        }
        self
    }

    /// Adds a relation to the structure, e.g. a unary marker used in tests.
    pub fn with_relation(
        mut self,
        name: &str,
        arity: usize,
        tuples: impl IntoIterator<Item = Vec<Element>>,
    ) -> Result<Self, ModelError> {
        let mut rels: Vec<(String, usize)> = self
            .signature
            .relations
            .iter()
            .map(|r| (r.name.clone(), r.arity))
            .collect();
        rels.push((name.to_string(), arity));
        self.signature = Signature::new(rels)?;
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(ModelError::ArityMismatch {
                    name: name.to_string(),
                    expected: arity,
                    found: t.len(),
                });
            }
            if let Some(&e) = t.iter().find(|&&e| e >= self.domain_size) {
                return Err(ModelError::ElementOutOfRange {
                    element: e,
                    domain: self.domain_size,
                });
            }
            set.insert(t);
        }
        self.relations.push(set);
        Ok(self)
    }

    /// Returns the underlying undirected graph when the structure has a
    /// single symmetric binary relation.
    pub fn as_graph(&self) -> Option<Graph> {
        if self.signature.len() != 1 || self.signature.relations[0].arity != 2 {
            return None;
        }
        let rel = &self.relations[0];
        let mut g = Graph::new(self.domain_size);
        for t in rel {
            if !rel.contains(&vec![t[1], t[0]]) {
                return None;
            }
            g.add_edge(t[0], t[1]);
        }
        Some(g)
    }
}

/// A counting threshold `j` of `∃^{≥j}`. `All` is the universal quantifier,
/// resolved to the template's domain size at evaluation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Threshold {
    AtLeast(usize),
    All,
}

impl Threshold {
    pub fn resolve(self, domain_size: usize) -> usize {
        match self {
            Threshold::AtLeast(j) => j,
            Threshold::All => domain_size,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::AtLeast(j) => write!(f, "E{j}"),
            Threshold::All => write!(f, "A"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quantifier {
    pub threshold: Threshold,
    pub variable: String,
}

impl Quantifier {
    pub fn new(threshold: Threshold, variable: impl Into<String>) -> Self {
        Quantifier {
            threshold,
            variable: variable.into(),
        }
    }

    pub fn exists(j: usize, variable: impl Into<String>) -> Self {
        Quantifier::new(Threshold::AtLeast(j), variable)
    }

    pub fn forall(variable: impl Into<String>) -> Self {
        Quantifier::new(Threshold::All, variable)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub relation: String,
    pub args: Vec<String>,
}

impl Atom {
    pub fn new<S: Into<String>>(relation: &str, args: impl IntoIterator<Item = S>) -> Self {
        Atom {
            relation: relation.to_string(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    /// `E(u, v)`.
    pub fn edge(u: &str, v: &str) -> Self {
        Atom::new(EDGE, [u, v])
    }
}

/// A prenex sentence: a prefix of counting quantifiers over a conjunction of
/// positive atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sentence {
    prefix: Vec<Quantifier>,
    atoms: Vec<Atom>,
}

impl Sentence {
    pub fn new(prefix: Vec<Quantifier>, atoms: Vec<Atom>) -> Result<Self, ModelError> {
        let mut vars = HashSet::new();
        for q in &prefix {
            if q.threshold == Threshold::AtLeast(0) {
                return Err(ModelError::ZeroThreshold(q.variable.clone()));
            }
            if !vars.insert(q.variable.as_str()) {
                return Err(ModelError::DuplicateVariable(q.variable.clone()));
            }
        }
        let mut arities: BTreeMap<&str, usize> = BTreeMap::new();
        for a in &atoms {
            if a.args.is_empty() {
                return Err(ModelError::ZeroArity(a.relation.clone()));
            }
            match arities.insert(a.relation.as_str(), a.args.len()) {
                Some(k) if k != a.args.len() => {
                    return Err(ModelError::InconsistentArity(a.relation.clone()))
                }
                _ => {}
            }
            if let Some(v) = a.args.iter().find(|v| !vars.contains(v.as_str())) {
                return Err(ModelError::UnboundVariable(v.clone()));
            }
        }
        Ok(Sentence { prefix, atoms })
    }

    pub fn prefix(&self) -> &[Quantifier] {
        &self.prefix
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn variable_count(&self) -> usize {
        self.prefix.len()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.prefix.iter().position(|q| q.variable == name)
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.prefix.iter().map(|q| q.variable.as_str())
    }

    /// Thresholds in prefix order with `A` resolved against `domain_size`.
    pub fn resolved_thresholds(&self, domain_size: usize) -> Vec<usize> {
        self.prefix
            .iter()
            .map(|q| q.threshold.resolve(domain_size))
            .collect()
    }

    /// The set `X` of thresholds the sentence uses.
    pub fn threshold_set(&self, domain_size: usize) -> BTreeSet<usize> {
        self.resolved_thresholds(domain_size).into_iter().collect()
    }

    /// Relation symbols used by the atoms, in order of first use.
    pub fn used_relations(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        for a in &self.atoms {
            if !out.iter().any(|(n, _)| n == &a.relation) {
                out.push((a.relation.clone(), a.args.len()));
            }
        }
        out
    }

    /// Fails unless every atom names a relation of `sig` with matching arity.
    pub fn check_signature(&self, sig: &Signature) -> Result<(), ModelError> {
        for a in &self.atoms {
            match sig.arity_of(&a.relation) {
                None => return Err(ModelError::UnknownRelation(a.relation.clone())),
                Some(k) if k != a.args.len() => {
                    return Err(ModelError::ArityMismatch {
                        name: a.relation.clone(),
                        expected: k,
                        found: a.args.len(),
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_rejects_duplicates_and_zero_arity() {
        assert!(matches!(
            Signature::new([("E", 2), ("E", 1)]),
            Err(ModelError::DuplicateRelation(_))
        ));
        assert!(matches!(
            Signature::new([("U", 0)]),
            Err(ModelError::ZeroArity(_))
        ));
    }

    #[test]
    fn structure_validates_elements_and_arity() {
        assert!(matches!(
            Structure::graph(2, &[(0, 5)]),
            Err(ModelError::ElementOutOfRange { element: 5, .. })
        ));
        let bad = Structure::new(
            Signature::graph(),
            2,
            vec![vec![vec![0, 1, 1]]],
            BTreeMap::new(),
        );
        assert!(matches!(bad, Err(ModelError::ArityMismatch { .. })));
        let bad_const = Structure::graph(2, &[]).unwrap().with_constants(
            [("c".to_string(), 3)].into_iter().collect(),
        );
        assert!(bad_const.is_err());
    }

    #[test]
    fn sentence_invariants() {
        let dup = Sentence::new(
            vec![Quantifier::exists(1, "x"), Quantifier::exists(2, "x")],
            vec![],
        );
        assert!(matches!(dup, Err(ModelError::DuplicateVariable(_))));
        let unbound = Sentence::new(vec![Quantifier::exists(2, "x")], vec![Atom::edge("x", "y")]);
        assert!(matches!(unbound, Err(ModelError::UnboundVariable(v)) if v == "y"));
        let zero = Sentence::new(vec![Quantifier::exists(0, "x")], vec![]);
        assert!(matches!(zero, Err(ModelError::ZeroThreshold(_))));
        let mixed = Sentence::new(
            vec![Quantifier::exists(1, "x")],
            vec![Atom::new("R", ["x"]), Atom::new("R", ["x", "x"])],
        );
        assert!(matches!(mixed, Err(ModelError::InconsistentArity(_))));
    }

    #[test]
    fn universal_threshold_resolves_against_domain() {
        let s = Sentence::new(
            vec![Quantifier::forall("x"), Quantifier::exists(2, "y")],
            vec![Atom::edge("x", "y")],
        )
        .unwrap();
        assert_eq!(s.resolved_thresholds(5), vec![5, 2]);
        assert_eq!(s.threshold_set(2), BTreeSet::from([2]));
    }

    #[test]
    fn check_signature_reports_mismatch() {
        let s = Sentence::new(vec![Quantifier::exists(1, "x")], vec![Atom::new("E", ["x"])])
            .unwrap();
        assert!(s.check_signature(&Signature::graph()).is_err());
        let t = Sentence::new(vec![Quantifier::exists(1, "x")], vec![Atom::new("F", ["x", "x"])])
            .unwrap();
        assert!(matches!(
            t.check_signature(&Signature::graph()),
            Err(ModelError::UnknownRelation(_))
        ));
    }

    #[test]
    fn as_graph_requires_symmetry() {
        let directed = Structure::new(
            Signature::graph(),
            2,
            vec![vec![vec![0, 1]]],
            BTreeMap::new(),
        )
        .unwrap();
        assert!(directed.as_graph().is_none());
        assert!(directed.symmetrized().as_graph().is_some());
    }
}
