use std::collections::BTreeMap;

use itertools::Itertools;

use super::{Atom, Element, ModelError, Quantifier, Sentence, Signature, Structure};

/// The canonical database `D_ψ` of a sentence's matrix: one element per
/// variable (in prefix order), one tuple per atom. The signature lists the
/// relations in order of first use.
///
/// Fails only for a sentence with no variables, which has no domain.
pub fn canonical_database(s: &Sentence) -> Result<Structure, ModelError> {
    let sig = Signature::new(s.used_relations())?;
    let mut tuples = vec![Vec::new(); sig.len()];
    for a in s.atoms() {
        let idx = sig.index_of(&a.relation).expect("relation collected above");
        let t: Vec<Element> = a
            .args
            .iter()
            .map(|v| s.variable_index(v).expect("validated sentence"))
            .collect();
        tuples[idx].push(t);
    }
    Structure::new(sig, s.variable_count(), tuples, BTreeMap::new())
}

/// The canonical query `φ_B`: one `∃` variable `v<i>` per element and one
/// atom per tuple. Named constants are ignored.
pub fn canonical_query(b: &Structure) -> Sentence {
    let name = |e: Element| format!("v{e}");
    let prefix = (0..b.domain_size())
        .map(|e| Quantifier::exists(1, name(e)))
        .collect();
    let mut atoms = Vec::new();
    for (idx, sym) in b.signature().relations().iter().enumerate() {
        for t in b.tuples(idx) {
            atoms.push(Atom::new(&sym.name, t.iter().map(|&e| name(e))));
        }
    }
    Sentence::new(prefix, atoms).expect("canonical query is well formed")
}

/// An isomorphism-invariant representation of a structure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    relations: Vec<(String, usize, Vec<Vec<Element>>)>,
    domain_size: usize,
    constants: Vec<(String, Element)>,
}

/// Lexicographically least relabelling over all permutations of the domain.
/// Brute force; intended for structures of at most about eight elements.
pub fn canonical_form(b: &Structure) -> CanonicalForm {
    let n = b.domain_size();
    (0..n)
        .permutations(n)
        .map(|perm| relabel(b, &perm))
        .min()
        .unwrap_or_else(|| relabel(b, &[]))
}

fn relabel(b: &Structure, perm: &[Element]) -> CanonicalForm {
    let mut relations: Vec<_> = b
        .signature()
        .relations()
        .iter()
        .enumerate()
        .map(|(idx, sym)| {
            let mut ts: Vec<Vec<Element>> = b
                .tuples(idx)
                .iter()
                .map(|t| t.iter().map(|&e| perm[e]).collect())
                .collect();
            ts.sort_unstable();
            (sym.name.clone(), sym.arity, ts)
        })
        .collect();
    relations.sort();
    let constants = b
        .constants()
        .iter()
        .map(|(k, &v)| (k.clone(), perm[v]))
        .collect();
    CanonicalForm {
        relations,
        domain_size: b.domain_size(),
        constants,
    }
}

pub fn is_isomorphic(a: &Structure, b: &Structure) -> bool {
    a.domain_size() == b.domain_size()
        && a.tuple_count() == b.tuple_count()
        && canonical_form(a) == canonical_form(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_template, TemplateFamily};

    #[test]
    fn database_of_symmetric_edge() {
        let s = Sentence::new(
            vec![Quantifier::exists(1, "x"), Quantifier::exists(1, "y")],
            vec![Atom::edge("x", "y"), Atom::edge("y", "x")],
        )
        .unwrap();
        let d = canonical_database(&s).unwrap();
        assert_eq!(d.domain_size(), 2);
        assert!(d.contains("E", &[0, 1]) && d.contains("E", &[1, 0]));
        assert_eq!(d.tuple_count(), 2);
    }

    #[test]
    fn database_without_atoms_is_edgeless() {
        let s = Sentence::new(vec![Quantifier::exists(1, "x")], vec![]).unwrap();
        let d = canonical_database(&s).unwrap();
        assert_eq!(d.tuple_count(), 0);
    }

    #[test]
    fn query_of_triangle() {
        let k3 = build_template(&TemplateFamily::Clique(3)).unwrap();
        let q = canonical_query(&k3);
        assert_eq!(q.variable_count(), 3);
        assert_eq!(q.atoms().len(), 6);
        assert!(is_isomorphic(&canonical_database(&q).unwrap(), &k3));
    }

    #[test]
    fn isomorphism_distinguishes_paths_and_stars() {
        let p4 = build_template(&TemplateFamily::Path(4)).unwrap();
        let k13 = build_template(&TemplateFamily::Star(3)).unwrap();
        assert!(!is_isomorphic(&p4, &k13));
        let relabelled = Structure::graph(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        assert!(is_isomorphic(&p4, &relabelled));
    }
}
