use std::collections::{BTreeMap, BTreeSet};

use super::{precondition, FastpathError};
use crate::model::{canonical_database, Element, Graph, InstanceGraph, Sentence, Structure};
use crate::oracle::find_homomorphism;

/// Resolved thresholds of `s` over a domain of size `n`, rejecting any
/// threshold above `n`.
fn thresholds(s: &Sentence, n: usize) -> Result<Vec<usize>, FastpathError> {
    let ts = s.resolved_thresholds(n);
    if let Some((i, &j)) = ts.iter().enumerate().find(|(_, &j)| j > n) {
        return Err(precondition(format!(
            "threshold {j} on `{}` exceeds domain size {n}",
            s.prefix()[i].variable
        )));
    }
    Ok(ts)
}

fn instance_graph(s: &Sentence) -> Result<InstanceGraph, FastpathError> {
    if let Some((name, _)) = s.used_relations().into_iter().find(|(r, _)| r != crate::model::EDGE) {
        return Err(precondition(format!("relation `{name}` is not the edge relation")));
    }
    Ok(InstanceGraph::from_sentence(s)?)
}

fn template_graph(h: &Structure) -> Result<Graph, FastpathError> {
    let sig = h.signature();
    if sig.len() != 1 || sig.relations()[0].name != crate::model::EDGE {
        return Err(precondition("template is not a graph over `E`"));
    }
    h.as_graph()
        .ok_or_else(|| precondition("template relation is not symmetric"))
}

/// [`decide_all_universal`]: every quantifier is universal, so the sentence
/// holds iff each atom holds under every assignment of its variables.
pub fn decide_all_universal(b: &Structure, s: &Sentence) -> Result<bool, FastpathError> {
    let n = b.domain_size();
    if s.resolved_thresholds(n).iter().any(|&j| j != n) {
        return Err(precondition("every threshold must equal the domain size"));
    }
    s.check_signature(b.signature())?;
    for atom in s.atoms() {
        // Positions grouped by variable: a tuple is consistent with the
        // atom when it agrees on every group.
        let mut first_pos: Vec<usize> = Vec::with_capacity(atom.args.len());
        for (p, v) in atom.args.iter().enumerate() {
            first_pos.push(atom.args[..p].iter().position(|w| w == v).unwrap_or(p));
        }
        let distinct = first_pos.iter().enumerate().filter(|(p, &f)| *p == f).count();
        let rel = b.relation(&atom.relation).expect("signature checked");
        let consistent = rel
            .iter()
            .filter(|t| first_pos.iter().enumerate().all(|(p, &f)| t[p] == t[f]))
            .count();
        let needed = n.checked_pow(distinct as u32);
        if needed != Some(consistent) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `K_n` with every threshold above `n/2`: true iff no variable with
/// threshold `λ` has `n-λ+1` or more predecessors in `D_ψ`.
pub fn decide_clique_high_thresholds(n: usize, s: &Sentence) -> Result<bool, FastpathError> {
    if n == 0 {
        return Err(precondition("clique needs n >= 1"));
    }
    let ts = thresholds(s, n)?;
    if ts.iter().any(|&j| j <= n / 2) {
        return Err(precondition(format!("every threshold must exceed {}", n / 2)));
    }
    let ig = instance_graph(s)?;
    if ig.has_loops() {
        return Ok(false);
    }
    Ok((0..ig.len()).all(|v| ig.predecessors(v).len() < n - ts[v] + 1))
}

/// `C_n` in the tractable cases: `n = 4`, `1 ∉ X`, or `n` even with no
/// threshold in `2..=n/2`.
pub fn decide_cycle_tractable(n: usize, s: &Sentence) -> Result<bool, FastpathError> {
    if n < 3 {
        return Err(precondition("cycle needs n >= 3"));
    }
    let ts = thresholds(s, n)?;
    let ig = instance_graph(s)?;
    let has_one = ts.contains(&1);
    let low_middle = ts.iter().any(|&j| (2..=n / 2).contains(&j));
    if n == 4 {
        return Ok(high_first_then_bipartite(&ig, &ts, 2));
    }
    if !has_one {
        if ig.has_loops() {
            return Ok(false);
        }
        // Thresholds of 3 or more leave no room for a predecessor; a
        // threshold of 2 allows exactly one (two cycle vertices share at
        // most one neighbour when n != 4).
        return Ok((0..ig.len()).all(|v| {
            let preds = ig.predecessors(v).len();
            match ts[v] {
                1 => unreachable!("1 is not a threshold here"),
                2 => preds <= 1,
                _ => preds == 0,
            }
        }));
    }
    if n.is_multiple_of(2) && !low_middle {
        return Ok(high_first_then_bipartite(&ig, &ts, n / 2));
    }
    Err(precondition(format!(
        "thresholds {:?} on C_{n} are outside the tractable cases",
        s.threshold_set(n)
    )))
}

/// Every variable with threshold above `half` must open its component of
/// `D_ψ`; after that the instance is a homomorphism question to an even
/// cycle, i.e. bipartiteness.
fn high_first_then_bipartite(ig: &InstanceGraph, ts: &[usize], half: usize) -> bool {
    let first = ig.component_first();
    (0..ig.len()).all(|v| ts[v] <= half || first[v] == v) && ig.graph().is_bipartite()
}

/// Role of a variable after quotienting `K_{k,l}` by twins to `K_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum K2Role {
    Exists,
    Forall,
    /// Forced onto the larger side.
    Pinned,
}

/// QCSP over `K_2` with one named vertex: per component of `D_ψ`, the
/// component must be bipartite; pinned variables must share a colour and
/// exclude universals; a constant-free component admits at most one
/// universal, which must come first.
pub fn decide_k2_with_constant(g: &Graph, roles: &[K2Role]) -> bool {
    let Some(colour) = g.bipartition() else {
        return false;
    };
    g.components().into_iter().all(|comp| {
        let pinned: BTreeSet<u8> = comp
            .iter()
            .filter(|&&v| roles[v] == K2Role::Pinned)
            .map(|&v| colour[v])
            .collect();
        let universals: Vec<usize> = comp
            .iter()
            .copied()
            .filter(|&v| roles[v] == K2Role::Forall)
            .collect();
        if !pinned.is_empty() {
            pinned.len() == 1 && universals.is_empty()
        } else {
            universals.is_empty() || (universals.len() == 1 && universals[0] == comp[0])
        }
    })
}

/// `K_{k,l}`: thresholds up to the smaller side act as `∃`, thresholds above
/// the larger side act as `∀`, and thresholds in between force the larger
/// side.
pub fn decide_complete_bipartite(k: usize, l: usize, s: &Sentence) -> Result<bool, FastpathError> {
    if k == 0 || l == 0 {
        return Err(precondition("complete bipartite sides must be nonempty"));
    }
    let (lo, hi) = (k.min(l), k.max(l));
    let ts = thresholds(s, k + l)?;
    let ig = instance_graph(s)?;
    let roles: Vec<K2Role> = ts
        .iter()
        .map(|&j| {
            if j <= lo {
                K2Role::Exists
            } else if j > hi {
                K2Role::Forall
            } else {
                K2Role::Pinned
            }
        })
        .collect();
    Ok(decide_k2_with_constant(ig.graph(), &roles))
}

/// Homomorphism from `D_ψ` to `h` with the given variables pinned.
fn extends(h: &Structure, d: &Structure, pins: &[(usize, Element)]) -> Result<bool, FastpathError> {
    let from: BTreeMap<String, Element> = pins.iter().map(|&(v, _)| (format!("v{v}"), v)).collect();
    let to: BTreeMap<String, Element> = pins.iter().map(|&(v, b)| (format!("v{v}"), b)).collect();
    let d = d.clone().with_constants(from)?;
    let h = h.clone().with_constants(to)?;
    Ok(find_homomorphism(&d, &h)?.is_some())
}

/// The sub-database of `D_ψ` induced by one component, with vertices
/// renumbered in component order.
fn component_database(ig: &InstanceGraph, comp: &[usize]) -> Result<Structure, FastpathError> {
    let index: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    for &u in comp {
        for &v in ig.graph().neighbours(u) {
            if u <= v {
                edges.push((index[&u], index[&v]));
            }
        }
        if ig.graph().has_loop(u) {
            edges.push((index[&u], index[&u]));
        }
    }
    Ok(Structure::graph(comp.len(), &edges)?)
}

/// Bipartite `h` whose components all have larger side below `j`, with
/// thresholds in `{1, j}`.
pub fn decide_bipartite_small_partition(
    h: &Structure,
    j: usize,
    s: &Sentence,
) -> Result<bool, FastpathError> {
    let hg = template_graph(h)?;
    let side = hg
        .largest_side()
        .ok_or_else(|| precondition("template is not bipartite"))?;
    if side >= j {
        return Err(precondition(format!("a component has a side of size {side} >= {j}")));
    }
    let n = h.domain_size();
    let ts = thresholds(s, n)?;
    if ts.iter().any(|&t| t != 1 && t != j) {
        return Err(precondition(format!("thresholds must lie in {{1, {j}}}")));
    }
    let ig = instance_graph(s)?;
    if ig.has_loops() {
        return Ok(false);
    }
    let big = |v: usize| ts[v] == j && j != 1;
    for comp in ig.graph().components() {
        let bigs: Vec<usize> = comp.iter().copied().filter(|&v| big(v)).collect();
        // A non-trivial variable sees another `∃^{≥j}` or an earlier `∃`.
        if bigs.len() > 1 || bigs.iter().any(|&y| y != comp[0]) {
            return Ok(false);
        }
        let d = component_database(&ig, &comp)?;
        if bigs.is_empty() {
            if !extends(h, &d, &[])? {
                return Ok(false);
            }
        } else {
            let mut good = 0;
            for b in 0..n {
                if extends(h, &d, &[(0, b)])? {
                    good += 1;
                    if good >= j {
                        break;
                    }
                }
            }
            if good < j {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Bipartite `h` containing a 4-cycle, thresholds in `{1, 2}`.
pub fn decide_bipartite_with_c4(h: &Structure, s: &Sentence) -> Result<bool, FastpathError> {
    let hg = template_graph(h)?;
    if !hg.is_bipartite() {
        return Err(precondition("template is not bipartite"));
    }
    if !hg.contains_c4() {
        return Err(precondition("template contains no 4-cycle"));
    }
    let ts = thresholds(s, h.domain_size())?;
    if ts.iter().any(|&t| t > 2) {
        return Err(precondition("thresholds must lie in {1, 2}"));
    }
    let ig = instance_graph(s)?;
    Ok(ig.graph().is_bipartite())
}

/// Forest `h`, prefix of at most `m` leading `∃^{≥2}` followed by plain `∃`.
///
/// Recurses over the leading block: each `∃^{≥2}` needs two values under
/// which the rest succeeds, and a full assignment of the block is checked by
/// a pinned homomorphism search on `D_ψ`.
pub fn decide_forest_bounded_prefix(h: &Structure, m: usize, s: &Sentence) -> Result<bool, FastpathError> {
    let hg = template_graph(h)?;
    if !hg.is_forest() {
        return Err(precondition("template is not a forest"));
    }
    let n = h.domain_size();
    let ts = thresholds(s, n)?;
    let lead = ts.iter().take_while(|&&t| t == 2).count();
    if ts[lead..].iter().any(|&t| t != 1) {
        return Err(precondition("prefix is not of the form (E2)^k E*"));
    }
    if lead > m {
        return Err(precondition(format!("{lead} leading E2 quantifiers exceed m = {m}")));
    }
    let ig = instance_graph(s)?;
    if ig.has_loops() {
        return Ok(false);
    }
    if s.variable_count() == 0 {
        return Ok(true);
    }
    let d = canonical_database(s)?;
    let mut pins = Vec::with_capacity(lead);
    forest_block(h, &hg, &ig, &d, lead, &mut pins)
}

fn forest_block(
    h: &Structure,
    hg: &Graph,
    ig: &InstanceGraph,
    d: &Structure,
    lead: usize,
    pins: &mut Vec<(usize, Element)>,
) -> Result<bool, FastpathError> {
    let v = pins.len();
    if v == lead {
        return extends(h, d, pins);
    }
    let mut good = 0;
    for b in 0..h.domain_size() {
        let consistent = pins
            .iter()
            .all(|&(u, a)| !ig.graph().has_edge(u, v) || hg.has_edge(a, b));
        if !consistent {
            continue;
        }
        pins.push((v, b));
        let ok = forest_block(h, hg, ig, d, lead, pins)?;
        pins.pop();
        if ok {
            good += 1;
            if good == 2 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// `P_5` with thresholds in `{1, 3}`: `D_ψ` bipartite, any two `∃^{≥3}`
/// variables of a component at even distance at least 4, and no `∃`
/// variable adjacent to a later `∃^{≥3}`.
pub fn decide_path5_one_three(s: &Sentence) -> Result<bool, FastpathError> {
    let ts = thresholds(s, 5)?;
    if ts.iter().any(|&t| t != 1 && t != 3) {
        return Err(precondition("thresholds must lie in {1, 3}"));
    }
    let ig = instance_graph(s)?;
    let g = ig.graph();
    if !g.is_bipartite() {
        return Ok(false);
    }
    let threes: Vec<usize> = (0..ig.len()).filter(|&v| ts[v] == 3).collect();
    for (i, &y) in threes.iter().enumerate() {
        let dist = g.distances_from(y);
        for &z in &threes[i + 1..] {
            if let Some(d) = dist[z] {
                if d % 2 == 1 || d < 4 {
                    return Ok(false);
                }
            }
        }
        if ig.predecessors(y).iter().any(|&x| ts[x] == 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_template, TemplateFamily};
    use crate::oracle::evaluate;
    use crate::textio::parse_sentence;

    fn s(text: &str) -> Sentence {
        parse_sentence(text).unwrap()
    }

    fn t(f: TemplateFamily) -> Structure {
        build_template(&f).unwrap()
    }

    #[test]
    fn all_universal_examples() {
        let k2 = t(TemplateFamily::Clique(2));
        assert!(!decide_all_universal(&k2, &s("A x A y | E(x,y)")).unwrap());
        let c4r = t(TemplateFamily::ReflexiveCycle(4));
        assert!(decide_all_universal(&c4r, &s("A x | E(x,x)")).unwrap());
        assert!(decide_all_universal(&k2, &s("E x | E(x,x)")).is_err());
    }

    #[test]
    fn clique_examples() {
        assert!(decide_clique_high_thresholds(3, &s("E2 x E2 y | E(x,y)")).unwrap());
        let centre = s("E3 a E3 b E3 c E3 x | E(a,x) & E(b,x) & E(c,x)");
        assert!(!decide_clique_high_thresholds(5, &centre).unwrap());
        let reversed = s("E3 x E3 a E3 b E3 c | E(a,x) & E(b,x) & E(c,x)");
        assert!(decide_clique_high_thresholds(5, &reversed).unwrap());
        assert!(decide_clique_high_thresholds(5, &s("E3 x |")).unwrap());
        assert!(decide_clique_high_thresholds(5, &s("E2 x |")).is_err());
    }

    #[test]
    fn cycle_examples() {
        let tri = s("E x E y E z | E(x,y) & E(y,z) & E(z,x)");
        assert!(!decide_cycle_tractable(4, &tri).unwrap());
        // {1, 3} on C_6 lies outside the tractable cases even though the
        // no-predecessor argument already refutes this instance.
        let c6 = t(TemplateFamily::Cycle(6));
        let early = s("E1 x E3 y | E(x,y)");
        assert!(decide_cycle_tractable(6, &early).is_err());
        assert!(!evaluate(&c6, &early).unwrap());
        assert!(!decide_cycle_tractable(6, &s("E2 x E3 y | E(x,y)")).unwrap());
        assert!(decide_cycle_tractable(6, &s("E3 x E2 y | E(x,y)")).unwrap());
        assert!(decide_cycle_tractable(5, &s("E1 x E2 y | E(x,y)")).is_err());
    }

    #[test]
    fn complete_bipartite_examples() {
        assert!(decide_complete_bipartite(2, 3, &s("E2 x E2 y | E(x,y)")).unwrap());
        assert!(!decide_complete_bipartite(2, 3, &s("E1 x E5 y | E(x,y)")).unwrap());
        let path = s("E x E y E z | E(x,y) & E(y,z)");
        assert!(decide_complete_bipartite(1, 1, &path).unwrap());
        let k23 = t(TemplateFamily::CompleteBipartite(2, 3));
        for text in ["E3 x E3 y | E(x,y)", "E3 x E1 y E3 z | E(x,y) & E(y,z)", "A x E3 y | E(x,y)"] {
            let sent = s(text);
            assert_eq!(
                decide_complete_bipartite(2, 3, &sent).unwrap(),
                evaluate(&k23, &sent).unwrap(),
                "{text}"
            );
        }
    }

    #[test]
    fn small_partition_examples() {
        let p3 = t(TemplateFamily::Path(3));
        assert!(!decide_bipartite_small_partition(&p3, 3, &s("E3 x E3 y | E(x,y)")).unwrap());
        assert!(decide_bipartite_small_partition(&p3, 3, &s("E3 x |")).unwrap());
        // Every vertex of P_3 has a neighbour.
        assert!(decide_bipartite_small_partition(&p3, 3, &s("E3 x E y | E(x,y)")).unwrap());
        let p3k1 = Structure::graph(4, &[(0, 1), (1, 2)]).unwrap();
        let sent = s("E3 x E y | E(x,y)");
        assert_eq!(
            decide_bipartite_small_partition(&p3k1, 3, &sent).unwrap(),
            evaluate(&p3k1, &sent).unwrap()
        );
    }

    #[test]
    fn c4_examples() {
        let c4 = t(TemplateFamily::Cycle(4));
        let tri = s("E2 x E2 y E2 z | E(x,y) & E(y,z) & E(z,x)");
        assert!(!decide_bipartite_with_c4(&c4, &tri).unwrap());
        let k22 = t(TemplateFamily::CompleteBipartite(2, 2));
        assert!(decide_bipartite_with_c4(&k22, &s("E2 x E2 y | E(x,y)")).unwrap());
        let p4 = t(TemplateFamily::Path(4));
        assert!(decide_bipartite_with_c4(&p4, &s("E x |")).is_err());
    }

    #[test]
    fn forest_examples() {
        let sent = s("E2 x E1 y | E(x,y)");
        assert!(decide_forest_bounded_prefix(&t(TemplateFamily::Path(3)), 1, &sent).unwrap());
        assert!(decide_forest_bounded_prefix(&t(TemplateFamily::Path(2)), 1, &sent).unwrap());
        let two = Structure::graph(2, &[]).unwrap();
        assert!(!decide_forest_bounded_prefix(&two, 1, &sent).unwrap());
        assert!(decide_forest_bounded_prefix(&t(TemplateFamily::Path(3)), 0, &sent).is_err());
    }

    #[test]
    fn path5_examples() {
        assert!(!decide_path5_one_three(&s("E3 x E3 y | E(x,y)")).unwrap());
        assert!(decide_path5_one_three(&s("E3 x |")).unwrap());
        assert!(decide_path5_one_three(&s("E2 x |")).is_err());
    }
}
