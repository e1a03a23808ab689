use std::fmt;

use super::deciders::*;
use super::FastpathError;
use crate::model::{Sentence, Structure, EDGE};

/// Whether the complete-bipartite decider may answer in `auto` mode. It is
/// enabled because its exhaustive oracle comparison on `K_{2,3}` and
/// `K_{1,3}` passes; clearing it routes those instances to the oracle.
pub const COMPLETE_BIPARTITE_GATE: bool = true;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decider {
    AllUniversal,
    CliqueHighThresholds,
    CycleTractable,
    CompleteBipartite,
    BipartiteWithC4,
    Path5OneThree,
    BipartiteSmallPartition,
    ForestBoundedPrefix,
}

impl Decider {
    pub fn name(self) -> &'static str {
        match self {
            Decider::AllUniversal => "all-universal",
            Decider::CliqueHighThresholds => "clique-high-thresholds",
            Decider::CycleTractable => "cycle-tractable",
            Decider::CompleteBipartite => "complete-bipartite",
            Decider::BipartiteWithC4 => "bipartite-with-c4",
            Decider::Path5OneThree => "path5-one-three",
            Decider::BipartiteSmallPartition => "bipartite-small-partition",
            Decider::ForestBoundedPrefix => "forest-bounded-prefix",
        }
    }

    /// The result whose precondition the decider implements.
    pub fn citation(self) -> &'static str {
        match self {
            Decider::AllUniversal => "Sec 3 item 2",
            Decider::CliqueHighThresholds => "Prop easy-cliques",
            Decider::CycleTractable => "Prop cycles-i",
            Decider::CompleteBipartite => "Prop complete-bipartite",
            Decider::BipartiteWithC4 => "Prop cont-c4",
            Decider::Path5OneThree => "Prop 13P5",
            Decider::BipartiteSmallPartition => "Prop bipartition",
            Decider::ForestBoundedPrefix => "Prop 12forest",
        }
    }
}

impl fmt::Display for Decider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name(), self.citation())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dispatch {
    pub decider: Decider,
    pub verdict: bool,
}

/// Runs the first decider whose precondition matches `(b, s)`, or returns
/// `None` when the instance needs the oracle.
pub fn dispatch(b: &Structure, s: &Sentence) -> Result<Option<Dispatch>, FastpathError> {
    let Some(decider) = matching_decider(b, s) else {
        return Ok(None);
    };
    let n = b.domain_size();
    let verdict = match decider {
        Decider::AllUniversal => decide_all_universal(b, s)?,
        Decider::CliqueHighThresholds => decide_clique_high_thresholds(n, s)?,
        Decider::CycleTractable => decide_cycle_tractable(n, s)?,
        Decider::CompleteBipartite => {
            let g = b.as_graph().expect("matched a graph");
            let (k, l) = g.complete_bipartite_sides().expect("matched K_{k,l}");
            decide_complete_bipartite(k, l, s)?
        }
        Decider::BipartiteWithC4 => decide_bipartite_with_c4(b, s)?,
        Decider::Path5OneThree => decide_path5_one_three(s)?,
        Decider::BipartiteSmallPartition => {
            let j = big_threshold(s, n).expect("matched {1, j}");
            decide_bipartite_small_partition(b, j, s)?
        }
        Decider::ForestBoundedPrefix => {
            let m = s.resolved_thresholds(n).iter().take_while(|&&t| t == 2).count();
            decide_forest_bounded_prefix(b, m, s)?
        }
    };
    Ok(Some(Dispatch { decider, verdict }))
}

/// The single threshold other than 1, when the threshold set is `{j}` or
/// `{1, j}`.
fn big_threshold(s: &Sentence, n: usize) -> Option<usize> {
    let big: Vec<usize> = s.threshold_set(n).into_iter().filter(|&j| j != 1).collect();
    match big[..] {
        [j] => Some(j),
        _ => None,
    }
}

fn matching_decider(b: &Structure, s: &Sentence) -> Option<Decider> {
    let n = b.domain_size();
    let ts = s.resolved_thresholds(n);
    if ts.iter().any(|&j| j > n) || s.check_signature(b.signature()).is_err() {
        return None;
    }
    if ts.iter().all(|&j| j == n) {
        return Some(Decider::AllUniversal);
    }
    let sig = b.signature();
    if sig.len() != 1 || sig.relations()[0].name != EDGE {
        return None;
    }
    let g = b.as_graph()?;
    if g.has_loops() {
        return None;
    }
    let x = s.threshold_set(n);
    if g.is_complete() && x.iter().all(|&j| j > n / 2) {
        return Some(Decider::CliqueHighThresholds);
    }
    if COMPLETE_BIPARTITE_GATE && g.complete_bipartite_sides().is_some() {
        return Some(Decider::CompleteBipartite);
    }
    if g.is_cycle() {
        let tractable = n == 4
            || !x.contains(&1)
            || (n.is_multiple_of(2) && x.iter().all(|&j| j == 1 || j > n / 2));
        if tractable {
            return Some(Decider::CycleTractable);
        }
    }
    if !g.is_bipartite() {
        return None;
    }
    if g.contains_c4() && x.iter().all(|&j| j <= 2) {
        return Some(Decider::BipartiteWithC4);
    }
    if n == 5 && g.is_path() && x.iter().all(|&j| j == 1 || j == 3) {
        return Some(Decider::Path5OneThree);
    }
    if let Some(j) = big_threshold(s, n) {
        if g.largest_side().is_some_and(|side| side < j) {
            return Some(Decider::BipartiteSmallPartition);
        }
    }
    if g.is_forest() {
        let lead = ts.iter().take_while(|&&t| t == 2).count();
        if ts[lead..].iter().all(|&t| t == 1) {
            return Some(Decider::ForestBoundedPrefix);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_template, TemplateFamily};
    use crate::textio::parse_sentence;

    #[test]
    fn dispatch_picks_cycle_decider() {
        let c6 = build_template(&TemplateFamily::Cycle(6)).unwrap();
        let s = parse_sentence("E3 x E2 y | E(x,y)").unwrap();
        let d = dispatch(&c6, &s).unwrap().unwrap();
        assert_eq!(d.decider, Decider::CycleTractable);
        assert!(d.verdict);
    }

    #[test]
    fn dispatch_defers_hard_cases() {
        let c5 = build_template(&TemplateFamily::Cycle(5)).unwrap();
        let s = parse_sentence("E1 x E2 y | E(x,y)").unwrap();
        assert_eq!(dispatch(&c5, &s).unwrap(), None);
    }
}
