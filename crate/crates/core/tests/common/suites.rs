//! Decider-versus-oracle suites over the templates each decider applies to.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use xcsp::fastpath::{self, FastpathError};
use xcsp::model::{build_template, Sentence, Structure, TemplateFamily};
use xcsp::oracle;
use xcsp::textio::render_sentence;

use super::{edge_sentence, graph, graph_sentences};

type DecideFn = Box<dyn Fn(&Sentence) -> Result<bool, FastpathError> + Sync + Send>;
type FilterFn = fn(&Sentence, usize) -> bool;

pub struct SuiteCase {
    pub label: String,
    pub template: Structure,
    pub choices: Vec<usize>,
    pub decide: DecideFn,
    pub filter: Option<FilterFn>,
}

pub struct Suite {
    pub name: &'static str,
    pub cases: Vec<SuiteCase>,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub checked: usize,
    pub disagreements: Vec<String>,
}

fn t(f: TemplateFamily) -> Structure {
    build_template(&f).expect("valid family")
}

fn case(
    label: impl Into<String>,
    template: Structure,
    choices: Vec<usize>,
    decide: DecideFn,
) -> SuiteCase {
    SuiteCase {
        label: label.into(),
        template,
        choices,
        decide,
        filter: None,
    }
}

fn forest_prefix(s: &Sentence, n: usize) -> bool {
    let ts = s.resolved_thresholds(n);
    let lead = ts.iter().take_while(|&&j| j == 2).count();
    lead <= 2 && ts[lead..].iter().all(|&j| j == 1)
}

pub fn clique_suite() -> Suite {
    let cases = (1..=6)
        .map(|n| {
            case(
                format!("K{n}"),
                t(TemplateFamily::Clique(n)),
                (n / 2 + 1..=n).collect(),
                Box::new(move |s: &Sentence| fastpath::decide_clique_high_thresholds(n, s)),
            )
        })
        .collect();
    Suite { name: "clique-high-thresholds", cases }
}

pub fn cycle_suite() -> Suite {
    let mut cases = Vec::new();
    for n in 3..=6 {
        let mut sets: Vec<(String, Vec<usize>)> = vec![(format!("C{n} no 1"), (2..=n).collect())];
        if n == 4 {
            sets.push(("C4 all".into(), (1..=4).collect()));
        }
        if n % 2 == 0 {
            let mut high: Vec<usize> = vec![1];
            high.extend(n / 2 + 1..=n);
            sets.push((format!("C{n} one+high"), high));
        }
        for (label, choices) in sets {
            cases.push(case(
                label,
                t(TemplateFamily::Cycle(n)),
                choices,
                Box::new(move |s: &Sentence| fastpath::decide_cycle_tractable(n, s)),
            ));
        }
    }
    Suite { name: "cycle-tractable", cases }
}

pub fn complete_bipartite_cases(sides: &[(usize, usize)]) -> Vec<SuiteCase> {
    sides
        .iter()
        .map(|&(k, l)| {
            case(
                format!("K{k},{l}"),
                t(TemplateFamily::CompleteBipartite(k, l)),
                (1..=k + l).collect(),
                Box::new(move |s: &Sentence| fastpath::decide_complete_bipartite(k, l, s)),
            )
        })
        .collect()
}

pub fn complete_bipartite_suite() -> Suite {
    let sides = [(1, 1), (1, 2), (1, 3), (2, 2), (1, 4), (2, 3), (1, 5), (2, 4), (3, 3)];
    Suite { name: "complete-bipartite", cases: complete_bipartite_cases(&sides) }
}

/// Bipartite templates paired with every `j` above their largest side.
pub fn small_partition_suite() -> Suite {
    let templates: Vec<(&str, Structure)> = vec![
        ("2K1", graph(2, &[])),
        ("K2+K1", graph(3, &[(0, 1)])),
        ("P3", graph(3, &[(0, 1), (1, 2)])),
        ("2K2", graph(4, &[(0, 1), (2, 3)])),
        ("P3+K1", graph(4, &[(0, 1), (1, 2)])),
        ("P4", graph(4, &[(0, 1), (1, 2), (2, 3)])),
        ("C4", graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])),
        ("P3+K2", graph(5, &[(0, 1), (1, 2), (3, 4)])),
        ("P5", graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)])),
        ("2P3", graph(6, &[(0, 1), (1, 2), (3, 4), (4, 5)])),
        ("C6", graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])),
    ];
    let mut cases = Vec::new();
    for (label, h) in templates {
        let side = h.as_graph().unwrap().largest_side().unwrap();
        for j in side + 1..=h.domain_size() {
            let hh = h.clone();
            cases.push(case(
                format!("{label} j={j}"),
                h.clone(),
                vec![1, j],
                Box::new(move |s: &Sentence| fastpath::decide_bipartite_small_partition(&hh, j, s)),
            ));
        }
    }
    Suite { name: "bipartite-small-partition", cases }
}

pub fn c4_suite() -> Suite {
    let templates: Vec<(&str, Structure)> = vec![
        ("C4", t(TemplateFamily::Cycle(4))),
        ("C4+K1", graph(5, &[(0, 1), (1, 2), (2, 3), (3, 0)])),
        ("C4+pendant", graph(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)])),
        ("K2,3", t(TemplateFamily::CompleteBipartite(2, 3))),
        ("C4+K2", graph(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5)])),
        ("domino", graph(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 5), (5, 3)])),
    ];
    let cases = templates
        .into_iter()
        .map(|(label, h)| {
            let hh = h.clone();
            case(
                label,
                h,
                vec![1, 2],
                Box::new(move |s: &Sentence| fastpath::decide_bipartite_with_c4(&hh, s)),
            )
        })
        .collect();
    Suite { name: "bipartite-with-c4", cases }
}

pub fn forest_suite() -> Suite {
    let templates: Vec<(&str, Structure)> = vec![
        ("2K1", graph(2, &[])),
        ("P2", t(TemplateFamily::Path(2))),
        ("P3", t(TemplateFamily::Path(3))),
        ("P4", t(TemplateFamily::Path(4))),
        ("K1,3", t(TemplateFamily::Star(3))),
        ("P3+K1", graph(4, &[(0, 1), (1, 2)])),
        ("P5", t(TemplateFamily::Path(5))),
        ("spider", graph(6, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5)])),
    ];
    let cases = templates
        .into_iter()
        .map(|(label, h)| {
            let hh = h.clone();
            SuiteCase {
                label: label.into(),
                template: h,
                choices: vec![1, 2],
                decide: Box::new(move |s: &Sentence| fastpath::decide_forest_bounded_prefix(&hh, 2, s)),
                filter: Some(forest_prefix),
            }
        })
        .collect();
    Suite { name: "forest-bounded-prefix", cases }
}

pub fn path5_suite() -> Suite {
    Suite {
        name: "path5-one-three",
        cases: vec![case(
            "P5",
            t(TemplateFamily::Path(5)),
            vec![1, 3],
            Box::new(fastpath::decide_path5_one_three),
        )],
    }
}

pub fn all_suites() -> Vec<Suite> {
    vec![
        clique_suite(),
        cycle_suite(),
        complete_bipartite_suite(),
        small_partition_suite(),
        c4_suite(),
        forest_suite(),
        path5_suite(),
    ]
}

fn check(c: &SuiteCase, s: &Sentence) -> Option<String> {
    let n = c.template.domain_size();
    if let Some(f) = c.filter {
        if !f(s, n) {
            return None;
        }
    }
    let expected = oracle::evaluate(&c.template, s).expect("oracle evaluates");
    match (c.decide)(s) {
        Ok(got) if got == expected => None,
        Ok(got) => Some(format!("{}: `{}` decider {got} oracle {expected}", c.label, render_sentence(s))),
        Err(e) => Some(format!("{}: `{}` decider error {e}", c.label, render_sentence(s))),
    }
}

/// Every sentence up to the given size on every case of the suite.
pub fn exhaustive(suite: &Suite, max_q: usize, max_atoms: usize) -> Outcome {
    let mut out = Outcome::default();
    for c in &suite.cases {
        let sentences = graph_sentences(max_q, max_atoms, &c.choices);
        let n = c.template.domain_size();
        let applicable: Vec<&Sentence> = sentences
            .iter()
            .filter(|s| c.filter.is_none_or(|f| f(s, n)))
            .collect();
        out.checked += applicable.len();
        out.disagreements
            .extend(applicable.par_iter().filter_map(|s| check(c, s)).collect::<Vec<_>>());
    }
    out
}

/// Random sentences with up to six variables and seven atoms, which lie
/// beyond the exhaustive range.
pub fn random(suite: &Suite, count: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Outcome::default();
    let mut drawn = Vec::with_capacity(count);
    while drawn.len() < count {
        let ci = rng.gen_range(0..suite.cases.len());
        let c = &suite.cases[ci];
        let q = rng.gen_range(1..=6);
        let ts: Vec<usize> = (0..q).map(|_| c.choices[rng.gen_range(0..c.choices.len())]).collect();
        let atoms = rng.gen_range(0..=7);
        let mut edges = Vec::new();
        for _ in 0..atoms {
            let (u, v) = (rng.gen_range(0..q), rng.gen_range(0..q));
            if u != v || rng.gen_bool(0.1) {
                edges.push((u, v));
            }
        }
        let s = edge_sentence(&ts, &edges);
        if c.filter.is_none_or(|f| f(&s, c.template.domain_size())) {
            drawn.push((ci, s));
        }
    }
    out.checked = drawn.len();
    out.disagreements = drawn
        .par_iter()
        .filter_map(|(ci, s)| check(&suite.cases[*ci], s))
        .collect();
    out
}
