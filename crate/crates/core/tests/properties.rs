//! Randomised invariants across the textio, oracle and reduce modules.

mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xcsp::model::{build_template, Quantifier, Sentence, Structure, TemplateFamily, Threshold};
use xcsp::oracle::{evaluate, extract_strategy, verify_strategy};
use xcsp::reduce::ReductionRule;
use xcsp::textio::{parse_sentence, parse_structure, parse_strategy, render_sentence, render_strategy, render_structure};

use common::edge_sentence;

const TEMPLATES: [TemplateFamily; 5] = [
    TemplateFamily::Clique(3),
    TemplateFamily::Cycle(4),
    TemplateFamily::Cycle(5),
    TemplateFamily::Path(4),
    TemplateFamily::ReflexiveCycle(4),
];

fn template(i: usize) -> Structure {
    build_template(&TEMPLATES[i % TEMPLATES.len()]).unwrap()
}

/// Thresholds in 1..=4 plus edges over up to five variables.
fn sentence_parts() -> impl Strategy<Value = (Vec<usize>, Vec<(usize, usize)>)> {
    (1usize..=5).prop_flat_map(|q| {
        (
            prop::collection::vec(1usize..=4, q),
            prop::collection::vec((0..q, 0..q), 0..=6),
        )
    })
}

fn with_thresholds(s: &Sentence, ts: &[usize]) -> Sentence {
    let prefix = s
        .prefix()
        .iter()
        .zip(ts)
        .map(|(q, &j)| Quantifier::exists(j, q.variable.clone()))
        .collect();
    Sentence::new(prefix, s.atoms().to_vec()).unwrap()
}

fn all_rules() -> Vec<ReductionRule> {
    use ReductionRule::*;
    vec![
        NaeSingleQuantifier { n: 4, j: 2 },
        CliqueGadgetGj { j: 2 },
        CliquePadding { j: 2, n: 6 },
        CliqueOneJ { n: 4, j: 2 },
        OddCyclePath { n: 5, j: 2 },
        EvenCycleGadget { n: 6, j: 2 },
        EvenCycleCspVariant { n: 6 },
        GirthIsolation { family: TemplateFamily::HairyCycle(6) },
        ReflexiveC4Gadget,
        ReflexiveC4Macros,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sentence_text_round_trips((ts, es) in sentence_parts()) {
        let s = edge_sentence(&ts, &es);
        let text = render_sentence(&s);
        let back = parse_sentence(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(render_sentence(&back), text);
    }

    #[test]
    fn structure_text_round_trips(n in 1usize..7, es in prop::collection::vec((0usize..7, 0usize..7), 0..12)) {
        let es: Vec<_> = es.into_iter().filter(|&(u, v)| u < n && v < n).collect();
        let b = Structure::graph(n, &es).unwrap();
        prop_assert_eq!(parse_structure(&render_structure(&b)).unwrap(), b);
    }

    /// Raising a threshold never turns a false sentence true.
    #[test]
    fn thresholds_are_monotone((ts, es) in sentence_parts(), which in 0usize..5, t in 0usize..5) {
        let b = template(t);
        let n = b.domain_size();
        let s = edge_sentence(&ts, &es);
        let i = which % ts.len();
        prop_assume!(ts[i] < n && ts.iter().all(|&j| j <= n));
        let mut raised = ts.clone();
        raised[i] += 1;
        let low = evaluate(&b, &s).unwrap();
        let high = evaluate(&b, &with_thresholds(&s, &raised)).unwrap();
        prop_assert!(low || !high);
    }

    /// Adding an atom never turns a false sentence true.
    #[test]
    fn atoms_are_monotone((ts, es) in sentence_parts(), extra in (0usize..5, 0usize..5), t in 0usize..5) {
        let b = template(t);
        let q = ts.len();
        let s = edge_sentence(&ts, &es);
        let mut more = es.clone();
        more.push((extra.0 % q, extra.1 % q));
        prop_assume!(ts.iter().all(|&j| j <= b.domain_size()));
        let fewer_holds = evaluate(&b, &s).unwrap();
        let more_holds = evaluate(&b, &edge_sentence(&ts, &more)).unwrap();
        prop_assert!(fewer_holds || !more_holds);
    }

    /// Extracted strategies verify, survive a text round trip, and come
    /// out the same when extracted twice.
    #[test]
    fn strategies_verify_and_round_trip((ts, es) in sentence_parts(), t in 0usize..5) {
        let b = template(t);
        let s = edge_sentence(&ts, &es);
        prop_assume!(ts.iter().all(|&j| j <= b.domain_size()));
        let Some(w) = extract_strategy(&b, &s).unwrap() else {
            prop_assert!(!evaluate(&b, &s).unwrap());
            return Ok(());
        };
        prop_assert!(verify_strategy(&b, &s, &w).unwrap());
        let text = render_strategy(&w);
        prop_assert_eq!(&parse_strategy(&text).unwrap(), &w);
        let again = extract_strategy(&b, &s).unwrap().unwrap();
        prop_assert_eq!(render_strategy(&again), text);
    }

    /// Compiled targets keep every source variable, name their fresh
    /// variables apart from the source, parse back unchanged, and use only
    /// the target template's relations.
    #[test]
    fn compiled_targets_are_hygienic(rule in 0usize..10, seed in any::<u64>()) {
        let rule = &all_rules()[rule];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = rule.random_source(&mut rng, 3, 3);
        let target = rule.compile(&s).unwrap();
        let source_vars: HashSet<&str> = s.variables().collect();
        let target_vars: Vec<&str> = target.variables().collect();
        let unique: HashSet<&str> = target_vars.iter().copied().collect();
        prop_assert_eq!(unique.len(), target_vars.len());
        for v in &target_vars {
            prop_assert!(source_vars.contains(v) || v.contains('~'), "fresh variable {} lacks the marker", v);
        }
        let text = render_sentence(&target);
        prop_assert_eq!(&parse_sentence(&text).unwrap(), &target);
        let tb = rule.target_template().unwrap();
        prop_assert!(target.check_signature(tb.signature()).is_ok());
        prop_assert!(target
            .prefix()
            .iter()
            .all(|q| q.threshold == Threshold::All || q.threshold.resolve(tb.domain_size()) <= tb.domain_size()));
        prop_assert_eq!(rule.compile(&s).unwrap(), target);
    }
}
