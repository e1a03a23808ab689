use super::*;
use crate::model::{build_template, Structure, TemplateFamily, Threshold};
use crate::oracle::Game;
use crate::oracle::evaluate;
use crate::textio::{parse_sentence, render_sentence};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sentence(text: &str) -> Sentence {
    parse_sentence(text).unwrap()
}

fn clean(rule: &ReductionRule, sources: &[Sentence]) -> VerifyReport {
    let report = verify_reduction(rule, sources, VerifyOptions::default()).unwrap();
    assert!(report.is_clean(), "{rule}:\n{report}");
    report
}

fn random_sources(rule: &ReductionRule, count: usize, vars: usize, atoms: usize) -> Vec<Sentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    (0..count).map(|_| rule.random_source(&mut rng, vars, atoms)).collect()
}

#[test]
fn nae_compiles_universals_to_unary_atoms() {
    let s = sentence("A x E y E z | R(x,y,z)");
    let (b, t) = reduce_nae(2, 4, &s).unwrap();
    assert_eq!(b.relation("U").unwrap().len(), 2);
    assert!(t.prefix().iter().all(|q| q.threshold == Threshold::AtLeast(2)));
    assert_eq!(t.atoms().len(), 2);
    assert_eq!(t.atoms()[1].relation, "U");
    assert!(reduce_nae(1, 4, &s).is_err());
}

#[test]
fn nae_equivalence_small() {
    for n in [4, 5] {
        let rule = ReductionRule::NaeSingleQuantifier { n, j: 2 };
        clean(&rule, &rule.exhaustive_sources(2, 2));
    }
}

#[test]
fn subset_bijection_has_ten_pairs() {
    let pi = subset_bijection(2);
    assert_eq!(pi.len(), 10);
    assert_eq!(pi[0], vec![0, 1]);
    assert_eq!(pi[9], vec![3, 4]);
}

#[test]
fn clique_gj_examples() {
    let rule = ReductionRule::CliqueGadgetGj { j: 2 };
    let k5 = rule.target_template().unwrap();
    let t = rule.compile(&sentence("E v E u | E(u,v)")).unwrap();
    assert!(evaluate(&k5, &t).unwrap());
    clean(&rule, &[sentence("A u E v | E(u,v)"), sentence("A u A v | E(u,v)")]);
}

#[test]
fn clique_gj_rejects_wrong_size_and_reserved_names() {
    assert!(matches!(
        reduce_clique_gj(2, &sentence("E a~b | E(a~b,a~b)")),
        Err(ReduceError::ReservedName(_))
    ));
}

#[test]
fn padding_adds_outer_clique() {
    let t = pad_clique(2, 6, &sentence("E2 x E2 y | E(x,y)")).unwrap();
    assert_eq!(t.prefix()[0].variable, "pad~1");
    assert_eq!(t.atoms().len(), 3);
    assert!(pad_clique(2, 5, &sentence("E2 x | E(x,x)")).is_err());
    let rule = ReductionRule::CliquePadding { j: 2, n: 6 };
    clean(&rule, &random_sources(&rule, 20, 3, 3));
}

#[test]
fn clique_one_j_examples() {
    let t = reduce_clique_one_j(3, 3, &sentence("A v E u | E(u,v)")).unwrap();
    assert_eq!(render_sentence(&t).trim_end(), "E3 v E1 u | E(u,v)");
    for (n, j) in [(3, 2), (4, 2)] {
        let rule = ReductionRule::CliqueOneJ { n, j };
        clean(&rule, &rule.exhaustive_sources(2, 2));
    }
}

#[test]
fn odd_cycle_equivalence() {
    let rule = ReductionRule::OddCyclePath { n: 5, j: 2 };
    clean(&rule, &rule.exhaustive_sources(2, 1));
}

#[test]
fn even_cycle_indices_reach_the_far_vertex() {
    assert_eq!(even_cycle_indices(6, 2), (0, vec![0, 1, 2, 3, 4]));
    for n in (6..=16).step_by(2) {
        for j in 2..=n / 2 {
            let (r, alphas) = even_cycle_indices(n, j);
            assert!(r < j - 1 || j == 2);
            assert_eq!(*alphas.last().unwrap(), n / 2 + 1, "n={n} j={j}");
            assert!(alphas.windows(2).all(|w| w[1] - w[0] == j - 1));
        }
    }
}

#[test]
fn macros_expand_examples() {
    let t = expand_c4star_macros(&sentence("E2 x | E(x,x)")).unwrap();
    assert_eq!(render_sentence(&t).trim_end(), "A x~pr~1 E1 x | E(x,x) & E(x~pr~1,x)");
    let rule = ReductionRule::ReflexiveC4Macros;
    let report = clean(&rule, &rule.exhaustive_sources(2, 2));
    assert_eq!(report.skipped(), 0);
}

#[test]
fn fault_injection_is_detected() {
    let rule = ReductionRule::ReflexiveC4Macros;
    let sources = rule.exhaustive_sources(2, 2);
    let opts = VerifyOptions {
        inject_fault: true,
        ..VerifyOptions::default()
    };
    let report = verify_reduction(&rule, &sources, opts).unwrap();
    assert!(report.disagreements() > 0);
    assert!(report.to_string().contains("DISAGREE"));
}

#[test]
fn compilation_is_deterministic() {
    let rule = ReductionRule::CliqueGadgetGj { j: 2 };
    let s = sentence("A u E v | E(u,v)");
    assert_eq!(
        render_sentence(&rule.compile(&s).unwrap()),
        render_sentence(&rule.compile(&s).unwrap())
    );
}


fn cycle(n: usize) -> Structure {
    build_template(&TemplateFamily::Cycle(n)).unwrap()
}

/// Plays the identity on the fixed cycle of the even-cycle target, then the
/// given source values, and asks whether Prover still wins.
fn even_after_identity(n: usize, t: &Sentence, source_values: &[usize]) -> bool {
    let b = cycle(n);
    let mut game = Game::new(&b, t, 1_000_000).unwrap();
    let (_, alphas) = even_cycle_indices(n, 2);
    // w_0 is adjacent to v_0, so it plays n-1.
    let mut values = vec![n - 1];
    values.extend(alphas.iter().copied());
    values.extend(source_values);
    game.holds_after(&values).unwrap()
}

#[test]
fn even_gadget_separates_colours_and_uses_odd_values() {
    let t = reduce_even_cycle(6, 2, &sentence("E x E y | E(x,y)"), false).unwrap();
    assert_eq!(t.prefix()[0].variable, "fix~w~0");
    assert_eq!(t.prefix().iter().filter(|q| q.threshold == Threshold::AtLeast(2)).count(), 5);
    for x in 0..6 {
        for y in 0..6 {
            let colours = x % 2 == 1 && y % 2 == 1 && x != y;
            assert_eq!(even_after_identity(6, &t, &[x, y]), colours, "x={x} y={y}");
        }
    }
}

#[test]
fn even_cycle_csp_equivalence() {
    let rule = ReductionRule::EvenCycleCspVariant { n: 6 };
    let report = clean(&rule, &rule.exhaustive_sources(3, 3));
    assert_eq!(report.skipped(), 0);
}

#[test]
fn even_cycle_qcsp_equivalence() {
    let rule = ReductionRule::EvenCycleGadget { n: 6, j: 2 };
    let report = clean(&rule, &rule.exhaustive_sources(2, 2));
    assert_eq!(report.skipped(), 0);
    // Universals at n >= 8 exceed the default node budget; existential
    // sources still exercise the longer prefixes and the w-path (r = 1 at n = 10).
    for (n, j) in [(8, 3), (8, 4), (10, 3)] {
        let rule = ReductionRule::EvenCycleGadget { n, j };
        let report = clean(&rule, &[sentence("E x E y | E(x,y)")]);
        assert_eq!(report.agreements(), 1);
    }
}

#[test]
fn oversized_targets_are_skipped_not_passed() {
    let rule = ReductionRule::EvenCycleCspVariant { n: 6 };
    let k4 = sentence("E a E b E c E d | E(a,b) & E(b,c) & E(a,c) & E(a,d) & E(b,d) & E(c,d)");
    let opts = VerifyOptions {
        node_budget: 10_000,
        inject_fault: false,
    };
    let report = verify_reduction(&rule, &[k4], opts).unwrap();
    assert_eq!(report.skipped(), 1);
    assert_eq!(report.agreements(), 0);
    assert!(report.to_string().starts_with("0 skipped"));
}

#[test]
fn girth_isolation_on_six_cycle() {
    let c6 = TemplateFamily::Cycle(6);
    let (spine, closing, cycles) = girth_spine(3, 3);
    assert_eq!((spine.len(), closing.len(), cycles.len()), (4, 1, 1));
    assert_eq!(cycles[0].len(), 6);
    let t = girth_isolation(&build_template(&c6).unwrap(), &sentence("E x E y | E(x,y)")).unwrap();
    let lead = t.prefix().iter().take_while(|q| q.threshold == Threshold::AtLeast(2)).count();
    assert_eq!(lead, girth_prefix_length(3, 3));
    assert!(t.prefix()[lead..].iter().all(|q| q.threshold == Threshold::AtLeast(1)));
    let rule = ReductionRule::GirthIsolation { family: c6 };
    clean(&rule, &rule.exhaustive_sources(3, 3));
}

#[test]
fn girth_isolation_on_hairy_cycle() {
    let rule = ReductionRule::GirthIsolation {
        family: TemplateFamily::HairyCycle(6),
    };
    let t = rule.compile(&sentence("E x E y | E(x,y)")).unwrap();
    // Diameter 5: six spine vertices and three blocks.
    assert_eq!(t.variables().filter(|v| v.starts_with("sp~v~")).count(), 6);
    assert_eq!(t.variables().filter(|v| v.ends_with("~cp~3")).count(), 2);
    clean(&rule, &[sentence("E x E y | E(x,y)"), sentence("E a E b E c | E(a,b) & E(b,c) & E(a,c)")]);
}

#[test]
fn girth_isolation_rejects_short_cycles() {
    let c4 = build_template(&TemplateFamily::Cycle(4)).unwrap();
    assert!(girth_isolation(&c4, &sentence("E x E y | E(x,y)")).is_err());
    let p4 = build_template(&TemplateFamily::Path(4)).unwrap();
    assert!(girth_isolation(&p4, &sentence("E x E y | E(x,y)")).is_err());
}

#[test]
fn reflexive_c4_gadget_examples() {
    let rule = ReductionRule::ReflexiveC4Gadget;
    let t = rule.compile(&sentence("E u E v | E(u,v)")).unwrap();
    let js: Vec<Threshold> = t.prefix()[..4].iter().map(|q| q.threshold).collect();
    assert_eq!(js, [1, 2, 3, 2].map(Threshold::AtLeast));
    let mut sources = rule.exhaustive_sources(2, 2);
    // A 4-clique is 4-colourable, so the target must hold: the source
    // template is K_4.
    sources.push(sentence("E a E b E c E d | E(a,b) & E(b,c) & E(a,c) & E(a,d) & E(b,d) & E(c,d)"));
    let report = clean(&rule, &sources);
    assert_eq!(report.skipped(), 0);
    assert!(matches!(
        report.cases.last(),
        Some(CaseOutcome::Checked { source: true, target: true, .. })
    ));
}

#[test]
fn gadget_rules_reject_loops() {
    let loop_src = sentence("E x | E(x,x)");
    for rule in [
        ReductionRule::ReflexiveC4Gadget,
        ReductionRule::EvenCycleCspVariant { n: 6 },
    ] {
        assert!(matches!(rule.compile(&loop_src), Err(ReduceError::Precondition(_))));
    }
}

#[test]
fn universal_path_gadget_on_five_cycle() {
    // Q_x π_x holds, and Adversary can steer x to every vertex.
    let g = universal_path_gadget(5, 2).unwrap();
    let inst = g.instantiate("u", &["x".to_string()]);
    let s = Sentence::new(inst.block.clone(), inst.atoms.clone()).unwrap();
    let c5 = cycle(5);
    let w = crate::oracle::extract_strategy(&c5, &s).unwrap().expect("Prover wins");
    let x = s.variable_index("x").unwrap();
    let reached: std::collections::BTreeSet<usize> = w.plays().iter().map(|p| p[x]).collect();
    assert_eq!(reached, (0..5).collect());
}

