//! Hardness reductions as sentence transformations, with an oracle-backed
//! equivalence checker.

mod blueprint;
mod rules;
mod verify;

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::model::{build_template, Atom, ModelError, Quantifier, Sentence, Structure, TemplateFamily};

pub use blueprint::{
    even_cycle_gadget, gadget_gj, reflexive_c4_gadget, universal_path_gadget, GadgetBlueprint,
    GadgetInstance,
};
pub use rules::{
    even_cycle_indices, expand_c4star_macros, girth_isolation, girth_prefix_length, girth_spine, isolation_prefix, pad_clique,
    reduce_clique_gj, reduce_clique_one_j, reduce_even_cycle, reduce_nae, reduce_odd_cycle,
    reduce_reflexive_c4, subset_bijection,
};
pub use verify::{verify_reduction, CaseOutcome, VerifyOptions, VerifyReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("invalid rule parameters: {0}")]
    Parameter(String),
    #[error("source violates the rule's precondition: {0}")]
    Precondition(String),
    #[error("source variable `{0}` uses the reserved character `~`")]
    ReservedName(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A reduction with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionRule {
    /// Quantified NAE-3SAT to `{j}`-CSP over `B_n`.
    NaeSingleQuantifier { n: usize, j: usize },
    /// QCSP over `K_{C(2j+1,j)}` to `{j}`-CSP over `K_{2j+1}`.
    CliqueGadgetGj { j: usize },
    /// `{j}`-CSP over `K_{2j+1}` to `{j}`-CSP over `K_n`.
    CliquePadding { j: usize, n: usize },
    /// QCSP over `K_n` to `{1, j}`-CSP over `K_n`.
    CliqueOneJ { n: usize, j: usize },
    /// QCSP over odd `C_n` to `{1, j}`-CSP over `C_n`.
    OddCyclePath { n: usize, j: usize },
    /// QCSP over `K_{n/2}` to `{1, j}`-CSP over even `C_n`.
    EvenCycleGadget { n: usize, j: usize },
    /// CSP over `K_{n/2}` to `{1, 2}`-CSP over even `C_n`.
    EvenCycleCspVariant { n: usize },
    /// CSP over `K_j` to `[2^m 1^*]`-CSP over a bipartite template of girth `2j`.
    GirthIsolation { family: TemplateFamily },
    /// QCSP over `K_4` to `{1,2,3,4}`-CSP over the reflexive 4-cycle.
    ReflexiveC4Gadget,
    /// `{1,2,3,4}`-CSP over the reflexive 4-cycle to its QCSP.
    ReflexiveC4Macros,
}

impl fmt::Display for ReductionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ReductionRule::*;
        match self {
            NaeSingleQuantifier { n, j } => write!(f, "nae n={n} j={j}"),
            CliqueGadgetGj { j } => write!(f, "clique-gj j={j}"),
            CliquePadding { j, n } => write!(f, "clique-pad j={j} n={n}"),
            CliqueOneJ { n, j } => write!(f, "clique-1j n={n} j={j}"),
            OddCyclePath { n, j } => write!(f, "odd-cycle n={n} j={j}"),
            EvenCycleGadget { n, j } => write!(f, "even-cycle n={n} j={j}"),
            EvenCycleCspVariant { n } => write!(f, "even-cycle-csp n={n}"),
            GirthIsolation { family } => write!(f, "girth {family:?}"),
            ReflexiveC4Gadget => f.write_str("c4star-gadget"),
            ReflexiveC4Macros => f.write_str("c4star-macros"),
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn girth_half(family: &TemplateFamily) -> Result<usize, ReduceError> {
    let h = build_template(family)?;
    let g = h
        .as_graph()
        .ok_or_else(|| ReduceError::Parameter("template is not a graph".into()))?;
    let girth = g
        .girth()
        .ok_or_else(|| ReduceError::Parameter("template is acyclic".into()))?;
    Ok(girth / 2)
}

impl ReductionRule {
    pub fn name(&self) -> &'static str {
        use ReductionRule::*;
        match self {
            NaeSingleQuantifier { .. } => "nae",
            CliqueGadgetGj { .. } => "clique-gj",
            CliquePadding { .. } => "clique-pad",
            CliqueOneJ { .. } => "clique-1j",
            OddCyclePath { .. } => "odd-cycle",
            EvenCycleGadget { .. } => "even-cycle",
            EvenCycleCspVariant { .. } => "even-cycle-csp",
            GirthIsolation { .. } => "girth",
            ReflexiveC4Gadget => "c4star-gadget",
            ReflexiveC4Macros => "c4star-macros",
        }
    }

    /// The family whose template the sources are evaluated over.
    pub fn source_family(&self) -> Result<TemplateFamily, ReduceError> {
        use ReductionRule::*;
        use TemplateFamily as F;
        Ok(match self {
            NaeSingleQuantifier { .. } => F::NAEBoolean,
            CliqueGadgetGj { j } => F::Clique(binomial(2 * j + 1, *j)),
            CliquePadding { j, .. } => F::Clique(2 * j + 1),
            CliqueOneJ { n, .. } => F::Clique(*n),
            OddCyclePath { n, .. } => F::Cycle(*n),
            EvenCycleGadget { n, .. } | EvenCycleCspVariant { n } => F::Clique(n / 2),
            GirthIsolation { family } => F::Clique(girth_half(family)?),
            ReflexiveC4Gadget => F::Clique(4),
            ReflexiveC4Macros => F::ReflexiveCycle(4),
        })
    }

    pub fn target_family(&self) -> TemplateFamily {
        use ReductionRule::*;
        use TemplateFamily as F;
        match self {
            NaeSingleQuantifier { n, j } => F::SingleQuantifierTemplate(*n, *j),
            CliqueGadgetGj { j } => F::Clique(2 * j + 1),
            CliquePadding { n, .. } | CliqueOneJ { n, .. } => F::Clique(*n),
            OddCyclePath { n, .. } | EvenCycleGadget { n, .. } | EvenCycleCspVariant { n } => {
                F::Cycle(*n)
            }
            GirthIsolation { family } => family.clone(),
            ReflexiveC4Gadget | ReflexiveC4Macros => F::ReflexiveCycle(4),
        }
    }

    /// Rejects parameters outside the rule's range before any source is
    /// read, by building both templates and compiling a one-variable source.
    pub fn check_parameters(&self) -> Result<(), ReduceError> {
        self.source_template()?;
        self.target_template()?;
        let q = Self::source_quantifier(self.source_thresholds()[0], "x".into());
        self.compile(&Sentence::new(vec![q], Vec::new())?)?;
        Ok(())
    }

    pub fn source_template(&self) -> Result<Structure, ReduceError> {
        Ok(build_template(&self.source_family()?)?)
    }

    pub fn target_template(&self) -> Result<Structure, ReduceError> {
        Ok(build_template(&self.target_family())?)
    }

    /// Compiles a source sentence into the target sentence.
    pub fn compile(&self, s: &Sentence) -> Result<Sentence, ReduceError> {
        use ReductionRule::*;
        match self {
            NaeSingleQuantifier { n, j } => Ok(reduce_nae(*j, *n, s)?.1),
            CliqueGadgetGj { j } => reduce_clique_gj(*j, s),
            CliquePadding { j, n } => pad_clique(*j, *n, s),
            CliqueOneJ { n, j } => reduce_clique_one_j(*n, *j, s),
            OddCyclePath { n, j } => reduce_odd_cycle(*n, *j, s),
            EvenCycleGadget { n, j } => reduce_even_cycle(*n, *j, s, true),
            EvenCycleCspVariant { n } => reduce_even_cycle(*n, 2, s, false),
            GirthIsolation { family } => girth_isolation(&build_template(family)?, s),
            ReflexiveC4Gadget => reduce_reflexive_c4(s),
            ReflexiveC4Macros => expand_c4star_macros(s),
        }
    }

    /// The thresholds a source may use; `None` stands for `∀`.
    fn source_thresholds(&self) -> Vec<Option<usize>> {
        use ReductionRule::*;
        match self {
            CliquePadding { j, .. } => vec![Some(*j)],
            EvenCycleCspVariant { .. } | GirthIsolation { .. } => vec![Some(1)],
            ReflexiveC4Macros => vec![Some(1), Some(2), Some(3), None],
            _ => vec![Some(1), None],
        }
    }

    fn source_arity(&self) -> (&'static str, usize) {
        match self {
            ReductionRule::NaeSingleQuantifier { .. } => ("R", 3),
            _ => (crate::model::EDGE, 2),
        }
    }

    /// Gadget rules encode graph colouring and take loop-free sources.
    fn loop_free(&self) -> bool {
        use ReductionRule::*;
        matches!(
            self,
            EvenCycleGadget { .. } | EvenCycleCspVariant { .. } | GirthIsolation { .. } | ReflexiveC4Gadget
        )
    }

    fn source_quantifier(choice: Option<usize>, v: String) -> Quantifier {
        match choice {
            Some(j) => Quantifier::exists(j, v),
            None => Quantifier::forall(v),
        }
    }

    /// A random source with `1..=max_vars` variables `x0, x1, ...` and
    /// `1..=max_atoms` atoms. Loops are not generated.
    pub fn random_source<R: Rng>(&self, rng: &mut R, max_vars: usize, max_atoms: usize) -> Sentence {
        let choices = self.source_thresholds();
        let (rel, arity) = self.source_arity();
        let q = rng.gen_range(1..=max_vars.max(1));
        let min_q = if arity == 2 { 2 } else { 1 };
        let q = q.max(min_q);
        let prefix = (0..q)
            .map(|i| Self::source_quantifier(choices[rng.gen_range(0..choices.len())], format!("x{i}")))
            .collect();
        let count = rng.gen_range(1..=max_atoms.max(1));
        let atoms = (0..count)
            .map(|_| loop {
                let args: Vec<String> = (0..arity).map(|_| format!("x{}", rng.gen_range(0..q))).collect();
                if arity != 2 || args[0] != args[1] {
                    break Atom::new(rel, args);
                }
            })
            .collect();
        Sentence::new(prefix, atoms).expect("generated variables are bound")
    }

    /// Every source with exactly `q` variables for `q <= max_vars`, every
    /// allowed threshold sequence, and `1..=max_atoms` distinct atoms.
    /// Loops are included for graph sources unless the rule is a gadget rule.
    pub fn exhaustive_sources(&self, max_vars: usize, max_atoms: usize) -> Vec<Sentence> {
        use itertools::Itertools;
        let choices = self.source_thresholds();
        let (rel, arity) = self.source_arity();
        let mut out = Vec::new();
        for q in 1..=max_vars {
            let vars: Vec<String> = (0..q).map(|i| format!("x{i}")).collect();
            let tuples: Vec<Vec<String>> = (0..arity)
                .map(|_| vars.iter().cloned())
                .multi_cartesian_product()
                .filter(|t| !(self.loop_free() && arity == 2 && t[0] == t[1]))
                .collect();
            for atoms_n in 1..=max_atoms {
                for atoms in tuples.iter().combinations(atoms_n) {
                    for ts in (0..q).map(|_| choices.iter().copied()).multi_cartesian_product() {
                        let prefix = ts
                            .into_iter()
                            .zip(&vars)
                            .map(|(t, v)| Self::source_quantifier(t, v.clone()))
                            .collect();
                        let atoms = atoms.iter().map(|a| Atom::new(rel, a.iter().cloned())).collect();
                        out.push(Sentence::new(prefix, atoms).expect("bound variables"));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests;
