use std::fmt;

use rayon::prelude::*;

use super::{ReduceError, ReductionRule};
use crate::model::{Atom, Sentence, Structure};
use crate::oracle::{evaluate_with_budget, node_budget_from_env, OracleError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Node budget for each oracle call; exhausting it skips the case.
    pub node_budget: u64,
    /// Breaks every compiled target so that its verdict no longer depends on
    /// the source. Test hook for checking that the verifier notices.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            node_budget: node_budget_from_env(),
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseOutcome {
    Checked {
        source: bool,
        target: bool,
        target_variables: usize,
        target_atoms: usize,
    },
    Skipped(String),
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub cases: Vec<CaseOutcome>,
}

impl VerifyReport {
    fn count(&self, f: impl Fn(&CaseOutcome) -> bool) -> usize {
        self.cases.iter().filter(|c| f(c)).count()
    }

    pub fn agreements(&self) -> usize {
        self.count(|c| matches!(c, CaseOutcome::Checked { source, target, .. } if source == target))
    }

    pub fn disagreements(&self) -> usize {
        self.count(|c| matches!(c, CaseOutcome::Checked { source, target, .. } if source != target))
    }

    pub fn skipped(&self) -> usize {
        self.count(|c| matches!(c, CaseOutcome::Skipped(_)))
    }

    pub fn errors(&self) -> usize {
        self.count(|c| matches!(c, CaseOutcome::Error(_)))
    }

    /// No disagreement and no per-source error. Skipped cases do not count
    /// as passed; callers that need full coverage check [`Self::skipped`].
    pub fn is_clean(&self) -> bool {
        self.disagreements() == 0 && self.errors() == 0
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut max_vars = 0;
        let mut max_atoms = 0;
        for (i, c) in self.cases.iter().enumerate() {
            match c {
                CaseOutcome::Checked {
                    source,
                    target,
                    target_variables,
                    target_atoms,
                } => {
                    max_vars = max_vars.max(*target_variables);
                    max_atoms = max_atoms.max(*target_atoms);
                    let tag = if source == target { "agree" } else { "DISAGREE" };
                    writeln!(f, "{i} {} {} {tag}", yes_no(*source), yes_no(*target))?;
                }
                CaseOutcome::Skipped(why) => writeln!(f, "{i} skipped {why}")?,
                CaseOutcome::Error(why) => writeln!(f, "{i} error {why}")?,
            }
        }
        writeln!(
            f,
            "# cases {} agree {} disagree {} skipped {} error {}",
            self.cases.len(),
            self.agreements(),
            self.disagreements(),
            self.skipped(),
            self.errors()
        )?;
        writeln!(f, "# largest target: {max_vars} variables, {max_atoms} atoms")
    }
}

/// Makes the target constant: on an irreflexive template a loop atom makes
/// it false, otherwise an empty matrix makes it true.
fn break_target(t: Sentence, target_b: &Structure) -> Sentence {
    let Some(last) = t.atoms().last().cloned() else {
        return t;
    };
    let has_loop = target_b
        .relation(&last.relation)
        .is_some_and(|ts| ts.iter().any(|tp| tp.iter().all(|&e| e == tp[0])));
    let atoms = if has_loop {
        Vec::new()
    } else {
        let v = last.args[0].clone();
        let mut atoms = t.atoms().to_vec();
        atoms.push(Atom::new(&last.relation, vec![v; last.args.len()]));
        atoms
    };
    Sentence::new(t.prefix().to_vec(), atoms).expect("prefix unchanged")
}

fn check_case(
    rule: &ReductionRule,
    source_b: &Structure,
    target_b: &Structure,
    s: &Sentence,
    opts: VerifyOptions,
) -> CaseOutcome {
    let target = match rule.compile(s) {
        Ok(t) if opts.inject_fault => break_target(t, target_b),
        Ok(t) => t,
        Err(e) => return CaseOutcome::Error(e.to_string()),
    };
    let eval = |b: &Structure, s: &Sentence| evaluate_with_budget(b, s, opts.node_budget);
    let source = match eval(source_b, s) {
        Ok(v) => v,
        Err(OracleError::BudgetExceeded { budget }) => {
            return CaseOutcome::Skipped(format!("source exceeded node budget {budget}"))
        }
        Err(e) => return CaseOutcome::Error(e.to_string()),
    };
    match eval(target_b, &target) {
        Ok(v) => CaseOutcome::Checked {
            source,
            target: v,
            target_variables: target.variable_count(),
            target_atoms: target.atoms().len(),
        },
        Err(OracleError::BudgetExceeded { budget }) => {
            CaseOutcome::Skipped(format!("target exceeded node budget {budget}"))
        }
        Err(e) => CaseOutcome::Error(e.to_string()),
    }
}

/// Compiles every source and compares source and target verdicts with the
/// oracle. Cases run in parallel; the report follows input order.
pub fn verify_reduction(
    rule: &ReductionRule,
    sources: &[Sentence],
    opts: VerifyOptions,
) -> Result<VerifyReport, ReduceError> {
    let source_b = rule.source_template()?;
    let target_b = rule.target_template()?;
    let cases = sources
        .par_iter()
        .map(|s| check_case(rule, &source_b, &target_b, s, opts))
        .collect();
    Ok(VerifyReport { cases })
}
