//! Ground-truth evaluation of counting-quantifier sentences: the
//! Prover/Adversary game with memoised search, strategy extraction and
//! checking, and constant-preserving homomorphism search.

mod csp;
mod game;
mod relation;
mod strategy;

pub use game::Game;
pub use strategy::WitnessStrategy;

use thiserror::Error;

use crate::model::{Element, ModelError, Structure};
use csp::{full_mask, lower_atom, solution_values, Arg, Budget, Csp, Lowered, VarOrder};
use relation::RelIndex;

/// Default number of search nodes before giving up.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Environment variable overriding [`DEFAULT_NODE_BUDGET`].
pub const NODE_BUDGET_VAR: &str = "CQ_NODE_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("threshold {threshold} on `{variable}` exceeds the domain size {domain}")]
    ThresholdTooLarge {
        variable: String,
        threshold: usize,
        domain: usize,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("search exceeded the node budget of {budget}")]
    BudgetExceeded { budget: u64 },
    #[error("strategy does not match the prefix: {0}")]
    ShapeMismatch(String),
    #[error("homomorphism search supports domains of at most {max} elements, got {size}")]
    DomainTooLarge { size: usize, max: usize },
    #[error("constant `{0}` is not named in the target")]
    UnknownConstant(String),
}

/// The node budget from `CQ_NODE_BUDGET`, or the default.
pub fn node_budget_from_env() -> u64 {
    std::env::var(NODE_BUDGET_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

/// Whether `b` satisfies `s` under the counting semantics.
pub fn evaluate(b: &Structure, s: &crate::model::Sentence) -> Result<bool, OracleError> {
    evaluate_with_budget(b, s, node_budget_from_env())
}

pub fn evaluate_with_budget(
    b: &Structure,
    s: &crate::model::Sentence,
    node_budget: u64,
) -> Result<bool, OracleError> {
    Game::new(b, s, node_budget)?.evaluate()
}

/// A winning Prover strategy, offering the smallest winning elements at each
/// node; `None` iff the sentence is false.
pub fn extract_strategy(
    b: &Structure,
    s: &crate::model::Sentence,
) -> Result<Option<WitnessStrategy>, OracleError> {
    Game::new(b, s, node_budget_from_env())?.extract()
}

/// Whether every play of `w` ends in an assignment satisfying the matrix.
pub fn verify_strategy(
    b: &Structure,
    s: &crate::model::Sentence,
    w: &WitnessStrategy,
) -> Result<bool, OracleError> {
    Game::new(b, s, 0)?.verify(w)
}

/// A homomorphism from `from` to `to` mapping every constant named in
/// `from` to the element of the same name in `to`.
pub fn find_homomorphism(
    from: &Structure,
    to: &Structure,
) -> Result<Option<Vec<Element>>, OracleError> {
    find_homomorphism_with_budget(from, to, node_budget_from_env())
}

pub fn find_homomorphism_with_budget(
    from: &Structure,
    to: &Structure,
    node_budget: u64,
) -> Result<Option<Vec<Element>>, OracleError> {
    let n = to.domain_size();
    if n > csp::MAX_MASK_DOMAIN {
        return Err(OracleError::DomainTooLarge {
            size: n,
            max: csp::MAX_MASK_DOMAIN,
        });
    }
    let mut doms = vec![full_mask(n); from.domain_size()];
    for (name, &e) in from.constants() {
        let target = *to
            .constants()
            .get(name)
            .ok_or_else(|| OracleError::UnknownConstant(name.clone()))?;
        doms[e] &= 1 << target;
    }
    let mut cons = Vec::new();
    for (idx, sym) in from.signature().relations().iter().enumerate() {
        let tuples = from.tuples(idx);
        if tuples.is_empty() {
            continue;
        }
        let target_idx = match to.signature().index_of(&sym.name) {
            Some(i) if to.signature().relations()[i].arity == sym.arity => i,
            Some(i) => {
                return Err(ModelError::ArityMismatch {
                    name: sym.name.clone(),
                    expected: to.signature().relations()[i].arity,
                    found: sym.arity,
                }
                .into())
            }
            None => return Err(ModelError::UnknownRelation(sym.name.clone()).into()),
        };
        let rel = RelIndex::build(to, target_idx);
        for t in tuples {
            let args: Vec<Arg> = t.iter().map(|&e| Arg::Var(e)).collect();
            match lower_atom(&args, &rel, n) {
                Lowered::Trivial => {}
                Lowered::Fail => return Ok(None),
                Lowered::Unary(v, mask) => doms[v] &= mask,
                Lowered::Con(c) => cons.push(c),
            }
        }
    }
    let csp = Csp::new(from.domain_size(), cons);
    let mut budget = Budget::new(node_budget);
    match csp.solve(&mut doms, &[], VarOrder::SmallestDomain, &mut budget) {
        Ok(true) => Ok(Some(solution_values(&doms))),
        Ok(false) => Ok(None),
        Err(_) => Err(OracleError::BudgetExceeded {
            budget: node_budget,
        }),
    }
}

/// Whether `instance` maps homomorphically to `h` with named constants
/// fixed. Every constant of `instance` must be named in `h`.
pub fn solve_retraction(h: &Structure, instance: &Structure) -> Result<bool, OracleError> {
    Ok(find_homomorphism(instance, h)?.is_some())
}
