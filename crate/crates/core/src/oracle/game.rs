use std::collections::HashMap;

use super::csp::{
    full_mask, lower_atom, solution_values, Arg, Budget, Con, Csp, Lowered, OutOfBudget, VarOrder,
    MAX_MASK_DOMAIN,
};
use super::relation::RelIndex;
use super::{OracleError, WitnessStrategy};
use crate::model::{Element, Sentence, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum MemoKey {
    Packed(u128),
    Wide(Box<[u32]>),
}

#[derive(Debug, Clone)]
struct CAtom {
    rel: usize,
    args: Vec<usize>,
}

/// The all-`∃` suffix of the prefix, solved as a CSP.
#[derive(Debug)]
struct Tail {
    start: usize,
    static_fail: bool,
    static_unary: Vec<u64>,
    csp: Csp,
    /// Atoms mixing suffix variables with earlier ones.
    dynamic: Vec<usize>,
}

/// The evaluation game for one sentence on one template, with a memo table
/// shared by evaluation and strategy extraction.
#[derive(Debug)]
pub struct Game {
    n: usize,
    lambda: Vec<usize>,
    rels: Vec<RelIndex>,
    atoms: Vec<CAtom>,
    /// Atoms whose last variable is the given position.
    checks: Vec<Vec<usize>>,
    /// Earlier variables still relevant at each position.
    live: Vec<Vec<usize>>,
    key_bits: u32,
    memo: Vec<HashMap<MemoKey, bool>>,
    tail: Option<Tail>,
    budget: Budget,
}

impl Game {
    pub fn new(b: &Structure, s: &Sentence, node_budget: u64) -> Result<Self, OracleError> {
        s.check_signature(b.signature())?;
        let n = b.domain_size();
        let m = s.variable_count();
        let lambda = s.resolved_thresholds(n);
        for (q, &j) in s.prefix().iter().zip(&lambda) {
            if j > n {
                return Err(OracleError::ThresholdTooLarge {
                    variable: q.variable.clone(),
                    threshold: j,
                    domain: n,
                });
            }
        }
        let mut rel_of_name: HashMap<&str, usize> = HashMap::new();
        let mut rels = Vec::new();
        let mut atoms = Vec::new();
        for a in s.atoms() {
            let next = rels.len();
            let rel = *rel_of_name.entry(a.relation.as_str()).or_insert(next);
            if rel == next {
                let idx = b.signature().index_of(&a.relation).expect("signature checked");
                rels.push(RelIndex::build(b, idx));
            }
            let args = a
                .args
                .iter()
                .map(|v| s.variable_index(v).expect("validated sentence"))
                .collect();
            atoms.push(CAtom { rel, args });
        }
        let mut checks = vec![Vec::new(); m];
        let mut last_use = vec![None::<usize>; m];
        for (ai, a) in atoms.iter().enumerate() {
            let hi = *a.args.iter().max().unwrap();
            checks[hi].push(ai);
            for &v in &a.args {
                last_use[v] = Some(last_use[v].map_or(hi, |u: usize| u.max(hi)));
            }
        }
        // Variable v is live at position i (v < i) if it shares an atom with
        // some variable >= i.
        let live = (0..=m)
            .map(|i| {
                (0..i)
                    .filter(|&v| last_use[v].is_some_and(|u| u >= i))
                    .collect()
            })
            .collect();
        let key_bits = usize::BITS - n.saturating_sub(1).leading_zeros();
        let mut game = Game {
            n,
            lambda,
            rels,
            atoms,
            checks,
            live,
            key_bits: key_bits.max(1),
            memo: vec![HashMap::new(); m + 1],
            tail: None,
            budget: Budget::new(node_budget),
        };
        game.tail = game.build_tail();
        Ok(game)
    }

    fn build_tail(&self) -> Option<Tail> {
        let m = self.lambda.len();
        if self.n > MAX_MASK_DOMAIN {
            return None;
        }
        let mut start = m;
        while start > 0 && self.lambda[start - 1] == 1 {
            start -= 1;
        }
        if start == m {
            return None;
        }
        let k = m - start;
        let mut static_unary = vec![full_mask(self.n); k];
        let mut static_fail = false;
        let mut cons = Vec::new();
        let mut dynamic = Vec::new();
        for (ai, a) in self.atoms.iter().enumerate() {
            let lo = *a.args.iter().min().unwrap();
            let hi = *a.args.iter().max().unwrap();
            if hi < start {
                continue;
            }
            if lo < start {
                dynamic.push(ai);
                continue;
            }
            let args: Vec<Arg> = a.args.iter().map(|&v| Arg::Var(v - start)).collect();
            match lower_atom(&args, &self.rels[a.rel], self.n) {
                Lowered::Trivial => {}
                Lowered::Fail => static_fail = true,
                Lowered::Unary(v, mask) => static_unary[v] &= mask,
                Lowered::Con(c) => cons.push(c),
            }
        }
        Some(Tail {
            start,
            static_fail,
            static_unary,
            csp: Csp::new(k, cons),
            dynamic,
        })
    }

    pub fn domain_size(&self) -> usize {
        self.n
    }

    pub fn thresholds(&self) -> &[usize] {
        &self.lambda
    }

    /// Nodes spent so far, against the budget.
    pub fn nodes_used(&self) -> u64 {
        self.budget.used
    }

    fn budget_error(&self) -> OracleError {
        OracleError::BudgetExceeded {
            budget: self.budget.limit,
        }
    }

    /// Whether the sentence holds.
    pub fn evaluate(&mut self) -> Result<bool, OracleError> {
        let mut vals = Vec::with_capacity(self.lambda.len());
        self.sat(0, &mut vals).map_err(|_| self.budget_error())
    }

    /// Whether Prover still wins after the first `values.len()` variables
    /// have been assigned `values`.
    pub fn holds_after(&mut self, values: &[Element]) -> Result<bool, OracleError> {
        assert!(values.len() <= self.lambda.len(), "more values than variables");
        let mut vals = Vec::with_capacity(self.lambda.len());
        for (i, &e) in values.iter().enumerate() {
            assert!(e < self.n, "element out of range");
            vals.push(e);
            if !self.checks_hold(i, &vals) {
                return Ok(false);
            }
        }
        self.sat(values.len(), &mut vals).map_err(|_| self.budget_error())
    }

    /// A winning strategy built from the smallest winning witnesses at
    /// every node, or `None` if the sentence is false.
    pub fn extract(&mut self) -> Result<Option<WitnessStrategy>, OracleError> {
        if !self.evaluate()? {
            return Ok(None);
        }
        let mut vals = Vec::with_capacity(self.lambda.len());
        self.extract_at(0, &mut vals)
            .map(Some)
            .map_err(|_| self.budget_error())
    }

    /// Whether every play of `w` satisfies the matrix.
    pub fn verify(&self, w: &WitnessStrategy) -> Result<bool, OracleError> {
        w.check_shape(&self.lambda, self.n)
            .map_err(OracleError::ShapeMismatch)?;
        let mut vals = Vec::with_capacity(self.lambda.len());
        Ok(self.verify_at(w, &mut vals))
    }

    fn verify_at(&self, w: &WitnessStrategy, vals: &mut Vec<Element>) -> bool {
        match w {
            WitnessStrategy::Leaf => true,
            WitnessStrategy::Offer { elements, children } => {
                let i = vals.len();
                elements.iter().zip(children).all(|(&e, c)| {
                    vals.push(e);
                    let ok = self.checks_hold(i, vals) && self.verify_at(c, vals);
                    vals.pop();
                    ok
                })
            }
        }
    }

    #[inline]
    fn checks_hold(&self, i: usize, vals: &[Element]) -> bool {
        self.checks[i].iter().all(|&ai| {
            let a = &self.atoms[ai];
            self.rels[a.rel].contains_with(|k| vals[a.args[k]])
        })
    }

    fn key(&self, i: usize, vals: &[Element]) -> MemoKey {
        let live = &self.live[i];
        if live.len() as u32 * self.key_bits <= 128 {
            let mut key = 0u128;
            for &v in live {
                key = key << self.key_bits | vals[v] as u128;
            }
            MemoKey::Packed(key)
        } else {
            MemoKey::Wide(live.iter().map(|&v| vals[v] as u32).collect())
        }
    }

    fn sat(&mut self, i: usize, vals: &mut Vec<Element>) -> Result<bool, OutOfBudget> {
        if i == self.lambda.len() {
            return Ok(true);
        }
        let key = self.key(i, vals);
        if let Some(&r) = self.memo[i].get(&key) {
            return Ok(r);
        }
        self.budget.tick()?;
        let result = if self.tail.as_ref().is_some_and(|t| t.start == i) {
            self.tail_solve(vals, VarOrder::SmallestDomain)?.is_some()
        } else {
            let need = self.lambda[i];
            let mut count = 0;
            let mut won = false;
            for e in 0..self.n {
                if count + (self.n - e) < need {
                    break;
                }
                vals.push(e);
                let ok = self.checks_hold(i, vals) && self.sat(i + 1, vals)?;
                vals.pop();
                if ok {
                    count += 1;
                    if count >= need {
                        won = true;
                        break;
                    }
                }
            }
            won
        };
        self.memo[i].insert(key, result);
        Ok(result)
    }

    /// Solves the all-`∃` suffix given the values of earlier variables.
    fn tail_solve(
        &mut self,
        vals: &[Element],
        order: VarOrder,
    ) -> Result<Option<Vec<Element>>, OutOfBudget> {
        let tail = self.tail.as_ref().expect("tail present");
        if tail.static_fail {
            return Ok(None);
        }
        let start = tail.start;
        let mut doms = tail.static_unary.clone();
        let mut extra: Vec<Con> = Vec::new();
        for &ai in &tail.dynamic {
            let a = &self.atoms[ai];
            let args: Vec<Arg> = a
                .args
                .iter()
                .map(|&v| if v < start { Arg::Fixed(vals[v]) } else { Arg::Var(v - start) })
                .collect();
            match lower_atom(&args, &self.rels[a.rel], self.n) {
                Lowered::Trivial => {}
                Lowered::Fail => return Ok(None),
                Lowered::Unary(v, mask) => doms[v] &= mask,
                Lowered::Con(c) => extra.push(c),
            }
        }
        if tail.csp.solve(&mut doms, &extra, order, &mut self.budget)? {
            Ok(Some(solution_values(&doms)))
        } else {
            Ok(None)
        }
    }

    fn extract_at(
        &mut self,
        i: usize,
        vals: &mut Vec<Element>,
    ) -> Result<WitnessStrategy, OutOfBudget> {
        if i == self.lambda.len() {
            return Ok(WitnessStrategy::Leaf);
        }
        self.budget.tick()?;
        if self.tail.as_ref().is_some_and(|t| t.start == i) {
            let sol = self
                .tail_solve(vals, VarOrder::Lexicographic)?
                .expect("extraction only visits winning positions");
            return Ok(sol.iter().rev().fold(WitnessStrategy::Leaf, |child, &e| {
                WitnessStrategy::Offer {
                    elements: vec![e],
                    children: vec![child],
                }
            }));
        }
        let need = self.lambda[i];
        let mut elements = Vec::with_capacity(need);
        for e in 0..self.n {
            if elements.len() == need {
                break;
            }
            vals.push(e);
            if self.checks_hold(i, vals) && self.sat(i + 1, vals)? {
                elements.push(e);
            }
            vals.pop();
        }
        debug_assert_eq!(elements.len(), need);
        let mut children = Vec::with_capacity(need);
        for &e in &elements {
            vals.push(e);
            children.push(self.extract_at(i + 1, vals)?);
            vals.pop();
        }
        Ok(WitnessStrategy::Offer { elements, children })
    }
}
