//! A small arc-consistency CSP engine over domains of at most 64 elements,
//! represented as `u64` masks.

use std::collections::VecDeque;
use std::sync::Arc;

use super::relation::RelIndex;
use crate::model::Element;

pub(crate) const MAX_MASK_DOMAIN: usize = 64;

/// Thrown when the node budget runs out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct OutOfBudget;

#[derive(Debug)]
pub(crate) struct Budget {
    pub(crate) used: u64,
    pub(crate) limit: u64,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Self {
        Budget { used: 0, limit }
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<(), OutOfBudget> {
        self.used += 1;
        if self.used > self.limit {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Con {
    /// `(x, y)` must be an edge; `x != y`.
    Bin {
        x: usize,
        y: usize,
        fwd: Arc<[u64]>,
        bwd: Arc<[u64]>,
    },
    /// Allowed tuples over pairwise distinct variables.
    Table {
        scope: Vec<usize>,
        tuples: Arc<Vec<Vec<Element>>>,
    },
}

impl Con {
    fn scope_contains(&self, v: usize) -> bool {
        match self {
            Con::Bin { x, y, .. } => *x == v || *y == v,
            Con::Table { scope, .. } => scope.contains(&v),
        }
    }

    fn for_each_var(&self, mut f: impl FnMut(usize)) {
        match self {
            Con::Bin { x, y, .. } => {
                f(*x);
                f(*y);
            }
            Con::Table { scope, .. } => scope.iter().copied().for_each(f),
        }
    }
}

/// An atom argument: a search variable or an already fixed element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Arg {
    Var(usize),
    Fixed(Element),
}

/// The effect of one atom on a CSP.
#[derive(Debug, Clone)]
pub(crate) enum Lowered {
    Trivial,
    Fail,
    Unary(usize, u64),
    Con(Con),
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Turns an atom whose arguments are variables or fixed elements into a
/// unary mask or a constraint over its distinct variables.
pub(crate) fn lower_atom(args: &[Arg], rel: &RelIndex, n: usize) -> Lowered {
    let mut vars: Vec<usize> = Vec::new();
    for a in args {
        if let Arg::Var(v) = a {
            if !vars.contains(v) {
                vars.push(*v);
            }
        }
    }
    let instantiate = |vals: &[Element]| -> Vec<Element> {
        args.iter()
            .map(|a| match a {
                Arg::Fixed(e) => *e,
                Arg::Var(v) => vals[vars.iter().position(|w| w == v).unwrap()],
            })
            .collect()
    };
    match vars.len() {
        0 => {
            if rel.contains(&instantiate(&[])) {
                Lowered::Trivial
            } else {
                Lowered::Fail
            }
        }
        1 => {
            let mask = if rel.has_masks() {
                match (args[0], args[1]) {
                    (Arg::Fixed(a), Arg::Var(_)) => rel.fwd[a],
                    (Arg::Var(_), Arg::Fixed(b)) => rel.bwd[b],
                    _ => rel.diagonal_mask(),
                }
            } else {
                (0..n)
                    .filter(|&e| rel.contains(&instantiate(&[e])))
                    .fold(0u64, |m, e| m | 1 << e)
            };
            if mask == 0 {
                Lowered::Fail
            } else if mask == full_mask(n) {
                Lowered::Trivial
            } else {
                Lowered::Unary(vars[0], mask)
            }
        }
        2 if rel.has_masks() => {
            let (Arg::Var(x), Arg::Var(y)) = (args[0], args[1]) else {
                unreachable!("binary atom with two distinct variables")
            };
            Lowered::Con(Con::Bin {
                x,
                y,
                fwd: rel.fwd.clone(),
                bwd: rel.bwd.clone(),
            })
        }
        _ => {
            let mut tuples = Vec::new();
            'tuple: for t in &rel.tuples {
                let mut proj = vec![usize::MAX; vars.len()];
                for (pos, a) in args.iter().enumerate() {
                    match *a {
                        Arg::Fixed(e) if t[pos] != e => continue 'tuple,
                        Arg::Fixed(_) => {}
                        Arg::Var(v) => {
                            let k = vars.iter().position(|&w| w == v).unwrap();
                            if proj[k] != usize::MAX && proj[k] != t[pos] {
                                continue 'tuple;
                            }
                            proj[k] = t[pos];
                        }
                    }
                }
                tuples.push(proj);
            }
            if tuples.is_empty() {
                return Lowered::Fail;
            }
            tuples.sort_unstable();
            tuples.dedup();
            Lowered::Con(Con::Table {
                scope: vars,
                tuples: Arc::new(tuples),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum VarOrder {
    /// First unfixed variable; with ascending values this finds the
    /// lexicographically least solution.
    Lexicographic,
    /// Smallest domain first.
    SmallestDomain,
}

/// A fixed constraint network; per-query constraints may be supplied to
/// [`Csp::solve`].
#[derive(Debug, Clone, Default)]
pub(crate) struct Csp {
    nvars: usize,
    cons: Vec<Con>,
    var_cons: Vec<Vec<usize>>,
}

struct Network<'a> {
    base: &'a Csp,
    extra: &'a [Con],
}

impl Network<'_> {
    fn con(&self, i: usize) -> &Con {
        if i < self.base.cons.len() {
            &self.base.cons[i]
        } else {
            &self.extra[i - self.base.cons.len()]
        }
    }

    fn len(&self) -> usize {
        self.base.cons.len() + self.extra.len()
    }

    fn cons_on(&self, v: usize, mut f: impl FnMut(usize)) {
        self.base.var_cons[v].iter().copied().for_each(&mut f);
        let off = self.base.cons.len();
        for (i, c) in self.extra.iter().enumerate() {
            if c.scope_contains(v) {
                f(off + i);
            }
        }
    }

    /// Enforces arc consistency; returns false on a wipe-out. On return the
    /// queue is empty and no constraint is flagged as queued.
    fn propagate(&self, doms: &mut [u64], mut queue: VecDeque<usize>, queued: &mut [bool]) -> bool {
        let ok = self.drain(doms, &mut queue, queued);
        for ci in queue {
            queued[ci] = false;
        }
        ok
    }

    fn drain(&self, doms: &mut [u64], queue: &mut VecDeque<usize>, queued: &mut [bool]) -> bool {
        while let Some(ci) = queue.pop_front() {
            queued[ci] = false;
            let mut changed: [usize; 8] = [usize::MAX; 8];
            let mut changed_more: Vec<usize> = Vec::new();
            let mut nchanged = 0;
            let mut note = |v: usize| {
                if nchanged < 8 {
                    changed[nchanged] = v;
                } else {
                    changed_more.push(v);
                }
                nchanged += 1;
            };
            match self.con(ci) {
                Con::Bin { x, y, fwd, bwd } => {
                    let (dx, dy) = (doms[*x], doms[*y]);
                    let nx = filter_mask(dx, |a| fwd[a] & dy != 0);
                    if nx == 0 {
                        return false;
                    }
                    let ny = filter_mask(dy, |b| bwd[b] & nx != 0);
                    if ny == 0 {
                        return false;
                    }
                    if nx != dx {
                        doms[*x] = nx;
                        note(*x);
                    }
                    if ny != dy {
                        doms[*y] = ny;
                        note(*y);
                    }
                }
                Con::Table { scope, tuples } => {
                    let mut support = vec![0u64; scope.len()];
                    for t in tuples.iter() {
                        if scope.iter().zip(t).all(|(&v, &e)| doms[v] >> e & 1 == 1) {
                            for (s, &e) in support.iter_mut().zip(t) {
                                *s |= 1 << e;
                            }
                        }
                    }
                    for (&v, &s) in scope.iter().zip(&support) {
                        if s == 0 {
                            return false;
                        }
                        if s != doms[v] {
                            doms[v] = s;
                            note(v);
                        }
                    }
                }
            }
            for v in changed.iter().take(nchanged.min(8)).copied().chain(changed_more) {
                self.cons_on(v, |cj| {
                    if cj != ci && !queued[cj] {
                        queued[cj] = true;
                        queue.push_back(cj);
                    }
                });
            }
        }
        true
    }

    fn search(
        &self,
        doms: &mut Vec<u64>,
        order: VarOrder,
        budget: &mut Budget,
        queued: &mut [bool],
    ) -> Result<bool, OutOfBudget> {
        budget.tick()?;
        let pick = match order {
            VarOrder::Lexicographic => doms.iter().position(|d| d.count_ones() > 1),
            VarOrder::SmallestDomain => doms
                .iter()
                .enumerate()
                .filter(|(_, d)| d.count_ones() > 1)
                .min_by_key(|(_, d)| d.count_ones())
                .map(|(i, _)| i),
        };
        let Some(v) = pick else {
            return Ok(true);
        };
        let mut rest = doms[v];
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut trial = doms.clone();
            trial[v] = 1 << a;
            let mut queue = VecDeque::new();
            self.cons_on(v, |ci| {
                if !queued[ci] {
                    queued[ci] = true;
                    queue.push_back(ci);
                }
            });
            if self.propagate(&mut trial, queue, queued) && self.search(&mut trial, order, budget, queued)? {
                *doms = trial;
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn filter_mask(d: u64, keep: impl Fn(usize) -> bool) -> u64 {
    let mut out = d;
    let mut rest = d;
    while rest != 0 {
        let a = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if !keep(a) {
            out &= !(1 << a);
        }
    }
    out
}

impl Csp {
    pub(crate) fn new(nvars: usize, cons: Vec<Con>) -> Self {
        let mut var_cons = vec![Vec::new(); nvars];
        for (i, c) in cons.iter().enumerate() {
            c.for_each_var(|v| var_cons[v].push(i));
        }
        Csp {
            nvars,
            cons,
            var_cons,
        }
    }

    /// Searches for a solution within `doms`. On success `doms` holds the
    /// solution as singleton masks.
    pub(crate) fn solve(
        &self,
        doms: &mut Vec<u64>,
        extra: &[Con],
        order: VarOrder,
        budget: &mut Budget,
    ) -> Result<bool, OutOfBudget> {
        debug_assert_eq!(doms.len(), self.nvars);
        if doms.contains(&0) {
            return Ok(false);
        }
        let net = Network { base: self, extra };
        let mut queued = vec![true; net.len()];
        let queue: VecDeque<usize> = (0..net.len()).collect();
        if !net.propagate(doms, queue, &mut queued) {
            return Ok(false);
        }
        net.search(doms, order, budget, &mut queued)
    }
}

/// Reads the solution out of singleton masks.
pub(crate) fn solution_values(doms: &[u64]) -> Vec<Element> {
    doms.iter().map(|d| d.trailing_zeros() as usize).collect()
}
