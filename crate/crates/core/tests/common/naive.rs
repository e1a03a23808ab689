//! A reference evaluator written straight from the counting semantics: no
//! memo table, no constraint propagation.

use xcsp::model::{Element, Sentence, Structure};

fn matrix_holds(b: &Structure, s: &Sentence, vals: &[Element]) -> bool {
    s.atoms().iter().all(|a| {
        let t: Vec<Element> = a
            .args
            .iter()
            .map(|v| vals[s.variable_index(v).expect("bound")])
            .collect();
        b.contains(&a.relation, &t)
    })
}

pub fn naive_evaluate(b: &Structure, s: &Sentence) -> bool {
    let n = b.domain_size();
    let ts = s.resolved_thresholds(n);
    fn rec(b: &Structure, s: &Sentence, ts: &[usize], vals: &mut Vec<Element>) -> bool {
        let i = vals.len();
        if i == ts.len() {
            return matrix_holds(b, s, vals);
        }
        let mut count = 0;
        for e in 0..b.domain_size() {
            vals.push(e);
            if rec(b, s, ts, vals) {
                count += 1;
            }
            vals.pop();
            if count >= ts[i] {
                return true;
            }
        }
        false
    }
    rec(b, s, &ts, &mut Vec::with_capacity(ts.len()))
}

/// Like [`naive_evaluate`], with `extra` added to the matrix as an
/// arbitrary predicate on the full assignment. Atoms are checked as soon as
/// their variables are bound, which keeps sparse graph sentences cheap.
pub fn naive_evaluate_with(b: &Structure, s: &Sentence, extra: &dyn Fn(&[Element]) -> bool) -> bool {
    let ts = s.resolved_thresholds(b.domain_size());
    // due[i]: atoms whose last-quantified variable is i.
    let mut due: Vec<Vec<(String, Vec<usize>)>> = vec![Vec::new(); ts.len()];
    for a in s.atoms() {
        let idx: Vec<usize> = a.args.iter().map(|v| s.variable_index(v).expect("bound")).collect();
        let last = *idx.iter().max().expect("atoms have arguments");
        due[last].push((a.relation.clone(), idx));
    }
    struct Ctx<'a> {
        b: &'a Structure,
        ts: Vec<usize>,
        due: Vec<Vec<(String, Vec<usize>)>>,
        extra: &'a dyn Fn(&[Element]) -> bool,
    }
    fn rec(c: &Ctx, vals: &mut Vec<Element>) -> bool {
        let i = vals.len();
        if i == c.ts.len() {
            return (c.extra)(vals);
        }
        let mut count = 0;
        for e in 0..c.b.domain_size() {
            vals.push(e);
            let ok = c.due[i].iter().all(|(rel, idx)| {
                let t: Vec<Element> = idx.iter().map(|&k| vals[k]).collect();
                c.b.contains(rel, &t)
            });
            if ok && rec(c, vals) {
                count += 1;
            }
            vals.pop();
            if count >= c.ts[i] {
                return true;
            }
        }
        false
    }
    let ctx = Ctx { b, ts, due, extra };
    rec(&ctx, &mut Vec::new())
}
