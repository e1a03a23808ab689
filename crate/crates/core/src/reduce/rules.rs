use super::blueprint::{even_cycle_gadget, gadget_gj, reflexive_c4_gadget, universal_path_gadget};
use super::ReduceError;
use crate::model::{
    build_template, Atom, Graph, Quantifier, Sentence, Structure, TemplateFamily, Threshold,
};

/// Incrementally assembled target sentence.
#[derive(Default)]
struct Builder {
    prefix: Vec<Quantifier>,
    atoms: Vec<Atom>,
}

impl Builder {
    fn quantify(&mut self, j: usize, v: impl Into<String>) {
        self.prefix.push(Quantifier::new(Threshold::AtLeast(j), v));
    }

    fn edge(&mut self, u: &str, v: &str) {
        self.atoms.push(Atom::edge(u, v));
    }

    fn clique(&mut self, vs: &[String]) {
        for (i, u) in vs.iter().enumerate() {
            for v in &vs[i + 1..] {
                self.edge(u, v);
            }
        }
    }

    fn finish(self) -> Result<Sentence, ReduceError> {
        Ok(Sentence::new(self.prefix, self.atoms)?)
    }
}

fn template(f: TemplateFamily) -> Structure {
    build_template(&f).expect("rule parameters validated")
}

/// Checks the source against its template, restricts its thresholds, and
/// reserves `~` for generated names.
fn check_source(s: &Sentence, b: &Structure, allowed: &[usize]) -> Result<Vec<usize>, ReduceError> {
    s.check_signature(b.signature())?;
    if let Some(v) = s.variables().find(|v| v.contains('~')) {
        return Err(ReduceError::ReservedName(v.to_string()));
    }
    let ts = s.resolved_thresholds(b.domain_size());
    if let Some(&j) = ts.iter().find(|j| !allowed.contains(j)) {
        return Err(ReduceError::Precondition(format!(
            "source threshold {j} not in {allowed:?}"
        )));
    }
    Ok(ts)
}

/// Gadget reductions encode graph colouring, whose inputs have no loops.
fn check_loop_free(s: &Sentence) -> Result<(), ReduceError> {
    match s.atoms().iter().find(|a| a.args.len() == 2 && a.args[0] == a.args[1]) {
        Some(a) => Err(ReduceError::Precondition(format!("loop on `{}`", a.args[0]))),
        None => Ok(()),
    }
}

fn edge_endpoints(a: &Atom) -> (&str, &str) {
    (&a.args[0], &a.args[1])
}

/// Quantified NAE-3SAT to `{j}`-CSP over `B_n`: every quantifier becomes
/// `∃^{≥j}` and former universals gain `U(x)`.
pub fn reduce_nae(j: usize, n: usize, s: &Sentence) -> Result<(Structure, Sentence), ReduceError> {
    if n < 3 || j < 2 || j >= n {
        return Err(ReduceError::Parameter(format!("need 3 <= n and 1 < j < n, got n={n} j={j}")));
    }
    let ts = check_source(s, &template(TemplateFamily::NAEBoolean), &[1, 2])?;
    let target = template(TemplateFamily::SingleQuantifierTemplate(n, j));
    let prefix = s
        .prefix()
        .iter()
        .map(|q| Quantifier::exists(j, q.variable.clone()))
        .collect();
    let mut atoms = s.atoms().to_vec();
    for (q, &t) in s.prefix().iter().zip(&ts) {
        if t == 2 {
            atoms.push(Atom::new("U", [q.variable.clone()]));
        }
    }
    Ok((target, Sentence::new(prefix, atoms)?))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The `j`-subsets of `{0..2j}` in lexicographic order; the `i`-th subset
/// encodes vertex `i` of `K_{C(2j+1, j)}`.
pub fn subset_bijection(j: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..=2 * j).combinations(j).collect()
}

/// Quantified `C(2j+1, j)`-colouring to `{j}`-CSP over `K_{2j+1}`.
pub fn reduce_clique_gj(j: usize, s: &Sentence) -> Result<Sentence, ReduceError> {
    let gadget = gadget_gj(j)?;
    let c = binomial(2 * j + 1, j);
    let ts = check_source(s, &template(TemplateFamily::Clique(c)), &[1, c])?;
    let block = |v: &str| -> Vec<String> { (1..=j).map(|i| format!("{v}~blk~{i}")).collect() };
    let mut b = Builder::default();
    for (q, &t) in s.prefix().iter().zip(&ts) {
        let v = &q.variable;
        let blk = block(v);
        if t == c {
            for i in 1..=j {
                let forcing: Vec<String> = (1..=j + 1).map(|k| format!("{v}~frc~{i}~{k}")).collect();
                for f in &forcing {
                    b.quantify(j, f.clone());
                }
                let mut clique = forcing;
                clique.push(blk[i - 1].clone());
                b.clique(&clique);
            }
        }
        for x in &blk {
            b.quantify(j, x.clone());
        }
    }
    for (e, a) in s.atoms().iter().enumerate() {
        let (u, v) = edge_endpoints(a);
        let attach: Vec<String> = block(u).into_iter().chain(block(v)).collect();
        let inst = gadget.instantiate(&format!("e{e}"), &attach);
        b.prefix.extend(inst.block);
        b.atoms.extend(inst.atoms);
    }
    b.finish()
}

/// `{j}`-CSP over `K_{2j+1}` to `{j}`-CSP over `K_n`: an outermost clique of
/// `n-2j-1` fresh `∃^{≥j}` variables joined to every variable.
pub fn pad_clique(j: usize, n: usize, s: &Sentence) -> Result<Sentence, ReduceError> {
    if j < 2 || n <= 2 * j + 1 {
        return Err(ReduceError::Parameter(format!("need j >= 2 and n > 2j+1, got j={j} n={n}")));
    }
    check_source(s, &template(TemplateFamily::Clique(2 * j + 1)), &[j])?;
    let pads: Vec<String> = (1..n - 2 * j).map(|k| format!("pad~{k}")).collect();
    let mut b = Builder::default();
    for p in &pads {
        b.quantify(j, p.clone());
    }
    b.prefix.extend(s.prefix().iter().cloned());
    b.clique(&pads);
    for p in &pads {
        for v in s.variables() {
            b.edge(p, v);
        }
    }
    b.atoms.extend(s.atoms().iter().cloned());
    b.finish()
}

/// QCSP over `K_n` to `{1, j}`-CSP over `K_n`: each universal `v` becomes an
/// `∃^{≥j}` preceded by `n-j` fresh `∃^{≥j}` variables forming a clique with it.
pub fn reduce_clique_one_j(n: usize, j: usize, s: &Sentence) -> Result<Sentence, ReduceError> {
    if j < 2 || j > n {
        return Err(ReduceError::Parameter(format!("need 1 < j <= n, got n={n} j={j}")));
    }
    let ts = check_source(s, &template(TemplateFamily::Clique(n)), &[1, n])?;
    let mut b = Builder::default();
    for (q, &t) in s.prefix().iter().zip(&ts) {
        let v = &q.variable;
        if t == 1 {
            b.quantify(1, v.clone());
            continue;
        }
        let mut clique: Vec<String> = (1..=n - j).map(|k| format!("{v}~clq~{k}")).collect();
        for f in &clique {
            b.quantify(j, f.clone());
        }
        b.quantify(j, v.clone());
        clique.push(v.clone());
        b.clique(&clique);
    }
    b.atoms.extend(s.atoms().iter().cloned());
    b.finish()
}

/// Replaces each universal of a QCSP over `C_n` by its path block `Q_x`,
/// appending the path atoms.
fn universals_to_paths(
    n: usize,
    j: usize,
    s: &Sentence,
    ts: &[usize],
    universal: usize,
    b: &mut Builder,
) -> Result<Vec<Atom>, ReduceError> {
    let gadget = universal_path_gadget(n, j)?;
    let mut path_atoms = Vec::new();
    for (q, &t) in s.prefix().iter().zip(ts) {
        if t == universal {
            let inst = gadget.instantiate(&q.variable, std::slice::from_ref(&q.variable));
            b.prefix.extend(inst.block);
            path_atoms.extend(inst.atoms);
        } else {
            b.quantify(1, q.variable.clone());
        }
    }
    Ok(path_atoms)
}

/// QCSP over odd `C_n` to `{1, j}`-CSP over `C_n`.
pub fn reduce_odd_cycle(n: usize, j: usize, s: &Sentence) -> Result<Sentence, ReduceError> {
    if n < 3 || n.is_multiple_of(2) || j < 2 || j >= n {
        return Err(ReduceError::Parameter(format!("need odd n >= 3 and 2 <= j < n, got n={n} j={j}")));
    }
    let ts = check_source(s, &template(TemplateFamily::Cycle(n)), &[1, n])?;
    let mut b = Builder::default();
    let paths = universals_to_paths(n, j, s, &ts, n, &mut b)?;
    b.atoms.extend(s.atoms().iter().cloned());
    b.atoms.extend(paths);
    b.finish()
}

/// Indices `α_k = k(j-1) - r - 1`, `k = 1..⌈(n+4)/(2(j-1))⌉`, of the fixed
/// cycle quantified `∃^{≥j}`, and the length parameter
/// `r = (-n/2-2) mod (j-1)`. The last index is `n/2+1`.
pub fn even_cycle_indices(n: usize, j: usize) -> (usize, Vec<usize>) {
    let step = (j - 1) as i64;
    let r = (-(n as i64) / 2 - 2).rem_euclid(step) as usize;
    let k_max = (n + 4).div_ceil(2 * (j - 1));
    let alphas: Vec<usize> = (1..=k_max).map(|k| k * (j - 1) - r - 1).collect();
    debug_assert_eq!(alphas.last(), Some(&(n / 2 + 1)));
    (r, alphas)
}

/// Instantiates one even-cycle gadget per source edge against the fixed
/// cycle `cycle`, appending atoms and returning gadget quantifiers.
fn even_gadgets(
    n: usize,
    s: &Sentence,
    cycle: &[String],
    tag: &str,
    rename: &dyn Fn(&str) -> String,
    b: &mut Builder,
) -> Result<Vec<Quantifier>, ReduceError> {
    let gadget = even_cycle_gadget(n)?;
    let mut block = Vec::new();
    for (e, a) in s.atoms().iter().enumerate() {
        let (x, y) = edge_endpoints(a);
        let mut attach = vec![rename(x), rename(y)];
        attach.extend(cycle.iter().cloned());
        let inst = gadget.instantiate(&format!("{tag}g{e}"), &attach);
        block.extend(inst.block);
        b.atoms.extend(inst.atoms);
    }
    Ok(block)
}

/// `n/2`-colouring (QCSP when `qcsp`, else CSP) to `{1, j}`-CSP over `C_n`.
pub fn reduce_even_cycle(n: usize, j: usize, s: &Sentence, qcsp: bool) -> Result<Sentence, ReduceError> {
    if n < 6 || n % 2 == 1 || j < 2 || j > n / 2 {
        return Err(ReduceError::Parameter(format!(
            "need even n >= 6 and 2 <= j <= n/2, got n={n} j={j}"
        )));
    }
    let k = n / 2;
    let allowed: &[usize] = if qcsp { &[1, k] } else { &[1] };
    let ts = check_source(s, &template(TemplateFamily::Clique(k)), allowed)?;
    check_loop_free(s)?;
    let (r, alphas) = even_cycle_indices(n, j);
    let cycle: Vec<String> = (0..n).map(|i| format!("fix~v~{i}")).collect();
    let path: Vec<String> = (0..=r).map(|t| format!("fix~w~{t}")).collect();
    let mut b = Builder::default();
    b.quantify(1, path[0].clone());
    for &a in &alphas {
        b.quantify(j, cycle[a].clone());
    }
    let paths = universals_to_paths(n, j, s, &ts, if qcsp { k } else { usize::MAX }, &mut b)?;
    for (i, v) in cycle.iter().enumerate() {
        if !alphas.contains(&i) {
            b.quantify(1, v.clone());
        }
    }
    for w in &path[1..] {
        b.quantify(1, w.clone());
    }
    for i in 0..n {
        b.edge(&cycle[i], &cycle[(i + 1) % n]);
    }
    for t in 0..r {
        b.edge(&path[t], &path[t + 1]);
    }
    b.edge(&path[r], &cycle[0]);
    let block = even_gadgets(n, s, &cycle, "", &|v| v.to_string(), &mut b)?;
    b.prefix.extend(block);
    b.atoms.extend(paths);
    b.finish()
}

/// The cycle-isolation prefix over `d+1` spine vertices: for each of the
/// `d-j+1` blocks, `j-1` closing vertices complete a `2j`-cycle with
/// `v_i..v_{i+j}`. Returns the spine, the closing vertices of each block
/// (the first is adjacent to `v_i`) and each block's cycle in cyclic order
/// from `v_i`.
pub fn girth_spine(d: usize, j: usize) -> (Vec<String>, Vec<Vec<String>>, Vec<Vec<String>>) {
    let spine: Vec<String> = (1..=d + 1).map(|i| format!("sp~v~{i}")).collect();
    let mut closing = Vec::new();
    let mut cycles = Vec::new();
    for i in 1..=d + 1 - j {
        let xs: Vec<String> = (1..j).map(|t| format!("sp~x{i}~{t}")).collect();
        let mut cycle: Vec<String> = spine[i - 1..=i - 1 + j].to_vec();
        cycle.extend(xs.iter().rev().cloned());
        closing.push(xs);
        cycles.push(cycle);
    }
    (spine, closing, cycles)
}

/// Number of `∃^{≥2}` variables the cycle-isolation prefix uses.
pub fn girth_prefix_length(d: usize, j: usize) -> usize {
    (d + 1) + (d + 1).saturating_sub(j)
}

fn push_isolation_prefix(b: &mut Builder, d: usize, j: usize) -> Vec<Vec<String>> {
    let (spine, closing, cycles) = girth_spine(d, j);
    for v in spine.iter().chain(closing.iter().map(|xs| &xs[0])) {
        b.quantify(2, v.clone());
    }
    for xs in &closing {
        for x in &xs[1..] {
            b.quantify(1, x.clone());
        }
    }
    for w in spine.windows(2) {
        b.edge(&w[0], &w[1]);
    }
    for cycle in &cycles {
        // Spine edges are already present; close the cycle through the extras.
        for t in j..2 * j {
            b.edge(&cycle[t], &cycle[(t + 1) % (2 * j)]);
        }
    }
    cycles
}

/// The cycle-isolation prefix on its own, with the block cycles (each a
/// list of variable names in cyclic order).
pub fn isolation_prefix(d: usize, j: usize) -> Result<(Sentence, Vec<Vec<String>>), ReduceError> {
    if j < 3 || d < j {
        return Err(ReduceError::Parameter(format!("need j >= 3 and d >= j, got d={d} j={j}")));
    }
    let mut b = Builder::default();
    let cycles = push_isolation_prefix(&mut b, d, j);
    Ok((b.finish()?, cycles))
}

/// CSP over `K_j` to `[2^m 1^*]`-CSP over a bipartite `h` of girth `2j`.
///
/// The spine and the first closing vertex of every block are `∃^{≥2}`, so
/// the Adversary steers each block away from retracing the spine; the other
/// closing vertices are `∃`. Every block gets its own copy of the source
/// variables and edge gadgets.
pub fn girth_isolation(h: &Structure, s: &Sentence) -> Result<Sentence, ReduceError> {
    let g: Graph = h
        .as_graph()
        .ok_or_else(|| ReduceError::Parameter("template is not a graph".into()))?;
    if !g.is_bipartite() {
        return Err(ReduceError::Parameter("template is not bipartite".into()));
    }
    let girth = g
        .girth()
        .ok_or_else(|| ReduceError::Parameter("template is acyclic".into()))?;
    let j = girth / 2;
    if j < 3 {
        return Err(ReduceError::Parameter(format!("girth {girth} is below 6")));
    }
    check_source(s, &template(TemplateFamily::Clique(j)), &[1])?;
    check_loop_free(s)?;
    let mut b = Builder::default();
    let cycles = push_isolation_prefix(&mut b, g.diameter(), j);
    let mut blocks = Vec::new();
    for (i, cycle) in cycles.iter().enumerate() {
        let copy = |v: &str| format!("{v}~cp~{}", i + 1);
        for q in s.prefix() {
            b.quantify(1, copy(&q.variable));
        }
        blocks.extend(even_gadgets(2 * j, s, cycle, &format!("b{}", i + 1), &copy, &mut b)?);
    }
    b.prefix.extend(blocks);
    b.finish()
}

/// QCSP over `K_4` to `{1,2,3,4}`-CSP over the reflexive 4-cycle.
pub fn reduce_reflexive_c4(s: &Sentence) -> Result<Sentence, ReduceError> {
    let ts = check_source(s, &template(TemplateFamily::Clique(4)), &[1, 4])?;
    check_loop_free(s)?;
    let z: Vec<String> = (1..=4).map(|k| format!("fix~z~{k}")).collect();
    let mut b = Builder::default();
    for (v, j) in z.iter().zip([1, 2, 3, 2]) {
        b.quantify(j, v.clone());
    }
    for (q, &t) in s.prefix().iter().zip(&ts) {
        b.quantify(t, q.variable.clone());
    }
    for k in 0..4 {
        b.edge(&z[k], &z[(k + 1) % 4]);
    }
    let gadget = reflexive_c4_gadget();
    // The gadget's fixed layer X1..X4 is z1, z4, z3, z2.
    let layer = [z[0].clone(), z[3].clone(), z[2].clone(), z[1].clone()];
    for (e, a) in s.atoms().iter().enumerate() {
        let (x, y) = edge_endpoints(a);
        let mut attach = vec![x.to_string(), y.to_string()];
        attach.extend(layer.iter().cloned());
        let inst = gadget.instantiate(&format!("g{e}"), &attach);
        b.prefix.extend(inst.block);
        b.atoms.extend(inst.atoms);
    }
    b.finish()
}

/// Rewrites `∃^{≥2}` and `∃^{≥3}` over the reflexive 4-cycle with universal
/// neighbours: `∃^{≥2} x` becomes `∀ x~pr~1 ∃ x` with `E(x~pr~1, x)`, and
/// `∃^{≥3} x` becomes `∀ x~pr~2 ∀ x~pr~1 ∃ x` with both edges.
pub fn expand_c4star_macros(s: &Sentence) -> Result<Sentence, ReduceError> {
    let ts = check_source(s, &template(TemplateFamily::ReflexiveCycle(4)), &[1, 2, 3, 4])?;
    let mut prefix = Vec::new();
    let mut extra = Vec::new();
    for (q, &t) in s.prefix().iter().zip(&ts) {
        let x = &q.variable;
        match t {
            1 => prefix.push(Quantifier::exists(1, x.clone())),
            4 => prefix.push(Quantifier::forall(x.clone())),
            _ => {
                for p in (1..t).rev() {
                    let primed = format!("{x}~pr~{p}");
                    prefix.push(Quantifier::forall(primed.clone()));
                    extra.push(Atom::edge(&primed, x));
                }
                prefix.push(Quantifier::exists(1, x.clone()));
            }
        }
    }
    let mut atoms = s.atoms().to_vec();
    atoms.extend(extra);
    Ok(Sentence::new(prefix, atoms)?)
}
