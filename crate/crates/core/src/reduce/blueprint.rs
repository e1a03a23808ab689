use super::ReduceError;
use crate::model::{Atom, Quantifier, Threshold};

/// A reusable piece of a reduction: fresh variables with their quantifier
/// block and atoms over fresh variables and attachment points.
///
/// `block` quantifies every fresh variable; it may also re-quantify
/// attachment points that the gadget owns (the universal path gadget binds
/// its endpoint).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetBlueprint {
    pub fresh: Vec<String>,
    pub block: Vec<Quantifier>,
    pub atoms: Vec<Atom>,
    pub attachments: Vec<String>,
}

/// A blueprint with its names resolved: fresh variables prefixed by a tag
/// and attachment points replaced by the caller's variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub fresh: Vec<String>,
    pub block: Vec<Quantifier>,
    pub atoms: Vec<Atom>,
}

impl GadgetBlueprint {
    fn rename(&self, name: &str, tag: &str, attach: &[String]) -> String {
        match self.attachments.iter().position(|a| a == name) {
            Some(i) => attach[i].clone(),
            None => format!("{tag}~{name}"),
        }
    }

    /// Instantiates the gadget. `attach` lists the caller's variables in the
    /// order of [`GadgetBlueprint::attachments`].
    pub fn instantiate(&self, tag: &str, attach: &[String]) -> GadgetInstance {
        assert_eq!(attach.len(), self.attachments.len(), "attachment count");
        GadgetInstance {
            fresh: self.fresh.iter().map(|f| self.rename(f, tag, attach)).collect(),
            block: self
                .block
                .iter()
                .map(|q| Quantifier::new(q.threshold, self.rename(&q.variable, tag, attach)))
                .collect(),
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom::new(&a.relation, a.args.iter().map(|v| self.rename(v, tag, attach))))
                .collect(),
        }
    }

    /// Checks that fresh names avoid the attachments and that the block
    /// covers every fresh variable.
    pub fn check(&self) -> Result<(), String> {
        if let Some(f) = self.fresh.iter().find(|f| self.attachments.contains(f)) {
            return Err(format!("fresh variable `{f}` is also an attachment"));
        }
        for f in &self.fresh {
            if !self.block.iter().any(|q| &q.variable == f) {
                return Err(format!("fresh variable `{f}` is not quantified"));
            }
        }
        for q in &self.block {
            if !self.fresh.contains(&q.variable) && !self.attachments.contains(&q.variable) {
                return Err(format!("block quantifies unknown `{}`", q.variable));
            }
        }
        Ok(())
    }
}

fn exists(j: usize, v: &str) -> Quantifier {
    Quantifier::new(Threshold::AtLeast(j), v)
}

/// The gadget `G_j`: attachments `x~1..x~j, y~1..y~j`, fresh `z~1..z~j, w`,
/// edges `x_a z_b`, `w y_b` and `w z_b`, quantified `∃^{≥j}` in the order
/// `z~1..z~j, w`. On `K_{2j+1}` it holds iff the two blocks differ.
pub fn gadget_gj(j: usize) -> Result<GadgetBlueprint, ReduceError> {
    if j < 2 {
        return Err(ReduceError::Parameter(format!("G_j needs j >= 2, got {j}")));
    }
    let xs: Vec<String> = (1..=j).map(|a| format!("x~{a}")).collect();
    let ys: Vec<String> = (1..=j).map(|b| format!("y~{b}")).collect();
    let zs: Vec<String> = (1..=j).map(|b| format!("z~{b}")).collect();
    let mut atoms = Vec::new();
    for x in &xs {
        for z in &zs {
            atoms.push(Atom::edge(x, z));
        }
    }
    for y in &ys {
        atoms.push(Atom::edge("w", y));
    }
    for z in &zs {
        atoms.push(Atom::edge("w", z));
    }
    let mut fresh = zs.clone();
    fresh.push("w".into());
    Ok(GadgetBlueprint {
        block: fresh.iter().map(|v| exists(j, v)).collect(),
        fresh,
        atoms,
        attachments: xs.into_iter().chain(ys).collect(),
    })
}

/// The path `π_x` through `pth~k~i` (`k = 1..n`, `i = 1..j-1`) ending at the
/// attachment `x`, with the block `Q_x`: `∃^{≥j}` on every `pth~k~1` and on
/// `x`, then `∃` on the remaining path vertices.
pub fn universal_path_gadget(n: usize, j: usize) -> Result<GadgetBlueprint, ReduceError> {
    if n < 3 || j < 2 || j >= n {
        return Err(ReduceError::Parameter(format!(
            "path gadget needs n >= 3 and 2 <= j < n, got n={n} j={j}"
        )));
    }
    let name = |k: usize, i: usize| format!("pth~{k}~{i}");
    let mut path: Vec<String> = Vec::new();
    for k in 1..=n {
        for i in 1..j {
            path.push(name(k, i));
        }
    }
    let fresh = path.clone();
    path.push("x".into());
    let atoms = path.windows(2).map(|w| Atom::edge(&w[0], &w[1])).collect();
    let mut block: Vec<Quantifier> = (1..=n).map(|k| exists(j, &name(k, 1))).collect();
    block.push(exists(j, "x"));
    for k in 1..=n {
        for i in 2..j {
            block.push(exists(1, &name(k, i)));
        }
    }
    Ok(GadgetBlueprint {
        fresh,
        block,
        atoms,
        attachments: vec!["x".into()],
    })
}

/// The even-cycle edge gadget: `3n/2` copies of `C_n` in a row, the first
/// being the fixed cycle (attachments `v~0..v~{n-1}`), with `y` at position
/// `n/2` of the last copy and a path of `n/2-2` vertices ending at `x`
/// hanging off position 0 of the last copy. Fresh vertices are `∃`.
pub fn even_cycle_gadget(n: usize) -> Result<GadgetBlueprint, ReduceError> {
    if n < 6 || n % 2 == 1 {
        return Err(ReduceError::Parameter(format!("even-cycle gadget needs even n >= 6, got {n}")));
    }
    let copies = 3 * n / 2;
    let cell = |c: usize, p: usize| -> String {
        if c == 1 {
            format!("v~{p}")
        } else if c == copies && p == n / 2 {
            "y".into()
        } else {
            format!("cp~{c}~{p}")
        }
    };
    let mut fresh = Vec::new();
    let mut atoms = Vec::new();
    for c in 2..=copies {
        for p in 0..n {
            let v = cell(c, p);
            if v != "y" {
                fresh.push(v);
            }
        }
    }
    for c in 2..=copies {
        for p in 0..n {
            atoms.push(Atom::edge(&cell(c, p), &cell(c, (p + 1) % n)));
            atoms.push(Atom::edge(&cell(c - 1, p), &cell(c, p)));
        }
    }
    // Arm of n/2-2 vertices; its last vertex is x.
    let arm_len = n / 2 - 2;
    let mut prev = cell(copies, 0);
    for t in 1..=arm_len {
        let v = if t == arm_len { "x".to_string() } else { format!("arm~{t}") };
        if v != "x" {
            fresh.push(v.clone());
        }
        atoms.push(Atom::edge(&prev, &v));
        prev = v;
    }
    let mut attachments = vec!["x".to_string(), "y".to_string()];
    attachments.extend((0..n).map(|p| format!("v~{p}")));
    Ok(GadgetBlueprint {
        block: fresh.iter().map(|v| exists(1, v)).collect(),
        fresh,
        atoms,
        attachments,
    })
}

/// The reflexive 4-cycle edge gadget: three 4-cycle layers `Y`, `W`, `Z`
/// stacked on the fixed cycle, each vertex `k` of a layer joined to `k` and
/// `k+1` of the next, with `y` at `Z3` and `x` pendant on `Z1`.
///
/// Attachments are `x`, `y` and the fixed layer `X1..X4`, which is
/// `z1, z4, z3, z2` of the fixed copy.
pub fn reflexive_c4_gadget() -> GadgetBlueprint {
    let layer = |l: &str, k: usize| -> String {
        if l == "Z" && k == 3 {
            "y".into()
        } else if l == "X" {
            format!("X{k}")
        } else {
            format!("{}~{k}", l.to_lowercase())
        }
    };
    let mut atoms = Vec::new();
    let mut fresh = Vec::new();
    for l in ["Y", "W", "Z"] {
        for k in 1..=4 {
            let v = layer(l, k);
            if v != "y" {
                fresh.push(v);
            }
        }
    }
    for (lower, upper) in [("X", "Y"), ("Y", "W"), ("W", "Z")] {
        for k in 1..=4 {
            atoms.push(Atom::edge(&layer(lower, k), &layer(upper, k)));
            atoms.push(Atom::edge(&layer(lower, k), &layer(upper, k % 4 + 1)));
        }
    }
    for l in ["Y", "W", "Z"] {
        for k in 1..=4 {
            atoms.push(Atom::edge(&layer(l, k), &layer(l, k % 4 + 1)));
        }
    }
    atoms.push(Atom::edge(&layer("Z", 1), "x"));
    GadgetBlueprint {
        block: fresh.iter().map(|v| exists(1, v)).collect(),
        fresh,
        atoms,
        attachments: ["x", "y", "X1", "X2", "X3", "X4"].map(String::from).to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gj_counts() {
        let g2 = gadget_gj(2).unwrap();
        assert_eq!(g2.fresh.len() + g2.attachments.len(), 7);
        assert_eq!(g2.atoms.len(), 8);
        let g3 = gadget_gj(3).unwrap();
        assert_eq!(g3.fresh.len() + g3.attachments.len(), 10);
        assert_eq!(g3.atoms.len(), 15);
        assert!(g3.check().is_ok());
        assert!(gadget_gj(1).is_err());
    }

    #[test]
    fn path_gadget_shape() {
        let p = universal_path_gadget(3, 2).unwrap();
        assert_eq!(p.fresh, vec!["pth~1~1", "pth~2~1", "pth~3~1"]);
        assert_eq!(p.atoms.len(), 3);
        assert!(p.block.iter().all(|q| q.threshold == Threshold::AtLeast(2)));
        assert_eq!(p.block.len(), 4);
        let p = universal_path_gadget(5, 3).unwrap();
        assert_eq!(p.fresh.len(), 10);
        assert_eq!(p.block.iter().filter(|q| q.threshold == Threshold::AtLeast(3)).count(), 6);
        assert!(p.check().is_ok());
    }

    #[test]
    fn even_gadget_size() {
        let g = even_cycle_gadget(6).unwrap();
        // 8 fresh copies of C6 minus y; the arm is x alone.
        assert_eq!(g.fresh.len(), 8 * 6 - 1);
        assert_eq!(g.atoms.len(), 8 * 12 + 1);
        assert!(g.check().is_ok());
        let g8 = even_cycle_gadget(8).unwrap();
        assert_eq!(g8.fresh.len(), 11 * 8 - 1 + 1);
    }

    #[test]
    fn c4_gadget_size() {
        let g = reflexive_c4_gadget();
        assert_eq!(g.fresh.len(), 11);
        // 24 edges between layers, 12 inside them, 1 for the pendant.
        assert_eq!(g.atoms.len(), 37);
        assert!(g.check().is_ok());
    }
}
