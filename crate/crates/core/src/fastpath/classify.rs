use std::collections::BTreeSet;
use std::fmt;

use super::FastpathError;
use crate::model::{build_template, FragmentSpec, Graph, ModelError, TemplateFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComplexityClass {
    InL,
    InP,
    NPComplete,
    NPHard,
    PspaceComplete,
    Open,
}

impl fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComplexityClass::InL => "L",
            ComplexityClass::InP => "P",
            ComplexityClass::NPComplete => "NP-complete",
            ComplexityClass::NPHard => "NP-hard",
            ComplexityClass::PspaceComplete => "Pspace-complete",
            ComplexityClass::Open => "Open",
        })
    }
}

/// A complexity class with the tag of the result it rests on. Open verdicts
/// carry no tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComplexityVerdict {
    pub class: ComplexityClass,
    pub citation: String,
}

impl ComplexityVerdict {
    fn new(class: ComplexityClass, citation: &str) -> Self {
        ComplexityVerdict {
            class,
            citation: citation.to_string(),
        }
    }

    pub fn open() -> Self {
        ComplexityVerdict::new(ComplexityClass::Open, "")
    }
}

impl fmt::Display for ComplexityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.citation.is_empty() {
            write!(f, "{}", self.class)
        } else {
            write!(f, "{} ({})", self.class, self.citation)
        }
    }
}

use ComplexityClass::*;

fn v(class: ComplexityClass, citation: &str) -> ComplexityVerdict {
    ComplexityVerdict::new(class, citation)
}

/// The complexity of the fragment over the family's template, as far as the
/// known classification results settle it.
pub fn classify(family: &TemplateFamily, frag: &FragmentSpec) -> Result<ComplexityVerdict, FastpathError> {
    let b = build_template(family)?;
    let n = b.domain_size();
    match frag {
        FragmentSpec::ThresholdSet(x) => {
            if x.is_empty() || x.contains(&0) {
                return Err(ModelError::InvalidFragment("empty or zero threshold".into()).into());
            }
            if let Some(&j) = x.iter().find(|&&j| j > n) {
                return Err(ModelError::InvalidFragment(format!(
                    "threshold {j} exceeds template size {n}"
                ))
                .into());
            }
            Ok(classify_thresholds(family, b.as_graph(), n, x))
        }
        FragmentSpec::BoundedPrefix(m) => Ok(match b.as_graph() {
            Some(g) if !g.has_loops() => classify_bounded_prefix(&g, *m),
            _ => ComplexityVerdict::open(),
        }),
    }
}

fn classify_thresholds(
    family: &TemplateFamily,
    graph: Option<Graph>,
    n: usize,
    x: &BTreeSet<usize>,
) -> ComplexityVerdict {
    match family {
        TemplateFamily::NAEBoolean => {
            return match x.iter().copied().collect::<Vec<_>>().as_slice() {
                [1] => v(NPComplete, "Sec 3 item 1"),
                [2] => v(InL, "Sec 3 item 2"),
                _ => v(PspaceComplete, "Sec 3 item 3"),
            }
        }
        TemplateFamily::SingleQuantifierTemplate(_, j) => {
            return if x.contains(j) {
                v(PspaceComplete, "Sec 3 item 3")
            } else if x.len() == 1 && x.contains(&n) {
                v(InL, "Sec 3 item 2")
            } else {
                ComplexityVerdict::open()
            };
        }
        _ => {}
    }
    let Some(g) = graph else {
        return ComplexityVerdict::open();
    };
    if g.has_loops() {
        return classify_reflexive(family, n, x);
    }
    if g.is_complete() && n >= 1 {
        return classify_clique(n, x);
    }
    if g.is_cycle() {
        return classify_cycle(n, x);
    }
    if x.len() == 1 && x.contains(&n) {
        return v(InL, "Sec 3 item 2");
    }
    if !g.is_bipartite() {
        return if x.len() == 1 && x.contains(&1) {
            v(NPComplete, "Hell-Nesetril")
        } else if x.contains(&1) {
            v(NPHard, "Hell-Nesetril")
        } else {
            ComplexityVerdict::open()
        };
    }
    classify_bipartite(family, &g, n, x)
}

fn classify_clique(n: usize, x: &BTreeSet<usize>) -> ComplexityVerdict {
    let half_down = n / 2;
    if n <= 2 || x.iter().all(|&j| j > half_down) {
        return v(InL, "Thm 1 i");
    }
    if x.len() == 1 && x.contains(&1) {
        return v(NPComplete, "Thm 1 ii");
    }
    // 1 < j < n/2, written as 2j < n.
    let low = x.iter().any(|&j| j > 1 && 2 * j < n);
    let one_and_high = x.contains(&1) && x.iter().any(|&j| j >= n.div_ceil(2) && j > 1);
    if low || one_and_high {
        return v(PspaceComplete, "Thm 1 iii");
    }
    ComplexityVerdict::open()
}

fn classify_cycle(n: usize, x: &BTreeSet<usize>) -> ComplexityVerdict {
    let even_high = n.is_multiple_of(2) && x.iter().all(|&j| j == 1 || j > n / 2);
    if n == 4 || !x.contains(&1) || even_high {
        return v(InL, "Thm 2 i");
    }
    if n % 2 == 1 && x.len() == 1 {
        return v(NPComplete, "Thm 2 ii");
    }
    v(PspaceComplete, "Thm 2 iii")
}

fn classify_reflexive(family: &TemplateFamily, n: usize, x: &BTreeSet<usize>) -> ComplexityVerdict {
    if x.len() == 1 && x.contains(&n) {
        return v(InL, "Sec 3 item 2");
    }
    if matches!(family, TemplateFamily::ReflexiveCycle(4)) && x.contains(&1) && x.contains(&4) {
        return v(PspaceComplete, "Cor c4*");
    }
    ComplexityVerdict::open()
}

fn classify_bipartite(
    family: &TemplateFamily,
    g: &Graph,
    n: usize,
    x: &BTreeSet<usize>,
) -> ComplexityVerdict {
    if g.complete_bipartite_sides().is_some() {
        return v(InL, "Prop complete-bipartite");
    }
    if x.iter().all(|&j| j == 1) {
        return v(InL, "Hell-Nesetril");
    }
    if x.iter().all(|&j| j == 1 || j == n) {
        return v(InL, "QCSP bipartite");
    }
    let big: Vec<usize> = x.iter().copied().filter(|&j| j != 1).collect();
    if let [j] = big[..] {
        if g.largest_side().is_some_and(|s| s < j) {
            return v(InL, "Prop bipartition");
        }
        if j == 2 && g.contains_c4() {
            return v(InL, "Prop cont-c4");
        }
        if j == 3 && n == 5 && g.is_path() {
            return v(InL, "Prop 13P5");
        }
        if let TemplateFamily::HjTemplate(hj) = family {
            if *hj == j && x.contains(&1) {
                return v(PspaceComplete, "Prop Hj");
            }
        }
        if j + 2 == n || j + 1 == n {
            return v(InL, "Prop tightness, experimental");
        }
    } else if let TemplateFamily::HjTemplate(hj) = family {
        if x.contains(&1) && x.contains(hj) {
            return v(PspaceComplete, "Prop Hj");
        }
    }
    ComplexityVerdict::open()
}

/// Smallest `m` for which the even-cycle or cycle-isolation reduction
/// certifies NP-hardness of `[2^m 1^*]` over a bipartite, `C_4`-free,
/// non-forest template.
pub(crate) fn hardness_prefix_bound(g: &Graph) -> Option<usize> {
    let girth = g.girth()?;
    if g.is_cycle() {
        return Some(g.order() / 2 + 3);
    }
    Some(crate::reduce::girth_prefix_length(g.diameter(), girth / 2))
}

fn classify_bounded_prefix(g: &Graph, m: usize) -> ComplexityVerdict {
    if !g.is_bipartite() {
        return v(NPComplete, "Thm 4");
    }
    if g.is_forest() || g.contains_c4() {
        return v(InP, "Thm 4");
    }
    if m == 0 {
        return v(InL, "Hell-Nesetril");
    }
    match hardness_prefix_bound(g) {
        Some(bound) if m >= bound => {
            if g.is_cycle() {
                v(NPComplete, "Prop 12C2j")
            } else {
                v(NPComplete, "Cor twins")
            }
        }
        _ => ComplexityVerdict::open(),
    }
}
