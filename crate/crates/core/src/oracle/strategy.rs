use crate::model::Element;

/// A Prover strategy: at each quantifier a set of witnesses, and for every
/// witness Adversary may pick, the strategy for the rest of the prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WitnessStrategy {
    /// End of the prefix.
    Leaf,
    /// `children[i]` continues the play after Adversary picks `elements[i]`.
    Offer {
        elements: Vec<Element>,
        children: Vec<WitnessStrategy>,
    },
}

impl WitnessStrategy {
    /// Length of the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            WitnessStrategy::Leaf => 0,
            WitnessStrategy::Offer { children, .. } => {
                1 + children.iter().map(Self::depth).max().unwrap_or(0)
            }
        }
    }

    /// Number of `Offer` nodes.
    pub fn offer_count(&self) -> usize {
        match self {
            WitnessStrategy::Leaf => 0,
            WitnessStrategy::Offer { children, .. } => {
                1 + children.iter().map(Self::offer_count).sum::<usize>()
            }
        }
    }

    /// Every complete play, as the sequence of values Adversary picked.
    pub fn plays(&self) -> Vec<Vec<Element>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_plays(&mut path, &mut out);
        out
    }

    fn collect_plays(&self, path: &mut Vec<Element>, out: &mut Vec<Vec<Element>>) {
        match self {
            WitnessStrategy::Leaf => out.push(path.clone()),
            WitnessStrategy::Offer { elements, children } => {
                for (&e, c) in elements.iter().zip(children) {
                    path.push(e);
                    c.collect_plays(path, out);
                    path.pop();
                }
            }
        }
    }

    /// Checks the tree has exactly `thresholds[d]` distinct elements below
    /// `domain_size` at every node of depth `d` and depth
    /// `thresholds.len()` everywhere. Returns a description of the first
    /// violation.
    pub fn check_shape(&self, thresholds: &[usize], domain_size: usize) -> Result<(), String> {
        self.check_shape_at(thresholds, domain_size, 0)
    }

    fn check_shape_at(&self, thresholds: &[usize], n: usize, depth: usize) -> Result<(), String> {
        match (self, thresholds.get(depth)) {
            (WitnessStrategy::Leaf, None) => Ok(()),
            (WitnessStrategy::Leaf, Some(_)) => {
                Err(format!("play ends at depth {depth}, prefix has {}", thresholds.len()))
            }
            (WitnessStrategy::Offer { .. }, None) => {
                Err(format!("offer at depth {depth} beyond the prefix"))
            }
            (WitnessStrategy::Offer { elements, children }, Some(&j)) => {
                if elements.len() != j {
                    return Err(format!(
                        "offer of {} elements at depth {depth}, threshold is {j}",
                        elements.len()
                    ));
                }
                if children.len() != elements.len() {
                    return Err(format!("offer at depth {depth} has {} children", children.len()));
                }
                if let Some(&e) = elements.iter().find(|&&e| e >= n) {
                    return Err(format!("element {e} out of range at depth {depth}"));
                }
                let mut sorted = elements.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(format!("repeated element offered at depth {depth}"));
                }
                children
                    .iter()
                    .try_for_each(|c| c.check_shape_at(thresholds, n, depth + 1))
            }
        }
    }
}
