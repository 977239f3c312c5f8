use std::collections::HashSet;

use super::{mask_elements, RealizationState};
use crate::spread_types::{Role, Shape};

/// One partial spread; blocks are sorted element lists ordered by size,
/// then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spread {
    pub blocks: Vec<Vec<usize>>,
    pub role: Role,
}

impl Spread {
    pub fn new(mut blocks: Vec<Vec<usize>>, role: Role) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Spread { blocks, role }
    }

    pub fn shape(&self) -> Shape {
        Shape::new(self.blocks.iter().map(|b| b.len() as u32).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpreadSystem {
    pub n: usize,
    pub spreads: Vec<Spread>,
}

impl SpreadSystem {
    pub fn from_state(state: &RealizationState) -> Self {
        let spreads = state
            .groups()
            .iter()
            .map(|g| {
                Spread::new(
                    g.blocks.iter().map(|b| mask_elements(b.members)).collect(),
                    g.role,
                )
            })
            .collect();
        SpreadSystem {
            n: state.n(),
            spreads,
        }
    }

    pub fn requested_only(mut self) -> Self {
        self.spreads.retain(|s| s.role == Role::Requested);
        self
    }

    pub fn requested(&self) -> impl Iterator<Item = &Spread> {
        self.spreads.iter().filter(|s| s.role == Role::Requested)
    }

    /// Blocks inside `{1..N}`, pairwise disjoint within a spread, and no
    /// block shared by two spreads (nor repeated inside one).
    pub fn check_structure(&self) -> Result<(), String> {
        let mut seen: HashSet<&[usize]> = HashSet::new();
        for (i, spread) in self.spreads.iter().enumerate() {
            let mut used = vec![false; self.n + 1];
            for block in &spread.blocks {
                if block.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(format!("spread {i}: block {block:?} is not a sorted set"));
                }
                for &x in block {
                    if x == 0 || x > self.n {
                        return Err(format!("spread {i}: element {x} outside 1..={}", self.n));
                    }
                    if used[x] {
                        return Err(format!("spread {i}: element {x} appears in two blocks"));
                    }
                    used[x] = true;
                }
                if !seen.insert(block) {
                    return Err(format!("block {block:?} appears twice in the system"));
                }
            }
        }
        Ok(())
    }
}
