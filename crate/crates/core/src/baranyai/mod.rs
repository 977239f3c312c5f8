//! Realizing admissible types as disjoint partial spread systems.
//!
//! The type is first made full. Starting from all-empty blocks, elements
//! `1..=N` are inserted one at a time; each insertion solves an integral
//! flow that rounds the canonical fractional assignment, which keeps the
//! counting identity
//!
//! ```text
//! #{blocks equal to S with target ℓ} = C(N − τ, ℓ − |S|)   for all S ⊆ {1..τ}
//! ```
//!
//! true after every step. At `τ = N` every block has reached its target.

mod network;
mod spread_system;

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

pub use network::{
    integral_step_assignment, ArcTarget, Cell, Fraction, GroupChoice, GroupClass, StepArc,
    StepNetwork,
};
pub use spread_system::{Spread, SpreadSystem};

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::spread_types::{make_full, Role, VType};

/// Ground sets above this size do not fit the bitmask block encoding.
pub const MAX_GROUND_SET: usize = 63;

/// Default limit on `N` for realization (a full type has `2^N` blocks).
pub const DEFAULT_CAP_N: usize = 16;

/// A block under construction: the elements placed so far and its final size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    /// Bit `i` set means element `i + 1` is in the block.
    pub members: u64,
    pub target: u32,
}

impl Block {
    pub fn size(&self) -> u32 {
        self.members.count_ones()
    }

    pub fn residual(&self) -> u32 {
        self.target - self.size()
    }

    pub fn elements(&self) -> Vec<usize> {
        mask_elements(self.members)
    }
}

pub(crate) fn mask_elements(mask: u64) -> Vec<usize> {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

/// One future partial spread.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub blocks: Vec<Block>,
    pub role: Role,
}

/// A `τ`-realization of a full type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationState {
    n: usize,
    tau: usize,
    groups: Vec<Group>,
}

impl RealizationState {
    /// Assemble a state directly; nothing is checked (see
    /// [`check_tau_realization`]).
    pub fn from_parts(n: usize, tau: usize, groups: Vec<Group>) -> Self {
        RealizationState { n, tau, groups }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn groups_mut(&mut self) -> &mut [Group] {
        &mut self.groups
    }

    pub fn is_complete(&self) -> bool {
        self.tau == self.n
    }

    /// `χ = k − 2^{N−1}`: groups that skip each element.
    pub fn skip_count(&self) -> Option<u64> {
        (self.groups.len() as u64).checked_sub(1u64 << (self.n.max(1) - 1))
    }

    pub fn block_count(&self) -> usize {
        self.groups.iter().map(|g| g.blocks.len()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealizeOptions {
    pub cap_n: usize,
    pub include_fill: bool,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions {
            cap_n: DEFAULT_CAP_N,
            include_fill: false,
        }
    }
}

/// All blocks empty: a 0-realization of a full admissible type.
pub fn init_realization(full_type: &VType) -> Result<RealizationState> {
    let n = full_type.n();
    if n == 0 || n > MAX_GROUND_SET {
        return Err(Error::InvalidParameters(format!(
            "realization needs 1 <= N <= {MAX_GROUND_SET} (got {n})"
        )));
    }
    full_type.ensure_full()?;
    let mut groups = Vec::new();
    for (shape, mult, role) in full_type.all_shapes() {
        let copies = mult.to_usize().ok_or_else(|| {
            Error::InvalidParameters(format!("multiplicity of {shape} is too large"))
        })?;
        let blocks: Vec<Block> = shape
            .entries()
            .iter()
            .map(|&target| Block { members: 0, target })
            .collect();
        groups.extend(
            std::iter::repeat_with(|| Group {
                blocks: blocks.clone(),
                role,
            })
            .take(copies),
        );
    }
    Ok(RealizationState { n, tau: 0, groups })
}

/// Insert element `τ + 1`.
pub fn advance(state: &RealizationState) -> Result<RealizationState> {
    let net = StepNetwork::build(state)?;
    net.check_conservation()
        .map_err(|reason| Error::Infeasible {
            tau: state.tau,
            reason,
        })?;
    let choices = integral_step_assignment(&net)?;
    let bit = 1u64 << state.tau;
    let mut next = state.clone();
    for (group, choice) in next.groups.iter_mut().zip(choices) {
        if let GroupChoice::Block(slot) = choice {
            group.blocks[slot].members |= bit;
        }
    }
    next.tau += 1;
    Ok(next)
}

/// What went wrong with a purported `τ`-realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealizationVerdict {
    Ok,
    /// `observed` blocks equal `set` with target `target`, `expected` required.
    CountMismatch {
        set: Vec<usize>,
        target: u32,
        observed: u64,
        expected: u64,
    },
    /// A block uses an element beyond `τ`.
    OutsidePrefix {
        group: usize,
        block: usize,
    },
    /// A block is larger than its target, or needs more elements than remain.
    BadResidual {
        group: usize,
        block: usize,
    },
    /// Two blocks of one group share an element.
    Overlap {
        group: usize,
    },
}

impl RealizationVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, RealizationVerdict::Ok)
    }
}

/// Check the counting identity and the per-group structural invariants.
pub fn check_tau_realization(state: &RealizationState) -> RealizationVerdict {
    let (n, tau) = (state.n, state.tau);
    let remaining = n.saturating_sub(tau) as i64;
    let expected = |size: u32, target: u32| {
        binomial(remaining, target as i64 - size as i64)
            .to_u64()
            .unwrap_or(u64::MAX)
    };

    let mut counts: BTreeMap<(u64, u32), u64> = BTreeMap::new();
    for (g, group) in state.groups.iter().enumerate() {
        let mut seen = 0u64;
        for (j, b) in group.blocks.iter().enumerate() {
            if tau < 64 && b.members >> tau != 0 {
                return RealizationVerdict::OutsidePrefix { group: g, block: j };
            }
            if b.size() > b.target || (b.target - b.size()) as i64 > remaining {
                return RealizationVerdict::BadResidual { group: g, block: j };
            }
            if seen & b.members != 0 {
                return RealizationVerdict::Overlap { group: g };
            }
            seen |= b.members;
            *counts.entry((b.members, b.target)).or_default() += 1;
        }
    }

    for (&(members, target), &observed) in &counts {
        let want = expected(members.count_ones(), target);
        if observed != want {
            return RealizationVerdict::CountMismatch {
                set: mask_elements(members),
                target,
                observed,
                expected: want,
            };
        }
    }

    // Every realized pair matches; any shortfall is a pair that was never realized.
    let total: u64 = counts.values().sum();
    if n < 64 && total != 1u64 << n {
        for mask in 0..(1u64 << tau) {
            for target in mask.count_ones()..=n as u32 {
                let want = expected(mask.count_ones(), target);
                if want > 0 && !counts.contains_key(&(mask, target)) {
                    return RealizationVerdict::CountMismatch {
                        set: mask_elements(mask),
                        target,
                        observed: 0,
                        expected: want,
                    };
                }
            }
        }
    }
    RealizationVerdict::Ok
}

/// Run every step from `τ = 0` to `τ = N`.
pub fn realize_full(full_type: &VType) -> Result<RealizationState> {
    let mut state = init_realization(full_type)?;
    while !state.is_complete() {
        state = advance(&state)?;
    }
    Ok(state)
}

/// A disjoint partial spread system whose requested part has exactly the
/// given type.
pub fn realize(ty: &VType, options: RealizeOptions) -> Result<SpreadSystem> {
    if ty.n() > options.cap_n {
        return Err(Error::CapExceeded {
            what: "realization",
            n: ty.n(),
            cap: options.cap_n,
        });
    }
    ty.ensure_admissible()?;
    let full = make_full(ty)?;
    let state = realize_full(&full)?;
    let system = SpreadSystem::from_state(&state);
    Ok(if options.include_fill {
        system
    } else {
        system.requested_only()
    })
}

#[cfg(test)]
mod tests;
