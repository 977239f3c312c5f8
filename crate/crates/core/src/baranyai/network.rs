//! One element-insertion step as an exact-demand assignment.
//!
//! Groups with identical states are merged into classes. Each class sends
//! its multiplicity to cells `(S, ℓ)` (one arc per distinct block state with
//! room left) or to the skip node. The fractional flow on a class arc is
//! `mult · cnt · (ℓ − |S|) / (N − τ)`; the integral flow is confined to its
//! floor and ceiling.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use super::{Block, RealizationState};
use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::flow::BoundedFlow;

/// An exact fraction `num / den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    pub num: u128,
    pub den: u128,
}

impl Fraction {
    pub fn floor(&self) -> u128 {
        self.num / self.den
    }

    pub fn ceil(&self) -> u128 {
        self.num.div_ceil(self.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ArcTarget {
    Cell(usize),
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepArc {
    pub class: usize,
    pub target: ArcTarget,
    pub value: Fraction,
}

impl StepArc {
    pub fn lower(&self) -> u64 {
        self.value.floor() as u64
    }

    pub fn upper(&self) -> u64 {
        self.value.ceil() as u64
    }
}

/// Groups sharing one canonical state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupClass {
    /// Sorted `(members, target)` pairs.
    pub state: Vec<(u64, u32)>,
    /// Group indices, ascending.
    pub members: Vec<usize>,
    /// Arcs leaving this class, in order.
    pub arcs: Vec<usize>,
    /// `slots[g][j]`: block index inside member `g` used by the `j`-th cell arc.
    pub slots: Vec<Vec<usize>>,
}

impl GroupClass {
    pub fn multiplicity(&self) -> u64 {
        self.members.len() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub members: u64,
    pub target: u32,
    pub demand: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepNetwork {
    pub n: usize,
    pub tau: usize,
    pub classes: Vec<GroupClass>,
    pub cells: Vec<Cell>,
    pub skip_demand: u64,
    pub arcs: Vec<StepArc>,
    pub group_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupChoice {
    Block(usize),
    Skip,
}

fn key_of(blocks: &[Block]) -> Vec<(u64, u32)> {
    let mut key: Vec<_> = blocks.iter().map(|b| (b.members, b.target)).collect();
    key.sort_unstable();
    key
}

impl StepNetwork {
    /// Build the step network of a `τ`-realization with `τ < N`.
    pub fn build(state: &RealizationState) -> Result<StepNetwork> {
        let (n, tau) = (state.n(), state.tau());
        let infeasible = |reason: String| Error::Infeasible { tau, reason };
        if tau >= n {
            return Err(infeasible("realization is already complete".into()));
        }
        let remaining = (n - tau) as u64;
        let k = state.groups().len() as u64;
        let half = 1u64 << (n - 1);
        let skip_demand = k.checked_sub(half).ok_or_else(|| {
            infeasible(format!(
                "{k} groups cannot host 2^(N-1) = {half} blocks per element"
            ))
        })?;

        let mut by_state: BTreeMap<Vec<(u64, u32)>, Vec<usize>> = BTreeMap::new();
        for (g, group) in state.groups().iter().enumerate() {
            let mut residual = 0u64;
            for b in &group.blocks {
                let size = b.members.count_ones();
                if size > b.target || b.members >> tau != 0 {
                    return Err(infeasible(format!(
                        "group {g} holds a block that is not a prefix subset within its target"
                    )));
                }
                residual += (b.target - size) as u64;
            }
            if residual > remaining {
                return Err(infeasible(format!(
                    "group {g} still needs {residual} elements but only {remaining} remain"
                )));
            }
            by_state.entry(key_of(&group.blocks)).or_default().push(g);
        }

        let mut cell_index: BTreeMap<(u64, u32), usize> = BTreeMap::new();
        for key in by_state.keys() {
            for &(members, target) in key {
                if target > members.count_ones() {
                    cell_index.insert((members, target), 0);
                }
            }
        }
        let mut cells = Vec::with_capacity(cell_index.len());
        for (i, (&(members, target), slot)) in cell_index.iter_mut().enumerate() {
            *slot = i;
            let need = (target - members.count_ones()) as i64;
            let demand = binomial(remaining as i64 - 1, need - 1)
                .to_u64()
                .ok_or_else(|| infeasible("cell demand overflows u64".into()))?;
            cells.push(Cell {
                members,
                target,
                demand,
            });
        }

        let den = remaining as u128;
        let mut classes = Vec::with_capacity(by_state.len());
        let mut arcs = Vec::new();
        for (ci, (key, members)) in by_state.into_iter().enumerate() {
            let mult = members.len() as u128;
            let mut class_arcs = Vec::new();
            let mut distinct: Vec<(u64, u32)> = Vec::new();
            let mut total_residual = 0u128;
            for (pos, &(m, t)) in key.iter().enumerate() {
                let res = (t - m.count_ones()) as u128;
                total_residual += res;
                if res == 0 || (pos > 0 && key[pos - 1] == (m, t)) {
                    continue;
                }
                let cnt = key.iter().filter(|&&e| e == (m, t)).count() as u128;
                distinct.push((m, t));
                class_arcs.push(arcs.len());
                arcs.push(StepArc {
                    class: ci,
                    target: ArcTarget::Cell(cell_index[&(m, t)]),
                    value: Fraction {
                        num: mult * cnt * res,
                        den,
                    },
                });
            }
            let skip_num = mult * (den - total_residual);
            if skip_num > 0 {
                class_arcs.push(arcs.len());
                arcs.push(StepArc {
                    class: ci,
                    target: ArcTarget::Skip,
                    value: Fraction { num: skip_num, den },
                });
            }
            let slots = members
                .iter()
                .map(|&g| {
                    let blocks = &state.groups()[g].blocks;
                    distinct
                        .iter()
                        .map(|&(m, t)| {
                            blocks
                                .iter()
                                .position(|b| b.members == m && b.target == t)
                                .expect("class member shares the class state")
                        })
                        .collect()
                })
                .collect();
            classes.push(GroupClass {
                state: key,
                members,
                arcs: class_arcs,
                slots,
            });
        }

        Ok(StepNetwork {
            n,
            tau,
            classes,
            cells,
            skip_demand,
            arcs,
            group_count: state.groups().len(),
        })
    }

    /// `N − τ`, the common denominator of every fractional arc value.
    pub fn denominator(&self) -> u128 {
        (self.n - self.tau) as u128
    }

    /// Exact conservation of the fractional flow at every class, cell and
    /// at the skip node.
    pub fn check_conservation(&self) -> std::result::Result<(), String> {
        let den = self.denominator();
        let mut into_cells = vec![0u128; self.cells.len()];
        let mut into_skip = 0u128;
        for (ci, class) in self.classes.iter().enumerate() {
            let mut out = 0u128;
            for &a in &class.arcs {
                let arc = &self.arcs[a];
                out += arc.value.num;
                match arc.target {
                    ArcTarget::Cell(c) => into_cells[c] += arc.value.num,
                    ArcTarget::Skip => into_skip += arc.value.num,
                }
            }
            if out != class.multiplicity() as u128 * den {
                return Err(format!(
                    "class {ci} sends {out}/{den}, expected {}",
                    class.multiplicity()
                ));
            }
        }
        for (c, (cell, got)) in self.cells.iter().zip(into_cells).enumerate() {
            if got != cell.demand as u128 * den {
                return Err(format!(
                    "cell {c} receives {got}/{den}, demand {}",
                    cell.demand
                ));
            }
        }
        if into_skip != self.skip_demand as u128 * den {
            return Err(format!(
                "skip receives {into_skip}/{den}, expected {}",
                self.skip_demand
            ));
        }
        Ok(())
    }

    /// The bounded flow problem on classes, cells and the skip node.
    /// Node layout: classes, then cells, then skip, then sink.
    pub fn flow_problem(&self) -> BoundedFlow {
        let skip = self.classes.len() + self.cells.len();
        let sink = skip + 1;
        let mut problem = BoundedFlow::new(sink + 1);
        for (ci, class) in self.classes.iter().enumerate() {
            problem.set_supply(ci, class.multiplicity() as i64);
        }
        let mut total = 0i64;
        for (c, cell) in self.cells.iter().enumerate() {
            let node = self.classes.len() + c;
            problem.add_arc(node, sink, cell.demand as i64, cell.demand as i64);
            total += cell.demand as i64;
        }
        problem.add_arc(skip, sink, self.skip_demand as i64, self.skip_demand as i64);
        total += self.skip_demand as i64;
        problem.set_supply(sink, -total);
        for arc in &self.arcs {
            let to = match arc.target {
                ArcTarget::Cell(c) => self.classes.len() + c,
                ArcTarget::Skip => skip,
            };
            problem.add_arc(arc.class, to, arc.lower() as i64, arc.upper() as i64);
        }
        problem
    }

    /// Integral flow per step arc, each within one unit of its fractional
    /// value and meeting every demand exactly.
    pub fn solve_arc_flows(&self) -> Result<Vec<u64>> {
        let problem = self.flow_problem();
        let offset = self.cells.len() + 1;
        let flow = problem.solve().ok_or_else(|| Error::Infeasible {
            tau: self.tau,
            reason: "no integral assignment meets the demands".into(),
        })?;
        Ok(flow[offset..].iter().map(|&x| x as u64).collect())
    }
}

/// Choice for every group: which block receives element `τ + 1`, or skip.
pub fn integral_step_assignment(net: &StepNetwork) -> Result<Vec<GroupChoice>> {
    let flows = net.solve_arc_flows()?;
    let mut choices = vec![GroupChoice::Skip; net.group_count];
    for class in &net.classes {
        let mut next = 0usize;
        let mut cell_pos = 0usize;
        for &a in &class.arcs {
            let take = flows[a] as usize;
            match net.arcs[a].target {
                ArcTarget::Cell(_) => {
                    for g in next..next + take {
                        choices[class.members[g]] = GroupChoice::Block(class.slots[g][cell_pos]);
                    }
                    cell_pos += 1;
                }
                ArcTarget::Skip => {}
            }
            next += take;
        }
        if next != class.members.len() {
            return Err(Error::Infeasible {
                tau: net.tau,
                reason: format!(
                    "class flow {next} does not match multiplicity {}",
                    class.members.len()
                ),
            });
        }
    }
    Ok(choices)
}
