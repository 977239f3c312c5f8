//! Shapes, types and the optimal `v`-type.
//!
//! A shape is the multiset of block sizes of one partial spread; a type is a
//! multiset of shapes. Multiplicities are arbitrary precision because the
//! optimal type uses `C(N, i)` copies of some shapes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::combinatorics::{bar_keeps_lambda, binomial_row, BoundParams, VariantTag};
use crate::error::{Error, Result};

/// Multiset of block sizes, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape(Vec<u32>);

impl Shape {
    pub fn new(mut entries: Vec<u32>) -> Self {
        entries.sort_unstable();
        Shape(entries)
    }

    pub fn singleton(size: u32) -> Self {
        Shape(vec![size])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn min(&self) -> Option<u32> {
        self.0.first().copied()
    }

    /// `μ(x)`: how many entries equal `x`.
    pub fn count(&self, x: u32) -> usize {
        self.0.iter().filter(|&&e| e == x).count()
    }

    /// `Σ max(f + 1 − x, 0)` over the entries.
    pub fn defect(&self, f: i64) -> u64 {
        self.0
            .iter()
            .map(|&x| (f + 1 - x as i64).max(0) as u64)
            .sum()
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Free-function form of [`Shape::defect`].
pub fn defect(shape: &Shape, f: i64) -> u64 {
    shape.defect(f)
}

/// Whether a shape was asked for or only added to make the type full.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Requested,
    Fill,
}

/// A multiset of shapes over the ground set `{1..N}`.
///
/// With `v = Some(v)` every requested shape must have exactly `v` entries.
/// Fill shapes (added by [`make_full`]) are singletons and are tracked
/// separately so a realization can hand back only the requested spreads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VType {
    n: usize,
    v: Option<usize>,
    requested: BTreeMap<Shape, BigUint>,
    fill: BTreeMap<Shape, BigUint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Admissibility {
    Admissible,
    /// Least entry value `size` whose aggregate count exceeds `C(N, size)`.
    Violated {
        size: u32,
        count: BigUint,
        capacity: BigUint,
    },
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }
}

impl VType {
    /// Empty `v`-type.
    pub fn new(n: usize, v: usize) -> Self {
        VType {
            n,
            v: Some(v),
            requested: BTreeMap::new(),
            fill: BTreeMap::new(),
        }
    }

    /// Empty type with no constraint on shape length.
    pub fn general(n: usize) -> Self {
        VType {
            n,
            v: None,
            requested: BTreeMap::new(),
            fill: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn v(&self) -> Option<usize> {
        self.v
    }

    fn check_shape(&self, shape: &Shape) -> Result<()> {
        if let Some(v) = self.v {
            if shape.len() != v {
                return Err(Error::InvalidParameters(format!(
                    "shape {shape} has {} entries, expected {v}",
                    shape.len()
                )));
            }
        }
        if shape.sum() > self.n as u64 {
            return Err(Error::InvalidParameters(format!(
                "shape {shape} sums to more than N = {}",
                self.n
            )));
        }
        Ok(())
    }

    /// Add `count` copies of a requested shape.
    pub fn add(&mut self, shape: Shape, count: impl Into<BigUint>) -> Result<()> {
        let count = count.into();
        self.check_shape(&shape)?;
        if !count.is_zero() {
            *self.requested.entry(shape).or_default() += count;
        }
        Ok(())
    }

    /// Remove `count` copies of a requested shape.
    pub fn remove(&mut self, shape: &Shape, count: impl Into<BigUint>) -> Result<()> {
        let count = count.into();
        let have = self.requested.get(shape).cloned().unwrap_or_default();
        if have < count {
            return Err(Error::InvalidParameters(format!(
                "cannot remove {count} copies of {shape}: only {have} present"
            )));
        }
        let left = have - count;
        if left.is_zero() {
            self.requested.remove(shape);
        } else {
            self.requested.insert(shape.clone(), left);
        }
        Ok(())
    }

    fn add_fill(&mut self, shape: Shape, count: BigUint) {
        if !count.is_zero() {
            *self.fill.entry(shape).or_default() += count;
        }
    }

    pub fn multiplicity(&self, shape: &Shape) -> BigUint {
        self.requested.get(shape).cloned().unwrap_or_default()
    }

    /// Requested shapes in canonical (lexicographic) order.
    pub fn shapes(&self) -> impl Iterator<Item = (&Shape, &BigUint)> {
        self.requested.iter()
    }

    pub fn fill_shapes(&self) -> impl Iterator<Item = (&Shape, &BigUint)> {
        self.fill.iter()
    }

    /// Requested shapes first, then fill shapes.
    pub fn all_shapes(&self) -> impl Iterator<Item = (&Shape, &BigUint, Role)> {
        self.requested
            .iter()
            .map(|(s, m)| (s, m, Role::Requested))
            .chain(self.fill.iter().map(|(s, m)| (s, m, Role::Fill)))
    }

    /// Total number of shapes, fill included.
    pub fn len(&self) -> BigUint {
        self.requested.values().chain(self.fill.values()).sum()
    }

    pub fn requested_len(&self) -> BigUint {
        self.requested.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.requested.is_empty() && self.fill.is_empty()
    }

    pub fn has_fill(&self) -> bool {
        !self.fill.is_empty()
    }

    /// The same type with all fill shapes dropped.
    pub fn without_fill(&self) -> VType {
        VType {
            fill: BTreeMap::new(),
            ..self.clone()
        }
    }

    /// `σ(x) = Σ_M mult(M)·μ_M(x)` for `x = 0..=N`; entries above `N` are
    /// impossible because shape sums are bounded by `N`.
    pub fn entry_counts(&self) -> Vec<BigUint> {
        let mut sigma = vec![BigUint::zero(); self.n + 1];
        for (shape, mult, _) in self.all_shapes() {
            for &x in shape.entries() {
                sigma[x as usize] += mult;
            }
        }
        sigma
    }

    pub fn admissibility(&self) -> Admissibility {
        let row = binomial_row(self.n);
        for (x, (count, cap)) in self.entry_counts().into_iter().zip(row).enumerate() {
            if count > cap {
                return Admissibility::Violated {
                    size: x as u32,
                    count,
                    capacity: cap,
                };
            }
        }
        Admissibility::Admissible
    }

    pub fn is_full(&self) -> bool {
        self.entry_counts() == binomial_row(self.n)
    }

    /// `Err(NotAdmissible)` carrying the least witness.
    pub fn ensure_admissible(&self) -> Result<()> {
        match self.admissibility() {
            Admissibility::Admissible => Ok(()),
            Admissibility::Violated {
                size,
                count,
                capacity,
            } => Err(Error::NotAdmissible {
                size,
                count,
                capacity,
            }),
        }
    }

    /// `Err(NotFull)` naming the least entry value that falls short.
    pub fn ensure_full(&self) -> Result<()> {
        self.ensure_admissible()?;
        let row = binomial_row(self.n);
        for (x, (count, cap)) in self.entry_counts().into_iter().zip(row).enumerate() {
            if count != cap {
                return Err(Error::NotFull {
                    size: x as u32,
                    count,
                    capacity: cap,
                });
            }
        }
        Ok(())
    }
}

/// Free-function form of [`VType::admissibility`].
pub fn is_admissible(ty: &VType) -> Admissibility {
    ty.admissibility()
}

/// `L_i(N, v)`: smallest entry `i`, the other `v − 1` entries as equal as
/// possible and summing to `N − i`.
pub fn shape_l(n: usize, v: usize, i: usize) -> Result<Shape> {
    if v < 2 {
        return Err(Error::InvalidParameters("v must be at least 2".into()));
    }
    let f = (n + 1) / v;
    if i > f {
        return Err(Error::InvalidParameters(format!(
            "L_{i}({n},{v}) needs i <= f = {f}"
        )));
    }
    let rest = n - i;
    let (q, r) = rest.div_rem(&(v - 1));
    if q < i {
        return Err(Error::InvalidParameters(format!(
            "L_{i}({n},{v}) does not exist: remaining entries would drop below {i}"
        )));
    }
    let mut entries = Vec::with_capacity(v);
    entries.push(i as u32);
    entries.extend(std::iter::repeat_n(q as u32, v - 1 - r));
    entries.extend(std::iter::repeat_n(q as u32 + 1, r));
    Ok(Shape::new(entries))
}

/// `L_*(N, v)`: two entries `f − 1`, `v − 3` entries `f`, one entry `f + 1`.
/// Only defined for `v ≥ 3` and `N ≡ v − 1 (mod v)`.
pub fn shape_star(n: usize, v: usize) -> Result<Shape> {
    if v < 3 || n % v != v - 1 {
        return Err(Error::InvalidParameters(format!(
            "L_*({n},{v}) needs v >= 3 and N = v-1 mod v"
        )));
    }
    let f = ((n + 1) / v) as u32;
    let mut entries = vec![f - 1, f - 1];
    entries.extend(std::iter::repeat_n(f, v - 3));
    entries.push(f + 1);
    Ok(Shape::new(entries))
}

/// The optimal admissible `v`-type `𝓛(N, v)` of size `Λ(N, v)`.
pub fn build_optimal_type(n: usize, v: usize) -> Result<VType> {
    if n < 1 || v < 2 || v > n + 1 {
        return Err(Error::InvalidParameters(format!(
            "optimal type needs N >= 1 and 2 <= v <= N+1 (got N={n}, v={v})"
        )));
    }
    let p = BoundParams::new(n, v)?;
    let row = binomial_row(n);
    let f = p.f as usize;
    let mut ty = VType::new(n, v);

    for i in 0..f.saturating_sub(1) {
        ty.add(shape_l(n, v, i)?, row[i].clone())?;
    }
    if !p.is_star_residue() {
        if f >= 1 {
            ty.add(shape_l(n, v, f - 1)?, row[f - 1].clone())?;
        }
        // C(N,f) >= s is guaranteed in this regime
        let spare = row[f].clone() - p.s.clone();
        let copies = spare / BigUint::from(p.d as u64);
        ty.add(shape_l(n, v, f)?, copies)?;
    } else {
        let stars = p.s_prime.div_ceil(&BigUint::from(v as u64 + 1));
        let plain = row[f - 1].clone() - &stars * 2u32;
        ty.add(shape_l(n, v, f - 1)?, plain)?;
        if !stars.is_zero() {
            ty.add(shape_star(n, v)?, stars)?;
        }
    }
    Ok(ty)
}

/// Optimal type for one of the barred variants.
///
/// `(1̄,·)` drops `L_0` and, when the residue condition allows it, trades
/// the freed capacity for one more shape. `(1,1̄)` equals the optimal type
/// for `v ≥ 3` and drops `{0, N}` for `v = 2`.
pub fn build_variant_type(n: usize, v: usize, variant: VariantTag) -> Result<VType> {
    if v < 2 || v > variant.max_symbols(n) {
        return Err(Error::InvalidParameters(format!(
            "variant {variant} needs 2 <= v <= {} (got v={v})",
            variant.max_symbols(n)
        )));
    }
    let mut ty = build_optimal_type(n, v)?;
    match (variant.d_barred, variant.t_barred) {
        (false, false) => {}
        (false, true) => {
            if v == 2 {
                ty.remove(&Shape::new(vec![0, n as u32]), 1u32)?;
            }
        }
        (true, _) => {
            let p = BoundParams::new(n, v)?;
            ty.remove(&shape_l(n, v, 0)?, 1u32)?;
            if bar_keeps_lambda(&p) {
                let f = p.f as usize;
                if p.is_star_residue() {
                    ty.remove(&shape_star(n, v)?, 1u32)?;
                    ty.add(shape_l(n, v, f - 1)?, 2u32)?;
                } else {
                    ty.add(shape_l(n, v, f)?, 1u32)?;
                }
            }
        }
    }
    Ok(ty)
}

/// Extend an admissible type by singleton fill shapes `{ℓ}` until every
/// entry count meets `C(N, ℓ)`.
pub fn make_full(ty: &VType) -> Result<VType> {
    ty.ensure_admissible()?;
    let row = binomial_row(ty.n);
    let sigma = ty.entry_counts();
    let mut full = ty.clone();
    for (l, (cap, have)) in row.into_iter().zip(sigma).enumerate() {
        full.add_fill(Shape::singleton(l as u32), cap - have);
    }
    Ok(full)
}

#[cfg(test)]
pub(crate) fn small(m: &BigUint) -> Option<u64> {
    num_traits::ToPrimitive::to_u64(m)
}
