//! Test arrays, row sets and the strength-1 verifiers.
//!
//! Column `c` of an `N × k` array on `v` symbols is the partition of the
//! rows into the classes `ρ({(c, σ)})`, `σ = 0..v`. Locating, detecting and
//! covering properties are then statements about those `k·v` classes.

use std::collections::HashMap;
use std::fmt;

use num_traits::ToPrimitive;

use crate::baranyai::{realize, RealizeOptions, SpreadSystem};
use crate::combinatorics::{lak, VariantTag};
use crate::error::{Error, Result};
use crate::spread_types::build_variant_type;

/// `N × k` array over `{0..v}`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestArray {
    n: usize,
    k: usize,
    v: usize,
    cells: Vec<u32>,
}

impl TestArray {
    pub fn new(n: usize, k: usize, v: usize, cells: Vec<u32>) -> Result<Self> {
        if cells.len() != n * k {
            return Err(Error::MalformedArray(format!(
                "expected {} entries for {n} x {k}, got {}",
                n * k,
                cells.len()
            )));
        }
        if let Some(pos) = cells.iter().position(|&x| x as usize >= v) {
            return Err(Error::MalformedArray(format!(
                "entry {} at row {}, column {} is not below v = {v}",
                cells[pos],
                pos / k.max(1) + 1,
                pos % k.max(1) + 1
            )));
        }
        Ok(TestArray { n, k, v, cells })
    }

    pub fn from_rows(v: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let k = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().position(|r| r.len() != k) {
            return Err(Error::MalformedArray(format!(
                "row {} has a different length",
                r + 1
            )));
        }
        Self::new(rows.len(), k, v, rows.concat())
    }

    /// Array whose columns are given directly.
    pub fn from_columns(v: usize, columns: &[Vec<u32>]) -> Result<Self> {
        let n = columns.first().map_or(0, Vec::len);
        if let Some(c) = columns.iter().position(|c| c.len() != n) {
            return Err(Error::MalformedArray(format!(
                "column {} has a different length",
                c + 1
            )));
        }
        let cells = (0..n)
            .flat_map(|r| columns.iter().map(move |c| c[r]))
            .collect();
        Self::new(n, columns.len(), v, cells)
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> usize {
        self.k
    }

    pub fn symbols(&self) -> usize {
        self.v
    }

    /// Entry at 0-based row `r`, column `c`.
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.cells[r * self.k + c]
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.cells[r * self.k..(r + 1) * self.k]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.n).map(|r| self.get(r, c)).collect()
    }
}

/// A set of (column, symbol) pairs, at most one per column. The empty
/// interaction `⊔` covers every row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interaction(Vec<(usize, u32)>);

impl Interaction {
    pub fn empty() -> Self {
        Interaction(Vec::new())
    }

    pub fn single(column: usize, symbol: u32) -> Self {
        Interaction(vec![(column, symbol)])
    }

    pub fn new(mut pairs: Vec<(usize, u32)>) -> Result<Self> {
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameters(
                "interaction uses a column twice".into(),
            ));
        }
        Ok(Interaction(pairs))
    }

    pub fn strength(&self) -> usize {
        self.0.len()
    }

    pub fn pairs(&self) -> &[(usize, u32)] {
        &self.0
    }
}

/// Sorted rows, numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RowSet(pub Vec<usize>);

impl RowSet {
    pub fn all(n: usize) -> Self {
        RowSet((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &RowSet) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|x| it.any(|y| y == x))
    }

    pub fn intersects(&self, other: &RowSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Equal => return true,
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
            }
        }
        false
    }
}

impl fmt::Display for RowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `ρ_A(T)`: the rows covering every pair of `T`.
pub fn rho(array: &TestArray, interaction: &Interaction) -> Result<RowSet> {
    for &(c, s) in interaction.pairs() {
        if c >= array.k || s as usize >= array.v {
            return Err(Error::InvalidParameters(format!(
                "interaction (column {}, symbol {s}) is outside the {} x {} array on {} symbols",
                c + 1,
                array.n,
                array.k,
                array.v
            )));
        }
    }
    Ok(RowSet(
        (0..array.n)
            .filter(|&r| {
                interaction
                    .pairs()
                    .iter()
                    .all(|&(c, s)| array.get(r, c) == s)
            })
            .map(|r| r + 1)
            .collect(),
    ))
}

/// Column `c` ↦ `(ρ({(c,0)}), …, ρ({(c,v−1)}))`.
pub fn array_to_partitions(array: &TestArray) -> Vec<Vec<RowSet>> {
    (0..array.k)
        .map(|c| {
            let mut classes = vec![RowSet::default(); array.v];
            for r in 0..array.n {
                classes[array.get(r, c) as usize].0.push(r + 1);
            }
            classes
        })
        .collect()
}

/// One column per spread. Blocks are ordered by size, then by their sorted
/// element lists, and block `j` gets symbol `j`.
pub fn spreads_to_array(system: &SpreadSystem, v: usize) -> Result<TestArray> {
    let n = system.n;
    let mut columns = Vec::with_capacity(system.spreads.len());
    for (i, spread) in system.spreads.iter().enumerate() {
        if spread.blocks.len() != v {
            return Err(Error::MalformedSpread(format!(
                "spread {} has {} blocks, expected {v}",
                i + 1,
                spread.blocks.len()
            )));
        }
        let mut blocks: Vec<Vec<usize>> = spread.blocks.clone();
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut column = vec![u32::MAX; n];
        for (sym, block) in blocks.iter().enumerate() {
            for &x in block {
                if x == 0 || x > n {
                    return Err(Error::MalformedSpread(format!(
                        "spread {}: element {x} outside 1..={n}",
                        i + 1
                    )));
                }
                if column[x - 1] != u32::MAX {
                    return Err(Error::MalformedSpread(format!(
                        "spread {}: element {x} lies in two blocks",
                        i + 1
                    )));
                }
                column[x - 1] = sym as u32;
            }
        }
        if let Some(r) = column.iter().position(|&s| s == u32::MAX) {
            return Err(Error::MalformedSpread(format!(
                "spread {}: element {} is not covered",
                i + 1,
                r + 1
            )));
        }
        columns.push(column);
    }
    let k = columns.len();
    let cells = (0..n)
        .flat_map(|r| columns.iter().map(move |c| c[r]))
        .collect();
    TestArray::new(n, k, v, cells)
}

/// A single-pair interaction named by 0-based column and symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level {
    pub column: usize,
    pub symbol: u32,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(column {}, symbol {})", self.column + 1, self.symbol)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    EqualClasses {
        first: Level,
        second: Level,
        rows: RowSet,
    },
    EmptyClass {
        level: Level,
    },
    FullClass {
        level: Level,
    },
    DisjointClasses {
        first: Level,
        second: Level,
    },
    NestedClasses {
        inner: Level,
        outer: Level,
    },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Ok => write!(f, "ok"),
            Verdict::EqualClasses {
                first,
                second,
                rows,
            } => {
                write!(
                    f,
                    "violated: {first} and {second} cover the same rows {rows}"
                )
            }
            Verdict::EmptyClass { level } => write!(f, "violated: {level} covers no row"),
            Verdict::FullClass { level } => write!(f, "violated: {level} covers every row"),
            Verdict::DisjointClasses { first, second } => {
                write!(f, "violated: {first} and {second} never appear together")
            }
            Verdict::NestedClasses { inner, outer } => {
                write!(
                    f,
                    "violated: rows of {inner} are contained in rows of {outer}"
                )
            }
        }
    }
}

/// Classes as bitsets, in column-major, symbol-minor order.
fn class_bitsets(array: &TestArray) -> Vec<(Level, Vec<u64>)> {
    let words = array.n.div_ceil(64);
    let mut out = Vec::with_capacity(array.k * array.v);
    for c in 0..array.k {
        let mut sets = vec![vec![0u64; words]; array.v];
        for r in 0..array.n {
            sets[array.get(r, c) as usize][r / 64] |= 1 << (r % 64);
        }
        for (s, bits) in sets.into_iter().enumerate() {
            out.push((
                Level {
                    column: c,
                    symbol: s as u32,
                },
                bits,
            ));
        }
    }
    out
}

fn bits_to_rows(bits: &[u64]) -> RowSet {
    RowSet(
        bits.iter()
            .enumerate()
            .flat_map(|(w, &word)| {
                (0..64)
                    .filter(move |i| word >> i & 1 == 1)
                    .map(move |i| w * 64 + i + 1)
            })
            .collect(),
    )
}

/// Locating property for one of the four strength-1 classes.
///
/// All `k·v` classes distinct; barred `d` also forbids an empty class and
/// barred `t` forbids a class covering every row.
pub fn verify_la(array: &TestArray, variant: VariantTag) -> Verdict {
    let n = array.n;
    let mut seen: HashMap<Vec<u64>, Level> = HashMap::new();
    for (level, bits) in class_bitsets(array) {
        let size: u32 = bits.iter().map(|w| w.count_ones()).sum();
        if variant.d_barred && size == 0 {
            return Verdict::EmptyClass { level };
        }
        if variant.t_barred && size as usize == n {
            return Verdict::FullClass { level };
        }
        if let Some(&first) = seen.get(&bits) {
            return Verdict::EqualClasses {
                first,
                second: level,
                rows: bits_to_rows(&bits),
            };
        }
        seen.insert(bits, level);
    }
    Verdict::Ok
}

/// Strength-2 covering: no empty class, and classes of distinct columns
/// always meet.
pub fn verify_ca2(array: &TestArray) -> Verdict {
    let parts = array_to_partitions(array);
    for (c, classes) in parts.iter().enumerate() {
        if let Some(s) = classes.iter().position(RowSet::is_empty) {
            return Verdict::EmptyClass {
                level: Level {
                    column: c,
                    symbol: s as u32,
                },
            };
        }
    }
    for c in 0..parts.len() {
        for d in c + 1..parts.len() {
            for (s, a) in parts[c].iter().enumerate() {
                for (t, b) in parts[d].iter().enumerate() {
                    if !a.intersects(b) {
                        return Verdict::DisjointClasses {
                            first: Level {
                                column: c,
                                symbol: s as u32,
                            },
                            second: Level {
                                column: d,
                                symbol: t as u32,
                            },
                        };
                    }
                }
            }
        }
    }
    Verdict::Ok
}

/// `(1,1)`-detecting: the classes form an antichain under inclusion.
pub fn verify_da11(array: &TestArray) -> Verdict {
    let classes = class_bitsets(array);
    for (i, (a_level, a)) in classes.iter().enumerate() {
        for (j, (b_level, b)) in classes.iter().enumerate() {
            if i != j && a.iter().zip(b).all(|(x, y)| x & !y == 0) {
                return Verdict::NestedClasses {
                    inner: *a_level,
                    outer: *b_level,
                };
            }
        }
    }
    Verdict::Ok
}

/// An `N × LAK` array of the requested class, built from the optimal type.
pub fn generate_la(n: usize, v: usize, variant: VariantTag, cap_n: usize) -> Result<TestArray> {
    if n < 1 || v < 2 {
        return Err(Error::InvalidParameters(format!(
            "need N >= 1 and v >= 2 (got N={n}, v={v})"
        )));
    }
    if v > variant.max_symbols(n) || lak(n, v, variant).to_u64() == Some(0) {
        return Err(Error::NoArray {
            n,
            v,
            variant: variant.to_string(),
        });
    }
    if n > cap_n {
        return Err(Error::CapExceeded {
            what: "generation",
            n,
            cap: cap_n,
        });
    }
    let ty = build_variant_type(n, v, variant)?;
    let system = realize(
        &ty,
        RealizeOptions {
            cap_n,
            include_fill: false,
        },
    )?;
    spreads_to_array(&system, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baranyai::Spread;
    use crate::spread_types::Role;

    fn sample() -> TestArray {
        TestArray::from_columns(
            2,
            &[vec![1, 1, 1], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
        )
        .unwrap()
    }

    fn sys(n: usize, spreads: Vec<Vec<Vec<usize>>>) -> SpreadSystem {
        SpreadSystem {
            n,
            spreads: spreads
                .into_iter()
                .map(|b| Spread {
                    blocks: b,
                    role: Role::Requested,
                })
                .collect(),
        }
    }

    #[test]
    fn rho_examples() {
        let a = sample();
        assert_eq!(rho(&a, &Interaction::single(0, 1)).unwrap(), RowSet::all(3));
        assert_eq!(
            rho(&a, &Interaction::single(0, 0)).unwrap(),
            RowSet::default()
        );
        assert_eq!(rho(&a, &Interaction::empty()).unwrap(), RowSet::all(3));
        assert_eq!(
            rho(&a, &Interaction::single(1, 0)).unwrap(),
            RowSet(vec![1])
        );
        let pair = Interaction::new(vec![(2, 1), (1, 1)]).unwrap();
        assert_eq!(rho(&a, &pair).unwrap(), RowSet(vec![3]));
        assert!(rho(&a, &Interaction::single(4, 0)).is_err());
        assert!(rho(&a, &Interaction::single(0, 2)).is_err());
        assert!(Interaction::new(vec![(1, 0), (1, 1)]).is_err());
    }

    #[test]
    fn partitions_of_sample() {
        let parts = array_to_partitions(&sample());
        let flat: Vec<Vec<usize>> = parts.iter().flatten().map(|r| r.0.clone()).collect();
        assert_eq!(
            flat,
            vec![
                vec![],
                vec![1, 2, 3],
                vec![1],
                vec![2, 3],
                vec![2],
                vec![1, 3],
                vec![3],
                vec![1, 2]
            ]
        );
        for classes in parts {
            let mut all: Vec<usize> = classes.iter().flat_map(|c| c.0.clone()).collect();
            all.sort_unstable();
            assert_eq!(all, vec![1, 2, 3]);
        }
    }

    #[test]
    fn spreads_to_array_examples() {
        let a = spreads_to_array(&sys(3, vec![vec![vec![1], vec![2], vec![3]]]), 3).unwrap();
        assert_eq!(a.column(0), vec![0, 1, 2]);

        let a = spreads_to_array(
            &sys(
                3,
                vec![
                    vec![vec![], vec![1, 2, 3]],
                    vec![vec![2, 3], vec![1]],
                    vec![vec![1, 3], vec![2]],
                    vec![vec![3], vec![1, 2]],
                ],
            ),
            2,
        )
        .unwrap();
        assert_eq!(a, sample());

        assert!(spreads_to_array(&sys(3, vec![vec![vec![1, 2], vec![2, 3]]]), 2).is_err());
        assert!(spreads_to_array(&sys(3, vec![vec![vec![1], vec![2]]]), 2).is_err());
        assert!(spreads_to_array(&sys(3, vec![vec![vec![1], vec![2, 3]]]), 3).is_err());
        assert!(spreads_to_array(&sys(3, vec![vec![vec![1], vec![2, 4]]]), 2).is_err());
    }

    #[test]
    fn la_verdicts_on_sample() {
        let a = sample();
        assert!(verify_la(&a, VariantTag::ONE_ONE).is_ok());
        assert_eq!(
            verify_la(&a, VariantTag::BAR_ONE),
            Verdict::EmptyClass {
                level: Level {
                    column: 0,
                    symbol: 0
                }
            }
        );
        assert_eq!(
            verify_la(&a, VariantTag::ONE_BAR),
            Verdict::FullClass {
                level: Level {
                    column: 0,
                    symbol: 1
                }
            }
        );
        assert!(!verify_la(&a, VariantTag::BAR_BAR).is_ok());
    }

    #[test]
    fn duplicate_columns_fail_everywhere() {
        let a = TestArray::from_columns(3, &[vec![0, 1, 2, 2], vec![0, 1, 2, 2]]).unwrap();
        for variant in VariantTag::ALL {
            assert!(
                matches!(verify_la(&a, variant), Verdict::EqualClasses { .. }),
                "{variant}"
            );
        }
        assert!(!verify_da11(&a).is_ok());
    }

    #[test]
    fn ca2_examples() {
        let a = TestArray::from_columns(2, &[vec![0, 0, 1, 1], vec![0, 1, 0, 1]]).unwrap();
        assert!(verify_ca2(&a).is_ok());
        assert!(matches!(verify_ca2(&sample()), Verdict::EmptyClass { .. }));
        let b = TestArray::from_columns(2, &[vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        assert!(matches!(verify_ca2(&b), Verdict::DisjointClasses { .. }));
        let lone = TestArray::from_columns(3, &[vec![0, 1, 1]]).unwrap();
        assert!(matches!(verify_ca2(&lone), Verdict::EmptyClass { .. }));
    }

    #[test]
    fn da11_examples() {
        let a = TestArray::from_columns(2, &[vec![0, 0, 1, 1], vec![0, 1, 0, 1]]).unwrap();
        assert!(verify_da11(&a).is_ok());
        assert!(verify_la(&a, VariantTag::BAR_ONE).is_ok());
        assert!(matches!(
            verify_da11(&sample()),
            Verdict::NestedClasses { .. }
        ));
    }

    #[test]
    fn malformed_arrays() {
        assert!(TestArray::new(2, 2, 2, vec![0, 1, 2, 0]).is_err());
        assert!(TestArray::new(2, 2, 2, vec![0, 1, 1]).is_err());
        assert!(TestArray::from_rows(2, &[vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn generate_small() {
        let a = generate_la(3, 2, VariantTag::ONE_ONE, 16).unwrap();
        assert_eq!((a.rows(), a.columns()), (3, 4));
        assert!(verify_la(&a, VariantTag::ONE_ONE).is_ok());
        let a = generate_la(5, 3, VariantTag::ONE_ONE, 16).unwrap();
        assert_eq!((a.rows(), a.columns()), (5, 5));
        assert!(verify_la(&a, VariantTag::ONE_ONE).is_ok());
        assert!(matches!(
            generate_la(4, 5, VariantTag::BAR_ONE, 16),
            Err(Error::NoArray { .. })
        ));
        assert!(matches!(
            generate_la(4, 6, VariantTag::ONE_ONE, 16),
            Err(Error::NoArray { .. })
        ));
        assert!(matches!(
            generate_la(1, 2, VariantTag::ONE_BAR, 16),
            Err(Error::NoArray { .. })
        ));
        assert!(matches!(
            generate_la(9, 3, VariantTag::ONE_ONE, 8),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn generated_arrays_verify() {
        for n in 1..=9 {
            for variant in VariantTag::ALL {
                for v in 2..=variant.max_symbols(n) {
                    let want = lak(n, v, variant).to_usize().unwrap();
                    if want == 0 {
                        continue;
                    }
                    let a = generate_la(n, v, variant, 16).unwrap();
                    assert_eq!(a.columns(), want, "N={n} v={v} {variant}");
                    assert!(verify_la(&a, variant).is_ok(), "N={n} v={v} {variant}");
                }
            }
        }
    }

    #[test]
    fn implications_hold_on_generated_arrays() {
        for n in 2..=7 {
            for v in 2..=n {
                let a = generate_la(n, v, VariantTag::BAR_ONE, 16).unwrap();
                assert!(verify_la(&a, VariantTag::BAR_BAR).is_ok());
                assert!(verify_la(&a, VariantTag::ONE_ONE).is_ok());
                if v >= 3 {
                    let b = generate_la(n, v, VariantTag::ONE_ONE, 16).unwrap();
                    assert!(verify_la(&b, VariantTag::ONE_BAR).is_ok());
                }
            }
        }
    }
}
