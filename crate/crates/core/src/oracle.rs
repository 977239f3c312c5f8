//! Brute-force ground truth for tiny parameters.
//!
//! Nothing here calls into the bound formulas, the type constructions or
//! the class-fingerprint verifier. Rows and classes are plain `u32` masks.

use std::collections::BTreeSet;
use std::fmt;

use crate::combinatorics::VariantTag;
use crate::error::{Error, Result};
use crate::locating::TestArray;

pub const DEFAULT_ENUMERATION_CAP: usize = 8;
pub const DEFAULT_SEARCH_CAP: usize = 5;

/// A partition of `{1..N}` given by its classes as bitmasks (bit `i` is
/// element `i+1`), sorted ascending and padded with empty classes to `v`.
pub type Partition = Vec<u32>;

/// Every partition of `{1..N}` into at most `v` classes (`allow_empty`) or
/// exactly `v` nonempty classes, each once, via restricted growth strings.
pub fn enumerate_partitions(
    n: usize,
    v: usize,
    allow_empty: bool,
    cap: usize,
) -> Result<Vec<Partition>> {
    if n > cap {
        return Err(Error::CapExceeded {
            what: "partition enumeration",
            n,
            cap,
        });
    }
    if n > 31 {
        return Err(Error::InvalidParameters(
            "partition masks hold at most 31 elements".into(),
        ));
    }
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(
        pos: usize,
        used: usize,
        labels: &mut [usize],
        v: usize,
        allow_empty: bool,
        out: &mut Vec<Partition>,
    ) {
        let n = labels.len();
        if pos == n {
            if used == v || (allow_empty && used <= v) {
                let mut classes = vec![0u32; v];
                for (i, &l) in labels.iter().enumerate() {
                    classes[l] |= 1 << i;
                }
                classes.sort_unstable();
                out.push(classes);
            }
            return;
        }
        for l in 0..=used.min(v - 1) {
            labels[pos] = l;
            rec(pos + 1, used.max(l + 1), labels, v, allow_empty, out);
        }
    }
    if v == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return Ok(out);
    }
    rec(0, 0, &mut labels, v, allow_empty, &mut out);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub max_k: usize,
    /// The lexicographically least optimal system, in enumeration order.
    pub witness: Vec<Partition>,
    pub nodes: u64,
}

impl OracleResult {
    /// Witness as an `N × k` array: column `c` puts row `r` in the class of
    /// partition `c` containing it, classes numbered in stored order.
    pub fn to_array(&self, n: usize, v: usize) -> TestArray {
        let class_of = |p: &Partition, r: usize| {
            p.iter()
                .position(|&m| m >> r & 1 == 1)
                .expect("partition covers row") as u32
        };
        let cells = (0..n)
            .flat_map(|r| self.witness.iter().map(move |p| class_of(p, r)))
            .collect();
        TestArray::new(n, self.witness.len(), v, cells).expect("witness fits the alphabet")
    }
}

/// Largest system of partitions of `{1..N}` into `v` classes whose `k·v`
/// classes are pairwise distinct, with no empty class for barred `d` and no
/// class equal to `{1..N}` for barred `t`.
pub fn max_k_exhaustive(
    n: usize,
    v: usize,
    variant: VariantTag,
    cap: usize,
) -> Result<OracleResult> {
    if n > cap {
        return Err(Error::CapExceeded {
            what: "oracle",
            n,
            cap,
        });
    }
    if n < 1 || v < 2 {
        return Err(Error::InvalidParameters(format!(
            "need N >= 1 and v >= 2 (got N={n}, v={v})"
        )));
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let candidates: Vec<Partition> = enumerate_partitions(n, v, !variant.d_barred, cap)?
        .into_iter()
        .filter(|p| {
            let distinct: BTreeSet<u32> = p.iter().copied().collect();
            distinct.len() == p.len() && !(variant.t_barred && p.contains(&full))
        })
        .collect();

    struct Search<'a> {
        candidates: &'a [Partition],
        used: Vec<bool>,
        chosen: Vec<usize>,
        best: Vec<usize>,
        nodes: u64,
    }
    impl Search<'_> {
        fn fits(&self, i: usize) -> bool {
            self.candidates[i].iter().all(|&m| !self.used[m as usize])
        }
        fn mark(&mut self, i: usize, on: bool) {
            for &m in &self.candidates[i] {
                self.used[m as usize] = on;
            }
        }
        fn run(&mut self, from: usize) {
            self.nodes += 1;
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            let open: Vec<usize> = (from..self.candidates.len())
                .filter(|&i| self.fits(i))
                .collect();
            for (pos, &i) in open.iter().enumerate() {
                if self.chosen.len() + open.len() - pos <= self.best.len() {
                    return;
                }
                if !self.fits(i) {
                    continue;
                }
                self.mark(i, true);
                self.chosen.push(i);
                self.run(i + 1);
                self.chosen.pop();
                self.mark(i, false);
            }
        }
    }

    let mut search = Search {
        candidates: &candidates,
        used: vec![false; 1usize << n],
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
    };
    search.run(0);
    let witness = search.best.iter().map(|&i| candidates[i].clone()).collect();
    Ok(OracleResult {
        max_k: search.best.len(),
        witness,
        nodes: search.nodes,
    })
}

/// An interaction of strength at most one: `None` is the empty interaction.
pub type Pair = Option<(usize, u32)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Table1Verdict {
    Ok,
    /// Two different sets of interactions with the same row set.
    Collision {
        first: Vec<Pair>,
        second: Vec<Pair>,
        rows: Vec<usize>,
    },
}

impl Table1Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Table1Verdict::Ok)
    }
}

fn show_set(set: &[Pair]) -> String {
    let parts: Vec<String> = set
        .iter()
        .map(|p| match p {
            None => "⊔".to_string(),
            Some((c, s)) => format!("({}, {s})", c + 1),
        })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

impl fmt::Display for Table1Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Table1Verdict::Ok => write!(f, "ok"),
            Table1Verdict::Collision {
                first,
                second,
                rows,
            } => write!(
                f,
                "violated: {} and {} both cover rows {:?}",
                show_set(first),
                show_set(second),
                rows
            ),
        }
    }
}

/// Literal check of the locating condition with `d = t = 1`.
///
/// The sets compared are the singletons `{T}` for `T` in `I_1` (or in `Ī_1`,
/// which adds `⊔`, for barred `t`), plus the empty set for barred `d`. Rows
/// of a set are the union of the rows of its members. A singleton is
/// trivially independent.
pub fn verify_by_table1(array: &TestArray, variant: VariantTag) -> Table1Verdict {
    let n = array.rows();
    let covers = |p: &Pair, r: usize| match p {
        None => true,
        Some((c, s)) => array.get(r, *c) == *s,
    };
    let mut sets: Vec<Vec<Pair>> = Vec::new();
    if variant.d_barred {
        sets.push(Vec::new());
    }
    if variant.t_barred {
        sets.push(vec![None]);
    }
    for c in 0..array.columns() {
        for s in 0..array.symbols() as u32 {
            sets.push(vec![Some((c, s))]);
        }
    }
    let rows: Vec<Vec<usize>> = sets
        .iter()
        .map(|set| {
            (0..n)
                .filter(|&r| set.iter().any(|p| covers(p, r)))
                .map(|r| r + 1)
                .collect()
        })
        .collect();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            // The sets listed are pairwise different, so equal rows break the equivalence.
            if rows[i] == rows[j] {
                return Table1Verdict::Collision {
                    first: sets[i].clone(),
                    second: sets[j].clone(),
                    rows: rows[i].clone(),
                };
            }
        }
    }
    Table1Verdict::Ok
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Stirling numbers of the second kind by their recurrence.
    fn stirling2(n: usize, k: usize) -> usize {
        match (n, k) {
            (0, 0) => 1,
            (0, _) | (_, 0) => 0,
            _ => k * stirling2(n - 1, k) + stirling2(n - 1, k - 1),
        }
    }

    #[test]
    fn enumeration_examples() {
        let p = enumerate_partitions(3, 2, true, 8).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.contains(&vec![0, 0b111]));
        assert_eq!(
            enumerate_partitions(3, 3, false, 8).unwrap(),
            vec![vec![0b001, 0b010, 0b100]]
        );
        assert!(enumerate_partitions(3, 4, false, 8).unwrap().is_empty());
        assert!(matches!(
            enumerate_partitions(9, 2, true, 8),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_counts_match_stirling() {
        for n in 1..=7 {
            for v in 1..=n + 1 {
                let exact = enumerate_partitions(n, v, false, 8).unwrap();
                assert_eq!(exact.len(), stirling2(n, v), "n={n} v={v}");
                let loose = enumerate_partitions(n, v, true, 8).unwrap();
                assert_eq!(loose.len(), (1..=v).map(|j| stirling2(n, j)).sum::<usize>());
                let distinct: BTreeSet<_> = loose.iter().collect();
                assert_eq!(distinct.len(), loose.len());
                for p in &loose {
                    assert_eq!(p.iter().fold(0, |a, m| a | m), (1 << n) - 1);
                    assert_eq!(p.iter().map(|m| m.count_ones()).sum::<u32>(), n as u32);
                }
            }
        }
    }

    #[test]
    fn search_examples() {
        assert_eq!(
            max_k_exhaustive(3, 2, VariantTag::ONE_ONE, 5)
                .unwrap()
                .max_k,
            4
        );
        assert_eq!(
            max_k_exhaustive(5, 3, VariantTag::ONE_ONE, 5)
                .unwrap()
                .max_k,
            5
        );
        assert_eq!(
            max_k_exhaustive(5, 3, VariantTag::BAR_ONE, 5)
                .unwrap()
                .max_k,
            5
        );
        assert_eq!(
            max_k_exhaustive(1, 2, VariantTag::ONE_BAR, 5)
                .unwrap()
                .max_k,
            0
        );
        assert_eq!(
            max_k_exhaustive(2, 3, VariantTag::BAR_ONE, 5)
                .unwrap()
                .max_k,
            0
        );
        assert!(matches!(
            max_k_exhaustive(6, 2, VariantTag::ONE_ONE, 5),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn witnesses_pass_the_literal_check() {
        for n in 1..=4 {
            for variant in VariantTag::ALL {
                for v in 2..=n + 1 {
                    let res = max_k_exhaustive(n, v, variant, 5).unwrap();
                    let a = res.to_array(n, v);
                    assert_eq!(a.columns(), res.max_k);
                    assert!(
                        verify_by_table1(&a, variant).is_ok(),
                        "N={n} v={v} {variant}"
                    );
                }
            }
        }
    }

    #[test]
    fn search_is_deterministic() {
        let a = max_k_exhaustive(4, 3, VariantTag::ONE_ONE, 5).unwrap();
        let b = max_k_exhaustive(4, 3, VariantTag::ONE_ONE, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn table1_on_sample() {
        let a = TestArray::from_columns(
            2,
            &[vec![1, 1, 1], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
        )
        .unwrap();
        assert!(verify_by_table1(&a, VariantTag::ONE_ONE).is_ok());
        match verify_by_table1(&a, VariantTag::BAR_ONE) {
            Table1Verdict::Collision {
                first,
                second,
                rows,
            } => {
                assert!(first.is_empty());
                assert_eq!(second, vec![Some((0, 0))]);
                assert!(rows.is_empty());
            }
            other => panic!("{other:?}"),
        }
        match verify_by_table1(&a, VariantTag::ONE_BAR) {
            Table1Verdict::Collision { first, second, .. } => {
                assert_eq!(first, vec![None]);
                assert_eq!(second, vec![Some((0, 1))]);
            }
            other => panic!("{other:?}"),
        }
        assert!(!verify_by_table1(&a, VariantTag::BAR_BAR).is_ok());
    }
}
