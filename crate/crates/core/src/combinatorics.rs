//! Exact binomials, the optimum `Λ(N, v)` and the four strength-1 LAK values.
//!
//! Everything here is arbitrary precision; floating point only shows up in
//! [`asymptotic_rows`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `C(n, k)`, zero whenever `k < 0`, `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for j in 1..=k {
        acc *= n - k + j;
        acc /= j;
    }
    acc
}

/// The whole row `C(n, 0), …, C(n, n)` built by the multiplicative recurrence.
pub fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n + 1);
    let mut cur = BigUint::one();
    row.push(cur.clone());
    for k in 1..=n {
        cur = cur * (n - k + 1) / k;
        row.push(cur.clone());
    }
    row
}

/// Row lookup with the out-of-range convention.
pub(crate) fn row_at(row: &[BigUint], i: i64) -> BigUint {
    if i < 0 || i as usize >= row.len() {
        BigUint::zero()
    } else {
        row[i as usize].clone()
    }
}

/// Which of the four `d, t ≤ 1` locating-array classes is meant.
///
/// A barred `d` means "at most one faulty interaction", a barred `t` means
/// "strength at most one" (the empty interaction `⊔` participates).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariantTag {
    pub d_barred: bool,
    pub t_barred: bool,
}

impl VariantTag {
    pub const ONE_ONE: VariantTag = VariantTag {
        d_barred: false,
        t_barred: false,
    };
    pub const BAR_ONE: VariantTag = VariantTag {
        d_barred: true,
        t_barred: false,
    };
    pub const ONE_BAR: VariantTag = VariantTag {
        d_barred: false,
        t_barred: true,
    };
    pub const BAR_BAR: VariantTag = VariantTag {
        d_barred: true,
        t_barred: true,
    };

    pub const ALL: [VariantTag; 4] = [Self::ONE_ONE, Self::BAR_ONE, Self::ONE_BAR, Self::BAR_BAR];

    /// Flag spelling used on the command line.
    pub fn as_flag(&self) -> &'static str {
        match (self.d_barred, self.t_barred) {
            (false, false) => "11",
            (true, false) => "bar1-1",
            (false, true) => "1-bar1",
            (true, true) => "bar1-bar1",
        }
    }

    /// Largest `v` for which a nonempty array of this class exists on `n` rows.
    pub fn max_symbols(&self, n: usize) -> usize {
        if self.d_barred {
            n
        } else {
            n + 1
        }
    }
}

impl fmt::Display for VariantTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = if self.d_barred { "1̄" } else { "1" };
        let t = if self.t_barred { "1̄" } else { "1" };
        write!(f, "({d},{t})")
    }
}

impl FromStr for VariantTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "11" | "1-1" => Ok(Self::ONE_ONE),
            "bar1-1" => Ok(Self::BAR_ONE),
            "1-bar1" => Ok(Self::ONE_BAR),
            "bar1-bar1" => Ok(Self::BAR_BAR),
            other => Err(Error::Parse(format!(
                "unknown variant `{other}` (expected 11, bar1-1, 1-bar1 or bar1-bar1)"
            ))),
        }
    }
}

/// Derived parameters of a `(N, v)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundParams {
    pub n: usize,
    pub v: usize,
    /// `⌊(N+1)/v⌋`
    pub f: i64,
    /// `(f+1)·v − N`
    pub d: i64,
    /// `Σ_{i=f−d+2}^{f−1} (d−f−1+i)·C(N,i)`
    pub s: BigUint,
    /// `Σ_{i=f−v+1}^{f−2} (v−f+i)·C(N,i)`
    pub s_prime: BigUint,
    pub lambda: BigUint,
}

impl BoundParams {
    pub fn new(n: usize, v: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameters("N must be at least 1".into()));
        }
        if v < 2 {
            return Err(Error::InvalidParameters("v must be at least 2".into()));
        }
        let row = binomial_row(n);
        let c = |i: i64| row_at(&row, i);
        let (ni, vi) = (n as i64, v as i64);
        let f = (ni + 1) / vi;
        let d = (f + 1) * vi - ni;

        let s = (f - d + 2..=f - 1).fold(BigUint::zero(), |acc, i| {
            acc + c(i) * BigUint::from((d - f - 1 + i) as u64)
        });
        let s_prime = (f - vi + 1..=f - 2).fold(BigUint::zero(), |acc, i| {
            acc + c(i) * BigUint::from((vi - f + i) as u64)
        });

        let lambda = if v >= n + 2 {
            BigUint::zero()
        } else {
            let weighted = (f - d + 2..=f).fold(BigUint::zero(), |acc, i| {
                acc + c(i) * BigUint::from((f + 1 - i) as u64)
            });
            let low = (0..=f - d + 1).fold(BigUint::zero(), |acc, i| acc + c(i));
            weighted / BigUint::from(d as u64) + low
        };

        Ok(BoundParams {
            n,
            v,
            f,
            d,
            s,
            s_prime,
            lambda,
        })
    }

    /// `N ≡ v − 1 (mod v)`
    pub fn is_star_residue(&self) -> bool {
        self.n % self.v == self.v - 1
    }
}

/// `Λ(N, v)`, the largest `k` of a `(1,1)`-locating array with `N` rows on
/// `v` symbols. Zero once `v ≥ N + 2`.
///
/// Panics if `N = 0` or `v < 2`.
pub fn lambda_bound(n: usize, v: usize) -> BigUint {
    BoundParams::new(n, v)
        .expect("lambda_bound needs N >= 1 and v >= 2")
        .lambda
}

/// `Σ_{i=0}^{f} (f+1−i)·C(N,i) mod d` together with whether the residue
/// falls in `{f+1, …, d−1}`.
pub(crate) fn bar_residue(p: &BoundParams) -> (BigUint, bool) {
    let row = binomial_row(p.n);
    let total = (0..=p.f).fold(BigUint::zero(), |acc, i| {
        acc + row_at(&row, i) * BigUint::from((p.f + 1 - i) as u64)
    });
    let x = total.mod_floor(&BigUint::from(p.d as u64));
    let hit = match x.to_i64() {
        Some(x) => x > p.f && x < p.d,
        None => false,
    };
    (x, hit)
}

/// Whether the `(1̄,1)` optimum keeps the full `Λ(N, v)`.
pub(crate) fn bar_keeps_lambda(p: &BoundParams) -> bool {
    p.d >= p.f + 2 && bar_residue(p).1
}

/// Largest number of columns of a locating array of the given class.
///
/// Panics if `N = 0` or `v < 2`.
pub fn lak(n: usize, v: usize, variant: VariantTag) -> BigUint {
    let p = BoundParams::new(n, v).expect("lak needs N >= 1 and v >= 2");
    if v > variant.max_symbols(n) {
        return BigUint::zero();
    }
    match (variant.d_barred, variant.t_barred) {
        (false, false) => p.lambda,
        (false, true) => {
            if v >= 3 {
                p.lambda
            } else {
                (BigUint::one() << (n - 1)) - BigUint::one()
            }
        }
        (true, _) => {
            if bar_keeps_lambda(&p) {
                p.lambda
            } else {
                p.lambda - BigUint::one()
            }
        }
    }
}

/// Leading-term row estimate for `k` columns on `v` symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEstimate {
    pub epsilon: f64,
    pub entropy: f64,
    pub estimated_rows: f64,
}

/// Binary entropy in bits; `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// `log2` of an arbitrarily large positive integer.
pub fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.log2() + shift as f64
}

/// `N ≈ v·log2(k) / (v·log2 v − (v−1)·log2(v−1))`, with entropy taken at
/// `ε = 1/v`.
///
/// Panics if `k = 0` or `v < 2`.
pub fn asymptotic_rows(k: &BigUint, v: usize) -> AsymptoticEstimate {
    assert!(!k.is_zero(), "asymptotic_rows needs k >= 1");
    assert!(v >= 2, "asymptotic_rows needs v >= 2");
    let vf = v as f64;
    let denom = vf * vf.log2() - (vf - 1.0) * (vf - 1.0).log2();
    let epsilon = 1.0 / vf;
    AsymptoticEstimate {
        epsilon,
        entropy: binary_entropy(epsilon),
        estimated_rows: vf * log2_big(k) / denom,
    }
}

/// Exact checks of the binomial inequalities that the admissibility proof of
/// the optimal type leans on. Each returns the first failing parameter tuple.
pub mod inequalities {
    use super::{binomial_row, row_at};
    use num_bigint::BigUint;
    use num_traits::Zero;

    fn big(x: i64) -> BigUint {
        BigUint::from(x as u64)
    }

    fn prefix_sum(row: &[BigUint], upto_exclusive: i64) -> BigUint {
        (0..upto_exclusive).fold(BigUint::zero(), |acc, i| acc + row_at(row, i))
    }

    /// `C(N,a−1)·(N−a+1) = a·C(N,a)` for `0 ≤ a ≤ N ≤ n_max`.
    pub fn ratio_identity(n_max: usize) -> Result<(), (usize, usize)> {
        for n in 0..=n_max {
            let row = binomial_row(n);
            let ni = n as i64;
            for a in 0..=ni {
                if row_at(&row, a - 1) * big(ni - a + 1) != row_at(&row, a) * big(a) {
                    return Err((n, a as usize));
                }
            }
        }
        Ok(())
    }

    /// `C(N,a−i)·(N−a+1)^i ≤ a^i·C(N,a)` for `0 ≤ i ≤ a ≤ N`, `3 ≤ v < N`
    /// (the statement does not depend on `v` beyond `N ≥ 4`).
    pub fn ratio_power_bound(n_max: usize) -> Result<(), (usize, usize, usize)> {
        for n in 4..=n_max {
            let row = binomial_row(n);
            let ni = n as i64;
            for a in 0..=ni {
                let mut lhs_scale = BigUint::from(1u32);
                let mut rhs_scale = BigUint::from(1u32);
                for i in 0..=a {
                    if row_at(&row, a - i) * &lhs_scale > row_at(&row, a) * &rhs_scale {
                        return Err((n, a as usize, i as usize));
                    }
                    lhs_scale *= big(ni - a + 1);
                    rhs_scale *= big(a);
                }
            }
        }
        Ok(())
    }

    /// `(N+v)·C(N,a+1) ≥ N(v−1)·C(N,a)` for `0 ≤ a ≤ N/v`, `3 ≤ v < N`.
    pub fn next_term_bound(n_max: usize) -> Result<(), (usize, usize, usize)> {
        for n in 4..=n_max {
            let row = binomial_row(n);
            for v in 3..n {
                for a in 0..=(n / v) as i64 {
                    let lhs = row_at(&row, a + 1) * big((n + v) as i64);
                    let rhs = row_at(&row, a) * big((n * (v - 1)) as i64);
                    if lhs < rhs {
                        return Err((n, v, a as usize));
                    }
                }
            }
        }
        Ok(())
    }

    /// `(v−2)·Σ_{i<a} C(N,i) < C(N,a)` for `1 ≤ a ≤ N/v`, `3 ≤ v < N`.
    pub fn prefix_sum_bound(n_max: usize) -> Result<(), (usize, usize, usize)> {
        for n in 4..=n_max {
            let row = binomial_row(n);
            for v in 3..n {
                let mut prefix = BigUint::zero();
                for a in 1..=(n / v) as i64 {
                    prefix += row_at(&row, a - 1);
                    if &prefix * big(v as i64 - 2) >= row_at(&row, a) {
                        return Err((n, v, a as usize));
                    }
                }
            }
        }
        Ok(())
    }

    /// `(v−1)·Σ_{i<a} C(N,i) < C(N,a+2)` with `a = ⌊N/v⌋`, `3 ≤ v < N`.
    pub fn two_steps_up(n_max: usize) -> Result<(), (usize, usize)> {
        for n in 4..=n_max {
            let row = binomial_row(n);
            for v in 3..n {
                let a = (n / v) as i64;
                let lhs = prefix_sum(&row, a) * big(v as i64 - 1);
                if lhs >= row_at(&row, a + 2) {
                    return Err((n, v));
                }
            }
        }
        Ok(())
    }

    /// `((v−2)/2)·C(N,a) + (v−1)·Σ_{i<a} C(N,i) < C(N,a+1)` with
    /// `a = ⌊N/v⌋`, `4 ≤ v < N`; compared after doubling both sides.
    pub fn one_step_up(n_max: usize) -> Result<(), (usize, usize)> {
        for n in 5..=n_max {
            let row = binomial_row(n);
            for v in 4..n {
                let a = (n / v) as i64;
                let lhs = row_at(&row, a) * big(v as i64 - 2)
                    + prefix_sum(&row, a) * big(2 * (v as i64 - 1));
                if lhs >= row_at(&row, a + 1) * 2u32 {
                    return Err((n, v));
                }
            }
        }
        Ok(())
    }

    /// The two three-term inequalities for `v = 3`, `a = ⌊N/3⌋`, `N ≥ 4`:
    /// `N ≡ 0 (mod 3)`: `C(N,a−1) + 2C(N,a−2) + C(N,a−3) < C(N,a+1)`;
    /// `N ≡ 1 (mod 3)`: `½C(N,a) + 2C(N,a−1) + C(N,a−2) < C(N,a+1)`.
    pub fn three_parts(n_max: usize) -> Result<(), usize> {
        for n in 4..=n_max {
            let row = binomial_row(n);
            let a = (n / 3) as i64;
            let c = |i: i64| row_at(&row, i);
            let ok = match n % 3 {
                0 => c(a - 1) + c(a - 2) * 2u32 + c(a - 3) < c(a + 1),
                1 => c(a) + c(a - 1) * 4u32 + c(a - 2) * 2u32 < c(a + 1) * 2u32,
                _ => true,
            };
            if !ok {
                return Err(n);
            }
        }
        Ok(())
    }
}
