//! Random admissible types for property checks.

use rand::Rng;

use crate::combinatorics::binomial_row;
use crate::spread_types::{Shape, VType};
use num_traits::ToPrimitive;

fn capacities(n: usize) -> Vec<u64> {
    binomial_row(n)
        .iter()
        .map(|c| c.to_u64().unwrap_or(u64::MAX))
        .collect()
}

fn fits(sigma: &[u64], caps: &[u64], shape: &Shape) -> bool {
    let mut extra = vec![0u64; caps.len()];
    for &x in shape.entries() {
        extra[x as usize] += 1;
    }
    extra
        .iter()
        .zip(sigma)
        .zip(caps)
        .all(|((e, s), c)| s + e <= *c)
}

fn commit(sigma: &mut [u64], shape: &Shape) {
    for &x in shape.entries() {
        sigma[x as usize] += 1;
    }
}

/// A general admissible type on `{1..n}`: up to `max_shapes` shapes of
/// 1 to `max_len` entries with sums at most `n`, kept only while admissible.
pub fn random_admissible_type<R: Rng>(
    rng: &mut R,
    n: usize,
    max_len: usize,
    max_shapes: usize,
) -> VType {
    let caps = capacities(n);
    let mut sigma = vec![0u64; n + 1];
    let mut ty = VType::general(n);
    let mut added = 0;
    for _ in 0..max_shapes * 4 {
        if added == max_shapes {
            break;
        }
        let len = rng.gen_range(1..=max_len.max(1));
        let mut left = n as u32;
        let entries: Vec<u32> = (0..len)
            .map(|_| {
                let x = rng.gen_range(0..=left);
                left -= x;
                x
            })
            .collect();
        let shape = Shape::new(entries);
        if fits(&sigma, &caps, &shape) {
            commit(&mut sigma, &shape);
            ty.add(shape, 1u32).expect("sum bounded by n");
            added += 1;
        }
    }
    ty
}

/// A uniformly random composition of `n` into `v` nonnegative parts.
pub fn random_v_shape<R: Rng>(rng: &mut R, n: usize, v: usize) -> Shape {
    let mut cuts: Vec<u32> = (0..v - 1).map(|_| rng.gen_range(0..=n as u32)).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut entries = Vec::with_capacity(v);
    for c in cuts {
        entries.push(c - prev);
        prev = c;
    }
    entries.push(n as u32 - prev);
    Shape::new(entries)
}

/// Greedy random admissible `v`-type of spreads (shape sums equal `n`):
/// keep adding random `v`-shapes until `patience` consecutive rejections.
pub fn random_admissible_vtype<R: Rng>(rng: &mut R, n: usize, v: usize, patience: usize) -> VType {
    let caps = capacities(n);
    let mut sigma = vec![0u64; n + 1];
    let mut ty = VType::new(n, v);
    let mut misses = 0;
    while misses < patience {
        let shape = random_v_shape(rng, n, v);
        if fits(&sigma, &caps, &shape) {
            commit(&mut sigma, &shape);
            ty.add(shape, 1u32).expect("v entries summing to n");
            misses = 0;
        } else {
            misses += 1;
        }
    }
    ty
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=8 {
            let ty = random_admissible_type(&mut rng, n, 4, 12);
            assert!(ty.admissibility().is_admissible());
            let ty = random_admissible_vtype(&mut rng, n, 2.max(n / 2), 30);
            assert!(ty.admissibility().is_admissible());
            assert!(ty.shapes().all(|(s, _)| s.sum() == n as u64));
        }
    }

    #[test]
    fn v_shapes_sum_to_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let s = random_v_shape(&mut rng, 9, 4);
            assert_eq!(s.len(), 4);
            assert_eq!(s.sum(), 9);
        }
    }
}
