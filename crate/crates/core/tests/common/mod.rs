//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the search or reduction code it is compared with.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::Rng;

/// Every `x ∈ {1..N}^k` with `Σ cᵢxᵢ = 0` inside one color class.
pub fn brute_monochromatic(c: &[i64], colors: &[u8], distinct: bool) -> Option<Vec<u64>> {
    let n = colors.len() as u64;
    let k = c.len();
    let mut x = vec![1u64; k];
    if n == 0 {
        return None;
    }
    loop {
        let sum: i128 = c.iter().zip(&x).map(|(&ci, &xi)| ci as i128 * xi as i128).sum();
        if sum == 0 {
            let col = colors[x[0] as usize - 1];
            let same = x.iter().all(|&v| colors[v as usize - 1] == col);
            let uniq: BTreeSet<u64> = x.iter().copied().collect();
            if same && (!distinct || uniq.len() == k) {
                return Some(x);
            }
        }
        // odometer increment, last position fastest
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if x[i] < n {
                x[i] += 1;
                break;
            }
            x[i] = 1;
        }
    }
}

/// Least N ≤ n_max for which all r^N colorings contain a monochromatic
/// solution, by listing every coloring.
pub fn exhaustive_forcing_n(c: &[i64], r: u8, distinct: bool, n_max: usize) -> Option<usize> {
    (1..=n_max).find(|&n| all_colorings(n, r).all(|col| brute_monochromatic(c, &col, distinct).is_some()))
}

pub fn all_colorings(n: usize, r: u8) -> impl Iterator<Item = Vec<u8>> {
    let total = (r as u64).pow(n as u32);
    (0..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = (code % r as u64) as u8;
                code /= r as u64;
                d
            })
            .collect()
    })
}

/// Nonempty subset sums by bitmask.
pub fn subset_sums(ground: &[u64]) -> BTreeSet<u128> {
    (1u64..(1 << ground.len()))
        .map(|mask| {
            ground
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x as u128)
                .sum()
        })
        .collect()
}

/// MT-sums by assigning each index to "unused" or one of the k+1 blocks and
/// keeping assignments whose blocks are nonempty and in increasing order.
pub fn mt_sums_by_labels(ground: &[u64], coeffs: &[u64]) -> BTreeSet<u128> {
    let labels = coeffs.len() + 1; // 0 = unused
    let n = ground.len();
    let total = (labels as u64).pow(n as u32);
    let mut out = BTreeSet::new();
    for mut code in 0..total {
        let lab: Vec<usize> = (0..n)
            .map(|_| {
                let d = (code % labels as u64) as usize;
                code /= labels as u64;
                d
            })
            .collect();
        let used: Vec<usize> = lab.iter().copied().filter(|&l| l > 0).collect();
        let increasing = used.windows(2).all(|w| w[0] <= w[1]);
        let all_blocks = (1..labels).all(|b| used.contains(&b));
        if increasing && all_blocks {
            out.insert(
                lab.iter()
                    .zip(ground)
                    .filter(|(&l, _)| l > 0)
                    .map(|(&l, &x)| coeffs[l - 1] as u128 * x as u128)
                    .sum(),
            );
        }
    }
    out
}

/// A random sum-zero equation with `k` nonzero coefficients of size ≤ `bound`.
pub fn random_equation(rng: &mut impl Rng, k: usize, bound: i64) -> Vec<i64> {
    loop {
        let mut c: Vec<i64> = (0..k - 1)
            .map(|_| loop {
                let v = rng.gen_range(-bound..=bound);
                if v != 0 {
                    break v;
                }
            })
            .collect();
        let last = -c.iter().sum::<i64>();
        if last != 0 && last.abs() <= bound {
            c.push(last);
            return c;
        }
    }
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// All strings over `alphabet` of length ≤ `max_len`.
pub fn all_strings(alphabet: &[i64], max_len: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &layer {
            for &a in alphabet {
                let mut t: Vec<i64> = s.clone();
                t.push(a);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
