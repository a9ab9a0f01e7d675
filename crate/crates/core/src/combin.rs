//! Small exact-arithmetic helpers shared by the constructions.

use crate::error::{Error, Result};

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc = C(n - k + i + 1, i + 1) after the division
        acc = acc * (n - k + i + 1) as u128 / (i + 1) as u128;
    }
    acc
}

/// Exact division, failing when the quotient is not integral.
pub fn exact_div(num: u128, den: u128, what: &str) -> Result<u128> {
    if den == 0 || !num.is_multiple_of(den) {
        return Err(Error::Consistency(format!(
            "{what}: {num}/{den} is not an integer"
        )));
    }
    Ok(num / den)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Index of a sorted subset in colexicographic order among subsets of the
/// same size drawn from `1..=v`.
pub fn colex_rank(subset: &[u32]) -> u128 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &x)| binomial(u64::from(x - 1), i as u64 + 1))
        .sum()
}

/// Largest `w` with `w * w * den <= num`.
pub fn isqrt_ratio(num: u64, den: u64) -> u64 {
    let mut w = 0u64;
    while (w + 1) * (w + 1) * den <= num {
        w += 1;
    }
    w
}
