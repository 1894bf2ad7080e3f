//! Binomial coefficients and small permutation helpers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// `C(n, r)` as a `u128`; zero outside `0 <= r <= n`. Panics on overflow.
pub fn binom(n: i64, r: i64) -> u128 {
    if r < 0 || n < 0 || r > n {
        return 0;
    }
    let r = r.min(n - r) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul(n - i).expect("binomial overflow") / (i + 1);
    }
    acc
}

/// `C(n, r)` as a signed `i128`, for use inside alternating sums.
pub fn binom_i(n: i64, r: i64) -> i128 {
    binom(n, r) as i128
}

/// Arbitrary-precision `C(n, r)`.
pub fn binom_big(n: &BigUint, r: u64) -> BigUint {
    let mut acc = BigUint::one();
    let mut i = 0u64;
    while i < r {
        if *n < BigUint::from(i + 1) {
            return BigUint::zero();
        }
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
        i += 1;
    }
    acc
}

pub fn binom_bigint(n: i64, r: i64) -> BigInt {
    if r < 0 || n < 0 || r > n {
        return BigInt::zero();
    }
    BigInt::from(binom_big(&BigUint::from(n as u64), r as u64))
}

/// Sign of the permutation that sorts `items`, together with the sorted
/// sequence. Returns `None` when an entry repeats.
pub fn sort_with_sign(items: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut v = items.to_vec();
    let mut sign = 1i64;
    // insertion sort; each adjacent swap flips the sign
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, v))
}

/// Inserts `x` into the strictly increasing `rest`, returning the sign of
/// moving `x` from the front into place. `None` if `x` already occurs.
pub fn insert_front(x: usize, rest: &[usize]) -> Option<(i64, Vec<usize>)> {
    let pos = match rest.binary_search(&x) {
        Ok(_) => return None,
        Err(p) => p,
    };
    let mut out = Vec::with_capacity(rest.len() + 1);
    out.extend_from_slice(&rest[..pos]);
    out.push(x);
    out.extend_from_slice(&rest[pos..]);
    Some((if pos % 2 == 0 { 1 } else { -1 }, out))
}
