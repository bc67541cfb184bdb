//! Exact binomial coefficients over arbitrary-precision integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// C(n, k) by the multiplicative formula with exact division at every step.
///
/// A negative or undersized upper index yields 0, which is what lets the
/// alternating sums drop out-of-range terms without special cases.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// 2^k as a big integer.
pub fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(6, 0), BigInt::from(1));
        assert_eq!(binomial(0, 0), BigInt::from(1));
    }

    #[test]
    fn out_of_range_is_zero() {
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(-1, 0), BigInt::zero());
        assert_eq!(binomial(4, -2), BigInt::zero());
    }

    #[test]
    fn pascal_recurrence() {
        for n in 1..=20i64 {
            for k in 1..=n {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn pow2_matches_shift() {
        assert_eq!(pow2(0), BigInt::from(1));
        assert_eq!(pow2(7), BigInt::from(128));
    }
}
