//! Small exact-integer helpers shared by the bound formulas and constructions.

use num_rational::Ratio;

/// Exact rational used on every fractional path.
pub type Rational = Ratio<i128>;

/// Binomial coefficient with the convention that it vanishes outside
/// `0 <= k <= n` (in particular for negative lower index).
pub fn binom(n: i64, k: i64) -> i128 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// Binomial coefficient for non-negative arguments, `None` on overflow.
pub fn binom_checked(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

/// Largest `r` with `r * r <= n`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least prime `p >= x`.
pub fn smallest_prime_geq(x: f64) -> u64 {
    assert!(x.is_finite(), "smallest_prime_geq needs a finite argument");
    let mut p = x.ceil().max(2.0) as u64;
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// Least prime `p` with `p >= sqrt(n)`, decided by the exact test `p * p >= n`.
pub fn smallest_prime_geq_sqrt(n: u64) -> u64 {
    let r = isqrt(n);
    let mut p = if r * r == n { r } else { r + 1 }.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// Writes `q = p^d` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if !q.is_multiple_of(p) || p * p > q {
        // q itself is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut d = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        d += 1;
    }
    (rest == 1).then_some((p, d))
}

/// Floor of a rational (towards negative infinity).
pub fn floor_ratio(r: &Rational) -> i128 {
    r.floor().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(4, -1), 0);
        assert_eq!(binom(-1, -1), 0);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom(30, 15), 155_117_520);
        assert_eq!(binom_checked(100, 2), Some(4950));
    }

    #[test]
    fn integer_sqrt() {
        for n in 0..10_000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
    }

    #[test]
    fn primality_matches_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn smallest_primes() {
        assert_eq!(smallest_prime_geq(10f64.sqrt()), 5);
        assert_eq!(smallest_prime_geq(7.0), 7);
        assert_eq!(smallest_prime_geq(1.0), 2);
        assert_eq!(smallest_prime_geq_sqrt(10), 5);
        assert_eq!(smallest_prime_geq_sqrt(49), 7);
        assert_eq!(smallest_prime_geq_sqrt(7), 3);
        assert_eq!(smallest_prime_geq_sqrt(1), 2);
    }

    #[test]
    fn smallest_prime_has_no_prime_gap_below() {
        for n in 1..3000u64 {
            let p = smallest_prime_geq_sqrt(n);
            assert!(is_prime(p) && p * p >= n);
            assert!((1..p).filter(|&c| c * c >= n).all(|c| !is_prime(c)));
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(4), Some((2, 2)));
        assert_eq!(prime_power(5), Some((5, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(65536), Some((2, 16)));
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(12), None);
    }
}
