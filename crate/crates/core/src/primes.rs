//! Deterministic primality for 64-bit integers and prime-power decomposition.

/// Below this bound primality is decided by trial division alone.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

// The first twelve primes form a deterministic Miller-Rabin witness set for all
// n < 3.3 * 10^24, which covers the full u64 range.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

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

fn trial_division(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn miller_rabin(n: u64) -> bool {
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in WITNESSES.iter() {
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

/// Exact primality test for any `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < TRIAL_DIVISION_LIMIT {
        return trial_division(n);
    }
    for &p in WITNESSES.iter() {
        if n % p == 0 {
            return false;
        }
    }
    miller_rabin(n)
}

/// Largest prime `<= x`, or `None` when `x < 2`.
pub fn prev_prime(x: u64) -> Option<u64> {
    let mut candidate = x;
    while candidate >= 2 {
        if is_prime(candidate) {
            return Some(candidate);
        }
        candidate -= 1;
    }
    None
}

/// Returns `(p, k)` with `q = p^k` if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = None;
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            p = Some(d);
            break;
        }
        d += 1;
    }
    let p = p.unwrap_or(q);
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Distinct prime factors of `n`, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes_match_sieve() {
        let limit = 20_000usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit {
            if sieve[i] {
                for j in (i * i..limit).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (n, &expected) in sieve.iter().enumerate() {
            assert_eq!(is_prime(n as u64), expected, "n = {n}");
        }
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division_above_limit() {
        for n in TRIAL_DIVISION_LIMIT..TRIAL_DIVISION_LIMIT + 5_000 {
            assert_eq!(miller_rabin_path(n), trial_division(n), "n = {n}");
        }
    }

    fn miller_rabin_path(n: u64) -> bool {
        if WITNESSES.iter().any(|&p| n % p == 0) {
            return WITNESSES.contains(&n);
        }
        miller_rabin(n)
    }

    #[test]
    fn strong_pseudoprimes_are_rejected() {
        // strong pseudoprimes to several small bases
        for n in [3_215_031_751u64, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321] {
            assert!(!is_prime(n), "{n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557)); // largest 64-bit prime
        assert!(!is_prime(u64::MAX));
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(1024), Some((2, 10)));
        assert_eq!(prime_power(729), Some((3, 6)));
        assert_eq!(prime_power(1009), Some((1009, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
    }
}
