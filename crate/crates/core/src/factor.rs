//! Deterministic `u64` factorization: small trial division, Miller-Rabin
//! primality with a base set proven complete for 64-bit inputs, and
//! Brent-cycle Pollard rho.
//!
//! Exact survival products over non-telescoping schedules reduce here:
//! cancelling shared primes up front yields coprime numerator and
//! denominator directly, where a single gcd on the megabit products would
//! be quadratic and hopeless.

pub(crate) fn factorize(n: u64, out: &mut Vec<u64>) {
    let mut n = n;
    if n <= 1 {
        return;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        if n == 1 {
            return;
        }
    }
    split(n, out);
}

fn split(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split(d, out);
    split(n / d, out);
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    // This base set decides primality for every n < 3.3e24.
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime_u64(n) && n % 2 != 0);
    let mut c = 1u64;
    loop {
        // Floyd cycle detection with gcds batched 64 steps at a time.
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut q = 1u64;
        let mut count = 0u32;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = x.abs_diff(y);
            if diff == 0 {
                break;
            }
            q = mul_mod(q, diff, n);
            count += 1;
            if count % 64 == 0 {
                d = gcd_u64(q, n);
            }
        }
        if d == 1 {
            d = gcd_u64(q, n);
        }
        if d > 1 && d < n {
            return d;
        }
        c += 1;
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_known_values() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(97));
        assert!(is_prime_u64(982_451_653));
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2,3,5,7
    }

    #[test]
    fn factorization_reconstructs() {
        for n in [
            1u64,
            2,
            360,
            982_451_653,
            6_000_000_004, // 2^2 * 1500000001
            u64::MAX,     // 3 * 5 * 17 * 257 * 641 * 65537 * 6700417
            9_999_999_998_999_999_999,
        ] {
            let mut fs = Vec::new();
            factorize(n, &mut fs);
            let product: u128 = fs.iter().map(|&p| p as u128).product();
            if n <= 1 {
                assert!(fs.is_empty());
            } else {
                assert_eq!(product, n as u128, "n={n}");
                assert!(fs.iter().all(|&p| is_prime_u64(p)), "n={n} {fs:?}");
            }
        }
    }
}
