//! Integer combinatorics shared by the exact modules: factorial ratios,
//! binomials, Eulerian numbers, and fast exact harmonic-type sums.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::ExactRational;

pub(crate) fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// `start * (start+1) * ... * (start+len-1)`; empty product is one.
pub(crate) fn rising_product(start: &BigInt, len: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut term = start.clone();
    for _ in 0..len {
        acc *= &term;
        term += 1;
    }
    acc
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// Beta function at positive integer arguments as an exact rational:
/// `B(u, v) = (u-1)! (v-1)! / (u+v-1)!`.
pub(crate) fn beta_int(u: u64, v: u64) -> ExactRational {
    debug_assert!(u >= 1 && v >= 1);
    let num = factorial(u - 1) * factorial(v - 1);
    let den = factorial(u + v - 1);
    ExactRational::new(num, den).expect("factorials are nonzero")
}

/// Row `r` of the Eulerian-number triangle, entries `<r, 0> .. <r, r-1>`.
///
/// Recurrence: `<r, j> = (j+1) <r-1, j> + (r-j) <r-1, j-1>`.
pub(crate) fn eulerian_row(r: u32) -> Vec<BigInt> {
    assert!(r >= 1);
    let mut row = vec![BigInt::one()];
    for m in 2..=r as u64 {
        let mut next = vec![BigInt::zero(); m as usize];
        for (j, v) in row.iter().enumerate() {
            let j = j as u64;
            next[j as usize] += v * BigInt::from(j + 1);
            next[j as usize + 1] += v * BigInt::from(m - (j + 1));
        }
        next.truncate(m as usize);
        row = next;
    }
    row
}

/// Exact `sum_{j=lo..=hi} 1/j` computed over the common denominator
/// `lcm(1..=hi)`, which stays near `e^hi` bits instead of the factorial
/// blowup of naive pairwise reduction.
pub(crate) fn reciprocal_sum(lo: u64, hi: u64) -> ExactRational {
    assert!(lo >= 1 && hi >= lo);
    let lcm = lcm_up_to(hi);
    let mut num = BigInt::zero();
    for j in lo..=hi {
        num += &lcm / j;
    }
    ExactRational::new(num, lcm).expect("lcm positive")
}

/// `lcm(1..=n)` via a prime sieve: product of `p^floor(log_p n)`.
fn lcm_up_to(n: u64) -> BigInt {
    let mut parts: Vec<BigInt> = Vec::new();
    for p in sieve_primes(n) {
        let mut pk = p;
        while pk <= n / p {
            pk *= p;
        }
        parts.push(BigInt::from(pk));
    }
    if parts.is_empty() {
        return BigInt::one();
    }
    balanced_product(&parts)
}

pub(crate) fn sieve_primes(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Product of many factors as a balanced tree; keeps multiplications
/// near-symmetric so subquadratic bigint multiplication pays off.
pub(crate) fn balanced_product(factors: &[BigInt]) -> BigInt {
    match factors.len() {
        0 => BigInt::one(),
        1 => factors[0].clone(),
        n => {
            let (a, b) = factors.split_at(n / 2);
            balanced_product(a) * balanced_product(b)
        }
    }
}

/// Unreduced nonnegative ratio for internal sums where canonical form is
/// never needed, only float conversion with directed rounding. Skipping
/// reduction matters: gcd on megabit operands is quadratic.
#[derive(Clone, Debug)]
pub(crate) struct RawRatio {
    pub num: BigInt,
    pub den: BigInt,
}

impl RawRatio {
    pub fn from_parts(num: BigInt, den: BigInt) -> Self {
        debug_assert!(den > BigInt::zero());
        Self { num, den }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            num: &self.num * &other.den + &other.num * &self.den,
            den: &self.den * &other.den,
        }
    }

    /// Balanced summation; operand sizes stay even so bigint
    /// multiplication costs stay subquadratic overall.
    pub fn tree_sum(terms: &[RawRatio]) -> Self {
        match terms.len() {
            0 => Self::from_parts(BigInt::zero(), BigInt::one()),
            1 => terms[0].clone(),
            n => {
                let (a, b) = terms.split_at(n / 2);
                Self::tree_sum(a).add(&Self::tree_sum(b))
            }
        }
    }

    pub fn to_f64_floor(&self) -> f64 {
        crate::rational::parts_to_f64_floor(&self.num, &self.den)
    }

    pub fn to_f64_ceil(&self) -> f64 {
        crate::rational::parts_to_f64_ceil(&self.num, &self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_small() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
    }

    #[test]
    fn binomial_matches_pascal() {
        assert_eq!(binomial(7, 3), BigInt::from(35));
        assert_eq!(binomial(10, 0), BigInt::one());
        assert_eq!(binomial(3, 5), BigInt::zero());
    }

    #[test]
    fn beta_integer_args() {
        // B(1, w) = 1/w, B(2, w) = 1/(w(w+1)).
        assert_eq!(beta_int(1, 4), "1/4".parse().unwrap());
        assert_eq!(beta_int(2, 3), "1/12".parse().unwrap());
        assert_eq!(beta_int(3, 2), "1/12".parse().unwrap());
    }

    #[test]
    fn eulerian_rows_match_triangle() {
        assert_eq!(eulerian_row(1), vec![BigInt::from(1)]);
        assert_eq!(eulerian_row(2), vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(
            eulerian_row(3),
            vec![BigInt::from(1), BigInt::from(4), BigInt::from(1)]
        );
        assert_eq!(
            eulerian_row(4),
            vec![
                BigInt::from(1),
                BigInt::from(11),
                BigInt::from(11),
                BigInt::from(1)
            ]
        );
    }

    #[test]
    fn reciprocal_sum_matches_naive() {
        let exact = reciprocal_sum(2, 11);
        let naive: ExactRational = (2u64..=11)
            .map(|j| ExactRational::new(1.into(), j.into()).unwrap())
            .sum();
        assert_eq!(exact, naive);
    }

    #[test]
    fn lcm_small() {
        assert_eq!(lcm_up_to(1), BigInt::one());
        assert_eq!(lcm_up_to(10), BigInt::from(2520));
    }

    #[test]
    fn raw_ratio_tree_sum_matches_reduced() {
        let terms: Vec<RawRatio> = (1u64..=20)
            .map(|j| RawRatio::from_parts(BigInt::one(), BigInt::from(j * j + 1)))
            .collect();
        let raw = RawRatio::tree_sum(&terms);
        let reduced: ExactRational = (1u64..=20)
            .map(|j| ExactRational::new(1.into(), (j * j + 1).into()).unwrap())
            .sum();
        let as_exact = ExactRational::new(raw.num, raw.den).unwrap();
        assert_eq!(as_exact, reduced);
    }
}
