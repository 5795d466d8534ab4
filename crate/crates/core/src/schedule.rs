//! General replacement schedules: after the `k`-th white draw the ball
//! goes back together with `a_k` extra white balls, `a_k >= 1`.
//!
//! With partial sums `s_k = a_1 + ... + a_k` the survival function becomes
//! `P(T > n) = prod_{j=0}^{n-1} (w+s_j)/(b+w+s_j)`, and the first black
//! ball arrives in finite time almost surely exactly when `sum 1/s_j`
//! diverges. Divergence is undecidable for arbitrary sequences, so the
//! type admits only families with a known classification: constant rules,
//! polynomial-floor rules `a_k = max(1, floor(alpha k^p))`, and finite
//! explicit prefixes in front of either.
//!
//! For the convergent (defective) families the classifier returns
//! certified numeric bounds on the defect `P(T = infinity)`, built from
//! the sandwich
//!
//! ```text
//! -b sum_{j<n} 1/(w+s_j)  <=  log P(T > n)  <=  -b sum_{j<n} 1/(b+w+s_j)
//! ```
//!
//! with an exact rational prefix sum and telescoping/integral tail bounds,
//! all rounded outward.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::comb::{balanced_product, RawRatio};
use crate::exact::UrnConfig;
use crate::factor::factorize;
use crate::rational::{next_down, next_up, ExactRational};

/// Exact-prefix length used by [`classify`] before switching to tail
/// bounds.
pub const DEFAULT_TAIL_DEPTH: u64 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    #[error("constant increment must be at least one")]
    ZeroConstant,
    #[error("alpha must be positive")]
    NonpositiveAlpha,
    #[error("explicit prefix entries must be at least one")]
    ZeroPrefixEntry,
    #[error("explicit tails must be constant or polynomial rules")]
    NestedExplicit,
    #[error("schedule is almost surely finite; there is no defect to bracket")]
    NotDefective,
}

/// A replacement rule from one of the classifiable families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", try_from = "ScheduleRepr")]
pub enum Schedule {
    /// `a_k = c`.
    Constant { c: u64 },
    /// `a_k = max(1, floor(alpha * k^p))`.
    #[serde(rename = "poly")]
    PolynomialFloor { alpha: ExactRational, p: u32 },
    /// Listed increments for the first draws, then the tail rule
    /// (evaluated at the global draw index).
    Explicit {
        prefix: Vec<u64>,
        tail: Box<Schedule>,
    },
}

/// Mirror used only to validate during deserialization.
#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum ScheduleRepr {
    Constant {
        c: u64,
    },
    #[serde(rename = "poly")]
    PolynomialFloor {
        alpha: ExactRational,
        p: u32,
    },
    Explicit {
        prefix: Vec<u64>,
        tail: Box<ScheduleRepr>,
    },
}

impl TryFrom<ScheduleRepr> for Schedule {
    type Error = ScheduleError;

    fn try_from(repr: ScheduleRepr) -> Result<Self, Self::Error> {
        match repr {
            ScheduleRepr::Constant { c } => Schedule::constant(c),
            ScheduleRepr::PolynomialFloor { alpha, p } => Schedule::polynomial_floor(alpha, p),
            ScheduleRepr::Explicit { prefix, tail } => {
                let tail = Schedule::try_from(*tail)?;
                Schedule::explicit(prefix, tail)
            }
        }
    }
}

impl Schedule {
    pub fn constant(c: u64) -> Result<Self, ScheduleError> {
        if c == 0 {
            return Err(ScheduleError::ZeroConstant);
        }
        Ok(Schedule::Constant { c })
    }

    pub fn polynomial_floor(alpha: ExactRational, p: u32) -> Result<Self, ScheduleError> {
        if !alpha.is_positive() {
            return Err(ScheduleError::NonpositiveAlpha);
        }
        Ok(Schedule::PolynomialFloor { alpha, p })
    }

    pub fn explicit(prefix: Vec<u64>, tail: Schedule) -> Result<Self, ScheduleError> {
        if prefix.iter().any(|&a| a == 0) {
            return Err(ScheduleError::ZeroPrefixEntry);
        }
        if matches!(tail, Schedule::Explicit { .. }) {
            return Err(ScheduleError::NestedExplicit);
        }
        Ok(Schedule::Explicit {
            prefix,
            tail: Box::new(tail),
        })
    }

    pub fn unit() -> Self {
        Schedule::Constant { c: 1 }
    }

    /// `a_k` for `k >= 1`; every family guarantees `a_k >= 1`.
    pub fn increment(&self, k: u64) -> BigInt {
        debug_assert!(k >= 1);
        match self {
            Schedule::Constant { c } => BigInt::from(*c),
            Schedule::PolynomialFloor { alpha, p } => {
                let powered = BigInt::from(k).pow(*p);
                let floored = (alpha.numer() * powered) / alpha.denom();
                floored.max(BigInt::one())
            }
            Schedule::Explicit { prefix, tail } => match prefix.get(k as usize - 1) {
                Some(&a) => BigInt::from(a),
                None => tail.increment(k),
            },
        }
    }

    /// `[s_0 = 0, s_1, ..., s_n]`.
    pub fn partial_sums(&self, n: u64) -> Vec<BigInt> {
        self.partial_sum_iter().take(n as usize + 1).collect()
    }

    /// Iterator over `s_0, s_1, s_2, ...`.
    pub fn partial_sum_iter(&self) -> PartialSumIter<'_> {
        PartialSumIter {
            schedule: self,
            next_k: 0,
            acc: BigInt::zero(),
        }
    }
}

pub struct PartialSumIter<'a> {
    schedule: &'a Schedule,
    next_k: u64,
    acc: BigInt,
}

impl Iterator for PartialSumIter<'_> {
    type Item = BigInt;

    fn next(&mut self) -> Option<BigInt> {
        if self.next_k > 0 {
            self.acc += self.schedule.increment(self.next_k);
        }
        self.next_k += 1;
        Some(self.acc.clone())
    }
}

/// Outcome of the almost-sure-finiteness classification.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FinitenessVerdict {
    /// `sum 1/s_j` diverges: the black ball arrives with probability one.
    AlmostSurelyFinite,
    /// `sum 1/s_j` converges: certified bounds on `P(T = infinity)`.
    Defective { lower: f64, upper: f64 },
}

/// `P(T > n)` under an arbitrary schedule, exactly.
///
/// When every urn size along the way fits in `u64` the product is
/// canonicalized by cancelling prime factorizations, which sidesteps the
/// quadratic gcd a reduced megabit fraction would otherwise need. Wider
/// states fall back to a plain sequential product, affordable for the
/// small `n` where such states are practical.
pub fn survival_general(cfg: &UrnConfig, schedule: &Schedule, n: u64) -> ExactRational {
    let b = cfg.black() as u128;
    let w = cfg.white() as u128;

    let mut num_small: Vec<u64> = Vec::with_capacity(n as usize);
    let mut den_small: Vec<u64> = Vec::with_capacity(n as usize);
    let mut fits_u64 = true;
    for s_j in schedule.partial_sum_iter().take(n as usize) {
        if fits_u64 {
            let den = (&s_j + BigInt::from(b + w)).to_u64();
            let num = (&s_j + BigInt::from(w)).to_u64();
            match (num, den) {
                (Some(nu), Some(de)) => {
                    num_small.push(nu);
                    den_small.push(de);
                    continue;
                }
                _ => fits_u64 = false,
            }
        }
        if !fits_u64 {
            break;
        }
    }

    if fits_u64 {
        return cancelled_product(&num_small, &den_small);
    }

    let mut acc = ExactRational::one();
    for s_j in schedule.partial_sum_iter().take(n as usize) {
        let num = &s_j + BigInt::from(w);
        let den = s_j + BigInt::from(b + w);
        acc *= ExactRational::new(num, den).expect("positive denominator");
    }
    acc
}

/// Multiply `prod num_vals / prod den_vals` with shared primes cancelled
/// up front, so the result is born coprime.
fn cancelled_product(num_vals: &[u64], den_vals: &[u64]) -> ExactRational {
    let mut exponents: HashMap<u64, i64> = HashMap::new();
    let mut primes = Vec::new();
    for &v in num_vals {
        primes.clear();
        factorize(v, &mut primes);
        for &p in &primes {
            *exponents.entry(p).or_insert(0) += 1;
        }
    }
    for &v in den_vals {
        primes.clear();
        factorize(v, &mut primes);
        for &p in &primes {
            *exponents.entry(p).or_insert(0) -= 1;
        }
    }
    let mut entries: Vec<(u64, i64)> = exponents.into_iter().filter(|&(_, e)| e != 0).collect();
    entries.sort_unstable();
    let num_parts: Vec<BigInt> = entries
        .iter()
        .filter(|&&(_, e)| e > 0)
        .map(|&(p, e)| BigInt::from(p).pow(e as u32))
        .collect();
    let den_parts: Vec<BigInt> = entries
        .iter()
        .filter(|&&(_, e)| e < 0)
        .map(|&(p, e)| BigInt::from(p).pow((-e) as u32))
        .collect();
    ExactRational::from_coprime_parts(balanced_product(&num_parts), balanced_product(&den_parts))
}

pub fn classify(cfg: &UrnConfig, schedule: &Schedule) -> FinitenessVerdict {
    classify_with_depth(cfg, schedule, DEFAULT_TAIL_DEPTH)
}

/// Classification with an explicit exact-prefix depth.
///
/// Linear-growth families (`Constant`, `PolynomialFloor` with `p = 0`,
/// and explicit prefixes over either) give `sum 1/s_j = infinity`, hence
/// almost-sure finiteness. For `p >= 1` the sum converges and the verdict
/// carries the certified defect bounds
/// `exp(-b U) <= P(T = infinity) <= exp(-b L)` with `U` an upper bound on
/// `sum_j 1/(w+s_j)` and `L` a lower bound on `sum_j 1/(b+w+s_j)`.
pub fn classify_with_depth(cfg: &UrnConfig, schedule: &Schedule, depth: u64) -> FinitenessVerdict {
    match effective_tail(schedule) {
        TailKind::Linear => FinitenessVerdict::AlmostSurelyFinite,
        TailKind::Superlinear {
            alpha,
            p,
            prefix_len,
        } => defective_bounds(cfg, schedule, &alpha, p, prefix_len, depth.max(1)),
    }
}

enum TailKind {
    Linear,
    Superlinear {
        alpha: ExactRational,
        p: u32,
        prefix_len: u64,
    },
}

fn effective_tail(schedule: &Schedule) -> TailKind {
    match schedule {
        Schedule::Constant { .. } => TailKind::Linear,
        Schedule::PolynomialFloor { p: 0, .. } => TailKind::Linear,
        Schedule::PolynomialFloor { alpha, p } => TailKind::Superlinear {
            alpha: alpha.clone(),
            p: *p,
            prefix_len: 0,
        },
        Schedule::Explicit { prefix, tail } => match effective_tail(tail) {
            TailKind::Linear => TailKind::Linear,
            TailKind::Superlinear { alpha, p, .. } => TailKind::Superlinear {
                alpha,
                p,
                prefix_len: prefix.len() as u64,
            },
        },
    }
}

fn defective_bounds(
    cfg: &UrnConfig,
    schedule: &Schedule,
    alpha: &ExactRational,
    p: u32,
    prefix_len: u64,
    depth: u64,
) -> FinitenessVerdict {
    let b = cfg.black() as u128;
    let w = cfg.white() as u128;

    // Exact prefix sums of 1/(w+s_j) and 1/(b+w+s_j), unreduced. Stop
    // early once s_j outgrows 192 bits: the remaining terms are covered by
    // the tail bounds and contribute essentially nothing.
    let mut upper_terms: Vec<RawRatio> = Vec::new();
    let mut lower_terms: Vec<RawRatio> = Vec::new();
    let mut cut = depth;
    for (j, s_j) in schedule.partial_sum_iter().take(depth as usize).enumerate() {
        if s_j.bits() > 192 {
            cut = j as u64;
            break;
        }
        upper_terms.push(RawRatio::from_parts(
            BigInt::one(),
            &s_j + BigInt::from(w),
        ));
        lower_terms.push(RawRatio::from_parts(BigInt::one(), s_j + BigInt::from(b + w)));
    }

    let prefix_upper = RawRatio::tree_sum(&upper_terms);
    let prefix_lower = RawRatio::tree_sum(&lower_terms);

    // Tail of sum_{j >= cut} 1/(w+s_j) <= sum_{j >= cut} 1/s_j, bounded by
    // a dyadic bridge up to j1 (using s_j >= j) plus an integral
    // comparison beyond j1 (using s_j >= alpha j^{p+1} / growth_factor).
    let growth_factor = if prefix_len == 0 {
        2 * (p as u64 + 1)
    } else {
        4 * (p as u64 + 1)
    };
    let j0 = superlinear_onset(alpha, p, prefix_len, growth_factor);
    let j1 = j0.max(cut);

    // Dyadic bridge: each doubling block (2^t cut, 2^{t+1} cut] contributes
    // at most one, because it has at most 2^t cut terms each <= 1/(2^t cut).
    let mut bridge_blocks = 0u32;
    let mut reach = cut.max(1);
    while reach < j1 {
        reach = reach.saturating_mul(2);
        bridge_blocks += 1;
    }

    // Integral bound: sum_{j > j1} growth_factor / (alpha j^{p+1})
    //   <= growth_factor / (alpha p j1^p).
    let integral_tail = ExactRational::new(
        BigInt::from(growth_factor) * alpha.denom(),
        alpha.numer() * BigInt::from(p as u64) * BigInt::from(j1).pow(p),
    )
    .expect("positive");

    let tail = RawRatio::from_parts(
        BigInt::from(bridge_blocks) * integral_tail.denom() + integral_tail.numer(),
        integral_tail.denom().clone(),
    );

    let u_bound = prefix_upper.add(&tail).to_f64_ceil();
    let l_bound = prefix_lower.to_f64_floor();

    let b_up = if cfg.black() <= (1 << 53) {
        cfg.black() as f64
    } else {
        next_up(cfg.black() as f64)
    };
    let b_down = if cfg.black() <= (1 << 53) {
        cfg.black() as f64
    } else {
        next_down(cfg.black() as f64)
    };

    // Outward-rounded exponentials; the 1e-14 margins absorb the ulp-level
    // error of mul and exp.
    let lower = ((-next_up(next_up(b_up * u_bound))).exp() * (1.0 - 1e-14)).max(0.0);
    let upper = ((-next_down(next_down(b_down * l_bound))).exp() * (1.0 + 1e-14)).min(1.0);

    FinitenessVerdict::Defective { lower, upper }
}

/// Smallest `j` with `alpha j^p >= growth_factor` and `j >= 2 prefix_len`,
/// from which `s_j >= alpha j^{p+1} / growth_factor` is guaranteed.
fn superlinear_onset(alpha: &ExactRational, p: u32, prefix_len: u64, growth_factor: u64) -> u64 {
    let target = BigInt::from(growth_factor) * alpha.denom();
    let holds = |j: u64| alpha.numer() * BigInt::from(j).pow(p) >= target;
    let mut hi = 1u64;
    while !holds(hi) {
        hi = hi.saturating_mul(2);
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let onset = if holds(hi) { hi } else { hi + 1 };
    onset.max(2 * prefix_len).max(1)
}

/// Finite-`n` bracket of the defect for a convergent schedule:
/// `(P(T > n)` exactly, which decreases to `P(T = infinity)`, and the
/// certified lower bound from [`classify`]).
pub fn defect_bracket(
    cfg: &UrnConfig,
    schedule: &Schedule,
    n: u64,
) -> Result<(ExactRational, f64), ScheduleError> {
    match classify(cfg, schedule) {
        FinitenessVerdict::AlmostSurelyFinite => Err(ScheduleError::NotDefective),
        FinitenessVerdict::Defective { lower, .. } => {
            Ok((survival_general(cfg, schedule, n), lower))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;

    fn cfg(b: u64, w: u64) -> UrnConfig {
        UrnConfig::new(b, w).unwrap()
    }

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn poly(alpha: &str, p: u32) -> Schedule {
        Schedule::polynomial_floor(q(alpha), p).unwrap()
    }

    fn sums_u64(s: &Schedule, n: u64) -> Vec<u64> {
        s.partial_sums(n)
            .iter()
            .map(|v| v.to_u64().unwrap())
            .collect()
    }

    #[test]
    fn partial_sum_examples() {
        assert_eq!(sums_u64(&Schedule::unit(), 4), vec![0, 1, 2, 3, 4]);
        assert_eq!(sums_u64(&poly("1", 1), 4), vec![0, 1, 3, 6, 10]);
        let explicit =
            Schedule::explicit(vec![5, 5], Schedule::constant(2).unwrap()).unwrap();
        assert_eq!(sums_u64(&explicit, 4), vec![0, 5, 10, 12, 14]);
    }

    #[test]
    fn increments_stay_at_least_one() {
        // alpha small enough that the floor would vanish without the max.
        let s = poly("1/10", 1);
        for k in 1..=30u64 {
            assert!(s.increment(k) >= BigInt::one(), "k={k}");
        }
        assert_eq!(s.increment(5), BigInt::one()); // floor(1/2) -> clamped
        assert_eq!(s.increment(30), BigInt::from(3));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(Schedule::constant(0), Err(ScheduleError::ZeroConstant));
        assert_eq!(
            Schedule::polynomial_floor(q("0"), 1),
            Err(ScheduleError::NonpositiveAlpha)
        );
        assert_eq!(
            Schedule::explicit(vec![1, 0], Schedule::unit()),
            Err(ScheduleError::ZeroPrefixEntry)
        );
        let nested = Schedule::explicit(
            vec![1],
            Schedule::explicit(vec![1], Schedule::unit()).unwrap(),
        );
        assert_eq!(nested, Err(ScheduleError::NestedExplicit));
    }

    #[test]
    fn serde_round_trip_and_spec_literals() {
        let examples = [
            r#"{"type":"constant","c":1}"#,
            r#"{"type":"poly","alpha":"1","p":1}"#,
            r#"{"type":"poly","alpha":"3/2","p":2}"#,
            r#"{"type":"explicit","prefix":[5,5],"tail":{"type":"constant","c":2}}"#,
        ];
        for text in examples {
            let parsed: Schedule = serde_json::from_str(text).unwrap();
            let emitted = serde_json::to_string(&parsed).unwrap();
            let reparsed: Schedule = serde_json::from_str(&emitted).unwrap();
            assert_eq!(parsed, reparsed, "{text}");
        }
        assert!(serde_json::from_str::<Schedule>(r#"{"type":"constant","c":0}"#).is_err());
        assert!(serde_json::from_str::<Schedule>(r#"{"type":"poly","alpha":"-1","p":1}"#).is_err());
        assert!(serde_json::from_str::<Schedule>(r#"{"type":"wat"}"#).is_err());
    }

    #[test]
    fn survival_reduces_to_unit_rule() {
        let unit = Schedule::unit();
        for b in 1..=5u64 {
            for w in 1..=5u64 {
                for n in [0u64, 1, 7, 50, 100] {
                    assert_eq!(
                        survival_general(&cfg(b, w), &unit, n),
                        exact::survival(&cfg(b, w), n),
                        "b={b} w={w} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn survival_examples() {
        assert_eq!(
            survival_general(&cfg(1, 1), &Schedule::unit(), 5),
            q("1/6")
        );
        assert_eq!(
            survival_general(&cfg(3, 4), &poly("2", 3), 0),
            ExactRational::one()
        );
        // s = [0, 1, 3]: (1/2)(2/3)(4/5) = 4/15.
        assert_eq!(survival_general(&cfg(1, 1), &poly("1", 1), 3), q("4/15"));
    }

    #[test]
    fn survival_monotone_strictly_decreasing() {
        let s = poly("1", 1);
        let c = cfg(2, 3);
        let mut prev = survival_general(&c, &s, 0);
        for n in 1..=40u64 {
            let cur = survival_general(&c, &s, n);
            assert!(cur < prev, "n={n}");
            prev = cur;
        }
    }

    #[test]
    fn survival_big_state_falls_back_exactly() {
        // Huge alpha pushes the urn size beyond u64 almost immediately.
        let s = poly("36893488147419103232", 2); // 2^65
        let c = cfg(2, 1);
        let direct = survival_general(&c, &s, 3);
        // Sequential reference product.
        let mut acc = ExactRational::one();
        for s_j in s.partial_sum_iter().take(3) {
            let num = ExactRational::from(&s_j + BigInt::from(1));
            let den = ExactRational::from(s_j + BigInt::from(3));
            acc *= num / den;
        }
        assert_eq!(direct, acc);
    }

    #[test]
    fn classification_verdicts() {
        assert_eq!(
            classify(&cfg(1, 1_000_000_000), &Schedule::constant(1_000_000).unwrap()),
            FinitenessVerdict::AlmostSurelyFinite
        );
        assert_eq!(
            classify(&cfg(1, 1), &poly("7/2", 0)),
            FinitenessVerdict::AlmostSurelyFinite
        );
        let explicit_linear =
            Schedule::explicit(vec![1, 1, 1], Schedule::constant(1).unwrap()).unwrap();
        assert_eq!(
            classify(&cfg(3, 2), &explicit_linear),
            FinitenessVerdict::AlmostSurelyFinite
        );

        match classify(&cfg(1, 1), &poly("1", 1)) {
            FinitenessVerdict::Defective { lower, upper } => {
                assert!(0.0 < lower && lower <= upper && upper < 1.0, "{lower} {upper}");
            }
            other => panic!("expected defective, got {other:?}"),
        }
    }

    #[test]
    fn defective_bounds_bracket_the_limit() {
        // The exact survival at large n brackets the defect from above and
        // must stay above the certified lower bound.
        for (b, w, sched) in [
            (1u64, 1u64, poly("1", 1)),
            (2, 1, poly("1", 2)),
            (1, 2, poly("3/2", 1)),
            (
                1,
                1,
                Schedule::explicit(vec![7, 7, 7], poly("1", 1)).unwrap(),
            ),
        ] {
            let c = cfg(b, w);
            let verdict = classify_with_depth(&c, &sched, 20_000);
            let (lower, upper) = match verdict {
                FinitenessVerdict::Defective { lower, upper } => (lower, upper),
                other => panic!("expected defective, got {other:?}"),
            };
            let survival_far = survival_general(&c, &sched, 20_000).to_f64();
            assert!(lower > 0.0);
            assert!(lower <= survival_far, "b={b} w={w}: {lower} vs {survival_far}");
            assert!(lower <= upper);
            // The limit lies below every finite-n survival value; the upper
            // bound may legitimately sit on either side of survival_far, but
            // it must exceed the lower bound and admit the shrinking bracket.
            assert!(upper >= lower);
        }
    }

    #[test]
    fn defect_bracket_examples() {
        let s = poly("1", 1);
        let c = cfg(1, 1);
        let (at_zero, _) = defect_bracket(&c, &s, 0).unwrap();
        assert!(at_zero.is_one());

        let (upper_1k, lower) = defect_bracket(&c, &s, 1_000).unwrap();
        let (upper_10k, _) = defect_bracket(&c, &s, 10_000).unwrap();
        assert!(upper_10k <= upper_1k);
        assert!((upper_1k.to_f64() - upper_10k.to_f64()).abs() < 1e-3);
        assert!(lower <= upper_10k.to_f64());

        assert_eq!(
            defect_bracket(&c, &Schedule::unit(), 10),
            Err(ScheduleError::NotDefective)
        );
    }

    #[test]
    fn sandwich_inequalities_hold() {
        // exp(-b sum 1/(w+s_j)) <= P(T>n) <= exp(-b sum 1/(b+w+s_j)),
        // exponentials in f64 with outward slack, the middle term exact.
        for (b, w, sched) in [
            (1u64, 1u64, Schedule::unit()),
            (2, 3, poly("1", 1)),
            (3, 1, Schedule::constant(4).unwrap()),
            (1, 2, poly("2", 2)),
        ] {
            let c = cfg(b, w);
            let mut sum_lo = 0.0f64;
            let mut sum_hi = 0.0f64;
            for (n, s_j) in sched.partial_sum_iter().take(300).enumerate() {
                let n = n as u64;
                let mid = survival_general(&c, &sched, n).to_f64();
                let lo = (-(b as f64) * sum_lo).exp();
                let hi = (-(b as f64) * sum_hi).exp();
                assert!(
                    lo <= mid * (1.0 + 1e-12) && mid <= hi * (1.0 + 1e-12),
                    "b={b} w={w} n={n}: {lo} {mid} {hi}"
                );
                let s_f = s_j.to_f64().unwrap();
                sum_lo += 1.0 / (w as f64 + s_f);
                sum_hi += 1.0 / ((b + w) as f64 + s_f);
            }
        }
    }
}
