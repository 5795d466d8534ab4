//! Exact waiting-time analytics under the unit replacement rule: the urn
//! starts with `b` black and `w` white balls, every white draw returns the
//! ball plus one extra white ball, and `T` is the draw index of the first
//! black ball.
//!
//! Everything here is computed in exact rational arithmetic. The survival
//! function is the product `P(T > n) = prod_{i=0}^{n-1} (w+i)/(b+w+i)`;
//! all moments, conditional expectations, and parity probabilities derive
//! from it. The headline structure: `E[T^r]` is finite if and only if
//! `b > r`, independent of `w`.

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::comb::{eulerian_row, reciprocal_sum, rising_product};
use crate::rational::ExactRational;

/// Largest accepted initial count, `2^63 - 1`.
pub const MAX_COUNT: u64 = i64::MAX as u64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("initial counts must both be at least one (got b={b}, w={w})")]
    InvalidCounts { b: u64, w: u64 },
    #[error("initial counts are capped at 2^63-1")]
    CountTooLarge,
    #[error("the first draw is draw one; n = 0 carries no mass")]
    ZeroDraw,
    #[error("moment order must be at least one")]
    ZeroOrder,
    #[error("conditioning horizon must be at least one")]
    ZeroHorizon,
    #[error("tolerance must be positive")]
    NonpositiveTolerance,
    #[error("tolerance {0} is below what f64 interval endpoints can certify")]
    ToleranceTooFine(f64),
}

/// Initial urn contents: `b` black and `w` white balls, both at least one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct UrnConfig {
    b: u64,
    w: u64,
}

impl UrnConfig {
    pub fn new(b: u64, w: u64) -> Result<Self, ExactError> {
        if b == 0 || w == 0 {
            return Err(ExactError::InvalidCounts { b, w });
        }
        if b > MAX_COUNT || w > MAX_COUNT {
            return Err(ExactError::CountTooLarge);
        }
        Ok(Self { b, w })
    }

    pub fn black(&self) -> u64 {
        self.b
    }

    pub fn white(&self) -> u64 {
        self.w
    }
}

/// A value that is either an exact rational or provably `+infinity`.
///
/// Infinite moments are a first-class outcome here, never a sentinel float.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extended {
    Finite(ExactRational),
    PositiveInfinity,
}

impl Extended {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(&self) -> Option<&ExactRational> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::PositiveInfinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(v) => v.to_f64(),
            Extended::PositiveInfinity => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for Extended {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::PositiveInfinity => write!(f, "inf"),
        }
    }
}

/// Finiteness verdict and exact value (when finite) for one raw moment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentReport {
    pub order: u32,
    pub finite: bool,
    pub value: Option<ExactRational>,
}

/// `P(T > n)`: the first `n` draws are all white.
///
/// Computed as the incremental product; the reduced value always collapses
/// to `b` denominator factors, so intermediate integers stay small.
pub fn survival(cfg: &UrnConfig, n: u64) -> ExactRational {
    let b = cfg.b as u128;
    let w = cfg.w as u128;
    let mut acc = ExactRational::one();
    for i in 0..n as u128 {
        acc *= ExactRational::new(BigInt::from(w + i), BigInt::from(b + w + i))
            .expect("positive denominator");
    }
    acc
}

/// `[P(T > 0), P(T > 1), ..., P(T > n_max)]` in one linear pass.
pub fn survival_table(cfg: &UrnConfig, n_max: u64) -> Vec<ExactRational> {
    let b = cfg.b as u128;
    let w = cfg.w as u128;
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut acc = ExactRational::one();
    out.push(acc.clone());
    for i in 0..n_max as u128 {
        acc *= ExactRational::new(BigInt::from(w + i), BigInt::from(b + w + i))
            .expect("positive denominator");
        out.push(acc.clone());
    }
    out
}

/// Survival via the quotient of rising factorials,
/// `P(T > n) = [w (w+1) ... (b+w-1)] / [(w+n) (w+n+1) ... (b+w-1+n)]`.
///
/// Kept as an algebraically distinct twin of [`survival`] for
/// differential testing; also the cheap route when `n` is large.
pub fn survival_factorial_form(cfg: &UrnConfig, n: u64) -> ExactRational {
    let num = rising_product(&BigInt::from(cfg.w), cfg.b);
    let den = rising_product(&(BigInt::from(cfg.w) + BigInt::from(n)), cfg.b);
    ExactRational::new(num, den).expect("positive denominator")
}

/// `P(T = n)` for `n >= 1`, via `P(T > n-1) * b / (b+w+n-1)`.
pub fn pmf(cfg: &UrnConfig, n: u64) -> Result<ExactRational, ExactError> {
    if n == 0 {
        return Err(ExactError::ZeroDraw);
    }
    let hit = ExactRational::new(
        BigInt::from(cfg.b),
        BigInt::from(cfg.b as u128 + cfg.w as u128 + (n - 1) as u128),
    )
    .expect("positive denominator");
    Ok(survival(cfg, n - 1) * hit)
}

/// `E[T]`: infinite when `b = 1`, otherwise `(b+w-1)/(b-1)`.
pub fn expectation(cfg: &UrnConfig) -> Extended {
    if cfg.b == 1 {
        return Extended::PositiveInfinity;
    }
    let num = BigInt::from(cfg.b as u128 + cfg.w as u128 - 1);
    let den = BigInt::from(cfg.b - 1);
    Extended::Finite(ExactRational::new(num, den).expect("b >= 2"))
}

/// `V(T)`: infinite when `b <= 2`, otherwise `b w (b+w-1) / ((b-1)^2 (b-2))`.
pub fn variance(cfg: &UrnConfig) -> Extended {
    if cfg.b <= 2 {
        return Extended::PositiveInfinity;
    }
    let num = BigInt::from(cfg.b) * BigInt::from(cfg.w) * (BigInt::from(cfg.b) + cfg.w - 1);
    let bm1 = BigInt::from(cfg.b - 1);
    let den = &bm1 * &bm1 * BigInt::from(cfg.b - 2);
    Extended::Finite(ExactRational::new(num, den).expect("b >= 3"))
}

/// `E[T^r]` with the finiteness verdict `b > r`.
///
/// When finite the value comes from mixing the geometric moment over the
/// limiting Beta law: `E[T^r | P=p] = A_r(1-p)/p^r` with `A_r` the Eulerian
/// polynomial, which integrates to
/// `sum_j <r,j> B(b-r, w+j) / B(b, w)`. The Beta ratios reduce to rising
/// products, so arbitrarily large `b`, `w` stay cheap and exact.
pub fn raw_moment(cfg: &UrnConfig, r: u32) -> Result<MomentReport, ExactError> {
    if r == 0 {
        return Err(ExactError::ZeroOrder);
    }
    if cfg.b <= r as u64 {
        return Ok(MomentReport {
            order: r,
            finite: false,
            value: None,
        });
    }
    let b = BigInt::from(cfg.b);
    let w = BigInt::from(cfg.w);
    let denominator = rising_product(&(&b - r), r as u64);
    let eulerian = eulerian_row(r);
    let mut total = ExactRational::zero();
    for (j, coeff) in eulerian.iter().enumerate() {
        let j = j as u64;
        let white_part = rising_product(&w, j);
        let upper_part = rising_product(&(&b + &w + j - r as u64), r as u64 - j);
        let term = ExactRational::new(coeff * white_part * upper_part, denominator.clone())
            .expect("denominator positive");
        total += term;
    }
    Ok(MomentReport {
        order: r,
        finite: true,
        value: Some(total),
    })
}

/// `E[T | T <= k]` for the single-black single-white start:
/// `((k+1)/k) * sum_{j=1}^{k} 1/(j+1)`, exactly.
///
/// Grows like `ln k + gamma - 1`; the exact value is assembled over an
/// `lcm` common denominator so `k = 10^5` stays affordable.
pub fn conditional_expectation_t11(k: u64) -> Result<ExactRational, ExactError> {
    if k == 0 {
        return Err(ExactError::ZeroHorizon);
    }
    let tail = reciprocal_sum(2, k + 1);
    let scale = ExactRational::new(BigInt::from(k as u128 + 1), BigInt::from(k))
        .expect("k positive");
    Ok(scale * tail)
}

/// Certified interval for `P(T odd)` at the single-black single-white
/// start. The exact value is `sum_{l>=0} 1/((2l+1)(2l+2)) = ln 2`.
///
/// The partial sum over `l < L` is exact (it equals `H_{2L} - H_L`), and
/// the tail is bracketed by two telescoping comparison series:
///
/// ```text
/// 1/((2l+1)(2l+3)) <= 1/((2l+1)(2l+2)) <= 1/((2l)(2l+2))
/// ```
///
/// summing to `1/(2(2L+1))` and `1/(4L)`, so the bracket width is below
/// `1/(8 L^2)` and `L ~ tol^{-1/2}` terms suffice. Endpoints are rounded
/// outward, so the returned floats always contain the limit.
pub fn prob_odd_t11(tol: f64) -> Result<(f64, f64), ExactError> {
    if !(tol > 0.0) {
        return Err(ExactError::NonpositiveTolerance);
    }
    // Two outward-rounded endpoints near 0.69 cost at most 4 ulps ~ 4.5e-16
    // of width on top of the exact bracket; below this no f64 interval of
    // the requested width can contain an irrational limit.
    if tol < 1e-15 {
        return Err(ExactError::ToleranceTooFine(tol));
    }
    let mut terms = (0.25 / tol).sqrt().ceil() as u64 + 1;
    loop {
        let partial = reciprocal_sum(terms + 1, 2 * terms);
        let tail_lo = ExactRational::new(1.into(), BigInt::from(2 * (2 * terms as u128 + 1)))
            .expect("positive");
        let tail_hi = ExactRational::new(1.into(), BigInt::from(4 * terms as u128))
            .expect("positive");
        let lo = (&partial + &tail_lo).to_f64_floor();
        let hi = (partial + tail_hi).to_f64_ceil();
        if hi - lo <= tol {
            return Ok((lo, hi));
        }
        terms *= 2;
    }
}

/// Median bracket of `T`: `(lo, hi)` where `lo` is the smallest `m` with
/// `P(T <= m) >= 1/2` and `hi` the smallest with `P(T <= m) > 1/2`.
///
/// The two differ exactly when some survival value equals `1/2`, in which
/// case any point of `[lo, hi]` is a distribution median.
pub fn median_bracket(cfg: &UrnConfig) -> (u64, u64) {
    let half = ExactRational::new(1.into(), 2.into()).expect("positive");
    let b = cfg.b as u128;
    let w = cfg.w as u128;
    let mut acc = ExactRational::one();
    let mut m = 0u64;
    let mut lo = None;
    loop {
        acc *= ExactRational::new(BigInt::from(w + m as u128), BigInt::from(b + w + m as u128))
            .expect("positive denominator");
        m += 1;
        // P(T <= m) = 1 - survival(m)
        if lo.is_none() && acc <= half {
            lo = Some(m);
        }
        if acc < half {
            return (lo.expect("set at or before strict crossing"), m);
        }
    }
}
