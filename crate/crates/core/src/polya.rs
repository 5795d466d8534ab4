//! The count distribution of the two-color reinforcing urn: after each
//! draw the ball goes back with one extra ball of the same color, and
//! `B_n` counts black draws among the first `n`.
//!
//! `B_n` follows the classical urn count law, which coincides with a
//! beta-binomial at integer parameters; both routes are implemented
//! independently and checked for exact equality. The black-ball proportion
//! `X_n = (b+B_n)/(b+w+n)` is conserved in conditional expectation, and
//! [`martingale_step`] exposes both sides of that one-step identity as
//! exact rationals.
//!
//! Note on the product form: the white factors must number `n-k` (running
//! through `w + n - k - 1`). A variant with one extra white factor does
//! not normalize; the table tests assert that rows sum to one exactly.

use std::io::{self, Write};

use num_bigint::BigInt;
use thiserror::Error;

use crate::comb::{beta_int, binomial, rising_product};
use crate::exact::UrnConfig;
use crate::rational::ExactRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyaError {
    #[error("k = {k} outside the support 0..={n}")]
    CountOutOfRange { k: u64, n: u64 },
    #[error("beta-binomial parameters must be at least one")]
    InvalidParameters,
}

/// `P(B_n = k)`:
/// `C(n,k) * prod_{i<k}(b+i) * prod_{j<n-k}(w+j) / prod_{l<n}(b+w+l)`.
pub fn polya_pmf(cfg: &UrnConfig, n: u64, k: u64) -> Result<ExactRational, PolyaError> {
    if k > n {
        return Err(PolyaError::CountOutOfRange { k, n });
    }
    let b = BigInt::from(cfg.black());
    let w = BigInt::from(cfg.white());
    let num = binomial(n, k) * rising_product(&b, k) * rising_product(&w, n - k);
    let den = rising_product(&(b + w), n);
    Ok(ExactRational::new(num, den).expect("positive denominator"))
}

/// Beta-binomial pmf `C(n,k) * B(u+k, v+n-k) / B(u,v)` computed literally
/// through factorial ratios, as a deliberately distinct route from
/// [`polya_pmf`]. Exact for any parameters; cost grows with `u+v+n`.
pub fn beta_binomial_pmf(u: u64, v: u64, n: u64, k: u64) -> Result<ExactRational, PolyaError> {
    if u == 0 || v == 0 {
        return Err(PolyaError::InvalidParameters);
    }
    if k > n {
        return Err(PolyaError::CountOutOfRange { k, n });
    }
    // Both Beta values expand to factorial ratios; cost grows with u+v+n.
    let posterior = beta_int(u + k, v + n - k);
    let prior = beta_int(u, v);
    Ok(ExactRational::from(binomial(n, k)) * posterior / prior)
}

/// State after `n` draws with `k` of them black.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProportionState {
    cfg: UrnConfig,
    n: u64,
    k: u64,
}

impl ProportionState {
    pub fn new(cfg: UrnConfig, n: u64, k: u64) -> Result<Self, PolyaError> {
        if k > n {
            return Err(PolyaError::CountOutOfRange { k, n });
        }
        Ok(Self { cfg, n, k })
    }

    /// Black-ball fraction `(b+k)/(b+w+n)`, exactly; always in `(0, 1)`.
    pub fn value(&self) -> ExactRational {
        ratio(
            self.cfg.black() as u128 + self.k as u128,
            self.cfg.black() as u128 + self.cfg.white() as u128 + self.n as u128,
        )
    }
}

/// Both sides of the one-step conservation identity at state `(n, k)`:
/// `lhs = E[X_{n+1} | B_n = k]` as the exact two-branch mixture,
/// `rhs = X_n = (b+k)/(b+w+n)`. They are equal for every state.
pub fn martingale_step(
    cfg: &UrnConfig,
    n: u64,
    k: u64,
) -> Result<(ExactRational, ExactRational), PolyaError> {
    let state = ProportionState::new(*cfg, n, k)?;
    let b = cfg.black() as u128;
    let w = cfg.white() as u128;
    let (n, k) = (n as u128, k as u128);
    let total = b + w + n;

    let p_black = ratio(b + k, total);
    let p_white = ratio(w + (n - k), total);
    let next_if_black = ratio(b + k + 1, total + 1);
    let next_if_white = ratio(b + k, total + 1);

    let lhs = p_black * next_if_black + p_white * next_if_white;
    Ok((lhs, state.value()))
}

/// The full distribution of `B_n` as an exact table over `k = 0..=n`.
#[derive(Debug, Clone)]
pub struct PolyaCountDist {
    cfg: UrnConfig,
    n: u64,
    pmf_table: Vec<ExactRational>,
}

impl PolyaCountDist {
    /// Builds the table in one pass via the exact ratio recurrence
    /// `pmf(k+1)/pmf(k) = (n-k)(b+k) / ((k+1)(w+n-k-1))`.
    pub fn new(cfg: UrnConfig, n: u64) -> Self {
        let b = cfg.black() as u128;
        let w = cfg.white() as u128;
        let mut table = Vec::with_capacity(n as usize + 1);
        // pmf(0) = prod_{j<n} (w+j) / prod_{l<n} (b+w+l)
        let mut current = ExactRational::new(
            rising_product(&BigInt::from(w), n),
            rising_product(&BigInt::from(b + w), n),
        )
        .expect("positive denominator");
        table.push(current.clone());
        for k in 0..n as u128 {
            let step = ExactRational::new(
                BigInt::from((n as u128 - k) * (b + k)),
                BigInt::from((k + 1) * (w + n as u128 - k - 1)),
            )
            .expect("positive denominator");
            current = current * step;
            table.push(current.clone());
        }
        Self {
            cfg,
            n,
            pmf_table: table,
        }
    }

    pub fn cfg(&self) -> &UrnConfig {
        &self.cfg
    }

    pub fn draws(&self) -> u64 {
        self.n
    }

    pub fn pmf(&self, k: u64) -> Result<&ExactRational, PolyaError> {
        self.pmf_table
            .get(k as usize)
            .ok_or(PolyaError::CountOutOfRange { k, n: self.n })
    }

    pub fn table(&self) -> &[ExactRational] {
        &self.pmf_table
    }

    /// Exact mean `sum_k k pmf(k)`; equals `n b / (b+w)`.
    pub fn mean(&self) -> ExactRational {
        self.pmf_table
            .iter()
            .enumerate()
            .map(|(k, p)| ExactRational::from(k as u64) * p)
            .sum()
    }

    /// CSV export: `k,numerator,denominator,float` per row.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,numerator,denominator,float")?;
        for (k, p) in self.pmf_table.iter().enumerate() {
            writeln!(out, "{},{},{},{}", k, p.numer(), p.denom(), p.to_f64())?;
        }
        Ok(())
    }
}

fn ratio(num: u128, den: u128) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den)).expect("positive denominator")
}
