//! Independent reference routes for the exact analytics.
//!
//! Nothing here reuses the closed-form code paths under test. Waiting-time
//! probabilities are recomputed by literally walking the urn state; count
//! probabilities by enumerating every color sequence; moments by summing
//! the series `sum n^r P(T = n)` with an exactly telescoped tail. The test
//! suites and the `check` command compare these against the production
//! formulas, value for value.

use num_bigint::BigInt;

use crate::exact::UrnConfig;
use crate::rational::ExactRational;

/// `P(T = n)` by stepping the urn: `n-1` white draws (each adding one
/// white ball) followed by one black draw, probabilities multiplied from
/// the evolving state.
pub fn waiting_pmf_path(cfg: &UrnConfig, n: u64) -> ExactRational {
    assert!(n >= 1, "waiting time starts at draw one");
    let b = cfg.black() as u128;
    let mut white = cfg.white() as u128;
    let mut prob = ExactRational::one();
    for _ in 0..n - 1 {
        prob *= ratio(white, b + white);
        white += 1;
    }
    prob * ratio(b, b + white)
}

/// `P(T > n)` by the same explicit walk.
pub fn waiting_survival_path(cfg: &UrnConfig, n: u64) -> ExactRational {
    let b = cfg.black() as u128;
    let mut white = cfg.white() as u128;
    let mut prob = ExactRational::one();
    for _ in 0..n {
        prob *= ratio(white, b + white);
        white += 1;
    }
    prob
}

/// `P(B_n = k)` for the two-color reinforcing urn (each draw returns the
/// ball plus one more of the same color), by enumerating all `2^n` color
/// sequences and summing the exact probabilities of those with `k` blacks.
///
/// Exponential on purpose; intended for small `n`.
pub fn count_pmf_enumeration(cfg: &UrnConfig, n: u64, k: u64) -> ExactRational {
    assert!(k <= n);
    fn walk(black: u128, white: u128, left: u64, blacks_wanted: i128) -> ExactRational {
        if blacks_wanted < 0 || blacks_wanted > left as i128 {
            return ExactRational::zero();
        }
        if left == 0 {
            return ExactRational::one();
        }
        let total = black + white;
        let take_black = ratio(black, total) * walk(black + 1, white, left - 1, blacks_wanted - 1);
        let take_white = ratio(white, total) * walk(black, white + 1, left - 1, blacks_wanted);
        take_black + take_white
    }
    walk(cfg.black() as u128, cfg.white() as u128, n, k as i128)
}

/// Exact series evaluation of `E[T^r]` split at a cut: the partial sum
/// `sum_{n<=cut} n^r P(T=n)` plus the closed tail `sum_{n>cut}`.
///
/// The route is discrete throughout, independent of the Beta-mixture
/// formula in production code. Writing `P(T=n) = b C / [(w+n-1) ... (b+w+n-1)]`
/// with `C = w (w+1) ... (b+w-1)`, the power `n^r` is expanded exactly in
/// the basis `P_t(n) = (w+n-1) ... (w+n+t-2)`, whose factors cancel into
/// the denominator; each resulting series of inverse products of
/// consecutive integers telescopes:
///
/// ```text
/// sum_{x >= X} 1/[x (x+1) ... (x+m-1)] = 1/[(m-1) x (x+1) ... (x+m-2)]
/// ```
///
/// so the tail is exact, not an estimate. Requires `b > r`.
#[derive(Debug, Clone)]
pub struct SeriesMoment {
    pub partial: ExactRational,
    pub tail: ExactRational,
}

impl SeriesMoment {
    pub fn total(&self) -> ExactRational {
        &self.partial + &self.tail
    }
}

pub fn moment_series(cfg: &UrnConfig, r: u32, cut: u64) -> Option<SeriesMoment> {
    let b = cfg.black();
    let w = cfg.white();
    if b <= r as u64 {
        return None;
    }

    // Partial sum of n^r P(T=n) over n <= cut, term by term.
    let mut partial = ExactRational::zero();
    for n in 1..=cut {
        let n_pow = ExactRational::from(n).pow(r);
        partial += &(n_pow * closed_pmf(cfg, n));
    }

    // Exact tail: expand n^r over the rising basis and telescope each piece.
    let coeffs = rising_basis_coefficients(w, r);
    let b_c = constant_prefactor(cfg);
    let mut tail = ExactRational::zero();
    for (t, c_t) in coeffs.iter().enumerate() {
        if c_t.is_zero() {
            continue;
        }
        let t = t as u64;
        let m = b + 1 - t; // factors left after cancelling P_t; m >= 2 since t <= r < b
        let x0 = BigInt::from(w as u128 + cut as u128 + t as u128);
        let telescoped = ExactRational::new(
            BigInt::from(1),
            BigInt::from(m - 1) * crate::comb::rising_product(&x0, m - 1),
        )
        .expect("positive");
        tail += &(c_t * &b_c * telescoped);
    }
    Some(SeriesMoment { partial, tail })
}

/// `P(T = n)` in the oracle's own closed form
/// `b C / [(w+n-1)(w+n) ... (b+w+n-1)]`; validated against
/// [`waiting_pmf_path`] in this module's tests.
fn closed_pmf(cfg: &UrnConfig, n: u64) -> ExactRational {
    let start = BigInt::from(cfg.white() as u128 + n as u128 - 1);
    let den = crate::comb::rising_product(&start, cfg.black() + 1);
    let num = BigInt::from(cfg.black()) * crate::comb::rising_product(&BigInt::from(cfg.white()), cfg.black());
    ExactRational::new(num, den).expect("positive")
}

/// `b * C` with `C = w (w+1) ... (b+w-1)`.
fn constant_prefactor(cfg: &UrnConfig) -> ExactRational {
    ExactRational::from(
        BigInt::from(cfg.black()) * crate::comb::rising_product(&BigInt::from(cfg.white()), cfg.black()),
    )
}

/// Coefficients `c_0 .. c_r` with `n^r = sum_t c_t (w+n-1)(w+n)...(w+n+t-2)`.
///
/// Each basis polynomial is monic of degree `t`, so peeling from the top
/// degree down terminates with an exact zero remainder.
fn rising_basis_coefficients(w: u64, r: u32) -> Vec<ExactRational> {
    let r = r as usize;
    // Polynomials in n as coefficient vectors, constant term first.
    let mut basis: Vec<Vec<ExactRational>> = Vec::with_capacity(r + 1);
    let mut current = vec![ExactRational::one()];
    basis.push(current.clone());
    for u in 0..r {
        // multiply by (n + (w - 1 + u))
        let shift = ExactRational::from(BigInt::from(w as i128 - 1 + u as i128));
        let mut next = vec![ExactRational::zero(); current.len() + 1];
        for (i, c) in current.iter().enumerate() {
            next[i + 1] += c;
            next[i] += &(c * &shift);
        }
        current = next;
        basis.push(current.clone());
    }

    let mut remainder = vec![ExactRational::zero(); r + 1];
    remainder[r] = ExactRational::one();
    let mut coeffs = vec![ExactRational::zero(); r + 1];
    for t in (0..=r).rev() {
        let c = remainder[t].clone();
        if !c.is_zero() {
            for (i, bc) in basis[t].iter().enumerate() {
                remainder[i] -= &(&c * bc);
            }
            coeffs[t] = c;
        }
    }
    debug_assert!(remainder.iter().all(|c| c.is_zero()));
    coeffs
}

fn ratio(num: u128, den: u128) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den)).expect("positive denominator")
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

    #[test]
    fn path_walk_normalizes() {
        // sum_{n<=N} pmf + survival(N) = 1 within the oracle itself.
        for (b, w) in [(1, 1), (2, 3), (4, 2)] {
            let c = cfg(b, w);
            let mut acc = ExactRational::zero();
            for n in 1..=25 {
                acc += &waiting_pmf_path(&c, n);
            }
            acc += &waiting_survival_path(&c, 25);
            assert!(acc.is_one(), "b={b} w={w}");
        }
    }

    #[test]
    fn closed_pmf_matches_path_walk() {
        for b in 1..=5u64 {
            for w in 1..=5u64 {
                let c = cfg(b, w);
                for n in 1..=30u64 {
                    assert_eq!(closed_pmf(&c, n), waiting_pmf_path(&c, n), "b={b} w={w} n={n}");
                }
            }
        }
    }

    #[test]
    fn enumeration_normalizes_and_hits_uniform_case() {
        let c = cfg(1, 1);
        for n in 0..=8u64 {
            let mut acc = ExactRational::zero();
            for k in 0..=n {
                let p = count_pmf_enumeration(&c, n, k);
                // b = w = 1 collapses to the uniform law on 0..=n.
                assert_eq!(p, ExactRational::new(1.into(), (n as i64 + 1).into()).unwrap());
                acc += &p;
            }
            assert!(acc.is_one());
        }
    }

    #[test]
    fn series_split_is_independent_of_cut() {
        for (b, w, r) in [(2u64, 1u64, 1u32), (3, 2, 2), (4, 1, 3), (5, 7, 4), (6, 3, 5)] {
            let c = cfg(b, w);
            let at_zero = moment_series(&c, r, 0).unwrap().total();
            let at_fifty = moment_series(&c, r, 50).unwrap().total();
            assert_eq!(at_zero, at_fifty, "b={b} w={w} r={r}");
        }
        assert!(moment_series(&cfg(2, 1), 2, 10).is_none());
    }

    #[test]
    fn series_expectation_known_values() {
        // E[T_{2,w}] = w + 1 via the discrete route.
        for w in [1u64, 5, 10] {
            let total = moment_series(&cfg(2, w), 1, 10).unwrap().total();
            assert_eq!(total, ExactRational::from(w + 1), "w={w}");
        }
        // E[T_{3,2}^2] = 10 via the discrete route.
        assert_eq!(moment_series(&cfg(3, 2), 2, 10).unwrap().total(), q("10"));
    }

    #[test]
    fn partial_sums_increase_toward_total() {
        let c = cfg(4, 1);
        let total = moment_series(&c, 3, 0).unwrap().total();
        let mut last = ExactRational::zero();
        for cut in [1u64, 5, 25, 125] {
            let s = moment_series(&c, 3, cut).unwrap();
            assert!(s.partial > last);
            assert!(s.partial < total);
            assert_eq!(s.total(), total);
            last = s.partial;
        }
    }

    #[test]
    fn series_agrees_with_production_moments() {
        for b in 2..=6u64 {
            for w in [1u64, 7] {
                for r in 1..(b.min(6) as u32) {
                    let series = moment_series(&cfg(b, w), r, 40).unwrap().total();
                    let formula = exact::raw_moment(&cfg(b, w), r).unwrap().value.unwrap();
                    assert_eq!(series, formula, "b={b} w={w} r={r}");
                }
            }
        }
    }
}
