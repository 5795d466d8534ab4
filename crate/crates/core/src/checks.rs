//! The verification suite: every acceptance-grade property of the
//! library, runnable both as the `acceptance` integration tests and
//! behind the CLI's `check` subcommand.
//!
//! Each criterion returns a [`CheckReport`] rather than panicking, so the
//! CLI can print one line per criterion and exit nonzero on failure.
//! Statistical criteria use pinned seeds; their tolerances (4 standard
//! errors unless stated) are fixed here, not tuned at runtime.

use std::time::Instant;

use num_bigint::BigInt;

use crate::exact::{self, Extended, UrnConfig};
use crate::oracles;
use crate::polya;
use crate::rational::ExactRational;
use crate::schedule::{self, FinitenessVerdict, Schedule};
use crate::sim::{self, SimConfig};

const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// Pinned seeds for the statistical criteria.
const SEED_MEAN_AGREEMENT: u64 = 42;
const SEED_SURVIVAL_BASE: u64 = 1_000;
const SEED_TAIL_B1: u64 = 1_001;
const SEED_TAIL_B2: u64 = 1_002;
const SEED_SECOND_BLACK: u64 = 9;

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Default)]
struct Checker {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checker {
    fn ensure(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        if !cond {
            self.failures.push(msg());
        }
    }

    fn note(&mut self, msg: String) {
        self.notes.push(msg);
    }
}

fn report(id: u8, name: &'static str, body: impl FnOnce(&mut Checker)) -> CheckReport {
    let mut checker = Checker::default();
    let start = Instant::now();
    body(&mut checker);
    let seconds = start.elapsed().as_secs_f64();
    let passed = checker.failures.is_empty();
    let detail = if passed {
        if checker.notes.is_empty() {
            "ok".to_string()
        } else {
            checker.notes.join("; ")
        }
    } else {
        checker.failures.join("; ")
    };
    CheckReport {
        id,
        name,
        passed,
        detail,
        seconds,
    }
}

fn cfg(b: u64, w: u64) -> UrnConfig {
    UrnConfig::new(b, w).expect("valid test config")
}

fn q(s: &str) -> ExactRational {
    s.parse().expect("valid rational literal")
}

/// Criterion 1: `P(T_{1,1} > n) = 1/(n+1)` for `n = 0..10^4`, exactly,
/// in under a second.
pub fn criterion_01_unit_survival() -> CheckReport {
    report(1, "exact survival at the unit start", |c| {
        let start = Instant::now();
        let table = exact::survival_table(&cfg(1, 1), 10_000);
        for (n, value) in table.iter().enumerate() {
            let expected = ExactRational::new(1.into(), BigInt::from(n as u64 + 1)).unwrap();
            if value != &expected {
                c.ensure(false, || format!("survival({n}) = {value}, want {expected}"));
                return;
            }
        }
        // Spot checks through the one-shot and factorial-quotient routes.
        for n in [0u64, 1, 17, 10_000] {
            let expected = ExactRational::new(1.into(), BigInt::from(n + 1)).unwrap();
            c.ensure(exact::survival(&cfg(1, 1), n) == expected, || {
                format!("one-shot survival({n}) mismatch")
            });
            c.ensure(exact::survival_factorial_form(&cfg(1, 1), n) == expected, || {
                format!("factorial-form survival({n}) mismatch")
            });
        }
        let elapsed = start.elapsed().as_secs_f64();
        c.ensure(elapsed < 1.0, || format!("took {elapsed:.3}s, budget 1s"));
        c.note(format!("10001 exact values in {elapsed:.3}s"));
    })
}

/// Criterion 2: `E[T_{2,w}] = w+1` at huge `w`, and the general
/// `(b+w-1)/(b-1)` against the independent series route, inside 10 s.
pub fn criterion_02_expectation() -> CheckReport {
    report(2, "exact expectation vs series oracle", |c| {
        let start = Instant::now();
        for w in [1u64, 10, 1_000, 1_000_000_000] {
            let got = exact::expectation(&cfg(2, w));
            let want = Extended::Finite(ExactRational::from(w as u128 + 1));
            c.ensure(got == want, || format!("E[T_(2,{w})] = {got}, want w+1"));
        }
        for b in 2..=10u64 {
            for w in 1..=10u64 {
                let formula = match exact::expectation(&cfg(b, w)) {
                    Extended::Finite(v) => v,
                    Extended::PositiveInfinity => {
                        c.ensure(false, || format!("E[T_({b},{w})] reported infinite"));
                        continue;
                    }
                };
                let series = oracles::moment_series(&cfg(b, w), 1, 120)
                    .expect("b > 1")
                    .total();
                // The telescoped tail makes the series value exact, so the
                // certified-digit comparison collapses to exact equality.
                c.ensure(formula == series, || {
                    format!("b={b} w={w}: formula {formula} != series {series}")
                });
            }
        }
        let elapsed = start.elapsed().as_secs_f64();
        c.ensure(elapsed < 10.0, || format!("took {elapsed:.2}s, budget 10s"));
        c.note(format!("94 expectations cross-checked in {elapsed:.2}s"));
    })
}

/// Criterion 3: `E[T^r]` finite iff `b > r` over the stated grid; finite
/// values match the series oracle (exact, hence beyond ten digits).
pub fn criterion_03_moment_criterion() -> CheckReport {
    report(3, "moment finiteness criterion b > r", |c| {
        let mut finite_checked = 0u32;
        for b in 1..=6u64 {
            for r in 1..=5u32 {
                for w in [1u64, 7] {
                    let rep = exact::raw_moment(&cfg(b, w), r).expect("r >= 1");
                    let want = b > r as u64;
                    c.ensure(rep.finite == want, || {
                        format!("b={b} w={w} r={r}: finite={}, want {want}", rep.finite)
                    });
                    if let Some(value) = rep.value {
                        let series = oracles::moment_series(&cfg(b, w), r, 80)
                            .expect("finite case")
                            .total();
                        c.ensure(value == series, || {
                            format!("b={b} w={w} r={r}: {value} != series {series}")
                        });
                        finite_checked += 1;
                    }
                }
            }
        }
        c.note(format!("{finite_checked} finite moments match the series route exactly"));
    })
}

/// Criterion 4: the three closed forms at `b = 3` and their consistency
/// with the general variance formula, for `w = 1..20`, exactly.
pub fn criterion_04_b3_closed_forms() -> CheckReport {
    report(4, "b=3 closed forms", |c| {
        for w in 1..=20u64 {
            let c3 = cfg(3, w);
            let expectation_want =
                ExactRational::new(BigInt::from(w + 2), 2.into()).unwrap();
            let second_want = ExactRational::new(
                BigInt::from(w + 2) * BigInt::from(2 * w + 1),
                2.into(),
            )
            .unwrap();
            let variance_want = ExactRational::new(
                BigInt::from(3 * w) * BigInt::from(w + 2),
                4.into(),
            )
            .unwrap();

            match exact::expectation(&c3) {
                Extended::Finite(v) => c.ensure(v == expectation_want, || {
                    format!("w={w}: E = {v}, want (w+2)/2")
                }),
                Extended::PositiveInfinity => c.ensure(false, || format!("w={w}: E infinite")),
            }
            let m2 = exact::raw_moment(&c3, 2).unwrap().value.unwrap();
            c.ensure(m2 == second_want, || {
                format!("w={w}: E[T^2] = {m2}, want (w+2)(2w+1)/2")
            });
            match exact::variance(&c3) {
                Extended::Finite(v) => {
                    c.ensure(v == variance_want, || {
                        format!("w={w}: V = {v}, want 3w(w+2)/4")
                    });
                    // General formula b w (b+w-1)/((b-1)^2 (b-2)) at b=3.
                    let general = ExactRational::new(
                        BigInt::from(3) * BigInt::from(w) * BigInt::from(w + 2),
                        4.into(),
                    )
                    .unwrap();
                    c.ensure(v == general, || format!("w={w}: general formula disagrees"));
                }
                Extended::PositiveInfinity => c.ensure(false, || format!("w={w}: V infinite")),
            }
        }
    })
}

/// Criterion 5: the odd-value probability interval at `10^-8` contains
/// `ln 2`, in under a second.
pub fn criterion_05_odd_probability() -> CheckReport {
    report(5, "odd-value probability brackets ln 2", |c| {
        let start = Instant::now();
        let (lo, hi) = exact::prob_odd_t11(1e-8).expect("valid tolerance");
        let ln2 = std::f64::consts::LN_2;
        c.ensure(hi - lo <= 1e-8, || format!("width {} > 1e-8", hi - lo));
        c.ensure(lo <= ln2 && ln2 <= hi, || {
            format!("[{lo}, {hi}] misses ln 2 = {ln2}")
        });
        let elapsed = start.elapsed().as_secs_f64();
        c.ensure(elapsed < 1.0, || format!("took {elapsed:.3}s, budget 1s"));
        c.note(format!("[{lo:.10}, {hi:.10}] in {elapsed:.3}s"));
    })
}

/// Criterion 6: `|E[T|T<=k] - (ln k + gamma - 1)| <= 2/k` for
/// `k in {10^3, 10^4, 10^5}`, the stated testing tolerance.
///
/// This tolerance is not attainable: expanding
/// `((k+1)/k)(H_{k+1} - 1)` shows the distance to `ln k + gamma - 1` is
/// `(ln k + gamma + 1/2)/k + O(1/k^2)`, i.e. `~ 8/k` to `~ 13/k` over
/// this range. The check pins the `2/k` bound anyway and reports the
/// measured gaps, so the failure is informative rather than silent.
pub fn criterion_06_conditional_expectation() -> CheckReport {
    report(6, "conditional expectation asymptotic", |c| {
        for k in [1_000u64, 10_000, 100_000] {
            let exact_value = exact::conditional_expectation_t11(k)
                .expect("k >= 1")
                .to_f64();
            let asymptotic = (k as f64).ln() + EULER_MASCHERONI - 1.0;
            let gap = (exact_value - asymptotic).abs();
            let leading = ((k as f64).ln() + EULER_MASCHERONI + 0.5) / k as f64;
            c.ensure(gap <= 2.0 / k as f64, || {
                format!(
                    "k={k}: gap {gap:.3e} > 2/k = {:.3e} (true asymptotic gap is \
                     (ln k + gamma + 1/2)/k = {leading:.3e}; the paper's o(1) \
                     statement holds, the 2/k test tolerance does not)",
                    2.0 / k as f64
                )
            });
        }
    })
}

/// Criterion 7: count law vs beta-binomial, exact equality over
/// `b, w in 1..5`, `n <= 50`, plus normalization and the uniform case.
pub fn criterion_07_count_identities() -> CheckReport {
    report(7, "count-law identities", |c| {
        for b in 1..=5u64 {
            for w in 1..=5u64 {
                for n in 0..=50u64 {
                    let mut row_sum = ExactRational::zero();
                    for k in 0..=n {
                        let count = polya::polya_pmf(&cfg(b, w), n, k).unwrap();
                        let betabin = polya::beta_binomial_pmf(b, w, n, k).unwrap();
                        if count != betabin {
                            c.ensure(false, || {
                                format!("b={b} w={w} n={n} k={k}: {count} != {betabin}")
                            });
                            return;
                        }
                        if b == 1 && w == 1 {
                            let uniform =
                                ExactRational::new(1.into(), BigInt::from(n + 1)).unwrap();
                            c.ensure(count == uniform, || {
                                format!("uniform case fails at n={n} k={k}")
                            });
                        }
                        row_sum += &count;
                    }
                    c.ensure(row_sum.is_one(), || {
                        format!("b={b} w={w} n={n}: row sums to {row_sum}")
                    });
                }
            }
        }
    })
}

/// Criterion 8: classification verdicts with certified defect bounds, in
/// under 30 s.
pub fn criterion_08_classification() -> CheckReport {
    report(8, "replacement-scheme classification", |c| {
        let start = Instant::now();
        for c_add in [1u64, 10, 1_000, 1_000_000] {
            let sched = Schedule::constant(c_add).unwrap();
            let verdict = schedule::classify(&cfg(1, 1_000_000_000), &sched);
            c.ensure(verdict == FinitenessVerdict::AlmostSurelyFinite, || {
                format!("constant c={c_add} classified {verdict:?}")
            });
        }

        let linear_growth = Schedule::polynomial_floor(q("1"), 1).unwrap();
        match schedule::classify(&cfg(1, 1), &linear_growth) {
            FinitenessVerdict::Defective { lower, upper } => {
                c.ensure(lower > 0.0, || format!("lower bound {lower} not positive"));
                c.ensure(lower <= upper, || format!("bounds out of order {lower} {upper}"));
                let far = schedule::survival_general(&cfg(1, 1), &linear_growth, 100_000);
                let far_float = far.to_f64();
                c.ensure(lower <= far_float, || {
                    format!("lower {lower} exceeds survival(1e5) = {far_float}")
                });
                c.note(format!(
                    "defect in [{lower:.6}, {upper:.6}], survival(1e5) = {far_float:.6}"
                ));
            }
            other => c.ensure(false, || format!("poly k-growth classified {other:?}")),
        }
        let elapsed = start.elapsed().as_secs_f64();
        c.ensure(elapsed < 30.0, || format!("took {elapsed:.1}s, budget 30s"));
    })
}

/// Criterion 9: simulation agreement with the exact core at pinned seeds,
/// and bit-identical reruns across 1, 4, and 8 threads, in under 2 min.
pub fn criterion_09_simulation_agreement() -> CheckReport {
    report(9, "simulation agrees with exact core", |c| {
        let start = Instant::now();

        // Sample mean of T_{3,2}: E = 2, V = 6, one million replications.
        let mean_config = SimConfig::new(
            cfg(3, 2),
            Schedule::unit(),
            1_000_000,
            1_000_000,
            SEED_MEAN_AGREEMENT,
            vec![1, 10, 100, 1_000],
        )
        .unwrap();
        let mean_summary = sim::run(&mean_config);
        let tolerance = 4.0 * (6.0f64 / 1e6).sqrt();
        c.ensure((mean_summary.uncensored_mean - 2.0).abs() <= tolerance, || {
            format!(
                "mean {} differs from 2 by more than {tolerance:.5}",
                mean_summary.uncensored_mean
            )
        });

        // Empirical survival across (b, w) in {1..3}^2 on the decade grid.
        for b in 1..=3u64 {
            for w in 1..=3u64 {
                let config = SimConfig::new(
                    cfg(b, w),
                    Schedule::unit(),
                    1_000_000,
                    1_000,
                    SEED_SURVIVAL_BASE + 10 * b + w,
                    vec![1, 10, 100, 1_000],
                )
                .unwrap();
                let summary = sim::run(&config);
                for (n, observed) in summary.empirical_survival() {
                    let p = exact::survival(&cfg(b, w), n).to_f64();
                    let se = (p * (1.0 - p) / 1e6).sqrt();
                    c.ensure((observed - p).abs() <= 4.0 * se, || {
                        format!(
                            "b={b} w={w} n={n}: empirical {observed} vs exact {p} (4se = {})",
                            4.0 * se
                        )
                    });
                }
            }
        }

        // Same seed, three thread counts, identical bytes.
        let mut renderings = Vec::new();
        for threads in [1usize, 4, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("pool");
            let summary = pool.install(|| sim::run(&mean_config));
            renderings.push(serde_json::to_string(&summary).expect("serializable"));
        }
        c.ensure(renderings[0] == renderings[1] && renderings[1] == renderings[2], || {
            "thread count changed the summary bytes".to_string()
        });

        let elapsed = start.elapsed().as_secs_f64();
        c.ensure(elapsed < 120.0, || format!("took {elapsed:.1}s, budget 2min"));
        c.note(format!(
            "mean {:.5}, 36 survival cells, 3 thread counts in {elapsed:.1}s",
            mean_summary.uncensored_mean
        ));
    })
}

/// Criterion 10 (slow suite): tail slopes of pinned 10^7-replication runs
/// within 0.3 of `-b` for `b in {1, 2}`, in under 5 min.
///
/// Grids keep every regression point above the 100-survivor floor: at
/// `b = 2` the exact survival is `2/((n+1)(n+2))`, so 10^7 replications
/// run dry just past `n ~ 450`, and the spec's decade grid {100, 1000,
/// 10000} would leave a single usable point.
pub fn criterion_10_tail_slope() -> CheckReport {
    report(10, "tail slopes near -b (slow suite)", |c| {
        let start = Instant::now();
        let cases = [
            (1u64, SEED_TAIL_B1, vec![100u64, 1_000, 10_000], 10_000u64),
            (2, SEED_TAIL_B2, vec![50, 150, 400], 400),
        ];
        for (b, seed, grid, cap) in cases {
            let config = SimConfig::new(
                cfg(b, 1),
                Schedule::unit(),
                10_000_000,
                cap,
                seed,
                grid,
            )
            .unwrap();
            let summary = sim::run(&config);
            match sim::tail_slope(&summary) {
                Ok(slope) => {
                    c.ensure((slope + b as f64).abs() <= 0.3, || {
                        format!("b={b}: slope {slope} outside -{b} +- 0.3")
                    });
                    c.note(format!("b={b}: slope {slope:.3}"));
                }
                Err(e) => c.ensure(false, || format!("b={b}: {e}")),
            }
        }
        let elapsed = start.elapsed().as_secs_f64();
        c.ensure(elapsed < 300.0, || format!("took {elapsed:.0}s, budget 5min"));
    })
}

/// Criterion 11: second-black experiment bin medians vs exact medians of
/// `T_{2,w}` for `w = 1..5` with at least 10^4 conditional samples each,
/// and a divergence flag on the overall mean. Pinned seed.
pub fn criterion_11_second_black() -> CheckReport {
    report(11, "second-black conditional medians", |c| {
        let summary = sim::second_black_experiment(600_000, 100_000, SEED_SECOND_BLACK)
            .expect("valid parameters");
        for w in 1..=5u64 {
            let Some(bin) = summary.bins.get(&w) else {
                c.ensure(false, || format!("no samples landed in bin w={w}"));
                continue;
            };
            c.ensure(bin.samples >= 10_000, || {
                format!("bin w={w} has only {} samples", bin.samples)
            });
            let (med_lo, med_hi) = exact::median_bracket(&cfg(2, w));
            match bin.empirical_median() {
                Some(med) => c.ensure(med_lo <= med && med <= med_hi, || {
                    format!("w={w}: empirical median {med} outside [{med_lo}, {med_hi}]")
                }),
                None => c.ensure(false, || format!("w={w}: no histogram retained")),
            }
        }
        c.ensure(summary.overall_mean_divergent, || {
            "overall delta mean not flagged divergent".to_string()
        });
        c.note(format!(
            "overall delta mean {:.2} (flagged divergent), bins 1..5 populated",
            summary.overall_delta_mean
        ));
    })
}

/// Criterion 12: the brute-force routes reproduce both pmfs exactly for
/// `b, w in 1..4`, `n <= 8`, in under 5 s.
pub fn criterion_12_enumeration_oracle() -> CheckReport {
    report(12, "path/enumeration oracle equivalence", |c| {
        let start = Instant::now();
        for b in 1..=4u64 {
            for w in 1..=4u64 {
                for n in 1..=8u64 {
                    let via_path = oracles::waiting_pmf_path(&cfg(b, w), n);
                    let via_formula = exact::pmf(&cfg(b, w), n).unwrap();
                    c.ensure(via_path == via_formula, || {
                        format!("waiting pmf b={b} w={w} n={n}: {via_path} != {via_formula}")
                    });
                    for k in 0..=n {
                        let via_tree = oracles::count_pmf_enumeration(&cfg(b, w), n, k);
                        let via_product = polya::polya_pmf(&cfg(b, w), n, k).unwrap();
                        if via_tree != via_product {
                            c.ensure(false, || {
                                format!("count pmf b={b} w={w} n={n} k={k} mismatch")
                            });
                            return;
                        }
                    }
                }
            }
        }
        let elapsed = start.elapsed().as_secs_f64();
        c.ensure(elapsed < 5.0, || format!("took {elapsed:.2}s, budget 5s"));
    })
}

/// Criteria 1..9, 11, 12 (everything except the slow tail-slope runs).
pub fn fast_checks() -> Vec<CheckReport> {
    vec![
        criterion_01_unit_survival(),
        criterion_02_expectation(),
        criterion_03_moment_criterion(),
        criterion_04_b3_closed_forms(),
        criterion_05_odd_probability(),
        criterion_06_conditional_expectation(),
        criterion_07_count_identities(),
        criterion_08_classification(),
        criterion_09_simulation_agreement(),
        criterion_11_second_black(),
        criterion_12_enumeration_oracle(),
    ]
}

pub fn all_checks(include_slow: bool) -> Vec<CheckReport> {
    let mut reports = fast_checks();
    if include_slow {
        reports.push(criterion_10_tail_slope());
    }
    reports.sort_by_key(|r| r.id);
    reports
}
