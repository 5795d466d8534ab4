//! Seeded Monte Carlo for waiting times under any schedule.
//!
//! Reproducibility is the contract here: every replication draws from its
//! own stream derived from `(master_seed, replication index)`, partial
//! results are folded in a fixed chunk order, and the thread count can
//! change nothing but wall time. Runs are censored at a cap because the
//! waiting time has heavy tails (an infinite mean already at `b = 1`),
//! and the summary carries theory-side flags so callers cannot misread a
//! sample mean whose estimand does not exist.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::exact::UrnConfig;
use crate::schedule::Schedule;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX_MUL_1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX_MUL_2: u64 = 0x94D0_49BB_1331_11EB;

/// Replications per work unit; fixed so the fold order (and thus every
/// floating merge) is independent of the thread count.
const CHUNK: u64 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("at least one replication is required")]
    NoReplications,
    #[error("cap must be at least one")]
    ZeroCap,
    #[error("survival grid needs at least one point")]
    EmptyGrid,
    #[error("grid point {n} exceeds the censoring cap {cap}")]
    GridBeyondCap { n: u64, cap: u64 },
    #[error("grid entries must be at least one")]
    ZeroGridPoint,
    #[error("tail slope needs >= 3 grid points with >= {min} survivors (have {have})")]
    InsufficientTail { have: usize, min: u64 },
    #[error("summaries disagree on {0}; refusing to merge")]
    MergeMismatch(&'static str),
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_MUL_1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_MUL_2);
    z ^ (z >> 31)
}

/// SplitMix64 stream addressed by `(master_seed, index)`.
///
/// Counter-based derivation: the replication index is scrambled into the
/// seed, so any subset of replications can run anywhere, in any order,
/// and still read exactly its own variates.
#[derive(Debug, Clone)]
pub struct RandomStream {
    state: u64,
}

impl RandomStream {
    pub fn from_master(master_seed: u64, index: u64) -> Self {
        let salted = master_seed ^ mix64(index.wrapping_mul(GOLDEN_GAMMA).wrapping_add(GOLDEN_GAMMA));
        Self {
            state: mix64(salted),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// One censored-or-hit replication result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    /// First black ball at this draw (1-indexed).
    Hit(u64),
    /// No black ball within the cap.
    Censored(u64),
}

/// Full simulation request; validated at construction.
#[derive(Debug, Clone, Serialize)]
pub struct SimConfig {
    cfg: UrnConfig,
    schedule: Schedule,
    replications: u64,
    cap: u64,
    master_seed: u64,
    survival_grid: Vec<u64>,
}

impl SimConfig {
    pub fn new(
        cfg: UrnConfig,
        schedule: Schedule,
        replications: u64,
        cap: u64,
        master_seed: u64,
        survival_grid: Vec<u64>,
    ) -> Result<Self, SimError> {
        if replications == 0 {
            return Err(SimError::NoReplications);
        }
        if cap == 0 {
            return Err(SimError::ZeroCap);
        }
        let mut grid = survival_grid;
        grid.sort_unstable();
        grid.dedup();
        if grid.is_empty() {
            return Err(SimError::EmptyGrid);
        }
        if grid[0] == 0 {
            return Err(SimError::ZeroGridPoint);
        }
        if let Some(&beyond) = grid.iter().find(|&&n| n > cap) {
            return Err(SimError::GridBeyondCap { n: beyond, cap });
        }
        Ok(Self {
            cfg,
            schedule,
            replications,
            cap,
            master_seed,
            survival_grid: grid,
        })
    }

    pub fn cfg(&self) -> &UrnConfig {
        &self.cfg
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn replications(&self) -> u64 {
        self.replications
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn survival_grid(&self) -> &[u64] {
        &self.survival_grid
    }
}

/// Is `E[T^order]` finite under this schedule, by the survival exponent?
///
/// For a constant rule with increment `c` the survival function decays
/// like `n^{-b/c}`, so the moment is finite exactly when `b > order * c`.
/// Defective families have `P(T = infinity) > 0`, hence no finite moments.
/// Explicit prefixes shift the state by a constant and inherit the tail.
pub fn moment_finite_by_theory(cfg: &UrnConfig, schedule: &Schedule, order: u32) -> bool {
    match schedule {
        Schedule::Constant { c } => {
            BigInt::from(cfg.black()) > BigInt::from(*c) * BigInt::from(order)
        }
        Schedule::PolynomialFloor { p: 0, .. } => {
            let c_eff = schedule.increment(1);
            BigInt::from(cfg.black()) > c_eff * BigInt::from(order)
        }
        Schedule::PolynomialFloor { .. } => false,
        Schedule::Explicit { tail, .. } => moment_finite_by_theory(cfg, tail, order),
    }
}

/// Theory-side verdict attached to empirical moment estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentSupport {
    Finite,
    Infinite,
}

/// Merged statistics over replications.
#[derive(Debug, Clone, Serialize)]
pub struct SimSummary {
    pub replications: u64,
    pub master_seed: u64,
    pub cap: u64,
    pub hits: u64,
    pub censored: u64,
    /// Grid points n and the count of replications with `T > n`.
    pub survival_grid: Vec<u64>,
    pub survival_counts: Vec<u64>,
    /// Mean of uncensored waiting times (see `mean_theory` before using).
    pub uncensored_mean: f64,
    /// Sum of squared deviations of uncensored waiting times.
    pub uncensored_m2: f64,
    pub mean_theory: MomentSupport,
    pub variance_theory: MomentSupport,
    /// Log-log regression slope over qualifying grid points, when defined.
    pub tail_slope: Option<f64>,
}

impl SimSummary {
    fn empty(config: &SimConfig) -> Self {
        Self {
            replications: 0,
            master_seed: config.master_seed,
            cap: config.cap,
            hits: 0,
            censored: 0,
            survival_grid: config.survival_grid.clone(),
            survival_counts: vec![0; config.survival_grid.len()],
            uncensored_mean: 0.0,
            uncensored_m2: 0.0,
            mean_theory: theory_flag(config, 1),
            variance_theory: theory_flag(config, 2),
            tail_slope: None,
        }
    }

    fn record(&mut self, outcome: Outcome) {
        self.replications += 1;
        let beyond = match outcome {
            Outcome::Hit(t) => {
                self.hits += 1;
                let delta = t as f64 - self.uncensored_mean;
                self.uncensored_mean += delta / self.hits as f64;
                self.uncensored_m2 += delta * (t as f64 - self.uncensored_mean);
                t
            }
            Outcome::Censored(cap) => {
                self.censored += 1;
                cap + 1 // censored replications survive every grid point <= cap
            }
        };
        for (i, &n) in self.survival_grid.iter().enumerate() {
            if beyond > n {
                self.survival_counts[i] += 1;
            }
        }
    }

    /// Order-sensitive only at the floating level; counts merge exactly.
    pub fn merge(&self, other: &SimSummary) -> Result<SimSummary, SimError> {
        if self.master_seed != other.master_seed {
            return Err(SimError::MergeMismatch("master_seed"));
        }
        if self.cap != other.cap {
            return Err(SimError::MergeMismatch("cap"));
        }
        if self.survival_grid != other.survival_grid {
            return Err(SimError::MergeMismatch("survival_grid"));
        }
        let mut merged = self.clone();
        merged.replications += other.replications;
        merged.censored += other.censored;
        for (mine, theirs) in merged
            .survival_counts
            .iter_mut()
            .zip(other.survival_counts.iter())
        {
            *mine += theirs;
        }
        // Chan's pairwise update for mean and M2.
        let n1 = self.hits as f64;
        let n2 = other.hits as f64;
        merged.hits += other.hits;
        if other.hits > 0 {
            if self.hits == 0 {
                merged.uncensored_mean = other.uncensored_mean;
                merged.uncensored_m2 = other.uncensored_m2;
            } else {
                let total = n1 + n2;
                let delta = other.uncensored_mean - self.uncensored_mean;
                merged.uncensored_mean = self.uncensored_mean + delta * n2 / total;
                merged.uncensored_m2 =
                    self.uncensored_m2 + other.uncensored_m2 + delta * delta * n1 * n2 / total;
            }
        }
        merged.tail_slope = None;
        Ok(merged)
    }

    pub fn empirical_survival(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        let reps = self.replications as f64;
        self.survival_grid
            .iter()
            .zip(self.survival_counts.iter())
            .map(move |(&n, &c)| (n, c as f64 / reps))
    }

    /// Sample variance of uncensored times; `None` below two hits.
    pub fn uncensored_variance(&self) -> Option<f64> {
        (self.hits >= 2).then(|| self.uncensored_m2 / (self.hits as f64 - 1.0))
    }

    /// CLT standard error for the mean; deliberately `None` whenever the
    /// theoretical variance is infinite, so no caller can quote one.
    pub fn mean_standard_error(&self) -> Option<f64> {
        if self.variance_theory == MomentSupport::Infinite {
            return None;
        }
        self.uncensored_variance()
            .map(|v| (v / self.hits as f64).sqrt())
    }
}

fn theory_flag(config: &SimConfig, order: u32) -> MomentSupport {
    if moment_finite_by_theory(&config.cfg, &config.schedule, order) {
        MomentSupport::Finite
    } else {
        MomentSupport::Infinite
    }
}

/// Per-step black-draw probabilities `b / (b + w + s_{k-1})` as `f64`.
///
/// The threshold rounds once per step (documented error below `2^-52`
/// relative); both `run` and `simulate_one` price it with this same
/// function, so outcomes agree bit for bit.
fn threshold(black_f64: f64, total: &BigInt) -> f64 {
    black_f64 / total.to_f64().unwrap_or(f64::INFINITY)
}

fn threshold_table(cfg: &UrnConfig, schedule: &Schedule, cap: u64) -> Vec<f64> {
    let black = cfg.black() as f64;
    let base = BigInt::from(cfg.black() as u128 + cfg.white() as u128);
    schedule
        .partial_sum_iter()
        .take(cap as usize)
        .map(|s| threshold(black, &(s + &base)))
        .collect()
}

/// Simulate a single replication from an explicit stream.
pub fn simulate_one(
    cfg: &UrnConfig,
    schedule: &Schedule,
    cap: u64,
    stream: &mut RandomStream,
) -> Outcome {
    let black = cfg.black() as f64;
    let base = BigInt::from(cfg.black() as u128 + cfg.white() as u128);
    for (i, s) in schedule.partial_sum_iter().take(cap as usize).enumerate() {
        if stream.next_f64() < threshold(black, &(s + &base)) {
            return Outcome::Hit(i as u64 + 1);
        }
    }
    Outcome::Censored(cap)
}

fn simulate_with_table(table: &[f64], stream: &mut RandomStream) -> Outcome {
    for (i, &t) in table.iter().enumerate() {
        if stream.next_f64() < t {
            return Outcome::Hit(i as u64 + 1);
        }
    }
    Outcome::Censored(table.len() as u64)
}

/// Run the full experiment; parallel, yet bit-identical for any thread
/// count because chunk boundaries and the fold order are fixed.
pub fn run(config: &SimConfig) -> SimSummary {
    use rayon::prelude::*;

    let table = threshold_table(&config.cfg, &config.schedule, config.cap);
    let chunk_count = config.replications.div_ceil(CHUNK);
    let partials: Vec<SimSummary> = (0..chunk_count)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK;
            let hi = ((chunk + 1) * CHUNK).min(config.replications);
            run_indices(config, &table, lo, hi)
        })
        .collect();

    let mut summary = partials
        .into_iter()
        .reduce(|a, b| a.merge(&b).expect("chunks share the config"))
        .unwrap_or_else(|| SimSummary::empty(config));
    summary.tail_slope = tail_slope(&summary).ok();
    summary
}

/// Replications `lo..hi` of the same experiment, sequentially.
///
/// `run` is exactly a fixed-order merge of these, which is what makes the
/// merge-algebra tests meaningful.
pub fn run_range(config: &SimConfig, lo: u64, hi: u64) -> SimSummary {
    let table = threshold_table(&config.cfg, &config.schedule, config.cap);
    run_indices(config, &table, lo, hi)
}

fn run_indices(config: &SimConfig, table: &[f64], lo: u64, hi: u64) -> SimSummary {
    let mut summary = SimSummary::empty(config);
    for index in lo..hi {
        let mut stream = RandomStream::from_master(config.master_seed, index);
        summary.record(simulate_with_table(table, &mut stream));
    }
    summary
}

/// Fewest survivors a grid point needs to enter the slope regression.
pub const TAIL_SLOPE_MIN_SURVIVORS: u64 = 100;

/// Least-squares slope of `log(empirical survival)` against `log n` over
/// grid points with at least [`TAIL_SLOPE_MIN_SURVIVORS`] survivors.
///
/// Under a constant-increment rule the exact survival decays like a power
/// of `n`, so the slope estimates `-b/c`.
pub fn tail_slope(summary: &SimSummary) -> Result<f64, SimError> {
    let reps = summary.replications as f64;
    let points: Vec<(f64, f64)> = summary
        .survival_grid
        .iter()
        .zip(summary.survival_counts.iter())
        .filter(|&(_, &c)| c >= TAIL_SLOPE_MIN_SURVIVORS)
        .map(|(&n, &c)| ((n as f64).ln(), (c as f64 / reps).ln()))
        .collect();
    if points.len() < 3 {
        return Err(SimError::InsufficientTail {
            have: points.len(),
            min: TAIL_SLOPE_MIN_SURVIVORS,
        });
    }
    let count = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    Ok(sxy / sxx)
}

/// Per-bin statistics of the second-stage waiting time.
#[derive(Debug, Clone, Serialize)]
pub struct SecondBlackBin {
    pub samples: u64,
    pub mean_delta: f64,
    /// Exact histogram of delta values; kept only for small first-stage
    /// times, which is where the median comparisons happen.
    pub delta_histogram: Option<BTreeMap<u64, u64>>,
}

impl SecondBlackBin {
    /// Lower sample median: smallest `d` with `2 * count(<= d) >= samples`.
    pub fn empirical_median(&self) -> Option<u64> {
        let hist = self.delta_histogram.as_ref()?;
        let mut cumulative = 0;
        for (&d, &c) in hist {
            cumulative += 2 * c;
            if cumulative >= self.samples {
                return Some(d);
            }
        }
        None
    }

    /// Empirical `P(delta > n)` within this bin.
    pub fn delta_survival(&self, n: u64) -> Option<f64> {
        let hist = self.delta_histogram.as_ref()?;
        let beyond: u64 = hist.iter().filter(|&(&d, _)| d > n).map(|(_, &c)| c).sum();
        Some(beyond as f64 / self.samples as f64)
    }
}

/// Paired two-stage experiment: wait for the first black ball from one
/// black and one white, then keep drawing (now two black, `T1` white)
/// until a second black ball, recording `delta` by first-stage bin.
#[derive(Debug, Clone, Serialize)]
pub struct SecondBlackSummary {
    pub replications: u64,
    pub master_seed: u64,
    pub cap: u64,
    pub first_stage_censored: u64,
    pub second_stage_censored: u64,
    pub bins: BTreeMap<u64, SecondBlackBin>,
    pub overall_delta_count: u64,
    pub overall_delta_mean: f64,
    /// Always true: conditionally on `T1 = w` the expected extra time is
    /// the finite `w + 1`, but its mixture over `T1` diverges, so the
    /// overall mean estimates nothing.
    pub overall_mean_divergent: bool,
}

/// Largest first-stage value whose delta histogram is retained.
pub const SECOND_BLACK_TRACKED_BINS: u64 = 8;

pub fn second_black_experiment(
    replications: u64,
    cap: u64,
    master_seed: u64,
) -> Result<SecondBlackSummary, SimError> {
    if replications == 0 {
        return Err(SimError::NoReplications);
    }
    if cap == 0 {
        return Err(SimError::ZeroCap);
    }

    let mut summary = SecondBlackSummary {
        replications,
        master_seed,
        cap,
        first_stage_censored: 0,
        second_stage_censored: 0,
        bins: BTreeMap::new(),
        overall_delta_count: 0,
        overall_delta_mean: 0.0,
        overall_mean_divergent: true,
    };

    #[derive(Default)]
    struct BinAccum {
        samples: u64,
        mean: f64,
        histogram: Option<BTreeMap<u64, u64>>,
    }
    let mut accums: BTreeMap<u64, BinAccum> = BTreeMap::new();

    for index in 0..replications {
        let mut stream = RandomStream::from_master(master_seed, index);

        // Stage one: unit rule from one black, one white; the black-draw
        // probability after k-1 white draws is 1/(k+1).
        let mut first_hit = None;
        for k in 1..=cap {
            if stream.next_f64() < 1.0 / (k as f64 + 1.0) {
                first_hit = Some(k);
                break;
            }
        }
        let Some(t1) = first_hit else {
            summary.first_stage_censored += 1;
            continue;
        };

        // Stage two: the drawn black ball goes back with one more black,
        // leaving two black and t1 white; unit rule again, so the
        // black-draw probability at step k is 2/(t1 + k + 1).
        let mut delta = None;
        for k in 1..=cap {
            if stream.next_f64() < 2.0 / (t1 as f64 + k as f64 + 1.0) {
                delta = Some(k);
                break;
            }
        }
        let Some(d) = delta else {
            summary.second_stage_censored += 1;
            continue;
        };

        summary.overall_delta_count += 1;
        summary.overall_delta_mean +=
            (d as f64 - summary.overall_delta_mean) / summary.overall_delta_count as f64;

        let accum = accums.entry(t1).or_insert_with(|| BinAccum {
            samples: 0,
            mean: 0.0,
            histogram: (t1 <= SECOND_BLACK_TRACKED_BINS).then(BTreeMap::new),
        });
        accum.samples += 1;
        accum.mean += (d as f64 - accum.mean) / accum.samples as f64;
        if let Some(hist) = accum.histogram.as_mut() {
            *hist.entry(d).or_insert(0) += 1;
        }
    }

    summary.bins = accums
        .into_iter()
        .map(|(w, a)| {
            (
                w,
                SecondBlackBin {
                    samples: a.samples,
                    mean_delta: a.mean,
                    delta_histogram: a.histogram,
                },
            )
        })
        .collect();
    Ok(summary)
}

/// Final black-ball proportion `(b + B_n)/(b + w + n)` of one sampled
/// path of the two-color reinforcing urn, for distribution-limit checks.
pub fn sample_proportion(cfg: &UrnConfig, n: u64, stream: &mut RandomStream) -> f64 {
    let mut black = cfg.black() as u128;
    let mut white = cfg.white() as u128;
    for _ in 0..n {
        let p_black = black as f64 / (black + white) as f64;
        if stream.next_f64() < p_black {
            black += 1;
        } else {
            white += 1;
        }
    }
    black as f64 / (black + white) as f64
}

/// Two-sided Kolmogorov-Smirnov distance of sorted samples to a CDF.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        worst = worst.max((f - i as f64 / n).abs());
        worst = worst.max(((i as f64 + 1.0) / n - f).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;

    fn cfg(b: u64, w: u64) -> UrnConfig {
        UrnConfig::new(b, w).unwrap()
    }

    fn config(b: u64, w: u64, reps: u64, cap: u64, seed: u64, grid: &[u64]) -> SimConfig {
        SimConfig::new(
            cfg(b, w),
            Schedule::unit(),
            reps,
            cap,
            seed,
            grid.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(matches!(
            SimConfig::new(cfg(1, 1), Schedule::unit(), 0, 10, 1, vec![1]),
            Err(SimError::NoReplications)
        ));
        assert!(matches!(
            SimConfig::new(cfg(1, 1), Schedule::unit(), 1, 10, 1, vec![20]),
            Err(SimError::GridBeyondCap { .. })
        ));
        assert!(matches!(
            SimConfig::new(cfg(1, 1), Schedule::unit(), 1, 10, 1, vec![]),
            Err(SimError::EmptyGrid)
        ));
        assert!(matches!(
            SimConfig::new(cfg(1, 1), Schedule::unit(), 1, 10, 1, vec![0, 1]),
            Err(SimError::ZeroGridPoint)
        ));
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let mut a1 = RandomStream::from_master(42, 0);
        let mut a2 = RandomStream::from_master(42, 0);
        let mut b = RandomStream::from_master(42, 1);
        let xs1: Vec<u64> = (0..8).map(|_| a1.next_u64()).collect();
        let xs2: Vec<u64> = (0..8).map(|_| a2.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_eq!(xs1, xs2);
        assert_ne!(xs1, ys);
        for _ in 0..1000 {
            let v = a1.next_f64();
            assert!((0.0..1.0).contains(&v));
        }
    }

    #[test]
    fn simulate_one_matches_run_path() {
        let c = config(2, 3, 64, 50, 7, &[1, 10]);
        let table = threshold_table(c.cfg(), c.schedule(), c.cap());
        for index in 0..c.replications() {
            let mut s1 = RandomStream::from_master(c.master_seed(), index);
            let mut s2 = RandomStream::from_master(c.master_seed(), index);
            let lazy = simulate_one(c.cfg(), c.schedule(), c.cap(), &mut s1);
            let tabled = simulate_with_table(&table, &mut s2);
            assert_eq!(lazy, tabled, "index={index}");
        }
    }

    #[test]
    fn single_replication_consistency() {
        let c = config(3, 2, 1, 100, 11, &[1, 10, 100]);
        let summary = run(&c);
        assert_eq!(summary.replications, 1);
        assert_eq!(summary.hits + summary.censored, 1);
        let mut stream = RandomStream::from_master(11, 0);
        match simulate_one(c.cfg(), c.schedule(), c.cap(), &mut stream) {
            Outcome::Hit(t) => {
                assert_eq!(summary.hits, 1);
                assert_eq!(summary.uncensored_mean, t as f64);
            }
            Outcome::Censored(_) => assert_eq!(summary.censored, 1),
        }
    }

    #[test]
    fn determinism_across_thread_counts() {
        let c = config(2, 2, 20_000, 1_000, 99, &[1, 10, 100, 1_000]);
        let mut outputs = Vec::new();
        for threads in [1usize, 4, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let summary = pool.install(|| run(&c));
            outputs.push(serde_json::to_string(&summary).unwrap());
        }
        assert_eq!(outputs[0], outputs[1]);
        assert_eq!(outputs[1], outputs[2]);
    }

    #[test]
    fn merge_of_split_ranges_equals_single_run() {
        let c = config(2, 1, 10_000, 500, 5, &[1, 10, 100]);
        let whole = run(&c);
        let first = run_range(&c, 0, 3_333);
        let second = run_range(&c, 3_333, 10_000);
        let merged = first.merge(&second).unwrap();
        assert_eq!(merged.replications, whole.replications);
        assert_eq!(merged.hits, whole.hits);
        assert_eq!(merged.censored, whole.censored);
        assert_eq!(merged.survival_counts, whole.survival_counts);
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
        assert!(rel(merged.uncensored_mean, whole.uncensored_mean) < 1e-12);
        assert!(rel(merged.uncensored_m2, whole.uncensored_m2) < 1e-12);

        // Commutativity at the same tolerance.
        let flipped = second.merge(&first).unwrap();
        assert!(rel(flipped.uncensored_mean, merged.uncensored_mean) < 1e-12);
        assert!(rel(flipped.uncensored_m2, merged.uncensored_m2) < 1e-12);
        assert_eq!(flipped.survival_counts, merged.survival_counts);
    }

    #[test]
    fn merge_rejects_mismatched_configs() {
        let a = run(&config(1, 1, 10, 50, 1, &[1]));
        let b = run(&config(1, 1, 10, 50, 2, &[1]));
        assert!(matches!(a.merge(&b), Err(SimError::MergeMismatch(_))));
    }

    #[test]
    fn first_draw_frequency_tracks_exact_pmf() {
        // b large: nearly every replication hits at the first draw.
        let c = config(1_000_000, 1, 100_000, 100, 2024, &[1, 10]);
        let summary = run(&c);
        let p = exact::pmf(c.cfg(), 1).unwrap().to_f64();
        let freq = summary.hits as f64 / summary.replications as f64;
        // All hits at draw 1 dominate; compare hit-at-1 frequency via mean.
        let se = (p * (1.0 - p) / summary.replications as f64).sqrt();
        assert!(summary.uncensored_mean < 1.001);
        assert!((freq - 1.0).abs() < 1e-3); // censoring is negligible here
        let ones = summary.replications as f64 * p;
        assert!((summary.hits as f64 - ones).abs() < 4.0 * se * summary.replications as f64 + 1.0);
    }

    #[test]
    fn censoring_frequency_matches_survival() {
        // P(T > 1000) = 1/1001 for the unit start.
        let c = config(1, 1, 200_000, 1_000, 31, &[1, 10, 100, 1_000]);
        let summary = run(&c);
        let p = 1.0 / 1001.0;
        let se = (p * (1.0 - p) / summary.replications as f64).sqrt();
        let freq = summary.censored as f64 / summary.replications as f64;
        assert!(
            (freq - p).abs() < 4.0 * se,
            "censor freq {freq} vs {p} (se {se})"
        );
    }

    #[test]
    fn theory_flags() {
        let unit_b1 = config(1, 5, 1, 10, 0, &[1]);
        assert_eq!(run(&unit_b1).mean_theory, MomentSupport::Infinite);
        let unit_b2 = config(2, 5, 1, 10, 0, &[1]);
        let s2 = run(&unit_b2);
        assert_eq!(s2.mean_theory, MomentSupport::Finite);
        assert_eq!(s2.variance_theory, MomentSupport::Infinite);
        assert_eq!(s2.mean_standard_error(), None);
        let unit_b3 = config(3, 5, 100, 1_000, 0, &[1]);
        let s3 = run(&unit_b3);
        assert_eq!(s3.variance_theory, MomentSupport::Finite);
        assert!(s3.mean_standard_error().is_some());

        // Constant increment c = 2 needs b > 2 for a finite mean.
        assert!(!moment_finite_by_theory(
            &cfg(2, 1),
            &Schedule::constant(2).unwrap(),
            1
        ));
        assert!(moment_finite_by_theory(
            &cfg(3, 1),
            &Schedule::constant(2).unwrap(),
            1
        ));
        // Defective schedules support no finite moments.
        assert!(!moment_finite_by_theory(
            &cfg(100, 1),
            &Schedule::polynomial_floor("1".parse().unwrap(), 1).unwrap(),
            1
        ));
    }

    #[test]
    fn tail_slope_insufficient_data() {
        let c = config(2, 1, 50, 100, 3, &[1, 10, 100]);
        let summary = run(&c);
        // 50 replications cannot yield 100 survivors anywhere.
        assert!(matches!(
            tail_slope(&summary),
            Err(SimError::InsufficientTail { .. })
        ));
    }

    #[test]
    fn tail_slope_near_minus_one_for_unit_start() {
        let c = config(1, 1, 200_000, 1_000, 17, &[10, 100, 1_000]);
        let summary = run(&c);
        let slope = tail_slope(&summary).unwrap();
        assert!((-1.2..=-0.8).contains(&slope), "slope {slope}");
        assert_eq!(summary.tail_slope, Some(slope));
    }

    #[test]
    fn second_black_deterministic_and_consistent() {
        let a = second_black_experiment(20_000, 10_000, 123).unwrap();
        let b = second_black_experiment(20_000, 10_000, 123).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let counted: u64 = a.bins.values().map(|bin| bin.samples).sum();
        assert_eq!(
            counted,
            a.replications - a.first_stage_censored - a.second_stage_censored
        );
        assert!(a.overall_mean_divergent);

        // E[delta | T1 = 1] = 2 exactly; with ~10^4 samples the sample
        // mean of T_{2,1} (heavy-tailed but integrable) lands nearby.
        let bin1 = &a.bins[&1];
        assert!(bin1.samples > 8_000);
        assert!((bin1.mean_delta - 2.0).abs() < 0.5, "{}", bin1.mean_delta);
        assert_eq!(bin1.empirical_median(), Some(1));
    }

    #[test]
    fn proportion_sampler_stays_in_unit_interval() {
        let mut stream = RandomStream::from_master(7, 0);
        for n in [0u64, 1, 10, 100] {
            let x = sample_proportion(&cfg(2, 3), n, &mut stream);
            assert!(x > 0.0 && x < 1.0);
        }
    }

    #[test]
    fn ks_statistic_of_exact_grid_is_small() {
        // Evenly spaced quantiles of the uniform law have KS distance 1/(2n).
        let n = 1000;
        let samples: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_statistic(&samples, |x| x);
        assert!((d - 0.5 / n as f64).abs() < 1e-12);
    }
}
