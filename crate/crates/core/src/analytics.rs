//! Counting and probability results: the quantum Hamming bound, the
//! single-error failure polynomial, and a Monte Carlo estimate of the
//! logical error rate under independent single-qutrit noise.
//!
//! ```
//! use ternary_qec::analytics::{failure_probability, hamming_bound};
//!
//! assert!(hamming_bound(5).unwrap().holds);
//! assert!(!hamming_bound(4).unwrap().holds);
//! assert!((failure_probability(0.1).unwrap() - 0.08146).abs() < 1e-12);
//! ```

use num_bigint::BigUint;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::StabilizerCode;
use crate::decode::{SyndromeTable, ERROR_KINDS};
use crate::error::{Error, Result};
use crate::pauli::TernaryPauli;
use crate::rng::stream_rng;

/// Trials drawn from one random stream.
pub const BLOCK_SIZE: u64 = 4096;

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959963984540054;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HammingBound {
    pub n: u32,
    /// `3(8n + 1)`
    #[serde(serialize_with = "as_string")]
    pub lhs: BigUint,
    /// `3ⁿ`
    #[serde(serialize_with = "as_string")]
    pub rhs: BigUint,
    pub holds: bool,
}

fn as_string<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `3(8n + 1) ≤ 3ⁿ`: room for a distinct syndrome per single-qutrit error
/// (eight kinds per site plus no error), times the three logical states.
pub fn hamming_bound(n: u32) -> Result<HammingBound> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let lhs = BigUint::from(3u32) * (BigUint::from(8u32) * n + 1u32);
    let rhs = BigUint::from(3u32).pow(n);
    Ok(HammingBound {
        n,
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// Probability that two or more of five qutrits are hit:
/// `1 − (1−p)⁵ − 5p(1−p)⁴ = 1 − (1 + 4p)(1 − p)⁴`.
pub fn failure_probability(p: f64) -> Result<f64> {
    check_probability(p)?;
    let q = 1.0 - p;
    Ok(1.0 - q.powi(5) - 5.0 * p * q.powi(4))
}

/// Leading term `10p²` of [`failure_probability`].
pub fn failure_leading_order(p: f64) -> f64 {
    10.0 * p * p
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PseudoThreshold {
    /// Root of `failure_probability(p) = p` in `(0, 1)`.
    pub exact: f64,
    /// Root of `10p² = p`.
    pub leading_order: f64,
}

/// Bisection for the nonzero crossing of `failure_probability(p) = p`,
/// bracketed in `[1e-6, 0.5]` and refined to a width of `1e-10`.
pub fn pseudo_threshold() -> PseudoThreshold {
    let f = |p: f64| failure_probability(p).expect("in range") - p;
    let (mut lo, mut hi) = (1e-6, 0.5);
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    PseudoThreshold {
        exact: 0.5 * (lo + hi),
        leading_order: 0.1,
    }
}

/// Which nontrivial Pauli hits an erroneous qutrit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ErrorDistribution {
    /// Each of the eight nontrivial single-site Paulis with probability 1/8.
    Uniform,
    /// Relative weights in the order `X, X2, Z, Z2, Y11, Y12, Y21, Y22`.
    Weighted([f64; 8]),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoiseModel {
    pub p: f64,
    pub distribution: ErrorDistribution,
    pub seed: u64,
}

impl NoiseModel {
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        check_probability(p)?;
        Ok(Self {
            p,
            distribution: ErrorDistribution::Uniform,
            seed,
        })
    }

    pub fn with_distribution(mut self, distribution: ErrorDistribution) -> Result<Self> {
        if let ErrorDistribution::Weighted(w) = &distribution {
            WeightedIndex::new(w).map_err(|e| Error::InvalidArgument(format!("bad weights: {e}")))?;
        }
        self.distribution = distribution;
        Ok(self)
    }
}

/// Trials and failures among trials with a given number of hit qutrits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorCountTally {
    pub errors: usize,
    pub trials: u64,
    pub failures: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub p: f64,
    pub seed: u64,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    /// Wilson 95% score interval for the failure rate.
    pub interval: (f64, f64),
    /// [`failure_probability`] at the same `p`, which counts every
    /// multi-error pattern as a failure.
    pub analytic: f64,
    pub analytic_in_interval: bool,
    pub tally: Vec<ErrorCountTally>,
    /// Fraction of all two-qutrit error patterns the decoder still fixes.
    pub two_error_correction_fraction: f64,
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let phat = k as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    (lo, (center + half).min(1.0))
}

/// Exact fraction of two-qutrit errors (every pair of sites, every pair of
/// nontrivial kinds) that the table still corrects.
pub fn two_error_correction_fraction(code: &StabilizerCode, table: &SyndromeTable) -> Result<f64> {
    let n = code.num_sites();
    let mut total = 0u64;
    let mut fixed = 0u64;
    for a in 0..n {
        for b in a + 1..n {
            for (xa, za) in ERROR_KINDS {
                for (xb, zb) in ERROR_KINDS {
                    let e = TernaryPauli::single_site(n, a, xa, za).multiply(&TernaryPauli::single_site(n, b, xb, zb))?;
                    total += 1;
                    fixed += u64::from(table.corrects(code, &e)?);
                }
            }
        }
    }
    Ok(if total == 0 { 0.0 } else { fixed as f64 / total as f64 })
}

/// Runs `trials` independent noisy rounds on the global thread pool.
///
/// Trials are split into fixed blocks of [`BLOCK_SIZE`]; block `b` draws from
/// stream `b` of the seed, so the result does not depend on how many
/// workers run the blocks.
pub fn monte_carlo(code: &StabilizerCode, table: &SyndromeTable, model: &NoiseModel, trials: u64) -> Result<TrialReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    check_probability(model.p)?;
    let n = code.num_sites();
    let weights = match &model.distribution {
        ErrorDistribution::Uniform => None,
        ErrorDistribution::Weighted(w) => {
            Some(WeightedIndex::new(w).map_err(|e| Error::InvalidArgument(format!("bad weights: {e}")))?)
        }
    };
    let blocks = trials.div_ceil(BLOCK_SIZE);
    let counts = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(model.seed, b);
            let len = BLOCK_SIZE.min(trials - b * BLOCK_SIZE);
            let mut tally = vec![(0u64, 0u64); n + 1];
            for _ in 0..len {
                let mut x = vec![0u8; n];
                let mut z = vec![0u8; n];
                let mut hits = 0;
                for site in 0..n {
                    if rng.random::<f64>() < model.p {
                        let kind = match &weights {
                            None => rng.random_range(0..ERROR_KINDS.len()),
                            Some(w) => w.sample(&mut rng),
                        };
                        (x[site], z[site]) = ERROR_KINDS[kind];
                        hits += 1;
                    }
                }
                let e = TernaryPauli::new(x, z, 0)?;
                tally[hits].0 += 1;
                tally[hits].1 += u64::from(!table.corrects(code, &e)?);
            }
            Ok::<_, Error>(tally)
        })
        .try_reduce(
            || vec![(0, 0); n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    x.0 += y.0;
                    x.1 += y.1;
                }
                Ok(a)
            },
        )?;

    let failures: u64 = counts.iter().map(|c| c.1).sum();
    let interval = wilson_interval(failures, trials, Z_95);
    let analytic = failure_probability(model.p)?;
    Ok(TrialReport {
        p: model.p,
        seed: model.seed,
        trials,
        failures,
        rate: failures as f64 / trials as f64,
        interval,
        analytic,
        analytic_in_interval: interval.0 <= analytic && analytic <= interval.1,
        tally: counts
            .into_iter()
            .enumerate()
            .map(|(k, (t, f))| ErrorCountTally {
                errors: k,
                trials: t,
                failures: f,
            })
            .collect(),
        two_error_correction_fraction: two_error_correction_fraction(code, table)?,
    })
}

/// [`monte_carlo`] on a dedicated pool of `workers` threads.
pub fn monte_carlo_with_workers(
    code: &StabilizerCode,
    table: &SyndromeTable,
    model: &NoiseModel,
    trials: u64,
    workers: usize,
) -> Result<TrialReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| monte_carlo(code, table, model, trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::build_code;
    use crate::decode::build_syndrome_table;
    use proptest::prelude::*;

    fn binom(n: u64, k: u64) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    #[test]
    fn hamming_examples() {
        let b = |n| {
            let h = hamming_bound(n).unwrap();
            (h.lhs.to_string(), h.rhs.to_string(), h.holds)
        };
        assert_eq!(b(5), ("123".into(), "243".into(), true));
        assert_eq!(b(4), ("99".into(), "81".into(), false));
        assert_eq!(b(1), ("27".into(), "3".into(), false));
        assert!(hamming_bound(0).is_err());
        assert!(hamming_bound(200).unwrap().holds);
    }

    #[test]
    fn failure_polynomial() {
        assert_eq!(failure_probability(0.0).unwrap(), 0.0);
        assert!((failure_probability(0.1).unwrap() - (1.0 - 0.59049 - 0.32805)).abs() < 1e-15);
        let p = 1e-4;
        assert!((failure_probability(p).unwrap() / (p * p) - 10.0).abs() < 0.1);
        assert!(failure_probability(0.05).unwrap() < 0.05);
        assert!(failure_probability(1.5).is_err());
        assert!(failure_probability(-0.1).is_err());
    }

    #[test]
    fn failure_matches_binomial_tail() {
        for p in [0.001, 0.2, 0.7] {
            let tail: f64 = (2..=5u64)
                .map(|k| binom(5, k) * f64::powi(p, k as i32) * f64::powi(1.0 - p, 5 - k as i32))
                .sum();
            assert!((failure_probability(p).unwrap() - tail).abs() < 1e-14);
        }
    }

    #[test]
    fn threshold() {
        let t = pseudo_threshold();
        let f = failure_probability(t.exact).unwrap();
        assert!((f - t.exact).abs() < 1e-9);
        assert!(t.exact > 0.05 && t.exact < 0.2);
        assert_eq!(t.leading_order, 0.1);
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(10, 1000, Z_95);
        assert!(lo < 0.01 && 0.01 < hi);
        let (lo, hi) = wilson_interval(0, 100, Z_95);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0);
    }

    #[test]
    fn simulation_edges() {
        let code = build_code();
        let table = build_syndrome_table(&code).unwrap();
        let r = monte_carlo(&code, &table, &NoiseModel::new(0.0, 1).unwrap(), 5000).unwrap();
        assert_eq!(r.failures, 0);
        assert_eq!(r.tally[0].trials, 5000);
        let r = monte_carlo(&code, &table, &NoiseModel::new(1.0, 1).unwrap(), 2000).unwrap();
        assert_eq!(r.tally[5].trials, 2000);
        assert!(r.rate > 0.9);
        assert!(monte_carlo(&code, &table, &NoiseModel::new(0.1, 1).unwrap(), 0).is_err());
        assert!(NoiseModel::new(2.0, 0).is_err());
    }

    #[test]
    fn single_errors_never_fail() {
        let code = build_code();
        let table = build_syndrome_table(&code).unwrap();
        let r = monte_carlo(&code, &table, &NoiseModel::new(0.02, 9).unwrap(), 20_000).unwrap();
        assert_eq!(r.tally[0].failures + r.tally[1].failures, 0);
        assert!(r.tally[1].trials > 0);
    }

    #[test]
    fn weighted_distribution_only_x() {
        let code = build_code();
        let table = build_syndrome_table(&code).unwrap();
        let model = NoiseModel::new(0.5, 4)
            .unwrap()
            .with_distribution(ErrorDistribution::Weighted([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]))
            .unwrap();
        let r = monte_carlo(&code, &table, &model, 3000).unwrap();
        assert!(r.failures > 0);
        assert!(NoiseModel::new(0.1, 0)
            .unwrap()
            .with_distribution(ErrorDistribution::Weighted([0.0; 8]))
            .is_err());
    }

    #[test]
    fn two_error_fraction_is_zero() {
        let code = build_code();
        let table = build_syndrome_table(&code).unwrap();
        assert_eq!(two_error_correction_fraction(&code, &table).unwrap(), 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn failure_monotone(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(failure_probability(lo).unwrap() <= failure_probability(hi).unwrap() + 1e-15);
        }

        #[test]
        fn worker_count_does_not_change_result(seed in any::<u64>(), workers in 1usize..6) {
            let code = build_code();
            let table = build_syndrome_table(&code).unwrap();
            let model = NoiseModel::new(0.1, seed).unwrap();
            let a = monte_carlo_with_workers(&code, &table, &model, 9000, 1).unwrap();
            let b = monte_carlo_with_workers(&code, &table, &model, 9000, workers).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
