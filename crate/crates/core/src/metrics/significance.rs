use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MetricsError;

/// Largest `n` for which [`Resampling::auto`] enumerates every sign pattern.
pub fn exhaustive_limit() -> usize {
    20
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resampling {
    /// All `2^n` sign patterns, the identity included.
    Exhaustive,
    /// Random sign flips.
    Random { rounds: u64, seed: u64 },
}

impl Resampling {
    /// Exhaustive when `2^n <= rounds` (and `n` is small enough), random otherwise.
    pub fn auto(n: usize, rounds: u64, seed: u64) -> Self {
        if n <= exhaustive_limit() && (1u64 << n) <= rounds {
            Resampling::Exhaustive
        } else {
            Resampling::Random { rounds, seed }
        }
    }
}

// Sums that agree up to rounding count as ties.
fn tolerance(diffs: &[f64]) -> f64 {
    1e-12 * diffs.iter().map(|d| d.abs()).sum::<f64>().max(1.0)
}

/// Two-sided paired sign-flip test on the per-file differences `a - b`,
/// with the mean difference as statistic.
///
/// Exhaustive: `p = #{|t| >= |t_obs|} / 2^n`.
/// Random: `p = (1 + #{|t| >= |t_obs|}) / (1 + rounds)`.
pub fn paired_significance(a: &[f64], b: &[f64], resampling: Resampling) -> Result<f64, MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len();
    if n < 2 {
        return Err(MetricsError::TooFewPairs { found: n, needed: 2 });
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    // The sum ranks sign patterns exactly as the mean does.
    let observed = diffs.iter().sum::<f64>().abs();
    let cutoff = observed - tolerance(&diffs);

    match resampling {
        Resampling::Exhaustive => {
            assert!(n < 63, "exhaustive enumeration over {n} pairs is infeasible");
            let patterns = 1u64 << n;
            let extreme = (0..patterns)
                .filter(|mask| {
                    let s: f64 = diffs
                        .iter()
                        .enumerate()
                        .map(|(i, d)| if mask >> i & 1 == 1 { -d } else { *d })
                        .sum();
                    s.abs() >= cutoff
                })
                .count() as u64;
            Ok(extreme as f64 / patterns as f64)
        }
        Resampling::Random { rounds, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut extreme = 0u64;
            for _ in 0..rounds {
                let s: f64 = diffs.iter().map(|d| if rng.gen::<bool>() { -d } else { *d }).sum();
                if s.abs() >= cutoff {
                    extreme += 1;
                }
            }
            Ok((1 + extreme) as f64 / (1 + rounds) as f64)
        }
    }
}
