use rand::Rng;
use rayon::prelude::*;

use super::generators::{admissible_weight, odd_convex};
use super::{trial_rng, CounterexampleResult, BATCH};
use crate::error::{Error, Result};
use crate::jensen::{Theorem, Verdict};
use crate::job::{self, Command, Job};
use crate::Settings;

/// A witness must undercut the inequality by more than this.
pub const MINER_GAP_THRESHOLD: f64 = -1e-6;

fn candidate(b: f64, seed: u64, index: u64) -> Result<Job> {
    let mut rng = trial_rng(seed, index);
    // Strictly below the admissible range; -b/3 itself is never drawn.
    let a = rng.gen_range(-b..-b / 3.0);
    let mut job = Job::new(Command::CheckJensen);
    job.theorem = Some(Theorem::Cor1);
    job.function = Some(odd_convex(&mut rng, b)?);
    job.weight = Some(admissible_weight(&mut rng, a, b, true)?);
    job.params.a = Some(a);
    job.params.b = Some(b);
    job.params.relaxed = Some(true);
    job.params.suppress_range = Some(true);
    Ok(job)
}

/// The gap of `job` when every checked hypothesis holds and the gap is
/// below [`MINER_GAP_THRESHOLD`].
fn violation(job: &Job, settings: &Settings) -> Option<f64> {
    let report = job::jensen_report(job, settings).ok()?;
    match (report.verdict, report.gap) {
        (Verdict::Violated, Some(g)) if g < MINER_GAP_THRESHOLD => Some(g),
        _ => None,
    }
}

/// Searches for an instance of the weighted corollary with `a < -b/3` whose
/// inequality fails while odd symmetry, convexity on `[0, b]` and the
/// relaxed weight condition all hold.
///
/// Monotone weights cannot produce such an instance for `a >= -b`: they
/// split into uniform layers, each with a nonnegative barycenter. The miner
/// therefore samples weights under the relaxed condition
/// `p(x) <= p(-a) <= p(y)`.
pub fn mine_cor1_sharpness(b: f64, budget: u64, seed: u64, settings: &Settings) -> Result<CounterexampleResult> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::invalid(format!("b must be positive, got {b}")));
    }
    if budget == 0 {
        return Err(Error::invalid("budget must be at least 1"));
    }
    let mut start = 0;
    while start < budget {
        let end = (start + BATCH as u64).min(budget);
        let hit = (start..end)
            .into_par_iter()
            .filter_map(|i| {
                let job = candidate(b, seed, i).ok()?;
                violation(&job, settings).map(|g| (i, job, g))
            })
            .min_by_key(|(i, _, _)| *i);
        if let Some((i, job, gap)) = hit {
            return Ok(CounterexampleResult {
                found: true,
                witness: Some(Box::new(job)),
                observed_gap: Some(gap),
                evaluations: i + 1,
                seed,
            });
        }
        start = end;
    }
    Ok(CounterexampleResult {
        found: false,
        witness: None,
        observed_gap: None,
        evaluations: budget,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_and_replays_a_witness() {
        let s = Settings::default();
        let r = mine_cor1_sharpness(1.0, 20_000, 42, &s).unwrap();
        assert!(r.found, "{r:#?}");
        let job = r.witness.as_deref().unwrap();
        assert!(job.params.a.unwrap() < -1.0 / 3.0);
        let replay = job::jensen_report(job, &s).unwrap();
        assert_eq!(replay.verdict, Verdict::Violated);
        assert_eq!(replay.gap, r.observed_gap);
        assert_eq!(mine_cor1_sharpness(1.0, 20_000, 42, &s).unwrap(), r);
    }

    #[test]
    fn rejects_bad_arguments() {
        let s = Settings::default();
        assert!(mine_cor1_sharpness(0.0, 10, 1, &s).is_err());
        assert!(mine_cor1_sharpness(1.0, 0, 1, &s).is_err());
    }
}
