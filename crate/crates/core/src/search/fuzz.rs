use rayon::prelude::*;

use super::generators::generate;
use super::{trial_rng, FuzzReport, BATCH};
use crate::error::Error;
use crate::jensen::{JensenReport, Settings, Theorem, Verdict};
use crate::job::{self, Job};
use crate::measure::SignedMeasure;
use crate::sp::check_steffensen_discrete;

enum Outcome {
    Report {
        report: Box<JensenReport>,
        job: Box<Job>,
        sp_without_steffensen: bool,
    },
    Error(String),
}

fn run_trial(theorem: Theorem, seed: u64, index: u64, settings: &Settings) -> Outcome {
    let mut rng = trial_rng(seed, index);
    let job = match generate(theorem, &mut rng) {
        Ok(job) => job,
        Err(e) => return Outcome::Error(format!("trial {index}: generator: {e}")),
    };
    match job::jensen_report(&job, settings) {
        Ok(report) => {
            let certified = ["sp_positive_mass", "sp_endpoint_positivity"]
                .iter()
                .all(|name| report.hypothesis(name).is_some_and(|h| h.satisfied));
            let sp_without_steffensen = certified
                && matches!(&job.measure, Some(SignedMeasure::Discrete(m)) if !check_steffensen_discrete(m).passes);
            Outcome::Report {
                report: Box::new(report),
                job: Box::new(job),
                sp_without_steffensen,
            }
        }
        Err(e) => Outcome::Error(format!("trial {index}: {e}")),
    }
}

struct Tally {
    report: FuzzReport,
}

impl Tally {
    fn new(theorem: Theorem, seed: u64) -> Self {
        Tally {
            report: FuzzReport {
                theorem,
                seed,
                trials: 0,
                passed: 0,
                hypothesis_failed: 0,
                violated: 0,
                errors: 0,
                hypothesis_pass_rate: 0.0,
                min_gap: None,
                first_violation: None,
                first_error: None,
                sp_without_steffensen: 0,
            },
        }
    }

    fn add(&mut self, outcome: Outcome) {
        let r = &mut self.report;
        r.trials += 1;
        match outcome {
            Outcome::Error(msg) => {
                r.errors += 1;
                r.first_error.get_or_insert(msg);
            }
            Outcome::Report {
                report,
                job,
                sp_without_steffensen,
            } => {
                r.sp_without_steffensen += u64::from(sp_without_steffensen);
                match report.verdict {
                    Verdict::HypothesisFailed => r.hypothesis_failed += 1,
                    Verdict::Holds | Verdict::Violated => {
                        if report.verdict == Verdict::Holds {
                            r.passed += 1;
                        } else {
                            r.violated += 1;
                            r.first_violation.get_or_insert(job);
                        }
                        if let Some(g) = report.gap {
                            let oriented = if report.reversed { -g } else { g };
                            r.min_gap = Some(r.min_gap.map_or(oriented, |m| m.min(oriented)));
                        }
                    }
                }
            }
        }
    }

    fn hypothesis_passing(&self) -> u64 {
        self.report.passed + self.report.violated
    }

    fn finish(mut self) -> FuzzReport {
        let r = &mut self.report;
        r.hypothesis_pass_rate = if r.trials == 0 {
            0.0
        } else {
            (r.passed + r.violated) as f64 / r.trials as f64
        };
        self.report
    }
}

fn run(
    theorem: Theorem,
    seed: u64,
    settings: &Settings,
    max_trials: u64,
    mut done: impl FnMut(&Tally) -> bool,
) -> FuzzReport {
    let mut tally = Tally::new(theorem, seed);
    let mut start = 0u64;
    while start < max_trials && !done(&tally) {
        let end = (start + BATCH as u64).min(max_trials);
        let outcomes: Vec<Outcome> = (start..end)
            .into_par_iter()
            .map(|i| run_trial(theorem, seed, i, settings))
            .collect();
        for outcome in outcomes {
            if done(&tally) {
                break;
            }
            tally.add(outcome);
        }
        start = end;
    }
    tally.finish()
}

/// Runs `trials` generated instances of `theorem` through its verifier.
pub fn fuzz_theorem(theorem: Theorem, trials: u64, seed: u64, settings: &Settings) -> crate::Result<FuzzReport> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    Ok(run(theorem, seed, settings, trials, |_| false))
}

/// Runs trials in index order until `passing` of them satisfy every
/// hypothesis, or `max_trials` is reached.
pub fn fuzz_until_passing(
    theorem: Theorem,
    passing: u64,
    max_trials: u64,
    seed: u64,
    settings: &Settings,
) -> crate::Result<FuzzReport> {
    if passing == 0 || max_trials == 0 {
        return Err(Error::invalid("passing and max_trials must be at least 1"));
    }
    Ok(run(theorem, seed, settings, max_trials, |t| t.hypothesis_passing() >= passing))
}
