use jensen_lab::jensen::Verdict;
use jensen_lab::job::{self, ReportResult};
use jensen_lab::search::{fuzz_theorem, mine_cor1_sharpness, optimize_tan_example, tan_example_constraints};
use jensen_lab::{Settings, Theorem};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn fuzz_reports_do_not_depend_on_thread_count() {
    let s = Settings::default();
    for theorem in Theorem::ALL {
        let one = in_pool(1, || fuzz_theorem(theorem, 300, 99, &s).unwrap());
        let four = in_pool(4, || fuzz_theorem(theorem, 300, 99, &s).unwrap());
        assert_eq!(one, four, "{}", theorem.name());
    }
}

#[test]
fn miner_does_not_depend_on_thread_count() {
    let s = Settings::default();
    let one = in_pool(1, || mine_cor1_sharpness(1.0, 5000, 3, &s).unwrap());
    let four = in_pool(4, || mine_cor1_sharpness(1.0, 5000, 3, &s).unwrap());
    assert_eq!(one, four);
}

/// A reported witness must re-verify from its serialized form alone.
#[test]
fn mined_witnesses_replay_through_the_job_runner() {
    let s = Settings::default();
    for seed in [1, 2, 3] {
        let r = mine_cor1_sharpness(1.0, 20_000, seed, &s).unwrap();
        assert!(r.found, "seed {seed}");
        let text = r.witness.as_ref().unwrap().to_json().unwrap();
        let job = job::parse_job(&text).unwrap();
        assert!(job.params.a.unwrap() < -1.0 / 3.0);
        let report = job::execute(&job).unwrap();
        assert_eq!(report.exit_code(), 2);
        match report.result {
            ReportResult::Jensen(j) => {
                assert_eq!(j.verdict, Verdict::Violated);
                assert!(j.hypotheses.iter().all(|h| h.satisfied), "{j:?}");
                assert_eq!(j.gap, r.observed_gap);
            }
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn optimizer_never_exceeds_zero_and_stays_feasible() {
    for seed in 0..12 {
        for budget in [1, 2, 50, 3000] {
            let r = optimize_tan_example(budget, seed).unwrap();
            assert_eq!(r.total_evaluations, budget);
            assert!(r.best_value <= 1e-9, "seed {seed}: {r:?}");
            if r.best_point.len() == 3 {
                let p = [r.best_point[0], r.best_point[1], r.best_point[2]];
                assert!(tan_example_constraints(p).iter().all(|m| *m >= 0.0));
            }
        }
    }
}
