//! JSON job files, their dispatch, and the reports written by the binary.
//!
//! A job names a command, the objects it operates on, and a strict map of
//! scalar parameters. Unknown fields are rejected everywhere: a mistyped
//! tolerance silently falling back to its default would change conclusions.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::jensen::{self, Cor1Options, JensenReport, Settings, Theorem, Verdict};
use crate::measure::{self, Interval, MomentSummary, ProductMoments, SignedMeasure};
use crate::search::{self, CounterexampleResult, FuzzReport, SearchResult};
use crate::shape::{self, AlmostConvexWitness, ShapeCheckKind, ShapeVerdict};
use crate::sp::{self, SPCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CertifySp,
    Moments,
    CheckShape,
    CheckJensen,
    Mine,
    OptimizeExample,
    Fuzz,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::CertifySp,
        Command::Moments,
        Command::CheckShape,
        Command::CheckJensen,
        Command::Mine,
        Command::OptimizeExample,
        Command::Fuzz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::CertifySp => "certify-sp",
            Command::Moments => "moments",
            Command::CheckShape => "check-shape",
            Command::CheckJensen => "check-jensen",
            Command::Mine => "mine",
            Command::OptimizeExample => "optimize-example",
            Command::Fuzz => "fuzz",
        }
    }

    /// Randomized commands need an explicit seed.
    pub fn is_randomized(self) -> bool {
        matches!(self, Command::Mine | Command::OptimizeExample | Command::Fuzz)
    }
}

/// Command-specific scalars. Every field is optional in the schema; which
/// ones are required depends on the command (see [`Job::validate`]).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    /// Mixed-convexity check for `f` concave on `[c, b]`, with the inequality reversed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concave: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relaxed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suppress_range: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allow_d_at_hi: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<ShapeCheckKind>,
    /// Region for `check-shape`; defaults to the function's domain.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<Interval>,
    /// Second factor for product moments of a density measure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_interval: Option<Interval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    /// For `fuzz`: stop once this many trials pass every hypothesis
    /// (`trials` then caps the total).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passing: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_resolution: Option<usize>,
    /// Sets every slack at once; the specific ones below take precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cert_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyp_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panels: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refine_limit: Option<usize>,
}

impl Params {
    pub fn is_empty(&self) -> bool {
        *self == Params::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<SignedMeasure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<Theorem>,
    #[serde(default, skip_serializing_if = "Params::is_empty")]
    pub params: Params,
}

/// Command-line settings that take precedence over the job file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub panels: Option<usize>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub budget: Option<u64>,
}

fn missing(path: &str, why: impl std::fmt::Display) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: format!("missing, required by {why}"),
    }
}

fn need<T: Clone>(value: &Option<T>, path: &str, why: &str) -> Result<T> {
    value.clone().ok_or_else(|| missing(path, why))
}

impl Job {
    pub fn new(command: Command) -> Self {
        Job {
            command,
            measure: None,
            function: None,
            weight: None,
            theorem: None,
            params: Params::default(),
        }
    }

    pub fn apply(&mut self, o: &Overrides) {
        let p = &mut self.params;
        p.panels = o.panels.or(p.panels);
        p.grid = o.grid.or(p.grid);
        p.tol = o.tol.or(p.tol);
        p.seed = o.seed.or(p.seed);
        p.budget = o.budget.or(p.budget);
    }

    /// Checks that the fields the command needs are present and that the
    /// numerical settings are usable.
    pub fn validate(&self) -> Result<()> {
        let cmd = self.command.name();
        let p = &self.params;
        match self.command {
            Command::CertifySp | Command::Moments => {
                need(&self.measure, "measure", cmd)?;
            }
            Command::CheckShape => match need(&p.check, "params.check", cmd)? {
                ShapeCheckKind::Convex => {
                    need(&self.function, "function", "check convex")?;
                }
                ShapeCheckKind::PointSymmetry => {
                    need(&self.function, "function", "check point_symmetry")?;
                    need(&p.c, "params.c", "check point_symmetry")?;
                }
                ShapeCheckKind::LeftAlmostConvex => {
                    need(&self.function, "function", "check left_almost_convex")?;
                    need(&p.c, "params.c", "check left_almost_convex")?;
                    need(&p.d, "params.d", "check left_almost_convex")?;
                }
                ShapeCheckKind::WeightAdmissible => {
                    need(&self.weight, "weight", "check weight_admissible")?;
                    need(&p.a, "params.a", "check weight_admissible")?;
                    need(&p.b, "params.b", "check weight_admissible")?;
                }
            },
            Command::CheckJensen => {
                let t = need(&self.theorem, "theorem", cmd)?;
                let why = format!("check-jensen {}", t.name());
                need(&self.function, "function", &why)?;
                match t {
                    Theorem::Thm1 => {
                        need(&self.measure, "measure", &why)?;
                        need(&p.c, "params.c", &why)?;
                    }
                    Theorem::Cor1 => {
                        need(&self.weight, "weight", &why)?;
                        need(&p.a, "params.a", &why)?;
                        need(&p.b, "params.b", &why)?;
                    }
                    Theorem::Cor2 => {
                        need(&p.points, "params.points", &why)?;
                        need(&p.weights, "params.weights", &why)?;
                    }
                    Theorem::Cor3 => {
                        need(&p.points, "params.points", &why)?;
                    }
                    Theorem::Thm3 => {
                        need(&self.measure, "measure", &why)?;
                        need(&p.c, "params.c", &why)?;
                        need(&p.d, "params.d", &why)?;
                    }
                }
            }
            Command::Mine => {
                need(&p.b, "params.b", cmd)?;
                need(&p.budget, "params.budget", cmd)?;
            }
            Command::OptimizeExample => {
                need(&p.budget, "params.budget", cmd)?;
            }
            Command::Fuzz => {
                need(&self.theorem, "theorem", cmd)?;
                need(&p.trials, "params.trials", cmd)?;
            }
        }
        if self.command.is_randomized() && p.seed.is_none() {
            return Err(missing("params.seed", format!("{cmd}: randomized commands take an explicit seed")));
        }
        self.settings()?;
        Ok(())
    }

    /// Effective numerical settings: defaults, then `tol`, then the
    /// specific fields.
    pub fn settings(&self) -> Result<Settings> {
        let p = &self.params;
        let mut s = Settings::default();
        if let Some(t) = p.tol {
            s = s.with_uniform_tol(t);
        }
        let q = &mut s.quadrature;
        q.panels_per_segment = p.panels.unwrap_or(q.panels_per_segment);
        q.nodes_per_panel = p.nodes.unwrap_or(q.nodes_per_panel);
        q.refine_limit = p.refine_limit.unwrap_or(q.refine_limit);
        q.abs_tol = p.quad_tol.unwrap_or(q.abs_tol);
        s.grid = p.grid.unwrap_or(s.grid);
        s.scan_resolution = p.scan_resolution.unwrap_or(s.scan_resolution);
        s.shape_tol = p.shape_tol.unwrap_or(s.shape_tol);
        s.cert_tol = p.cert_tol.unwrap_or(s.cert_tol);
        s.hyp_tol = p.hyp_tol.unwrap_or(s.hyp_tol);
        s.gap_tol = p.gap_tol.unwrap_or(s.gap_tol);

        s.quadrature.validate().map_err(|e| Error::Schema {
            path: "params".into(),
            message: e.to_string(),
        })?;
        let tols = [
            ("params.shape_tol", s.shape_tol),
            ("params.cert_tol", s.cert_tol),
            ("params.hyp_tol", s.hyp_tol),
            ("params.gap_tol", s.gap_tol),
        ];
        for (path, t) in tols {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::Schema {
                    path: path.into(),
                    message: format!("tolerance must be finite and nonnegative, got {t}"),
                });
            }
        }
        if s.grid < 3 {
            return Err(Error::Schema {
                path: "params.grid".into(),
                message: format!("grid needs at least 3 points, got {}", s.grid),
            });
        }
        if s.scan_resolution < 2 {
            return Err(Error::Schema {
                path: "params.scan_resolution".into(),
                message: format!("scan needs at least 2 points, got {}", s.scan_resolution),
            });
        }
        Ok(s)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::invalid(format!("job is not serializable: {e}")))
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let before: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
    (before + column.saturating_sub(1)).min(text.len())
}

/// Parses and validates a job.
pub fn parse_job(text: &str) -> Result<Job> {
    parse_job_with(text, &Overrides::default())
}

/// Parses a job, applies command-line overrides, then validates.
pub fn parse_job_with(text: &str, overrides: &Overrides) -> Result<Job> {
    let strip = |e: &serde_json::Error| {
        // serde_json appends the position; it is reported separately.
        let message = e.to_string();
        match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        }
    };
    let parse_error = |e: &serde_json::Error| Error::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        line: e.line(),
        column: e.column(),
        message: strip(e),
    };
    let mut de = serde_json::Deserializer::from_str(text);
    let mut job: Job = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_data() {
            Error::Schema {
                path,
                message: strip(&inner),
            }
        } else {
            parse_error(&inner)
        }
    })?;
    de.end().map_err(|e| parse_error(&e))?;
    job.apply(overrides);
    job.validate()?;
    Ok(job)
}

/// The payload of a report; its kind matches the job's command.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ReportResult {
    SpCertificate(SPCertificate),
    Moments(MomentSummary),
    ProductMoments(ProductMoments),
    Shape(ShapeVerdict),
    Jensen(JensenReport),
    Search(SearchResult),
    Counterexample(CounterexampleResult),
    Fuzz(FuzzReport),
}

impl ReportResult {
    /// Exit status as a function of the result alone:
    /// 0 holds/certified/completed, 1 hypothesis failed or not certified,
    /// 2 inequality violated.
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportResult::SpCertificate(c) => i32::from(!c.is_sp),
            ReportResult::Shape(v) => i32::from(!v.satisfied),
            ReportResult::Jensen(r) => match r.verdict {
                Verdict::Holds => 0,
                Verdict::HypothesisFailed => 1,
                Verdict::Violated => 2,
            },
            ReportResult::Fuzz(f) if f.violated > 0 => 2,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub job_echo: Job,
    pub result: ReportResult,
    pub runtime_ms: u64,
    pub version: String,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.result.exit_code()
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string_stable(self).map_err(|e| Error::invalid(format!("report is not serializable: {e}")))
    }
}

/// Exit status for a failed job: 4 for non-convergence, else 3.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence { .. } => 4,
        _ => 3,
    }
}

/// A failed job, with the partial certificate when certification stopped
/// on a quadrature failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{error}")]
pub struct JobError {
    pub error: Error,
    pub partial: Option<SPCertificate>,
}

impl From<Error> for JobError {
    fn from(error: Error) -> Self {
        JobError { error, partial: None }
    }
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        error_exit_code(&self.error)
    }
}

fn witness(job: &Job) -> AlmostConvexWitness {
    let p = &job.params;
    let (c, d) = (p.c.unwrap_or(f64::NAN), p.d.unwrap_or(f64::NAN));
    if p.allow_d_at_hi.unwrap_or(false) {
        AlmostConvexWitness::allowing_d_at_hi(c, d)
    } else {
        AlmostConvexWitness::new(c, d)
    }
}

/// Runs the verifier a `check-jensen` job names.
pub fn jensen_report(job: &Job, s: &Settings) -> Result<JensenReport> {
    let why = "check-jensen";
    let p = &job.params;
    let f = need(&job.function, "function", why)?;
    match need(&job.theorem, "theorem", why)? {
        Theorem::Thm1 => jensen::verify_theorem1(
            &f,
            need(&p.c, "params.c", why)?,
            &need(&job.measure, "measure", why)?,
            p.concave.unwrap_or(false),
            s,
        ),
        Theorem::Cor1 => jensen::verify_corollary1_with(
            &f,
            &need(&job.weight, "weight", why)?,
            need(&p.a, "params.a", why)?,
            need(&p.b, "params.b", why)?,
            Cor1Options {
                relaxed: p.relaxed.unwrap_or(false),
                suppress_range: p.suppress_range.unwrap_or(false),
            },
            s,
        ),
        Theorem::Cor2 => jensen::verify_corollary2(
            &need(&p.points, "params.points", why)?,
            &need(&p.weights, "params.weights", why)?,
            &f,
            s,
        ),
        Theorem::Cor3 => jensen::verify_corollary3(&need(&p.points, "params.points", why)?, &f, s),
        Theorem::Thm3 => jensen::verify_theorem3(&f, &need(&job.measure, "measure", why)?, &witness(job), s),
    }
}

fn shape_curve(job: &Job, s: &Settings) -> Result<(ShapeCheckKind, shape::MarginCurve)> {
    let p = &job.params;
    let kind = need(&p.check, "params.check", "check-shape")?;
    let curve = match kind {
        ShapeCheckKind::WeightAdmissible => shape::weight_curve(
            &need(&job.weight, "weight", "check-shape")?,
            need(&p.a, "params.a", "check-shape")?,
            need(&p.b, "params.b", "check-shape")?,
            p.relaxed.unwrap_or(false),
            s.grid,
            s.shape_tol,
        )?,
        _ => {
            let f = need(&job.function, "function", "check-shape")?;
            let region = p.interval.unwrap_or(f.domain());
            match kind {
                ShapeCheckKind::Convex => shape::convexity_curve(&f, region, s.grid)?,
                ShapeCheckKind::PointSymmetry => {
                    shape::symmetry_curve(&f, need(&p.c, "params.c", "check-shape")?, region, s.grid)?
                }
                _ => {
                    let f = f.restrict(region)?;
                    let (mut convex, dominance) = shape::left_almost_convex_curves(&f, &witness(job), s.grid)?;
                    convex.extend(dominance);
                    convex.sort_by(|u, v| u.0.total_cmp(&v.0));
                    convex
                }
            }
        }
    };
    Ok((kind, curve))
}

fn check_shape(job: &Job, s: &Settings) -> Result<ShapeVerdict> {
    let p = &job.params;
    let kind = need(&p.check, "params.check", "check-shape")?;
    match kind {
        ShapeCheckKind::LeftAlmostConvex => {
            let f = need(&job.function, "function", "check-shape")?;
            let f = f.restrict(p.interval.unwrap_or(f.domain()))?;
            shape::check_left_almost_convex(&f, &witness(job), s.grid, s.shape_tol)
        }
        _ => Ok(shape::summarize(&shape_curve(job, s)?.1, s.shape_tol)),
    }
}

fn moments(job: &Job, s: &Settings) -> Result<ReportResult> {
    let m = need(&job.measure, "measure", "moments")?;
    match job.params.y_interval {
        None => Ok(ReportResult::Moments(m.moments(&s.quadrature)?)),
        Some(y) => match &m {
            SignedMeasure::Density(d) => Ok(ReportResult::ProductMoments(measure::iterated_product_moments(
                d,
                y,
                &s.quadrature,
            )?)),
            SignedMeasure::Discrete(_) => Err(Error::precondition("product moments need a density measure")),
        },
    }
}

/// Dispatches `job` to the library.
pub fn execute(job: &Job) -> std::result::Result<Report, JobError> {
    let start = Instant::now();
    job.validate()?;
    let s = job.settings()?;
    let p = &job.params;
    let seed = p.seed.unwrap_or_default();
    let result = match job.command {
        Command::CertifySp => {
            let m = need(&job.measure, "measure", "certify-sp")?;
            let cert = sp::certify_sp(&m, s.scan_resolution, &s.quadrature, s.cert_tol).map_err(|f| JobError {
                error: f.error,
                partial: f.partial,
            })?;
            ReportResult::SpCertificate(cert)
        }
        Command::Moments => moments(job, &s)?,
        Command::CheckShape => ReportResult::Shape(check_shape(job, &s)?),
        Command::CheckJensen => ReportResult::Jensen(jensen_report(job, &s)?),
        Command::Mine => ReportResult::Counterexample(search::mine_cor1_sharpness(
            need(&p.b, "params.b", "mine")?,
            need(&p.budget, "params.budget", "mine")?,
            seed,
            &s,
        )?),
        Command::OptimizeExample => ReportResult::Search(search::optimize_tan_example(
            need(&p.budget, "params.budget", "optimize-example")?,
            seed,
        )?),
        Command::Fuzz => {
            let theorem = need(&job.theorem, "theorem", "fuzz")?;
            let trials = need(&p.trials, "params.trials", "fuzz")?;
            ReportResult::Fuzz(match p.passing {
                Some(passing) => search::fuzz_until_passing(theorem, passing, trials, seed, &s)?,
                None => search::fuzz_theorem(theorem, trials, seed, &s)?,
            })
        }
    };
    Ok(Report {
        job_echo: job.clone(),
        result,
        runtime_ms: u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX),
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

/// Columns and rows of a scan curve, for CSV export.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

/// The profile curve of `certify-sp` or the margin curve of `check-shape`;
/// `None` for other commands.
pub fn curve(job: &Job) -> Result<Option<Curve>> {
    let s = job.settings()?;
    match job.command {
        Command::CertifySp => {
            let m = need(&job.measure, "measure", "certify-sp")?;
            let ts = sp::scan_points(&m, s.scan_resolution)?;
            let rows = sp::profile_curve(&m, &ts, &s.quadrature)?
                .into_iter()
                .map(|p| vec![p.t, p.left, p.right])
                .collect();
            Ok(Some(Curve {
                columns: vec!["t", "left", "right"],
                rows,
            }))
        }
        Command::CheckShape => {
            let (_, c) = shape_curve(job, &s)?;
            Ok(Some(Curve {
                columns: vec!["x", "margin"],
                rows: c.into_iter().map(|(x, m)| vec![x, m]).collect(),
            }))
        }
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE1: &str = r#"{"command":"certify-sp","measure":{"type":"discrete","interval":[0,1],"atoms":[[0.25,0.5556],[0.5,-0.1111],[0.75,0.5556]]}}"#;

    #[test]
    fn parses_a_certify_job() {
        let job = parse_job(EXAMPLE1).unwrap();
        assert_eq!(job.command, Command::CertifySp);
        let r = execute(&job).unwrap();
        assert_eq!(r.exit_code(), 0);
        match r.result {
            ReportResult::SpCertificate(c) => assert!(c.is_sp),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_theorem_names_the_path() {
        match parse_job(r#"{"command":"check-jensen","theorem":"thm42"}"#) {
            Err(Error::Schema { path, message }) => {
                assert_eq!(path, "theorem");
                assert!(message.contains("thm42"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tan_across_the_pole_is_a_schema_error() {
        let text = r#"{"command":"check-shape","function":{"family":"tan","params":{},"domain":[-2,2]},"params":{"check":"convex"}}"#;
        match parse_job(text) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "function"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"command":"fuzz","theorem":"thm1","params":{"trials":3,"seed":1,"tolerance":1e-3}}"#;
        match parse_job(text) {
            Err(Error::Schema { path, message }) => {
                assert_eq!(path, "params.tolerance");
                assert!(message.contains("unknown field"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_json_reports_byte_offset() {
        let text = "{\"command\":\n  \"moments\",,}";
        match parse_job(text) {
            Err(Error::Parse { offset, line, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(&text[offset..offset + 1], ",");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_job(&format!("{EXAMPLE1} trailing")), Err(Error::Parse { .. })));
    }

    #[test]
    fn missing_fields_are_named() {
        match parse_job(r#"{"command":"check-jensen","theorem":"thm3","function":{"family":"tan","params":{},"domain":[-1,1]}}"#) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "measure"),
            other => panic!("{other:?}"),
        }
        match parse_job(r#"{"command":"optimize-example","params":{"budget":10}}"#) {
            Err(Error::Schema { path, message }) => {
                assert_eq!(path, "params.seed");
                assert!(message.contains("seed"));
            }
            other => panic!("{other:?}"),
        }
        let overrides = Overrides {
            seed: Some(4),
            ..Overrides::default()
        };
        assert!(parse_job_with(r#"{"command":"optimize-example","params":{"budget":10}}"#, &overrides).is_ok());
    }

    #[test]
    fn settings_follow_precedence() {
        let job = parse_job(r#"{"command":"moments","measure":{"type":"discrete","interval":[0,1],"atoms":[[0.5,1]]},"params":{"tol":1e-6,"gap_tol":1e-3,"panels":4}}"#).unwrap();
        let s = job.settings().unwrap();
        assert_eq!(s.hyp_tol, 1e-6);
        assert_eq!(s.gap_tol, 1e-3);
        assert_eq!(s.quadrature.panels_per_segment, 4);
        assert!(parse_job(r#"{"command":"moments","measure":{"type":"discrete","interval":[0,1],"atoms":[[0.5,1]]},"params":{"grid":1}}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let job = parse_job(EXAMPLE1).unwrap();
        assert_eq!(parse_job(&job.to_json().unwrap()).unwrap(), job);
    }

    #[test]
    fn not_sp_exits_one() {
        let text = r#"{"command":"certify-sp","measure":{"type":"discrete","interval":[0,1],"atoms":[[0,-1],[1,3]]}}"#;
        let r = execute(&parse_job(text).unwrap()).unwrap();
        assert_eq!(r.exit_code(), 1);
    }
}
