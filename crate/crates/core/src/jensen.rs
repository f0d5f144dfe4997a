//! Hypothesis-checked verifiers for the Jensen-type inequalities.
//!
//! Each verifier checks the hypotheses of one result, computes both sides
//! `lhs = f(barycenter)` and `rhs = normalized integral of f`, and reports
//! the gap `rhs - lhs` with a verdict. Failed hypotheses do not stop the
//! computation: both sides are still reported when they can be evaluated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{FunctionSpec, RealFunction};
use crate::measure::{DensitySignedMeasure, Interval, SignedMeasure};
use crate::quadrature::QuadratureConfig;
use crate::shape::{self, AlmostConvexWitness};
use crate::sp;
use crate::DEFAULT_TOL;

/// Tolerances and resolutions shared by all verifiers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub quadrature: QuadratureConfig,
    /// Points of the uniform grids used by shape checks.
    pub grid: usize,
    /// Points of the t-grid used to certify density measures.
    pub scan_resolution: usize,
    pub shape_tol: f64,
    pub cert_tol: f64,
    pub hyp_tol: f64,
    pub gap_tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            quadrature: QuadratureConfig::default(),
            grid: shape::DEFAULT_GRID,
            scan_resolution: 513,
            shape_tol: DEFAULT_TOL,
            cert_tol: DEFAULT_TOL,
            hyp_tol: DEFAULT_TOL,
            gap_tol: DEFAULT_TOL,
        }
    }
}

impl Settings {
    /// Sets every slack (quadrature, shape, certificate, hypothesis, gap).
    pub fn with_uniform_tol(mut self, tol: f64) -> Self {
        self.quadrature.abs_tol = tol;
        self.shape_tol = tol;
        self.cert_tol = tol;
        self.hyp_tol = tol;
        self.gap_tol = tol;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// Mixed convex functions, unit-mass measures.
    Thm1,
    /// Weighted integral form on `[a, b]` for odd functions.
    Cor1,
    /// Discrete weights with `sum p_k a_k + min a_k >= 0`.
    Cor2,
    /// Equal weights with `sum a_k + (n - 2) min a_k >= 0`.
    Cor3,
    /// Left almost convex functions and Steffensen-Popoviciu measures.
    Thm3,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [
        Theorem::Thm1,
        Theorem::Cor1,
        Theorem::Cor2,
        Theorem::Cor3,
        Theorem::Thm3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Thm1 => "thm1",
            Theorem::Cor1 => "cor1",
            Theorem::Cor2 => "cor2",
            Theorem::Cor3 => "cor3",
            Theorem::Thm3 => "thm3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    HypothesisFailed,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub satisfied: bool,
    /// Signed slack; `>= -hyp_tol` means satisfied.
    pub margin: f64,
}

impl HypothesisCheck {
    pub fn new(name: &str, margin: f64, tol: f64) -> Self {
        HypothesisCheck {
            name: name.to_string(),
            satisfied: margin >= -tol,
            margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JensenReport {
    pub theorem: Theorem,
    pub hypotheses: Vec<HypothesisCheck>,
    pub barycenter: Option<f64>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub gap: Option<f64>,
    pub verdict: Verdict,
    /// The inequality is expected reversed (`gap <= 0`).
    pub reversed: bool,
    pub notes: Vec<String>,
}

impl JensenReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.satisfied)
    }

    pub fn hypothesis(&self, name: &str) -> Option<&HypothesisCheck> {
        self.hypotheses.iter().find(|h| h.name == name)
    }
}

struct Draft {
    theorem: Theorem,
    hypotheses: Vec<HypothesisCheck>,
    barycenter: Option<f64>,
    lhs: Option<f64>,
    rhs: Option<f64>,
    reversed: bool,
    notes: Vec<String>,
}

impl Draft {
    fn new(theorem: Theorem) -> Self {
        Draft {
            theorem,
            hypotheses: Vec::new(),
            barycenter: None,
            lhs: None,
            rhs: None,
            reversed: false,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, margin: f64, s: &Settings) {
        self.hypotheses.push(HypothesisCheck::new(name, margin, s.hyp_tol));
    }

    fn finish(self, s: &Settings) -> JensenReport {
        let gap = match (self.lhs, self.rhs) {
            (Some(l), Some(r)) => Some(r - l),
            _ => None,
        };
        let mut notes = self.notes;
        let hyps_ok = self.hypotheses.iter().all(|h| h.satisfied);
        let verdict = match gap {
            _ if !hyps_ok => Verdict::HypothesisFailed,
            None => {
                notes.push("inequality sides could not be evaluated".into());
                Verdict::HypothesisFailed
            }
            Some(g) => {
                let signed = if self.reversed { -g } else { g };
                if signed >= -s.gap_tol {
                    Verdict::Holds
                } else {
                    Verdict::Violated
                }
            }
        };
        JensenReport {
            theorem: self.theorem,
            hypotheses: self.hypotheses,
            barycenter: self.barycenter,
            lhs: self.lhs,
            rhs: self.rhs,
            gap,
            verdict,
            reversed: self.reversed,
            notes,
        }
    }
}

fn eval_if_inside(f: &FunctionSpec, x: Option<f64>) -> Option<f64> {
    x.filter(|x| f.domain().contains(*x))
        .and_then(|x| f.eval(x).ok())
}

fn require_domain(f: &FunctionSpec, interval: Interval) -> Result<FunctionSpec> {
    f.restrict(interval)
}

/// Positive mass as a margin: satisfied exactly when the mass is at least
/// `hyp_tol`.
fn positive_mass_margin(mass: f64, s: &Settings) -> f64 {
    mass - 2.0 * s.hyp_tol
}

fn sp_checks(draft: &mut Draft, m: &SignedMeasure, s: &Settings) -> Result<sp::SPCertificate> {
    let cert = sp::certify_sp(m, s.scan_resolution, &s.quadrature, s.cert_tol)?;
    draft.check("sp_positive_mass", positive_mass_margin(cert.total_mass, s), s);
    draft.check("sp_endpoint_positivity", cert.worst_margin(), s);
    Ok(cert)
}

/// Mixed convex Jensen inequality for unit-mass Steffensen-Popoviciu
/// measures on `[a, b]` (the measure's interval).
///
/// Hypotheses: `c` in `[a, (a+b)/2]`; `f(c-x) + f(c+x) = 2 f(c)`; `f`
/// convex (concave in `concave_mode`) on `[c, b]`; barycenter in
/// `[2c - a, b]`. In `concave_mode` the inequality is expected reversed.
pub fn verify_theorem1(
    f: &FunctionSpec,
    c: f64,
    m: &SignedMeasure,
    concave_mode: bool,
    s: &Settings,
) -> Result<JensenReport> {
    let iv = m.interval();
    let (a, b) = (iv.lo(), iv.hi());
    let fr = require_domain(f, iv)?;
    if !iv.contains(c) {
        return Err(Error::precondition(format!("c = {c} must lie in [{a}, {b}]")));
    }
    let moments = m.moments(&s.quadrature)?;
    if (moments.total_mass - 1.0).abs() > s.hyp_tol {
        return Err(Error::precondition(format!(
            "total mass must be 1, got {}",
            moments.total_mass
        )));
    }

    let mut draft = Draft::new(Theorem::Thm1);
    draft.reversed = concave_mode;
    sp_checks(&mut draft, m, s)?;
    draft.check("c_in_left_half", (c - a).min(iv.midpoint() - c), s);
    let sym = shape::check_point_symmetry(&fr, c, iv, s.grid, s.shape_tol)?;
    draft.check("point_symmetry", sym.worst_margin, s);
    let right = if c < b {
        let oriented = if concave_mode { fr.negated() } else { fr.clone() };
        shape::check_convex_on(&oriented, Interval::new(c, b)?, s.grid, s.shape_tol)?.worst_margin
    } else {
        0.0
    };
    draft.check(if concave_mode { "concave_on_right" } else { "convex_on_right" }, right, s);

    let reflected = 2.0 * c - a;
    if reflected >= b {
        draft
            .notes
            .push("degenerate barycenter window: 2c - a >= b leaves only {b}".into());
    }
    let bary = moments.barycenter;
    let window = bary.map_or(f64::NAN, |x| (x - reflected).min(b - x));
    draft.check("barycenter_window", window, s);

    draft.barycenter = bary;
    draft.lhs = eval_if_inside(&fr, bary);
    draft.rhs = Some(m.integrate(&fr, &s.quadrature)?);
    Ok(draft.finish(s))
}

/// How [`verify_corollary1_with`] treats the weight and range hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Cor1Options {
    /// Use `p(x) <= p(-a) <= p(y)` instead of monotonicity.
    pub relaxed: bool,
    /// Drop the `a >= -b/3` hypothesis; used to probe its sharpness.
    pub suppress_range: bool,
}

/// Weighted integral form for an odd `f` convex on `[0, b]` and a weight
/// `p` on `[a, b]`.
pub fn verify_corollary1(
    f: &FunctionSpec,
    p: &FunctionSpec,
    a: f64,
    b: f64,
    relaxed: bool,
    s: &Settings,
) -> Result<JensenReport> {
    verify_corollary1_with(
        f,
        p,
        a,
        b,
        Cor1Options {
            relaxed,
            suppress_range: false,
        },
        s,
    )
}

pub fn verify_corollary1_with(
    f: &FunctionSpec,
    p: &FunctionSpec,
    a: f64,
    b: f64,
    opts: Cor1Options,
    s: &Settings,
) -> Result<JensenReport> {
    if !(b > 0.0) {
        return Err(Error::precondition(format!("b must be positive, got {b}")));
    }
    if !(a < b) {
        return Err(Error::precondition(format!("a = {a} must be below b = {b}")));
    }
    let support = Interval::new(a, b)?;
    let sym_iv = Interval::new(-b, b)?;
    let fr = require_domain(f, Interval::new(a.min(-b), b)?)?;

    let mut draft = Draft::new(Theorem::Cor1);
    let odd = shape::check_point_symmetry(&fr, 0.0, sym_iv, s.grid, s.shape_tol)?;
    draft.check("odd", odd.worst_margin, s);
    let convex = shape::check_convex_on(&fr, Interval::new(0.0, b)?, s.grid, s.shape_tol)?;
    draft.check("convex_on_nonnegative", convex.worst_margin, s);
    let weight = shape::check_weight_admissible(p, a, b, opts.relaxed, s.grid, s.shape_tol)?;
    draft.check(
        if opts.relaxed { "weight_relaxed" } else { "weight_monotone" },
        weight.worst_margin,
        s,
    );
    if !opts.suppress_range {
        draft.check("a_range", a + b / 3.0, s);
    } else {
        draft.notes.push("range hypothesis a >= -b/3 suppressed".into());
    }

    let measure: SignedMeasure =
        DensitySignedMeasure::new(support, p.restrict(support)?, Vec::new())?.into();
    let moments = measure.moments(&s.quadrature)?;
    let norm = moments.total_mass;
    if !(norm > 0.0) {
        return Err(Error::precondition(format!(
            "weight integral over [{a}, {b}] must be positive, got {norm}"
        )));
    }
    draft.barycenter = moments.barycenter;
    draft.lhs = eval_if_inside(&fr, moments.barycenter);
    draft.rhs = Some(measure.integrate(&fr, &s.quadrature)? / norm);
    Ok(draft.finish(s))
}

fn odd_convex_checks(draft: &mut Draft, f: &FunctionSpec, s: &Settings) -> Result<()> {
    let dom = f.domain();
    if !dom.contains(0.0) {
        return Err(Error::precondition(format!(
            "domain [{}, {}] must contain the origin",
            dom.lo(),
            dom.hi()
        )));
    }
    let odd = shape::check_point_symmetry(f, 0.0, dom, s.grid, s.shape_tol)?;
    draft.check("odd", odd.worst_margin, s);
    let convex = if dom.hi() > 0.0 {
        shape::check_convex_on(f, Interval::new(0.0, dom.hi())?, s.grid, s.shape_tol)?.worst_margin
    } else {
        0.0
    };
    draft.check("convex_on_nonnegative", convex, s);
    Ok(())
}

fn eval_points(f: &FunctionSpec, points: &[f64]) -> Result<Vec<f64>> {
    points.iter().map(|&x| f.eval(x)).collect()
}

/// Discrete form: weights `p_k >= 0` summing to one, points in the domain
/// of an odd `f` that is convex on its nonnegative part.
pub fn verify_corollary2(
    points: &[f64],
    weights: &[f64],
    f: &FunctionSpec,
    s: &Settings,
) -> Result<JensenReport> {
    if points.is_empty() || points.len() != weights.len() {
        return Err(Error::precondition(format!(
            "need matching nonempty points and weights, got {} and {}",
            points.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
        return Err(Error::precondition(format!("weights must be nonnegative, got {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::precondition(format!("weights must sum to 1, got {total}")));
    }
    let values = eval_points(f, points)?;

    let mut draft = Draft::new(Theorem::Cor2);
    odd_convex_checks(&mut draft, f, s)?;
    let mean: f64 = points.iter().zip(weights).map(|(x, w)| w * x).sum();
    let min = points.iter().copied().fold(f64::INFINITY, f64::min);
    draft.check("barycenter_condition", mean + min, s);
    draft.barycenter = Some(mean);
    draft.lhs = eval_if_inside(f, Some(mean));
    draft.rhs = Some(values.iter().zip(weights).map(|(y, w)| w * y).sum());
    Ok(draft.finish(s))
}

/// Equal-weight form with the weaker `sum a_k + (n - 2) min a_k >= 0`.
pub fn verify_corollary3(points: &[f64], f: &FunctionSpec, s: &Settings) -> Result<JensenReport> {
    let n = points.len();
    if n < 2 {
        return Err(Error::precondition(format!("need at least two points, got {n}")));
    }
    let values = eval_points(f, points)?;

    let mut draft = Draft::new(Theorem::Cor3);
    odd_convex_checks(&mut draft, f, s)?;
    let sum: f64 = points.iter().sum();
    let min = points.iter().copied().fold(f64::INFINITY, f64::min);
    draft.check("sum_condition", sum + (n as f64 - 2.0) * min, s);
    let mean = sum / n as f64;
    draft.barycenter = Some(mean);
    draft.lhs = eval_if_inside(f, Some(mean));
    draft.rhs = Some(values.iter().sum::<f64>() / n as f64);
    Ok(draft.finish(s))
}

/// `integral over [lo, d] of ((f(x) - f(c))(d - c) - (f(d) - f(c))(x - c)) d mu`.
///
/// Atoms exactly at `d` are included.
pub fn thm3_condition_ii(
    f: &FunctionSpec,
    m: &SignedMeasure,
    c: f64,
    d: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let iv = m.interval();
    if !(c < d) {
        return Err(Error::precondition(format!("need c < d, got c = {c}, d = {d}")));
    }
    if !iv.contains(d) || !iv.contains(c) {
        return Err(Error::precondition(format!(
            "c = {c} and d = {d} must lie in [{}, {}]",
            iv.lo(),
            iv.hi()
        )));
    }
    require_domain(f, Interval::new(iv.lo(), d)?)?;
    let fc = f.eval(c)?;
    let fd = f.eval(d)?;
    let mut bps = f.breakpoints();
    bps.push(c);
    m.integrate_window(
        |x| Ok((f.eval(x)? - fc) * (d - c) - (fd - fc) * (x - c)),
        iv.lo(),
        d,
        &bps,
        cfg,
    )
}

/// Jensen inequality for a left almost convex `f` and a Steffensen-Popoviciu
/// measure of any positive mass, normalized by the mass.
pub fn verify_theorem3(
    f: &FunctionSpec,
    m: &SignedMeasure,
    w: &AlmostConvexWitness,
    s: &Settings,
) -> Result<JensenReport> {
    let iv = m.interval();
    let fr = require_domain(f, iv)?;
    w.validate(iv).map_err(|e| Error::precondition(e.to_string()))?;

    let mut draft = Draft::new(Theorem::Thm3);
    let cert = sp_checks(&mut draft, m, s)?;
    let lac = shape::check_left_almost_convex(&fr, w, s.grid, s.shape_tol)?;
    draft.check("left_almost_convex", lac.worst_margin, s);

    let moments = m.moments(&s.quadrature)?;
    let bary = moments.barycenter;
    draft.check("barycenter_at_least_c", bary.map_or(f64::NAN, |x| x - w.c), s);
    let cond = thm3_condition_ii(&fr, m, w.c, w.d, &s.quadrature)?;
    draft.check("condition_ii", cond, s);

    draft.barycenter = bary;
    draft.lhs = eval_if_inside(&fr, bary);
    if cert.total_mass > 0.0 {
        draft.rhs = Some(m.integrate(&fr, &s.quadrature)? / moments.total_mass);
    }
    Ok(draft.finish(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn s() -> Settings {
        Settings::default()
    }

    fn cube(lo: f64, hi: f64) -> FunctionSpec {
        FunctionSpec::polynomial(vec![0.0, 0.0, 0.0, 1.0], iv(lo, hi)).unwrap()
    }

    fn tan_measure(x: f64, y: f64, z: f64) -> SignedMeasure {
        SignedMeasure::discrete([(x, 0.5), (y, -0.25), (z, 0.75)], iv(-PI / 3.0, PI / 3.0)).unwrap()
    }

    #[test]
    fn theorem1_tan_uniform() {
        let f = FunctionSpec::tan(iv(-0.3, 1.0)).unwrap();
        let window = iv(0.5, 0.9);
        let density = FunctionSpec::piecewise_linear(
            vec![(-0.3, 0.0), (0.5, 0.0), (0.5, 2.5), (0.9, 2.5), (0.9, 0.0), (1.0, 0.0)],
            iv(-0.3, 1.0),
        )
        .unwrap();
        let m = SignedMeasure::density(iv(-0.3, 1.0), density).unwrap();
        let r = verify_theorem1(&f, 0.0, &m, false, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:#?}");
        assert_abs_diff_eq!(r.barycenter.unwrap(), window.midpoint(), epsilon = 1e-12);
        // 30-digit references for tan(0.7) and (ln cos 0.5 - ln cos 0.9) / 0.4.
        assert_abs_diff_eq!(r.lhs.unwrap(), 0.842_288_380_463_079_4, epsilon = 1e-12);
        assert_abs_diff_eq!(r.rhs.unwrap(), 0.862_145_507_855_228_9, epsilon = 1e-10);
        assert_abs_diff_eq!(r.gap.unwrap(), 0.019_857_127_392_149_5, epsilon = 1e-10);
    }

    #[test]
    fn theorem1_dirac_at_b() {
        let f = FunctionSpec::tan(iv(-0.3, 1.0)).unwrap();
        let m = SignedMeasure::dirac(1.0, iv(-0.3, 1.0)).unwrap();
        let r = verify_theorem1(&f, 0.0, &m, false, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.gap, Some(0.0));
    }

    #[test]
    fn theorem1_barycenter_too_far_left() {
        let f = FunctionSpec::tan(iv(-0.3, 1.0)).unwrap();
        let density = FunctionSpec::piecewise_linear(
            vec![(-0.3, 10.0), (-0.2, 10.0), (-0.2, 0.0), (1.0, 0.0)],
            iv(-0.3, 1.0),
        )
        .unwrap();
        let m = SignedMeasure::density(iv(-0.3, 1.0), density).unwrap();
        let r = verify_theorem1(&f, 0.0, &m, false, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisFailed);
        assert!(!r.hypothesis("barycenter_window").unwrap().satisfied);
        assert!(r.hypothesis("point_symmetry").unwrap().satisfied);
    }

    #[test]
    fn theorem1_requires_unit_mass() {
        let f = cube(-1.0, 2.0);
        let m = SignedMeasure::discrete([(1.5, 2.0)], iv(-1.0, 2.0)).unwrap();
        assert!(matches!(
            verify_theorem1(&f, 0.0, &m, false, &s()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn theorem1_degenerate_window_is_flagged() {
        let f = cube(-1.0, 1.0);
        let m = SignedMeasure::dirac(1.0, iv(-1.0, 1.0)).unwrap();
        let r = verify_theorem1(&f, 0.0, &m, false, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.notes.iter().any(|n| n.contains("degenerate")));
    }

    #[test]
    fn theorem1_concave_mode_negates() {
        let f = cube(-1.0, 2.0);
        let m = SignedMeasure::discrete([(0.5, 0.5), (2.0, 0.5)], iv(-1.0, 2.0)).unwrap();
        let plain = verify_theorem1(&f, 0.0, &m, false, &s()).unwrap();
        let flipped = verify_theorem1(&f.negated(), 0.0, &m, true, &s()).unwrap();
        assert_eq!(plain.verdict, Verdict::Holds);
        assert_eq!(flipped.verdict, Verdict::Holds);
        assert_eq!(flipped.gap.unwrap(), -plain.gap.unwrap());
        assert!(flipped.hypothesis("concave_on_right").unwrap().satisfied);
    }

    #[test]
    fn corollary1_cube_uniform() {
        let f = cube(-1.0, 1.0);
        let p = FunctionSpec::constant(1.0, iv(-1.0, 1.0)).unwrap();
        let r = verify_corollary1(&f, &p, -1.0 / 3.0, 1.0, false, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:#?}");
        assert_abs_diff_eq!(r.barycenter.unwrap(), 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.lhs.unwrap(), 1.0 / 27.0, epsilon = 1e-12);
        // (3/4) * (1/4) * (1 - 1/81)
        assert_abs_diff_eq!(r.rhs.unwrap(), 0.75 * 0.25 * (1.0 - 1.0 / 81.0), epsilon = 1e-12);
    }

    #[test]
    fn corollary1_nonnegative_a() {
        let f = cube(-1.0, 1.0);
        let p = FunctionSpec::polynomial(vec![0.5, 1.0], iv(-1.0, 1.0)).unwrap();
        let r = verify_corollary1(&f, &p, 0.2, 1.0, false, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn corollary1_range() {
        let f = cube(-1.0, 1.0);
        let p = FunctionSpec::constant(1.0, iv(-1.0, 1.0)).unwrap();
        let r = verify_corollary1(&f, &p, -0.5, 1.0, false, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisFailed);
        let range = r.hypothesis("a_range").unwrap();
        assert!(!range.satisfied);
        assert_abs_diff_eq!(range.margin, -0.5 + 1.0 / 3.0, epsilon = 1e-15);

        let opts = Cor1Options {
            relaxed: false,
            suppress_range: true,
        };
        let r = verify_corollary1_with(&f, &p, -0.5, 1.0, opts, &s()).unwrap();
        assert!(r.hypothesis("a_range").is_none());
        // A uniform weight still satisfies the inequality there.
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn corollary1_zero_weight() {
        let f = cube(-1.0, 1.0);
        let p = FunctionSpec::constant(0.0, iv(-1.0, 1.0)).unwrap();
        assert!(matches!(
            verify_corollary1(&f, &p, 0.0, 1.0, false, &s()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn corollary2_examples() {
        let f = cube(-1.0, 1.0);
        let r = verify_corollary2(&[-0.2, 0.8], &[0.5, 0.5], &f, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_abs_diff_eq!(r.hypothesis("barycenter_condition").unwrap().margin, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(r.lhs.unwrap(), 0.027, epsilon = 1e-15);
        assert_abs_diff_eq!(r.rhs.unwrap(), 0.252, epsilon = 1e-15);

        let r = verify_corollary2(&[-0.5, 1.0], &[0.5, 0.5], &f, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisFailed);
        assert_abs_diff_eq!(r.hypothesis("barycenter_condition").unwrap().margin, -0.25);

        let r = verify_corollary2(&[0.1, 0.4, 0.9], &[0.2, 0.3, 0.5], &f, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn corollary2_preconditions() {
        let f = cube(-1.0, 1.0);
        assert!(verify_corollary2(&[0.1, 0.2], &[0.5, 0.6], &f, &s()).is_err());
        assert!(verify_corollary2(&[0.1, 0.2], &[1.5, -0.5], &f, &s()).is_err());
        assert!(verify_corollary2(&[0.1], &[0.5, 0.5], &f, &s()).is_err());
        assert!(matches!(
            verify_corollary2(&[0.1, 2.0], &[0.5, 0.5], &f, &s()),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn corollary3_tan() {
        let f = FunctionSpec::tan(iv(-PI / 6.0, PI / 2.0 - 1e-3)).unwrap();
        let r = verify_corollary3(&[-0.2, 0.3, 0.5], &f, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:#?}");
        assert_abs_diff_eq!(r.hypothesis("sum_condition").unwrap().margin, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(r.lhs.unwrap(), 0.202_710_035_508_672_5, epsilon = 1e-14);
        assert_abs_diff_eq!(r.rhs.unwrap(), 0.217_642_901_314_913_75, epsilon = 1e-14);
    }

    #[test]
    fn corollary3_equal_points_and_pairs() {
        let f = cube(-1.0, 1.0);
        let r = verify_corollary3(&[0.3, 0.3, 0.3], &f, &s()).unwrap();
        assert_eq!(r.gap, Some(0.0));
        let r = verify_corollary3(&[-0.3, 0.5], &f, &s()).unwrap();
        assert_abs_diff_eq!(r.hypothesis("sum_condition").unwrap().margin, 0.2, epsilon = 1e-15);
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(verify_corollary3(&[0.3], &f, &s()).is_err());
    }

    #[test]
    fn condition_ii_values() {
        let tan = FunctionSpec::tan(iv(-PI / 3.0, PI / 3.0)).unwrap();
        let cfg = QuadratureConfig::default();
        let d = PI / 3.0;

        let affine = FunctionSpec::polynomial(vec![0.3, -2.0], iv(-PI / 3.0, PI / 3.0)).unwrap();
        assert_eq!(thm3_condition_ii(&affine, &tan_measure(-0.5, 0.5, 1.0), 0.0, d, &cfg).unwrap(), 0.0);

        let v = thm3_condition_ii(&tan, &tan_measure(-0.4, 0.4, 0.4), 0.0, d, &cfg).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);

        // 30-digit references.
        let v = thm3_condition_ii(&tan, &tan_measure(-0.5, 0.5, 1.0), 0.0, d, &cfg).unwrap();
        assert_abs_diff_eq!(v, 0.144_601_141_583_863_9, epsilon = 1e-14);
        let v = thm3_condition_ii(&tan, &tan_measure(-0.5, 0.4, 0.5), 0.0, d, &cfg).unwrap();
        assert_abs_diff_eq!(v, -0.010_966_618_626_249_146, epsilon = 1e-14);
    }

    #[test]
    fn condition_ii_on_density() {
        // f = x^2 on [-1, 1], c = 0, d = 1, Lebesgue measure:
        // integral over [-1, 1] of (x^2 - x) dx = 2/3.
        let f = FunctionSpec::polynomial(vec![0.0, 0.0, 1.0], iv(-1.0, 1.0)).unwrap();
        let m = SignedMeasure::density(iv(-1.0, 1.0), FunctionSpec::constant(1.0, iv(-1.0, 1.0)).unwrap())
            .unwrap();
        let v = thm3_condition_ii(&f, &m, 0.0, 1.0, &QuadratureConfig::default()).unwrap();
        assert_abs_diff_eq!(v, 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn theorem3_tan_example() {
        let tan = FunctionSpec::tan(iv(-PI / 3.0, PI / 3.0)).unwrap();
        let w = AlmostConvexWitness::allowing_d_at_hi(0.0, PI / 3.0);
        let r = verify_theorem3(&tan, &tan_measure(-0.5, 0.5, 1.0), &w, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "{r:#?}");
        assert!(r.hypotheses_hold());
        assert_eq!(r.barycenter, Some(0.375));
        assert_abs_diff_eq!(r.lhs.unwrap(), 0.393_626_575_925_632_76, epsilon = 1e-14);
        assert_abs_diff_eq!(r.rhs.unwrap(), 0.758_328_926_108_333_8, epsilon = 1e-14);
        assert_abs_diff_eq!(r.gap.unwrap(), 0.364_702_350_182_701_03, epsilon = 1e-13);
    }

    #[test]
    fn theorem3_condition_ii_fails() {
        let tan = FunctionSpec::tan(iv(-PI / 3.0, PI / 3.0)).unwrap();
        let w = AlmostConvexWitness::allowing_d_at_hi(0.0, PI / 3.0);
        let r = verify_theorem3(&tan, &tan_measure(-0.5, 0.4, 0.5), &w, &s()).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisFailed);
        assert!(!r.hypothesis("condition_ii").unwrap().satisfied);
        assert!(r.hypothesis("sp_endpoint_positivity").unwrap().satisfied);
    }

    #[test]
    fn theorem3_dirac() {
        let f = cube(-1.0, 2.0);
        let m = SignedMeasure::dirac(2.0, iv(-1.0, 2.0)).unwrap();
        let r = verify_theorem3(&f, &m, &AlmostConvexWitness::new(0.0, 1.0), &s()).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.gap, Some(0.0));
    }

    #[test]
    fn theorem3_nonpositive_mass() {
        let f = cube(-1.0, 2.0);
        let m = SignedMeasure::discrete([(0.5, 1.0), (1.5, -1.0)], iv(-1.0, 2.0)).unwrap();
        let r = verify_theorem3(&f, &m, &AlmostConvexWitness::new(0.0, 1.0), &s()).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisFailed);
        assert!(!r.hypothesis("sp_positive_mass").unwrap().satisfied);
        assert_eq!(r.barycenter, None);
        assert_eq!(r.rhs, None);
    }

    #[test]
    fn theorem3_bad_witness() {
        let f = cube(-1.0, 2.0);
        let m = SignedMeasure::dirac(2.0, iv(-1.0, 2.0)).unwrap();
        let w = AlmostConvexWitness::new(1.0, 0.5);
        assert!(matches!(verify_theorem3(&f, &m, &w, &s()), Err(Error::Precondition(_))));
    }
}
