//! The closed catalog of evaluable real functions.
//!
//! Every [`FunctionSpec`] carries its domain and is validated at
//! construction, so evaluation inside the domain always yields a finite
//! value. Job files describe functions as
//! `{"family": ..., "params": {...}, "domain": [lo, hi]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::Interval;

/// Distance kept between a `tan` domain and the nearest pole.
pub const TAN_POLE_GUARD: f64 = 1e-6;

/// Maximum jump allowed where a `glue` switches from `left` to `right`
/// (scaled by the magnitude of the values when that exceeds one).
pub const GLUE_CONTINUITY_TOL: f64 = 1e-9;

/// Something that can be evaluated on a declared interval.
///
/// [`FunctionSpec`] is the serializable implementation; [`FnHandle`] wraps
/// an arbitrary closure for library callers.
pub trait RealFunction {
    fn domain(&self) -> Interval;

    fn eval(&self, x: f64) -> Result<f64>;

    /// Points where the function may have a kink or jump. Quadrature never
    /// lets a panel straddle one of them.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// A closure with a declared domain.
#[derive(Clone)]
pub struct FnHandle<F> {
    f: F,
    domain: Interval,
    breakpoints: Vec<f64>,
}

impl<F: Fn(f64) -> f64> FnHandle<F> {
    pub fn new(domain: Interval, f: F) -> Self {
        FnHandle {
            f,
            domain,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }
}

impl<F: Fn(f64) -> f64> std::fmt::Debug for FnHandle<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FnHandle")
            .field("domain", &self.domain)
            .field("breakpoints", &self.breakpoints)
            .finish_non_exhaustive()
    }
}

impl<F: Fn(f64) -> f64> RealFunction for FnHandle<F> {
    fn domain(&self) -> Interval {
        self.domain
    }

    fn eval(&self, x: f64) -> Result<f64> {
        check_in_domain(self.domain, x)?;
        finite_at(x, (self.f)(x))
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }
}

impl<T: RealFunction + ?Sized> RealFunction for &T {
    fn domain(&self) -> Interval {
        (**self).domain()
    }

    fn eval(&self, x: f64) -> Result<f64> {
        (**self).eval(x)
    }

    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
}

fn check_in_domain(domain: Interval, x: f64) -> Result<()> {
    if domain.contains(x) {
        Ok(())
    } else {
        Err(Error::Domain {
            point: x,
            reason: format!("outside domain [{}, {}]", domain.lo(), domain.hi()),
        })
    }
}

fn finite_at(x: f64, y: f64) -> Result<f64> {
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::Domain {
            point: x,
            reason: format!("non-finite value {y}"),
        })
    }
}

/// The function families of the catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `sum coeffs[k] * x^k`, ascending powers.
    Polynomial { coeffs: Vec<f64> },
    Tan,
    /// `sign(x) * |x|^exponent`.
    OddPower { exponent: f64 },
    /// Linear interpolation between `(x, y)` knots. Two knots may share an
    /// abscissa to encode a jump; the function is right-continuous there.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
    /// Samples on a uniform grid spanning the domain, linearly interpolated.
    GridSamples { values: Vec<f64> },
    /// `base(x)` for `x > 0`, `-base(-x)` for `x < 0`, and `0` at the origin.
    OddExtension { base: Box<FunctionSpec> },
    /// `base(x)` for `x >= center`, `2 base(center) - base(2 center - x)` below.
    PointSymmetricExtension { base: Box<FunctionSpec>, center: f64 },
    /// The affine function through two points.
    Chord { p1: (f64, f64), p2: (f64, f64) },
    /// `left` below `split`, `right` from `split` on.
    Glue {
        left: Box<FunctionSpec>,
        right: Box<FunctionSpec>,
        split: f64,
    },
    /// `base(-x)`; turns a right almost convex function into a left one.
    Reflect { base: Box<FunctionSpec> },
    /// `sum coef * term(x)`.
    LinearCombination { terms: Vec<(f64, FunctionSpec)> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Polynomial { .. } => "polynomial",
            Family::Tan => "tan",
            Family::OddPower { .. } => "odd_power",
            Family::PiecewiseLinear { .. } => "piecewise_linear",
            Family::GridSamples { .. } => "grid_samples",
            Family::OddExtension { .. } => "odd_extension",
            Family::PointSymmetricExtension { .. } => "point_symmetric_extension",
            Family::Chord { .. } => "chord",
            Family::Glue { .. } => "glue",
            Family::Reflect { .. } => "reflect",
            Family::LinearCombination { .. } => "linear_combination",
        }
    }
}

/// A validated catalog function together with its domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFunctionSpec", into = "RawFunctionSpec")]
pub struct FunctionSpec {
    family: Family,
    domain: Interval,
}

impl FunctionSpec {
    pub fn new(family: Family, domain: Interval) -> Result<Self> {
        let spec = FunctionSpec { family, domain };
        spec.validate()?;
        Ok(spec)
    }

    pub fn polynomial(coeffs: Vec<f64>, domain: Interval) -> Result<Self> {
        Self::new(Family::Polynomial { coeffs }, domain)
    }

    pub fn constant(value: f64, domain: Interval) -> Result<Self> {
        Self::polynomial(vec![value], domain)
    }

    pub fn identity(domain: Interval) -> Self {
        FunctionSpec {
            family: Family::Polynomial {
                coeffs: vec![0.0, 1.0],
            },
            domain,
        }
    }

    pub fn tan(domain: Interval) -> Result<Self> {
        Self::new(Family::Tan, domain)
    }

    pub fn odd_power(exponent: f64, domain: Interval) -> Result<Self> {
        Self::new(Family::OddPower { exponent }, domain)
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>, domain: Interval) -> Result<Self> {
        Self::new(Family::PiecewiseLinear { knots }, domain)
    }

    pub fn grid_samples(values: Vec<f64>, domain: Interval) -> Result<Self> {
        Self::new(Family::GridSamples { values }, domain)
    }

    pub fn odd_extension(base: FunctionSpec, domain: Interval) -> Result<Self> {
        Self::new(
            Family::OddExtension {
                base: Box::new(base),
            },
            domain,
        )
    }

    pub fn point_symmetric_extension(
        base: FunctionSpec,
        center: f64,
        domain: Interval,
    ) -> Result<Self> {
        Self::new(
            Family::PointSymmetricExtension {
                base: Box::new(base),
                center,
            },
            domain,
        )
    }

    pub fn chord(p1: (f64, f64), p2: (f64, f64), domain: Interval) -> Result<Self> {
        Self::new(Family::Chord { p1, p2 }, domain)
    }

    pub fn glue(
        left: FunctionSpec,
        right: FunctionSpec,
        split: f64,
        domain: Interval,
    ) -> Result<Self> {
        Self::new(
            Family::Glue {
                left: Box::new(left),
                right: Box::new(right),
                split,
            },
            domain,
        )
    }

    /// `x -> self(-x)` on the mirrored domain.
    pub fn reflect(&self) -> Self {
        FunctionSpec {
            domain: self.domain.reflected(),
            family: Family::Reflect {
                base: Box::new(self.clone()),
            },
        }
    }

    pub fn linear_combination(terms: Vec<(f64, FunctionSpec)>, domain: Interval) -> Result<Self> {
        Self::new(Family::LinearCombination { terms }, domain)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::linear_combination(vec![(factor, self.clone())], self.domain)
    }

    pub fn negated(&self) -> Self {
        FunctionSpec {
            family: Family::LinearCombination {
                terms: vec![(-1.0, self.clone())],
            },
            domain: self.domain,
        }
    }

    /// The same function on a sub-interval of its domain.
    pub fn restrict(&self, domain: Interval) -> Result<Self> {
        if !self.domain.contains_interval(domain) {
            return Err(Error::Domain {
                point: if domain.lo() < self.domain.lo() {
                    domain.lo()
                } else {
                    domain.hi()
                },
                reason: format!(
                    "cannot restrict {} on [{}, {}] to [{}, {}]",
                    self.family.name(),
                    self.domain.lo(),
                    self.domain.hi(),
                    domain.lo(),
                    domain.hi()
                ),
            });
        }
        Ok(FunctionSpec {
            family: self.family.clone(),
            domain,
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Whether the family is piecewise linear as a whole, which lets
    /// convexity be decided exactly from its knots.
    pub fn knots(&self) -> Option<Vec<(f64, f64)>> {
        match &self.family {
            Family::PiecewiseLinear { knots } => Some(knots.clone()),
            Family::GridSamples { values } => {
                let n = values.len();
                Some(
                    values
                        .iter()
                        .enumerate()
                        .map(|(i, v)| (self.grid_abscissa(i, n), *v))
                        .collect(),
                )
            }
            _ => None,
        }
    }

    fn grid_abscissa(&self, i: usize, n: usize) -> f64 {
        if i + 1 == n {
            self.domain.hi()
        } else {
            self.domain.lo() + self.domain.length() * (i as f64) / ((n - 1) as f64)
        }
    }

    fn validate(&self) -> Result<()> {
        let d = self.domain;
        let name = self.family.name();
        let bad = |msg: String| Err(Error::invalid(format!("{name}: {msg}")));
        match &self.family {
            Family::Polynomial { coeffs } => {
                if coeffs.is_empty() {
                    return bad("needs at least one coefficient".into());
                }
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return bad("coefficients must be finite".into());
                }
            }
            Family::Tan => {
                // Poles at (k + 1/2) pi; the nearest one at or above lo - guard.
                let k = ((d.lo() - TAN_POLE_GUARD) / std::f64::consts::PI - 0.5).ceil();
                let pole = (k + 0.5) * std::f64::consts::PI;
                if pole <= d.hi() + TAN_POLE_GUARD {
                    return bad(format!(
                        "domain [{}, {}] crosses the pole guard around {pole}",
                        d.lo(),
                        d.hi()
                    ));
                }
            }
            Family::OddPower { exponent } => {
                if !(exponent.is_finite() && *exponent > 0.0) {
                    return bad("exponent must be positive and finite".into());
                }
            }
            Family::PiecewiseLinear { knots } => {
                if knots.len() < 2 {
                    return bad("needs at least two knots".into());
                }
                if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
                    return bad("knots must be finite".into());
                }
                for w in knots.windows(2) {
                    if w[1].0 < w[0].0 {
                        return bad("knot abscissae must be nondecreasing".into());
                    }
                }
                for w in knots.windows(3) {
                    if w[0].0 == w[1].0 && w[1].0 == w[2].0 {
                        return bad("at most two knots may share an abscissa".into());
                    }
                }
                if knots[0].0 > d.lo() || knots[knots.len() - 1].0 < d.hi() {
                    return bad("knots must span the domain".into());
                }
            }
            Family::GridSamples { values } => {
                if values.len() < 2 {
                    return bad("needs at least two samples".into());
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return bad("samples must be finite".into());
                }
            }
            Family::OddExtension { base } => {
                let (lo, hi) = abs_range(d);
                require_covers(name, base, lo, hi)?;
                if d.contains(0.0) {
                    let at0 = base.eval(0.0)?;
                    if at0.abs() > GLUE_CONTINUITY_TOL {
                        return bad(format!("base(0) = {at0} must vanish"));
                    }
                }
            }
            Family::PointSymmetricExtension { base, center } => {
                if !d.contains(*center) {
                    return bad(format!("center {center} outside the domain"));
                }
                // 2c - lo can land an ulp or two past c + r; that much is
                // absorbed by clamping in `eval_inner`.
                let far = (2.0 * center - d.lo()).max(d.hi());
                let slack = 8.0 * f64::EPSILON * far.abs().max(center.abs()).max(1.0);
                require_covers(name, base, *center, far.min(base.domain().hi().max(far - slack)))?;
            }
            Family::Chord { p1, p2 } => {
                if [p1.0, p1.1, p2.0, p2.1].iter().any(|v| !v.is_finite()) {
                    return bad("points must be finite".into());
                }
                if p1.0 == p2.0 {
                    return bad("points must have distinct abscissae".into());
                }
            }
            Family::Glue { left, right, split } => {
                if !d.contains(*split) {
                    return bad(format!("split {split} outside the domain"));
                }
                require_covers(name, left, d.lo(), *split)?;
                require_covers(name, right, *split, d.hi())?;
                let l = left.eval(*split)?;
                let r = right.eval(*split)?;
                let scale = l.abs().max(r.abs()).max(1.0);
                if (l - r).abs() > GLUE_CONTINUITY_TOL * scale {
                    return bad(format!("discontinuous at split {split}: {l} vs {r}"));
                }
            }
            Family::Reflect { base } => {
                require_covers(name, base, -d.hi(), -d.lo())?;
            }
            Family::LinearCombination { terms } => {
                if terms.is_empty() {
                    return bad("needs at least one term".into());
                }
                for (coef, term) in terms {
                    if !coef.is_finite() {
                        return bad("coefficients must be finite".into());
                    }
                    require_covers(name, term, d.lo(), d.hi())?;
                }
            }
        }
        Ok(())
    }

    fn eval_inner(&self, x: f64) -> Result<f64> {
        let y = match &self.family {
            Family::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Family::Tan => x.tan(),
            Family::OddPower { exponent } => {
                if x == 0.0 {
                    0.0
                } else {
                    x.signum() * x.abs().powf(*exponent)
                }
            }
            Family::PiecewiseLinear { knots } => interpolate_knots(knots, x),
            Family::GridSamples { values } => {
                let n = values.len();
                let t = (x - self.domain.lo()) / self.domain.length() * (n - 1) as f64;
                let i = (t.floor().max(0.0) as usize).min(n - 2);
                let frac = (t - i as f64).clamp(0.0, 1.0);
                (1.0 - frac) * values[i] + frac * values[i + 1]
            }
            Family::OddExtension { base } => {
                if x > 0.0 {
                    base.eval(x)?
                } else if x < 0.0 {
                    -base.eval(-x)?
                } else {
                    0.0
                }
            }
            Family::PointSymmetricExtension { base, center } => {
                if x >= *center {
                    base.eval(x)?
                } else {
                    let mirror = (2.0 * center - x).min(base.domain().hi());
                    2.0 * base.eval(*center)? - base.eval(mirror)?
                }
            }
            Family::Chord { p1, p2 } => {
                let t = (x - p1.0) / (p2.0 - p1.0);
                (1.0 - t) * p1.1 + t * p2.1
            }
            Family::Glue { left, right, split } => {
                if x < *split {
                    left.eval(x)?
                } else {
                    right.eval(x)?
                }
            }
            Family::Reflect { base } => base.eval(-x)?,
            Family::LinearCombination { terms } => {
                let mut acc = 0.0;
                for (coef, term) in terms {
                    acc += coef * term.eval(x)?;
                }
                acc
            }
        };
        finite_at(x, y)
    }

    fn collect_breakpoints(&self, out: &mut Vec<f64>) {
        match &self.family {
            Family::Polynomial { .. } | Family::Tan | Family::Chord { .. } => {}
            Family::OddPower { .. } => out.push(0.0),
            Family::PiecewiseLinear { knots } => out.extend(knots.iter().map(|k| k.0)),
            Family::GridSamples { values } => {
                let n = values.len();
                out.extend((0..n).map(|i| self.grid_abscissa(i, n)));
            }
            Family::OddExtension { base } => {
                out.push(0.0);
                for t in base.breakpoints() {
                    out.push(t);
                    out.push(-t);
                }
            }
            Family::PointSymmetricExtension { base, center } => {
                out.push(*center);
                for t in base.breakpoints() {
                    out.push(t);
                    out.push(2.0 * center - t);
                }
            }
            Family::Glue { left, right, split } => {
                out.push(*split);
                out.extend(left.breakpoints().into_iter().filter(|t| t < split));
                out.extend(right.breakpoints().into_iter().filter(|t| t > split));
            }
            Family::Reflect { base } => out.extend(base.breakpoints().into_iter().map(|t| -t)),
            Family::LinearCombination { terms } => {
                for (_, term) in terms {
                    term.collect_breakpoints(out);
                }
            }
        }
    }
}

impl RealFunction for FunctionSpec {
    fn domain(&self) -> Interval {
        self.domain
    }

    fn eval(&self, x: f64) -> Result<f64> {
        check_in_domain(self.domain, x)?;
        self.eval_inner(x)
    }

    /// Breakpoints inside the domain, sorted and deduplicated.
    fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breakpoints(&mut out);
        let d = self.domain;
        out.retain(|t| t.is_finite() && d.contains(*t));
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}

fn abs_range(d: Interval) -> (f64, f64) {
    let hi = d.lo().abs().max(d.hi().abs());
    let lo = if d.contains(0.0) {
        0.0
    } else {
        d.lo().abs().min(d.hi().abs())
    };
    (lo, hi)
}

fn require_covers(owner: &str, child: &FunctionSpec, lo: f64, hi: f64) -> Result<()> {
    let cd = child.domain();
    if cd.lo() <= lo && hi <= cd.hi() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{owner}: inner {} has domain [{}, {}] but must cover [{lo}, {hi}]",
            child.family.name(),
            cd.lo(),
            cd.hi()
        )))
    }
}

fn interpolate_knots(knots: &[(f64, f64)], x: f64) -> f64 {
    // Last knot with abscissa <= x; with a duplicated abscissa this is the
    // right-hand value, so the function is right-continuous at jumps.
    let idx = knots.partition_point(|k| k.0 <= x);
    if idx == 0 {
        return knots[0].1;
    }
    let i = idx - 1;
    if i + 1 == knots.len() {
        return knots[i].1;
    }
    let (x0, y0) = knots[i];
    let (x1, y1) = knots[i + 1];
    let t = (x - x0) / (x1 - x0);
    (1.0 - t) * y0 + t * y1
}

// ---- JSON representation -------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum FamilyName {
    Polynomial,
    Tan,
    OddPower,
    PiecewiseLinear,
    GridSamples,
    OddExtension,
    PointSymmetricExtension,
    Chord,
    Glue,
    Reflect,
    LinearCombination,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    knots: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    base: Option<Box<FunctionSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p1: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p2: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    left: Option<Box<FunctionSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    right: Option<Box<FunctionSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    split: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<(f64, FunctionSpec)>>,
}

impl RawParams {
    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        macro_rules! mark {
            ($($f:ident),*) => { $( if self.$f.is_some() { out.push(stringify!($f)); } )* };
        }
        mark!(coeffs, exponent, knots, values, base, center, p1, p2, left, right, split, terms);
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunctionSpec {
    family: FamilyName,
    #[serde(default)]
    params: RawParams,
    domain: Interval,
}

fn take<T>(family: &str, field: &str, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| Error::invalid(format!("{family}: missing params.{field}")))
}

impl TryFrom<RawFunctionSpec> for FunctionSpec {
    type Error = Error;

    fn try_from(raw: RawFunctionSpec) -> Result<Self> {
        let allowed: &[&str] = match raw.family {
            FamilyName::Polynomial => &["coeffs"],
            FamilyName::Tan => &[],
            FamilyName::OddPower => &["exponent"],
            FamilyName::PiecewiseLinear => &["knots"],
            FamilyName::GridSamples => &["values"],
            FamilyName::OddExtension | FamilyName::Reflect => &["base"],
            FamilyName::PointSymmetricExtension => &["base", "center"],
            FamilyName::Chord => &["p1", "p2"],
            FamilyName::Glue => &["left", "right", "split"],
            FamilyName::LinearCombination => &["terms"],
        };
        let p = raw.params;
        if let Some(extra) = p.present().into_iter().find(|f| !allowed.contains(f)) {
            return Err(Error::invalid(format!(
                "params.{extra} is not a parameter of family {:?}",
                raw.family
            )));
        }
        let n = serde_json::to_string(&raw.family).unwrap_or_default();
        let n = n.trim_matches('"');
        let family = match raw.family {
            FamilyName::Polynomial => Family::Polynomial {
                coeffs: take(n, "coeffs", p.coeffs)?,
            },
            FamilyName::Tan => Family::Tan,
            FamilyName::OddPower => Family::OddPower {
                exponent: take(n, "exponent", p.exponent)?,
            },
            FamilyName::PiecewiseLinear => Family::PiecewiseLinear {
                knots: take(n, "knots", p.knots)?
                    .into_iter()
                    .map(|[x, y]| (x, y))
                    .collect(),
            },
            FamilyName::GridSamples => Family::GridSamples {
                values: take(n, "values", p.values)?,
            },
            FamilyName::OddExtension => Family::OddExtension {
                base: take(n, "base", p.base)?,
            },
            FamilyName::PointSymmetricExtension => Family::PointSymmetricExtension {
                base: take(n, "base", p.base)?,
                center: take(n, "center", p.center)?,
            },
            FamilyName::Chord => {
                let [x1, y1] = take(n, "p1", p.p1)?;
                let [x2, y2] = take(n, "p2", p.p2)?;
                Family::Chord {
                    p1: (x1, y1),
                    p2: (x2, y2),
                }
            }
            FamilyName::Glue => Family::Glue {
                left: take(n, "left", p.left)?,
                right: take(n, "right", p.right)?,
                split: take(n, "split", p.split)?,
            },
            FamilyName::Reflect => Family::Reflect {
                base: take(n, "base", p.base)?,
            },
            FamilyName::LinearCombination => Family::LinearCombination {
                terms: take(n, "terms", p.terms)?,
            },
        };
        FunctionSpec::new(family, raw.domain)
    }
}

impl From<FunctionSpec> for RawFunctionSpec {
    fn from(spec: FunctionSpec) -> Self {
        let mut params = RawParams::default();
        let family = match spec.family {
            Family::Polynomial { coeffs } => {
                params.coeffs = Some(coeffs);
                FamilyName::Polynomial
            }
            Family::Tan => FamilyName::Tan,
            Family::OddPower { exponent } => {
                params.exponent = Some(exponent);
                FamilyName::OddPower
            }
            Family::PiecewiseLinear { knots } => {
                params.knots = Some(knots.into_iter().map(|(x, y)| [x, y]).collect());
                FamilyName::PiecewiseLinear
            }
            Family::GridSamples { values } => {
                params.values = Some(values);
                FamilyName::GridSamples
            }
            Family::OddExtension { base } => {
                params.base = Some(base);
                FamilyName::OddExtension
            }
            Family::PointSymmetricExtension { base, center } => {
                params.base = Some(base);
                params.center = Some(center);
                FamilyName::PointSymmetricExtension
            }
            Family::Chord { p1, p2 } => {
                params.p1 = Some([p1.0, p1.1]);
                params.p2 = Some([p2.0, p2.1]);
                FamilyName::Chord
            }
            Family::Glue { left, right, split } => {
                params.left = Some(left);
                params.right = Some(right);
                params.split = Some(split);
                FamilyName::Glue
            }
            Family::Reflect { base } => {
                params.base = Some(base);
                FamilyName::Reflect
            }
            Family::LinearCombination { terms } => {
                params.terms = Some(terms);
                FamilyName::LinearCombination
            }
        };
        RawFunctionSpec {
            family,
            params,
            domain: spec.domain,
        }
    }
}
