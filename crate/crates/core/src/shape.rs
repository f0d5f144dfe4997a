//! Structural hypotheses on functions, decided on grids.
//!
//! Every check produces a curve of local margins (nonnegative where the
//! property holds) and a [`ShapeVerdict`] summarising its minimum. Margins
//! are raw quantities: second differences for convexity, symmetry defects,
//! `f - h` for chord dominance, value and increment slacks for weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{FunctionSpec, RealFunction};
use crate::measure::Interval;

pub const DEFAULT_GRID: usize = 513;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeVerdict {
    pub satisfied: bool,
    pub worst_point: f64,
    pub worst_margin: f64,
    pub grid_size: usize,
}

/// Local margins `(x, margin)` behind a verdict.
pub type MarginCurve = Vec<(f64, f64)>;

pub fn summarize(curve: &[(f64, f64)], tol: f64) -> ShapeVerdict {
    let mut worst = (f64::NAN, f64::INFINITY);
    for &(x, m) in curve {
        if m < worst.1 {
            worst = (x, m);
        }
    }
    if curve.is_empty() {
        worst.1 = 0.0;
    }
    ShapeVerdict {
        satisfied: worst.1 >= -tol,
        worst_point: worst.0,
        worst_margin: worst.1,
        grid_size: curve.len(),
    }
}

fn require_within(f: &FunctionSpec, interval: Interval) -> Result<()> {
    let d = f.domain();
    if d.contains_interval(interval) {
        Ok(())
    } else {
        Err(Error::Domain {
            point: if interval.lo() < d.lo() {
                interval.lo()
            } else {
                interval.hi()
            },
            reason: format!(
                "interval [{}, {}] is not inside the domain [{}, {}]",
                interval.lo(),
                interval.hi(),
                d.lo(),
                d.hi()
            ),
        })
    }
}

/// Second differences on a uniform grid, or exact slope increments when `f`
/// is piecewise linear.
pub fn convexity_curve(f: &FunctionSpec, interval: Interval, grid: usize) -> Result<MarginCurve> {
    require_within(f, interval)?;
    if grid < 3 {
        return Err(Error::invalid("convexity grid needs at least 3 points"));
    }
    if let Some(knots) = f.knots() {
        return slope_increments(f, &knots, interval);
    }
    let xs = interval.grid(grid);
    let ys = xs.iter().map(|&x| f.eval(x)).collect::<Result<Vec<_>>>()?;
    Ok((1..grid - 1)
        .map(|i| (xs[i], ys[i - 1] - 2.0 * ys[i] + ys[i + 1]))
        .collect())
}

fn slope_increments(
    f: &FunctionSpec,
    knots: &[(f64, f64)],
    interval: Interval,
) -> Result<MarginCurve> {
    let (lo, hi) = (interval.lo(), interval.hi());
    let mut pts = vec![(lo, f.eval(lo)?)];
    let mut curve = Vec::new();
    for w in knots.windows(2) {
        if w[0].0 == w[1].0 && w[0].0 > lo && w[0].0 < hi {
            // A jump strictly inside the interval rules out convexity.
            curve.push((w[0].0, -(w[1].1 - w[0].1).abs()));
        }
    }
    pts.extend(
        knots
            .iter()
            .filter(|k| k.0 > lo && k.0 < hi)
            .map(|k| (k.0, f.eval(k.0).unwrap_or(k.1))),
    );
    pts.push((hi, f.eval(hi)?));
    pts.dedup_by(|b, a| a.0 == b.0);
    let slopes: Vec<(f64, f64)> = pts
        .windows(2)
        .map(|w| (w[0].0, (w[1].1 - w[0].1) / (w[1].0 - w[0].0)))
        .collect();
    for (i, w) in slopes.windows(2).enumerate() {
        curve.push((pts[i + 1].0, w[1].1 - w[0].1));
    }
    curve.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(curve)
}

pub fn check_convex_on(
    f: &FunctionSpec,
    interval: Interval,
    grid: usize,
    tol: f64,
) -> Result<ShapeVerdict> {
    Ok(summarize(&convexity_curve(f, interval, grid)?, tol))
}

/// `-|f(c - x) + f(c + x) - 2 f(c)|` for offsets `x` keeping both points in
/// `interval`, reported at `c + x`.
pub fn symmetry_curve(
    f: &FunctionSpec,
    c: f64,
    interval: Interval,
    grid: usize,
) -> Result<MarginCurve> {
    require_within(f, interval)?;
    if !interval.contains(c) {
        return Err(Error::Domain {
            point: c,
            reason: "symmetry center outside the interval".into(),
        });
    }
    if grid < 2 {
        return Err(Error::invalid("symmetry grid needs at least 2 points"));
    }
    let reach = (c - interval.lo()).min(interval.hi() - c);
    let fc = f.eval(c)?;
    if reach <= 0.0 {
        return Ok(vec![(c, 0.0)]);
    }
    (0..grid)
        .map(|j| {
            let x = reach * j as f64 / (grid - 1) as f64;
            let left = f.eval((c - x).max(interval.lo()))?;
            let right = f.eval((c + x).min(interval.hi()))?;
            Ok((c + x, -(left + right - 2.0 * fc).abs()))
        })
        .collect()
}

pub fn check_point_symmetry(
    f: &FunctionSpec,
    c: f64,
    interval: Interval,
    grid: usize,
    tol: f64,
) -> Result<ShapeVerdict> {
    Ok(summarize(&symmetry_curve(f, c, interval, grid)?, tol))
}

/// The affine function through `(c, f(c))` and `(d, f(d))`, on `f`'s domain.
pub fn chord(f: &FunctionSpec, c: f64, d: f64) -> Result<FunctionSpec> {
    if !(c < d) {
        return Err(Error::invalid(format!("chord needs c < d, got c = {c}, d = {d}")));
    }
    FunctionSpec::chord((c, f.eval(c)?), (d, f.eval(d)?), f.domain())
}

/// The convexification `g`: the chord through `(chord_from, f(chord_from))`
/// and `(split, f(split))` on `[lo, split]`, glued to `f` on `[split, hi]`.
///
/// Mixed-convexity callers pass `chord_from = lo`, `split = 2c - lo`;
/// almost-convexity callers pass `chord_from = c`, `split = d`. The result
/// is checked for convexity and rejected with [`Error::Construction`] when
/// the check fails.
pub fn build_aux_g(
    f: &FunctionSpec,
    interval: Interval,
    split: f64,
    chord_from: f64,
    grid: usize,
    tol: f64,
) -> Result<FunctionSpec> {
    require_within(f, interval)?;
    if !interval.contains(split) {
        return Err(Error::invalid(format!("split {split} outside the interval")));
    }
    if !(interval.lo() <= chord_from && chord_from <= split) {
        return Err(Error::invalid(format!(
            "chord anchor {chord_from} must lie in [{}, {split}]",
            interval.lo()
        )));
    }
    let restricted = f.restrict(interval)?;
    let g = if split <= chord_from || split == interval.lo() {
        restricted
    } else {
        let h = FunctionSpec::chord(
            (chord_from, f.eval(chord_from)?),
            (split, f.eval(split)?),
            interval,
        )?;
        if split == interval.hi() {
            h
        } else {
            FunctionSpec::glue(h, restricted, split, interval)?
        }
    };
    let verdict = check_convex_on(&g, interval, grid, tol)?;
    if !verdict.satisfied {
        return Err(Error::Construction {
            what: "convexification is not convex".into(),
            worst_point: verdict.worst_point,
            margin: verdict.worst_margin,
        });
    }
    Ok(g)
}

/// The pair `c < d` of the left almost convexity definition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlmostConvexWitness {
    pub c: f64,
    pub d: f64,
    /// Accept `d` equal to the right end of the domain.
    #[serde(default)]
    pub allow_d_at_hi: bool,
}

impl AlmostConvexWitness {
    pub fn new(c: f64, d: f64) -> Self {
        AlmostConvexWitness {
            c,
            d,
            allow_d_at_hi: false,
        }
    }

    pub fn allowing_d_at_hi(c: f64, d: f64) -> Self {
        AlmostConvexWitness {
            c,
            d,
            allow_d_at_hi: true,
        }
    }

    /// Both points interior to `domain`, `c < d`; `d = hi` only when opted in.
    pub fn validate(&self, domain: Interval) -> Result<()> {
        let (lo, hi) = (domain.lo(), domain.hi());
        let d_ok = self.d < hi || (self.allow_d_at_hi && self.d == hi);
        if !(self.c.is_finite() && self.d.is_finite() && lo < self.c && self.c < self.d && d_ok) {
            return Err(Error::invalid(format!(
                "witness (c, d) = ({}, {}) must satisfy {lo} < c < d < {hi}{}",
                self.c,
                self.d,
                if self.allow_d_at_hi { " (d = hi allowed)" } else { "" }
            )));
        }
        Ok(())
    }
}

/// Convexity on `[c, hi]` followed by `f - h` on a grid of `[lo, c]`.
pub fn left_almost_convex_curves(
    f: &FunctionSpec,
    w: &AlmostConvexWitness,
    grid: usize,
) -> Result<(MarginCurve, MarginCurve)> {
    let dom = f.domain();
    w.validate(dom)?;
    let convex = convexity_curve(f, Interval::new(w.c, dom.hi())?, grid)?;
    let h = chord(f, w.c, w.d)?;
    let dominance = Interval::new(dom.lo(), w.c)?
        .grid(grid.max(2))
        .into_iter()
        .map(|x| Ok((x, f.eval(x)? - h.eval(x)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((convex, dominance))
}

/// Reports whichever condition binds: a failing one, else the smaller margin.
pub fn check_left_almost_convex(
    f: &FunctionSpec,
    w: &AlmostConvexWitness,
    grid: usize,
    tol: f64,
) -> Result<ShapeVerdict> {
    let (convex, dominance) = left_almost_convex_curves(f, w, grid)?;
    let a = summarize(&convex, tol);
    let b = summarize(&dominance, tol);
    Ok(match (a.satisfied, b.satisfied) {
        (false, _) => a,
        (true, false) => b,
        _ if a.worst_margin <= b.worst_margin => a,
        _ => b,
    })
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    x: f64,
    y: f64,
    /// Left limit at a jump rather than an attained value.
    left_limit: bool,
}

fn weight_samples(p: &FunctionSpec, interval: Interval, grid: usize, extra: &[f64]) -> Result<Vec<Sample>> {
    let mut xs = interval.grid(grid.max(2));
    xs.extend(p.breakpoints());
    xs.extend_from_slice(extra);
    xs.retain(|x| interval.contains(*x));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut samples = Vec::with_capacity(xs.len());
    let knots = p.knots().unwrap_or_default();
    for x in xs {
        // A duplicated knot abscissa is a jump; its first value is the
        // left limit.
        if let Some(i) = knots.windows(2).position(|w| w[0].0 == x && w[1].0 == x) {
            if x > interval.lo() {
                samples.push(Sample {
                    x,
                    y: knots[i].1,
                    left_limit: true,
                });
            }
        }
        samples.push(Sample {
            x,
            y: p.eval(x)?,
            left_limit: false,
        });
    }
    Ok(samples)
}

/// Local margins for the weight hypotheses on `[a, b]`.
///
/// Strict mode: `p >= 0`, nondecreasing, and `p >= tol` (nonvanishing) on
/// `(-b/3, b]`. Relaxed mode: `p >= 0` and `p(x) <= p(-a) <= p(y)` for
/// `x <= -a <= y`; the comparison is skipped when `-a` falls outside `[a, b]`.
pub fn weight_curve(
    p: &FunctionSpec,
    a: f64,
    b: f64,
    relaxed: bool,
    grid: usize,
    tol: f64,
) -> Result<MarginCurve> {
    if !(b > 0.0) {
        return Err(Error::invalid(format!("weight check needs b > 0, got {b}")));
    }
    let interval = Interval::new(a, b)?;
    require_within(p, interval)?;
    let samples = weight_samples(p, interval, grid, &[-a, -b / 3.0])?;
    let mut curve: MarginCurve = samples.iter().map(|s| (s.x, s.y)).collect();
    if relaxed {
        if interval.contains(-a) {
            let pivot = p.eval(-a)?;
            for s in &samples {
                let on_left = s.x < -a || (s.x == -a && s.left_limit);
                curve.push((s.x, if on_left { pivot - s.y } else { s.y - pivot }));
            }
        }
    } else {
        for w in samples.windows(2) {
            curve.push((w[1].x, w[1].y - w[0].y));
        }
        for s in samples.iter().filter(|s| s.x > -b / 3.0) {
            // Satisfied (margin >= -tol) exactly when p >= tol.
            curve.push((s.x, s.y - 2.0 * tol));
        }
    }
    curve.sort_by(|u, v| u.0.total_cmp(&v.0));
    Ok(curve)
}

pub fn check_weight_admissible(
    p: &FunctionSpec,
    a: f64,
    b: f64,
    relaxed: bool,
    grid: usize,
    tol: f64,
) -> Result<ShapeVerdict> {
    Ok(summarize(&weight_curve(p, a, b, relaxed, grid, tol)?, tol))
}

/// A shape check as named in job files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeCheckKind {
    Convex,
    PointSymmetry,
    LeftAlmostConvex,
    WeightAdmissible,
}
