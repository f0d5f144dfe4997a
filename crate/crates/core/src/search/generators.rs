//! Random instances built from constructive families, so that the
//! hypotheses of each verifier hold by construction most of the time.
//!
//! About [`BOUNDARY_BIAS`] of the draws are pushed onto a constraint
//! boundary (affine pieces, barycenter exactly on the window edge, sum
//! conditions at zero) because equality cases live there.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;

use super::{TrialRng, BOUNDARY_BIAS};
use crate::error::Result;
use crate::function::{FunctionSpec, RealFunction};
use crate::jensen::Theorem;
use crate::job::{Command, Job};
use crate::measure::{Interval, SignedMeasure};

const TAN_LIMIT: f64 = FRAC_PI_2 - 1e-2;

fn boundary(rng: &mut TrialRng) -> bool {
    rng.gen_bool(BOUNDARY_BIAS)
}

/// Ascending coefficients in `x` of `sum q[k] (x - origin)^k`.
pub fn shifted_polynomial(q: &[f64], origin: f64) -> Vec<f64> {
    let mut out = vec![0.0; q.len()];
    for (k, &qk) in q.iter().enumerate() {
        let mut binom = 1.0;
        for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
            *slot += qk * binom * (-origin).powi((k - j) as i32);
            binom *= (k - j) as f64 / (j + 1) as f64;
        }
    }
    out
}

fn sorted_uniform(rng: &mut TrialRng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    xs.sort_by(f64::total_cmp);
    xs
}

/// A convex function on `[origin, end]` taking `value` at `origin`. Affine
/// with probability [`BOUNDARY_BIAS`].
pub fn convex_from(rng: &mut TrialRng, origin: f64, end: f64, value: f64) -> Result<FunctionSpec> {
    let domain = Interval::new(origin, end)?;
    let reach = end - origin;
    let slope = rng.gen_range(-1.0..=1.0);
    if boundary(rng) {
        return FunctionSpec::polynomial(shifted_polynomial(&[value, slope], origin), domain);
    }
    match rng.gen_range(0..3) {
        0 => {
            let mut q = vec![value, slope];
            for k in 2..=4 {
                let scale = reach.powi(1 - k);
                q.push(if rng.gen_bool(0.5) { rng.gen_range(0.0..=1.0) * scale } else { 0.0 });
            }
            FunctionSpec::polynomial(shifted_polynomial(&q, origin), domain)
        }
        1 => {
            let m = rng.gen_range(1..=4);
            let xs = sorted_uniform(rng, m, origin, end);
            let slopes = sorted_uniform(rng, m + 1, -1.0, 2.0);
            let mut knots = vec![(origin, value)];
            let mut y = value;
            let mut x_prev = origin;
            for (x, s) in xs.iter().chain(std::iter::once(&end)).zip(&slopes) {
                y += s * (x - x_prev);
                x_prev = *x;
                knots.push((*x, y));
            }
            knots.dedup_by(|u, v| u.0 == v.0);
            if knots.len() < 2 {
                knots.push((end, value));
            }
            FunctionSpec::piecewise_linear(knots, domain)
        }
        _ if origin == 0.0 && value == 0.0 => {
            let p = rng.gen_range(1.0..=4.0);
            FunctionSpec::linear_combination(
                vec![
                    (rng.gen_range(0.1..=1.0), FunctionSpec::odd_power(p, domain)?),
                    (slope, FunctionSpec::identity(domain)),
                ],
                domain,
            )
        }
        _ => {
            let q = [value, slope, rng.gen_range(0.0..=1.0) / reach];
            FunctionSpec::polynomial(shifted_polynomial(&q, origin), domain)
        }
    }
}

/// An odd function on `[-reach, reach]` that is convex on `[0, reach]`.
pub fn odd_convex(rng: &mut TrialRng, reach: f64) -> Result<FunctionSpec> {
    let domain = Interval::new(-reach, reach)?;
    if reach < TAN_LIMIT && rng.gen_bool(0.25) {
        return FunctionSpec::tan(domain);
    }
    FunctionSpec::odd_extension(convex_from(rng, 0.0, reach, 0.0)?, domain)
}

/// Atoms satisfying Steffensen's condition: partial sums drawn in
/// `[0, total]`, so some weights are negative.
pub fn steffensen_atoms(rng: &mut TrialRng, iv: Interval, n: usize) -> Vec<(f64, f64)> {
    let mut xs = sorted_uniform(rng, n, iv.lo(), iv.hi());
    if boundary(rng) {
        xs[0] = iv.lo();
        xs[n - 1] = iv.hi();
    }
    let total = rng.gen_range(0.2..=2.0);
    let mut prev = 0.0;
    let mut atoms = Vec::with_capacity(n);
    for (k, x) in xs.into_iter().enumerate() {
        let s = if k + 1 == n {
            total
        } else if boundary(rng) {
            if rng.gen_bool(0.5) {
                0.0
            } else {
                total
            }
        } else {
            rng.gen_range(0.0..=total)
        };
        atoms.push((x, s - prev));
        prev = s;
    }
    atoms.retain(|a| a.1 != 0.0);
    atoms
}

fn positive_atoms(rng: &mut TrialRng, iv: Interval, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| (rng.gen_range(iv.lo()..=iv.hi()), rng.gen_range(0.05..=1.0)))
        .collect()
}

/// Arbitrary signed atoms; may or may not be Steffensen-Popoviciu.
fn signed_atoms(rng: &mut TrialRng, iv: Interval, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| (rng.gen_range(iv.lo()..=iv.hi()), rng.gen_range(-1.0..=1.0)))
        .filter(|a| a.1 != 0.0)
        .collect()
}

fn moments(atoms: &[(f64, f64)]) -> (f64, f64) {
    atoms.iter().fold((0.0, 0.0), |(m, s), (x, w)| (m + w, s + w * x))
}

/// Appends a positive atom at `iv.hi()` so the barycenter reaches `target`
/// (exactly on the boundary draws). A trailing positive atom keeps
/// Steffensen's condition.
fn push_barycenter_right(rng: &mut TrialRng, atoms: &mut Vec<(f64, f64)>, iv: Interval, target: f64) {
    let (mass, first) = moments(atoms);
    if mass <= 0.0 || target >= iv.hi() {
        return;
    }
    let bary = first / mass;
    if bary >= target {
        return;
    }
    let mut w = mass * (target - bary) / (iv.hi() - target);
    if !boundary(rng) {
        w *= 1.0 + rng.gen_range(0.0..=1.0);
    }
    atoms.push((iv.hi(), w));
}

fn normalize(atoms: &mut [(f64, f64)]) {
    let (mass, _) = moments(atoms);
    if mass > 0.0 {
        for a in atoms.iter_mut() {
            a.1 /= mass;
        }
    }
}

/// Density `(x - lo)^k` normalized to unit mass.
fn power_density(iv: Interval, k: usize) -> Result<FunctionSpec> {
    let mut q = vec![0.0; k + 1];
    q[k] = (k + 1) as f64 / iv.length().powi(k as i32 + 1);
    FunctionSpec::polynomial(shifted_polynomial(&q, iv.lo()), iv)
}

fn random_interval(rng: &mut TrialRng) -> Result<Interval> {
    let a = rng.gen_range(-2.0..=1.0);
    Interval::new(a, a + rng.gen_range(0.5..=3.0))
}

/// Mixed convex instance: point symmetric about `c`, convex right of it,
/// unit-mass measure with barycenter in `[2c - a, b]`.
pub fn thm1_job(rng: &mut TrialRng) -> Result<Job> {
    let mut job = Job::new(Command::CheckJensen);
    job.theorem = Some(Theorem::Thm1);
    let (iv, c, mut f) = if rng.gen_bool(0.1) {
        let u = rng.gen_range(0.05..=1.2);
        let iv = Interval::new(-u, rng.gen_range(u..=1.5))?;
        (iv, 0.0, FunctionSpec::tan(iv)?)
    } else {
        let iv = random_interval(rng)?;
        let c = match rng.gen_range(0..10) {
            0 => iv.lo(),
            1 => iv.midpoint(),
            _ => rng.gen_range(iv.lo()..=iv.midpoint()),
        };
        let v0 = rng.gen_range(-1.0..=1.0);
        // 2c - lo can round past hi when c is the midpoint.
        let base = convex_from(rng, c, iv.hi().max(2.0 * c - iv.lo()), v0)?;
        (iv, c, FunctionSpec::point_symmetric_extension(base, c, iv)?)
    };
    let concave = rng.gen_bool(0.2);
    if concave {
        f = f.negated();
    }
    let reflected = 2.0 * c - iv.lo();
    let measure = if rng.gen_bool(0.05) {
        SignedMeasure::density(iv, power_density(iv, rng.gen_range(0..=6))?)?
    } else if reflected >= iv.hi() {
        SignedMeasure::dirac(iv.hi(), iv)?
    } else {
        let n = rng.gen_range(1..=6);
        let mut atoms = if rng.gen_bool(0.5) {
            positive_atoms(rng, iv, n)
        } else {
            steffensen_atoms(rng, iv, n)
        };
        push_barycenter_right(rng, &mut atoms, iv, reflected);
        normalize(&mut atoms);
        SignedMeasure::discrete(atoms, iv)?
    };
    job.function = Some(f);
    job.measure = Some(measure);
    job.params.c = Some(c);
    job.params.concave = Some(concave);
    Ok(job)
}

/// Nonnegative weight on `[a, b]` meeting the monotone or relaxed hypothesis.
pub fn admissible_weight(rng: &mut TrialRng, a: f64, b: f64, relaxed: bool) -> Result<FunctionSpec> {
    let iv = Interval::new(a, b)?;
    if relaxed && a < 0.0 && -a < b {
        let h = rng.gen_range(0.01..=2.0);
        let m = rng.gen_range(0..=3);
        let mut knots = vec![(a, rng.gen_range(0.0..=h))];
        for x in sorted_uniform(rng, m, a, -a) {
            knots.push((x, rng.gen_range(0.0..=h)));
        }
        knots.push((-a, if boundary(rng) { h } else { rng.gen_range(0.0..=h) }));
        knots.push((-a, h));
        for x in sorted_uniform(rng, m, -a, b) {
            knots.push((x, h + rng.gen_range(0.0..=2.0)));
        }
        knots.push((b, h + rng.gen_range(0.0..=2.0)));
        dedup_jumps(&mut knots);
        return FunctionSpec::piecewise_linear(knots, iv);
    }
    if rng.gen_bool(0.5) {
        let q: Vec<f64> = (0..4)
            .map(|k| if k == 0 { rng.gen_range(0.01..=1.0) } else { rng.gen_range(0.0..=1.0) })
            .collect();
        return FunctionSpec::polynomial(shifted_polynomial(&q, a), iv);
    }
    let m = rng.gen_range(0..=4);
    let mut xs = vec![a];
    xs.extend(sorted_uniform(rng, m, a, b));
    xs.push(b);
    let mut values = sorted_uniform(rng, xs.len(), 0.01, 2.0);
    if boundary(rng) {
        let v = values[0];
        values.iter_mut().for_each(|y| *y = v);
    }
    let mut knots: Vec<(f64, f64)> = xs.into_iter().zip(values).collect();
    if m > 0 && rng.gen_bool(0.3) {
        // A jump up at an interior knot.
        let (x, y) = knots[1];
        knots.insert(2, (x, y + rng.gen_range(0.0..=1.0)));
        for k in &mut knots[3..] {
            k.1 += 1.0;
        }
    }
    dedup_jumps(&mut knots);
    FunctionSpec::piecewise_linear(knots, iv)
}

/// Keeps at most two knots per abscissa: the first and the last.
fn dedup_jumps(knots: &mut Vec<(f64, f64)>) {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(knots.len());
    for &k in knots.iter() {
        let n = out.len();
        if n >= 2 && out[n - 1].0 == k.0 && out[n - 2].0 == k.0 {
            out[n - 1] = k;
        } else {
            out.push(k);
        }
    }
    *knots = out;
}

pub fn cor1_job(rng: &mut TrialRng) -> Result<Job> {
    let b = rng.gen_range(0.5..=2.0);
    let a = if boundary(rng) {
        -b / 3.0
    } else {
        rng.gen_range(-b / 3.0..b)
    };
    let relaxed = rng.gen_bool(0.3);
    let mut job = Job::new(Command::CheckJensen);
    job.theorem = Some(Theorem::Cor1);
    job.function = Some(odd_convex(rng, b)?);
    job.weight = Some(admissible_weight(rng, a, b, relaxed)?);
    job.params.a = Some(a);
    job.params.b = Some(b);
    job.params.relaxed = Some(relaxed);
    Ok(job)
}

/// Points in `[lo, hi]` (with `lo < 0 < hi`) shifted right until `margin(points) >= 0`.
/// `slope` is how fast the margin grows per unit shift.
fn repaired_points(
    rng: &mut TrialRng,
    n: usize,
    lo: f64,
    hi: f64,
    slope: f64,
    margin: impl Fn(&[f64]) -> f64,
) -> Vec<f64> {
    let mut points: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    let m = margin(&points);
    if m < 0.0 {
        let mut shift = -m / slope;
        if !boundary(rng) {
            shift *= 1.0 + rng.gen_range(0.0..=0.5);
        }
        let top = points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        // Shrink toward the origin first if the shift would leave the domain.
        // Margins are positively homogeneous, so scaling keeps them >= 0.
        if top + shift > hi {
            let scale = (hi / (top + shift)).min(1.0);
            points.iter_mut().for_each(|x| *x *= scale);
            shift *= scale;
        }
        points.iter_mut().for_each(|x| *x = (*x + shift).min(hi));
    }
    points
}

fn dirichlet(rng: &mut TrialRng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

pub fn cor2_job(rng: &mut TrialRng) -> Result<Job> {
    let reach = rng.gen_range(0.5..=1.5);
    let n = rng.gen_range(1..=6);
    let weights = dirichlet(rng, n);
    let w = weights.clone();
    let points = repaired_points(rng, n, -reach, reach, 2.0, move |p| {
        let mean: f64 = p.iter().zip(&w).map(|(x, w)| x * w).sum();
        mean + p.iter().copied().fold(f64::INFINITY, f64::min)
    });
    let mut job = Job::new(Command::CheckJensen);
    job.theorem = Some(Theorem::Cor2);
    job.function = Some(odd_convex(rng, reach)?);
    job.params.points = Some(points);
    job.params.weights = Some(weights);
    Ok(job)
}

pub fn cor3_job(rng: &mut TrialRng) -> Result<Job> {
    let n = rng.gen_range(2..=6);
    let nf = n as f64;
    let margin = move |p: &[f64]| p.iter().sum::<f64>() + (nf - 2.0) * p.iter().copied().fold(f64::INFINITY, f64::min);
    let (f, points) = if rng.gen_bool(0.5) {
        let guard = crate::function::TAN_POLE_GUARD;
        let dom = Interval::new(-PI / 6.0 + guard, FRAC_PI_2 - 2.0 * guard)?;
        let points = repaired_points(rng, n, dom.lo(), 1.5, 2.0 * nf - 2.0, margin);
        (FunctionSpec::tan(dom)?, points)
    } else {
        let reach = rng.gen_range(0.5..=1.5);
        (odd_convex(rng, reach)?, repaired_points(rng, n, -reach, reach, 2.0 * nf - 2.0, margin))
    };
    let mut job = Job::new(Command::CheckJensen);
    job.theorem = Some(Theorem::Cor3);
    job.function = Some(f);
    job.params.points = Some(points);
    Ok(job)
}

/// Left almost convex instance with witness `(c, d)` and a measure repaired
/// toward `b_mu >= c` and a nonnegative condition ii.
pub fn thm3_job(rng: &mut TrialRng) -> Result<Job> {
    let (iv, c, d, at_hi, f) = match rng.gen_range(0..4) {
        0 => {
            let iv = Interval::new(-PI / 3.0, PI / 3.0)?;
            (iv, 0.0, PI / 3.0, true, FunctionSpec::tan(iv)?)
        }
        1 => {
            // Convex throughout: any c < d works.
            let iv = random_interval(rng)?;
            let v0 = rng.gen_range(-1.0..=1.0);
            let f = convex_from(rng, iv.lo(), iv.hi(), v0)?;
            let c = rng.gen_range(iv.lo()..iv.hi());
            let d = c + (iv.hi() - c) * rng.gen_range(0.05..=1.0);
            (iv, c, d, d == iv.hi(), f.restrict(iv)?)
        }
        2 => {
            // Point symmetric about c with d = 2c - a.
            let iv = random_interval(rng)?;
            let c = iv.lo() + (iv.midpoint() - iv.lo()) * rng.gen_range(0.05..=1.0);
            let v0 = rng.gen_range(-1.0..=1.0);
        // 2c - lo can round past hi when c is the midpoint.
        let base = convex_from(rng, c, iv.hi().max(2.0 * c - iv.lo()), v0)?;
            let f = FunctionSpec::point_symmetric_extension(base, c, iv)?;
            let d = 2.0 * c - iv.lo();
            (iv, c, d, d >= iv.hi(), f)
        }
        _ => {
            // Convex right part glued to (chord + nonnegative bump) on the left.
            let iv = random_interval(rng)?;
            let c = rng.gen_range(iv.lo()..iv.hi());
            let d = c + (iv.hi() - c) * rng.gen_range(0.05..=1.0);
            let fc = rng.gen_range(-1.0..=1.0);
            let right = convex_from(rng, c, iv.hi(), fc)?;
            let slope = (right.eval(d)? - fc) / (d - c);
            let bump = [0.0, -rng.gen_range(0.0..=1.0), 0.0, -rng.gen_range(0.0..=1.0)];
            let q: Vec<f64> = bump
                .iter()
                .enumerate()
                .map(|(k, v)| match k {
                    0 => fc,
                    1 => slope + v,
                    _ => *v,
                })
                .collect();
            let left = FunctionSpec::polynomial(shifted_polynomial(&q, c), Interval::new(iv.lo(), c)?)?;
            (iv, c, d, d == iv.hi(), FunctionSpec::glue(left, right, c, iv)?)
        }
    };

    let measure = if rng.gen_bool(0.05) {
        SignedMeasure::density(iv, power_density(iv, rng.gen_range(0..=6))?)?
    } else {
        let n = rng.gen_range(1..=6);
        let mut atoms = if rng.gen_bool(0.2) {
            signed_atoms(rng, iv, n)
        } else {
            steffensen_atoms(rng, iv, n)
        };
        let fc = f.eval(c)?;
        let fd = f.eval(d)?;
        let phi = |x: f64| -> Result<f64> { Ok((f.eval(x)? - fc) * (d - c) - (fd - fc) * (x - c)) };
        for _ in 0..3 {
            push_barycenter_right(rng, &mut atoms, iv, c);
            let cond: f64 = atoms
                .iter()
                .filter(|a| a.0 <= d)
                .map(|&(x, w)| Ok(w * phi(x)?))
                .sum::<Result<f64>>()?;
            let at_lo = phi(iv.lo())?;
            if cond >= 0.0 || at_lo <= 0.0 {
                break;
            }
            // A leading positive atom keeps Steffensen's condition.
            atoms.insert(0, (iv.lo(), -cond / at_lo * (1.0 + rng.gen_range(0.0..=0.5))));
        }
        if atoms.is_empty() {
            atoms.push((iv.hi(), 1.0));
        }
        SignedMeasure::discrete(atoms, iv)?
    };

    let mut job = Job::new(Command::CheckJensen);
    job.theorem = Some(Theorem::Thm3);
    job.function = Some(f);
    job.measure = Some(measure);
    job.params.c = Some(c);
    job.params.d = Some(d);
    job.params.allow_d_at_hi = Some(at_hi);
    Ok(job)
}

pub fn generate(theorem: Theorem, rng: &mut TrialRng) -> Result<Job> {
    match theorem {
        Theorem::Thm1 => thm1_job(rng),
        Theorem::Cor1 => cor1_job(rng),
        Theorem::Cor2 => cor2_job(rng),
        Theorem::Cor3 => cor3_job(rng),
        Theorem::Thm3 => thm3_job(rng),
    }
}
