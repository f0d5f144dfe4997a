use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use super::{SearchResult, BOUNDARY_BIAS};
use crate::error::{Error, Result};

/// Distance kept from `pi/3` on the right, where `tan` is still tame but the
/// half-open range of the triplets must be respected.
pub const TAN_EXAMPLE_GUARD: f64 = 1e-6;

const LO: f64 = -PI / 3.0;
const HI: f64 = PI / 3.0 - TAN_EXAMPLE_GUARD;
const NEAR_ZERO: f64 = -1e-6;
const NEAR_ZERO_KEEP: usize = 16;
const GOLDEN: f64 = 0.618_033_988_749_894_8;
const LINE_EVALS: u64 = 48;
const RANDOM_DIRECTIONS: usize = 6;

/// Margins of the feasible set; all `>= 0` means feasible.
///
/// In order: `x >= -pi/3`, `y - x`, `z - y`, `pi/3 - guard - z`,
/// `2x - y + 3z`, and `pi/(3 sqrt 3) (2 tan x - tan y + 3 tan z) - (2x - y + 3z)`.
pub fn tan_example_constraints(p: [f64; 3]) -> [f64; 6] {
    let [x, y, z] = p;
    let linear = 2.0 * x - y + 3.0 * z;
    let tans = 2.0 * x.tan() - y.tan() + 3.0 * z.tan();
    [x - LO, y - x, z - y, HI - z, linear, PI / (3.0 * 3f64.sqrt()) * tans - linear]
}

/// `tan((2x - y + 3z)/4) - (2 tan x - tan y + 3 tan z)/4`.
pub fn tan_example_objective(p: [f64; 3]) -> f64 {
    let [x, y, z] = p;
    ((2.0 * x - y + 3.0 * z) / 4.0).tan() - (2.0 * x.tan() - y.tan() + 3.0 * z.tan()) / 4.0
}

struct Campaign {
    budget: u64,
    total: u64,
    feasible: u64,
    best: Option<([f64; 3], f64)>,
    near_zero: Vec<Vec<f64>>,
}

impl Campaign {
    fn exhausted(&self) -> bool {
        self.total >= self.budget
    }

    /// Objective when feasible, else `-1 - total violation`; the penalty
    /// keeps line searches pointed back toward the feasible set.
    fn eval(&mut self, p: [f64; 3]) -> f64 {
        self.total += 1;
        let margins = tan_example_constraints(p);
        let violation: f64 = margins.iter().map(|m| (-m).max(0.0)).sum();
        if violation > 0.0 || margins.iter().any(|m| m.is_nan()) {
            return -1.0 - violation;
        }
        self.feasible += 1;
        let v = tan_example_objective(p);
        if v >= NEAR_ZERO && self.near_zero.len() < NEAR_ZERO_KEEP {
            let point = p.to_vec();
            if !self.near_zero.contains(&point) {
                self.near_zero.push(point);
            }
        }
        if self.best.is_none_or(|(_, b)| v > b) {
            self.best = Some((p, v));
        }
        v
    }
}

fn sample(rng: &mut ChaCha12Rng) -> [f64; 3] {
    let mut u = [rng.gen_range(LO..=HI), rng.gen_range(LO..=HI), rng.gen_range(LO..=HI)];
    u.sort_by(f64::total_cmp);
    if rng.gen_bool(BOUNDARY_BIAS) {
        match rng.gen_range(0..3) {
            // 2x - y + 3z just above zero.
            0 => u[2] = (u[1] - 2.0 * u[0] + rng.gen_range(0.0..=0.05)) / 3.0,
            1 => u[1] = u[0],
            _ => u[1] = u[2],
        }
    }
    u
}

/// Golden-section maximization of `t -> eval(p + t dir)` on `[-radius, radius]`.
fn line_search(c: &mut Campaign, p: [f64; 3], dir: [f64; 3], radius: f64) {
    if c.total + 2 > c.budget {
        return;
    }
    let at = |t: f64| [p[0] + t * dir[0], p[1] + t * dir[1], p[2] + t * dir[2]];
    let (mut a, mut b) = (-radius, radius);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = c.eval(at(x1));
    let mut f2 = c.eval(at(x2));
    for _ in 2..LINE_EVALS {
        if c.exhausted() {
            return;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = c.eval(at(x2));
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = c.eval(at(x1));
        }
    }
}

fn unit(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (n > 0.0 && n.is_finite()).then(|| [v[0] / n, v[1] / n, v[2] / n])
}

fn random_direction(rng: &mut ChaCha12Rng) -> [f64; 3] {
    loop {
        let v = [rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)];
        if let Some(u) = unit(v) {
            return u;
        }
    }
}

/// Maximizes the tan objective over the feasible triplets by uniform
/// sampling (60% of the budget) followed by golden-section line searches
/// around the incumbent along the coordinate axes, random directions and
/// the last step taken. Deterministic in `(budget, seed)`.
pub fn optimize_tan_example(budget: u64, seed: u64) -> Result<SearchResult> {
    if budget == 0 {
        return Err(Error::invalid("budget must be at least 1"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut c = Campaign {
        budget,
        total: 0,
        feasible: 0,
        best: None,
        near_zero: Vec::new(),
    };
    let sampling = (budget * 6 / 10).max(1);
    while c.total < sampling {
        let p = sample(&mut rng);
        c.eval(p);
    }

    // Coordinate passes alone stall on a face of the feasible set: at the
    // optimum two constraints are active, and improving moves change several
    // coordinates at once. Random and pattern directions supply those moves.
    let mut radius = 0.1;
    while !c.exhausted() {
        let Some((start, before)) = c.best else {
            let p = sample(&mut rng);
            c.eval(p);
            continue;
        };
        if c.total + 2 > c.budget {
            // Too little left for a line search; spend it on samples.
            let p = sample(&mut rng);
            c.eval(p);
            continue;
        }
        let mut dirs = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        dirs.extend((0..RANDOM_DIRECTIONS).map(|_| random_direction(&mut rng)));
        for dir in dirs {
            let (p, _) = c.best.expect("incumbent exists");
            line_search(&mut c, p, dir, radius);
        }
        let (p, after) = c.best.expect("incumbent exists");
        let step = [p[0] - start[0], p[1] - start[1], p[2] - start[2]];
        if let Some(dir) = unit(step) {
            line_search(&mut c, p, dir, radius);
        }
        if after - before < 1e-15 {
            radius *= 0.5;
            if radius < 1e-12 {
                radius = 0.1;
            }
        }
    }

    let (point, value) = c.best.map_or((Vec::new(), f64::NEG_INFINITY), |(p, v)| (p.to_vec(), v));
    Ok(SearchResult {
        best_value: value,
        best_point: point,
        feasible_evaluations: c.feasible,
        total_evaluations: c.total,
        seed,
        near_zero_points: c.near_zero,
    })
}
