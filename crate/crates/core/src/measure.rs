//! Signed measures on compact intervals: total mass, moments, barycenter and
//! integrals of catalog functions.
//!
//! Discrete sums run over atoms in ascending position order so results are
//! reproducible bit for bit. Density measures are integrated with
//! [`integrate_panelized`], splitting panels at the breakpoints of both the
//! density and the integrand.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{FunctionSpec, RealFunction};
use crate::quadrature::{integrate_panelized, QuadratureConfig};

/// A compact interval `[lo, hi]` with finite endpoints and `lo < hi`.
///
/// Serialized as the two-element array `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::invalid(format!("interval [{lo}, {hi}] must be finite")));
        }
        if lo >= hi {
            return Err(Error::invalid(format!("interval [{lo}, {hi}] is degenerate")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn reflected(&self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    /// `n >= 2` equally spaced points including both endpoints.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        assert!(n >= 2, "a grid needs both endpoints");
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.hi
                } else {
                    self.lo + self.length() * (i as f64) / ((n - 1) as f64)
                }
            })
            .collect()
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;

    fn try_from([lo, hi]: [f64; 2]) -> Result<Self> {
        Interval::new(lo, hi)
    }
}

impl From<Interval> for [f64; 2] {
    fn from(iv: Interval) -> Self {
        [iv.lo, iv.hi]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub position: f64,
    pub weight: f64,
}

/// `sum weight_k * delta_{position_k}` supported in an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSignedMeasure {
    atoms: Vec<Atom>,
    interval: Interval,
}

impl DiscreteSignedMeasure {
    /// Sorts the atoms by position and merges equal positions by summing
    /// their weights.
    pub fn new(atoms: impl IntoIterator<Item = (f64, f64)>, interval: Interval) -> Result<Self> {
        let mut raw: Vec<Atom> = atoms
            .into_iter()
            .map(|(position, weight)| Atom { position, weight })
            .collect();
        for a in &raw {
            if !a.position.is_finite() || !a.weight.is_finite() {
                return Err(Error::invalid("atom positions and weights must be finite"));
            }
            if !interval.contains(a.position) {
                return Err(Error::invalid(format!(
                    "atom at {} lies outside [{}, {}]",
                    a.position,
                    interval.lo(),
                    interval.hi()
                )));
            }
        }
        raw.sort_by(|a, b| a.position.total_cmp(&b.position));
        let mut atoms: Vec<Atom> = Vec::with_capacity(raw.len());
        for a in raw {
            match atoms.last_mut() {
                Some(last) if last.position == a.position => last.weight += a.weight,
                _ => atoms.push(a),
            }
        }
        if atoms.iter().all(|a| a.weight == 0.0) {
            return Err(Error::invalid("a discrete measure needs a nonzero weight"));
        }
        Ok(DiscreteSignedMeasure { atoms, interval })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.weight)
    }
}

/// The density of a [`DensitySignedMeasure`].
///
/// Job files can only carry catalog functions; library callers may also
/// pass an arbitrary evaluation handle.
#[derive(Clone)]
pub enum Density {
    Catalog(FunctionSpec),
    Handle(Arc<dyn RealFunction + Send + Sync>),
}

impl Density {
    fn as_function(&self) -> &dyn RealFunction {
        match self {
            Density::Catalog(f) => f,
            Density::Handle(h) => h.as_ref(),
        }
    }
}

impl std::fmt::Debug for Density {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Density::Catalog(spec) => f.debug_tuple("Catalog").field(spec).finish(),
            Density::Handle(h) => f
                .debug_tuple("Handle")
                .field(&format_args!("domain {:?}", h.domain()))
                .finish(),
        }
    }
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Density::Catalog(a), Density::Catalog(b)) => a == b,
            (Density::Handle(a), Density::Handle(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

/// `density(x) dx` on an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySignedMeasure {
    interval: Interval,
    density: Density,
    breakpoints: Vec<f64>,
}

impl DensitySignedMeasure {
    pub fn new(interval: Interval, density: FunctionSpec, breakpoints: Vec<f64>) -> Result<Self> {
        Self::with_density(interval, Density::Catalog(density), breakpoints)
    }

    pub fn from_handle(
        interval: Interval,
        handle: Arc<dyn RealFunction + Send + Sync>,
        breakpoints: Vec<f64>,
    ) -> Result<Self> {
        Self::with_density(interval, Density::Handle(handle), breakpoints)
    }

    fn with_density(interval: Interval, density: Density, breakpoints: Vec<f64>) -> Result<Self> {
        let dom = density.as_function().domain();
        if !dom.contains_interval(interval) {
            return Err(Error::invalid(format!(
                "density domain [{}, {}] does not contain [{}, {}]",
                dom.lo(),
                dom.hi(),
                interval.lo(),
                interval.hi()
            )));
        }
        for w in breakpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::invalid("breakpoints must be strictly increasing"));
            }
        }
        if let Some(t) = breakpoints
            .iter()
            .find(|t| !(t.is_finite() && **t > interval.lo() && **t < interval.hi()))
        {
            return Err(Error::invalid(format!(
                "breakpoint {t} is not interior to [{}, {}]",
                interval.lo(),
                interval.hi()
            )));
        }
        Ok(DensitySignedMeasure {
            interval,
            density,
            breakpoints,
        })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn density_at(&self, x: f64) -> Result<f64> {
        self.density.as_function().eval(x)
    }

    /// Declared breakpoints plus the density's own kinks.
    pub fn all_breakpoints(&self) -> Vec<f64> {
        let mut out = self.breakpoints.clone();
        out.extend(self.density.as_function().breakpoints());
        out
    }
}

/// A signed measure: either a finite atom list or a density.
#[derive(Debug, Clone, PartialEq)]
pub enum SignedMeasure {
    Discrete(DiscreteSignedMeasure),
    Density(DensitySignedMeasure),
}

impl From<DiscreteSignedMeasure> for SignedMeasure {
    fn from(m: DiscreteSignedMeasure) -> Self {
        SignedMeasure::Discrete(m)
    }
}

impl From<DensitySignedMeasure> for SignedMeasure {
    fn from(m: DensitySignedMeasure) -> Self {
        SignedMeasure::Density(m)
    }
}

/// Mass, first moment and barycenter of a measure.
///
/// The barycenter is `None` when the total mass is not positive. It lies in
/// the support interval for Steffensen-Popoviciu measures, but a signed
/// measure with positive mass can push it outside, which
/// `barycenter_in_interval` records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub total_mass: f64,
    pub first_moment: f64,
    pub barycenter: Option<f64>,
    pub barycenter_in_interval: bool,
}

/// Moments of the separable product measure `density(x) dx dy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductMoments {
    pub mass: f64,
    pub barycenter_x: Option<f64>,
    pub barycenter_y: Option<f64>,
}

impl SignedMeasure {
    pub fn interval(&self) -> Interval {
        match self {
            SignedMeasure::Discrete(m) => m.interval,
            SignedMeasure::Density(m) => m.interval,
        }
    }

    /// Discrete measure from `(position, weight)` pairs.
    pub fn discrete(atoms: impl IntoIterator<Item = (f64, f64)>, interval: Interval) -> Result<Self> {
        DiscreteSignedMeasure::new(atoms, interval).map(SignedMeasure::Discrete)
    }

    pub fn density(interval: Interval, density: FunctionSpec) -> Result<Self> {
        DensitySignedMeasure::new(interval, density, Vec::new()).map(SignedMeasure::Density)
    }

    /// Unit point mass at `x`.
    pub fn dirac(x: f64, interval: Interval) -> Result<Self> {
        Self::discrete([(x, 1.0)], interval)
    }

    /// Breakpoints relevant to integration: atom positions for discrete
    /// measures, declared and intrinsic kinks for densities.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            SignedMeasure::Discrete(m) => m.atoms.iter().map(|a| a.position).collect(),
            SignedMeasure::Density(m) => m.all_breakpoints(),
        }
    }

    /// `integral of g over [from, to]` (closed) intersected with the support.
    ///
    /// `g` only needs to be defined on that window. `extra_breakpoints` are
    /// added to the density's own when panelizing.
    pub fn integrate_window<G>(
        &self,
        g: G,
        from: f64,
        to: f64,
        extra_breakpoints: &[f64],
        cfg: &QuadratureConfig,
    ) -> Result<f64>
    where
        G: Fn(f64) -> Result<f64>,
    {
        match self {
            SignedMeasure::Discrete(m) => {
                let mut acc = 0.0;
                for a in m.atoms.iter().filter(|a| from <= a.position && a.position <= to) {
                    acc += a.weight * g(a.position)?;
                }
                Ok(acc)
            }
            SignedMeasure::Density(m) => {
                let lo = from.max(m.interval.lo);
                let hi = to.min(m.interval.hi);
                if lo >= hi {
                    return Ok(0.0);
                }
                let window = Interval::new(lo, hi)?;
                let mut bps = m.all_breakpoints();
                bps.extend_from_slice(extra_breakpoints);
                let density = m.density.as_function();
                let r = integrate_panelized(
                    |x| Ok(g(x)? * density.eval(x)?),
                    window,
                    &bps,
                    cfg,
                )?;
                Ok(r.value)
            }
        }
    }

    /// `mu([lo, hi])`.
    pub fn total_mass(&self, cfg: &QuadratureConfig) -> Result<f64> {
        let iv = self.interval();
        self.integrate_window(|_| Ok(1.0), iv.lo, iv.hi, &[], cfg)
    }

    /// `integral of f d mu`. The domain of `f` must contain the support
    /// interval.
    pub fn integrate<F: RealFunction + ?Sized>(&self, f: &F, cfg: &QuadratureConfig) -> Result<f64> {
        let iv = self.interval();
        let dom = f.domain();
        if !dom.contains_interval(iv) {
            let point = if iv.lo < dom.lo() { iv.lo } else { iv.hi };
            return Err(Error::Domain {
                point,
                reason: format!(
                    "integrand domain [{}, {}] does not contain the support [{}, {}]",
                    dom.lo(),
                    dom.hi(),
                    iv.lo,
                    iv.hi
                ),
            });
        }
        self.integrate_window(|x| f.eval(x), iv.lo, iv.hi, &f.breakpoints(), cfg)
    }

    pub fn moments(&self, cfg: &QuadratureConfig) -> Result<MomentSummary> {
        let iv = self.interval();
        let total_mass = self.total_mass(cfg)?;
        let first_moment = self.integrate_window(Ok, iv.lo, iv.hi, &[], cfg)?;
        let barycenter = (total_mass > 0.0).then(|| first_moment / total_mass);
        Ok(MomentSummary {
            total_mass,
            first_moment,
            barycenter,
            barycenter_in_interval: barycenter.is_some_and(|b| iv.contains(b)),
        })
    }
}

/// Mass and barycenter of `density(x) dx dy` on `mx.interval x y_interval`,
/// computed by genuinely iterated one-dimensional quadrature (inner in `y`,
/// outer in `x`).
pub fn iterated_product_moments(
    mx: &DensitySignedMeasure,
    y_interval: Interval,
    cfg: &QuadratureConfig,
) -> Result<ProductMoments> {
    let density = mx.density.as_function();
    let bps = mx.all_breakpoints();
    let inner = |x: f64, weight: &dyn Fn(f64, f64) -> f64| -> Result<f64> {
        let rho = density.eval(x)?;
        Ok(integrate_panelized(|y| Ok(weight(x, y) * rho), y_interval, &[], cfg)?.value)
    };
    let outer = |weight: &dyn Fn(f64, f64) -> f64| -> Result<f64> {
        Ok(integrate_panelized(|x| inner(x, weight), mx.interval, &bps, cfg)?.value)
    };
    let mass = outer(&|_, _| 1.0)?;
    let mx_moment = outer(&|x, _| x)?;
    let my_moment = outer(&|_, y| y)?;
    let positive = mass > 0.0;
    Ok(ProductMoments {
        mass,
        barycenter_x: positive.then(|| mx_moment / mass),
        barycenter_y: positive.then(|| my_moment / mass),
    })
}

// ---- JSON representation -------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum RawMeasure {
    Discrete {
        interval: Interval,
        atoms: Vec<[f64; 2]>,
    },
    Density {
        interval: Interval,
        density: FunctionSpec,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        breakpoints: Vec<f64>,
    },
}

impl TryFrom<RawMeasure> for SignedMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        match raw {
            RawMeasure::Discrete { interval, atoms } => {
                SignedMeasure::discrete(atoms.into_iter().map(|[x, w]| (x, w)), interval)
            }
            RawMeasure::Density {
                interval,
                density,
                breakpoints,
            } => DensitySignedMeasure::new(interval, density, breakpoints).map(Into::into),
        }
    }
}

impl TryFrom<&SignedMeasure> for RawMeasure {
    type Error = Error;

    fn try_from(m: &SignedMeasure) -> Result<Self> {
        Ok(match m {
            SignedMeasure::Discrete(d) => RawMeasure::Discrete {
                interval: d.interval,
                atoms: d.atoms.iter().map(|a| [a.position, a.weight]).collect(),
            },
            SignedMeasure::Density(d) => RawMeasure::Density {
                interval: d.interval,
                density: match &d.density {
                    Density::Catalog(f) => f.clone(),
                    Density::Handle(_) => {
                        return Err(Error::invalid(
                            "densities given as evaluation handles cannot be serialized",
                        ))
                    }
                },
                breakpoints: d.breakpoints.clone(),
            },
        })
    }
}

impl Serialize for SignedMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawMeasure::try_from(self)
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignedMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMeasure::deserialize(d)?;
        SignedMeasure::try_from(raw).map_err(serde::de::Error::custom)
    }
}
