//! Steffensen-Popoviciu certification.
//!
//! A signed measure on `[a, b]` with positive mass is Steffensen-Popoviciu
//! exactly when both endpoint profiles
//!
//! ```text
//! left(t)  = integral over [a, t] of (t - x) d mu
//! right(t) = integral over [t, b] of (x - t) d mu
//! ```
//!
//! are nonnegative for every `t` in `[a, b]`. For a discrete measure both
//! profiles are piecewise linear with kinks at the atoms, so their minima
//! sit at atom positions or endpoints and the check is exact. For densities
//! the profiles are sampled on a grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{DiscreteSignedMeasure, SignedMeasure};
use crate::quadrature::QuadratureConfig;

/// Slack for the prefix-sum comparisons in Steffensen's condition, relative
/// to the total variation of the weights.
pub const STEFFENSEN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteffensenVerdict {
    pub passes: bool,
    pub partial_sums: Vec<f64>,
    pub total: f64,
}

/// Checks `sum p_k > 0` and `0 <= sum_{k<=m} p_k <= sum p_k` for every `m`,
/// with prefix sums taken in ascending position order.
pub fn check_steffensen_discrete(m: &DiscreteSignedMeasure) -> SteffensenVerdict {
    let mut partial_sums = Vec::with_capacity(m.atoms().len());
    let mut acc = 0.0;
    let mut variation = 0.0;
    for w in m.weights() {
        acc += w;
        variation += w.abs();
        partial_sums.push(acc);
    }
    let total = acc;
    let slack = STEFFENSEN_SLACK * variation.max(1.0);
    let passes = total > 0.0
        && partial_sums
            .iter()
            .all(|&s| s >= -slack && s <= total + slack);
    SteffensenVerdict {
        passes,
        partial_sums,
        total,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileWitness {
    pub t: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateMethod {
    ExactBreakpoint,
    GridScan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SPCertificate {
    pub is_sp: bool,
    pub total_mass: f64,
    pub worst_left: ProfileWitness,
    pub worst_right: ProfileWitness,
    pub method: CertificateMethod,
    pub scan_points: usize,
}

impl SPCertificate {
    /// The smaller of the two worst profile values; nonnegative (up to
    /// `cert_tol`) for SP measures.
    pub fn worst_margin(&self) -> f64 {
        self.worst_left.value.min(self.worst_right.value)
    }
}

/// Certification that stopped part-way, carrying whatever was scanned.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{error}")]
pub struct CertifyFailure {
    pub error: Error,
    pub partial: Option<SPCertificate>,
}

impl From<CertifyFailure> for Error {
    fn from(f: CertifyFailure) -> Self {
        f.error
    }
}

/// Both endpoint profiles at `t`. Atoms exactly at `t` enter both sums,
/// where they contribute zero.
pub fn endpoint_profiles(m: &SignedMeasure, t: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let iv = m.interval();
    if !iv.contains(t) {
        return Err(Error::Domain {
            point: t,
            reason: format!("scan point outside [{}, {}]", iv.lo(), iv.hi()),
        });
    }
    match m {
        SignedMeasure::Discrete(d) => {
            let mut left = 0.0;
            let mut right = 0.0;
            for a in d.atoms() {
                if a.position <= t {
                    left += a.weight * (t - a.position);
                }
                if a.position >= t {
                    right += a.weight * (a.position - t);
                }
            }
            Ok((left, right))
        }
        SignedMeasure::Density(_) => {
            let left = m.integrate_window(|x| Ok(t - x), iv.lo(), t, &[t], cfg)?;
            let right = m.integrate_window(|x| Ok(x - t), t, iv.hi(), &[t], cfg)?;
            Ok((left, right))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub t: f64,
    pub left: f64,
    pub right: f64,
}

/// The scan points used by [`certify_sp`]: endpoints and atoms for discrete
/// measures; a uniform grid plus breakpoints for densities.
pub fn scan_points(m: &SignedMeasure, scan_resolution: usize) -> Result<Vec<f64>> {
    let iv = m.interval();
    let mut ts = match m {
        SignedMeasure::Discrete(d) => {
            let mut ts = vec![iv.lo(), iv.hi()];
            ts.extend(d.atoms().iter().map(|a| a.position));
            ts
        }
        SignedMeasure::Density(d) => {
            if scan_resolution < 2 {
                return Err(Error::invalid("scan_resolution must be at least 2"));
            }
            let mut ts = iv.grid(scan_resolution);
            ts.extend(d.all_breakpoints().into_iter().filter(|t| iv.contains(*t)));
            ts
        }
    };
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    Ok(ts)
}

pub fn profile_curve(
    m: &SignedMeasure,
    ts: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<ProfilePoint>> {
    ts.iter()
        .map(|&t| endpoint_profiles(m, t, cfg).map(|(left, right)| ProfilePoint { t, left, right }))
        .collect()
}

/// Endpoint-positivity certificate.
///
/// `scan_resolution` is ignored for discrete measures, whose check is exact.
pub fn certify_sp(
    m: &SignedMeasure,
    scan_resolution: usize,
    cfg: &QuadratureConfig,
    cert_tol: f64,
) -> std::result::Result<SPCertificate, CertifyFailure> {
    let fail = |error: Error, partial: Option<SPCertificate>| CertifyFailure { error, partial };
    let total_mass = m.total_mass(cfg).map_err(|e| fail(e, None))?;
    let method = match m {
        SignedMeasure::Discrete(_) => CertificateMethod::ExactBreakpoint,
        SignedMeasure::Density(_) => CertificateMethod::GridScan,
    };
    let ts = scan_points(m, scan_resolution).map_err(|e| fail(e, None))?;

    let iv = m.interval();
    let mut worst_left = ProfileWitness {
        t: iv.lo(),
        value: f64::INFINITY,
    };
    let mut worst_right = ProfileWitness {
        t: iv.hi(),
        value: f64::INFINITY,
    };
    let assemble = |wl: ProfileWitness, wr: ProfileWitness, scanned: usize| SPCertificate {
        is_sp: total_mass > 0.0 && wl.value >= -cert_tol && wr.value >= -cert_tol,
        total_mass,
        worst_left: wl,
        worst_right: wr,
        method,
        scan_points: scanned,
    };
    for (i, &t) in ts.iter().enumerate() {
        let (left, right) = match endpoint_profiles(m, t, cfg) {
            Ok(v) => v,
            Err(e) => {
                let partial = (i > 0).then(|| assemble(worst_left, worst_right, i));
                return Err(fail(e, partial));
            }
        };
        if left < worst_left.value {
            worst_left = ProfileWitness { t, value: left };
        }
        if right < worst_right.value {
            worst_right = ProfileWitness { t, value: right };
        }
    }
    Ok(assemble(worst_left, worst_right, ts.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::FunctionSpec;
    use crate::measure::Interval;
    use approx::assert_abs_diff_eq;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn discrete(atoms: &[(f64, f64)], lo: f64, hi: f64) -> DiscreteSignedMeasure {
        DiscreteSignedMeasure::new(atoms.iter().copied(), iv(lo, hi)).unwrap()
    }

    /// `left(t)` for the density `x^2 - 1/6` on `[-1, 1]`, integrated by hand.
    fn example_two_left(t: f64) -> f64 {
        t.powi(4) / 12.0 - t * t / 12.0 + t / 6.0 + 1.0 / 6.0
    }

    fn example_two() -> SignedMeasure {
        let d = iv(-1.0, 1.0);
        SignedMeasure::density(d, FunctionSpec::polynomial(vec![-1.0 / 6.0, 0.0, 1.0], d).unwrap())
            .unwrap()
    }

    #[test]
    fn steffensen_example_one() {
        let v = check_steffensen_discrete(&discrete(
            &[(0.25, 5.0 / 9.0), (0.5, -1.0 / 9.0), (0.75, 5.0 / 9.0)],
            0.0,
            1.0,
        ));
        assert!(v.passes);
        assert_abs_diff_eq!(v.partial_sums[0], 5.0 / 9.0);
        assert_abs_diff_eq!(v.partial_sums[1], 4.0 / 9.0);
        assert_eq!(v.total, 1.0);
    }

    #[test]
    fn steffensen_tan_measure() {
        let v = check_steffensen_discrete(&discrete(
            &[(-0.5, 0.5), (0.5, -0.25), (1.0, 0.75)],
            -1.1,
            1.1,
        ));
        assert!(v.passes);
        assert_eq!(v.partial_sums, vec![0.5, 0.25, 1.0]);
    }

    #[test]
    fn steffensen_leading_negative() {
        let v = check_steffensen_discrete(&discrete(
            &[(-0.5, -0.25), (0.5, 0.5), (1.0, 0.75)],
            -1.0,
            1.0,
        ));
        assert!(!v.passes);
        assert_eq!(v.partial_sums[0], -0.25);
    }

    #[test]
    fn profiles_of_point_mass() {
        let m: SignedMeasure = discrete(&[(1.0, 1.0)], 0.0, 1.0).into();
        for t in [0.0, 0.3, 0.99] {
            assert_eq!(endpoint_profiles(&m, t, &cfg()).unwrap().0, 0.0);
        }
    }

    #[test]
    fn profiles_of_example_two() {
        let m = example_two();
        for t in [-1.0, -0.5, 0.0, 0.3, 1.0] {
            let (left, right) = endpoint_profiles(&m, t, &cfg()).unwrap();
            assert_abs_diff_eq!(left, example_two_left(t), epsilon = 1e-12);
            // The density is even, so right(t) = left(-t).
            assert_abs_diff_eq!(right, example_two_left(-t), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(example_two_left(1.0), 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn profiles_of_signed_pair() {
        let m: SignedMeasure = discrete(&[(0.0, -1.0), (1.0, 3.0)], 0.0, 1.0).into();
        assert_eq!(endpoint_profiles(&m, 0.5, &cfg()).unwrap().0, -0.5);
    }

    #[test]
    fn profile_outside_interval() {
        let m: SignedMeasure = discrete(&[(1.0, 1.0)], 0.0, 1.0).into();
        assert!(endpoint_profiles(&m, 1.5, &cfg()).is_err());
    }

    #[test]
    fn nonnegative_discrete_is_sp() {
        let m: SignedMeasure = discrete(&[(0.1, 0.2), (0.4, 0.0), (0.9, 2.0)], 0.0, 1.0).into();
        let c = certify_sp(&m, 0, &cfg(), 1e-9).unwrap();
        assert!(c.is_sp);
        assert_eq!(c.method, CertificateMethod::ExactBreakpoint);
    }

    #[test]
    fn example_two_certificate() {
        let c = certify_sp(&example_two(), 513, &cfg(), 1e-9).unwrap();
        assert!(c.is_sp);
        assert_eq!(c.method, CertificateMethod::GridScan);
        assert_eq!(c.worst_left.t, -1.0);
        assert_abs_diff_eq!(c.worst_left.value, 0.0, epsilon = 1e-12);
        assert_eq!(c.worst_right.t, 1.0);
        assert_eq!(c.scan_points, 513);
    }

    #[test]
    fn signed_pair_is_not_sp() {
        let m: SignedMeasure = discrete(&[(0.0, -1.0), (1.0, 3.0)], 0.0, 1.0).into();
        let c = certify_sp(&m, 0, &cfg(), 1e-9).unwrap();
        assert!(!c.is_sp);
        assert!(c.worst_left.value < 0.0);
        assert!(c.worst_left.t > 0.0 && c.worst_left.t <= 1.0);
    }

    #[test]
    fn negative_mass_is_not_sp() {
        let m: SignedMeasure = discrete(&[(0.5, -1.0)], 0.0, 1.0).into();
        assert!(!certify_sp(&m, 0, &cfg(), 1e-9).unwrap().is_sp);
    }

    #[test]
    fn density_scan_needs_resolution() {
        assert!(certify_sp(&example_two(), 1, &cfg(), 1e-9).is_err());
    }

    #[test]
    fn partial_certificate_on_non_convergence() {
        let cfg = QuadratureConfig {
            panels_per_segment: 1,
            nodes_per_panel: 1,
            refine_limit: 1,
            abs_tol: 1e-300,
        };
        let d = iv(0.0, 1.0);
        let m = SignedMeasure::density(d, FunctionSpec::polynomial(vec![1.0, 1.0], d).unwrap())
            .unwrap();
        // A one-node rule integrates the linear density exactly but not the
        // quadratic profile integrands.
        let err = certify_sp(&m, 5, &cfg, 1e-9).unwrap_err();
        assert!(matches!(err.error, Error::NonConvergence { .. }));
    }
}
