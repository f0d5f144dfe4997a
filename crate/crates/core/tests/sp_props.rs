use jensen_lab::quadrature::QuadratureConfig;
use jensen_lab::search::generators::steffensen_atoms;
use jensen_lab::search::trial_rng;
use jensen_lab::sp::{certify_sp, check_steffensen_discrete, endpoint_profiles};
use jensen_lab::{DiscreteSignedMeasure, FunctionSpec, Interval, SignedMeasure};
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn interval() -> impl Strategy<Value = Interval> {
    (-3.0..2.0f64, 0.1..3.0f64).prop_map(|(lo, len)| Interval::new(lo, lo + len).unwrap())
}

fn signed(iv: Interval) -> impl Strategy<Value = Option<DiscreteSignedMeasure>> {
    prop::collection::vec((0.0..=1.0f64, -1.0..2.0f64), 1..7).prop_map(move |raw| {
        DiscreteSignedMeasure::new(raw.into_iter().map(|(u, w)| (iv.lo() + u * iv.length(), w)), iv).ok()
    })
}

/// Convex, nonnegative test functions on `iv`.
fn convex_nonnegative(iv: Interval, s: f64, k: usize) -> FunctionSpec {
    let x0 = iv.lo() + s * iv.length();
    match k % 3 {
        0 => FunctionSpec::polynomial(vec![x0 * x0, -2.0 * x0, 1.0], iv).unwrap(),
        1 => FunctionSpec::piecewise_linear(vec![(iv.lo(), x0 - iv.lo()), (x0, 0.0), (iv.hi(), iv.hi() - x0)], iv).unwrap(),
        _ => FunctionSpec::piecewise_linear(vec![(iv.lo(), 0.0), (x0, 0.0), (iv.hi(), iv.hi() - x0)], iv).unwrap(),
    }
}

proptest! {
    #[test]
    fn steffensen_implies_sp(seed in any::<u64>(), n in 1usize..12, iv in interval()) {
        let mut rng = trial_rng(seed, 0);
        let m = DiscreteSignedMeasure::new(steffensen_atoms(&mut rng, iv, n), iv).unwrap();
        prop_assert!(check_steffensen_discrete(&m).passes);
        let cert = certify_sp(&m.into(), 2, &cfg(), 1e-9).unwrap();
        prop_assert!(cert.is_sp, "{:?}", cert);
    }

    #[test]
    fn sp_measures_integrate_convex_nonnegative_functions_nonnegatively(
        (iv, m) in interval().prop_flat_map(|iv| (Just(iv), signed(iv))),
        s in 0.0..=1.0f64,
        k in 0usize..3,
    ) {
        let Some(m) = m else { return Ok(()) };
        let m: SignedMeasure = m.into();
        let cert = certify_sp(&m, 2, &cfg(), 1e-9).unwrap();
        prop_assume!(cert.is_sp);
        let h = convex_nonnegative(iv, s, k);
        prop_assert!(m.integrate(&h, &cfg()).unwrap() >= -1e-9);
    }

    #[test]
    fn exact_breakpoints_are_the_minimum(
        (iv, m) in interval().prop_flat_map(|iv| (Just(iv), signed(iv))),
    ) {
        let Some(m) = m else { return Ok(()) };
        let m: SignedMeasure = m.into();
        let cert = certify_sp(&m, 2, &cfg(), 1e-9).unwrap();
        let n = 10 * cert.scan_points.max(2);
        for t in iv.grid(n) {
            let (l, r) = endpoint_profiles(&m, t, &cfg()).unwrap();
            prop_assert!(l >= cert.worst_left.value - 1e-12, "left({t}) = {l} < {:?}", cert.worst_left);
            prop_assert!(r >= cert.worst_right.value - 1e-12, "right({t}) = {r} < {:?}", cert.worst_right);
        }
    }

    #[test]
    fn profiles_vanish_at_their_own_endpoint(
        (iv, m) in interval().prop_flat_map(|iv| (Just(iv), signed(iv))),
    ) {
        let Some(m) = m else { return Ok(()) };
        let m: SignedMeasure = m.into();
        prop_assert_eq!(endpoint_profiles(&m, iv.lo(), &cfg()).unwrap().0, 0.0);
        prop_assert_eq!(endpoint_profiles(&m, iv.hi(), &cfg()).unwrap().1, 0.0);
    }
}

#[test]
fn certificate_points_lie_in_the_interval() {
    let iv = Interval::new(-1.0, 1.0).unwrap();
    let m = SignedMeasure::density(iv, FunctionSpec::polynomial(vec![-1.0 / 6.0, 0.0, 1.0], iv).unwrap()).unwrap();
    let cert = certify_sp(&m, 257, &cfg(), 1e-9).unwrap();
    assert!(cert.is_sp);
    for w in [cert.worst_left, cert.worst_right] {
        assert!(iv.contains(w.t));
    }
    assert_eq!(cert.worst_left.t, -1.0);
    assert!(cert.worst_left.value.abs() < 1e-12);
}
