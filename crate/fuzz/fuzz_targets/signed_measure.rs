#![no_main]

use jensen_lab::quadrature::QuadratureConfig;
use jensen_lab::sp::certify_sp;
use jensen_lab::SignedMeasure;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(m) = serde_json::from_slice::<SignedMeasure>(data) else { return };
    let cfg = QuadratureConfig { refine_limit: 4, ..QuadratureConfig::default() };
    let _ = m.moments(&cfg);
    let _ = certify_sp(&m, 33, &cfg, 1e-9);
});
