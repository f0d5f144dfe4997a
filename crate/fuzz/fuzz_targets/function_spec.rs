#![no_main]

use jensen_lab::{FunctionSpec, RealFunction};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<FunctionSpec>(data) else { return };
    let d = spec.domain();
    for x in d.grid(17) {
        let _ = spec.eval(x);
    }
    let _ = spec.breakpoints();
});
