#![no_main]

use jensen_lab::job::parse_job;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(job) = parse_job(text) {
        // Anything accepted must serialize and parse back to itself.
        let again = parse_job(&job.to_json().expect("valid jobs serialize")).expect("round trip");
        assert_eq!(again, job);
    }
});
