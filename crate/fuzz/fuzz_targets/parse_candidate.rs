#![no_main]

use libfuzzer_sys::fuzz_target;
use pssm_core::expand::expand_pde;
use pssm_core::model::builtin;
use pssm_core::verify::parse_candidate;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let sys = expand_pde(&builtin("burgers-stationary").unwrap()).unwrap();
    let _ = parse_candidate(text, &sys.table);
});
