#![no_main]

use libfuzzer_sys::fuzz_target;
use pssm_core::model::{parse_problem, print_problem};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_problem(src) {
        let again = parse_problem(&print_problem(&p)).expect("printed problem parses");
        assert_eq!(again, p);
        let _ = p.reduced();
    }
});
