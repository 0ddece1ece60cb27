#![no_main]

use libfuzzer_sys::fuzz_target;
use pssm_core::exact::{parse_ratfunc, SymbolTable};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let mut table = SymbolTable::new();
    for n in ["nu", "k", "c", "a_0", "a_1", "a_2"] {
        table.fresh(n).unwrap();
    }
    if let Ok(f) = parse_ratfunc(text, &mut |n| table.lookup(n)) {
        let printed = f.to_text(&table);
        let again = parse_ratfunc(&printed, &mut |n| table.lookup(n)).expect("canonical text parses");
        assert_eq!(again, f);
    }
});
