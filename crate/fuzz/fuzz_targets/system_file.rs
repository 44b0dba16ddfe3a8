#![no_main]
use libfuzzer_sys::fuzz_target;
use polyterm_pfs::{check_system, load_system, print_system};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = check_system(s);
    if let Ok(sys) = load_system(s) {
        let printed = print_system(&sys, false);
        let again = load_system(&printed).expect("printed system reloads");
        assert_eq!(print_system(&again, false), printed);
    }
});
