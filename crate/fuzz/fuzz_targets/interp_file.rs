#![no_main]
use libfuzzer_sys::fuzz_target;
use polyterm_pfs::load_system;
use polyterm_prover::load_interpretation;

const FOLD: &str = include_str!("../../corpus/fold.pfs");

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let sys = load_system(FOLD).expect("corpus system loads");
    let _ = load_interpretation(s, "fuzz", &sys.sig);
});
