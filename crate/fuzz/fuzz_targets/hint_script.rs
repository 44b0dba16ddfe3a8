#![no_main]
use libfuzzer_sys::fuzz_target;
use polyterm_prover::HintScript;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(h) = HintScript::parse(s) {
        assert_eq!(HintScript::parse(&h.to_string()), Ok(h));
    }
});
