#![no_main]
use libfuzzer_sys::fuzz_target;
use polyterm_text::Env;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = polyterm_text::raw::parse_term(s);
        let _ = Env::interp().parse_term(s, None);
    }
});
