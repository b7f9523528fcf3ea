#![no_main]
// Edit-script text parsing; accepted scripts round-trip through the
// canonical text form.

use libfuzzer_sys::fuzz_target;

use aldc::channels::EditScript;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(script) = EditScript::parse(text) {
        let canonical = script.to_text();
        let reparsed = EditScript::parse(&canonical).unwrap();
        assert_eq!(reparsed, script);
    }
});
