#![no_main]
// Puzzle deserialization; accepted puzzles must re-serialize canonically.

use libfuzzer_sys::fuzz_target;

use aldc::resource::Puzzle;

fuzz_target!(|data: &[u8]| {
    if let Ok(z) = Puzzle::from_bytes(data) {
        assert_eq!(z.to_bytes(), data);
    }
});
