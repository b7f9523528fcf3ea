#![no_main]
// Secret-key deserialization; accepted keys must re-serialize canonically.

use libfuzzer_sys::fuzz_target;

use aldc::paldc::SecretKey;

fuzz_target!(|data: &[u8]| {
    if let Ok(sk) = SecretKey::from_bytes(data) {
        assert_eq!(sk.to_bytes(), data);
    }
});
