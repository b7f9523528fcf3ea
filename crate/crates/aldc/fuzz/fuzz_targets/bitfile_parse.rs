#![no_main]
// Bit-file container parsing; an accepted file is canonical.

use libfuzzer_sys::fuzz_target;

use aldc::harness::{bitfile_decode, bitfile_encode};

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 16 {
        return;
    }
    if let Ok(bits) = bitfile_decode(data) {
        assert_eq!(bitfile_encode(&bits), data);
    }
});
