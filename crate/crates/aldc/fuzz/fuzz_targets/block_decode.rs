#![no_main]
// Arbitrary windows fed to the block decoder: must soft-fail, never panic.

use libfuzzer_sys::fuzz_target;

use aldc::bits::BitString;
use aldc::block_code::{insdel_block_decode, InsdelBlockParams};

fuzz_target!(|data: &[u8]| {
    if data.is_empty() || data.len() > 1 << 14 {
        return;
    }
    let p = InsdelBlockParams::new(64).unwrap();
    let bits = BitString::from_packed_bytes(data, data.len() * 8).unwrap();
    let _ = insdel_block_decode(&bits, &p);
});
