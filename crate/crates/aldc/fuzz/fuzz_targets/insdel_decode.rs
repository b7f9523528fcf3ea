#![no_main]
// Arbitrary oracle content run through the full block-interval recovery.

use libfuzzer_sys::fuzz_target;

use aldc::bits::BitString;
use aldc::compiler::{recover_blocks, sim_recover_block, CompilerParams};
use aldc::oracle::CorruptedOracle;
use aldc::seed;

fuzz_target!(|data: &[u8]| {
    if data.is_empty() || data.len() > 1 << 14 {
        return;
    }
    let p = CompilerParams::new(64, 128).unwrap();
    let bits = BitString::from_packed_bytes(data, data.len() * 8).unwrap();
    let mut rng = seed::rng(0, "fuzz", 0);
    let mut oracle = CorruptedOracle::open(bits.clone()).unwrap();
    let end = oracle.len() + 1;
    let _ = recover_blocks(&mut oracle, 1, end, 1, 2, &p, &mut rng);
    let _ = sim_recover_block(&bits, 1, &p);
});
