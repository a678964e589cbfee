#![no_main]

use gfscma::scma::{parse_codebook, write_codebook};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Anything accepted must survive a write/parse round trip unchanged.
    if let Ok(cb) = parse_codebook(text) {
        let again = parse_codebook(&write_codebook(&cb)).expect("written codebook parses");
        assert_eq!(cb, again);
    }
});
