#![no_main]

use gfscma_cli::{ConfigFile, RunConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = ConfigFile::from_json(text) else {
        return;
    };
    assert_eq!(ConfigFile::from_json(&file.to_json()).as_ref(), Ok(&file));
    // Validation may reject, but must not panic.
    let _ = RunConfig::from_file(file);
});
