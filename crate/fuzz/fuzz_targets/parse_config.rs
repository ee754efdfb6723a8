#![no_main]

use libfuzzer_sys::fuzz_target;
use negasalem::cli::{ConfigArgs, ConfigFile, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = ConfigFile::parse(text) {
        let _ = RunConfig::merge(&ConfigArgs::default(), file);
    }
});
