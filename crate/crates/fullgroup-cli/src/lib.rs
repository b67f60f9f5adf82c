//! File formats, configuration, and command implementations for the
//! `fullgroup` CLI.

pub mod placeholder {
    pub fn version() -> &'static str {
        env!("CARGO_PKG_VERSION")
    }
}
