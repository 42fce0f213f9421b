//! JSON formats, run manifests, verification suites and command
//! implementations for the `k3e` binary.

pub mod commands;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod manifest;
pub mod oracles;
pub mod render;
pub mod suites;
