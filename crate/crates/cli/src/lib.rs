//! Library side of the `tilecoh` command: report builders and dispatch.

pub mod app;
pub mod dot;
pub mod report;
pub mod text;

pub use app::{run, Cli};
