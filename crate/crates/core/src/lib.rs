//! Structured requirements compiled into runtime monitors.
//!
//! The pipeline is: [`fretish`] text → [`formula::formalize`] → a
//! past-time temporal [`formula::Formula`] → either a streaming
//! [`monitor::CompiledMonitor`] or standalone C from [`codegen`]. The
//! [`harness`] drives monitors from simulated or recorded flight data and
//! [`templates`] turns parameter files into requirements.

pub mod codegen;
pub mod formula;
pub mod fretish;
pub mod harness;
pub mod monitor;
pub mod semantics;
pub mod templates;
pub mod trace;
