//! Counting Count-Min sketches under the regular (CM) and conservative-update
//! (CU) strategies, modelled as counter processes on k-uniform hash
//! hypergraphs.
//!
//! The crate is split along the same lines as the model:
//!
//! * [`hypergraph`]: generators (Erdős–Rényi, dual complete, 2-regular),
//!   synchronous peeling, components and descendant closures.
//! * [`process`]: the CM/CU counter process, per-edge error reports and the
//!   step audit for dual complete hypergraphs.
//! * [`streams`]: N-balanced, N-uniform and Zipf key streams.
//! * [`sketch`]: the key-facing counting sketch (one shared counter array).
//! * [`experiments`]: the replicated Monte-Carlo harness.
//!
//! Counter storage is generic over the unsigned width through [`Counter`];
//! the `*64` aliases below are what the harness and CLI use.

pub mod counter;
pub mod error;
pub mod experiments;
pub mod hypergraph;
pub mod process;
pub mod seed;
pub mod sketch;
pub mod streams;

pub use counter::Counter;
pub use error::{Error, Result};
pub use hypergraph::{ComponentReport, Hypergraph, Level, PeelResult};
pub use process::{CounterProcess, CounterState, ErrorReport, Strategy};
pub use sketch::CountingSketch;
pub use streams::{StreamModel, StreamSpec};

/// Crate version, stamped into every output file header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type CounterState64 = CounterState<u64>;
pub type CounterState32 = CounterState<u32>;
pub type CounterProcess64<'h> = CounterProcess<'h, u64>;
pub type CountingSketch64 = CountingSketch<u64>;
pub type CountingSketch32 = CountingSketch<u32>;
