//! Geometric preferential attachment graphs on the unit-area sphere.
//!
//! Vertices arrive one at a time at uniform positions on `S^d` and attach
//! `m` edges to earlier vertices inside a cap of area `p`, preferring high
//! degree. The crate provides the sphere geometry, the generator, graph
//! statistics, asymptotic predictions and an experiment harness.

pub mod error;
pub mod generator;
pub mod geometry;
pub mod graph_stats;
pub mod harness;
pub mod io;
pub mod kernel;
pub mod sampling;
pub mod spatial;
pub mod theory;

pub use error::{GpmError, Result};
pub use generator::{
    attachment_distribution, generate, generate_rgg, generate_with, EdgeRecord, GenerationTrace, GpmParams, GpmProcess,
    GraphRecord, KernelChoice, RggRecord, TraceMode, TraceRow, VertexId,
};
pub use geometry::{CapSpec, SpherePoint};
pub use graph_stats::{StatsReport, TriangleCount};
pub use harness::{ExperimentConfig, ExperimentKind, ResultRow};
pub use kernel::{KernelTable, PreferenceKernel};
pub use theory::SlotEvent;
