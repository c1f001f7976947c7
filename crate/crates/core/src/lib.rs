//! Exact growth counting, hyperbolic-metric validators and orbit machinery for
//! growth-tightness experiments.
//!
//! The ambient group is a free group acting on its Cayley tree; quotients are
//! given by built-in models or by completed shortlex rewriting systems.

pub mod embedding;
pub mod growth;
pub mod metric;
pub mod model;
pub mod orbit;
pub mod pool;
pub mod presentation;
pub mod report;
pub mod rewriting;
pub mod rng;
pub mod word;

pub use model::{CyclicFreeProduct, FreeAbelian, FreeGroup, GroupModel, ModelKind, RewritingModel, SharedModel};
pub use presentation::{builtin_model, resolve_model, Presentation, PresentationError};
pub use rewriting::{complete_presentation, CompletionError, RewritingSystem, Rule};
pub use word::{cyclic_reduce, free_mul, free_reduce, inverse, w, Generator, Word};
