//! Online similarity prediction over labeled graphs.
//!
//! The task: vertices of a fixed graph carry hidden class labels, pairs
//! of vertices arrive one at a time, and a learner must say whether the
//! two classes differ before the answer is revealed. This crate
//! implements that game in three information regimes, plus reductions
//! between similarity and multiclass prediction and a small experiment
//! harness.
//!
//! * [`graph`], [`laplacian`]: labeled graphs, effective resistance,
//!   cut-size measures.
//! * [`matrix`]: Perceptron and Winnow in the space of symmetric
//!   matrices built from the graph Laplacian (graph known up front).
//! * [`spanning`], [`fast_bst`]: uniform spanning trees, their
//!   linearization into a balanced binary tree, and a Perceptron on
//!   that tree whose per-round work is polylogarithmic.
//! * [`incremental`]: learners that see only the path revealed with
//!   each pair, building a spanning forest online (graph unknown).
//! * [`reductions`]: multiclass-to-similarity and similarity-to-class
//!   wrappers with multiplicative mistake guarantees.
//! * [`generate`], [`harness`]: graph and labeling generators, pair
//!   schedules, and reproducible experiment runs.
//!
//! Conventions used throughout: vertices and classes are 1-based,
//! a pair label of 1 means the classes differ, and all randomness
//! flows through seeded ChaCha streams so runs are reproducible
//! byte for byte.

#![forbid(unsafe_code)]

mod error;

pub mod fast_bst;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod incremental;
pub mod laplacian;
pub mod matrix;
pub mod reductions;
pub mod spanning;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
