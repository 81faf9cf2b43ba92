//! Medoid and K-medoids computation in metric spaces, with distance-call
//! accounting.
//!
//! The crate is organised around [`metric::Metric`], a counted distance
//! oracle over Euclidean vectors or weighted graphs. On top of it sit
//!
//! - [`trimed`]: exact medoid search that prunes candidates with
//!   triangle-inequality lower bounds on energies, plus an ε-relaxed variant,
//! - [`sampling`]: the RAND energy estimator and the TOPRANK / TOPRANK2
//!   top-k selectors,
//! - [`kmedoids`]: Voronoi-iteration K-medoids (KMEDS) and its
//!   bound-accelerated counterpart trikmeds,
//! - [`datagen`]: synthetic vector and sensor-graph generators,
//! - [`bench`]: run records, CSV reporting and N-sweeps.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`). The
//! aliases at the crate root fix the scalar to `f64`, which is what the CLI
//! and the experiment harness use.

pub mod bench;
pub mod datagen;
pub mod error;
pub mod kmedoids;
pub mod metric;
pub mod sampling;
pub mod scalar;
pub mod trimed;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Point cloud with `f64` coordinates.
pub type VectorDataset = metric::VectorDataset<f64>;
/// Edge-weighted graph with `f64` weights.
pub type WeightedGraph = metric::WeightedGraph<f64>;
/// Euclidean oracle over an `f64` point cloud.
pub type EuclideanOracle<'a> = metric::EuclideanOracle<'a, f64>;
/// Shortest-path oracle over an `f64` graph.
pub type GraphOracle<'a> = metric::GraphOracle<'a, f64>;
/// Medoid search result with `f64` energy.
pub type MedoidResult = metric::MedoidResult<f64>;
/// K-medoids result with `f64` objective.
pub type KMedoidsResult = kmedoids::KMedoidsResult<f64>;
