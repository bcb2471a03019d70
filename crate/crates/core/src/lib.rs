//! Simplicial neural networks.
//!
//! Building blocks, bottom up:
//!
//! - [`complex`]: simplicial complexes with deterministic per-dimension indexing,
//!   faces, cofaces and simplicial distance.
//! - [`sparse`] and [`spectral`]: coboundary matrices, Hodge Laplacians, the
//!   simplicial Fourier transform and polynomial filters.
//! - [`snn`]: convolutional layers that are polynomials in the Laplacian,
//!   exact gradients, Adam and the masked-L1 training loop.
//! - [`ingest`]: paper–author corpora, random-walk sampling and projection to
//!   coauthorship complexes with citation cochains.
//! - [`imputation`]: the damage protocol, metrics, baselines and experiments.

pub mod complex;
pub mod error;
pub mod imputation;
pub mod ingest;
pub mod io;
pub mod seed;
pub mod snn;
pub mod sparse;
pub mod spectral;
pub mod synthetic;

pub use complex::{Cochain, Distance, Simplex, SimplicialComplex, VertexId};
pub use error::{Error, Result};
pub use imputation::{ExperimentConfig, ImputationTask, Method, MetricsReport};
pub use ingest::{CitationComplex, Corpus, CorpusFormat, PaperRecord};
pub use snn::{Activation, AdamConfig, AdamState, ConvLayer, SnnModel, TrainConfig};
pub use sparse::SparseOperator;
pub use spectral::{
    betti_number, coboundary_matrix, eigendecompose, hodge_laplacian, EigenBasis, HodgeLaplacian,
};
