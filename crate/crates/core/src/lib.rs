//! Many-body Hamiltonians graded by a semilattice of configuration
//! subspaces, on finite periodic grids.
//!
//! The toolkit builds block Hamiltonians `H = K + Σ_Z I(Z)` over the direct
//! sum `H_S = ⊕_{X∈S} H_X`, computes subsystem Hamiltonians through the
//! graded projections `P_{≥X}`, evaluates the HVZ bottom of the essential
//! spectrum channel by channel, and runs the exact threshold calculus
//! (N-functions, threshold set τ(H), the functions ρ̂ and ρ) at desk scale.
//!
//! Modules follow the pipeline:
//!
//! - [`semilattice`]: the index set `S` and its quotients;
//! - [`hspace`]: the sector table, tensor splits, translations, modulations;
//! - [`hambuild`]: kinetic symbols, interaction kernels, assembly;
//! - [`grading`]: `P_{≥X}`, reduced Hamiltonians, compressions;
//! - [`spectra`]: dense/Lanczos eigensolvers, HVZ, the localization probe;
//! - [`mourre`]: N-functions and the threshold recursion;
//! - [`config`]: the declarative model format and the build pipeline;
//! - [`registry`]: name-keyed strategy registries behind the variant
//!   families (kinetic symbols, potential families, eigensolvers, probe
//!   functions).

pub mod config;
pub mod coo;
pub mod error;
pub mod grading;
pub mod hambuild;
pub mod hspace;
pub mod mourre;
pub mod registry;
pub mod semilattice;
pub mod spectra;

pub use error::{Error, Result};
