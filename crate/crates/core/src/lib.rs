//! Additive-energy uncertainty principles and Fourier signal recovery on Z_N^d.
//!
//! The crate provides:
//!
//! - [`group`]: arithmetic on Z_N^d, dense signals/spectra, the asymmetric
//!   DFT convention (forward `N^{-d}`, inverse unnormalized), norms, supports;
//! - [`energy`]: exact additive energy, its Fourier-side identity, mixed
//!   energy, subset-maximum scans, disjoint-union bounds, regularity fits;
//! - [`uncertainty`]: certified evaluation of every support/energy
//!   uncertainty inequality;
//! - [`recovery`]: the direct recovery algorithm and recovery-condition
//!   certificates;
//! - [`solvers`]: the constrained L1 minimizer and the support-constrained
//!   L2 minimizer;
//! - [`ensembles`]: seeded generators for the set and signal families used
//!   in experiments;
//! - [`io`]: the CSV signal/spectrum format and the JSON index-set format.

pub mod energy;
pub mod ensembles;
pub mod error;
pub mod group;
pub mod io;
pub mod recovery;
pub mod solvers;
pub mod uncertainty;

pub use error::{Error, Result};
pub use group::{GroupSpec, IndexSet, Point, Signal, Spectrum};
