//! Multiport beam splitters for bosonic atoms on a ring lattice.
//!
//! Atoms loaded into one site of an `S`-site ring spread into every site after
//! a balance time `tau`; the crate models that evolution in closed form for a
//! single particle and exactly (Fock space) for `N` interacting bosons, and
//! runs the interferometry, timing, loss and scaling experiments built on it.

pub mod basis;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod model;
pub mod splitter;

pub use basis::{binomial, fock_dimension, FockBasis, MAX_BASIS_DIM};
pub use error::{Error, Result};
pub use model::{
    annihilate_at_site, hopping_hamiltonian, interaction_hamiltonian, offset_hamiltonian,
    phase_imprint, Annihilated, HamiltonianMatrix, ManyBodyState, RingSpec, Terms,
};
pub use num_complex::Complex64;
pub use splitter::{
    find_balance_time, inverse_splitter_fidelity, transfer_matrix, BalanceResult, BalanceStatus,
    TransferMatrix,
};
