//! Many-body time evolution and the physical side models of the scheme.

mod lattice;
mod phonon;
mod propagator;

pub use lattice::{
    intensity_fluctuation, recoil_energy, tunneling_angular_rate, tunneling_frequency_hz,
    tunneling_rate, PerturbedRate, TunnelingModel, ATOMIC_MASS_UNIT, HBAR, PLANCK,
    RB87_MASS, STRONG_COUPLING_DEPTH,
};
pub use phonon::{
    adiabaticity_limit, bogoliubov_spectrum, AdiabaticityReport, AdiabaticityRow, PhononSpectrum,
};
pub use propagator::{propagate, Propagator};
