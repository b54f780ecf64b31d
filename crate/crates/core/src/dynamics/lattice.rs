//! Tunneling rate of a shallow optical lattice and its sensitivity to the
//! trapping intensity.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

/// Planck constant, J s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = PLANCK / (2.0 * PI);
/// Unified atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Mass of a rubidium-87 atom, kg.
pub const RB87_MASS: f64 = 86.909_180_527 * ATOMIC_MASS_UNIT;

/// Lattice depth `V_0 / E_R` of the strong-coupling configuration.
pub const STRONG_COUPLING_DEPTH: f64 = 2.0;

/// `hbar J / E_R ~ (1/2) exp(-(pi^2/4) sqrt(r)) (sqrt(r) + r^{3/2})` with
/// `r = V_0 / E_R`.
pub fn tunneling_rate(depth_ratio: f64) -> Result<f64> {
    if !(depth_ratio > 0.0) || !depth_ratio.is_finite() {
        return Err(Error::Domain(format!(
            "lattice depth ratio must be positive, got {depth_ratio}"
        )));
    }
    let root = depth_ratio.sqrt();
    Ok(0.5 * (-PI * PI / 4.0 * root).exp() * (root + root.powi(3)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnelingModel {
    pub depth_ratio: f64,
    pub hbar_j_over_er: f64,
}

impl TunnelingModel {
    pub fn new(depth_ratio: f64) -> Result<Self> {
        Ok(Self {
            depth_ratio,
            hbar_j_over_er: tunneling_rate(depth_ratio)?,
        })
    }
}

/// Recoil energy `E_R = h^2 / (2 m lambda^2)` in joules.
pub fn recoil_energy(mass_kg: f64, wavelength_m: f64) -> f64 {
    PLANCK * PLANCK / (2.0 * mass_kg * wavelength_m * wavelength_m)
}

/// `J / 2 pi = (hbar J / E_R) E_R / h`, in Hz.
pub fn tunneling_frequency_hz(depth_ratio: f64, mass_kg: f64, wavelength_m: f64) -> Result<f64> {
    Ok(tunneling_rate(depth_ratio)? * recoil_energy(mass_kg, wavelength_m) / PLANCK)
}

/// `J = (hbar J / E_R) E_R / hbar`, in rad/s.
pub fn tunneling_angular_rate(depth_ratio: f64, mass_kg: f64, wavelength_m: f64) -> Result<f64> {
    Ok(tunneling_rate(depth_ratio)? * recoil_energy(mass_kg, wavelength_m) / HBAR)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbedRate {
    pub rate: f64,
    /// The linearized model assumes `|delta| < 0.1`.
    pub within_model: bool,
}

/// Tunneling rate after a fractional change `delta` of the exponent at
/// `V_0 = 2 E_R`: `J~ = J exp(-pi^2 delta / (2 sqrt 2))`.
pub fn intensity_fluctuation(rate: f64, delta: f64) -> PerturbedRate {
    PerturbedRate {
        rate: rate * (-PI * PI * delta / (2.0 * SQRT_2)).exp(),
        within_model: delta.abs() < 0.1,
    }
}
