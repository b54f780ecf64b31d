//! Bogoliubov phonon spectrum on the ring and the adiabatic-switching check.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// `omega_k = sqrt(4 J s_k [4 N V / S + 4 J s_k])` with
/// `s_k = sin^2(2 pi k / S)`, for `k = 0..S`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhononSpectrum {
    pub sites: usize,
    pub atoms: usize,
    pub tunneling: f64,
    pub interaction: f64,
    pub omegas: Vec<f64>,
}

impl PhononSpectrum {
    /// `omega_1 / J`, the lowest-momentum excitation.
    pub fn lowest_mode_ratio(&self) -> f64 {
        self.omegas[1] / self.tunneling
    }

    /// `min_{k != 0} omega_k / J` over every mode, including the gapless ones.
    pub fn min_ratio_all_modes(&self) -> f64 {
        self.omegas[1..]
            .iter()
            .fold(f64::INFINITY, |m, w| m.min(*w))
            / self.tunneling
    }

    /// Nonzero `k` where `sin(2 pi k / S) = 0`, i.e. `k = S/2` for even `S`.
    pub fn gapless_modes(&self) -> Vec<usize> {
        (1..self.sites).filter(|k| (2 * k) % self.sites == 0).collect()
    }
}

pub fn bogoliubov_spectrum(
    sites: usize,
    atoms: usize,
    tunneling: f64,
    interaction: f64,
) -> Result<PhononSpectrum> {
    if sites < 2 || atoms < 1 {
        return Err(Error::Config(format!("need S >= 2 and N >= 1, got S={sites}, N={atoms}")));
    }
    if !(tunneling > 0.0) || !(interaction >= 0.0) {
        return Err(Error::Config(format!(
            "need J > 0 and V >= 0, got J={tunneling}, V={interaction}"
        )));
    }
    let mean_field = 4.0 * atoms as f64 * interaction / sites as f64;
    let omegas = (0..sites)
        .map(|k| {
            // Fold onto k <= S/2 so omega_k == omega_{S-k} bit for bit, and
            // pin the exact zeros of sin(2 pi k / S).
            let k = k.min(sites - k);
            let s2 = if (2 * k) % sites == 0 {
                0.0
            } else {
                (TAU * k as f64 / sites as f64).sin().powi(2)
            };
            let kinetic = 4.0 * tunneling * s2;
            (kinetic * (mean_field + kinetic)).sqrt()
        })
        .collect();
    Ok(PhononSpectrum {
        sites,
        atoms,
        tunneling,
        interaction,
        omegas,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticityRow {
    pub sites: usize,
    /// `omega_1 / J`; the quantity the limit is decided on.
    pub lowest_mode_ratio: f64,
    pub min_ratio_all_modes: f64,
    pub gapless_modes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticityReport {
    pub vn_over_j: f64,
    /// Largest `S` in the scanned range with `omega_1 / J > 1`.
    pub limit: Option<usize>,
    pub rows: Vec<AdiabaticityRow>,
}

/// Scans `S = 3..=s_max` at fixed `N V / J` (only the product enters the
/// spectrum) and reports the largest ring whose lowest phonon mode still
/// exceeds the tunneling rate.
///
/// The decision uses `k = 1`. Taken literally the spectrum also has a gapless
/// `k = S/2` mode for even `S` and soft modes near `k = S/2` for odd `S`; both
/// are listed per row.
pub fn adiabaticity_limit(vn_over_j: f64, s_max: usize) -> Result<AdiabaticityReport> {
    if s_max < 3 {
        return Err(Error::Config(format!("S_max must be >= 3, got {s_max}")));
    }
    let rows = (3..=s_max)
        .map(|s| {
            let spec = bogoliubov_spectrum(s, 1, 1.0, vn_over_j)?;
            Ok(AdiabaticityRow {
                sites: s,
                lowest_mode_ratio: spec.lowest_mode_ratio(),
                min_ratio_all_modes: spec.min_ratio_all_modes(),
                gapless_modes: spec.gapless_modes(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let limit = rows
        .iter()
        .filter(|r| r.lowest_mode_ratio > 1.0)
        .map(|r| r.sites)
        .max();
    Ok(AdiabaticityReport {
        vn_over_j,
        limit,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_mode_and_symmetry() {
        for s in 2..=12 {
            let spec = bogoliubov_spectrum(s, 7, 1.0, 0.3).unwrap();
            assert_eq!(spec.omegas[0], 0.0);
            for k in 1..s {
                assert_eq!(spec.omegas[k], spec.omegas[s - k]);
                assert!(spec.omegas[k] >= 0.0);
            }
        }
    }

    #[test]
    fn noninteracting_spectrum_is_kinetic() {
        let s = 7;
        let spec = bogoliubov_spectrum(s, 3, 1.0, 0.0).unwrap();
        for k in 0..s {
            let want = 4.0 * (TAU * k as f64 / s as f64).sin().powi(2);
            assert!((spec.omegas[k] - want).abs() < 1e-14);
        }
    }

    #[test]
    fn direct_substitution() {
        // S=3, 4NV/S = 3 J: omega_1 = sqrt(3 * (3 + 3)) = sqrt(18).
        let spec = bogoliubov_spectrum(3, 9, 1.0, 0.25).unwrap();
        assert!((spec.omegas[1] - 18f64.sqrt()).abs() < 1e-14);
        assert!((spec.omegas[2] - 18f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn gapless_modes_of_even_rings() {
        let spec = bogoliubov_spectrum(8, 1, 1.0, 0.5).unwrap();
        assert_eq!(spec.gapless_modes(), vec![4]);
        assert_eq!(spec.omegas[4], 0.0);
        assert!(bogoliubov_spectrum(7, 1, 1.0, 0.5).unwrap().gapless_modes().is_empty());
    }

    #[test]
    fn limit_at_paper_coupling() {
        let rep = adiabaticity_limit(0.85, 30).unwrap();
        assert_eq!(rep.limit, Some(12));
    }

    #[test]
    fn noninteracting_limit() {
        // 4 sin^2(2 pi / 12) = 1 exactly, so S = 12 is excluded.
        let rep = adiabaticity_limit(0.0, 30).unwrap();
        assert_eq!(rep.limit, Some(11));
        let s12 = rep.rows.iter().find(|r| r.sites == 12).unwrap();
        assert!((s12.lowest_mode_ratio - 1.0).abs() < 1e-14);
    }

    #[test]
    fn stronger_interactions_never_lower_the_limit() {
        let mut last = 0;
        for vn in [0.0, 0.5, 0.85, 2.0, 10.0, 100.0] {
            let lim = adiabaticity_limit(vn, 200).unwrap().limit.unwrap();
            assert!(lim >= last, "vn={vn}");
            last = lim;
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(adiabaticity_limit(0.85, 2).is_err());
        assert!(bogoliubov_spectrum(3, 1, 0.0, 0.1).is_err());
        assert!(bogoliubov_spectrum(3, 1, 1.0, -0.1).is_err());
    }
}
