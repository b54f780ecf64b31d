use rayon::prelude::*;

use super::crossing::{first_downward_crossing, geometric_scan, CriticalValue};
use super::device::SplitterDevice;
use super::{check_grid, Column, ExperimentResult};
use crate::error::{Error, Result};
use crate::model::ManyBodyState;

/// Fidelity level that defines the critical interaction and timing error.
pub const CRITICAL_FIDELITY: f64 = 0.95;

const SCAN_START: f64 = 1e-5;
const SCAN_STOP: f64 = 4.0;
const SCAN_RATIO: f64 = 1.5;
const CROSSING_TOL: f64 = 1e-4;

fn check_target(target: f64) -> Result<()> {
    if target > 0.0 && target < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("fidelity target must lie in (0, 1), got {target}")))
    }
}

/// Splitter followed by inverse splitter on `(N, 0, ..., 0)`, compared with
/// and without interactions.
#[derive(Debug, Clone)]
pub struct InteractionFidelity {
    sites: usize,
    atoms: usize,
    tau: f64,
    reference: ManyBodyState,
}

impl InteractionFidelity {
    pub fn new(sites: usize, atoms: usize, tau: f64) -> Result<Self> {
        let free = SplitterDevice::new(sites, atoms, 0.0)?;
        let reference = Self::pipeline(&free, tau)?;
        Ok(Self {
            sites,
            atoms,
            tau,
            reference,
        })
    }

    fn pipeline(device: &SplitterDevice, tau: f64) -> Result<ManyBodyState> {
        let split = device.run(&device.loaded_first_site(), tau)?;
        device.run(&split, (device.sites() - 1) as f64 * tau)
    }

    /// `|<psi_{V=0}|psi_V>|^2` at interaction scale `V N / J`.
    pub fn at(&self, vn_over_j: f64) -> Result<f64> {
        if !(vn_over_j >= 0.0) || !vn_over_j.is_finite() {
            return Err(Error::Config(format!("VN/J must be finite and >= 0, got {vn_over_j}")));
        }
        let v_over_j = vn_over_j / self.atoms as f64;
        let device = SplitterDevice::on_basis(self.reference.basis(), v_over_j)?;
        let out = Self::pipeline(&device, self.tau)?;
        self.reference.fidelity(&out)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

pub fn interaction_fidelity(sites: usize, atoms: usize, vn_over_j: f64, tau: f64) -> Result<f64> {
    InteractionFidelity::new(sites, atoms, tau)?.at(vn_over_j)
}

/// Columns: `vn_over_j, fidelity`.
pub fn interaction_fidelity_scan(
    sites: usize,
    atoms: usize,
    tau: f64,
    vn_grid: &[f64],
) -> Result<ExperimentResult> {
    check_grid("VN/J", vn_grid)?;
    let model = InteractionFidelity::new(sites, atoms, tau)?;
    let fids: Vec<f64> = vn_grid.par_iter().map(|&vn| model.at(vn)).collect::<Result<_>>()?;
    let mut result = ExperimentResult::new(
        "scan-interactions",
        vec![Column::new("vn_over_j", ""), Column::new("fidelity", "")],
    )
    .param("sites", sites)
    .param("atoms", atoms)
    .param("tau", tau);
    for (vn, f) in vn_grid.iter().zip(fids) {
        result.push_row(vec![*vn, f])?;
    }
    Ok(result)
}

/// First `VN/J` where the interaction fidelity drops below `target`, from a
/// geometric scan `1e-5, 1.5e-5, ..., 4` refined by bisection.
pub fn critical_interaction(sites: usize, atoms: usize, tau: f64, target: f64) -> Result<CriticalValue> {
    let scan = geometric_scan(SCAN_START, SCAN_STOP, SCAN_RATIO)?;
    critical_interaction_with_scan(sites, atoms, tau, target, &scan)
}

pub fn critical_interaction_with_scan(
    sites: usize,
    atoms: usize,
    tau: f64,
    target: f64,
    scan: &[f64],
) -> Result<CriticalValue> {
    check_target(target)?;
    let model = InteractionFidelity::new(sites, atoms, tau)?;
    first_downward_crossing(|vn| model.at(vn), scan, target, CROSSING_TOL, CROSSING_TOL)
}

/// A single splitter on `(N, 0, ..., 0)` with `V = 0`, run for `tau` and for
/// `tau + eps`.
#[derive(Debug, Clone)]
pub struct TimingFidelity {
    device: SplitterDevice,
    tau: f64,
    reference: ManyBodyState,
}

impl TimingFidelity {
    pub fn new(sites: usize, atoms: usize, tau: f64) -> Result<Self> {
        let device = SplitterDevice::new(sites, atoms, 0.0)?;
        let reference = device.run(&device.loaded_first_site(), tau)?;
        Ok(Self {
            device,
            tau,
            reference,
        })
    }

    /// `|<psi(tau)|psi(tau + eps)>|^2`.
    pub fn at(&self, eps: f64) -> Result<f64> {
        let late = self.device.run(&self.device.loaded_first_site(), self.tau + eps)?;
        self.reference.fidelity(&late)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

/// First `eps > 0` where the timing fidelity drops below `target`.
pub fn critical_timing_error(sites: usize, atoms: usize, tau: f64, target: f64) -> Result<CriticalValue> {
    check_target(target)?;
    let model = TimingFidelity::new(sites, atoms, tau)?;
    let scan = geometric_scan(SCAN_START, SCAN_STOP, SCAN_RATIO)?;
    first_downward_crossing(|eps| model.at(eps), &scan, target, CROSSING_TOL, CROSSING_TOL)
}

/// Columns: `eps, fidelity`. The summary carries the critical `eps` at
/// [`CRITICAL_FIDELITY`] and the fractional error `eps / tau`.
pub fn timing_error_scan(sites: usize, atoms: usize, tau: f64, eps_grid: &[f64]) -> Result<ExperimentResult> {
    check_grid("epsilon", eps_grid)?;
    let model = TimingFidelity::new(sites, atoms, tau)?;
    let fids: Vec<f64> = eps_grid.par_iter().map(|&e| model.at(e)).collect::<Result<_>>()?;
    let crit = critical_timing_error(sites, atoms, tau, CRITICAL_FIDELITY)?;

    let mut result = ExperimentResult::new(
        "scan-timing",
        vec![Column::new("eps", "1/J"), Column::new("fidelity", "")],
    )
    .param("sites", sites)
    .param("atoms", atoms)
    .param("tau", tau);
    for (e, f) in eps_grid.iter().zip(fids) {
        result.push_row(vec![*e, f])?;
    }
    result.add_summary("target_fidelity", CRITICAL_FIDELITY);
    result.add_summary("crossing_status", crit.status.as_str());
    if let Some(eps) = crit.value {
        result.add_summary("critical_eps", eps);
        result.add_summary("critical_eps_over_tau", eps / tau);
    }
    result.add_summary("non_monotone", crit.non_monotone);
    Ok(result)
}
