use std::sync::Arc;

use crate::basis::FockBasis;
use crate::dynamics::Propagator;
use crate::error::Result;
use crate::model::{hopping_hamiltonian, interaction_hamiltonian, ManyBodyState};

/// A ring with lowered barriers: `N` atoms on `S` sites, `J = 1`, on-site
/// interaction `V/J`. Holds the diagonalized Hamiltonian so repeated runs at
/// different times are cheap.
#[derive(Debug, Clone)]
pub struct SplitterDevice {
    v_over_j: f64,
    propagator: Propagator,
}

impl SplitterDevice {
    pub fn new(sites: usize, atoms: usize, v_over_j: f64) -> Result<Self> {
        let basis = FockBasis::new(sites, atoms)?;
        Self::on_basis(&basis, v_over_j)
    }

    pub fn on_basis(basis: &Arc<FockBasis>, v_over_j: f64) -> Result<Self> {
        let mut h = hopping_hamiltonian(basis, 1.0);
        if v_over_j != 0.0 {
            h = (h + interaction_hamiltonian(basis, v_over_j))?;
        }
        Ok(Self {
            v_over_j,
            propagator: Propagator::new(&h),
        })
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        self.propagator.basis()
    }

    pub fn sites(&self) -> usize {
        self.basis().sites()
    }

    pub fn atoms(&self) -> usize {
        self.basis().atoms()
    }

    pub fn v_over_j(&self) -> f64 {
        self.v_over_j
    }

    pub fn fock(&self, occupation: &[u32]) -> Result<ManyBodyState> {
        ManyBodyState::fock(Arc::clone(self.basis()), occupation)
    }

    /// `(N, 0, ..., 0)`.
    pub fn loaded_first_site(&self) -> ManyBodyState {
        let mut occ = vec![0u32; self.sites()];
        occ[0] = self.atoms() as u32;
        self.fock(&occ).expect("occupation matches basis")
    }

    /// Evolves for dimensionless time `Jt`.
    pub fn run(&self, state: &ManyBodyState, jt: f64) -> Result<ManyBodyState> {
        self.propagator.evolve(state, jt)
    }
}

/// Propagates the Fock state `input` for time `Jt` under hopping (`J = 1`)
/// plus interaction `V/J`.
pub fn run_splitter(
    sites: usize,
    atoms: usize,
    v_over_j: f64,
    jt: f64,
    input: &[u32],
) -> Result<ManyBodyState> {
    let device = SplitterDevice::new(sites, atoms, v_over_j)?;
    let psi = device.fock(input)?;
    device.run(&psi, jt)
}
