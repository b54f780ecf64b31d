//! Bose-Hubbard ring: many-body states and the Hamiltonian terms
//!
//! ```text
//! H = sum_j eps_j n_j  -  J sum_j (a_j^+ a_{j+1} + h.c.)  +  V sum_j a_j^+2 a_j^2
//! ```
//!
//! with periodic site indices (`a_S = a_0`). All builders return dense
//! Hermitian matrices over a fixed-`N` [`FockBasis`].

use std::ops::Add;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::FockBasis;
use crate::error::{Error, Result};

/// Physical configuration of the ring. Rates share one unit; the experiments
/// use `J = 1` so times are dimensionless `Jt`.
#[derive(Debug, Clone, PartialEq)]
pub struct RingSpec {
    pub sites: usize,
    pub tunneling: f64,
    pub interaction: f64,
    pub offsets: Vec<f64>,
    pub atoms: usize,
}

impl RingSpec {
    /// Uniform ring without offsets.
    pub fn new(sites: usize, atoms: usize, tunneling: f64, interaction: f64) -> Result<Self> {
        let spec = Self {
            sites,
            tunneling,
            interaction,
            offsets: vec![0.0; sites],
            atoms,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_offsets(mut self, offsets: Vec<f64>) -> Result<Self> {
        self.offsets = offsets;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < 2 {
            return Err(Error::Config(format!("S must be >= 2, got {}", self.sites)));
        }
        if self.atoms < 1 {
            return Err(Error::Config(format!("N must be >= 1, got {}", self.atoms)));
        }
        if !(self.tunneling > 0.0) {
            return Err(Error::Config(format!("J must be > 0, got {}", self.tunneling)));
        }
        if !self.interaction.is_finite() {
            return Err(Error::Config("V must be finite".into()));
        }
        if self.offsets.len() != self.sites {
            return Err(Error::Config(format!(
                "expected {} site offsets, got {}",
                self.sites,
                self.offsets.len()
            )));
        }
        Ok(())
    }

    pub fn basis(&self) -> Result<Arc<FockBasis>> {
        FockBasis::new(self.sites, self.atoms)
    }

    /// Full Hamiltonian: hopping + interaction + offsets.
    pub fn hamiltonian(&self, basis: &Arc<FockBasis>) -> Result<HamiltonianMatrix> {
        if basis.sites() != self.sites || basis.atoms() != self.atoms {
            return Err(Error::BasisMismatch {
                expected_sites: self.sites,
                expected_atoms: self.atoms,
                sites: basis.sites(),
                atoms: basis.atoms(),
            });
        }
        let h = hopping_hamiltonian(basis, self.tunneling)
            + interaction_hamiltonian(basis, self.interaction);
        h + offset_hamiltonian(basis, &self.offsets)?
    }
}

/// Which terms a [`HamiltonianMatrix`] contains.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Terms {
    pub hopping: bool,
    pub interaction: bool,
    pub offsets: bool,
}

#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    basis: Arc<FockBasis>,
    matrix: DMatrix<Complex64>,
    terms: Terms,
}

impl HamiltonianMatrix {
    #[cfg(test)]
    pub(crate) fn from_parts(basis: Arc<FockBasis>, matrix: DMatrix<Complex64>, terms: Terms) -> Self {
        Self { basis, matrix, terms }
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn terms(&self) -> Terms {
        self.terms
    }

    /// Entrywise `max |H - H^+|`.
    pub fn hermiticity_error(&self) -> f64 {
        let m = &self.matrix;
        let mut worst = 0.0f64;
        for i in 0..m.nrows() {
            for j in 0..=i {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// True when every entry has an exactly zero imaginary part, which is the
    /// case for all terms of the ring Hamiltonian.
    pub fn is_real(&self) -> bool {
        self.matrix.iter().all(|z| z.im == 0.0)
    }

    /// `<psi|H|psi>`.
    pub fn expectation(&self, state: &ManyBodyState) -> Result<f64> {
        self.basis.ensure_same(&state.basis)?;
        let h_psi = &self.matrix * &state.amplitudes;
        Ok(state.amplitudes.dotc(&h_psi).re)
    }

    pub fn try_add(self, rhs: HamiltonianMatrix) -> Result<HamiltonianMatrix> {
        self.basis.ensure_same(&rhs.basis)?;
        Ok(HamiltonianMatrix {
            basis: self.basis,
            matrix: self.matrix + rhs.matrix,
            terms: Terms {
                hopping: self.terms.hopping || rhs.terms.hopping,
                interaction: self.terms.interaction || rhs.terms.interaction,
                offsets: self.terms.offsets || rhs.terms.offsets,
            },
        })
    }
}

impl Add for HamiltonianMatrix {
    type Output = Result<HamiltonianMatrix>;

    fn add(self, rhs: HamiltonianMatrix) -> Self::Output {
        self.try_add(rhs)
    }
}

impl Add<HamiltonianMatrix> for Result<HamiltonianMatrix> {
    type Output = Result<HamiltonianMatrix>;

    fn add(self, rhs: HamiltonianMatrix) -> Self::Output {
        self?.try_add(rhs)
    }
}

/// `-J sum_j (a_j^+ a_{j+1} + a_{j+1}^+ a_j)` with `j + 1` taken mod S.
///
/// For S = 2 both bonds join the same pair of sites, so every hop is counted
/// twice.
pub fn hopping_hamiltonian(basis: &Arc<FockBasis>, tunneling: f64) -> HamiltonianMatrix {
    let s = basis.sites();
    let dim = basis.dim();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    let mut scratch = vec![0u32; s];
    for (col, state) in basis.states().iter().enumerate() {
        for j in 0..s {
            let next = (j + 1) % s;
            for (to, from) in [(j, next), (next, j)] {
                if state[from] == 0 {
                    continue;
                }
                scratch.copy_from_slice(state);
                let mut amp = f64::from(scratch[from]).sqrt();
                scratch[from] -= 1;
                amp *= f64::from(scratch[to] + 1).sqrt();
                scratch[to] += 1;
                let row = basis
                    .lookup(&scratch)
                    .expect("hopping conserves particle number");
                m[(row, col)] -= Complex64::new(tunneling * amp, 0.0);
            }
        }
    }
    HamiltonianMatrix {
        basis: Arc::clone(basis),
        matrix: m,
        terms: Terms {
            hopping: true,
            ..Terms::default()
        },
    }
}

/// Diagonal `V sum_j n_j (n_j - 1)`.
pub fn interaction_hamiltonian(basis: &Arc<FockBasis>, interaction: f64) -> HamiltonianMatrix {
    let diag = basis.states().iter().map(|s| {
        let pairs: u64 = s.iter().map(|&n| u64::from(n) * u64::from(n.saturating_sub(1))).sum();
        interaction * pairs as f64
    });
    HamiltonianMatrix {
        basis: Arc::clone(basis),
        matrix: diagonal(diag, basis.dim()),
        terms: Terms {
            interaction: true,
            ..Terms::default()
        },
    }
}

/// Diagonal `sum_j eps_j n_j`.
pub fn offset_hamiltonian(basis: &Arc<FockBasis>, offsets: &[f64]) -> Result<HamiltonianMatrix> {
    check_len("site offsets", offsets.len(), basis.sites())?;
    let diag = basis
        .states()
        .iter()
        .map(|s| s.iter().zip(offsets).map(|(&n, e)| f64::from(n) * e).sum());
    Ok(HamiltonianMatrix {
        basis: Arc::clone(basis),
        matrix: diagonal(diag, basis.dim()),
        terms: Terms {
            offsets: true,
            ..Terms::default()
        },
    })
}

fn diagonal(values: impl Iterator<Item = f64>, dim: usize) -> DMatrix<Complex64> {
    let d = DVector::from_iterator(dim, values.map(|x| Complex64::new(x, 0.0)));
    DMatrix::from_diagonal(&d)
}

fn check_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got == want {
        Ok(())
    } else {
        Err(Error::Config(format!("expected {want} {what}, got {got}")))
    }
}

/// Normalized amplitude vector over a [`FockBasis`].
#[derive(Debug, Clone)]
pub struct ManyBodyState {
    basis: Arc<FockBasis>,
    amplitudes: DVector<Complex64>,
}

impl ManyBodyState {
    /// Normalizes `amplitudes`; the zero vector is rejected.
    pub fn from_amplitudes(basis: Arc<FockBasis>, amplitudes: DVector<Complex64>) -> Result<Self> {
        check_len("amplitudes", amplitudes.len(), basis.dim())?;
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Domain("state has zero or non-finite norm".into()));
        }
        Ok(Self {
            basis,
            amplitudes: amplitudes.unscale(norm),
        })
    }

    /// Amplitudes already known to be normalized (output of a unitary).
    pub(crate) fn from_unitary_image(basis: Arc<FockBasis>, amplitudes: DVector<Complex64>) -> Self {
        Self { basis, amplitudes }
    }

    /// The Fock state `|n_0, ..., n_{S-1}>`.
    pub fn fock(basis: Arc<FockBasis>, occupation: &[u32]) -> Result<Self> {
        check_len("occupations", occupation.len(), basis.sites())?;
        let total: u32 = occupation.iter().sum();
        if total as usize != basis.atoms() {
            return Err(Error::Config(format!(
                "occupation {occupation:?} holds {total} atoms, basis has N={}",
                basis.atoms()
            )));
        }
        let idx = basis.lookup(occupation).expect("valid occupation is enumerated");
        let mut amplitudes = DVector::zeros(basis.dim());
        amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(Self { basis, amplitudes })
    }

    /// `(sum_j c_j a_j^+)^N |0> / sqrt(N!)`, normalized. Amplitude on
    /// `|n>` is `sqrt(N!) prod_j c_j^{n_j} / sqrt(n_j!)`.
    pub fn condensate(basis: Arc<FockBasis>, mode: &[Complex64]) -> Result<Self> {
        check_len("mode coefficients", mode.len(), basis.sites())?;
        let amps = basis.states().iter().map(|s| {
            s.iter()
                .zip(mode)
                .fold(Complex64::new(1.0, 0.0), |acc, (&n, c)| {
                    acc * c.powu(n) / (0.5 * ln_factorial(n)).exp()
                })
        });
        let v = DVector::from_iterator(basis.dim(), amps);
        Self::from_amplitudes(basis, v)
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &ManyBodyState) -> Result<Complex64> {
        self.basis.ensure_same(&other.basis)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &ManyBodyState) -> Result<f64> {
        Ok(self.overlap(other)?.norm_sqr())
    }

    /// One-body density matrix `rho[(j, l)] = <a_j^+ a_l>`.
    pub fn one_body_density(&self) -> DMatrix<Complex64> {
        let s = self.basis.sites();
        let mut rho = DMatrix::<Complex64>::zeros(s, s);
        let mut scratch = vec![0u32; s];
        for (i, state) in self.basis.states().iter().enumerate() {
            let c = self.amplitudes[i];
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for l in 0..s {
                if state[l] == 0 {
                    continue;
                }
                for j in 0..s {
                    scratch.copy_from_slice(state);
                    let mut amp = f64::from(scratch[l]).sqrt();
                    scratch[l] -= 1;
                    amp *= f64::from(scratch[j] + 1).sqrt();
                    scratch[j] += 1;
                    let row = self.basis.lookup(&scratch).expect("same sector");
                    rho[(j, l)] += self.amplitudes[row].conj() * c * amp;
                }
            }
        }
        rho
    }

    /// Mean occupation `<n_j>` of each site.
    pub fn site_populations(&self) -> Vec<f64> {
        let mut pops = vec![0.0; self.basis.sites()];
        for (i, state) in self.basis.states().iter().enumerate() {
            let p = self.amplitudes[i].norm_sqr();
            for (acc, &n) in pops.iter_mut().zip(state.iter()) {
                *acc += p * f64::from(n);
            }
        }
        pops
    }
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| f64::from(k).ln()).sum()
}

/// Multiplies each amplitude by `exp(i sum_j n_j phi_j)`.
pub fn phase_imprint(state: &ManyBodyState, phases: &[f64]) -> Result<ManyBodyState> {
    check_len("phases", phases.len(), state.basis.sites())?;
    let amplitudes = DVector::from_iterator(
        state.basis.dim(),
        state.basis.states().iter().zip(state.amplitudes.iter()).map(|(s, &a)| {
            let theta: f64 = s.iter().zip(phases).map(|(&n, p)| f64::from(n) * p).sum();
            a * Complex64::from_polar(1.0, theta)
        }),
    );
    Ok(ManyBodyState::from_unitary_image(Arc::clone(&state.basis), amplitudes))
}

/// Result of removing one particle: the renormalized `(N - 1)` state and the
/// pre-normalization weight `|| a_j psi ||^2 = <n_j>`.
#[derive(Debug, Clone)]
pub struct Annihilated {
    pub state: ManyBodyState,
    pub weight: f64,
}

/// Occupation weight below which a site counts as empty.
pub const LOSS_WEIGHT_FLOOR: f64 = 1e-24;

/// Applies `a_site` and renormalizes.
pub fn annihilate_at_site(state: &ManyBodyState, site: usize) -> Result<Annihilated> {
    let basis = &state.basis;
    if site >= basis.sites() {
        return Err(Error::Config(format!(
            "site {site} out of range for S={}",
            basis.sites()
        )));
    }
    if basis.atoms() == 0 {
        return Err(Error::ImpossibleLoss { site });
    }
    let reduced = FockBasis::with_any_atoms(basis.sites(), basis.atoms() - 1)?;
    let mut out = DVector::<Complex64>::zeros(reduced.dim());
    let mut scratch = vec![0u32; basis.sites()];
    for (i, s) in basis.states().iter().enumerate() {
        if s[site] == 0 {
            continue;
        }
        scratch.copy_from_slice(s);
        scratch[site] -= 1;
        let row = reduced.lookup(&scratch).expect("reduced sector");
        out[row] += state.amplitudes[i] * f64::from(s[site]).sqrt();
    }
    let weight = out.norm_squared();
    // Eigenbasis round trips leave ~1e-32 of weight on sites that are
    // exactly empty; treat anything at that level as empty.
    if weight <= LOSS_WEIGHT_FLOOR {
        return Err(Error::ImpossibleLoss { site });
    }
    Ok(Annihilated {
        state: ManyBodyState::from_amplitudes(reduced, out)?,
        weight,
    })
}
