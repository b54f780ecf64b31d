use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::basis::FockBasis;
use crate::error::Result;
use crate::model::{HamiltonianMatrix, ManyBodyState};

#[derive(Debug, Clone)]
enum Eigenvectors {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

/// Spectral decomposition `H = Q diag(lambda) Q^+` used to apply
/// `exp(-i H t)` exactly for any `t`.
///
/// Building one is the expensive step; afterwards every [`Propagator::evolve`]
/// is two dense matrix-vector products, so sweeps over time share one
/// instance. Real symmetric Hamiltonians (every term of the ring model) are
/// decomposed in real arithmetic.
#[derive(Debug, Clone)]
pub struct Propagator {
    basis: Arc<FockBasis>,
    eigenvalues: DVector<f64>,
    eigenvectors: Eigenvectors,
}

impl Propagator {
    pub fn new(h: &HamiltonianMatrix) -> Self {
        let basis = Arc::clone(h.basis());
        if h.is_real() {
            let real = h.matrix().map(|z| z.re);
            let eig = SymmetricEigen::new(real);
            Self {
                basis,
                eigenvalues: eig.eigenvalues,
                eigenvectors: Eigenvectors::Real(eig.eigenvectors),
            }
        } else {
            let eig = SymmetricEigen::new(h.matrix().clone());
            Self {
                basis,
                eigenvalues: eig.eigenvalues,
                eigenvectors: Eigenvectors::Complex(eig.eigenvectors),
            }
        }
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> DMatrix<Complex64> {
        match &self.eigenvectors {
            Eigenvectors::Real(q) => q.map(|x| Complex64::new(x, 0.0)),
            Eigenvectors::Complex(q) => q.clone(),
        }
    }

    /// `exp(-i H t) psi`.
    pub fn evolve(&self, state: &ManyBodyState, t: f64) -> Result<ManyBodyState> {
        self.basis.ensure_same(state.basis())?;
        let psi = state.amplitudes();
        let phase = |coeffs: &mut DVector<Complex64>| {
            for (c, e) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
                *c *= Complex64::from_polar(1.0, -e * t);
            }
        };
        let out = match &self.eigenvectors {
            Eigenvectors::Real(q) => {
                let re = psi.map(|z| z.re);
                let im = psi.map(|z| z.im);
                let (cr, ci) = (q.tr_mul(&re), q.tr_mul(&im));
                let mut coeffs = cr.zip_map(&ci, Complex64::new);
                phase(&mut coeffs);
                let re = q * coeffs.map(|z| z.re);
                let im = q * coeffs.map(|z| z.im);
                re.zip_map(&im, Complex64::new)
            }
            Eigenvectors::Complex(q) => {
                let mut coeffs = q.ad_mul(psi);
                phase(&mut coeffs);
                q * coeffs
            }
        };
        Ok(ManyBodyState::from_unitary_image(Arc::clone(&self.basis), out))
    }

    /// Dense `exp(-i H t)`.
    pub fn unitary(&self, t: f64) -> DMatrix<Complex64> {
        let q = self.eigenvectors();
        let d = DMatrix::from_diagonal(&self.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t)));
        &q * d * q.adjoint()
    }

    /// `max |Q diag(lambda) Q^+ - H|` (entrywise).
    pub fn reconstruction_error(&self, h: &HamiltonianMatrix) -> f64 {
        let q = self.eigenvectors();
        let d = DMatrix::from_diagonal(&self.eigenvalues.map(|e| Complex64::new(e, 0.0)));
        (&q * d * q.adjoint() - h.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest `|lambda|`, the spectral norm of a Hermitian `H`.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().map(|e| e.abs()).fold(0.0, f64::max)
    }
}

/// One-shot `exp(-i H t) psi`. Sweeps should build a [`Propagator`] once.
pub fn propagate(state: &ManyBodyState, h: &HamiltonianMatrix, t: f64) -> Result<ManyBodyState> {
    h.basis().ensure_same(state.basis())?;
    Propagator::new(h).evolve(state, t)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::error::Error;
    use crate::model::{hopping_hamiltonian, interaction_hamiltonian, Terms};

    fn random_state(basis: &Arc<FockBasis>, rng: &mut impl Rng) -> ManyBodyState {
        let v = DVector::from_fn(basis.dim(), |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        ManyBodyState::from_amplitudes(Arc::clone(basis), v).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let basis = FockBasis::new(3, 3).unwrap();
        let h = (hopping_hamiltonian(&basis, 1.0) + interaction_hamiltonian(&basis, 0.3)).unwrap();
        let psi = ManyBodyState::fock(Arc::clone(&basis), &[3, 0, 0]).unwrap();
        let out = propagate(&psi, &h, 0.0).unwrap();
        assert!((out.amplitudes() - psi.amplitudes()).norm() < 1e-13);
    }

    #[test]
    fn two_atoms_two_sites_return_probability() {
        // Each atom independently returns with probability cos^2(2 Jt).
        let basis = FockBasis::new(2, 2).unwrap();
        let h = hopping_hamiltonian(&basis, 1.0);
        let prop = Propagator::new(&h);
        let psi = ManyBodyState::fock(Arc::clone(&basis), &[2, 0]).unwrap();
        for &jt in &[0.1, 0.4, 1.3, 5.0] {
            let out = prop.evolve(&psi, jt).unwrap();
            let p = out.amplitudes()[0].norm_sqr();
            assert!((p - (2.0 * jt).cos().powi(4)).abs() < 1e-12, "jt={jt}");
        }
    }

    #[test]
    fn reversible_and_norm_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let basis = FockBasis::new(4, 4).unwrap();
        let h = (hopping_hamiltonian(&basis, 1.0) + interaction_hamiltonian(&basis, 0.25)).unwrap();
        let prop = Propagator::new(&h);
        let psi = random_state(&basis, &mut rng);
        let fwd = prop.evolve(&psi, 37.5).unwrap();
        assert!((fwd.norm() - 1.0).abs() < 1e-10);
        let back = prop.evolve(&fwd, -37.5).unwrap();
        assert!((back.amplitudes() - psi.amplitudes()).norm() < 1e-10);
    }

    #[test]
    fn energy_is_conserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let basis = FockBasis::new(3, 5).unwrap();
        let h = (hopping_hamiltonian(&basis, 1.0) + interaction_hamiltonian(&basis, 0.4)).unwrap();
        let prop = Propagator::new(&h);
        let psi = random_state(&basis, &mut rng);
        let e0 = h.expectation(&psi).unwrap();
        for &t in &[0.5, 10.0, 600.0] {
            let e = h.expectation(&prop.evolve(&psi, t).unwrap()).unwrap();
            assert!((e - e0).abs() < 1e-10);
        }
    }

    #[test]
    fn unitary_at_long_times() {
        let basis = FockBasis::new(3, 6).unwrap();
        let h = (hopping_hamiltonian(&basis, 1.0) + interaction_hamiltonian(&basis, 0.1)).unwrap();
        let u = Propagator::new(&h).unitary(600.0);
        let id = DMatrix::<Complex64>::identity(basis.dim(), basis.dim());
        let err = (u.adjoint() * &u - id).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn complex_hamiltonians_take_the_complex_path() {
        // A Peierls-phased hopping term is Hermitian but not real.
        let basis = FockBasis::new(3, 1).unwrap();
        let mut m = DMatrix::<Complex64>::zeros(3, 3);
        let z = Complex64::from_polar(1.0, 0.4);
        for j in 0..3 {
            m[((j + 1) % 3, j)] = -z;
            m[(j, (j + 1) % 3)] = -z.conj();
        }
        let h = HamiltonianMatrix::from_parts(Arc::clone(&basis), m, Terms::default());
        assert!(!h.is_real());
        let prop = Propagator::new(&h);
        assert!(prop.reconstruction_error(&h) < 1e-13);
        let psi = ManyBodyState::fock(Arc::clone(&basis), &[1, 0, 0]).unwrap();
        let out = prop.evolve(&psi, 3.0).unwrap();
        let want = prop.unitary(3.0) * psi.amplitudes();
        assert!((out.amplitudes() - want).norm() < 1e-12);
    }

    #[test]
    fn basis_mismatch_is_reported() {
        let h = hopping_hamiltonian(&FockBasis::new(3, 2).unwrap(), 1.0);
        let psi = ManyBodyState::fock(FockBasis::new(3, 1).unwrap(), &[1, 0, 0]).unwrap();
        assert!(matches!(
            propagate(&psi, &h, 1.0),
            Err(Error::BasisMismatch { .. })
        ));
    }
}
