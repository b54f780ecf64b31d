//! Occupation-number basis for `N` bosons on an `S`-site ring.
//!
//! States are enumerated in reverse-lexicographic order, so `(N, 0, ..., 0)`
//! always has index 0 and `(0, ..., 0, N)` is last.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest basis dimension accepted by [`FockBasis::new`].
///
/// Hamiltonians are stored as dense complex matrices, so a basis of this size
/// costs `16 * MAX_BASIS_DIM^2` bytes (~400 MB) per matrix. The largest cases
/// used by the experiments are S=9, N=5 (1287) and S=3, N=40 (861).
pub const MAX_BASIS_DIM: usize = 5000;

/// `binomial(n, k)` with overflow reported as `None`.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

/// Dimension of the fixed-`N` Fock space, `binomial(N + S - 1, S - 1)`.
pub fn fock_dimension(sites: usize, atoms: usize) -> Option<u128> {
    binomial((atoms + sites - 1) as u64, (sites - 1) as u64)
}

#[derive(Debug, Clone)]
pub struct FockBasis {
    sites: usize,
    atoms: usize,
    states: Vec<Box<[u32]>>,
    index: HashMap<Box<[u32]>, usize>,
}

impl FockBasis {
    pub fn new(sites: usize, atoms: usize) -> Result<Arc<Self>> {
        if sites < 2 {
            return Err(Error::Config(format!("site count must be >= 2, got {sites}")));
        }
        if atoms < 1 {
            return Err(Error::Config(format!("atom count must be >= 1, got {atoms}")));
        }
        Self::with_any_atoms(sites, atoms)
    }

    /// Like [`FockBasis::new`] but also accepts `N = 0` (the vacuum), which the
    /// loss pipeline can reach from `N = 1`.
    pub(crate) fn with_any_atoms(sites: usize, atoms: usize) -> Result<Arc<Self>> {
        let too_big = |dimension| Error::Sizing {
            sites,
            atoms,
            dimension,
            limit: MAX_BASIS_DIM,
        };
        let dim = fock_dimension(sites, atoms).ok_or_else(|| too_big(u128::MAX))?;
        if dim > MAX_BASIS_DIM as u128 {
            return Err(too_big(dim));
        }

        let mut states = Vec::with_capacity(dim as usize);
        let mut current = vec![0u32; sites];
        enumerate(&mut current, 0, atoms as u32, &mut states);
        debug_assert_eq!(states.len() as u128, dim);

        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Arc::new(Self {
            sites,
            atoms,
            states,
            index,
        }))
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Box<[u32]>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &[u32] {
        &self.states[i]
    }

    pub fn lookup(&self, occupation: &[u32]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    /// Both bases describe the same `(S, N)` sector. Enumeration is
    /// deterministic, so equal shapes imply identical indexing.
    pub fn same_shape(&self, other: &FockBasis) -> bool {
        self.sites == other.sites && self.atoms == other.atoms
    }

    pub(crate) fn ensure_same(&self, other: &FockBasis) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                expected_sites: self.sites,
                expected_atoms: self.atoms,
                sites: other.sites,
                atoms: other.atoms,
            })
        }
    }
}

fn enumerate(current: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<Box<[u32]>>) {
    if pos == current.len() - 1 {
        current[pos] = remaining;
        out.push(current.to_vec().into_boxed_slice());
        return;
    }
    for n in (0..=remaining).rev() {
        current[pos] = n;
        enumerate(current, pos + 1, remaining - n, out);
    }
    current[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(FockBasis::new(3, 2).unwrap().dim(), 6);
        assert_eq!(FockBasis::new(9, 5).unwrap().dim(), 1287);
        assert_eq!(FockBasis::new(3, 40).unwrap().dim(), 861);
    }

    #[test]
    fn two_sites_one_atom() {
        let b = FockBasis::new(2, 1).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.state(0), &[1, 0]);
        assert_eq!(b.state(1), &[0, 1]);
    }

    #[test]
    fn reverse_lexicographic_order() {
        let b = FockBasis::new(3, 2).unwrap();
        let got: Vec<Vec<u32>> = b.states().iter().map(|s| s.to_vec()).collect();
        let want = vec![
            vec![2, 0, 0],
            vec![1, 1, 0],
            vec![1, 0, 1],
            vec![0, 2, 0],
            vec![0, 1, 1],
            vec![0, 0, 2],
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn lookup_inverts_enumeration() {
        let b = FockBasis::new(4, 5).unwrap();
        for (i, s) in b.states().iter().enumerate() {
            assert_eq!(s.iter().sum::<u32>(), 5);
            assert_eq!(b.lookup(s), Some(i));
        }
        assert_eq!(b.lookup(&[1, 1, 1, 1]), None);
    }

    #[test]
    fn oversized_basis_names_shape() {
        match FockBasis::new(12, 30) {
            Err(Error::Sizing { sites, atoms, .. }) => assert_eq!((sites, atoms), (12, 30)),
            other => panic!("expected sizing error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(matches!(FockBasis::new(1, 3), Err(Error::Config(_))));
        assert!(matches!(FockBasis::new(3, 0), Err(Error::Config(_))));
    }

    #[test]
    fn binomial_matches_pascal() {
        for n in 0..30u64 {
            for k in 1..n {
                let lhs = binomial(n, k).unwrap();
                let rhs = binomial(n - 1, k - 1).unwrap() + binomial(n - 1, k).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
