use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The Fock space for `(sites, atoms)` is too large for dense storage.
    #[error("basis for S={sites}, N={atoms} has dimension {dimension}, above the limit of {limit}")]
    Sizing {
        sites: usize,
        atoms: usize,
        dimension: u128,
        limit: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Two objects that must share a Fock basis do not.
    #[error("basis mismatch: expected S={expected_sites}, N={expected_atoms}, got S={sites}, N={atoms}")]
    BasisMismatch {
        expected_sites: usize,
        expected_atoms: usize,
        sites: usize,
        atoms: usize,
    },

    /// Annihilating at a site that never holds a particle leaves the zero vector.
    #[error("impossible loss: site {site} has zero occupation weight")]
    ImpossibleLoss { site: usize },

    #[error("domain error: {0}")]
    Domain(String),
}
