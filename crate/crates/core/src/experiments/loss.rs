use super::device::SplitterDevice;
use crate::error::{Error, Result};
use crate::model::annihilate_at_site;

/// One atom lost from `loss_site` halfway through a splitter run, compared with
/// a run that started with `N - 1` atoms.
///
/// Pipeline A evolves `(N, 0, ..., 0)` for `tau / 2`, removes an atom at
/// `loss_site`, and evolves the remaining `tau / 2` with `N - 1` atoms.
/// Pipeline B evolves `(N - 1, 0, ..., 0)` for `tau`. Returns `|<A|B>|^2`.
pub fn loss_experiment(
    sites: usize,
    atoms: usize,
    v_over_j: f64,
    tau: f64,
    loss_site: usize,
) -> Result<f64> {
    if atoms < 2 {
        return Err(Error::Config(format!("loss experiment needs N >= 2, got {atoms}")));
    }
    let full = SplitterDevice::new(sites, atoms, v_over_j)?;
    let reduced = SplitterDevice::new(sites, atoms - 1, v_over_j)?;

    let half = full.run(&full.loaded_first_site(), 0.5 * tau)?;
    let lost = annihilate_at_site(&half, loss_site)?;
    let a = reduced.run(&lost.state, 0.5 * tau)?;
    let b = reduced.run(&reduced.loaded_first_site(), tau)?;
    a.fidelity(&b)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use super::*;

    const TRITTER: f64 = TAU / 9.0;

    #[test]
    fn free_atoms_are_unaffected() {
        for site in 0..3 {
            let f = loss_experiment(3, 4, 0.0, TRITTER, site).unwrap();
            assert!((f - 1.0).abs() < 1e-10, "site {site}");
        }
    }

    #[test]
    fn weak_interactions_cost_little() {
        let n = 6;
        let f = loss_experiment(3, n, 0.1 / n as f64, TRITTER, 1).unwrap();
        assert!(f < 1.0);
        assert!(1.0 - f < 0.05, "{f}");
    }

    #[test]
    fn requires_two_atoms() {
        assert!(matches!(loss_experiment(3, 1, 0.0, TRITTER, 0), Err(Error::Config(_))));
    }

    #[test]
    fn empty_site_cannot_lose() {
        // At t = 0 only site 0 is occupied.
        assert!(matches!(
            loss_experiment(3, 3, 0.0, 0.0, 1),
            Err(Error::ImpossibleLoss { site: 1 })
        ));
    }
}
