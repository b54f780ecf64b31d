use std::f64::consts::TAU;

use rayon::prelude::*;

use super::device::SplitterDevice;
use super::{check_grid, Column, ExperimentResult};
use crate::error::Result;
use crate::model::{phase_imprint, ManyBodyState};

/// Closed-form mean populations of the three-path interferometer (tritter,
/// phase step `phi` between neighbours, inverse tritter), normalized to one.
pub fn three_path_populations(phi: f64) -> [f64; 3] {
    let third = TAU / 3.0;
    [
        (3.0 + 4.0 * phi.cos() + 2.0 * (2.0 * phi).cos()) / 9.0,
        (3.0 + 4.0 * (phi - third).cos() + 2.0 * (2.0 * phi + third).cos()) / 9.0,
        (3.0 + 4.0 * (phi + third).cos() + 2.0 * (2.0 * phi - third).cos()) / 9.0,
    ]
}

fn normalized_populations(state: &ManyBodyState) -> Vec<f64> {
    let n = state.basis().atoms() as f64;
    state.site_populations().into_iter().map(|p| p / n).collect()
}

fn imprint_and_invert(device: &SplitterDevice, split: &ManyBodyState, tau: f64, phi: f64) -> Result<Vec<f64>> {
    let phases: Vec<f64> = (0..device.sites()).map(|j| j as f64 * phi).collect();
    let shifted = phase_imprint(split, &phases)?;
    let out = device.run(&shifted, (device.sites() - 1) as f64 * tau)?;
    Ok(normalized_populations(&out))
}

/// Splitter for `tau`, phase `j * phi` on site `j`, then the inverse splitter
/// (evolution for `(S - 1) tau`). Returns `<n_j> / N`.
pub fn interferometer(
    sites: usize,
    atoms: usize,
    v_over_j: f64,
    tau: f64,
    phi: f64,
    input: &[u32],
) -> Result<Vec<f64>> {
    let device = SplitterDevice::new(sites, atoms, v_over_j)?;
    let split = device.run(&device.fock(input)?, tau)?;
    imprint_and_invert(&device, &split, tau, phi)
}

/// [`interferometer`] on input `(N, 0, ..., 0)` over a strictly increasing
/// `phi` grid. Columns: `phi, N0, ..., N{S-1}`.
pub fn interferometer_scan(
    sites: usize,
    atoms: usize,
    v_over_j: f64,
    tau: f64,
    phis: &[f64],
) -> Result<ExperimentResult> {
    check_grid("phi", phis)?;
    let device = SplitterDevice::new(sites, atoms, v_over_j)?;
    let split = device.run(&device.loaded_first_site(), tau)?;
    let rows: Vec<Vec<f64>> = phis
        .par_iter()
        .map(|&phi| {
            let mut row = vec![phi];
            row.extend(imprint_and_invert(&device, &split, tau, phi)?);
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let mut columns = vec![Column::new("phi", "rad")];
    columns.extend((0..sites).map(|j| Column::new(&format!("N{j}"), "")));
    let mut result = ExperimentResult::new("interferometer", columns)
        .param("sites", sites)
        .param("atoms", atoms)
        .param("v_over_j", v_over_j)
        .param("tau", tau);
    for row in rows {
        result.push_row(row)?;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::splitter::inverse_splitter_fidelity;

    const TRITTER: f64 = TAU / 9.0;

    #[test]
    fn closed_form_landmarks() {
        let p = three_path_populations(0.0);
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1].abs() < 1e-15 && p[2].abs() < 1e-15);
        let p = three_path_populations(TAU / 3.0);
        assert!(p[0].abs() < 1e-15 && (p[1] - 1.0).abs() < 1e-15 && p[2].abs() < 1e-15);
        let p = three_path_populations(2.0 * TAU / 3.0);
        assert!(p[0].abs() < 1e-15 && p[1].abs() < 1e-15 && (p[2] - 1.0).abs() < 1e-15);
        for i in 0..100 {
            let p = three_path_populations(0.0731 * f64::from(i));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            assert!(p.iter().all(|x| *x > -1e-15));
        }
    }

    #[test]
    fn zero_phase_returns_atom() {
        let p = interferometer(3, 1, 0.0, TRITTER, 0.0, &[1, 0, 0]).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_closed_form_for_one_and_five_atoms() {
        let phis: Vec<f64> = (0..37).map(|i| f64::from(i) * TAU / 36.0).collect();
        for atoms in [1, 5] {
            let scan = interferometer_scan(3, atoms, 0.0, TRITTER, &phis).unwrap();
            for row in scan.rows() {
                let want = three_path_populations(row[0]);
                for k in 0..3 {
                    assert!((row[k + 1] - want[k]).abs() < 1e-10, "N={atoms} phi={}", row[0]);
                }
            }
        }
    }

    #[test]
    fn zero_phase_agrees_with_inverse_fidelity() {
        for (s, tau) in [(3, TRITTER), (4, PI / 4.0), (5, 0.9), (6, 1.7)] {
            let mut occ = vec![0; s];
            occ[0] = 1;
            let p = interferometer(s, 1, 0.0, tau, 0.0, &occ).unwrap();
            assert!((p[0] - inverse_splitter_fidelity(s, tau)).abs() < 1e-10, "S={s}");
        }
    }

    #[test]
    fn populations_sum_to_one_with_interactions() {
        let p = interferometer(3, 4, 0.3, TRITTER, 1.1, &[4, 0, 0]).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.iter().all(|x| (-1e-12..=1.0 + 1e-12).contains(x)));
    }

    #[test]
    fn rejects_unsorted_grid() {
        assert!(interferometer_scan(3, 1, 0.0, TRITTER, &[1.0, 0.5]).is_err());
    }
}
