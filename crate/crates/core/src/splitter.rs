//! Single-particle algebra of the ring splitter.
//!
//! Lowering the barriers for a time `t` applies
//!
//! ```text
//! R_S(Jt) = U^-1 diag(exp(i 2 Jt cos(2 pi k / S))) U,    U_kj = exp(i 2 pi j k / S) / sqrt(S)
//! ```
//!
//! to the site mode operators. `R_S` is circulant, so everything here is
//! evaluated in closed form from its first row
//! `g_d = (1/S) sum_k exp(i 2 Jt cos(2 pi k / S)) exp(i 2 pi k d / S)`.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default acceptance level for the balance metric.
pub const BALANCE_THRESHOLD: f64 = 1e-4;

/// Largest grid spacing used by [`find_balance_time`].
pub const MAX_GRID_STEP: f64 = 1e-3;

/// Golden-section refinement stops once the bracket is this narrow.
pub const REFINE_TOLERANCE: f64 = 1e-8;

/// `U_kj = exp(i 2 pi j k / S) / sqrt(S)`, the map from site modes to ring
/// momentum modes.
pub fn mode_transform(sites: usize) -> DMatrix<Complex64> {
    let norm = (sites as f64).sqrt();
    DMatrix::from_fn(sites, sites, |k, j| {
        Complex64::from_polar(1.0 / norm, TAU * ((j * k) % sites) as f64 / sites as f64)
    })
}

/// Precomputed band energies and Fourier phases for one ring size.
///
/// `first_row` is the hot loop of the balance scan, so the trigonometry is
/// hoisted out of it.
#[derive(Debug, Clone)]
pub struct RingFourier {
    sites: usize,
    /// `2 cos(2 pi k / S)`
    band: Vec<f64>,
    /// `exp(i 2 pi m / S)` for `m = 0..S`
    roots: Vec<Complex64>,
}

impl RingFourier {
    pub fn new(sites: usize) -> Self {
        assert!(sites >= 2, "ring needs at least two sites");
        let band = (0..sites)
            .map(|k| 2.0 * (TAU * k as f64 / sites as f64).cos())
            .collect();
        let roots = (0..sites)
            .map(|m| Complex64::from_polar(1.0, TAU * m as f64 / sites as f64))
            .collect();
        Self { sites, band, roots }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// First row `g_0 .. g_{S-1}` of `R_S(jt)`.
    pub fn first_row(&self, jt: f64) -> Vec<Complex64> {
        let s = self.sites;
        let phases: Vec<Complex64> = self
            .band
            .iter()
            .map(|e| Complex64::from_polar(1.0, e * jt))
            .collect();
        (0..s)
            .map(|d| {
                let sum: Complex64 = phases
                    .iter()
                    .enumerate()
                    .map(|(k, p)| p * self.roots[(k * d) % s])
                    .sum();
                sum / s as f64
            })
            .collect()
    }

    /// Per-entry mean squared deviation of `|g_d|` from `1/sqrt(S)`.
    pub fn chi(&self, jt: f64) -> f64 {
        self.chi_total(jt) / self.sites as f64
    }

    /// `d chi / d(Jt)`, analytic.
    pub fn chi_slope(&self, jt: f64) -> f64 {
        let s = self.sites;
        let target = 1.0 / (s as f64).sqrt();
        let mut total = 0.0;
        for d in 0..s {
            let mut g = Complex64::new(0.0, 0.0);
            let mut dg = Complex64::new(0.0, 0.0);
            for (k, e) in self.band.iter().enumerate() {
                let term = Complex64::from_polar(1.0, e * jt) * self.roots[(k * d) % s];
                g += term;
                dg += term * Complex64::new(0.0, *e);
            }
            let modulus = g.norm();
            if modulus > 0.0 {
                // d|g|/dt = Re(conj(g) g') / |g|, with the 1/S factors applied here.
                total += (modulus / s as f64 - target) * (g.conj() * dg).re / (modulus * s as f64);
            }
        }
        2.0 * total / s as f64
    }

    /// Sum over the `S` first-row entries of `(|g_d| - 1/sqrt(S))^2`.
    pub fn chi_total(&self, jt: f64) -> f64 {
        let target = 1.0 / (self.sites as f64).sqrt();
        self.first_row(jt)
            .iter()
            .map(|g| (g.norm() - target).powi(2))
            .sum()
    }
}

/// `R_S(Jt)` as a dense matrix.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    sites: usize,
    jt: f64,
    entries: DMatrix<Complex64>,
}

impl TransferMatrix {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn jt(&self) -> f64 {
        self.jt
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn first_row(&self) -> Vec<Complex64> {
        self.entries.row(0).iter().copied().collect()
    }

    /// `max |R^+ R - I|`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.sites;
        let prod = self.entries.adjoint() * &self.entries;
        let id = DMatrix::<Complex64>::identity(n, n);
        (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |R_rc - R_0,(c-r) mod S|`.
    pub fn circulant_error(&self) -> f64 {
        let n = self.sites;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let d = (c + n - r) % n;
                worst = worst.max((self.entries[(r, c)] - self.entries[(0, d)]).norm());
            }
        }
        worst
    }
}

/// Closed-form `R_S(Jt)`. Any real `jt` is accepted, including negative
/// values (reverse evolution).
pub fn transfer_matrix(sites: usize, jt: f64) -> TransferMatrix {
    let row = RingFourier::new(sites).first_row(jt);
    let entries = DMatrix::from_fn(sites, sites, |r, c| row[(c + sites - r) % sites]);
    TransferMatrix {
        sites,
        jt,
        entries,
    }
}

/// Smallest `max |a - e^{i theta} b|` over a global phase `theta`.
///
/// The optimal phase is `arg(sum conj(b) a)`, which is well defined even when
/// every entry has the same modulus (a balanced splitter).
pub fn global_phase_distance(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let cross: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    let phase = if cross.norm() > 0.0 {
        cross / cross.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

/// One symmetry class of first-row entries: offsets `d` and `S - d` always
/// have the same modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaClass {
    pub offset: usize,
    pub modulus: f64,
    pub multiplicity: usize,
}

/// First-row moduli grouped by the `d <-> S - d` degeneracy.
///
/// There are `(S + 1) / 2` classes for odd `S` and `(S + 2) / 2` for even `S`.
pub fn omegas(sites: usize, jt: f64) -> Vec<OmegaClass> {
    let row = RingFourier::new(sites).first_row(jt);
    (0..=sites / 2)
        .map(|d| OmegaClass {
            offset: d,
            modulus: row[d].norm(),
            multiplicity: if d == 0 || 2 * d == sites { 1 } else { 2 },
        })
        .collect()
}

/// Balance metric: mean over the `S` entries of `R_S`'s first row of
/// `(|g_d| - 1/sqrt(S))^2`.
///
/// Entries are the normalized matrix elements (a balanced splitter has
/// `|g_d| = 1/sqrt(S)`). Averaging per entry makes `1e-4` correspond to a 1%
/// typical absolute deviation of each modulus; see [`chi_total`] for the sum.
pub fn chi(sites: usize, jt: f64) -> f64 {
    RingFourier::new(sites).chi(jt)
}

/// Sum form of the balance metric, `S * chi`.
pub fn chi_total(sites: usize, jt: f64) -> f64 {
    RingFourier::new(sites).chi_total(jt)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalanceStatus {
    Balanced,
    /// No time in the window reached the threshold; the result holds the best
    /// time found.
    Unbalanced,
}

impl BalanceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            BalanceStatus::Balanced => "balanced",
            BalanceStatus::Unbalanced => "unbalanced",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BalanceResult {
    pub sites: usize,
    pub tau: f64,
    pub chi: f64,
    pub chi_total: f64,
    /// `|g_d|` for all `S` first-row entries at `tau`.
    pub omega_moduli: Vec<f64>,
    pub search_window: (f64, f64),
    pub threshold: f64,
    pub status: BalanceStatus,
    pub grid_step: f64,
    pub grid_points: usize,
    pub minima_refined: usize,
}

impl BalanceResult {
    pub fn is_balanced(&self) -> bool {
        self.status == BalanceStatus::Balanced
    }
}

/// Earliest balanced time in `(lo, hi]`.
///
/// The metric is sampled on a uniform grid with step at most
/// [`MAX_GRID_STEP`]. Every grid local minimum is refined by golden-section
/// search to [`REFINE_TOLERANCE`]; the first one (in time) whose refined value
/// is `<= threshold` is returned. If none qualifies the lowest refined minimum
/// is returned with [`BalanceStatus::Unbalanced`].
pub fn find_balance_time(sites: usize, window: (f64, f64), threshold: f64) -> Result<BalanceResult> {
    find_balance_time_with_step(sites, window, threshold, MAX_GRID_STEP)
}

pub fn find_balance_time_with_step(
    sites: usize,
    window: (f64, f64),
    threshold: f64,
    max_step: f64,
) -> Result<BalanceResult> {
    let (lo, hi) = window;
    if sites < 2 {
        return Err(Error::Config(format!("S must be >= 2, got {sites}")));
    }
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::Config(format!("empty time window ({lo}, {hi}]")));
    }
    if !(threshold > 0.0) {
        return Err(Error::Config(format!("threshold must be > 0, got {threshold}")));
    }
    if !(max_step > 0.0 && max_step <= MAX_GRID_STEP) {
        return Err(Error::Config(format!(
            "grid step must be in (0, {MAX_GRID_STEP}], got {max_step}"
        )));
    }

    let ring = RingFourier::new(sites);
    let intervals = ((hi - lo) / max_step).ceil() as usize;
    let step = (hi - lo) / intervals as f64;
    let time = |i: usize| lo + step * (i + 1) as f64;

    let values: Vec<f64> = (0..intervals)
        .into_par_iter()
        .with_min_len(4096)
        .map(|i| ring.chi(time(i)))
        .collect();

    let n = values.len();
    let mut best: Option<(f64, f64)> = None;
    let mut refined = 0;
    let mut found = None;
    for i in 0..n {
        let left_ok = i == 0 || values[i] <= values[i - 1];
        let right_ok = i + 1 == n || values[i] < values[i + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let a = if i == 0 { lo } else { time(i - 1) };
        let b = if i + 1 == n { hi } else { time(i + 1) };
        let (t, v) = golden_section_min(|t| ring.chi(t), a, b, REFINE_TOLERANCE);
        let (t, v) = polish_minimum(&ring, t, v, (a, b));
        // The grid point itself may beat the refined value when the minimum
        // sits on a window edge.
        let (t, v) = if values[i] < v { (time(i), values[i]) } else { (t, v) };
        refined += 1;
        if best.is_none_or(|(_, bv)| v < bv) {
            best = Some((t, v));
        }
        if v <= threshold {
            found = Some((t, v));
            break;
        }
    }

    let (status, (tau, chi_value)) = match found {
        Some(hit) => (BalanceStatus::Balanced, hit),
        None => (BalanceStatus::Unbalanced, best.expect("window has at least one point")),
    };
    Ok(BalanceResult {
        sites,
        tau,
        chi: chi_value,
        chi_total: ring.chi_total(tau),
        omega_moduli: ring.first_row(tau).iter().map(|g| g.norm()).collect(),
        search_window: window,
        threshold,
        status,
        grid_step: step,
        grid_points: n,
        minima_refined: refined,
    })
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
/// Golden-section search cannot place a quadratic minimum closer than about
/// `sqrt(eps)`; a sign change of the analytic slope around it pins the
/// minimum to rounding level.
fn polish_minimum(ring: &RingFourier, t: f64, v: f64, (a, b): (f64, f64)) -> (f64, f64) {
    let h = 4.0 * REFINE_TOLERANCE;
    let (mut lo, mut hi) = ((t - h).max(a), (t + h).min(b));
    if !(ring.chi_slope(lo) < 0.0 && ring.chi_slope(hi) > 0.0) {
        return (t, v);
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ring.chi_slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tp = 0.5 * (lo + hi);
    let vp = ring.chi(tp);
    if vp <= v + 1e-15 {
        (tp, vp)
    } else {
        (t, v)
    }
}

pub fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

/// `(1/S) sum_j |(R_S(tau)^S)_jj|^2`: how close `S` applications of the
/// splitter come to the identity, averaged over input ports.
///
/// Uses `R_S(tau)^S = R_S(S tau)`.
pub fn inverse_splitter_fidelity(sites: usize, tau: f64) -> f64 {
    let r = transfer_matrix(sites, sites as f64 * tau);
    let diag: f64 = (0..sites).map(|j| r.entries[(j, j)].norm_sqr()).sum();
    diag / sites as f64
}

/// Normalized single-particle amplitudes `A_j` over the ring sites.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleParticleState {
    amplitudes: DVector<Complex64>,
}

impl SingleParticleState {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::Config("need at least two sites".into()));
        }
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Domain("state has zero or non-finite norm".into()));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    /// Particle on one site.
    pub fn localized(sites: usize, site: usize) -> Result<Self> {
        if site >= sites {
            return Err(Error::Config(format!("site {site} out of range for S={sites}")));
        }
        let mut v = DVector::zeros(sites);
        v[site] = Complex64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn sites(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Amplitudes `B_k` on the momentum modes, `B = U A`.
    pub fn momentum_amplitudes(&self) -> DVector<Complex64> {
        mode_transform(self.sites()) * &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }
}

/// `A <- R_S(jt) A`.
pub fn evolve_single_particle(state: &SingleParticleState, jt: f64) -> SingleParticleState {
    let r = transfer_matrix(state.sites(), jt);
    SingleParticleState {
        amplitudes: r.entries * &state.amplitudes,
    }
}

/// Amplitudes below this modulus carry no meaningful phase.
const PHASE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct PhaseStructureReport {
    pub sites: usize,
    pub jt: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Per-site distance of `arg(A_j) - theta_0 - pi j / 2` to the nearest
    /// multiple of `pi`; `None` where `|A_j|` is below the phase floor.
    pub residuals: Vec<Option<f64>>,
}

/// Checks that a particle started on site 0 has amplitudes
/// `A_j = real * e^{i pi j / 2}` up to one global phase.
///
/// The property holds for even `S` at every time. Odd rings are accepted so
/// the failure can be observed.
pub fn even_phase_structure_check(sites: usize, jt: f64, tol: f64) -> PhaseStructureReport {
    let start = SingleParticleState::localized(sites, 0).expect("site 0 exists");
    let a = evolve_single_particle(&start, jt).amplitudes;
    let expected = |j: usize| PI * j as f64 / 2.0;

    let anchor = (0..sites).find(|&j| a[j].norm() > PHASE_FLOOR);
    let global = anchor.map_or(0.0, |j| a[j].arg() - expected(j));
    let residuals: Vec<Option<f64>> = (0..sites)
        .map(|j| {
            (a[j].norm() > PHASE_FLOOR).then(|| distance_to_multiple_of_pi(a[j].arg() - global - expected(j)))
        })
        .collect();
    let passed = residuals.iter().flatten().all(|r| *r <= tol);
    PhaseStructureReport {
        sites,
        jt,
        tolerance: tol,
        passed,
        residuals,
    }
}

/// `arg(A_1 / A_0)` for a particle started on site 0, or `None` when either
/// amplitude is below the phase floor.
pub fn adjacent_phase_difference(sites: usize, jt: f64) -> Option<f64> {
    let row = RingFourier::new(sites).first_row(jt);
    // R is symmetric, so column 0 equals row 0.
    let (a0, a1) = (row[0], row[1]);
    (a0.norm() > PHASE_FLOOR && a1.norm() > PHASE_FLOOR).then(|| (a1 / a0).arg())
}

fn distance_to_multiple_of_pi(x: f64) -> f64 {
    let r = x.rem_euclid(PI);
    r.min(PI - r)
}
