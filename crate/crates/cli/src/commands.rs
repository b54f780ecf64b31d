use std::f64::consts::{PI, TAU};

use multiport_core::dynamics::{
    adiabaticity_limit, intensity_fluctuation, recoil_energy, tunneling_rate, ATOMIC_MASS_UNIT,
    PLANCK, RB87_MASS,
};
use multiport_core::experiments::{
    critical_interaction, critical_timing_error, interaction_fidelity_scan, interferometer_scan,
    jt_scaling, loss_experiment, power_law_fit, three_path_populations, timing_error_scan, Column,
    CriticalValue, ExperimentResult, Value, CRITICAL_FIDELITY, SCALING_WINDOW,
};
use multiport_core::splitter::{
    find_balance_time, inverse_splitter_fidelity, omegas, transfer_matrix, BALANCE_THRESHOLD,
};
use multiport_core::{fock_dimension, Error as ModelError, MAX_BASIS_DIM};
use rayon::prelude::*;

use crate::args::*;
use crate::config::{parse_grid, parse_int_list, parse_window, ConfigFile, Resolver};
use crate::error::{CliError, CliResult};

const COMMON_KEYS: [&str; 4] = ["output", "threads", "seed", "timings"];
const DEFAULT_WINDOW: &str = "0:600";

type Params = Vec<(String, Value)>;

fn resolver<'a>(command: &str, cfg: &'a ConfigFile, keys: &[&str]) -> CliResult<Resolver<'a>> {
    let mut allowed: Vec<&str> = keys.to_vec();
    allowed.extend(COMMON_KEYS);
    Resolver::new(command, cfg, &allowed)
}

fn push(params: &mut Params, key: &str, v: impl Into<Value>) {
    params.push((key.to_owned(), v.into()));
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> CliResult<()> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Schema(msg()))
    }
}

fn check_sites(s: usize) -> CliResult<()> {
    require(s >= 2, || format!("--sites must be >= 2, got {s}"))
}

/// Fails fast, before any balance search, when the Fock space is too large.
fn check_sizing(sites: usize, atoms: usize) -> CliResult<()> {
    check_sites(sites)?;
    require(atoms >= 1, || format!("--atoms must be >= 1, got {atoms}"))?;
    let dim = fock_dimension(sites, atoms).unwrap_or(u128::MAX);
    if dim > MAX_BASIS_DIM as u128 {
        return Err(ModelError::Sizing {
            sites,
            atoms,
            dimension: dim,
            limit: MAX_BASIS_DIM,
        }
        .into());
    }
    Ok(())
}

fn window(r: &Resolver, flag: &Option<String>) -> CliResult<(f64, f64)> {
    let raw = r.raw("window", flag).unwrap_or_else(|| DEFAULT_WINDOW.into());
    let w = parse_window("window", &raw)?;
    require(w.0 >= 0.0, || format!("--window must start at >= 0, got {raw}"))?;
    Ok(w)
}

fn finite(key: &str, x: f64) -> CliResult<f64> {
    require(x.is_finite(), || format!("--{key} must be finite, got {x}"))?;
    Ok(x)
}

/// Splitter time from `--tau`, or the balance time of `sites` over the window.
struct TauSource {
    given: Option<f64>,
    window: (f64, f64),
}

impl TauSource {
    fn resolve(r: &Resolver, tau: &Option<String>, win: &Option<String>) -> CliResult<Self> {
        let given = r.opt::<f64>("tau", tau)?;
        if let Some(t) = given {
            require(t.is_finite() && t > 0.0, || format!("--tau must be > 0, got {t}"))?;
        }
        Ok(Self {
            given,
            window: window(r, win)?,
        })
    }

    fn tau(&self, sites: usize, params: &mut Params, notes: &mut Vec<String>) -> CliResult<f64> {
        if let Some(t) = self.given {
            push(params, "tau", t);
            push(params, "tau_source", "given");
            return Ok(t);
        }
        let b = find_balance_time(sites, self.window, BALANCE_THRESHOLD)?;
        push(params, "tau", b.tau);
        push(params, "tau_source", "balance search");
        push(params, "window", format!("{}:{}", self.window.0, self.window.1));
        if !b.is_balanced() {
            notes.push(format!(
                "no balance time for S={sites} in the window; using the best minimum (chi={:e})",
                b.chi
            ));
        }
        Ok(b.tau)
    }
}

fn finish(mut result: ExperimentResult, params: Params, notes: Vec<String>) -> ExperimentResult {
    result.parameters = params;
    result.notes.extend(notes);
    result
}

pub fn balance(a: &BalanceArgs, cfg: &ConfigFile) -> CliResult<ExperimentResult> {
    let r = resolver("balance", cfg, &["sites", "window", "threshold"])?;
    let sites = r.get("sites", &a.sites, 3usize)?;
    let win = window(&r, &a.window)?;
    let threshold = finite("threshold", r.get("threshold", &a.threshold, BALANCE_THRESHOLD)?)?;
    check_sites(sites)?;
    require(threshold > 0.0, || format!("--threshold must be > 0, got {threshold}"))?;

    let b = find_balance_time(sites, win, threshold)?;
    let mut result = ExperimentResult::new(
        "balance",
        vec![
            Column::new("offset", "sites"),
            Column::new("modulus", ""),
            Column::new("multiplicity", ""),
        ],
    );
    for class in omegas(sites, b.tau) {
        result.push_row(vec![class.offset as f64, class.modulus, class.multiplicity as f64])?;
    }
    result.add_summary("status", b.status.as_str());
    result.add_summary("tau", b.tau);
    result.add_summary("tau_over_pi", b.tau / PI);
    result.add_summary("chi", b.chi);
    result.add_summary("chi_total", b.chi_total);
    result.add_summary("inverse_fidelity", inverse_splitter_fidelity(sites, b.tau));
    result.add_summary("grid_step", b.grid_step);
    result.add_summary("grid_points", b.grid_points);
    result.add_summary("minima_refined", b.minima_refined);

    let mut params = Params::new();
    push(&mut params, "sites", sites);
    push(&mut params, "window", format!("{}:{}", win.0, win.1));
    push(&mut params, "threshold", threshold);
    Ok(finish(result, params, Vec::new()))
}

pub fn matrix(a: &MatrixArgs, cfg: &ConfigFile) -> CliResult<ExperimentResult> {
    let r = resolver("matrix", cfg, &["sites", "jt", "window"])?;
    let sites = r.get("sites", &a.sites, 3usize)?;
    let jt = r.opt::<f64>("jt", &a.jt)?;
    let src = TauSource::resolve(&r, &None, &a.window)?;
    check_sites(sites)?;
    if let Some(t) = jt {
        finite("jt", t)?;
    }

    let mut params = Params::new();
    let mut notes = Vec::new();
    push(&mut params, "sites", sites);
    let jt = match jt {
        Some(t) => {
            push(&mut params, "jt", t);
            t
        }
        None => src.tau(sites, &mut params, &mut notes)?,
    };
    let m = transfer_matrix(sites, jt);
    let mut result = ExperimentResult::new(
        "matrix",
        vec![
            Column::new("index", ""),
            Column::new("row", ""),
            Column::new("col", ""),
            Column::new("re", ""),
            Column::new("im", ""),
            Column::new("modulus", ""),
        ],
    );
    for row in 0..sites {
        for col in 0..sites {
            let z = m.entries()[(row, col)];
            result.push_row(vec![
                (row * sites + col) as f64,
                row as f64,
                col as f64,
                z.re,
                z.im,
                z.norm(),
            ])?;
        }
    }
    result.add_summary("jt", jt);
    result.add_summary("unitarity_error", m.unitarity_error());
    result.add_summary("circulant_error", m.circulant_error());
    Ok(finish(result, params, notes))
}

pub fn interferometer(a: &InterferometerArgs, cfg: &ConfigFile) -> CliResult<ExperimentResult> {
    let r = resolver(
        "interferometer",
        cfg,
        &["sites", "atoms", "v-over-j", "tau", "window", "phi-grid"],
    )?;
    let sites = r.get("sites", &a.sites, 3usize)?;
    let atoms = r.get("atoms", &a.atoms, 1usize)?;
    let v = finite("v-over-j", r.get("v-over-j", &a.v_over_j, 0.0)?)?;
    let src = TauSource::resolve(&r, &a.tau, &a.window)?;
    let grid_spec = r.raw("phi-grid", &a.phi_grid).unwrap_or_else(|| format!("0:{TAU}:200"));
    let phis = parse_grid("phi-grid", &grid_spec)?;
    check_sizing(sites, atoms)?;
    require(v >= 0.0, || format!("--v-over-j must be >= 0, got {v}"))?;

    let mut params = Params::new();
    let mut notes = Vec::new();
    push(&mut params, "sites", sites);
    push(&mut params, "atoms", atoms);
    push(&mut params, "v_over_j", v);
    let tau = src.tau(sites, &mut params, &mut notes)?;
    push(&mut params, "phi_grid", grid_spec);

    let mut result = interferometer_scan(sites, atoms, v, tau, &phis)?;
    if sites == 3 && v == 0.0 {
        let dev = result
            .rows()
            .iter()
            .flat_map(|row| {
                let want = three_path_populations(row[0]);
                (0..3).map(move |k| (row[k + 1] - want[k]).abs())
            })
            .fold(0.0, f64::max);
        result.add_summary("max_deviation_from_closed_form", dev);
    }
    Ok(finish(result, params, notes))
}

fn critical_table(
    kind: &str,
    value_cols: &[(&str, &str)],
    sites: usize,
    atoms: &[usize],
    found: Vec<(CriticalValue, Vec<f64>)>,
) -> CliResult<ExperimentResult> {
    let mut columns = vec![Column::new("atoms", "")];
    columns.extend(value_cols.iter().map(|(n, u)| Column::new(n, u)));
    columns.push(Column::new("non_monotone", ""));
    let mut result = ExperimentResult::new(kind, columns);
    let mut points = Vec::new();
    let mut missing = Vec::new();
    for (&n, (crit, derived)) in atoms.iter().zip(found) {
        let mut row = vec![n as f64];
        match crit.value {
            Some(v) => {
                points.push((n as f64, v));
                row.push(v);
                row.extend(derived);
            }
            None => {
                missing.push(n);
                row.extend(std::iter::repeat_n(f64::NAN, value_cols.len()));
            }
        }
        row.push(if crit.non_monotone { 1.0 } else { 0.0 });
        result.push_row(row)?;
    }
    if !missing.is_empty() {
        result
            .notes
            .push(format!("S={sites}: fidelity stayed above target for N in {missing:?}"));
    }
    if points.len() >= 2 {
        result.fit = Some(power_law_fit(&points)?);
    }
    Ok(result)
}

pub fn scan_interactions(a: &ScanInteractionsArgs, cfg: &ConfigFile) -> CliResult<ExperimentResult> {
    let r = resolver(
        "scan-interactions",
        cfg,
        &["sites", "atoms", "tau", "window", "vn-grid", "atoms-range", "target"],
    )?;
    let sites = r.get("sites", &a.sites, 3usize)?;
    let atoms = r.get("atoms", &a.atoms, 5usize)?;
    let src = TauSource::resolve(&r, &a.tau, &a.window)?;
    let grid_spec = r.raw("vn-grid", &a.vn_grid).unwrap_or_else(|| "0:1:51".into());
    let grid = parse_grid("vn-grid", &grid_spec)?;
    let range = r.raw("atoms-range", &a.atoms_range);
    let atom_list = range.as_deref().map(|s| parse_int_list("atoms-range", s)).transpose()?;
    let target = finite("target", r.get("target", &a.target, CRITICAL_FIDELITY)?)?;
    require(target > 0.0 && target < 1.0, || format!("--target must lie in (0, 1), got {target}"))?;
    require(grid[0] >= 0.0, || "--vn-grid must be >= 0".into())?;
    match &atom_list {
        Some(list) => {
            for &n in list {
                check_sizing(sites, n)?;
            }
        }
        None => check_sizing(sites, atoms)?,
    }

    let mut params = Params::new();
    let mut notes = Vec::new();
    push(&mut params, "sites", sites);
    let tau = src.tau(sites, &mut params, &mut notes)?;
    push(&mut params, "target", target);

    let Some(list) = atom_list else {
        push(&mut params, "atoms", atoms);
        push(&mut params, "vn_grid", grid_spec);
        let mut result = interaction_fidelity_scan(sites, atoms, tau, &grid)?;
        let crit = critical_interaction(sites, atoms, tau, target)?;
        result.add_summary("crossing_status", crit.status.as_str());
        if let Some(v) = crit.value {
            result.add_summary("critical_vn_over_j", v);
            result.add_summary("critical_v_over_j", v / atoms as f64);
        }
        result.add_summary("non_monotone", crit.non_monotone);
        return Ok(finish(result, params, notes));
    };

    push(&mut params, "atoms_range", range.unwrap_or_default());
    let found: Vec<(CriticalValue, Vec<f64>)> = list
        .par_iter()
        .map(|&n| {
            let c = critical_interaction(sites, n, tau, target)?;
            let per_atom = c.value.map(|v| v / n as f64).unwrap_or(f64::NAN);
            Ok((c, vec![per_atom]))
        })
        .collect::<multiport_core::Result<_>>()?;
    let result = critical_table(
        "scan-interactions",
        &[("critical_vn_over_j", ""), ("critical_v_over_j", "")],
        sites,
        &list,
        found,
    )?;
    Ok(finish(result, params, notes))
}

pub fn scan_timing(a: &ScanTimingArgs, cfg: &ConfigFile) -> CliResult<ExperimentResult> {
    let r = resolver(
        "scan-timing",
        cfg,
        &["sites", "atoms", "tau", "window", "eps-grid", "atoms-range", "target"],
    )?;
    let sites = r.get("sites", &a.sites, 3usize)?;
    let atoms = r.get("atoms", &a.atoms, 5usize)?;
    let src = TauSource::resolve(&r, &a.tau, &a.window)?;
    let grid_spec = r.raw("eps-grid", &a.eps_grid).unwrap_or_else(|| "-0.2:0.2:81".into());
    let grid = parse_grid("eps-grid", &grid_spec)?;
    let range = r.raw("atoms-range", &a.atoms_range);
    let atom_list = range.as_deref().map(|s| parse_int_list("atoms-range", s)).transpose()?;
    let target = finite("target", r.get("target", &a.target, CRITICAL_FIDELITY)?)?;
    require(target > 0.0 && target < 1.0, || format!("--target must lie in (0, 1), got {target}"))?;
    match &atom_list {
        Some(list) => {
            for &n in list {
                check_sizing(sites, n)?;
            }
        }
        None => check_sizing(sites, atoms)?,
    }

    let mut params = Params::new();
    let mut notes = Vec::new();
    push(&mut params, "sites", sites);
    let tau = src.tau(sites, &mut params, &mut notes)?;
    push(&mut params, "target", target);

    let Some(list) = atom_list else {
        push(&mut params, "atoms", atoms);
        push(&mut params, "eps_grid", grid_spec);
        let mut result = timing_error_scan(sites, atoms, tau, &grid)?;
        if target != CRITICAL_FIDELITY {
            result.summary.clear();
            let crit = critical_timing_error(sites, atoms, tau, target)?;
            result.add_summary("target_fidelity", target);
            result.add_summary("crossing_status", crit.status.as_str());
            if let Some(eps) = crit.value {
                result.add_summary("critical_eps", eps);
                result.add_summary("critical_eps_over_tau", eps / tau);
            }
            result.add_summary("non_monotone", crit.non_monotone);
        }
        return Ok(finish(result, params, notes));
    };

    push(&mut params, "atoms_range", range.unwrap_or_default());
    let found: Vec<(CriticalValue, Vec<f64>)> = list
        .par_iter()
        .map(|&n| {
            let c = critical_timing_error(sites, n, tau, target)?;
            let frac = c.value.map(|v| v / tau).unwrap_or(f64::NAN);
            Ok((c, vec![frac]))
        })
        .collect::<multiport_core::Result<_>>()?;
    let result = critical_table(
        "scan-timing",
        &[("critical_eps", "1/J"), ("critical_eps_over_tau", "")],
        sites,
        &list,
        found,
    )?;
    Ok(finish(result, params, notes))
}

pub fn loss(a: &LossArgs, cfg: &ConfigFile) -> CliResult<ExperimentResult> {
    let r = resolver("loss", cfg, &["sites", "atoms", "v-over-j", "tau", "window", "site"])?;
    let sites = r.get("sites", &a.sites, 3usize)?;
    let atoms = r.get("atoms", &a.atoms, 4usize)?;
    let v = finite("v-over-j", r.get("v-over-j", &a.v_over_j, 0.0)?)?;
    let src = TauSource::resolve(&r, &a.tau, &a.window)?;
    let site = r.opt::<usize>("site", &a.site)?;
    check_sizing(sites, atoms)?;
    require(atoms >= 2, || format!("loss needs --atoms >= 2, got {atoms}"))?;
    require(v >= 0.0, || format!("--v-over-j must be >= 0, got {v}"))?;
    if let Some(j) = site {
        require(j < sites, || format!("--site must be < {sites}, got {j}"))?;
    }

    let mut params = Params::new();
    let mut notes = Vec::new();
    push(&mut params, "sites", sites);
    push(&mut params, "atoms", atoms);
    push(&mut params, "v_over_j", v);
    let tau = src.tau(sites, &mut params, &mut notes)?;
    let chosen: Vec<usize> = match site {
        Some(j) => {
            push(&mut params, "site", j);
            vec![j]
        }
        None => (0..sites).collect(),
    };

    let fids: Vec<f64> = chosen
        .par_iter()
        .map(|&j| loss_experiment(sites, atoms, v, tau, j))
        .collect::<multiport_core::Result<_>>()?;
    let mut result = ExperimentResult::new("loss", vec![Column::new("site", ""), Column::new("fidelity", "")]);
    for (j, f) in chosen.iter().zip(&fids) {
        result.push_row(vec![*j as f64, *f])?;
    }
    result.add_summary("min_fidelity", fids.iter().copied().fold(f64::INFINITY, f64::min));
    Ok(finish(result, params, notes))
}

pub fn spectrum(a: &SpectrumArgs, cfg: &ConfigFile) -> CliResult<ExperimentResult> {
    let r = resolver("spectrum", cfg, &["vn-over-j", "max-sites"])?;
    let vn = finite("vn-over-j", r.get("vn-over-j", &a.vn_over_j, 0.85)?)?;
    let s_max = r.get("max-sites", &a.max_sites, 30usize)?;
    require(vn >= 0.0, || format!("--vn-over-j must be >= 0, got {vn}"))?;
    require(s_max >= 3, || format!("--max-sites must be >= 3, got {s_max}"))?;

    let report = adiabaticity_limit(vn, s_max)?;
    let mut result = ExperimentResult::new(
        "spectrum",
        vec![
            Column::new("sites", ""),
            Column::new("lowest_mode_ratio", ""),
            Column::new("min_ratio_all_modes", ""),
            Column::new("gapless_modes", ""),
        ],
    );
    for row in &report.rows {
        result.push_row(vec![
            row.sites as f64,
            row.lowest_mode_ratio,
            row.min_ratio_all_modes,
            row.gapless_modes.len() as f64,
        ])?;
    }
    match report.limit {
        Some(s) => result.add_summary("adiabatic_limit_sites", s),
        None => result.add_summary("adiabatic_limit_sites", "none"),
    }
    result.add_summary("criterion", "omega_1 / J > 1");
    let mut params = Params::new();
    push(&mut params, "vn_over_j", vn);
    push(&mut params, "max_sites", s_max);
    Ok(finish(result, params, Vec::new()))
}

pub fn scaling(a: &ScalingArgs, cfg: &ConfigFile) -> CliResult<ExperimentResult> {
    let r = resolver("scaling", cfg, &["sites-list", "window"])?;
    let list_spec = r.raw("sites-list", &a.sites_list).unwrap_or_else(|| "3,4,5,7,9".into());
    let list = parse_int_list("sites-list", &list_spec)?;
    let win = match r.raw("window", &a.window) {
        Some(w) => parse_window("window", &w)?,
        None => SCALING_WINDOW,
    };
    require(list.len() >= 2, || "--sites-list needs at least two ring sizes".into())?;
    for &s in &list {
        check_sites(s)?;
    }

    let sc = jt_scaling(&list, win)?;
    let mut result = ExperimentResult::new(
        "scaling",
        vec![
            Column::new("sites", ""),
            Column::new("tau", "1/J"),
            Column::new("tau_over_pi", ""),
            Column::new("chi", ""),
            Column::new("inverse_fidelity", ""),
        ],
    );
    let mut notes = Vec::new();
    for b in &sc.balances {
        result.push_row(vec![
            b.sites as f64,
            b.tau,
            b.tau / PI,
            b.chi,
            inverse_splitter_fidelity(b.sites, b.tau),
        ])?;
        if !b.is_balanced() {
            notes.push(format!("S={} never balanced in the window; best chi={:e}", b.sites, b.chi));
        }
    }
    result.fit = Some(sc.fit);
    result.add_summary("max_tau", sc.max_tau);
    result.add_summary("all_balanced", sc.all_balanced);
    let mut params = Params::new();
    push(&mut params, "sites_list", list_spec);
    push(&mut params, "window", format!("{}:{}", win.0, win.1));
    Ok(finish(result, params, notes))
}

pub fn tunneling(a: &TunnelingArgs, cfg: &ConfigFile) -> CliResult<ExperimentResult> {
    let r = resolver(
        "tunneling",
        cfg,
        &["depth", "depth-grid", "wavelength-nm", "mass-u", "delta"],
    )?;
    let depth = finite("depth", r.get("depth", &a.depth, 2.0)?)?;
    let grid_spec = r.raw("depth-grid", &a.depth_grid).unwrap_or_else(|| "1:20:39".into());
    let grid = parse_grid("depth-grid", &grid_spec)?;
    let nm = finite("wavelength-nm", r.get("wavelength-nm", &a.wavelength_nm, 1000.0)?)?;
    let mass_u = finite("mass-u", r.get("mass-u", &a.mass_u, RB87_MASS / ATOMIC_MASS_UNIT)?)?;
    let delta = finite("delta", r.get("delta", &a.delta, 0.001)?)?;
    require(depth > 0.0, || format!("--depth must be > 0, got {depth}"))?;
    require(grid[0] > 0.0, || "--depth-grid must be > 0".into())?;
    require(nm > 0.0, || format!("--wavelength-nm must be > 0, got {nm}"))?;
    require(mass_u > 0.0, || format!("--mass-u must be > 0, got {mass_u}"))?;

    let mass = mass_u * ATOMIC_MASS_UNIT;
    let er_hz = recoil_energy(mass, nm * 1e-9) / PLANCK;
    let mut result = ExperimentResult::new(
        "tunneling",
        vec![
            Column::new("depth_ratio", "E_R"),
            Column::new("hbar_j_over_er", ""),
            Column::new("j_over_2pi", "Hz"),
        ],
    );
    for &d in &grid {
        let rate = tunneling_rate(d)?;
        result.push_row(vec![d, rate, rate * er_hz])?;
    }
    let rate = tunneling_rate(depth)?;
    let pert = intensity_fluctuation(1.0, delta);
    result.add_summary("hbar_j_over_er", rate);
    result.add_summary("recoil_hz", er_hz);
    result.add_summary("j_over_2pi_hz", rate * er_hz);
    result.add_summary("fluctuation_factor", pert.rate);
    result.add_summary("fluctuation_within_model", pert.within_model);
    if !pert.within_model {
        result.notes.push(format!("|delta| = {} is outside the linearized model (< 0.1)", delta.abs()));
    }
    let mut params = Params::new();
    push(&mut params, "depth", depth);
    push(&mut params, "depth_grid", grid_spec);
    push(&mut params, "wavelength_nm", nm);
    push(&mut params, "mass_u", mass_u);
    push(&mut params, "delta", delta);
    Ok(finish(result, params, Vec::new()))
}
