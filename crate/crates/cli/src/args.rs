use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Ring-lattice multiport beam splitter experiments.
///
/// Every command writes a CSV data file and a JSON sidecar describing the run.
/// Parameters come from flags, then `--config` (flat key=value), then defaults.
#[derive(Debug, Parser)]
#[command(name = "multiport", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// CSV output path; the sidecar goes next to it with a .json extension
    /// [default: <command>.csv]
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Flat key=value parameter file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads for sweeps [default: all cores]
    #[arg(long, allow_hyphen_values = true)]
    pub threads: Option<String>,
    /// Recorded in the sidecar; every command is deterministic
    #[arg(long, allow_hyphen_values = true)]
    pub seed: Option<String>,
    /// Add wall-clock timings to the sidecar
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for the balance time of an S-port splitter
    Balance(BalanceArgs),
    /// Dump the transfer matrix R_S(Jt)
    Matrix(MatrixArgs),
    /// Splitter, linear phase imprint, inverse splitter over a phi grid
    Interferometer(InterferometerArgs),
    /// Interaction fidelity over VN/J, or the critical VN/J over a range of N
    ScanInteractions(ScanInteractionsArgs),
    /// Timing-error fidelity over eps, or the critical eps over a range of N
    ScanTiming(ScanTimingArgs),
    /// Fidelity after losing one atom halfway through the splitter
    Loss(LossArgs),
    /// Lowest phonon mode against tunneling as the ring grows
    Spectrum(SpectrumArgs),
    /// Balance times across ring sizes with a power-law fit
    Scaling(ScalingArgs),
    /// Tunneling rate of a shallow lattice and its intensity sensitivity
    Tunneling(TunnelingArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Balance(_) => "balance",
            Command::Matrix(_) => "matrix",
            Command::Interferometer(_) => "interferometer",
            Command::ScanInteractions(_) => "scan-interactions",
            Command::ScanTiming(_) => "scan-timing",
            Command::Loss(_) => "loss",
            Command::Spectrum(_) => "spectrum",
            Command::Scaling(_) => "scaling",
            Command::Tunneling(_) => "tunneling",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Balance(a) => &a.common,
            Command::Matrix(a) => &a.common,
            Command::Interferometer(a) => &a.common,
            Command::ScanInteractions(a) => &a.common,
            Command::ScanTiming(a) => &a.common,
            Command::Loss(a) => &a.common,
            Command::Spectrum(a) => &a.common,
            Command::Scaling(a) => &a.common,
            Command::Tunneling(a) => &a.common,
        }
    }
}

#[derive(Debug, Args)]
pub struct BalanceArgs {
    /// Number of sites S [default: 3]
    #[arg(long, allow_hyphen_values = true)]
    pub sites: Option<String>,
    /// Search window a:b in Jt [default: 0:600]
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Balance threshold on chi [default: 1e-4]
    #[arg(long, allow_hyphen_values = true)]
    pub threshold: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    /// Number of sites S [default: 3]
    #[arg(long, allow_hyphen_values = true)]
    pub sites: Option<String>,
    /// Evolution time Jt [default: balance time]
    #[arg(long, allow_hyphen_values = true)]
    pub jt: Option<String>,
    /// Balance search window when --jt is absent [default: 0:600]
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct InterferometerArgs {
    /// Number of sites S [default: 3]
    #[arg(long, allow_hyphen_values = true)]
    pub sites: Option<String>,
    /// Number of atoms N [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub atoms: Option<String>,
    /// On-site interaction V/J [default: 0]
    #[arg(long = "v-over-j", allow_hyphen_values = true)]
    pub v_over_j: Option<String>,
    /// Splitter time in Jt [default: balance time]
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Balance search window when --tau is absent [default: 0:600]
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Phase steps a:b:n in radians [default: 0:6.283185307179586:200]
    #[arg(long = "phi-grid", allow_hyphen_values = true)]
    pub phi_grid: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ScanInteractionsArgs {
    /// Number of sites S [default: 3]
    #[arg(long, allow_hyphen_values = true)]
    pub sites: Option<String>,
    /// Number of atoms N [default: 5]
    #[arg(long, allow_hyphen_values = true)]
    pub atoms: Option<String>,
    /// Splitter time in Jt [default: balance time]
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Balance search window when --tau is absent [default: 0:600]
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Interaction scale grid a:b:n in VN/J [default: 0:1:51]
    #[arg(long = "vn-grid", allow_hyphen_values = true)]
    pub vn_grid: Option<String>,
    /// Atom numbers a:b:step or a,b,...; switches to critical-value mode
    #[arg(long = "atoms-range", allow_hyphen_values = true)]
    pub atoms_range: Option<String>,
    /// Fidelity level defining the critical value [default: 0.95]
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ScanTimingArgs {
    /// Number of sites S [default: 3]
    #[arg(long, allow_hyphen_values = true)]
    pub sites: Option<String>,
    /// Number of atoms N [default: 5]
    #[arg(long, allow_hyphen_values = true)]
    pub atoms: Option<String>,
    /// Splitter time in Jt [default: balance time]
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Balance search window when --tau is absent [default: 0:600]
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Timing errors a:b:n in Jt [default: -0.2:0.2:81]
    #[arg(long = "eps-grid", allow_hyphen_values = true)]
    pub eps_grid: Option<String>,
    /// Atom numbers a:b:step or a,b,...; switches to critical-value mode
    #[arg(long = "atoms-range", allow_hyphen_values = true)]
    pub atoms_range: Option<String>,
    /// Fidelity level defining the critical value [default: 0.95]
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct LossArgs {
    /// Number of sites S [default: 3]
    #[arg(long, allow_hyphen_values = true)]
    pub sites: Option<String>,
    /// Number of atoms N before the loss [default: 4]
    #[arg(long, allow_hyphen_values = true)]
    pub atoms: Option<String>,
    /// On-site interaction V/J [default: 0]
    #[arg(long = "v-over-j", allow_hyphen_values = true)]
    pub v_over_j: Option<String>,
    /// Splitter time in Jt [default: balance time]
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    /// Balance search window when --tau is absent [default: 0:600]
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Site losing the atom [default: every site]
    #[arg(long, allow_hyphen_values = true)]
    pub site: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Interaction scale VN/J [default: 0.85]
    #[arg(long = "vn-over-j", allow_hyphen_values = true)]
    pub vn_over_j: Option<String>,
    /// Largest ring in the scan [default: 30]
    #[arg(long = "max-sites", allow_hyphen_values = true)]
    pub max_sites: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    /// Ring sizes a,b,... or a:b:step [default: 3,4,5,7,9]
    #[arg(long = "sites-list", allow_hyphen_values = true)]
    pub sites_list: Option<String>,
    /// Search window a:b in Jt [default: 0:600]
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct TunnelingArgs {
    /// Lattice depth V0/E_R for the headline numbers [default: 2]
    #[arg(long, allow_hyphen_values = true)]
    pub depth: Option<String>,
    /// Depth grid a:b:n for the table [default: 1:20:39]
    #[arg(long = "depth-grid", allow_hyphen_values = true)]
    pub depth_grid: Option<String>,
    /// Lattice laser wavelength in nm [default: 1000]
    #[arg(long = "wavelength-nm", allow_hyphen_values = true)]
    pub wavelength_nm: Option<String>,
    /// Atomic mass in u [default: 86.909180527, rubidium-87]
    #[arg(long = "mass-u", allow_hyphen_values = true)]
    pub mass_u: Option<String>,
    /// Fractional intensity fluctuation [default: 0.001]
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    #[command(flatten)]
    pub common: Common,
}
