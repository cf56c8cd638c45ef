//! Experiment driver behind the `circle-heat` binary.
//!
//! Every subcommand validates all of its inputs (flags and grid files) before
//! computing anything, so an invalid configuration never leaves a partial
//! output file behind. Exit codes: 0 success, 1 I/O failure, 2 invalid
//! input, 3 a checked bound did not hold.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{coupling_simulate, epsilon_bound, ChainSpec, Distribution};
use crate::clt::{clt_error_profile, heat_kernel_convolution, KernelSpec};
use crate::error::Error;
use crate::grid::GridFunction;
use crate::martingale::{martingale_check, reverse_field_from_initial, MAX_KAPPA};
use crate::scheme::{evolve, SchemeParams};
use crate::spectral::{fourier_coeffs, propagation_factor, spectral_propagate};
use crate::textfmt::{fmt_f64, read_grid_file, write_grid_file, FileError};
use crate::walk::{density_binomial, WalkEnsemble};

/// Largest chain accepted by `mixing`; the exact check uses dense N x N matrices.
pub const MAX_MIXING_STATES: usize = 2048;

#[derive(Debug, Clone, Parser)]
#[command(name = "circle-heat", version, about = "Heat flow on a discrete circle and the random walk behind it")]
pub struct ExperimentConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Exact distance to equilibrium of the +-2 chain against the coupling bound.
    Mixing(MixingConfig),
    /// Run the explicit scheme on a grid file.
    Evolve(EvolveConfig),
    /// Chain, scheme and walk density on one input; report the largest disagreement.
    Compare(CompareConfig),
    /// Local CLT error table.
    CltError(CltErrorConfig),
    /// Per-mode spectral propagation, optionally against the classical solution.
    Spectral(SpectralConfig),
    /// Convolve a grid file with the heat kernel.
    KernelSolve(KernelSolveConfig),
    /// Build the dyadic reverse-martingale field and verify its identity.
    MartingaleCheck(MartingaleConfig),
}

#[derive(Debug, Clone, Args)]
pub struct MixingConfig {
    /// Number of states N (odd, at least 3).
    #[arg(long)]
    pub states: usize,
    /// Last step n of the table.
    #[arg(long)]
    pub steps: usize,
    /// Coupling trials.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV with columns n, tv_exact, epsilon_bound, coupling_survival.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveConfig {
    #[arg(long)]
    pub grid_file: PathBuf,
    /// Time resolution nu; one step advances time by 1/nu.
    #[arg(long)]
    pub nu: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CompareConfig {
    /// Nonnegative initial condition.
    #[arg(long)]
    pub grid_file: PathBuf,
    #[arg(long)]
    pub steps: usize,
    /// Largest acceptable pairwise discrepancy.
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Optional CSV with columns pair, max_abs_diff.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CltErrorConfig {
    /// Comma-separated odd n values, e.g. 3,5,7.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Vec<u64>,
    /// CSV with columns n, max_err, scaled_err.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SpectralConfig {
    #[arg(long)]
    pub grid_file: PathBuf,
    #[arg(long)]
    pub nu: f64,
    #[arg(long)]
    pub steps: usize,
    /// Add the classical solution at t = steps / nu for each mode.
    #[arg(long)]
    pub compare_classical: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct KernelSolveConfig {
    #[arg(long)]
    pub grid_file: PathBuf,
    /// Diffusion time.
    #[arg(long)]
    pub t: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct MartingaleConfig {
    /// Number of base sites.
    #[arg(long)]
    pub eta: usize,
    /// Depth of the dyadic refinement (at most 16).
    #[arg(long)]
    pub kappa: u32,
    /// Initial condition; random uniform values in [0, 1) when absent.
    #[arg(long)]
    pub init: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Optional CSV with columns from, to, max_dev, worst_cell.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("bound violated: {0}")]
    Threshold(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Io { .. } => 1,
            RunError::Invalid(_) => 2,
            RunError::Threshold(_) => 3,
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Invalid(e.to_string())
    }
}

impl From<FileError> for RunError {
    fn from(e: FileError) -> Self {
        match e {
            FileError::Io { path, msg } => RunError::Io { path, msg },
            FileError::Format { .. } => RunError::Invalid(e.to_string()),
        }
    }
}

type RunResult<T> = std::result::Result<T, RunError>;

fn invalid(msg: impl Into<String>) -> RunError {
    RunError::Invalid(msg.into())
}

/// Run one subcommand, writing human-readable progress to `log`.
pub fn run(config: &ExperimentConfig, log: &mut dyn Write) -> RunResult<()> {
    match &config.command {
        Command::Mixing(c) => run_mixing(c, log),
        Command::Evolve(c) => run_evolve(c, log),
        Command::Compare(c) => run_compare(c, log),
        Command::CltError(c) => run_clt_error(c, log),
        Command::Spectral(c) => run_spectral(c, log),
        Command::KernelSolve(c) => run_kernel_solve(c, log),
        Command::MartingaleCheck(c) => run_martingale(c, log),
    }
}

/// [`run`] mapped to a process exit code, with the error printed to `log`.
pub fn run_to_exit_code(config: &ExperimentConfig, log: &mut dyn Write) -> i32 {
    match run(config, log) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(log, "error: {e}");
            e.exit_code()
        }
    }
}

/// Write a CSV file with a fixed header; cells are preformatted strings.
pub fn emit_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> RunResult<()> {
    let io = |e: csv::Error| RunError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(|e| RunError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

fn load_real_grid(path: &Path) -> RunResult<GridFunction> {
    Ok(read_grid_file(path)?)
}

fn run_mixing(c: &MixingConfig, log: &mut dyn Write) -> RunResult<()> {
    if c.states % 2 == 0 || c.states < 3 {
        return Err(Error::EvenStateCount(c.states).into());
    }
    if c.states > MAX_MIXING_STATES {
        return Err(invalid(format!(
            "--states {} exceeds the limit {MAX_MIXING_STATES}",
            c.states
        )));
    }
    if c.trials == 0 {
        return Err(invalid("--trials must be at least 1"));
    }
    let chain = ChainSpec::odd(c.states)?;
    let survival = coupling_simulate(&chain, 0, &chain.stationary(), c.steps, c.trials, c.seed)?;
    let mut d = Distribution::delta(c.states, 0)?;
    let mut rows = Vec::with_capacity(c.steps + 1);
    let mut violations = 0;
    for n in 0..=c.steps {
        if n > 0 {
            d = chain.step(&d)?;
        }
        let tv = chain.tv_distance_to_uniform(&d)?;
        let eps = epsilon_bound(c.states, n as u64)?;
        if tv > eps {
            violations += 1;
        }
        rows.push(vec![
            n.to_string(),
            fmt_f64(tv),
            fmt_f64(eps),
            fmt_f64(survival.probability(n)),
        ]);
    }
    emit_csv(&c.out, &["n", "tv_exact", "epsilon_bound", "coupling_survival"], &rows)?;
    let _ = writeln!(log, "mixing: N={} rows={} tv>epsilon violations={violations}", c.states, rows.len());
    Ok(())
}

/// True when the even and odd sublattices both carry nonzero values.
fn parity_mixed(f: &GridFunction) -> bool {
    let nz = |start: usize| f.values().iter().skip(start).step_by(2).any(|v| v.norm() != 0.0);
    nz(0) && nz(1)
}

fn run_evolve(c: &EvolveConfig, log: &mut dyn Write) -> RunResult<()> {
    let f = load_real_grid(&c.grid_file)?;
    let p = SchemeParams::new(*f.grid(), c.nu)?;
    if f.len() % 2 == 0 && parity_mixed(&f) {
        let _ = writeln!(
            log,
            "warning: even grid with data on both sublattices; the +-2 stencil never mixes them"
        );
    }
    let out = evolve(&p, &f, c.steps)?;
    write_grid_file(&c.out, &out)?;
    let _ = writeln!(
        log,
        "evolve: n_pts={} 2r={} steps={} t={}",
        f.len(),
        fmt_f64(p.two_r()),
        c.steps,
        fmt_f64(p.time(c.steps))
    );
    Ok(())
}

fn run_compare(c: &CompareConfig, log: &mut dyn Write) -> RunResult<()> {
    if !(c.tolerance >= 0.0) {
        return Err(invalid(format!("--tolerance must be nonnegative, got {}", c.tolerance)));
    }
    let f = load_real_grid(&c.grid_file)?;
    let walk = WalkEnsemble::new(&f, 0)?;
    let grid = *f.grid();
    let p = SchemeParams::chain_coupled(grid);
    let chain = ChainSpec::new(grid.n_pts())?;

    let markov = chain.evolve(&Distribution::signed(walk.init().to_vec()), c.steps)?;
    let markov = GridFunction::from_real(grid, markov.weights())?;
    let heat = evolve(&p, &f, c.steps)?;
    let density = density_binomial(&walk, c.steps as u64);

    let pairs = [
        ("markov-heat", markov.max_abs_diff(&heat)?),
        ("markov-walk", markov.max_abs_diff(&density)?),
        ("heat-walk", heat.max_abs_diff(&density)?),
    ];
    let worst = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
    for (name, d) in &pairs {
        let _ = writeln!(log, "{name}: {}", fmt_f64(*d));
    }
    let _ = writeln!(log, "max pairwise discrepancy: {}", fmt_f64(worst));
    if let Some(out) = &c.out {
        let rows: Vec<Vec<String>> = pairs.iter().map(|(n, d)| vec![n.to_string(), fmt_f64(*d)]).collect();
        emit_csv(out, &["pair", "max_abs_diff"], &rows)?;
    }
    if worst > c.tolerance {
        return Err(RunError::Threshold(format!(
            "discrepancy {} exceeds tolerance {}",
            fmt_f64(worst),
            fmt_f64(c.tolerance)
        )));
    }
    Ok(())
}

fn run_clt_error(c: &CltErrorConfig, log: &mut dyn Write) -> RunResult<()> {
    if let Some(bad) = c.n_list.iter().find(|n| **n < 3 || **n % 2 == 0) {
        return Err(invalid(format!("--n-list entries must be odd and at least 3, got {bad}")));
    }
    let rows = clt_error_profile(&c.n_list)?;
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.n.to_string(), fmt_f64(r.max_err), fmt_f64(r.scaled_err)])
        .collect();
    emit_csv(&c.out, &["n", "max_err", "scaled_err"], &cells)?;
    let _ = writeln!(log, "clt-error: {} rows", rows.len());
    Ok(())
}

fn run_spectral(c: &SpectralConfig, log: &mut dyn Write) -> RunResult<()> {
    let f = load_real_grid(&c.grid_file)?;
    let grid = *f.grid();
    let p = SchemeParams::new(grid, c.nu)?;
    let t = p.time(c.steps);
    let initial = fourier_coeffs(&f);
    let propagated = fourier_coeffs(&spectral_propagate(&f, c.nu, c.steps)?);

    let mut header = vec!["mode", "coeff_re", "coeff_im", "factor", "propagated_re", "propagated_im"];
    if c.compare_classical {
        header.extend(["classical_re", "classical_im", "deviation"]);
    }
    let mut worst: f64 = 0.0;
    let rows: Vec<Vec<String>> = initial
        .iter()
        .map(|(m, a)| {
            let b = propagated.coeff(m);
            let mut row = vec![
                m.to_string(),
                fmt_f64(a.re),
                fmt_f64(a.im),
                fmt_f64(propagation_factor(&grid, c.nu, m)),
                fmt_f64(b.re),
                fmt_f64(b.im),
            ];
            if c.compare_classical {
                let k = grid.wavenumber(m);
                let cl = a * (-k * k * t).exp();
                let dev = (b - cl).norm();
                worst = worst.max(dev);
                row.extend([fmt_f64(cl.re), fmt_f64(cl.im), fmt_f64(dev)]);
            }
            row
        })
        .collect();
    emit_csv(&c.out, &header, &rows)?;
    let _ = writeln!(log, "spectral: {} modes, t={}", rows.len(), fmt_f64(t));
    if c.compare_classical {
        let _ = writeln!(log, "largest per-mode deviation from the classical solution: {}", fmt_f64(worst));
    }
    Ok(())
}

fn run_kernel_solve(c: &KernelSolveConfig, log: &mut dyn Write) -> RunResult<()> {
    let f = load_real_grid(&c.grid_file)?;
    let k = KernelSpec::on_grid(f.grid(), c.t)?;
    let out = heat_kernel_convolution(&f, &k)?;
    write_grid_file(&c.out, &out)?;
    let _ = writeln!(log, "kernel-solve: t={} truncation={}", fmt_f64(c.t), fmt_f64(k.truncation));
    Ok(())
}

fn run_martingale(c: &MartingaleConfig, log: &mut dyn Write) -> RunResult<()> {
    if c.kappa > MAX_KAPPA {
        return Err(Error::KappaTooLarge {
            kappa: c.kappa,
            max: MAX_KAPPA,
        }
        .into());
    }
    if c.eta == 0 {
        return Err(invalid("--eta must be positive"));
    }
    let init: Vec<f64> = match &c.init {
        Some(path) => {
            let f = load_real_grid(path)?;
            if f.len() != c.eta {
                return Err(invalid(format!(
                    "{}: has {} points but --eta is {}",
                    path.display(),
                    f.len(),
                    c.eta
                )));
            }
            if f.values().iter().any(|v| v.im != 0.0) {
                return Err(invalid(format!("{}: values must be real", path.display())));
            }
            f.re()
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
            (0..c.eta).map(|_| rng.gen::<f64>()).collect()
        }
    };
    let field = reverse_field_from_initial(&init, c.kappa)?;
    let report = martingale_check(&field);
    for p in &report.pairs {
        let _ = writeln!(log, "levels {} -> {}: max deviation {}", p.from, p.to, fmt_f64(p.max_dev));
    }
    if let Some(out) = &c.out {
        let rows: Vec<Vec<String>> = report
            .pairs
            .iter()
            .map(|p| {
                vec![
                    p.from.to_string(),
                    p.to.to_string(),
                    fmt_f64(p.max_dev),
                    p.worst_cell.to_string(),
                ]
            })
            .collect();
        emit_csv(out, &["from", "to", "max_dev", "worst_cell"], &rows)?;
    }
    if !report.holds() {
        return Err(RunError::Threshold(format!(
            "martingale identity off by {} (tolerance {})",
            fmt_f64(report.max_deviation()),
            fmt_f64(report.tolerance)
        )));
    }
    Ok(())
}
