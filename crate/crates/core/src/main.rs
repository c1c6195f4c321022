use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use otfs_ddr::harness::config::parse_snr_range;
use otfs_ddr::harness::{
    emit_analysis_csv, emit_csv, run_analysis, run_sweep, write_analysis_csv, write_csv, ConfigError, Receiver,
    SimConfig, Simulation,
};
use otfs_ddr::modem::Modulation;

#[derive(Parser, Debug)]
#[command(name = "otfs-ddr", version, about = "OTFS receiver simulations: DDR, DP and classic TR")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a BER sweep and write one CSV row per receiver and SNR point.
    Simulate(Overrides),
    /// Closed-form SINR statistics (DDR vs DP gain) over channel realizations.
    Analyze(Overrides),
}

#[derive(Args, Debug)]
struct Overrides {
    /// TOML experiment config; built-in defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// SNR grid as start:stop:step in dB, inclusive.
    #[arg(long)]
    snr: Option<String>,
    /// Comma-separated subset of ddr,dp,tr.
    #[arg(long, value_delimiter = ',')]
    receivers: Option<Vec<String>>,
    #[arg(long)]
    speed_kmph: Option<f64>,
    /// bpsk, qpsk or 8psk.
    #[arg(long = "mod")]
    modulation: Option<String>,
    #[arg(long)]
    antennas: Option<usize>,
    #[arg(long)]
    csi_epsilon: Option<f64>,
    /// Give every path of a realization the same Doppler.
    #[arg(long)]
    common_doppler: bool,
    /// Frame budget per SNR point (realizations for `analyze`).
    #[arg(long)]
    frames: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Use the 512 x 128 grid instead of the configured M and N.
    #[arg(long)]
    full_scale: bool,
}

impl Overrides {
    fn resolve(&self) -> Result<SimConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => SimConfig::load(path)?,
            None => SimConfig::default(),
        };
        if self.full_scale {
            cfg = cfg.full_scale();
        }
        if let Some(snr) = &self.snr {
            cfg.snr_db = parse_snr_range(snr)?;
        }
        if let Some(list) = &self.receivers {
            cfg.receivers = list.iter().map(|s| s.parse()).collect::<Result<Vec<Receiver>, _>>()?;
        }
        if let Some(v) = self.speed_kmph {
            cfg.speed_kmph = v;
        }
        if let Some(m) = &self.modulation {
            cfg.modulation = m.parse::<Modulation>()?;
        }
        if let Some(q) = self.antennas {
            cfg.num_antennas = q;
        }
        if let Some(e) = self.csi_epsilon {
            cfg.csi_epsilon = e;
        }
        if self.common_doppler {
            cfg.common_doppler = true;
        }
        if let Some(f) = self.frames {
            cfg.max_frames = f;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        Ok(cfg)
    }
}

enum Failure {
    Config(String),
    Runtime(String),
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (overrides, analyze) = match &cli.command {
        Command::Simulate(o) => (o, false),
        Command::Analyze(o) => (o, true),
    };
    let cfg = overrides.resolve().map_err(|e| Failure::Config(e.to_string()))?;
    let sim = Simulation::new(cfg).map_err(|e| Failure::Config(e.to_string()))?;
    let runtime = |e: &dyn std::fmt::Display| Failure::Runtime(e.to_string());
    if analyze {
        let rows = run_analysis(&sim).map_err(|e| runtime(&e))?;
        match &overrides.out {
            Some(path) => write_analysis_csv(&rows, path),
            None => emit_analysis_csv(&rows, io::stdout().lock()),
        }
        .map_err(|e| runtime(&e))
    } else {
        let records = run_sweep(&sim, overrides.workers).map_err(|e| runtime(&e))?;
        match &overrides.out {
            Some(path) => write_csv(&records, path),
            None => emit_csv(&records, io::stdout().lock()),
        }
        .map_err(|e| runtime(&e))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            let _ = writeln!(io::stderr(), "configuration error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(io::stderr(), "error: {msg}");
            ExitCode::from(2)
        }
    }
}
