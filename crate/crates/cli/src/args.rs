use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use wdl_core::certify::Mutation;
use wdl_core::{Ensemble, Space, StateKind};

use crate::config::{GridSpec, RunConfig, SweepSpec};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "wdl", version, about = "Wigner distributions and decoherence of free Gaussian wave packets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a position or momentum density on a 1-D grid (CSV).
    Scan(Flags),
    /// Sample the Wigner function on an x-p grid (CSV matrix, optional graymap).
    Wigner(Flags),
    /// Attenuation of the cat interference term and decoherence time (JSON).
    Attenuation(Flags),
    /// Certify the closed forms against the quadrature oracle (JSON).
    Verify(Flags),
    /// Decoherence time against kT, d or sigma (CSV).
    Sweep(Flags),
}

impl Command {
    pub fn flags(&self) -> &Flags {
        match self {
            Command::Scan(f)
            | Command::Wigner(f)
            | Command::Attenuation(f)
            | Command::Verify(f)
            | Command::Sweep(f) => f,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// Cat separation.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<f64>,
    #[arg(long = "kT", allow_hyphen_values = true)]
    pub kt: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hbar: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub v0: Option<f64>,
    #[arg(long)]
    pub space: Option<Space>,
    #[arg(long)]
    pub ensemble: Option<Ensemble>,
    #[arg(long)]
    pub state: Option<StateKind>,
    /// Evaluation time; repeat for several.
    #[arg(long = "t", allow_hyphen_values = true)]
    pub times: Vec<f64>,
    /// 1-D grid, or the x axis of a Wigner grid: min:max:count.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    /// p axis of a Wigner grid: min:max:count.
    #[arg(long, allow_hyphen_values = true)]
    pub pgrid: Option<GridSpec>,
    /// Output file (standard output when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an 8-bit graymap of each Wigner field.
    #[arg(long)]
    pub pgm: bool,
    /// Also write a gnuplot script for each Wigner field.
    #[arg(long)]
    pub gnuplot: bool,
    /// Sweep axis: param=v1,v2,... with param one of kT, d, sigma.
    #[arg(long)]
    pub sweep: Vec<SweepSpec>,
    #[arg(long, hide = true)]
    pub inject_fault: Option<Mutation>,
}

impl Flags {
    /// File values (if any) with the flags laid over them.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
                RunConfig::from_json(&text)?
            }
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident => $target:ident),*) => {
                $(if let Some(v) = self.$field { c.$target = v; })*
            };
        }
        set!(sigma => sigma, d => d, kt => kt, hbar => hbar, mass => mass, x0 => x0, v0 => v0,
             space => space, ensemble => ensemble, state => state);
        if !self.times.is_empty() {
            c.times = self.times.clone();
        }
        if self.grid.is_some() {
            c.grid = self.grid;
        }
        if self.pgrid.is_some() {
            c.pgrid = self.pgrid;
        }
        match self.sweep.len() {
            0 => {}
            1 => c.sweep = Some(self.sweep[0].clone()),
            _ => return Err(CliError::Config("only one --sweep axis is allowed".into())),
        }
        if let Some(s) = &c.sweep {
            s.check().map_err(CliError::Config)?;
        }
        if let Some(m) = self.inject_fault {
            c.certification.get_or_insert_with(Default::default).mutation = Some(m);
        }
        c.check_times()?;
        Ok(c)
    }
}
