use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use udn_cli::adjudicate::{self, Setup, MIN_TRIALS};
use udn_cli::config::{D0Toggle, MuToggle, Overrides, RunConfig};
use udn_cli::presets::Preset;
use udn_cli::{output, sweep, CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "udn", version, about = "Coverage and area spectral efficiency of dense directional networks")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (sweep, adjudicate) or directory (figure presets).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Monte Carlo trials per grid point.
    #[arg(long, global = true)]
    trials: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Skip the Monte Carlo columns.
    #[arg(long, global = true)]
    no_mc: bool,
    /// Where the fading rate enters the adapted coverage limit.
    #[arg(long, global = true, value_enum)]
    toggle_mu_convention: Option<MuToggle>,
    /// Tail term of the dense-network coverage bound.
    #[arg(long, global = true, value_enum)]
    toggle_thm3_d0: Option<D0Toggle>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the grid of a configuration file.
    Sweep,
    /// Coverage and ASE against density for β₁ ∈ {1, 2, 3}.
    Fig2,
    /// Interference-limited ASE against the beam alignment probability.
    Fig3,
    /// Beam adaptation with a flat near field.
    Fig4,
    /// Run both convention toggles against the simulator.
    Adjudicate {
        /// Density for the bound toggle, BS/km².
        #[arg(long, default_value_t = 1e4)]
        d0_density: f64,
    },
    /// Parse and check a configuration without evaluating it.
    ValidateConfig,
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            out: self.out.clone(),
            trials: self.trials,
            seed: self.seed,
            no_mc: self.no_mc,
            mu_convention: self.toggle_mu_convention,
            thm3_d0: self.toggle_thm3_d0,
        }
    }

    fn load(&self) -> Result<RunConfig> {
        let path = self
            .config
            .as_deref()
            .ok_or_else(|| CliError::config("--config", "this command needs a configuration file"))?;
        let mut cfg = RunConfig::load(path)?;
        cfg.apply(&self.overrides());
        Ok(cfg)
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::ValidateConfig => {
            let r = cli.load()?.resolve()?;
            println!("ok: {} grid points", r.grid.len());
            print!("{}", r.echo);
        }
        Command::Sweep => {
            let cfg = cli.load()?;
            let csv = cfg
                .output
                .csv
                .clone()
                .ok_or_else(|| CliError::config("output.csv", "set it in the file or pass --out"))?;
            let resolved = cfg.resolve()?;
            let rows = sweep::evaluate(&resolved)?;
            let files = sweep::sweep_files(&resolved, &rows, &csv, cfg.output.svg.as_deref());
            output::write_all(&files)?;
            report(&files);
        }
        Command::Fig2 | Command::Fig3 | Command::Fig4 => {
            let preset = match cli.command {
                Command::Fig2 => Preset::Fig2,
                Command::Fig3 => Preset::Fig3,
                _ => Preset::Fig4,
            };
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from(preset.name()));
            let files = preset.run(&dir, &cli.overrides())?;
            output::write_all(&files)?;
            report(&files);
        }
        Command::Adjudicate { d0_density } => {
            let mut setup = Setup::default();
            if cli.config.is_some() {
                let cfg = cli.load()?;
                if let Some(mu) = cfg.params.mu {
                    setup.mu = mu;
                }
                if let Some(sim) = &cfg.sim {
                    setup.trials = sim.trials;
                    setup.seed = sim.seed;
                }
            }
            setup.trials = cli.trials.unwrap_or(setup.trials);
            setup.seed = cli.seed.unwrap_or(setup.seed);
            if setup.trials < MIN_TRIALS {
                return Err(CliError::config("sim.trials", format!("adjudication needs at least {MIN_TRIALS} trials")));
            }
            if cli.no_mc {
                return Err(CliError::config("--no-mc", "adjudication is a Monte Carlo run"));
            }
            let mu = adjudicate::adjudicate_mu(&setup)?;
            let d0 = adjudicate::adjudicate_d0(&setup, *d0_density)?;
            let text = adjudicate::render(&setup, &mu, &d0);
            let path = cli.out.clone().unwrap_or_else(|| PathBuf::from("adjudication.md"));
            output::write_all(&[(path.clone(), text)])?;
            println!("fading-rate convention: {}", mu.verdict);
            println!("bound tail term: {}", d0.verdict);
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn report(files: &[(PathBuf, String)]) {
    for (path, _) in files {
        println!("wrote {}", Path::new(path).display());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
