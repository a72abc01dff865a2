use clap::{Args, Parser, Subcommand};
use rfso_relay::experiment::{emit_csv, run_sweep, write_csv, ExperimentConfig, WeatherPoint};
use rfso_relay::numerics::StreamKind;
use rfso_relay::{derive_link_budget, solve_lambda_on, DualSettings, Error, Execution, RateSamples, Weather};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rfso-relay", version, about = "Mixed RF / hybrid RF-FSO relaying experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the weather × distance sweep and write CSV rows.
    Sweep(Common),
    /// Solve for the optimal multiplier at every sweep point.
    Policy(Common),
    /// Print the rate triple of one seeded channel draw.
    Capacity {
        #[command(flatten)]
        common: Common,
        /// Relay-destination distance in meters (default: first sweep distance).
        #[arg(long)]
        distance: Option<f64>,
        /// Named weather, e.g. `light-fog` (default: first sweep weather point).
        #[arg(long)]
        weather: Option<String>,
        /// Block index within the estimation stream.
        #[arg(long, default_value_t = 0)]
        index: u64,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    blocks: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// Disable the thread pool.
    #[arg(long)]
    sequential: bool,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path).map_err(|e| match e {
                Error::Io { path, source } => Error::Config(format!("{}: {source}", path.display())),
                e => e,
            })?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.base.sim.seed = seed;
        }
        if let Some(b) = self.blocks {
            cfg.base.sim.blocks = b;
        }
        if let Some(n) = self.samples {
            cfg.base.sim.samples = n;
        }
        if self.sequential {
            cfg.execution = Execution::Sequential;
        }
        if let Some(out) = &self.out {
            cfg.output = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn write_text(cfg: &ExperimentConfig, text: &str) -> Result<(), Error> {
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sweep(common: &Common) -> Result<(), Error> {
    let cfg = common.load()?;
    let rows = run_sweep(&cfg)?;
    match &cfg.output {
        Some(path) => emit_csv(&rows, path),
        None => write_csv(&rows, std::io::stdout().lock()),
    }
}

fn policy(common: &Common) -> Result<(), Error> {
    let cfg = common.load()?;
    let mut text = String::from("kappa,c_n2,d,lambda_star,case,c1_bar,c2_bar,c_fso_bar,tau_upp_bits_per_block,iterations\n");
    for &d in &cfg.distances_m {
        for &w in &cfg.weather {
            let params = cfg.point_params(w, d);
            let point = |e: Error| Error::SweepPoint {
                kappa: w.kappa_db_per_m,
                distance: d,
                source: Box::new(e),
            };
            let budget = derive_link_budget(&params).map_err(point)?;
            let samples = RateSamples::draw(&params, &budget, cfg.access_mode, params.sim.seed, params.sim.samples, cfg.execution)
                .map_err(point)?;
            let r = solve_lambda_on(&samples, budget.m, params.sim.symbols_per_block, &DualSettings::for_params(&params))
                .map_err(point)?;
            let a = r.averages;
            text.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                w.kappa_db_per_m,
                w.cn2,
                d,
                r.lambda_star,
                r.case.name(),
                a.c1_bar,
                a.c2_bar,
                a.c_fso_bar,
                r.tau_upp_per_block,
                r.iterations
            ));
        }
    }
    write_text(&cfg, &text)
}

fn capacity(common: &Common, distance: Option<f64>, weather: Option<&str>, index: u64) -> Result<(), Error> {
    let cfg = common.load()?;
    let w = match weather {
        Some(name) => WeatherPoint::from(
            Weather::from_name(name).ok_or_else(|| Error::Config(format!("`--weather`: unknown condition `{name}`")))?,
        ),
        None => cfg.weather[0],
    };
    let d = distance.unwrap_or(cfg.distances_m[0]);
    let params = cfg.point_params(w, d);
    params.validate().map_err(|e| Error::Config(e.to_string()))?;
    let budget = derive_link_budget(&params)?;
    let sampler = rfso_relay::batch::BatchSampler::new(&params, &budget, cfg.access_mode, params.sim.seed)?;
    let index = usize::try_from(index).map_err(|_| Error::Config("`--index` out of range".into()))?;
    let rf = sampler.rf_item(StreamKind::Estimation, index);
    let c_fso = sampler.optical_item(StreamKind::Estimation, index);
    write_text(
        &cfg,
        &format!(
            "kappa,c_n2,d,index,c1,c2,c_fso\n{},{},{},{},{},{},{}\n",
            w.kappa_db_per_m, w.cn2, d, index, rf.c1, rf.c2, c_fso
        ),
    )
}

fn exit_code(err: &Error) -> u8 {
    let root = match err {
        Error::SweepPoint { source, .. } => source.as_ref(),
        e => e,
    };
    match root {
        Error::NonConvergence { .. } => 3,
        Error::Config(_) | Error::Domain { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(c) => sweep(c),
        Command::Policy(c) => policy(c),
        Command::Capacity {
            common,
            distance,
            weather,
            index,
        } => capacity(common, *distance, weather.as_deref(), *index),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
