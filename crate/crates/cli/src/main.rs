use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lowdepth::aggregate::{check_lemma1, Type1Plan, Type2Plan};
use lowdepth::blackbox::{apeldoorn_phase_params, cornelissen_amp_params, cornelissen_phase_params};
use lowdepth::circphase::PhasePlan;
use lowdepth::harness::{
    parse_config, render_report, render_scaling, run_experiment, scaling_study, selfcheck, write_report, write_scaling,
    ExperimentConfig, HarnessError,
};
use lowdepth::rallfuller::{phase_threshold, step_count};

const EXIT_CONFIG: u8 = 2;
const EXIT_ALGORITHM: u8 = 3;

#[derive(Parser)]
#[command(
    name = "lowdepth",
    version,
    about = "Low-depth amplitude and phase estimation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded trials of one algorithm and report them.
    Run(Settings),
    /// Measure depth and query exponents over an epsilon and beta grid.
    Scale {
        #[command(flatten)]
        settings: Settings,
        /// Comma-separated precisions.
        #[arg(long, default_value = "0.1,0.05,0.02,0.01")]
        eps_grid: String,
        /// Comma-separated depth knobs.
        #[arg(long, default_value = "0,0.25,0.5,0.75,1")]
        beta_grid: String,
    },
    /// Print the parameter settings for a target without running anything.
    Params(Settings),
    /// Run the built-in invariant suites.
    Selfcheck,
}

#[derive(Args)]
struct Settings {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    truth: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv, json or svg (scaling only).
    #[arg(long)]
    format: Option<String>,
    /// Run trials on a thread pool; output order is unchanged.
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    s: Option<String>,
    /// Output cap of type II samplers.
    #[arg(long = "cap-C")]
    cap_c: Option<String>,
}

impl Settings {
    fn resolve(&self) -> Result<ExperimentConfig, HarnessError> {
        let mut pairs = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        let flags = [
            ("algorithm", &self.algorithm),
            ("truth", &self.truth),
            ("epsilon", &self.epsilon),
            ("delta", &self.delta),
            ("beta", &self.beta),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("format", &self.format),
            ("r", &self.r),
            ("s", &self.s),
            ("cap_C", &self.cap_c),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                pairs.insert(key.to_string(), v.clone());
            }
        }
        if let Some(out) = &self.out {
            pairs.insert("out".into(), out.display().to_string());
        }
        if self.parallel {
            pairs.insert("parallel".into(), "true".into());
        }
        ExperimentConfig::from_pairs(&pairs)
    }
}

fn parse_grid(text: &str) -> Result<Vec<f64>, HarnessError> {
    text.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| HarnessError::Config(format!("bad grid value `{v}`")))
        })
        .collect()
}

fn emit(text: &str, config: &ExperimentConfig) -> Result<(), HarnessError> {
    if config.output_path.is_none() {
        print!("{text}");
    }
    Ok(())
}

fn params_json(config: &ExperimentConfig) -> Result<String, HarnessError> {
    let algo = |e: lowdepth::Error| HarnessError::Algorithm { trial: 0, source: e };
    let t = &config.target;
    let mut out = serde_json::Map::new();
    let mut put = |k: &str, v: serde_json::Value| {
        out.insert(k.to_string(), v);
    };
    put("target", val(t));
    put("type1_success_floor", val(&check_lemma1(config.r, config.s)));
    put(
        "type1",
        Type1Plan::new(t, config.r, config.s).map_or_else(|e| err_json(&e), |p| val(&p)),
    );
    put(
        "type2",
        Type2Plan::new(t, config.r, config.s, config.cap_c).map_or_else(|e| err_json(&e), |p| val(&p)),
    );
    put(
        "phase",
        PhasePlan::new(*t, config.r, config.s).map_or_else(|e| err_json(&e), |p| val(&p)),
    );
    put("cornelissen_amplitude", val(&cornelissen_amp_params(t).map_err(algo)?));
    put("cornelissen_phase", val(&cornelissen_phase_params(t).map_err(algo)?));
    put(
        "apeldoorn_phase",
        apeldoorn_phase_params(t).map_or_else(|e| err_json(&e), |p| val(&p)),
    );
    put("rallfuller_steps", val(&step_count(t.epsilon).map_err(algo)?));
    put(
        "rallfuller_threshold",
        phase_threshold(config.truth, t.beta).map_or_else(|e| err_json(&e), |p| val(&p)),
    );
    Ok(serde_json::to_string_pretty(&out).expect("json values serialize") + "\n")
}

fn err_json(e: &lowdepth::Error) -> serde_json::Value {
    serde_json::json!({ "error": e.to_string() })
}

fn val<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("plain data serializes")
}

fn run(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Run(settings) => {
            let config = settings.resolve()?;
            let run = run_experiment(&config)?;
            let text = render_report(&run.report, config.format)?;
            if let Some(path) = &config.output_path {
                write_report(&run.report, config.format, path)?;
            }
            emit(&text, &config)?;
            let s = run.report.summary;
            eprintln!(
                "{} trials: success {:.4}, bias {:e}, variance {:e}, max depth {}, total queries {}, wall time {:.3}s",
                run.report.trials.len(),
                s.empirical_success,
                s.empirical_bias,
                s.empirical_variance,
                run.report.ledger.max_depth(),
                run.report.ledger.total_queries(),
                run.wall_time.as_secs_f64()
            );
        }
        Command::Scale {
            settings,
            eps_grid,
            beta_grid,
        } => {
            let config = settings.resolve()?;
            let table = scaling_study(&config, &parse_grid(&eps_grid)?, &parse_grid(&beta_grid)?)?;
            if let Some(path) = &config.output_path {
                write_scaling(&table, config.format, path)?;
            }
            emit(&render_scaling(&table, config.format), &config)?;
            for f in &table.fits {
                eprintln!(
                    "beta {}: slope D {:.3}, slope N {:.3}, slope DN {:.3}",
                    f.beta, f.slope_depth, f.slope_queries, f.slope_product
                );
            }
            if table.partial {
                eprintln!("warning: some cells failed; the table is partial");
            }
        }
        Command::Params(settings) => {
            let config = settings.resolve()?;
            print!("{}", params_json(&config)?);
        }
        Command::Selfcheck => {
            let results = selfcheck::run_all();
            let mut all = true;
            for r in &results {
                println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
                all &= r.passed;
            }
            if !all {
                return Err(HarnessError::Algorithm {
                    trial: 0,
                    source: lowdepth::Error::StepPrecondition("selfcheck failed".into()),
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                HarnessError::Config(_) | HarnessError::Io { .. } => EXIT_CONFIG,
                HarnessError::Algorithm { .. } => EXIT_ALGORITHM,
            })
        }
    }
}
