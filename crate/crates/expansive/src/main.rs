use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use expansive::config::{
    Centers, CloudSource, Escape, ExperimentConfig, NotionSpec, Operation, SeedSource, SystemParams, SystemSpec,
    Window,
};
use expansive::runner::run_experiment;
use expansive::RunError;

/// Finite-horizon expansivity experiments on the catalog systems.
#[derive(Parser, Debug)]
#[command(name = "expansive", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Seed for randomized choices.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the catalog systems.
    Catalog {
        #[command(flatten)]
        common: Common,
    },
    /// Run a JSON experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        horizon: Option<u32>,
        #[arg(long)]
        grid: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Orbit of one point.
    Orbit {
        #[arg(long)]
        system: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        back: u32,
        #[arg(long)]
        forward: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Dynamical balls around given or random centers.
    Ball {
        #[arg(long)]
        system: String,
        /// Center coordinates; repeat for several centers.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, action = clap::ArgAction::Append)]
        point: Vec<f64>,
        /// Number of seeded random centers instead of --point.
        #[arg(long, conflicts_with = "point")]
        random: Option<usize>,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        horizon: u32,
        #[arg(long)]
        grid: f64,
        #[arg(long)]
        window_half: Option<f64>,
        #[arg(long)]
        max_diameter: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Bounds on the epsilon-dimension of a cloud CSV.
    Dim {
        /// Only used by generated clouds; a CSV carries its own space.
        #[arg(long, default_value = "irregular_saddle_2d")]
        system: String,
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Grid scan for points whose forward orbit does not escape.
    StableSet {
        #[arg(long)]
        system: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lo: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        hi: Vec<f64>,
        #[arg(long)]
        grid: f64,
        #[arg(long)]
        horizon: u32,
        /// Escape when leaving this ball instead of the saddle rule.
        #[arg(long, requires = "escape_center")]
        escape_radius: Option<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        escape_center: Option<Vec<f64>>,
        #[arg(long)]
        max_hausdorff: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Test an expansivity notion on seed sets.
    Test {
        #[arg(long)]
        system: String,
        /// expansive, n_expansive, cw, partial, dw, positive_dw or sensitivity.
        #[arg(long)]
        notion: String,
        /// Central dimension for partial and dw notions.
        #[arg(long, default_value_t = 0)]
        d: usize,
        /// Ball size for n_expansive.
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        horizon: u32,
        /// Seed source as JSON, e.g. '{"kind":"segments","count":8,"length":0.01,"gap":0.001}'.
        #[arg(long)]
        seeds: String,
        #[command(flatten)]
        common: Common,
    },
    /// Contact order and local ball bound of two polynomial graphs.
    Tangency {
        /// Ascending coefficients of the stable graph.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        stable: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        unstable: Vec<f64>,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        half_window: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Draw a cloud CSV and/or the comb segments as SVG.
    Render {
        #[arg(long, default_value = "irregular_saddle_2d")]
        system: String,
        #[arg(long)]
        cloud: Option<PathBuf>,
        #[arg(long)]
        e_segments: bool,
        #[arg(long, value_delimiter = ',')]
        project: Option<Vec<usize>>,
        #[arg(long)]
        title: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn config(system: &str, operation: Operation, common: Common) -> ExperimentConfig {
    ExperimentConfig {
        system: SystemSpec {
            id: system.to_string(),
            params: SystemParams::default(),
        },
        operation,
        output_dir: common.out,
        seed: common.seed,
    }
}

fn notion(kind: &str, d: usize, n: usize) -> Result<NotionSpec, RunError> {
    Ok(match kind {
        "expansive" => NotionSpec::Expansive,
        "n_expansive" => NotionSpec::NExpansive { n },
        "cw" => NotionSpec::Cw,
        "partial" => NotionSpec::Partial { d },
        "dw" => NotionSpec::Dw { d },
        "positive_dw" => NotionSpec::PositiveDw { d },
        "sensitivity" => NotionSpec::Sensitivity,
        other => return Err(RunError::Config(format!("unknown notion `{other}`"))),
    })
}

/// Apply command-line overrides to the fields an operation has.
fn override_fields(
    op: &mut Operation,
    horizon: Option<u32>,
    grid: Option<f64>,
    delta: Option<f64>,
) -> Result<(), RunError> {
    let missing = |flag: &str, op: &Operation| RunError::Config(format!("--{flag} does not apply to {}", op.name()));
    if let Some(v) = horizon {
        match op {
            Operation::Ball { horizon, .. } | Operation::StableSet { horizon, .. } | Operation::Test { horizon, .. } => {
                *horizon = v
            }
            _ => return Err(missing("horizon", op)),
        }
    }
    if let Some(v) = grid {
        match op {
            Operation::Ball { grid, .. } | Operation::StableSet { grid, .. } => *grid = v,
            _ => return Err(missing("grid", op)),
        }
    }
    if let Some(v) = delta {
        match op {
            Operation::Ball { delta, .. } | Operation::Test { delta, .. } => *delta = v,
            _ => return Err(missing("delta", op)),
        }
    }
    Ok(())
}

fn build(cmd: Command) -> Result<ExperimentConfig, RunError> {
    Ok(match cmd {
        Command::Catalog { common } => config("cat_map", Operation::Catalog, common),
        Command::Run {
            config,
            out,
            seed,
            horizon,
            grid,
            delta,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            override_fields(&mut cfg.operation, horizon, grid, delta)?;
            cfg
        }
        Command::Orbit {
            system,
            point,
            back,
            forward,
            common,
        } => config(&system, Operation::Orbit { point, back, forward }, common),
        Command::Ball {
            system,
            point,
            random,
            delta,
            horizon,
            grid,
            window_half,
            max_diameter,
            common,
        } => {
            let centers = match random {
                Some(n) => Centers::Random(n),
                None => {
                    let dim = expansive_core::systems::DynSystem::from_id(&system)
                        .ok()
                        .and_then(|s| s.space())
                        .map_or(1, |t| t.dim());
                    if point.is_empty() || point.len() % dim != 0 {
                        return Err(RunError::Config(format!(
                            "--point needs a multiple of {dim} coordinates, got {}",
                            point.len()
                        )));
                    }
                    Centers::Points(point.chunks(dim).map(<[f64]>::to_vec).collect())
                }
            };
            let op = Operation::Ball {
                centers,
                delta,
                horizon,
                grid,
                window_half,
                max_diameter,
            };
            config(&system, op, common)
        }
        Command::Dim {
            system,
            cloud,
            epsilon,
            oracle,
            common,
        } => {
            let op = Operation::Dim {
                cloud: CloudSource::Csv { path: cloud },
                epsilon,
                oracle,
            };
            config(&system, op, common)
        }
        Command::StableSet {
            system,
            lo,
            hi,
            grid,
            horizon,
            escape_radius,
            escape_center,
            max_hausdorff,
            common,
        } => {
            let escape = match (escape_radius, escape_center) {
                (Some(radius), Some(center)) => Escape::Radius { center, radius },
                _ => Escape::SaddleR1,
            };
            let op = Operation::StableSet {
                window: Window { lo, hi },
                grid,
                horizon,
                escape,
                max_hausdorff,
            };
            config(&system, op, common)
        }
        Command::Test {
            system,
            notion: kind,
            d,
            n,
            delta,
            horizon,
            seeds,
            common,
        } => {
            let seeds: SeedSource =
                serde_json::from_str(&seeds).map_err(|e| RunError::Config(format!("--seeds: {e}")))?;
            let op = Operation::Test {
                notion: notion(&kind, d, n)?,
                delta,
                horizon,
                seeds,
            };
            config(&system, op, common)
        }
        Command::Tangency {
            stable,
            unstable,
            r,
            half_window,
            common,
        } => {
            let op = Operation::Tangency {
                stable,
                unstable,
                r,
                half_window,
            };
            config("cat_map", op, common)
        }
        Command::Render {
            system,
            cloud,
            e_segments,
            project,
            title,
            common,
        } => {
            let project = match project.as_deref() {
                None => None,
                Some(&[a, b]) => Some([a, b]),
                Some(_) => return Err(RunError::Config("--project needs two axis indices".into())),
            };
            let op = Operation::Render {
                cloud: cloud.map(|path| CloudSource::Csv { path }),
                e_segments,
                project,
                title,
            };
            config(&system, op, common)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build(cli.command).and_then(|cfg| {
        cfg.validate()?;
        let out = cfg.output_dir.clone();
        run_experiment(&cfg).map(|o| (o, out))
    });
    match result {
        Ok((outcome, out)) => {
            let r = &outcome.report;
            // a closed stdout must not turn a finished run into a failure
            let mut stdout = std::io::stdout().lock();
            if let Some(entries) = r.results.as_array().filter(|_| r.operation == "catalog") {
                for e in entries {
                    let _ = writeln!(
                        stdout,
                        "{:<22} {:<9} {}", e["id"].as_str().unwrap_or(""), e["space"].as_str().unwrap_or(""), e["description"].as_str().unwrap_or("")
                    );
                }
            }
            let _ = writeln!(stdout, "{} {}: {} ({})", r.system, r.operation, r.reason, r.status.name());
            let _ = writeln!(stdout, "report: {}", out.join("report.json").display());
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
