//! `tecmap`: expected damage of circular cuts on stochastic spatial networks.
//!
//! Lengths are in model units. For raster models one unit is one cell of the
//! (possibly downsampled) raster, so `--radius 5` on a 30x-downsampled
//! 30-arc-second grid is a cut of about 130 km.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use tecmap_core::io::{export_map, load_raster, write_sample_records, MapFormat, ModelConfig};
use tecmap_core::oracle::sample_records;
use tecmap_core::planner::rcce_detailed;
use tecmap_core::{
    edcc, fsl, AccuracyBudget, AttackDistribution, CircularCut, Error, McEstimate, Point,
    RcceNormalization, StochasticNetworkModel,
};

#[derive(Parser)]
#[command(name = "tecmap", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Accuracy {
    /// Additive error budget.
    #[arg(long)]
    eps: f64,
    /// Fixed grid constant instead of one derived from `--eps`.
    #[arg(long)]
    delta: Option<f64>,
    /// Calibration constant in `eps = c0 * sqrt(delta)`.
    #[arg(long)]
    c0: Option<f64>,
}

impl Accuracy {
    fn budget(&self) -> AccuracyBudget {
        let mut b = AccuracyBudget::additive(self.eps);
        if let Some(c0) = self.c0 {
            b = b.with_c0(c0);
        }
        if let Some(d) = self.delta {
            b = b.with_delta(d);
        }
        b
    }

    /// Reports the error bound a fixed `--delta` actually guarantees.
    /// `shares` is the number of equal budget parts the run splits into.
    fn report_implied(&self, model: &StochasticNetworkModel, radius: f64, shares: f64) {
        if let Some(d) = self.delta {
            let (eps, _) = self.budget().implied_eps(d, model.rec(), radius, model);
            eprintln!("implied eps at delta {d}: {:e}", eps * shares);
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Ascii,
}

#[derive(Subcommand)]
enum Command {
    /// Expected damage of one cut, split into alpha, beta and gamma links.
    Edcc {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        cx: f64,
        #[arg(long)]
        cy: f64,
        #[arg(long)]
        radius: f64,
        #[command(flatten)]
        accuracy: Accuracy,
    },
    /// Sensitivity map over all admissible centers and the worst cut.
    Fsl {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        radius: f64,
        #[command(flatten)]
        accuracy: Accuracy,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Expected damage of a randomly placed cut.
    Rcce {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        radius: f64,
        #[command(flatten)]
        accuracy: Accuracy,
        /// Raster attack density; uniform over admissible centers if absent.
        #[arg(long)]
        psi: Option<PathBuf>,
        /// Rescale `--psi` to unit mass over the admissible centers.
        #[arg(long)]
        normalize_over_rec: bool,
        /// Divide the uniform average by the full rectangle's area.
        #[arg(long, conflicts_with = "psi")]
        full_rectangle: bool,
    },
    /// Monte-Carlo damage of one cut over sampled networks.
    Sample {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        cx: f64,
        #[arg(long)]
        cy: f64,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InfeasibleBudget(_)
        | Error::GridTooCoarse { .. }
        | Error::ExpectedCountOverflow { .. } => 3,
        Error::Io { .. } => 4,
        _ => 2,
    }
}

fn load_model(path: &PathBuf) -> Result<StochasticNetworkModel, Error> {
    ModelConfig::from_path(path)?.build_model()
}

fn print_json(value: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Edcc {
            config,
            cx,
            cy,
            radius,
            accuracy,
        } => {
            let model = load_model(&config)?;
            let cut = CircularCut::new(Point::new(cx, cy), radius)?;
            accuracy.report_implied(&model, radius, 1.0);
            let b = edcc(&model, &cut, &accuracy.budget())?;
            print_json(json!({
                "alpha": b.alpha,
                "beta": b.beta,
                "gamma": b.gamma,
                "total": b.total,
                "delta": b.delta,
            }));
        }
        Command::Fsl {
            config,
            radius,
            accuracy,
            out,
            format,
        } => {
            let model = load_model(&config)?;
            accuracy.report_implied(&model, radius, 2.0);
            let map = fsl(&model, radius, &accuracy.budget())?;
            let format = match format {
                Format::Csv => MapFormat::Csv,
                Format::Ascii => MapFormat::Ascii,
            };
            export_map(&map, &out, format)?;
            print_json(json!({
                "argmax": [map.argmax.x, map.argmax.y],
                "argmax_value": map.argmax_value,
                "radius": radius,
                "delta": map.delta,
                "n_centers": map.values().len(),
            }));
        }
        Command::Rcce {
            config,
            radius,
            accuracy,
            psi,
            normalize_over_rec,
            full_rectangle,
        } => {
            let model = load_model(&config)?;
            let dist = match psi {
                Some(path) => {
                    let psi = load_raster(&path)?;
                    AttackDistribution::Density {
                        variation_bound: psi.max_slope(),
                        psi,
                        renormalize: normalize_over_rec,
                    }
                }
                None if full_rectangle => {
                    AttackDistribution::Uniform(RcceNormalization::FullRectangle)
                }
                None => AttackDistribution::uniform(),
            };
            accuracy.report_implied(&model, radius, 2.0);
            let r = rcce_detailed(&model, radius, &accuracy.budget(), &dist)?;
            if normalize_over_rec {
                eprintln!("attack density mass over admissible centers: {:e}", r.density_mass);
            }
            print_json(json!({
                "expected_damage": r.expected_damage,
                "delta": r.delta,
                "n_centers": r.n_centers,
                "density_mass": r.density_mass,
            }));
        }
        Command::Sample {
            config,
            cx,
            cy,
            radius,
            n,
            seed,
            out,
        } => {
            let model = load_model(&config)?;
            let cut = CircularCut::new(Point::new(cx, cy), radius)?;
            cut.ensure_within(model.rec())?;
            let records = sample_records(&model, &cut, n, seed)?;
            write_sample_records(&out, &records)?;
            if n >= 2 {
                let est = McEstimate::from_records(&records);
                print_json(serde_json::to_value(est).expect("serializable"));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
