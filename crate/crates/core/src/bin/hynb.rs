use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hynb::harness::{
    cmd_detect, cmd_generate, cmd_phase_diagram, cmd_spectrum, cmd_validate, init_threads,
    DetectConfig, EigenConfig, ExperimentConfig, Suite, ValidateInput, EXIT_BELOW_THRESHOLD,
};
use hynb::model::Labels;
use hynb::{Hypergraph, Result};

/// Spectral community detection in sparse uniform hypergraphs.
#[derive(Parser)]
#[command(name = "hynb", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a hypergraph and its labels from the model in the config.
    Generate {
        #[command(flatten)]
        common: Common,
    },
    /// Leading eigenvalues of the reduced non-backtracking operator.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        graph: PathBuf,
        /// Number of eigenvalues.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        margin: Option<f64>,
        /// Also write an SVG scatter.
        #[arg(long)]
        svg: bool,
    },
    /// Recover communities.
    Detect {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        alg: Option<u8>,
        /// Number of clusters.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        margin: Option<f64>,
        /// Truncation threshold of the randomized rounding (algorithm 1).
        #[arg(long = "K")]
        threshold: Option<f64>,
    },
    /// Run a validation suite: identities, ihara-bass, gw or gram.
    Validate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        suite: Suite,
        /// Validate this hypergraph instead of sampling from the config.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        ell: Option<usize>,
    },
    /// Overlap across a grid of Kesten-Stigum margins.
    PhaseDiagram {
        #[command(flatten)]
        common: Common,
    },
}

fn load_config(common: &Common, required: bool) -> Result<Option<ExperimentConfig>> {
    let cfg = match &common.config {
        Some(p) => Some(ExperimentConfig::load(p)?),
        None if required => {
            return Err(hynb::Error::Config("this command needs --config".into()));
        }
        None => None,
    };
    Ok(cfg.map(|mut c| {
        if let Some(o) = &common.out {
            c.out_dir = o.clone();
        }
        c
    }))
}

fn out_dir(common: &Common, cfg: Option<&ExperimentConfig>) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| cfg.map(|c| c.out_dir.clone()))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn print_json<T: serde::Serialize>(v: &T) {
    match serde_json::to_string_pretty(v) {
        // A closed pipe (e.g. `| head`) is not an error worth reporting.
        Ok(s) => drop(writeln!(std::io::stdout().lock(), "{s}")),
        Err(e) => log::error!("cannot serialize summary: {e}"),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Generate { common } => {
            let cfg = load_config(&common, true)?.expect("required");
            let seeds = common.seed.map_or(cfg.seeds.clone(), |s| vec![s]);
            for s in seeds {
                print_json(&cmd_generate(&cfg.model, s, &cfg.out_dir)?);
            }
        }
        Cmd::Spectrum {
            common,
            graph,
            k,
            margin,
            svg,
        } => {
            let cfg = load_config(&common, false)?;
            let mut eigen = cfg.as_ref().map(|c| c.eigen.clone()).unwrap_or_default();
            if let Some(k) = k {
                eigen.k = k;
            }
            if let Some(m) = margin {
                eigen.margin = m;
            }
            let g = Hypergraph::load(&graph)?;
            let (summary, _) = cmd_spectrum(
                &g,
                &eigen,
                common.seed.unwrap_or(0),
                &out_dir(&common, cfg.as_ref()),
                svg,
            )?;
            print_json(&summary);
        }
        Cmd::Detect {
            common,
            graph,
            labels,
            alg,
            k,
            margin,
            threshold,
        } => {
            let cfg = load_config(&common, false)?;
            let mut eigen: EigenConfig = cfg.as_ref().map(|c| c.eigen.clone()).unwrap_or_default();
            let mut det: DetectConfig = cfg.as_ref().map(|c| c.detect.clone()).unwrap_or_default();
            if let Some(a) = alg {
                det.alg = a;
            }
            if k.is_some() {
                det.k = k;
            }
            if let Some(m) = margin {
                eigen.margin = m;
            }
            if let Some(t) = threshold {
                det.rounding_threshold = t;
            }
            let g = Hypergraph::load(&graph)?;
            let model = cfg.as_ref().map(|c| c.model.to_params()).transpose()?;
            let r = model.as_ref().map(|p| p.r());
            let labels = labels.map(|p| Labels::load(&p, r)).transpose()?;
            let seed = common.seed.unwrap_or(0);
            let summary = cmd_detect(
                &g,
                labels.as_ref(),
                model.as_ref(),
                &det,
                &eigen,
                seed,
                &out_dir(&common, cfg.as_ref()),
            )?;
            print_json(&summary);
            if summary.below_threshold {
                return Ok(ExitCode::from(EXIT_BELOW_THRESHOLD));
            }
        }
        Cmd::Validate {
            common,
            suite,
            graph,
            labels,
            ell,
        } => {
            let mut cfg = load_config(
                &common,
                graph.is_none() || matches!(suite, Suite::Gw | Suite::Gram),
            )?
            .unwrap_or_else(|| {
                ExperimentConfig::new(hynb::model::ModelConfig::symmetric(1, 1, 2, 0.0, 0.0))
            });
            if let Some(o) = &common.out {
                cfg.out_dir = o.clone();
            }
            if ell.is_some() {
                cfg.ell = ell;
            }
            let g = graph.as_deref().map(Hypergraph::load).transpose()?;
            let labels = labels.map(|p| Labels::load(&p, None)).transpose()?;
            let input = match &g {
                Some(g) => ValidateInput::Graph(g, labels.as_ref()),
                None => ValidateInput::Config,
            };
            let report = cmd_validate(suite, input, &cfg, common.seed.unwrap_or(0))?;
            print_json(&report);
            if !report.passed {
                return Ok(ExitCode::FAILURE);
            }
        }
        Cmd::PhaseDiagram { common } => {
            let mut cfg = load_config(&common, true)?.expect("required");
            if let Some(s) = common.seed {
                cfg.seeds = vec![s];
            }
            for row in cmd_phase_diagram(&cfg)? {
                print_json(&row);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
