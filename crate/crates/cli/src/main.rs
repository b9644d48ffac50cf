use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use sjt_forge::pipeline::{self, RunConfig};
use sjt_forge::prompt_forge::{build_prompt, strategy_audit, PromptSpec, PromptVersion};
use sjt_forge::Facet;

#[derive(Parser)]
#[command(
    name = "forge",
    version,
    about = "Generate and validate situational judgment test items"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Run config (JSON) or a manifest from an earlier run. For `simulate`
    /// this may also be a respondent simulator config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for option shuffling and simulation.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Mock script; no network calls are made.
    #[arg(long, global = true)]
    mock: Option<PathBuf>,
    /// Chat-completions endpoint URL.
    #[arg(long, global = true)]
    endpoint: Option<String>,
    /// Permute option order of generated items.
    #[arg(long, global = true)]
    shuffle_options: bool,
    /// Decimal places for statistics (p-values get one more).
    #[arg(long, global = true)]
    decimals: Option<usize>,
    /// Log more detail (repeat for debug output).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Build prompts, call the model, parse completions into bank.json.
    Generate {
        #[arg(long)]
        version: Option<PromptVersion>,
        /// Facets to generate (default: all five).
        #[arg(long = "facet")]
        facets: Vec<Facet>,
        #[arg(long)]
        items_per_facet: Option<usize>,
        #[arg(long)]
        temperature: Option<f64>,
        #[arg(long)]
        model: Option<String>,
        /// Prompt spec override as FACET=FILE.
        #[arg(long = "spec", value_parser = parse_spec_arg)]
        specs: Vec<(Facet, PathBuf)>,
    },
    /// Parse a raw completion into bank.json and issues.json.
    Parse {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        facet: Facet,
    },
    /// Content-validity comparison of expert ratings.
    Cv {
        #[arg(long)]
        ratings: Option<PathBuf>,
        #[arg(long)]
        groups: Option<PathBuf>,
        #[arg(long)]
        title: Option<String>,
    },
    /// Screening, reliability and validity of respondent data.
    Psych {
        #[arg(long)]
        bank: Option<PathBuf>,
        #[arg(long)]
        responses: Option<PathBuf>,
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// Simulate respondents for a bank and/or expert ratings.
    Simulate {
        /// Respondent simulator config.
        #[arg(long)]
        sim: Option<PathBuf>,
        #[arg(long)]
        bank: Option<PathBuf>,
        /// Expert-rating simulator config.
        #[arg(long)]
        experts: Option<PathBuf>,
    },
    /// Merge report.json files from earlier runs.
    Report {
        /// Run directories (or report.json files) to merge.
        #[arg(long = "from", required = false)]
        from: Vec<PathBuf>,
    },
    /// Print an assembled prompt.
    Prompt {
        #[arg(long, default_value = "v2")]
        version: PromptVersion,
        #[arg(long)]
        facet: Facet,
        /// Prompt spec file instead of the built-in spec.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Also print the strategy audit.
        #[arg(long)]
        audit: bool,
    },
}

fn parse_spec_arg(s: &str) -> Result<(Facet, PathBuf), String> {
    let (f, p) = s.split_once('=').ok_or("expected FACET=FILE")?;
    let facet: Facet = f.parse().map_err(|e| format!("{e}"))?;
    Ok((facet, PathBuf::from(p)))
}

fn is_sim_config(path: &Path) -> bool {
    std::fs::read_to_string(path)
        .ok()
        .and_then(|t| serde_json::from_str::<serde_json::Value>(&t).ok())
        .is_some_and(|v| v.get("items").is_some() && v.get("manifest_version").is_none())
}

fn load_config(g: &Global, command: &Command) -> Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) if matches!(command, Command::Simulate { .. }) && is_sim_config(p) => {
            let mut c = RunConfig::default();
            c.files.sim_config = Some(p.clone());
            c
        }
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if g.seed.is_some() {
        cfg.seed = g.seed;
    }
    if let Some(m) = &g.mock {
        cfg.gateway.mock = Some(m.clone());
    }
    if let Some(e) = &g.endpoint {
        cfg.gateway.params.endpoint_url = e.clone();
    }
    if g.shuffle_options {
        cfg.generation.shuffle_options = true;
    }
    if let Some(d) = g.decimals {
        cfg.report.decimals = d;
    }
    Ok(cfg)
}

fn set(slot: &mut Option<PathBuf>, v: &Option<PathBuf>) {
    if v.is_some() {
        *slot = v.clone();
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = load_config(&cli.global, &cli.command)?;
    let out = cli.global.out.as_path();
    match &cli.command {
        Command::Generate {
            version,
            facets,
            items_per_facet,
            temperature,
            model,
            specs,
        } => {
            let g = &mut cfg.generation;
            if let Some(v) = version {
                g.version = *v;
            }
            if !facets.is_empty() {
                g.facets = facets.clone();
            }
            if let Some(n) = items_per_facet {
                g.items_per_facet = *n;
            }
            for (f, p) in specs {
                g.prompt_specs.insert(*f, p.clone());
            }
            if let Some(t) = temperature {
                cfg.gateway.params.temperature = *t;
            }
            if let Some(m) = model {
                cfg.gateway.params.model_id = m.clone();
            }
            let outcome = pipeline::run_generate(&cfg, out)?;
            for (facet, d) in &outcome.diagnostics {
                println!(
                    "{facet}: {} items from {} completion(s), {} block(s) rejected, {} duplicate(s)",
                    outcome.bank.facet_items(*facet).count(),
                    d.completions,
                    d.rejected,
                    d.duplicates
                );
            }
            println!(
                "wrote {} items to {}",
                outcome.bank.items.len(),
                out.join("bank.json").display()
            );
        }
        Command::Parse { input, facet } => {
            cfg.files.completion = Some(input.clone());
            let (bank, parsed) = pipeline::run_parse(&cfg, *facet, out)?;
            println!(
                "{} accepted, {} rejected of {} block(s); wrote {}",
                bank.items.len(),
                parsed.rejected_blocks(),
                parsed.block_count,
                out.join("bank.json").display()
            );
        }
        Command::Cv {
            ratings,
            groups,
            title,
        } => {
            set(&mut cfg.files.ratings, ratings);
            set(&mut cfg.files.groups, groups);
            if title.is_some() {
                cfg.analysis.comparison_title = title.clone();
            }
            let report = pipeline::run_cv(&cfg, out)?;
            summarize(&report, out);
        }
        Command::Psych {
            bank,
            responses,
            meta,
        } => {
            set(&mut cfg.files.bank, bank);
            set(&mut cfg.files.responses, responses);
            set(&mut cfg.files.meta, meta);
            let report = pipeline::run_psych(&cfg, out)?;
            summarize(&report, out);
        }
        Command::Simulate { sim, bank, experts } => {
            set(&mut cfg.files.sim_config, sim);
            set(&mut cfg.files.bank, bank);
            set(&mut cfg.files.experts_config, experts);
            pipeline::run_simulate(&cfg, out)?;
            println!("wrote simulated data to {}", out.display());
        }
        Command::Report { from } => {
            if !from.is_empty() {
                cfg.files.reports = from.clone();
            }
            let report = pipeline::run_report(&cfg, out)?;
            summarize(&report, out);
        }
        Command::Prompt {
            version,
            facet,
            spec,
            audit,
        } => {
            let spec = match spec {
                Some(p) => {
                    let text = std::fs::read_to_string(p)
                        .with_context(|| format!("reading {}", p.display()))?;
                    PromptSpec::from_json(&text)?
                }
                None => PromptSpec::default_for(*version, *facet),
            };
            if spec.facet != *facet {
                bail!("spec targets {}, not {facet}", spec.facet);
            }
            let prompt = build_prompt(&spec)?;
            println!("{}", prompt.text);
            if *audit {
                let a = strategy_audit(&prompt, &spec.version.strategies());
                let detected: Vec<String> = a
                    .detected_set()
                    .iter()
                    .map(|s| s.get().to_string())
                    .collect();
                let missing: Vec<String> = a.missing.iter().map(|s| s.get().to_string()).collect();
                eprintln!(
                    "audit: detected [{}], missing [{}], {}",
                    detected.join(", "),
                    missing.join(", "),
                    if a.pass { "pass" } else { "fail" }
                );
            }
        }
    }
    Ok(())
}

fn summarize(report: &pipeline::AnalysisReport, out: &Path) {
    println!(
        "wrote {} table(s) to {}",
        report.tables().len(),
        out.join("report.md").display()
    );
    for w in &report.warnings {
        log::warn!("{w}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("forge: error: {msg}");
            ExitCode::FAILURE
        }
    }
}
