//! Config-driven runs tying generation, parsing, rating analysis, response
//! analysis, simulation and report assembly together.
//!
//! Each run writes into an output directory guarded by a lock file. Files are
//! written atomically and listed with their digests in `manifest.json`; the
//! manifest embeds the effective config so a run can be repeated with
//! `--config <out>/manifest.json`. A failed run removes what it wrote.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::content_validity::{
    aggregate_ratings, compare_groups, compare_two, read_group_map_csv, read_ratings_csv,
    split_by_group, write_group_map_csv, write_ratings_csv, CvError, ItemCvSummary,
};
use crate::item_model::{shuffle_options, Facet, ItemBank, ItemError};
use crate::item_parser::{parse_items_with, render_items, ParserConfig};
use crate::llm_gateway::{
    Clock, Gateway, GatewayError, GenParams, GenerationDiagnostics, HttpTransport, MockTransport,
    MOCK_TIMESTAMP,
};
use crate::prompt_forge::{build_prompt, sha256_hex, PromptSpec, PromptVersion, SpecError};
use crate::psychometrics::{
    aligned_totals, apply_inclusion_filters, build_score_matrix, criterion_correlations,
    criterion_totals, likert_totals, mtmm_matrix, mtmm_summary, read_meta_csv, read_responses_csv,
    reliability_report, write_meta_csv, write_responses_csv, InclusionCriteria, PsychError,
    Session, STAR_LEGEND,
};
use crate::report::{Cell, Table};
use crate::respondent_sim::{
    simulate, simulate_expert_ratings, ConfigError, ExpertSimConfig, SimConfig,
};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const LOCK_FILE: &str = ".forge.lock";
pub const REPORT_JSON: &str = "report.json";
pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{0} is locked by another run (remove {LOCK_FILE} if stale)")]
    Locked(PathBuf),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Item(#[from] ItemError),
    #[error(transparent)]
    Cv(#[from] CvError),
    #[error(transparent)]
    Psych(#[from] PsychError),
    #[error(transparent)]
    Sim(#[from] ConfigError),
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

pub fn read_text(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GatewaySettings {
    #[serde(default)]
    pub params: GenParams,
    /// Mock script; when set no network calls are made.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mock: Option<PathBuf>,
    #[serde(default = "default_in_flight")]
    pub max_in_flight: usize,
}

fn default_in_flight() -> usize {
    4
}

impl Default for GatewaySettings {
    fn default() -> Self {
        GatewaySettings {
            params: GenParams::default(),
            mock: None,
            max_in_flight: default_in_flight(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationSettings {
    #[serde(default = "default_version")]
    pub version: PromptVersion,
    #[serde(default = "default_items_per_facet")]
    pub items_per_facet: usize,
    #[serde(default = "default_facets")]
    pub facets: Vec<Facet>,
    /// Prompt spec files overriding the built-in spec for a facet.
    #[serde(default)]
    pub prompt_specs: BTreeMap<Facet, PathBuf>,
    #[serde(default)]
    pub shuffle_options: bool,
    #[serde(default = "default_bank_id")]
    pub bank_id: String,
}

fn default_version() -> PromptVersion {
    PromptVersion::V2
}
fn default_items_per_facet() -> usize {
    8
}
fn default_facets() -> Vec<Facet> {
    Facet::ALL.to_vec()
}
fn default_bank_id() -> String {
    "generated".into()
}

impl Default for GenerationSettings {
    fn default() -> Self {
        GenerationSettings {
            version: default_version(),
            items_per_facet: default_items_per_facet(),
            facets: default_facets(),
            prompt_specs: BTreeMap::new(),
            shuffle_options: false,
            bank_id: default_bank_id(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FileSettings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bank: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub completion: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratings: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub responses: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim_config: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experts_config: Option<PathBuf>,
    /// Report directories merged by the `report` command.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reports: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    #[serde(default = "default_decimals")]
    pub decimals: usize,
    #[serde(default = "default_true")]
    pub star_legend: bool,
}

fn default_decimals() -> usize {
    2
}
fn default_true() -> bool {
    true
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            decimals: default_decimals(),
            star_legend: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSettings {
    #[serde(default)]
    pub inclusion: InclusionCriteria,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison_title: Option<String>,
    /// Criterion column order; unlisted criteria follow alphabetically.
    #[serde(default = "default_criterion_order")]
    pub criterion_order: Vec<String>,
}

fn default_criterion_order() -> Vec<String> {
    ["SWB", "DE", "GA", "AG", "DT-MA", "DT-PA", "DT-NA"]
        .map(String::from)
        .to_vec()
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        AnalysisSettings {
            inclusion: InclusionCriteria::default(),
            comparison_title: None,
            criterion_order: default_criterion_order(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Base for relative paths in the config.
    #[serde(default)]
    pub workspace: PathBuf,
    #[serde(default)]
    pub gateway: GatewaySettings,
    #[serde(default)]
    pub generation: GenerationSettings,
    #[serde(default)]
    pub files: FileSettings,
    #[serde(default)]
    pub analysis: AnalysisSettings,
    #[serde(default)]
    pub report: ReportOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    /// Loads a config file or the config embedded in a run manifest. In a
    /// config file a relative workspace resolves against the file's
    /// directory; a manifest's config is replayed as recorded.
    pub fn load(path: &Path) -> Result<RunConfig, PipelineError> {
        let text = read_text(path)?;
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| io_err(path, e))?;
        let from_manifest = value.get("manifest_version").is_some();
        let value = match from_manifest {
            true => value.get("config").cloned().unwrap_or_default(),
            false => value,
        };
        let mut cfg: RunConfig = serde_json::from_value(value).map_err(|e| io_err(path, e))?;
        if !from_manifest && cfg.workspace.is_relative() {
            let base = path.parent().unwrap_or(Path::new(""));
            cfg.workspace = base.join(&cfg.workspace);
        }
        Ok(cfg)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() || self.workspace.as_os_str().is_empty() {
            p.to_path_buf()
        } else {
            self.workspace.join(p)
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.report.decimals < 2 {
            return Err(PipelineError::Config("report.decimals must be >= 2".into()));
        }
        if self.generation.items_per_facet == 0 {
            return Err(PipelineError::Config("items_per_facet must be >= 1".into()));
        }
        self.gateway.params.validate()?;
        Ok(())
    }

    pub fn hash(&self) -> String {
        sha256_hex(
            serde_json::to_string(self)
                .expect("config serializes")
                .as_bytes(),
        )
    }

    fn require(&self, p: &Option<PathBuf>, what: &str) -> Result<PathBuf, PipelineError> {
        let p = p
            .as_ref()
            .ok_or_else(|| PipelineError::Config(format!("{what} file not given")))?;
        let full = self.resolve(p);
        if !full.is_file() {
            return Err(io_err(&full, "file not found"));
        }
        Ok(full)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub manifest_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub config_hash: String,
    pub seed: Option<u64>,
    pub config: RunConfig,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

/// Short provenance line carried inside reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStamp {
    pub command: String,
    pub config_hash: String,
    pub seed: Option<u64>,
    pub tool_version: String,
}

struct Lock {
    path: PathBuf,
}

impl Lock {
    fn acquire(dir: &Path) -> Result<Lock, PipelineError> {
        let path = dir.join(LOCK_FILE);
        match fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
        {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(Lock { path })
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                Err(PipelineError::Locked(dir.to_path_buf()))
            }
            Err(e) => Err(io_err(&path, e)),
        }
    }
}

impl Drop for Lock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

/// Writes `bytes` to `path` through a sibling temp file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), PipelineError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
    }
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(path, e)
    })
}

/// Output directory of one run.
pub struct RunOutput {
    dir: PathBuf,
    command: String,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    finished: bool,
    _lock: Lock,
}

impl RunOutput {
    pub fn open(dir: &Path, command: &str) -> Result<RunOutput, PipelineError> {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let lock = Lock::acquire(dir)?;
        Ok(RunOutput {
            dir: dir.to_path_buf(),
            command: command.into(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            finished: false,
            _lock: lock,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Reads an input file and records its digest.
    pub fn input(&mut self, path: &Path) -> Result<String, PipelineError> {
        let text = read_text(path)?;
        let shown = path.to_string_lossy().replace('\\', "/");
        if !self.inputs.iter().any(|d| d.path == shown) {
            self.inputs.push(FileDigest {
                path: shown,
                sha256: sha256_hex(text.as_bytes()),
            });
        }
        Ok(text)
    }

    pub fn write(&mut self, rel: &str, bytes: impl AsRef<[u8]>) -> Result<(), PipelineError> {
        let bytes = bytes.as_ref();
        write_atomic(&self.dir.join(rel), bytes)?;
        self.outputs.retain(|d| d.path != rel);
        self.outputs.push(FileDigest {
            path: rel.into(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    /// Writes a diagnostic file that survives a failed run.
    pub fn write_incomplete(
        &self,
        rel: &str,
        bytes: impl AsRef<[u8]>,
    ) -> Result<(), PipelineError> {
        write_atomic(&self.dir.join(rel), bytes.as_ref())
    }

    pub fn stamp(&self, cfg: &RunConfig) -> RunStamp {
        RunStamp {
            command: self.command.clone(),
            config_hash: cfg.hash(),
            seed: cfg.seed,
            tool_version: env!("CARGO_PKG_VERSION").into(),
        }
    }

    pub fn finish(mut self, cfg: &RunConfig) -> Result<Manifest, PipelineError> {
        let manifest = Manifest {
            manifest_version: MANIFEST_VERSION,
            tool: "sjt-forge".into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: self.command.clone(),
            config_hash: cfg.hash(),
            seed: cfg.seed,
            config: cfg.clone(),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        write_atomic(&self.dir.join(MANIFEST_FILE), text.as_bytes())?;
        self.finished = true;
        Ok(manifest)
    }
}

impl Drop for RunOutput {
    fn drop(&mut self) {
        if !self.finished {
            for d in &self.outputs {
                let _ = fs::remove_file(self.dir.join(&d.path));
            }
        }
    }
}

/// Typed tables of an analysis run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    #[serde(default)]
    pub group_comparison: Vec<Table>,
    #[serde(default)]
    pub posthoc: Vec<Table>,
    #[serde(default)]
    pub stability: Vec<Table>,
    #[serde(default)]
    pub exclusions: Option<Table>,
    #[serde(default)]
    pub reliability: Option<Table>,
    #[serde(default)]
    pub item_total: Option<Table>,
    #[serde(default)]
    pub mtmm: Option<Table>,
    #[serde(default)]
    pub mtmm_summary: Option<Table>,
    #[serde(default)]
    pub criterion: Option<Table>,
    #[serde(default)]
    pub boxplots: Vec<Table>,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default)]
    pub runs: Vec<RunStamp>,
}

fn merge_opt(a: &mut Option<Table>, b: Option<Table>) {
    if b.is_some() {
        *a = b;
    }
}

impl AnalysisReport {
    pub fn merge(&mut self, other: AnalysisReport) {
        self.group_comparison.extend(other.group_comparison);
        self.posthoc.extend(other.posthoc);
        self.stability.extend(other.stability);
        merge_opt(&mut self.exclusions, other.exclusions);
        merge_opt(&mut self.reliability, other.reliability);
        merge_opt(&mut self.item_total, other.item_total);
        merge_opt(&mut self.mtmm, other.mtmm);
        merge_opt(&mut self.mtmm_summary, other.mtmm_summary);
        merge_opt(&mut self.criterion, other.criterion);
        self.boxplots.extend(other.boxplots);
        self.warnings.extend(other.warnings);
        self.runs.extend(other.runs);
    }

    /// Tables in display order with a file-name slug each.
    pub fn tables(&self) -> Vec<(String, &Table)> {
        fn push_all<'a>(prefix: &str, ts: &'a [Table], out: &mut Vec<(String, &'a Table)>) {
            for (i, t) in ts.iter().enumerate() {
                out.push((format!("{prefix}_{}", i + 1), t));
            }
        }
        let mut out: Vec<(String, &Table)> = Vec::new();
        push_all("comparison", &self.group_comparison, &mut out);
        push_all("posthoc", &self.posthoc, &mut out);
        push_all("stability", &self.stability, &mut out);
        for (name, t) in [
            ("exclusions", &self.exclusions),
            ("reliability", &self.reliability),
            ("item_total", &self.item_total),
            ("mtmm", &self.mtmm),
            ("mtmm_summary", &self.mtmm_summary),
            ("criterion", &self.criterion),
        ] {
            if let Some(t) = t {
                out.push((name.into(), t));
            }
        }
        push_all("boxplot", &self.boxplots, &mut out);
        out
    }

    pub fn to_markdown(&self, opts: &ReportOptions) -> String {
        let mut out = String::from("# Analysis report\n\n");
        for (_, t) in self.tables() {
            out.push_str(&legend_filtered(t, opts).to_markdown_with(opts.decimals));
            out.push('\n');
        }
        if !self.warnings.is_empty() {
            out.push_str("## Warnings\n\n");
            for w in &self.warnings {
                out.push_str(&format!("- {w}\n"));
            }
            out.push('\n');
        }
        if !self.runs.is_empty() {
            out.push_str("## Runs\n\n");
            for r in &self.runs {
                let seed = r
                    .seed
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| "none".into());
                out.push_str(&format!(
                    "- {} (config {}, seed {seed}, version {})\n",
                    r.command,
                    &r.config_hash[..12.min(r.config_hash.len())],
                    r.tool_version
                ));
            }
        }
        out
    }

    /// Long format: `table,row,column,value`.
    pub fn to_long_csv(&self, opts: &ReportOptions) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["table", "row", "column", "value"])
            .expect("csv write to memory");
        for (slug, t) in self.tables() {
            for row in t.rows.iter().filter(|r| !r.section) {
                for (col, cell) in t.columns.iter().zip(&row.cells) {
                    if *cell == Cell::Empty {
                        continue;
                    }
                    w.write_record([
                        slug.as_str(),
                        row.label.as_str(),
                        col.as_str(),
                        cell.render_with(opts.decimals).as_str(),
                    ])
                    .expect("csv write to memory");
                }
            }
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf-8")
    }

    fn write_all(&self, out: &mut RunOutput, opts: &ReportOptions) -> Result<(), PipelineError> {
        let json = serde_json::to_string_pretty(self).expect("report serializes") + "\n";
        out.write(REPORT_JSON, json)?;
        out.write("report.md", self.to_markdown(opts))?;
        out.write("report.csv", self.to_long_csv(opts))?;
        for (slug, t) in self.tables() {
            out.write(
                &format!("tables/{slug}.csv"),
                legend_filtered(t, opts).to_csv_with(opts.decimals),
            )?;
        }
        Ok(())
    }
}

fn legend_filtered(t: &Table, opts: &ReportOptions) -> Table {
    let mut t = t.clone();
    if !opts.star_legend {
        t.notes.retain(|n| n != STAR_LEGEND);
    }
    t
}

fn load_bank(out: &mut RunOutput, path: &Path) -> Result<ItemBank, PipelineError> {
    Ok(ItemBank::from_json(&out.input(path)?)?)
}

#[derive(Debug, Clone)]
pub struct GenerateOutcome {
    pub bank: ItemBank,
    pub diagnostics: Vec<(Facet, GenerationDiagnostics)>,
    pub manifest: Manifest,
}

fn prompt_spec_for(
    cfg: &RunConfig,
    out: &mut RunOutput,
    facet: Facet,
) -> Result<PromptSpec, PipelineError> {
    let spec = match cfg.generation.prompt_specs.get(&facet) {
        Some(p) => PromptSpec::from_json(&out.input(&cfg.resolve(p))?)?,
        None => PromptSpec::default_for(cfg.generation.version, facet),
    };
    if spec.facet != facet {
        return Err(PipelineError::Config(format!(
            "prompt spec for {facet} targets {}",
            spec.facet
        )));
    }
    spec.validate()?;
    Ok(spec)
}

/// Prompts → gateway → parser → `bank.json`.
pub fn run_generate(cfg: &RunConfig, out_dir: &Path) -> Result<GenerateOutcome, PipelineError> {
    cfg.validate()?;
    let mut out = RunOutput::open(out_dir, "generate")?;
    let gateway = match &cfg.gateway.mock {
        Some(m) => {
            let path = cfg.resolve(m);
            out.input(&path)?;
            Gateway::new(
                Box::new(MockTransport::load(&path)?),
                Clock::Fixed(MOCK_TIMESTAMP.into()),
            )
        }
        None => Gateway::new(
            Box::new(HttpTransport::from_env(&cfg.gateway.params)?),
            Clock::System,
        ),
    };
    let mut jobs = Vec::new();
    for facet in &cfg.generation.facets {
        jobs.push((
            prompt_spec_for(cfg, &mut out, *facet)?,
            cfg.generation.items_per_facet,
        ));
    }
    let mut prompts = String::new();
    for (spec, _) in &jobs {
        let p = build_prompt(spec)?;
        prompts.push_str(&format!(
            "## {} ({}, {})\n\n{}\n\n",
            spec.facet.id(),
            spec.version,
            p.hash(),
            p.text
        ));
    }
    let results = gateway.generate_batch(&jobs, &cfg.gateway.params, cfg.gateway.max_in_flight);
    let mut items = Vec::new();
    let mut diagnostics = Vec::new();
    for ((spec, _), r) in jobs.iter().zip(results) {
        match r {
            Ok((it, d)) => {
                items.extend(it);
                diagnostics.push((spec.facet, d));
            }
            Err(GatewayError::PartialGeneration {
                want,
                items: got,
                diagnostics: d,
            }) => {
                let json = serde_json::to_string_pretty(&(spec.facet, &*d)).expect("serializes");
                out.write_incomplete("generation.incomplete.json", json + "\n")?;
                return Err(PipelineError::Gateway(GatewayError::PartialGeneration {
                    want,
                    items: got,
                    diagnostics: d,
                }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    if cfg.generation.shuffle_options {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(0));
        items = items.iter().map(|i| shuffle_options(i, &mut rng)).collect();
    }
    let bank = ItemBank::from_items(cfg.generation.bank_id.clone(), items)?;
    out.write("bank.json", bank.to_json())?;
    let mut md = String::new();
    for facet in bank.facets() {
        let its: Vec<_> = bank.facet_items(facet).cloned().collect();
        md.push_str(&format!("## {}\n\n{}\n", facet.label(), render_items(&its)));
    }
    out.write("items.md", md)?;
    out.write("prompts.md", prompts)?;
    let diag_json = serde_json::to_string_pretty(&diagnostics).expect("serializes") + "\n";
    out.write("generation_diagnostics.json", diag_json)?;
    let manifest = out.finish(cfg)?;
    Ok(GenerateOutcome {
        bank,
        diagnostics,
        manifest,
    })
}

/// Completion text → `bank.json` plus `issues.json`.
pub fn run_parse(
    cfg: &RunConfig,
    facet: Facet,
    out_dir: &Path,
) -> Result<(ItemBank, crate::item_parser::ParseOutput), PipelineError> {
    cfg.validate()?;
    let input = cfg.require(&cfg.files.completion, "completion")?;
    let mut out = RunOutput::open(out_dir, "parse")?;
    let raw = out.input(&input)?;
    let parsed = parse_items_with(&raw, facet, &ParserConfig::default());
    let bank = ItemBank::from_items(cfg.generation.bank_id.clone(), parsed.items.clone())?;
    out.write("bank.json", bank.to_json())?;
    let issues = serde_json::json!({
        "block_count": parsed.block_count,
        "accepted": parsed.items.len(),
        "issues": parsed.issues,
        "trailing": parsed.trailing,
    });
    out.write(
        "issues.json",
        serde_json::to_string_pretty(&issues).expect("serializes") + "\n",
    )?;
    out.finish(cfg)?;
    Ok((bank, parsed))
}

fn summaries_csv(summaries: &[ItemCvSummary]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for s in summaries {
        w.serialize(s).expect("csv write to memory");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf-8")
}

/// Ratings + group map → comparison tables. Two groups give the two-sample
/// stability layout; more give the omnibus layout with post hoc tables.
pub fn run_cv(cfg: &RunConfig, out_dir: &Path) -> Result<AnalysisReport, PipelineError> {
    cfg.validate()?;
    let ratings_path = cfg.require(&cfg.files.ratings, "ratings")?;
    let groups_path = cfg.require(&cfg.files.groups, "groups")?;
    let mut out = RunOutput::open(out_dir, "cv")?;
    let ratings = read_ratings_csv(out.input(&ratings_path)?.as_bytes())?;
    let groups = read_group_map_csv(out.input(&groups_path)?.as_bytes())?;
    let agg = aggregate_ratings(&ratings, &groups)?;
    let mut report = AnalysisReport {
        warnings: agg.warnings.clone(),
        ..Default::default()
    };
    let labels = groups.groups();
    if labels.len() == 2 {
        let by = split_by_group(&agg.summaries);
        let s = compare_two(&by[&labels[0]], &by[&labels[1]])?;
        let title = cfg
            .analysis
            .comparison_title
            .clone()
            .unwrap_or_else(|| format!("Mann-Whitney U test: {} vs {}", labels[0], labels[1]));
        report.stability.push(s.table(&title));
        report.boxplots.push(s.boxplot_table());
    } else {
        let s = compare_groups(&agg.summaries)?;
        let title = cfg.analysis.comparison_title.clone().unwrap_or_else(|| {
            format!("Mean ranks and Kruskal-Wallis test: {}", labels.join(", "))
        });
        report.group_comparison.push(s.table(&title));
        report.posthoc.extend(s.posthoc_tables());
        report.boxplots.push(s.boxplot_table());
    }
    report.runs.push(out.stamp(cfg));
    out.write("item_summaries.csv", summaries_csv(&agg.summaries))?;
    report.write_all(&mut out, &cfg.report)?;
    out.finish(cfg)?;
    Ok(report)
}

fn exclusions_table(outcome: &crate::psychometrics::FilterOutcome) -> Table {
    let mut t = Table::new("Inclusion screening", vec!["participants".into()]);
    t.row("Retained", vec![Cell::Int(outcome.retained.len() as i64)]);
    for reason in ["AGE", "ATTENTION", "RT"] {
        let n = outcome
            .excluded
            .iter()
            .filter(|(_, rs)| rs.iter().any(|r| r.code() == reason))
            .count();
        t.row(format!("Excluded: {reason}"), vec![Cell::Int(n as i64)]);
    }
    t
}

/// Bank + responses + meta → screening, reliability, MTMM and criterion tables.
pub fn run_psych(cfg: &RunConfig, out_dir: &Path) -> Result<AnalysisReport, PipelineError> {
    cfg.validate()?;
    let bank_path = cfg.require(&cfg.files.bank, "bank")?;
    let responses_path = cfg.require(&cfg.files.responses, "responses")?;
    let meta_path = cfg.require(&cfg.files.meta, "meta")?;
    let mut out = RunOutput::open(out_dir, "psych")?;
    let bank = load_bank(&mut out, &bank_path)?;
    let records = read_responses_csv(out.input(&responses_path)?.as_bytes())?;
    let meta = read_meta_csv(out.input(&meta_path)?.as_bytes())?;
    let report = analyze_responses(&bank, &records, &meta, &cfg.analysis, Some(out.stamp(cfg)))?;
    report.write_all(&mut out, &cfg.report)?;
    out.finish(cfg)?;
    Ok(report)
}

/// The response analysis behind `run_psych`, without file handling.
pub fn analyze_responses(
    bank: &ItemBank,
    records: &[crate::psychometrics::ResponseRecord],
    meta: &[crate::psychometrics::ParticipantMeta],
    settings: &AnalysisSettings,
    stamp: Option<RunStamp>,
) -> Result<AnalysisReport, PipelineError> {
    let screening = apply_inclusion_filters(records, meta, &settings.inclusion)?;
    let keep: HashSet<&str> = screening.retained.iter().map(String::as_str).collect();
    let kept: Vec<_> = records
        .iter()
        .filter(|r| keep.contains(r.participant_id.as_str()))
        .cloned()
        .collect();
    let test = build_score_matrix(&kept, bank, Session::Test)?;
    let retest = build_score_matrix(&kept, bank, Session::Retest)?;
    let has_retest = retest.matrices.values().any(|m| m.n_persons() > 0);
    let mut report = AnalysisReport {
        exclusions: Some(exclusions_table(&screening)),
        ..Default::default()
    };
    report.warnings.extend(test.warnings.iter().cloned());
    if has_retest {
        report.warnings.extend(retest.warnings.iter().cloned());
    }
    let rel = reliability_report(&test.matrices, has_retest.then_some(&retest.matrices));
    report.warnings.extend(rel.warnings.iter().cloned());
    report.reliability = Some(rel.table("Reliability"));
    report.item_total = Some(rel.item_total_table());

    let (persons, sjt) = aligned_totals(&test.matrices);
    let by_id: BTreeMap<&str, &crate::psychometrics::ParticipantMeta> = meta
        .iter()
        .map(|m| (m.participant_id.as_str(), m))
        .collect();
    let likert_counts: BTreeMap<Facet, usize> = Facet::ALL
        .iter()
        .map(|f| {
            let n = meta
                .iter()
                .filter_map(|m| likert_totals(m).get(f).map(|t| t.1))
                .max()
                .unwrap_or(0);
            (*f, n)
        })
        .collect();
    let criterion_counts: BTreeMap<String, usize> = {
        let mut c: BTreeMap<String, usize> = BTreeMap::new();
        for m in meta {
            for (name, (_, n)) in criterion_totals(m) {
                let e = c.entry(name).or_insert(0);
                *e = (*e).max(n);
            }
        }
        c
    };

    // Persons with complete SJT and Likert scores.
    let mut idx = Vec::new();
    let mut likert: BTreeMap<Facet, Vec<f64>> = BTreeMap::new();
    for (i, p) in persons.iter().enumerate() {
        let Some(m) = by_id.get(p.as_str()) else {
            continue;
        };
        let lt = likert_totals(m);
        let complete = Facet::ALL
            .iter()
            .all(|f| likert_counts[f] > 0 && lt.get(f).is_some_and(|t| t.1 == likert_counts[f]));
        if complete && sjt.len() == 5 {
            idx.push(i);
            for f in Facet::ALL {
                likert.entry(f).or_default().push(lt[&f].0);
            }
        }
    }
    let sjt_sub: BTreeMap<Facet, Vec<f64>> = sjt
        .iter()
        .map(|(f, v)| (*f, idx.iter().map(|&i| v[i]).collect()))
        .collect();
    if idx.len() >= 3 {
        match mtmm_matrix(&sjt_sub, &likert) {
            Ok(t) => {
                report.mtmm = Some(t.to_table("Multitrait-multimethod correlations"));
                report.mtmm_summary = Some(mtmm_summary(&t).table(["SJT", "Likert"]));
            }
            Err(e) => report.warnings.push(format!("MTMM table skipped: {e}")),
        }
    } else {
        report
            .warnings
            .push("MTMM table skipped: fewer than 3 participants with complete scores".into());
    }

    if !criterion_counts.is_empty() && !idx.is_empty() {
        let mut rows: Vec<(String, Vec<f64>)> = Vec::new();
        for f in Facet::ALL {
            rows.push((format!("SJT {}", f.name()), Vec::new()));
        }
        for f in Facet::ALL {
            rows.push((format!("Likert {}", f.name()), Vec::new()));
        }
        let mut names: Vec<&String> = criterion_counts.keys().collect();
        let rank = |n: &String| {
            settings
                .criterion_order
                .iter()
                .position(|o| o == n)
                .unwrap_or(usize::MAX)
        };
        names.sort_by_key(|n| rank(n));
        let mut cols: Vec<(String, Vec<f64>)> =
            names.into_iter().map(|k| (k.clone(), Vec::new())).collect();
        for (pos, &i) in idx.iter().enumerate() {
            let m = by_id[persons[i].as_str()];
            let ct = criterion_totals(m);
            let complete = criterion_counts
                .iter()
                .all(|(k, n)| ct.get(k).is_some_and(|t| t.1 == *n));
            if !complete {
                continue;
            }
            for (j, f) in Facet::ALL.iter().enumerate() {
                rows[j].1.push(sjt_sub[f][pos]);
                rows[5 + j].1.push(likert[f][pos]);
            }
            for (name, v) in cols.iter_mut() {
                v.push(ct[name.as_str()].0);
            }
        }
        if rows[0].1.len() >= 3 {
            match criterion_correlations(&rows, &cols) {
                Ok(t) => report.criterion = Some(t.to_table("Criterion correlations")),
                Err(e) => report
                    .warnings
                    .push(format!("criterion table skipped: {e}")),
            }
        } else {
            report
                .warnings
                .push("criterion table skipped: fewer than 3 complete criterion responders".into());
        }
    }
    report.runs.extend(stamp);
    Ok(report)
}

fn latent_csv(sim: &crate::respondent_sim::SimOutput) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["participant_id".to_string()];
    header.extend(Facet::ALL.iter().map(|f| f.id().to_string()));
    header.extend(Facet::ALL.iter().map(|f| format!("retest.{}", f.id())));
    w.write_record(&header).expect("csv write to memory");
    for (i, (t, r)) in sim.latent.iter().zip(&sim.retest_latent).enumerate() {
        let mut rec = vec![crate::respondent_sim::participant_id(i)];
        rec.extend(t.iter().map(|v| format!("{v:.6}")));
        rec.extend((0..5).map(|j| r.map(|r| format!("{:.6}", r[j])).unwrap_or_default()));
        w.write_record(&rec).expect("csv write to memory");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf-8")
}

/// Simulator configs → response, meta and latent CSVs and/or expert ratings.
/// A seed in the run config overrides the seeds in the simulator configs.
pub fn run_simulate(cfg: &RunConfig, out_dir: &Path) -> Result<(), PipelineError> {
    cfg.validate()?;
    if cfg.files.sim_config.is_none() && cfg.files.experts_config.is_none() {
        return Err(PipelineError::Config(
            "simulate needs a respondent or expert simulator config".into(),
        ));
    }
    let sim_path = match &cfg.files.sim_config {
        Some(_) => Some(cfg.require(&cfg.files.sim_config, "simulator config")?),
        None => None,
    };
    let bank_path = match sim_path {
        Some(_) => Some(cfg.require(&cfg.files.bank, "bank")?),
        None => None,
    };
    let experts_path = match &cfg.files.experts_config {
        Some(_) => Some(cfg.require(&cfg.files.experts_config, "expert simulator config")?),
        None => None,
    };
    let mut out = RunOutput::open(out_dir, "simulate")?;
    if let (Some(sp), Some(bp)) = (sim_path, bank_path) {
        let mut sc = SimConfig::from_json(&out.input(&sp)?)?;
        if let Some(s) = cfg.seed {
            sc.seed = s;
        }
        let bank = load_bank(&mut out, &bp)?;
        let sim = simulate(&sc, &bank)?;
        let mut buf = Vec::new();
        write_responses_csv(&mut buf, &sim.records)?;
        out.write("responses.csv", buf)?;
        let mut buf = Vec::new();
        write_meta_csv(&mut buf, &sim.meta)?;
        out.write("meta.csv", buf)?;
        out.write("latent.csv", latent_csv(&sim))?;
    }
    if let Some(ep) = experts_path {
        let mut ec: ExpertSimConfig =
            serde_json::from_str(&out.input(&ep)?).map_err(|e| io_err(&ep, e))?;
        if let Some(s) = cfg.seed {
            ec.seed = s;
        }
        let (ratings, groups) = simulate_expert_ratings(&ec)?;
        let mut buf = Vec::new();
        write_ratings_csv(&mut buf, &ratings)?;
        out.write("ratings.csv", buf)?;
        let mut buf = Vec::new();
        write_group_map_csv(&mut buf, &groups)?;
        out.write("groups.csv", buf)?;
    }
    out.finish(cfg)?;
    Ok(())
}

/// Merges `report.json` files from earlier runs into one report.
pub fn run_report(cfg: &RunConfig, out_dir: &Path) -> Result<AnalysisReport, PipelineError> {
    cfg.validate()?;
    if cfg.files.reports.is_empty() {
        return Err(PipelineError::Config(
            "report needs at least one input directory".into(),
        ));
    }
    let mut out = RunOutput::open(out_dir, "report")?;
    let mut merged = AnalysisReport::default();
    for dir in &cfg.files.reports {
        let dir = cfg.resolve(dir);
        let path = if dir.is_dir() {
            dir.join(REPORT_JSON)
        } else {
            dir
        };
        let part: AnalysisReport =
            serde_json::from_str(&out.input(&path)?).map_err(|e| io_err(&path, e))?;
        merged.merge(part);
    }
    merged.runs.push(out.stamp(cfg));
    merged.write_all(&mut out, &cfg.report)?;
    out.finish(cfg)?;
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_and_lock() {
        let dir = tempfile::tempdir().unwrap();
        let out = RunOutput::open(dir.path(), "x").unwrap();
        assert!(matches!(
            RunOutput::open(dir.path(), "y"),
            Err(PipelineError::Locked(_))
        ));
        drop(out);
        let mut out = RunOutput::open(dir.path(), "y").unwrap();
        out.write("a/b.txt", "hello").unwrap();
        assert_eq!(
            fs::read_to_string(dir.path().join("a/b.txt")).unwrap(),
            "hello"
        );
        let names: Vec<_> = fs::read_dir(dir.path().join("a"))
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        assert_eq!(names.len(), 1);
        let m = out.finish(&RunConfig::default()).unwrap();
        assert_eq!(m.outputs[0].sha256, sha256_hex(b"hello"));
        assert!(!dir.path().join(LOCK_FILE).exists());
    }

    #[test]
    fn failed_run_removes_outputs() {
        let dir = tempfile::tempdir().unwrap();
        {
            let mut out = RunOutput::open(dir.path(), "x").unwrap();
            out.write("partial.txt", "x").unwrap();
            out.write_incomplete("kept.incomplete.json", "{}").unwrap();
        }
        assert!(!dir.path().join("partial.txt").exists());
        assert!(dir.path().join("kept.incomplete.json").exists());
        assert!(!dir.path().join(MANIFEST_FILE).exists());
    }

    #[test]
    fn config_validation_and_manifest_reload() {
        let mut cfg = RunConfig::default();
        cfg.report.decimals = 1;
        assert!(matches!(cfg.validate(), Err(PipelineError::Config(_))));
        cfg.report.decimals = 3;
        cfg.seed = Some(9);
        let dir = tempfile::tempdir().unwrap();
        let out = RunOutput::open(dir.path(), "x").unwrap();
        out.finish(&cfg).unwrap();
        let back = RunConfig::load(&dir.path().join(MANIFEST_FILE)).unwrap();
        assert_eq!(back.seed, Some(9));
        assert_eq!(back.report.decimals, 3);
        assert_eq!(back.workspace, PathBuf::new());
    }

    #[test]
    fn missing_inputs_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::default();
        assert!(matches!(
            run_cv(&cfg, dir.path()),
            Err(PipelineError::Config(_))
        ));
        cfg.files.ratings = Some("nope.csv".into());
        cfg.files.groups = Some("nope.csv".into());
        assert!(matches!(
            run_cv(&cfg, dir.path()),
            Err(PipelineError::Io { .. })
        ));
    }
}
