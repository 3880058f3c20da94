//! The `esds` command line: synthesize, resample, run the experiment grid,
//! label and calibrate. Every random choice flows from `--seed`.

pub mod config;
mod output;

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use esds_core::anthropometry::{
    fit_linear, haz_status, load_calibration_pairs, synth_cohort, weight_model, GrowthReference, Proportions,
};
use esds_core::data::{class_distribution, load_dataset, load_unlabeled, write_dataset, LoadOptions};
use esds_core::ensemble::{ClassifierKind, ClassifierSpec};
use esds_core::pipeline::{run_pipeline, PipelineConfig};
use esds_core::resampling::{
    resample, DifferenceMode, EnnScope, ResampleMethod, ResamplerConfig, SmallDisjunctPolicy, Targets,
};
use esds_core::{ClassLabel, Dataset, SeededRng};

use config::RunFile;
use output::Staged;

#[derive(Debug, Parser)]
#[command(name = "esds", version, about = "Imbalanced child-growth screening toolkit")]
pub struct Cli {
    /// Seed for every random choice in the run.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (created if missing).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Plain-text `key = value` file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Suppress progress messages.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a labeled synthetic cohort.
    Synth(SynthArgs),
    /// Rebalance a labeled CSV.
    Resample(ResampleArgs),
    /// Split, resample, train and evaluate the method x classifier grid.
    Pipeline(PipelineArgs),
    /// Add a status column from height-for-age z-scores.
    Label(LabelArgs),
    /// Fit a linear transfer function to reference/measured pairs.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Number of rows.
    #[arg(long)]
    pub n: Option<usize>,
    /// Normal,Stunted,Stunting shares summing to 1.
    #[arg(long)]
    pub proportions: Option<String>,
    /// Growth reference CSV; the bundled table is used otherwise.
    #[arg(long)]
    pub reference: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct ResamplerFlags {
    #[arg(long)]
    pub k_neighbors: Option<usize>,
    #[arg(long)]
    pub edit_k: Option<usize>,
    /// `match-majority` or Normal,Stunted,Stunting counts (`-` leaves a class alone).
    #[arg(long)]
    pub targets: Option<String>,
    /// `all` or `minority`.
    #[arg(long)]
    pub enn_scope: Option<String>,
    /// `preserve` or `discard`.
    #[arg(long)]
    pub small_disjuncts: Option<String>,
    /// `signed` or `literal-abs`.
    #[arg(long)]
    pub difference: Option<String>,
}

const RESAMPLER_KEYS: &[&str] = &[
    "k-neighbors",
    "edit-k",
    "targets",
    "enn-scope",
    "small-disjuncts",
    "difference",
];

#[derive(Debug, Args)]
pub struct ResampleArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub method: Option<String>,
    #[command(flatten)]
    pub resampler: ResamplerFlags,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Comma-separated resampling methods.
    #[arg(long)]
    pub methods: Option<String>,
    /// Comma-separated classifiers.
    #[arg(long)]
    pub classifiers: Option<String>,
    /// Share of each class held out for testing.
    #[arg(long)]
    pub test_fraction: Option<f64>,
    /// Trees in forest and bagging.
    #[arg(long)]
    pub trees: Option<usize>,
    /// Boosting rounds.
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Add a hard-voting committee row (needs two or more classifiers).
    #[arg(long)]
    pub voting: Option<bool>,
    #[command(flatten)]
    pub resampler: ResamplerFlags,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub reference: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// CSV with `reference` and `measured` columns.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

/// Global settings after merging flags and the run file.
struct Ctx {
    file: RunFile,
    seed: u64,
    out: PathBuf,
    quiet: bool,
}

impl Ctx {
    fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn input(&self, flag: Option<PathBuf>) -> Result<PathBuf> {
        self.file
            .pick(flag, "input")?
            .ok_or_else(|| anyhow!("--input is required"))
    }
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let file = match &cli.config {
        Some(p) => RunFile::load(p)?,
        None => RunFile::default(),
    };
    let (name, keys): (&str, Vec<&str>) = match &cli.command {
        Command::Synth(_) => ("synth", vec!["n", "proportions", "reference"]),
        Command::Resample(_) => ("resample", [&["input", "method"][..], RESAMPLER_KEYS].concat()),
        Command::Pipeline(_) => (
            "pipeline",
            [
                &[
                    "input",
                    "methods",
                    "classifiers",
                    "test-fraction",
                    "trees",
                    "rounds",
                    "voting",
                ][..],
                RESAMPLER_KEYS,
            ]
            .concat(),
        ),
        Command::Label(_) => ("label", vec!["input", "reference"]),
        Command::Calibrate(_) => ("calibrate", vec!["input"]),
    };
    file.check_keys(name, &keys)?;
    let ctx = Ctx {
        seed: file.pick(cli.seed, "seed")?.unwrap_or(0),
        out: file.pick(cli.out.clone(), "out")?.unwrap_or_else(|| PathBuf::from(".")),
        quiet: cli.quiet || file.pick::<bool>(None, "quiet")?.unwrap_or(false),
        file,
    };
    match cli.command {
        Command::Synth(a) => cmd_synth(&ctx, a),
        Command::Resample(a) => cmd_resample(&ctx, a),
        Command::Pipeline(a) => cmd_pipeline(&ctx, a, stdout),
        Command::Label(a) => cmd_label(&ctx, a),
        Command::Calibrate(a) => cmd_calibrate(&ctx, a, stdout),
    }
}

/// Parses `args` (program name first) and runs them, writing command output
/// to `stdout`.
pub fn run_args<I, T>(args: I, stdout: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    run(cli, stdout)
}

fn reference(path: Option<PathBuf>) -> Result<(GrowthReference, String)> {
    match path {
        Some(p) => Ok((
            GrowthReference::load(&p).with_context(|| format!("loading reference {}", p.display()))?,
            p.display().to_string(),
        )),
        None => Ok((
            GrowthReference::bundled(),
            "bundled (non-clinical approximation)".into(),
        )),
    }
}

fn parse_triple(s: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        bail!("expected three comma-separated values (Normal,Stunted,Stunting), got `{s}`");
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|_| anyhow!("`{p}` is not a number"))?;
    }
    Ok(out)
}

fn format_counts(counts: [usize; 3]) -> String {
    ClassLabel::TABLE_ORDER
        .iter()
        .map(|c| format!("{c}:{}", counts[c.index()]))
        .collect::<Vec<_>>()
        .join(",")
}

fn csv_bytes(ds: &Dataset) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    write_dataset(ds, &mut buf)?;
    Ok(buf)
}

fn cmd_synth(ctx: &Ctx, a: SynthArgs) -> Result<()> {
    let n: usize = ctx.file.pick(a.n, "n")?.ok_or_else(|| anyhow!("--n is required"))?;
    if n == 0 {
        bail!("--n must be at least 1");
    }
    let props_raw: String = ctx
        .file
        .pick(a.proportions, "proportions")?
        .unwrap_or_else(|| "0.86,0.12,0.02".into());
    let props = Proportions::from_table_order(parse_triple(&props_raw)?);
    props.validate()?;
    let (reference, ref_name) = reference(ctx.file.pick(a.reference, "reference")?)?;
    let ds = synth_cohort(n, props, &reference, &mut SeededRng::new(ctx.seed))?;

    let p = props.table_order();
    let provenance = format!(
        "format=1\ntool=esds {}\ncommand=synth\nseed={}\nn={}\nproportions=Normal:{},Stunted:{},Stunting:{}\ncounts={}\nreference={}\nweight_model={}\n",
        env!("CARGO_PKG_VERSION"),
        ctx.seed,
        n,
        p[0],
        p[1],
        p[2],
        format_counts(ds.class_counts()),
        ref_name,
        weight_model::VERSION,
    );
    let mut staged = Staged::new(&ctx.out)?;
    staged.add("cohort.csv", &csv_bytes(&ds)?)?;
    staged.add("cohort.provenance", provenance.as_bytes())?;
    for path in staged.commit()? {
        ctx.note(format!("wrote {}", path.display()));
    }
    Ok(())
}

fn resampler_config(ctx: &Ctx, f: ResamplerFlags) -> Result<ResamplerConfig> {
    let mut cfg = ResamplerConfig::with_seed(ctx.seed);
    if let Some(k) = ctx.file.pick(f.k_neighbors, "k-neighbors")? {
        cfg.k_neighbors = k;
    }
    if let Some(k) = ctx.file.pick(f.edit_k, "edit-k")? {
        cfg.edit_k = k;
    }
    if let Some(t) = ctx.file.pick(f.targets, "targets")? {
        cfg.targets = if t == "match-majority" {
            Targets::MatchMajority
        } else {
            let parts: Vec<&str> = t.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                bail!("--targets takes `match-majority` or three counts Normal,Stunted,Stunting");
            }
            let mut counts = [None; 3];
            for (class, p) in ClassLabel::TABLE_ORDER.iter().zip(parts) {
                counts[class.index()] = match p {
                    "-" => None,
                    v => Some(v.parse().map_err(|_| anyhow!("bad target count `{v}`"))?),
                };
            }
            Targets::Counts(counts)
        };
    }
    if let Some(s) = ctx.file.pick(f.enn_scope, "enn-scope")? {
        cfg.enn_scope = match s.as_str() {
            "all" => EnnScope::AllClasses,
            "minority" => EnnScope::MinorityOnly,
            o => bail!("unknown enn scope `{o}` (valid: all, minority)"),
        };
    }
    if let Some(s) = ctx.file.pick(f.small_disjuncts, "small-disjuncts")? {
        cfg.small_disjunct_policy = match s.as_str() {
            "preserve" => SmallDisjunctPolicy::Preserve,
            "discard" => SmallDisjunctPolicy::Discard,
            o => bail!("unknown small-disjunct policy `{o}` (valid: preserve, discard)"),
        };
    }
    if let Some(s) = ctx.file.pick(f.difference, "difference")? {
        cfg.difference = match s.as_str() {
            "signed" => DifferenceMode::Signed,
            "literal-abs" => DifferenceMode::LiteralAbs,
            o => bail!("unknown difference mode `{o}` (valid: signed, literal-abs)"),
        };
    }
    Ok(cfg)
}

fn load(path: &Path) -> Result<Dataset> {
    load_dataset(path, &LoadOptions::default()).with_context(|| format!("loading {}", path.display()))
}

fn cmd_resample(ctx: &Ctx, a: ResampleArgs) -> Result<()> {
    let method: ResampleMethod = ctx
        .file
        .pick::<String>(a.method, "method")?
        .ok_or_else(|| anyhow!("--method is required (valid: {})", ResampleMethod::valid_ids()))?
        .parse()?;
    let input = ctx.input(a.input)?;
    let cfg = resampler_config(ctx, a.resampler)?;
    let ds = load(&input)?;
    let out = resample(&ds, method, &cfg)?;
    let mut staged = Staged::new(&ctx.out)?;
    staged.add("resampled.csv", &csv_bytes(&out.dataset)?)?;
    staged.add("resampled.report", out.report.to_string().as_bytes())?;
    staged.commit()?;
    let dist = class_distribution(&out.dataset);
    ctx.note(format!(
        "{}: {} -> {} ({}); {}",
        method.display_name(),
        format_counts(ds.class_counts()),
        format_counts(out.dataset.class_counts()),
        ClassLabel::TABLE_ORDER
            .iter()
            .map(|c| format!("{}%", dist.percent(*c)))
            .collect::<Vec<_>>()
            .join("/"),
        out.report.summary_line()
    ));
    Ok(())
}

fn parse_list<T>(raw: &str) -> Result<Vec<T>>
where
    T: std::str::FromStr<Err = esds_core::Error>,
{
    let items = raw
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(anyhow::Error::from))
        .collect::<Result<Vec<T>>>()?;
    if items.is_empty() {
        bail!("empty list `{raw}`");
    }
    Ok(items)
}

fn cmd_pipeline(ctx: &Ctx, a: PipelineArgs, stdout: &mut dyn Write) -> Result<()> {
    let input = ctx.input(a.input)?;
    let mut cfg = PipelineConfig {
        seed: ctx.seed,
        ..PipelineConfig::default()
    };
    if let Some(m) = ctx.file.pick::<String>(a.methods, "methods")? {
        cfg.methods = parse_list(&m)?;
    }
    if let Some(c) = ctx.file.pick::<String>(a.classifiers, "classifiers")? {
        let kinds: Vec<ClassifierKind> = parse_list(&c)?;
        cfg.classifiers = kinds.into_iter().map(ClassifierSpec::default_for).collect();
    }
    let trees = ctx.file.pick(a.trees, "trees")?;
    let rounds = ctx.file.pick(a.rounds, "rounds")?;
    for spec in &mut cfg.classifiers {
        match (spec.kind, trees, rounds) {
            (ClassifierKind::AdaBoost, _, Some(r)) => spec.n_members = r,
            (ClassifierKind::Forest | ClassifierKind::Bagging, Some(t), _) => spec.n_members = t,
            _ => {}
        }
    }
    if let Some(f) = ctx.file.pick(a.test_fraction, "test-fraction")? {
        cfg.test_fraction = f;
    }
    if let Some(v) = ctx.file.pick(a.voting, "voting")? {
        cfg.voting = v;
    }
    cfg.resampler = resampler_config(ctx, a.resampler)?;

    let ds = load(&input)?;
    let out = run_pipeline(&ds, &cfg)?;
    let text = out.report.render_text();
    let mut staged = Staged::new(&ctx.out)?;
    staged.add("report.txt", text.as_bytes())?;
    staged.add("report.csv", out.report.render_csv().as_bytes())?;
    for path in staged.commit()? {
        ctx.note(format!("wrote {}", path.display()));
    }
    if !ctx.quiet {
        stdout.write_all(text.as_bytes())?;
    }
    Ok(())
}

fn cmd_label(ctx: &Ctx, a: LabelArgs) -> Result<()> {
    let input = ctx.input(a.input)?;
    let (reference, _) = reference(ctx.file.pick(a.reference, "reference")?)?;
    let table =
        load_unlabeled(&input, &LoadOptions::default()).with_context(|| format!("loading {}", input.display()))?;
    let labels = table
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| haz_status(r[0], r[1], r[2], &reference).with_context(|| format!("row {}", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    let ds = Dataset::from_rows(table.schema, &table.rows, labels)?;
    let mut staged = Staged::new(&ctx.out)?;
    staged.add("labeled.csv", &csv_bytes(&ds)?)?;
    staged.commit()?;
    ctx.note(format!(
        "labeled {} rows: {}",
        ds.n_rows(),
        format_counts(ds.class_counts())
    ));
    Ok(())
}

fn cmd_calibrate(ctx: &Ctx, a: CalibrateArgs, stdout: &mut dyn Write) -> Result<()> {
    let input = ctx.input(a.input)?;
    let pairs = load_calibration_pairs(&input).with_context(|| format!("loading {}", input.display()))?;
    let fit = fit_linear(&pairs)?;
    let lines = [
        ("n", fit.n.to_string()),
        ("slope", fit.slope.to_string()),
        ("intercept", fit.intercept.to_string()),
        ("r_squared", fit.r_squared.to_string()),
        ("slope_se", fit.slope_std_err.to_string()),
        ("sensitivity", format!("{:.4}", fit.slope)),
    ];
    for (k, v) in lines {
        writeln!(stdout, "{k:<12}{v}")?;
    }
    Ok(())
}
