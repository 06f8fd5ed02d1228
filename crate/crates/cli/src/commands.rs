use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use gaitrec::bench::{sweep, write_bench_csv};
use gaitrec::cart::FeatureSubset;
use gaitrec::dataset_io::{read_dataset_csv, write_dataset_csv};
use gaitrec::eval::cross_validate;
use gaitrec::features::{feature_index, featurize_windows, FEATURE_LAYOUT};
use gaitrec::forest::{train_forest, ForestParams, ModelDocument};
use gaitrec::ingest::{
    discover_corpus, read_recording, segment_windows, write_recording, LabelMap, WindowSpec,
};
use gaitrec::report::{
    render_class_csv, render_tables, ReportDocument, RunMetadata, REPORT_SCHEMA_VERSION,
};
use gaitrec::synthgen::{
    duration_for_windows, generate_profile, generate_recording, recording_seed, GaitProfile,
};
use gaitrec::{Dataset, FeatureVector, FEATURE_COUNT};
use log::warn;
use serde::Serialize;

use crate::{
    BenchArgs, Cli, Command, EvaluateArgs, FeaturizeArgs, ModelArgs, ModelKind, OutputFormat,
    ReportArgs, SynthArgs, TrainArgs,
};

pub const MANIFEST_FORMAT: &str = "gaitrec-synth/1";

pub fn run(cli: Cli) -> Result<()> {
    ensure!(cli.threads >= 1, "--threads must be at least 1");
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .context("building worker pool")?;
    let threads = cli.threads;
    pool.install(|| match cli.command {
        Command::Synth(args) => cmd_synth(&args),
        Command::Featurize(args) => cmd_featurize(&args),
        Command::Train(args) => cmd_train(&args),
        Command::Evaluate(args) => cmd_evaluate(&args, threads),
        Command::Bench(args) => cmd_bench(&args),
        Command::Report(args) => cmd_report(&args),
    })
}

fn create_file(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn require_file(path: &Path) -> Result<()> {
    ensure!(
        path.is_file(),
        "input file {} does not exist",
        path.display()
    );
    Ok(())
}

/// Sidecar holding the user names behind a feature CSV's labels.
pub fn label_sidecar(features: &Path) -> PathBuf {
    features.with_extension("labels.json")
}

#[derive(Debug, Serialize)]
struct ManifestUser {
    name: String,
    label: usize,
    file: String,
    recording_seed: u64,
    samples: usize,
    profile: GaitProfile,
}

#[derive(Debug, Serialize)]
struct Manifest {
    format: &'static str,
    seed: u64,
    rate_hz: f64,
    duration_s: f64,
    users: Vec<ManifestUser>,
}

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    ensure!(
        args.users >= 2,
        "--users must be at least 2 (person recognition needs 2 or more classes), got {}",
        args.users
    );
    let duration = args
        .duration
        .unwrap_or_else(|| duration_for_windows(args.windows_per_user, args.rate));
    ensure!(duration > 0.0, "recording duration must be positive");
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;

    let mut users = Vec::with_capacity(args.users);
    for user in 0..args.users {
        let name = (user + 1).to_string();
        let profile = generate_profile(user, args.seed);
        let seed = recording_seed(args.seed, user);
        let rec = generate_recording(&profile, duration, args.rate, seed)?;
        let file = format!("{name}/recording.csv");
        let path = args.out.join(&file);
        let mut out = create_file(&path)?;
        write_recording(&rec, &mut out)?;
        out.flush()?;
        users.push(ManifestUser {
            name,
            label: user,
            file,
            recording_seed: seed,
            samples: rec.len(),
            profile,
        });
    }
    let manifest = Manifest {
        format: MANIFEST_FORMAT,
        seed: args.seed,
        rate_hz: args.rate,
        duration_s: duration,
        users,
    };
    let mut out = create_file(&args.out.join("manifest.json"))?;
    serde_json::to_writer_pretty(&mut out, &manifest)?;
    writeln!(out)?;
    out.flush()?;
    eprintln!(
        "wrote {} recordings of {duration} s to {}",
        args.users,
        args.out.display()
    );
    Ok(())
}

fn cmd_featurize(args: &FeaturizeArgs) -> Result<()> {
    ensure!(
        args.input.is_dir(),
        "input directory {} does not exist",
        args.input.display()
    );
    let spec = WindowSpec::new(args.window.width, args.window.overlap)?;
    let plot_slot = match &args.plot_feature {
        Some(name) => Some(feature_index(name).with_context(|| {
            let known: Vec<&str> = FEATURE_LAYOUT.iter().map(|d| d.name).collect();
            format!(
                "unknown feature `{name}`; known features: {}",
                known.join(", ")
            )
        })?),
        None => None,
    };
    let (labels, files) = discover_corpus(&args.input, args.window.rate)?;
    ensure!(
        !files.is_empty(),
        "no recordings found under {}",
        args.input.display()
    );
    for user in &args.users {
        ensure!(
            labels.label_of(user).is_some(),
            "unknown user `{user}` for --users"
        );
    }

    let mut rows: Vec<FeatureVector> = Vec::new();
    let mut windows_per_user = vec![0usize; labels.len()];
    let mut degenerate = 0;
    for file in &files {
        let label = labels.label_of(&file.user_label).unwrap_or_default();
        let rec = read_recording(&file.path, label, file.rate_hz)?;
        let windows = segment_windows(&rec, spec)?;
        if windows.is_empty() {
            warn!(
                "{}: {} samples is shorter than one {}-sample window; no rows",
                file.path.display(),
                rec.len(),
                spec.width
            );
            continue;
        }
        let featurized = featurize_windows(&windows)
            .with_context(|| format!("featurizing {}", file.path.display()))?;
        windows_per_user[label] += featurized.len();
        degenerate += featurized
            .iter()
            .map(|f| f.degenerate_ratios)
            .sum::<usize>();
        rows.extend(featurized.into_iter().map(|f| f.vector));
    }
    if degenerate > 0 {
        warn!("{degenerate} axis-ratio features had a near-zero z mean and were set to 0");
    }
    let dataset = Dataset::new(rows, labels.len())?;

    let mut out = create_file(&args.out)?;
    write_dataset_csv(&dataset, &mut out)?;
    out.flush()?;
    let mut sidecar = create_file(&label_sidecar(&args.out))?;
    serde_json::to_writer_pretty(&mut sidecar, &labels)?;
    writeln!(sidecar)?;
    sidecar.flush()?;

    for (label, count) in windows_per_user.iter().enumerate() {
        eprintln!("user {}: {count} windows", labels.names[label]);
    }
    eprintln!("wrote {} rows to {}", dataset.len(), args.out.display());

    if let Some(slot) = plot_slot {
        let users: Vec<String> = if args.users.is_empty() {
            labels.names.clone()
        } else {
            args.users.clone()
        };
        let name = FEATURE_LAYOUT[slot].name;
        let path = args
            .plot_out
            .clone()
            .unwrap_or_else(|| args.out.with_extension(format!("{name}.csv")));
        write_plot_series(&dataset, &labels, &users, slot, &path)?;
        eprintln!(
            "wrote {name} series for users {} to {}",
            users.join(","),
            path.display()
        );
    }
    Ok(())
}

/// One column per user, one row per window index; shorter columns are
/// padded with empty cells.
fn write_plot_series(
    dataset: &Dataset,
    labels: &LabelMap,
    users: &[String],
    slot: usize,
    path: &Path,
) -> Result<()> {
    let columns: Vec<Vec<f64>> = users
        .iter()
        .map(|u| {
            let label = labels.label_of(u).unwrap_or_default();
            dataset
                .rows()
                .iter()
                .filter(|r| r.label == label)
                .map(|r| r.values[slot])
                .collect()
        })
        .collect();
    let mut out = create_file(path)?;
    let header: Vec<String> = users.iter().map(|u| format!("user_{u}")).collect();
    writeln!(out, "{}", header.join(","))?;
    let len = columns.iter().map(Vec::len).max().unwrap_or(0);
    for i in 0..len {
        let cells: Vec<String> = columns
            .iter()
            .map(|c| c.get(i).map(f64::to_string).unwrap_or_default())
            .collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()?;
    Ok(())
}

fn load_features(path: &Path) -> Result<(Dataset, LabelMap)> {
    require_file(path)?;
    let sidecar = label_sidecar(path);
    let labels: Option<LabelMap> = if sidecar.is_file() {
        let text = fs::read_to_string(&sidecar)?;
        Some(
            serde_json::from_str(&text)
                .with_context(|| format!("reading {}", sidecar.display()))?,
        )
    } else {
        None
    };
    let file = File::open(path)?;
    let dataset = read_dataset_csv(io::BufReader::new(file), labels.as_ref().map(LabelMap::len))
        .with_context(|| format!("reading {}", path.display()))?;
    let labels = labels.unwrap_or_else(|| LabelMap::numeric(dataset.class_count()));
    Ok((dataset, labels))
}

pub fn forest_params(args: &ModelArgs) -> Result<ForestParams> {
    let mut params = match args.model {
        ModelKind::Dt => ForestParams::decision_tree(args.seed),
        ModelKind::Rf => {
            let subset = match args.k_try.as_str() {
                "all" => FeatureSubset::All,
                n => FeatureSubset::Count(
                    n.parse()
                        .with_context(|| format!("--k-try must be a count or `all`, got `{n}`"))?,
                ),
            };
            let mut p = ForestParams::default()
                .with_tree_count(args.trees)
                .with_seed(args.seed);
            p.tree.feature_subset = subset;
            p
        }
    };
    params.tree.max_depth = args.max_depth;
    params.tree.min_samples_split = args.min_samples_split;
    params.validate(FEATURE_COUNT)?;
    Ok(params)
}

fn model_name(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::Rf => "rf",
        ModelKind::Dt => "dt",
    }
}

fn cmd_train(args: &TrainArgs) -> Result<()> {
    let params = forest_params(&args.model)?;
    let (dataset, labels) = load_features(&args.features)?;
    let forest = train_forest(&dataset, &params)?;
    let doc = ModelDocument::new(forest, labels);
    let mut out = create_file(&args.out)?;
    doc.write(&mut out)?;
    out.flush()?;
    eprintln!(
        "trained {} tree(s) on {} rows; model written to {}",
        params.tree_count,
        dataset.len(),
        args.out.display()
    );
    Ok(())
}

fn cmd_evaluate(args: &EvaluateArgs, threads: usize) -> Result<()> {
    let params = forest_params(&args.model)?;
    let (dataset, labels) = load_features(&args.features)?;
    let start = Instant::now();
    let evaluation = cross_validate(&dataset, &params, args.folds, args.model.seed).map_err(|e| {
        match e {
            gaitrec::Error::ClassTooSmall { class, count, folds } => anyhow::anyhow!(
                "stratification failed: user `{}` (class {class}) has {count} rows, fewer than {folds} folds",
                labels.name_of(class).unwrap_or("?")
            ),
            other => other.into(),
        }
    })?;
    let doc = ReportDocument {
        schema_version: REPORT_SCHEMA_VERSION,
        model: model_name(args.model.model).to_string(),
        params,
        folds: args.folds,
        seed: args.model.seed,
        labels,
        evaluation,
        metadata: RunMetadata {
            elapsed_seconds: start.elapsed().as_secs_f64(),
            threads,
        },
    };
    if let Some(path) = &args.out {
        let mut out = create_file(path)?;
        writeln!(out, "{}", doc.to_json()?)?;
        out.flush()?;
    }
    let stdout = io::stdout();
    let mut stdout = stdout.lock();
    match args.format {
        OutputFormat::Json => writeln!(stdout, "{}", doc.to_json()?)?,
        OutputFormat::Csv => write!(stdout, "{}", render_class_csv(&doc))?,
        OutputFormat::Table => write!(stdout, "{}", render_tables(std::slice::from_ref(&doc)))?,
    }
    Ok(())
}

/// `1, 2, 4, ...` up to and including `max` (and `max` itself when it is
/// not a power of two).
pub fn tree_counts(max: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = std::iter::successors(Some(1usize), |&t| t.checked_mul(2))
        .take_while(|&t| t <= max)
        .collect();
    if counts.last() != Some(&max) && max > 0 {
        counts.push(max);
    }
    counts
}

fn cmd_bench(args: &BenchArgs) -> Result<()> {
    ensure!(args.max_trees >= 1, "--max-trees must be at least 1");
    let params = forest_params(&args.model)?;
    let (dataset, _) = load_features(&args.features)?;
    let rows = sweep(
        &dataset,
        &params,
        &tree_counts(args.max_trees),
        args.folds,
        args.model.seed,
        args.repeats,
    )?;
    match &args.out {
        Some(path) => {
            let mut out = create_file(path)?;
            write_bench_csv(&rows, &mut out)?;
            out.flush()?;
        }
        None => write_bench_csv(&rows, io::stdout().lock())?,
    }
    Ok(())
}

fn cmd_report(args: &ReportArgs) -> Result<()> {
    let mut docs = Vec::with_capacity(args.inputs.len());
    for path in &args.inputs {
        require_file(path)?;
        let text = fs::read_to_string(path)?;
        let doc = ReportDocument::from_json(&text)
            .with_context(|| format!("reading {}", path.display()))?;
        if doc.schema_version != REPORT_SCHEMA_VERSION {
            bail!(
                "{}: unsupported report schema version {}",
                path.display(),
                doc.schema_version
            );
        }
        docs.push(doc);
    }
    let stdout = io::stdout();
    let mut stdout = stdout.lock();
    match args.format {
        OutputFormat::Table => write!(stdout, "{}", render_tables(&docs))?,
        OutputFormat::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&docs)?)?,
        OutputFormat::Csv => {
            writeln!(stdout, "model,accuracy,auc,recall,specificity")?;
            for d in &docs {
                let h = &d.evaluation.headline;
                writeln!(
                    stdout,
                    "{},{},{},{},{}",
                    d.model, h.accuracy, h.auc, h.recall, h.specificity
                )?;
            }
        }
    }
    Ok(())
}
