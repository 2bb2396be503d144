//! Command-line front end. Exit codes: 0 success, 1 usage problems,
//! 2 data/processing problems. Flags override the config file, which
//! overrides defaults; `WCT_SEED` and other environment variables are
//! ignored by design.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use wct_core::imaging::write_pgm;
use wct_core::wavelet;

use crate::config::{Config, Domain};
use crate::dataset::{
    self, block_rows, extract_dataset, image_vector, load_image, read_feature_csv,
    write_feature_csv,
};
use crate::error::{write_bytes, write_text, CliError, CliResult};
use crate::experiment::{self, FoldSelection, ReportBundle};
use crate::manifest::Manifest;
use crate::model_file::ModelFile;
use crate::report;
use crate::segment::segment_image;
use crate::synth::synth_dataset;

#[derive(Debug, Parser)]
#[command(
    name = "wct",
    version,
    about = "Wavelet co-occurrence texture classification of grayscale image blocks",
    disable_help_subcommand = true
)]
pub struct Cli {
    /// key=value configuration file applied before any flags.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Root seed; every stage derives its own named sub-stream.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the synthetic PGM corpus with ground-truth patch rectangles.
    Synth {
        /// Number of normal images.
        #[arg(long)]
        normal: Option<usize>,
        /// Number of abnormal images.
        #[arg(long)]
        abnormal: Option<usize>,
        /// Square image side in pixels.
        #[arg(long)]
        size: Option<usize>,
    },
    /// Extract texture feature vectors to features.csv.
    Extract {
        /// Manifest of images (one mean vector per image).
        #[arg(long, conflicts_with = "image")]
        manifest: Option<PathBuf>,
        /// Single PGM (defaults to one row per block).
        #[arg(long)]
        image: Option<PathBuf>,
        /// wavelet | graylevel
        #[arg(long)]
        domain: Option<String>,
        /// Emit one row per block instead of the per-image mean.
        #[arg(long)]
        per_block: bool,
    },
    /// Run genetic feature selection on a feature table or manifest.
    Select {
        #[arg(long, conflicts_with = "features")]
        manifest: Option<PathBuf>,
        /// Feature table produced by `extract`.
        #[arg(long)]
        features: Option<PathBuf>,
        #[arg(long)]
        domain: Option<String>,
    },
    /// Train one model on the whole manifest and save it as JSON.
    Train {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        domain: Option<String>,
        /// svm | bpn
        #[arg(long)]
        classifier: Option<String>,
        /// linear | polynomial | gaussian
        #[arg(long)]
        kernel: Option<String>,
        /// ga | all | fixed:i;j;k
        #[arg(long)]
        selection: Option<String>,
    },
    /// Cross-validated evaluation of one experiment arm.
    Evaluate {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        domain: Option<String>,
        #[arg(long)]
        classifier: Option<String>,
        #[arg(long)]
        kernel: Option<String>,
        #[arg(long)]
        selection: Option<String>,
        /// kfold | loocv
        #[arg(long)]
        cv: Option<String>,
        #[arg(long)]
        folds: Option<usize>,
    },
    /// Mark abnormal blocks of one image with a trained model.
    Segment {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    /// Score a manifest with a trained model and emit the ROC curve.
    Roc {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    /// Run all four comparison arms (wavelet/gray-level x SVM/BPN).
    Compare {
        #[arg(long)]
        manifest: PathBuf,
    },
}

/// Parse arguments and run; returns the process exit code.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn usage(message: String) -> CliError {
    CliError::Usage(message)
}

fn parse_into<T: std::str::FromStr<Err = String>>(value: &Option<String>) -> CliResult<Option<T>> {
    match value {
        None => Ok(None),
        Some(s) => s.parse::<T>().map(Some).map_err(usage),
    }
}

fn build_config(cli_config: &Option<PathBuf>, cli_seed: Option<u64>) -> CliResult<Config> {
    let mut config = Config::default();
    if let Some(path) = cli_config {
        config.load_file(path)?;
    }
    if let Some(seed) = cli_seed {
        config.seed = seed;
    }
    Ok(config)
}

pub fn run(cli: Cli) -> CliResult<()> {
    let mut config = build_config(&cli.config, cli.seed)?;
    let out = cli.out.as_path();
    match cli.command {
        Command::Synth {
            normal,
            abnormal,
            size,
        } => {
            if let Some(n) = normal {
                config.synth_normal = n;
            }
            if let Some(n) = abnormal {
                config.synth_abnormal = n;
            }
            if let Some(s) = size {
                config.synth_image_size = s;
            }
            let manifest_path = synth_dataset(out, &config)?;
            println!(
                "wrote {} images + truth.csv; manifest at {}",
                config.synth_normal + config.synth_abnormal,
                manifest_path.display()
            );
            Ok(())
        }

        Command::Extract {
            manifest,
            image,
            domain,
            per_block,
        } => {
            if let Some(d) = parse_into::<Domain>(&domain)? {
                config.domain = d;
            }
            let table = out.join("features.csv");
            match (manifest, image) {
                (Some(path), None) => {
                    let manifest = Manifest::load(&path)?;
                    if per_block {
                        let data = per_block_dataset(&manifest, config.domain, &config)?;
                        write_feature_csv(&table, &data)?;
                    } else {
                        let data = extract_dataset(&manifest, config.domain, &config)?;
                        write_feature_csv(&table, &data)?;
                    }
                }
                (None, Some(path)) => {
                    let img = load_image(&path)?;
                    let id = path
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| "image".into());
                    let data = if per_block {
                        let rows = block_rows(&img, config.domain, &config)?;
                        let n = rows.len();
                        wct_core::features::LabeledDataset::new(
                            rows.iter().map(|(_, v)| v.clone()).collect(),
                            vec![-1; n],
                            rows.iter().map(|(pos, _)| format!("{id}:{pos}")).collect(),
                        )
                        .map_err(CliError::core("feature table"))?
                    } else {
                        let v = image_vector(&img, config.domain, &config)?;
                        wct_core::features::LabeledDataset::new(
                            vec![v],
                            vec![-1],
                            vec![id],
                        )
                        .map_err(CliError::core("feature table"))?
                    };
                    write_feature_csv(&table, &data)?;
                    if config.domain == Domain::Wavelet {
                        report_max_variance(&img, &config)?;
                    }
                }
                _ => {
                    return Err(usage(
                        "extract needs exactly one of --manifest or --image".into(),
                    ))
                }
            }
            println!("wrote {}", table.display());
            Ok(())
        }

        Command::Select {
            manifest,
            features,
            domain,
        } => {
            if let Some(d) = parse_into::<Domain>(&domain)? {
                config.domain = d;
            }
            let data = match (manifest, features) {
                (Some(path), None) => {
                    let manifest = Manifest::load(&path)?;
                    extract_dataset(&manifest, config.domain, &config)?
                }
                (None, Some(path)) => read_feature_csv(&path)?,
                _ => {
                    return Err(usage(
                        "select needs exactly one of --manifest or --features".into(),
                    ))
                }
            };
            config.selection = crate::config::Selection::Ga;
            let (_, selection) = experiment::train_full(&data, &config)?;
            write_selection_outputs(out, &config, &selection)?;
            println!(
                "selected features {:?} (bits {})",
                selection
                    .indices
                    .iter()
                    .map(|&i| dataset::feature_label(config.domain, &config, i))
                    .collect::<Vec<_>>(),
                selection.bits
            );
            Ok(())
        }

        Command::Train {
            manifest,
            domain,
            classifier,
            kernel,
            selection,
        } => {
            apply_common_flags(&mut config, &domain, &classifier, &kernel, &selection, &None, &None)?;
            let manifest = Manifest::load(&manifest)?;
            let data = extract_dataset(&manifest, config.domain, &config)?;
            let (model, selection) = experiment::train_full(&data, &config)?;
            let names = selection
                .indices
                .iter()
                .map(|&i| dataset::feature_label(config.domain, &config, i))
                .collect();
            let file = ModelFile::new(
                model,
                &config,
                config.domain,
                selection.indices.clone(),
                names,
            );
            let path = out.join("model.json");
            file.save(&path)?;
            if !selection.history.is_empty() {
                write_selection_outputs(out, &config, &selection)?;
            }
            println!("wrote {}", path.display());
            Ok(())
        }

        Command::Evaluate {
            manifest,
            domain,
            classifier,
            kernel,
            selection,
            cv,
            folds,
        } => {
            apply_common_flags(&mut config, &domain, &classifier, &kernel, &selection, &cv, &folds)?;
            let manifest = Manifest::load(&manifest)?;
            let bundle = experiment::run_experiment(&manifest, &config)?;
            report::write_bundle(out, &bundle)?;
            print_bundle_summary(&bundle, out);
            Ok(())
        }

        Command::Segment { image, model } => {
            let file = ModelFile::load(&model)?;
            let img = load_image(&image)?;
            let (mask, overlay) = segment_image(&img, &file)?;
            write_bytes(&out.join("mask.pgm"), &write_pgm(&mask.to_pgm_grid()))?;
            write_bytes(&out.join("overlay.pgm"), &write_pgm(&overlay))?;
            println!(
                "{} of {} blocks abnormal; wrote {} and {}",
                mask.abnormal_count(),
                mask.labels.len(),
                out.join("mask.pgm").display(),
                out.join("overlay.pgm").display()
            );
            Ok(())
        }

        Command::Roc { manifest, model } => {
            let file = ModelFile::load(&model)?;
            file.pathway.apply_to(&mut config);
            let manifest = Manifest::load(&manifest)?;
            let data = extract_dataset(&manifest, config.domain, &config)?;
            let trained = file.trained();
            let mut scores = Vec::with_capacity(data.len());
            for v in data.vectors() {
                let (_, s) = trained.score(v).map_err(CliError::core("scoring"))?;
                scores.push(s);
            }
            let curve = wct_core::eval::roc(&scores, data.labels())
                .map_err(CliError::core("ROC analysis"))?;
            write_text(&out.join("roc.csv"), &report::roc_csv(&curve))?;
            write_text(
                &out.join("roc.svg"),
                &report::roc_svg(&curve, "model scores"),
            )?;
            println!("AUC {:.4}; wrote roc.csv and roc.svg in {}", curve.auc, out.display());
            Ok(())
        }

        Command::Compare { manifest } => {
            let manifest = Manifest::load(&manifest)?;
            let bundles = experiment::compare(&manifest, &config)?;
            for bundle in &bundles {
                let sub = out.join(arm_dir(&bundle.arm));
                report::write_bundle(&sub, bundle)?;
            }
            write_text(&out.join("comparison.csv"), &report::comparison_csv(&bundles))?;
            write_text(
                &out.join("comparison.txt"),
                &report::comparison_text(&bundles),
            )?;
            print!("{}", report::comparison_text(&bundles));
            println!("full reports in {}", out.display());
            Ok(())
        }
    }
}

fn arm_dir(arm: &str) -> String {
    arm.to_lowercase().replace('+', "_")
}

#[allow(clippy::too_many_arguments)]
fn apply_common_flags(
    config: &mut Config,
    domain: &Option<String>,
    classifier: &Option<String>,
    kernel: &Option<String>,
    selection: &Option<String>,
    cv: &Option<String>,
    folds: &Option<usize>,
) -> CliResult<()> {
    if let Some(d) = parse_into::<Domain>(domain)? {
        config.domain = d;
    }
    if let Some(c) = parse_into::<crate::config::Classifier>(classifier)? {
        config.classifier = c;
    }
    if let Some(k) = kernel {
        config.set("svm_kernel", k).map_err(usage)?;
    }
    if let Some(s) = parse_into::<crate::config::Selection>(selection)? {
        config.selection = s;
    }
    if let Some(c) = parse_into::<crate::config::CvChoice>(cv)? {
        config.cv = c;
    }
    if let Some(k) = folds {
        config.cv_folds = *k;
    }
    Ok(())
}

/// Per-block labeled dataset over a manifest (block inherits its image's
/// label), for block-level tables.
fn per_block_dataset(
    manifest: &Manifest,
    domain: Domain,
    config: &Config,
) -> CliResult<wct_core::features::LabeledDataset> {
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    let mut ids = Vec::new();
    for entry in &manifest.entries {
        let img = load_image(&entry.path)?;
        for (pos, v) in block_rows(&img, domain, config)? {
            vectors.push(v);
            labels.push(entry.label.sign());
            ids.push(format!("{}:{pos}", entry.id));
        }
    }
    wct_core::features::LabeledDataset::new(vectors, labels, ids)
        .map_err(CliError::core("feature table"))
}

fn report_max_variance(img: &wct_core::imaging::GrayImage, config: &Config) -> CliResult<()> {
    let prepared = dataset::requantize(img, config.image_levels)?;
    let spec = config.block_spec()?;
    let cropped = dataset::centered_tiling(&prepared, &spec)?;
    let pyramid = wavelet::decompose(&cropped, 2)
        .map_err(CliError::core("wavelet decomposition"))?;
    for (k, level) in pyramid.levels().iter().enumerate() {
        let (band, var) = wavelet::max_variance_band(level);
        println!(
            "level {}: max-variance detail band {}{} (variance {:.4})",
            k + 1,
            band.name(),
            k + 1,
            var
        );
    }
    Ok(())
}

fn write_selection_outputs(
    out: &Path,
    config: &Config,
    selection: &FoldSelection,
) -> CliResult<()> {
    let mut csv = String::from("bits,indices,features\n");
    let names: Vec<String> = selection
        .indices
        .iter()
        .map(|&i| dataset::feature_label(config.domain, config, i))
        .collect();
    csv.push_str(&format!(
        "{},{},{}\n",
        selection.bits,
        selection
            .indices
            .iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(";"),
        names.join(";")
    ));
    write_text(&out.join("selection.csv"), &csv)?;
    if !selection.history.is_empty() {
        let mut history = String::from("generation,bits,J,fitness\n");
        for r in &selection.history {
            history.push_str(&format!(
                "{},{},{},{}\n",
                r.generation,
                r.chromosome.to_bitstring(),
                dataset::format_float(r.j),
                dataset::format_float(r.fitness)
            ));
        }
        write_text(&out.join("ga_history.csv"), &history)?;
    }
    Ok(())
}

fn print_bundle_summary(bundle: &ReportBundle, out: &Path) {
    let pooled = &bundle.outcome.pooled;
    println!(
        "{}: accuracy {:.2}% ({}/{}), AUC {:.4}; reports in {}",
        bundle.arm,
        bundle.outcome.pooled_accuracy * 100.0,
        pooled.correct(),
        pooled.total(),
        bundle.roc.auc,
        out.display()
    );
}
