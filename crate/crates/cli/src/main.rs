mod args;
mod config;

use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use swarmselect_core::report::{metrics_csv, summary_csv, trace_csv};
use swarmselect_core::synthetic::generate;
use swarmselect_core::{
    emit_timing, load_csv, run_repeated, write_csv, LabelColumn, ResultsDocument, RunResult,
    SyntheticSpec,
};

use crate::args::{Cli, Command, RunArgs, SyntheticArgs};
use crate::config::{resolve, Settings};

const THREADS_ENV: &str = "SWARMSELECT_THREADS";

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| match cli.command {
        Some(Command::GenSynthetic(a)) => gen_synthetic(&a),
        Some(Command::Run(a)) => run(&a),
        None => run(&cli.run),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("{THREADS_ENV} must be a positive integer, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build_global()
        .context("configuring the worker pool")
}

fn gen_synthetic(a: &SyntheticArgs) -> Result<()> {
    let spec = SyntheticSpec {
        n_samples: a.samples,
        n_informative: a.informative,
        n_noise: a.noise,
        separation: a.separation,
        seed: a.seed,
    };
    let synth = generate(&spec).context("generating synthetic dataset")?;
    write_csv(&synth.dataset, &a.output)
        .with_context(|| format!("writing {}", a.output.display()))?;
    let names: Vec<&str> = synth
        .informative
        .iter()
        .map(|&j| synth.dataset.feature_names()[j].as_str())
        .collect();
    println!(
        "wrote {} ({} samples, {} features); informative: {}",
        a.output.display(),
        synth.dataset.n_samples(),
        synth.dataset.n_features(),
        names.join(",")
    );
    Ok(())
}

fn run(args: &RunArgs) -> Result<()> {
    let mut settings = resolve(args).context("resolving configuration")?;
    let label = settings
        .label_column
        .as_deref()
        .map_or(LabelColumn::Last, LabelColumn::parse);
    let ds = load_csv(&settings.dataset, &label).context("loading dataset")?;
    if let Some(name) = &settings.positive_label {
        settings.experiment.positive_class = ds
            .class_names()
            .iter()
            .position(|c| c == name)
            .with_context(|| {
                format!(
                    "positive label '{name}' is not one of {:?}",
                    ds.class_names()
                )
            })? as u8;
    }

    let mut all = Vec::new();
    let mut documents = Vec::new();
    for &algo in &settings.algos {
        let results = run_repeated(&ds, algo, &settings.experiment, settings.repeat)
            .with_context(|| format!("running {algo}"))?;
        all.extend(results.iter().cloned());
        documents.push(ResultsDocument::new(results)?);
    }
    write_outputs(&settings, &documents, &all).context("writing outputs")?;
    print_table(&documents);
    Ok(())
}

fn write_outputs(settings: &Settings, docs: &[ResultsDocument], all: &[RunResult]) -> Result<()> {
    let dir = &settings.output;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let write = |name: &str, contents: String| -> Result<()> {
        let path = dir.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
    };
    for doc in docs {
        write(&format!("{}.json", doc.algo), doc.to_json())?;
    }
    write("metrics.csv", metrics_csv(all))?;
    let summaries: Vec<_> = docs.iter().map(|d| d.summary.clone()).collect();
    write("summary.csv", summary_csv(&summaries))?;
    write("traces.csv", trace_csv(all))?;
    write("timing.csv", emit_timing(all)?.to_csv())?;
    eprintln!("results written to {}", dir.display());
    Ok(())
}

fn print_table(docs: &[ResultsDocument]) {
    println!(
        "{:<8} {:>5} {:>20} {:>9} {:>7} {:>7} {:>9} {:>10}",
        "algo", "runs", "accuracy(%)", "precision", "recall", "f1", "selected", "fitness"
    );
    for d in docs {
        let s = &d.summary;
        println!(
            "{:<8} {:>5} {:>20} {:>9.2} {:>7.2} {:>7.2} {:>9} {:>10.5}",
            s.algo.name(),
            s.runs,
            100.0 * s.median_accuracy,
            s.median_precision,
            s.median_recall,
            s.median_f1,
            s.median_n_selected,
            s.median_best_fitness
        );
    }
}
