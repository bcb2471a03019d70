use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use log::{info, warn};
use simplicial_nn::imputation::{
    histogram, run_experiment, transfer_experiment, ExperimentOutcome,
};
use simplicial_nn::ingest::{
    filter_corpus, parse_corpus, project_to_complex, sample_papers, CorpusFilter,
};
use simplicial_nn::io::{read_citation_complex, write_citation_complex, CitationComplexFiles};
use simplicial_nn::seed::{derive, stage};
use simplicial_nn::synthetic::{synthetic_corpus, SyntheticConfig};
use simplicial_nn::{CitationComplex, CorpusFormat, ExperimentConfig, Method, TrainConfig};

use crate::manifest::Run;
use crate::{Format, IngestArgs, SampleArgs, TrainArgs, UsageError};

fn corpus_format(f: Format) -> CorpusFormat {
    match f {
        Format::S2orc => CorpusFormat::S2orc,
        Format::Tsv => CorpusFormat::Tsv,
    }
}

pub fn ingest(args: &IngestArgs, argv: &[String]) -> Result<()> {
    let mut run = Run::start("ingest", &args.out)?;
    run.stage("parse");
    let bytes = run.input(&args.corpus)?;
    let (corpus, summary) = parse_corpus(bytes.as_slice(), corpus_format(args.format))
        .with_context(|| format!("reading {}", args.corpus.display()))?;
    run.stage("filter");
    let filter = CorpusFilter {
        min_citations: args.min_citations,
        max_authors: args.max_authors,
    };
    let kept = filter_corpus(&corpus, filter);
    if kept.is_empty() {
        warn!("no papers left after filtering {}", args.corpus.display());
    }
    run.stage("write");
    run.output("corpus.tsv", kept.to_tsv().as_bytes())?;
    run.finish(args, argv)?;
    println!(
        "{} lines: {} papers parsed ({} malformed, {} without authors, {} duplicate ids); {} kept after filtering",
        summary.lines,
        summary.parsed,
        summary.malformed,
        summary.without_authors,
        summary.duplicate_ids,
        kept.len()
    );
    Ok(())
}

fn counts_table(cc: &CitationComplex) -> String {
    let mut s = String::from("dimension,count\n");
    for (p, n) in cc.stats().iter().enumerate() {
        let _ = writeln!(s, "{p},{n}");
    }
    s
}

pub fn sample(args: &SampleArgs, argv: &[String]) -> Result<()> {
    let mut run = Run::start("sample", &args.out)?;
    run.stage("load");
    let corpus = match (&args.corpus, args.synthetic) {
        (Some(path), _) => {
            let bytes = run.input(path)?;
            parse_corpus(bytes.as_slice(), corpus_format(args.format))
                .with_context(|| format!("reading {}", path.display()))?
                .0
        }
        (None, Some(seed)) => synthetic_corpus(&SyntheticConfig {
            seed,
            ..SyntheticConfig::default()
        })?,
        (None, None) => bail!(UsageError(
            "either --corpus or --synthetic is required".into()
        )),
    };
    if corpus.is_empty() {
        bail!("the corpus has no papers");
    }
    run.stage("sample");
    let papers = if args.all {
        (0..corpus.len()).collect()
    } else {
        sample_papers(
            &corpus,
            args.walk_length,
            derive(args.seed, &[stage::SAMPLE]),
        )?
    };
    info!("{} distinct papers selected", papers.len());
    run.stage("project");
    let cc = project_to_complex(&corpus, &papers)?;
    run.stage("write");
    let files = write_citation_complex(&cc);
    run.output("complex.txt", files.complex.as_bytes())?;
    for (p, text) in files.cochains.iter().enumerate() {
        run.output(&format!("cochain_{p}.tsv"), text.as_bytes())?;
    }
    run.output("labels.tsv", files.labels.as_bytes())?;
    let ids: String = papers
        .iter()
        .map(|&i| format!("{}\n", corpus.papers()[i].id))
        .collect();
    run.output("papers.txt", ids.as_bytes())?;
    let counts = counts_table(&cc);
    run.output("counts.csv", counts.as_bytes())?;
    run.finish(args, argv)?;
    println!("{} papers sampled", papers.len());
    println!("dimension  simplices");
    for (p, n) in cc.stats().iter().enumerate() {
        println!("{p:>9}  {n:>9}");
    }
    Ok(())
}

/// Reads a directory written by `sample`, recording every file as an input.
pub fn load_complex(
    dir: &Path,
    mut record: impl FnMut(&Path) -> Result<Vec<u8>>,
) -> Result<CitationComplex> {
    let text = |bytes: Vec<u8>, path: &Path| {
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    };
    let complex_path = dir.join("complex.txt");
    let complex = text(record(&complex_path)?, &complex_path)?;
    let top = simplicial_nn::io::read_complex(&complex)
        .with_context(|| format!("parsing {}", complex_path.display()))?
        .counts()
        .len();
    let mut cochains = Vec::with_capacity(top);
    for p in 0..top {
        let path = dir.join(format!("cochain_{p}.tsv"));
        cochains.push(text(record(&path)?, &path)?);
    }
    let labels_path = dir.join("labels.tsv");
    let labels = text(record(&labels_path)?, &labels_path)?;
    read_citation_complex(&CitationComplexFiles {
        complex,
        cochains,
        labels,
    })
    .with_context(|| format!("loading complex from {}", dir.display()))
}

fn losses_csv(outcome: &ExperimentOutcome) -> String {
    let mut s = String::from("rate,sample,iteration,loss\n");
    for (rate, sample, losses) in &outcome.losses {
        for (i, l) in losses.iter().enumerate() {
            let _ = writeln!(s, "{rate},{sample},{i},{l:?}");
        }
    }
    s
}

fn histogram_csv(outcome: &ExperimentOutcome, rates: &[f64], bin_width: f64) -> Result<String> {
    let mut s = String::from("method,rate,bin_low,bin_high,count\n");
    for m in Method::ALL {
        for &rate in rates {
            for b in histogram(&outcome.report.errors(m, rate), bin_width)? {
                let _ = writeln!(
                    s,
                    "{},{rate},{:?},{:?},{}",
                    m.name(),
                    b.low,
                    b.high,
                    b.count
                );
            }
        }
    }
    Ok(s)
}

pub fn train(args: &TrainArgs, argv: &[String]) -> Result<()> {
    let config = ExperimentConfig {
        rates: args.rates.clone(),
        samples: args.samples,
        seed: args.seed,
        train: TrainConfig {
            iterations: args.iterations,
            lr: args.lr,
            seed: args.seed,
            widths: args.layers.clone(),
            degree: args.degree,
            leaky_slope: args.leaky_slope,
            rescale_laplacian: args.rescale_laplacian,
            standardize: args.standardize,
        },
        baselines_only: args.baselines_only,
    };
    if !(args.bin_width.is_finite() && args.bin_width > 0.0) {
        bail!(UsageError(format!(
            "--bin-width must be positive, got {}",
            args.bin_width
        )));
    }
    let mut run = Run::start("train", &args.out)?;
    run.stage("load");
    let cc = load_complex(&args.complex, |p| run.input(p))?;
    if cc.cochain(args.dimension).is_none() {
        bail!(
            "{} has no {}-simplices (top dimension {})",
            args.complex.display(),
            args.dimension,
            cc.stats().len().saturating_sub(1)
        );
    }
    let eval = match &args.transfer {
        Some(dir) => Some(load_complex(dir, |p| run.input(p))?),
        None => None,
    };
    run.stage("experiment");
    let outcome = match &eval {
        Some(eval) => transfer_experiment(&cc, eval, args.dimension, &config)?,
        None => run_experiment(&cc, args.dimension, &config)?,
    };
    run.stage("write");
    run.output("metrics.csv", outcome.report.to_csv().as_bytes())?;
    run.output(
        "histogram.csv",
        histogram_csv(&outcome, &args.rates, args.bin_width)?.as_bytes(),
    )?;
    if let Some(model) = &outcome.last_model {
        run.output("losses.csv", losses_csv(&outcome).as_bytes())?;
        run.output("model.txt", model.to_text().as_bytes())?;
    }
    run.finish(args, argv)?;
    print!("{}", crate::report::table(&outcome.report.summary()));
    Ok(())
}
