//! Aggregation of `metrics.csv` files.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use simplicial_nn::imputation::{summarize, SummaryRow};
use simplicial_nn::Method;

use crate::manifest::{read_input, write_atomic};
use crate::ReportArgs;

const REQUIRED: [&str; 5] = ["method", "dimension", "rate", "sample", "accuracy"];

type Row = (Method, usize, f64, f64, f64);

fn parse_metrics(path: &Path) -> Result<Vec<Row>> {
    let (_, bytes) = read_input(path)?;
    let text =
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        bail!("{} is empty", path.display());
    };
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let find = |name: &str| cols.iter().position(|c| *c == name);
    if let Some(missing) = REQUIRED.iter().find(|c| find(c).is_none()) {
        bail!("{}: missing `{missing}` column", path.display());
    }
    let [method, dimension, rate, _, accuracy] = REQUIRED.map(|c| find(c).expect("checked above"));
    let mae = find("mean_abs_error");
    let mut rows = Vec::new();
    for (ln, line) in lines {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != cols.len() {
            bail!(
                "{}:{}: expected {} fields, got {}",
                path.display(),
                ln + 1,
                cols.len(),
                f.len()
            );
        }
        let bad = |what: &str| format!("{}:{}: bad {what} `{}`", path.display(), ln + 1, line);
        let m = Method::from_name(f[method]).with_context(|| bad("method"))?;
        let d: usize = f[dimension].parse().with_context(|| bad("dimension"))?;
        let r: f64 = f[rate].parse().with_context(|| bad("rate"))?;
        let a: f64 = f[accuracy].parse().with_context(|| bad("accuracy"))?;
        let e: f64 = match mae {
            Some(i) => f[i].parse().with_context(|| bad("mean_abs_error"))?,
            None => f64::NAN,
        };
        rows.push((m, d, r, a, e));
    }
    Ok(rows)
}

/// Text table: one line per (method, rate) with mean ± std accuracy.
pub fn table(summary: &[SummaryRow]) -> String {
    let mut s = format!(
        "{:<15} {:>3} {:>6} {:>7} {:>20} {:>14}\n",
        "method", "dim", "rate", "samples", "accuracy (%)", "mean abs err"
    );
    for r in summary {
        let _ = writeln!(
            s,
            "{:<15} {:>3} {:>6} {:>7} {:>20} {:>14.3}",
            r.method.name(),
            r.dimension,
            r.rate,
            r.samples,
            format!("{:.2} ± {:.2}", r.mean_accuracy, r.std_accuracy),
            r.mean_abs_error
        );
    }
    s
}

/// Long-form plot data: method, dimension, rate, mean, std.
pub fn plot_csv(summary: &[SummaryRow]) -> String {
    let mut s = String::from("method,dimension,rate,mean,std\n");
    for r in summary {
        let _ = writeln!(
            s,
            "{},{},{},{:?},{:?}",
            r.method.name(),
            r.dimension,
            r.rate,
            r.mean_accuracy,
            r.std_accuracy
        );
    }
    s
}

pub fn aggregate(paths: &[impl AsRef<Path>]) -> Result<Vec<SummaryRow>> {
    let mut all = Vec::new();
    let mut dimension: Option<(usize, &Path)> = None;
    for path in paths {
        let path = path.as_ref();
        let rows = parse_metrics(path)?;
        for &(_, d, ..) in &rows {
            match dimension {
                None => dimension = Some((d, path)),
                Some((d0, first)) if d0 != d => bail!(
                    "{} has dimension {d} but {} has dimension {d0}",
                    path.display(),
                    first.display()
                ),
                _ => {}
            }
        }
        all.extend(rows);
    }
    Ok(summarize(all))
}

pub fn run(args: &ReportArgs) -> Result<()> {
    let summary = aggregate(&args.metrics)?;
    let text = table(&summary);
    print!("{text}");
    if let Some(out) = &args.out {
        std::fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
        write_atomic(&out.join("summary.txt"), text.as_bytes())?;
        write_atomic(&out.join("plot.csv"), plot_csv(&summary).as_bytes())?;
    }
    Ok(())
}
