//! Browser bindings: describe a complex, filter a cochain, run an imputation.
//!
//! Each exported function takes plain text (the formats of the `snn` CLI) and
//! returns JSON. The `*_json` functions are the same operations without the
//! JavaScript boundary.

use serde::Serialize;
use simplicial_nn::imputation::{run_experiment, Method};
use simplicial_nn::ingest::{parse_corpus, project_to_complex};
use simplicial_nn::io::read_complex;
use simplicial_nn::spectral::polynomial_filter;
use simplicial_nn::{betti_number, hodge_laplacian, CorpusFormat, ExperimentConfig, TrainConfig};
use wasm_bindgen::prelude::*;

/// Laplacians larger than this are summarized without their entries.
const MAX_SHOWN: usize = 40;

#[derive(Serialize)]
struct Dimension {
    dimension: usize,
    simplices: Vec<String>,
    betti: usize,
    laplacian: Option<Vec<Vec<f64>>>,
}

fn parse_numbers(text: &str) -> Result<Vec<f64>, String> {
    text.split([',', ' ', '\n', '\t'])
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("not a number: `{t}`"))
        })
        .collect()
}

fn keys(k: &simplicial_nn::SimplicialComplex, p: usize) -> Vec<String> {
    k.simplices(p)
        .iter()
        .map(|s| {
            s.vertices()
                .iter()
                .map(|v| v.0.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}

pub fn describe_json(complex: &str) -> Result<String, String> {
    let k = read_complex(complex).map_err(|e| e.to_string())?;
    let dims = (0..k.counts().len())
        .map(|p| {
            let lap = hodge_laplacian(&k, p).map_err(|e| e.to_string())?;
            Ok(Dimension {
                dimension: p,
                simplices: keys(&k, p),
                betti: betti_number(&k, p, None).map_err(|e| e.to_string())?,
                laplacian: (lap.size() <= MAX_SHOWN).then(|| lap.matrix().to_dense()),
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    serde_json::to_string(&dims).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Filtered {
    simplices: Vec<String>,
    input: Vec<f64>,
    output: Vec<f64>,
}

/// Applies Σ w_i L_p^i to `values` (one per p-simplex in listed order; all
/// ones when empty).
pub fn filter_json(
    complex: &str,
    dimension: usize,
    values: &str,
    weights: &str,
) -> Result<String, String> {
    let k = read_complex(complex).map_err(|e| e.to_string())?;
    let lap = hodge_laplacian(&k, dimension).map_err(|e| e.to_string())?;
    let mut input = parse_numbers(values)?;
    if input.is_empty() {
        input = vec![1.0; lap.size()];
    }
    if input.len() != lap.size() {
        return Err(format!(
            "expected {} values for dimension {dimension}, got {}",
            lap.size(),
            input.len()
        ));
    }
    let w = parse_numbers(weights)?;
    if w.is_empty() {
        return Err("at least one weight is required".into());
    }
    let output = polynomial_filter(&lap, &w, &input).map_err(|e| e.to_string())?;
    serde_json::to_string(&Filtered {
        simplices: keys(&k, dimension),
        input,
        output,
    })
    .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Score {
    method: &'static str,
    accuracy: f64,
    mean_abs_error: f64,
}

#[derive(Serialize)]
struct Imputation {
    counts: Vec<usize>,
    missing: usize,
    scores: Vec<Score>,
    final_loss: Option<f64>,
}

/// Projects a tab-separated corpus, hides `rate` of the `dimension`-cochain
/// and scores a freshly trained network against the baselines. `scaled`
/// turns on the Laplacian rescaling and standardization extensions.
pub fn impute_json(
    corpus: &str,
    dimension: usize,
    rate: f64,
    seed: u64,
    iterations: usize,
    scaled: bool,
) -> Result<String, String> {
    let (c, _) = parse_corpus(corpus.as_bytes(), CorpusFormat::Tsv).map_err(|e| e.to_string())?;
    let all: Vec<usize> = (0..c.len()).collect();
    let cc = project_to_complex(&c, &all).map_err(|e| e.to_string())?;
    let config = ExperimentConfig {
        rates: vec![rate],
        samples: 1,
        seed,
        train: TrainConfig {
            iterations,
            rescale_laplacian: scaled,
            standardize: scaled,
            ..TrainConfig::default()
        },
        baselines_only: iterations == 0,
    };
    let out = run_experiment(&cc, dimension, &config).map_err(|e| e.to_string())?;
    let scores = Method::ALL
        .iter()
        .filter_map(|&m| out.report.rows.iter().find(|r| r.method == m))
        .map(|r| Score {
            method: r.method.name(),
            accuracy: r.accuracy,
            mean_abs_error: r.mean_abs_error,
        })
        .collect();
    let missing = out.report.rows.first().map_or(0, |r| r.abs_errors.len());
    serde_json::to_string(&Imputation {
        counts: cc.stats(),
        missing,
        scores,
        final_loss: out.losses.first().and_then(|l| l.2.last().copied()),
    })
    .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn describe(complex: &str) -> Result<String, JsError> {
    describe_json(complex).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn filter(
    complex: &str,
    dimension: usize,
    values: &str,
    weights: &str,
) -> Result<String, JsError> {
    filter_json(complex, dimension, values, weights).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn impute(
    corpus: &str,
    dimension: usize,
    rate: f64,
    seed: u64,
    iterations: usize,
    scaled: bool,
) -> Result<String, JsError> {
    impute_json(corpus, dimension, rate, seed, iterations, scaled).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "0 1 2\n0 3\n2 3\n";

    #[test]
    fn describes_the_four_paper_complex() {
        let v: serde_json::Value = serde_json::from_str(&describe_json(TOY).unwrap()).unwrap();
        assert_eq!(v[1]["betti"], 1);
        assert_eq!(
            v[1]["laplacian"][1],
            serde_json::json!([0.0, 3.0, 1.0, 0.0, -1.0])
        );
        assert_eq!(v[2]["simplices"][0], "0,1,2");
    }

    #[test]
    fn filters_with_the_laplacian() {
        let out = filter_json(TOY, 1, "150,100,10,100,4", "0,1").unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(
            v["output"],
            serde_json::json!([460.0, 306.0, 274.0, 296.0, -182.0])
        );
        assert!(filter_json(TOY, 1, "1,2", "1").is_err());
        assert!(filter_json(TOY, 1, "", "").is_err());
    }

    #[test]
    fn imputes_a_toy_corpus() {
        let corpus = "I\tA;B;C\t100\nII\tA;B\t50\nIII\tA;D\t10\nIV\tC;D\t4\n";
        let v: serde_json::Value =
            serde_json::from_str(&impute_json(corpus, 1, 0.4, 1, 5, false).unwrap()).unwrap();
        assert_eq!(v["counts"], serde_json::json!([4, 5, 1]));
        assert_eq!(v["missing"], 2);
        assert_eq!(v["scores"].as_array().unwrap().len(), 4);
        let baselines: serde_json::Value =
            serde_json::from_str(&impute_json(corpus, 1, 0.4, 1, 0, true).unwrap()).unwrap();
        assert_eq!(baselines["scores"].as_array().unwrap().len(), 3);
    }
}
