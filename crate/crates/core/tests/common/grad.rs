#![allow(dead_code)]

//! Finite-difference gradient checking shared by the property and acceptance tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simplicial_nn::snn::{l1_masked_loss, Channels};
use simplicial_nn::{ConvLayer, HodgeLaplacian, SnnModel};

pub const STEP: f64 = 1e-5;
pub const KINK: f64 = 1e-7;

/// Copy of `model` with parameter `index` of `layer` shifted by `delta`;
/// indices past the weights address the biases.
pub fn nudge(model: &SnnModel, layer: usize, index: usize, delta: f64) -> SnnModel {
    let layers = model
        .layers()
        .iter()
        .enumerate()
        .map(|(li, l)| {
            let mut w = l.weights().to_vec();
            let mut b = l.bias().to_vec();
            if li == layer {
                if index < w.len() {
                    w[index] += delta;
                } else {
                    b[index - w.len()] += delta;
                }
            }
            ConvLayer::new(
                l.in_channels(),
                l.out_channels(),
                l.degree(),
                w,
                b,
                l.activation(),
            )
            .unwrap()
        })
        .collect();
    SnnModel::new(layers, model.dimension()).unwrap()
}

/// Every hidden activation and every known residual: the quantities whose sign
/// selects the linear piece the loss is on.
pub fn pieces(
    model: &SnnModel,
    lap: &HodgeLaplacian,
    x: &[f64],
    target: &[f64],
    known: &[bool],
) -> Vec<f64> {
    let mut h = Channels::single(x.to_vec());
    let mut out = Vec::new();
    let n = model.layers().len();
    for (li, layer) in model.layers().iter().enumerate() {
        h = layer.forward(lap, &h).unwrap();
        if li + 1 < n {
            for c in 0..h.channels() {
                out.extend_from_slice(h.row(c));
            }
        }
    }
    out.extend(
        h.row(0)
            .iter()
            .zip(target)
            .zip(known)
            .filter(|(_, k)| **k)
            .map(|((p, t), _)| p - t),
    );
    out
}

fn signs(v: &[f64]) -> Vec<bool> {
    v.iter().map(|x| *x > 0.0).collect()
}

pub struct Check {
    pub checked: usize,
    pub skipped: usize,
    pub rel_error: f64,
}

/// Compares analytic gradients with central differences on `coords` random
/// coordinates. Coordinates whose perturbation crosses or nears a kink are skipped.
pub fn check(
    model: &SnnModel,
    lap: &HodgeLaplacian,
    x: &[f64],
    target: &[f64],
    known: &[bool],
    coords: usize,
    seed: u64,
) -> Check {
    let (_, grads) = model.gradients(lap, x, target, known).unwrap();
    let base = pieces(model, lap, x, target, known);
    let near_kink = base.iter().any(|v| v.abs() < KINK);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut analytic = Vec::new();
    let mut numeric = Vec::new();
    let mut skipped = 0;
    for _ in 0..coords {
        let li = rng.random_range(0..model.layers().len());
        let layer = &model.layers()[li];
        let idx = rng.random_range(0..layer.weights().len() + layer.bias().len());
        let plus = nudge(model, li, idx, STEP);
        let minus = nudge(model, li, idx, -STEP);
        if near_kink
            || signs(&pieces(&plus, lap, x, target, known)) != signs(&base)
            || signs(&pieces(&minus, lap, x, target, known)) != signs(&base)
        {
            skipped += 1;
            continue;
        }
        let f = |m: &SnnModel| l1_masked_loss(&m.forward(lap, x).unwrap(), target, known).unwrap();
        numeric.push((f(&plus) - f(&minus)) / (2.0 * STEP));
        let g = &grads.layers[li];
        analytic.push(if idx < g.weights.len() {
            g.weights[idx]
        } else {
            g.bias[idx - g.weights.len()]
        });
    }
    let diff: f64 = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt();
    let na: f64 = analytic.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nn: f64 = numeric.iter().map(|a| a * a).sum::<f64>().sqrt();
    let scale = na.max(nn);
    Check {
        checked: analytic.len(),
        skipped,
        rel_error: if scale == 0.0 { diff } else { diff / scale },
    }
}

/// Random input, target and mask (at least one known entry) of length `n`.
pub fn random_problem(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>, Vec<bool>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    let t = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    let mut k: Vec<bool> = (0..n).map(|_| rng.random_bool(0.7)).collect();
    k[rng.random_range(0..n)] = true;
    (x, t, k)
}
