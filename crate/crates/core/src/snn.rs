//! Simplicial convolutional networks.
//!
//! A layer maps `in` channels of p-cochains to `out` channels by
//!
//! ```text
//! Y[o] = ψ( Σ_c Σ_{i=0..N} W[o][c][i] · L^i X[c] + b[o] )
//! ```
//!
//! Powers of the Laplacian are never formed: `L^i X[c]` is produced by
//! repeated sparse matrix-vector products. Since L is symmetric the adjoint of
//! `x ↦ L^i x` is itself, which keeps the backward pass a mirror of the forward.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::HodgeLaplacian;

/// Pointwise nonlinearity applied after the filter and bias.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Activation {
    LeakyRelu(f64),
    Identity,
}

impl Activation {
    #[inline]
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::LeakyRelu(s) if z < 0.0 => s * z,
            _ => z,
        }
    }

    #[inline]
    fn derivative(self, z: f64) -> f64 {
        match self {
            Activation::LeakyRelu(s) if z < 0.0 => s,
            _ => 1.0,
        }
    }

    /// Slope used by the model file; identity is written as slope 1.
    pub fn slope(self) -> f64 {
        match self {
            Activation::LeakyRelu(s) => s,
            Activation::Identity => 1.0,
        }
    }

    pub fn from_slope(slope: f64) -> Result<Self> {
        if slope == 1.0 {
            Ok(Activation::Identity)
        } else if slope > 0.0 && slope < 1.0 {
            Ok(Activation::LeakyRelu(slope))
        } else {
            Err(Error::InvalidParameter(format!(
                "leaky ReLU slope must lie in (0, 1), got {slope}"
            )))
        }
    }
}

/// A stack of cochains: `channels` rows of length `len`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Channels {
    channels: usize,
    len: usize,
    data: Vec<f64>,
}

impl Channels {
    pub fn zeros(channels: usize, len: usize) -> Self {
        Channels {
            channels,
            len,
            data: vec![0.0; channels * len],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let channels = rows.len();
        let len = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != len) {
            return Err(Error::ShapeMismatch {
                expected: format!("rows of length {len}"),
                actual: "ragged rows".into(),
            });
        }
        Ok(Channels {
            channels,
            len,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn single(values: Vec<f64>) -> Self {
        Channels {
            channels: 1,
            len: values.len(),
            data: values,
        }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn row(&self, c: usize) -> &[f64] {
        &self.data[c * self.len..(c + 1) * self.len]
    }

    pub fn row_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.data[c * self.len..(c + 1) * self.len]
    }

    pub fn into_single(self) -> Result<Vec<f64>> {
        if self.channels != 1 {
            return Err(Error::ShapeMismatch {
                expected: "1 channel".into(),
                actual: format!("{} channels", self.channels),
            });
        }
        Ok(self.data)
    }
}

/// One simplicial convolutional layer.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvLayer {
    in_channels: usize,
    out_channels: usize,
    degree: usize,
    /// Indexed `[out][in][power]`.
    weights: Vec<f64>,
    bias: Vec<f64>,
    activation: Activation,
}

impl ConvLayer {
    pub fn new(
        in_channels: usize,
        out_channels: usize,
        degree: usize,
        weights: Vec<f64>,
        bias: Vec<f64>,
        activation: Activation,
    ) -> Result<Self> {
        if in_channels == 0 || out_channels == 0 {
            return Err(Error::InvalidParameter(
                "channel counts must be positive".into(),
            ));
        }
        let nw = out_channels * in_channels * (degree + 1);
        if weights.len() != nw || bias.len() != out_channels {
            return Err(Error::ShapeMismatch {
                expected: format!("{nw} weights and {out_channels} biases"),
                actual: format!("{} weights and {} biases", weights.len(), bias.len()),
            });
        }
        if weights.iter().chain(&bias).any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter(
                "layer parameters must be finite".into(),
            ));
        }
        if let Activation::LeakyRelu(s) = activation {
            Activation::from_slope(s)?;
        }
        Ok(ConvLayer {
            in_channels,
            out_channels,
            degree,
            weights,
            bias,
            activation,
        })
    }

    /// Uniform on ±sqrt(6 / ((in + out)·(N + 1))), zero bias.
    pub fn random<R: Rng>(
        in_channels: usize,
        out_channels: usize,
        degree: usize,
        activation: Activation,
        rng: &mut R,
    ) -> Result<Self> {
        let fan = ((in_channels + out_channels) * (degree + 1)) as f64;
        let limit = (6.0 / fan).sqrt();
        let weights = (0..out_channels * in_channels * (degree + 1))
            .map(|_| rng.random_range(-limit..limit))
            .collect();
        Self::new(
            in_channels,
            out_channels,
            degree,
            weights,
            vec![0.0; out_channels],
            activation,
        )
    }

    pub fn in_channels(&self) -> usize {
        self.in_channels
    }

    pub fn out_channels(&self) -> usize {
        self.out_channels
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    #[inline]
    fn w_index(&self, o: usize, c: usize, i: usize) -> usize {
        (o * self.in_channels + c) * (self.degree + 1) + i
    }

    pub fn weight(&self, o: usize, c: usize, i: usize) -> f64 {
        self.weights[self.w_index(o, c, i)]
    }

    pub fn parameter_count(&self) -> usize {
        self.weights.len() + self.bias.len()
    }

    fn check_input(&self, laplacian: &HodgeLaplacian, x: &Channels) -> Result<()> {
        if x.channels != self.in_channels || x.len != laplacian.size() {
            return Err(Error::ShapeMismatch {
                expected: format!(
                    "{} channels of length {}",
                    self.in_channels,
                    laplacian.size()
                ),
                actual: format!("{} channels of length {}", x.channels, x.len),
            });
        }
        Ok(())
    }

    /// Forward pass keeping the intermediates needed by the backward pass.
    fn forward_cached(&self, laplacian: &HodgeLaplacian, x: &Channels) -> Result<LayerCache> {
        self.check_input(laplacian, x)?;
        let n = x.len;
        let k = self.degree + 1;
        let l = laplacian.matrix();
        // powers[(c * k + i) * n ..] = L^i X[c]
        let mut powers = vec![0.0; self.in_channels * k * n];
        for c in 0..self.in_channels {
            let base = c * k * n;
            powers[base..base + n].copy_from_slice(x.row(c));
            for i in 1..k {
                let (prev, next) = powers[base + (i - 1) * n..base + (i + 1) * n].split_at_mut(n);
                l.apply_unchecked(prev, next);
            }
        }
        let mut pre = Channels::zeros(self.out_channels, n);
        for o in 0..self.out_channels {
            let row = pre.row_mut(o);
            row.fill(self.bias[o]);
            for c in 0..self.in_channels {
                for i in 0..k {
                    let w = self.weight(o, c, i);
                    let p = &powers[(c * k + i) * n..(c * k + i + 1) * n];
                    for (r, v) in row.iter_mut().zip(p) {
                        *r += w * v;
                    }
                }
            }
        }
        let mut out = pre.clone();
        out.data
            .iter_mut()
            .for_each(|v| *v = self.activation.apply(*v));
        Ok(LayerCache { powers, pre, out })
    }

    /// Applies the layer to `x` (channels × |K_p|).
    pub fn forward(&self, laplacian: &HodgeLaplacian, x: &Channels) -> Result<Channels> {
        Ok(self.forward_cached(laplacian, x)?.out)
    }

    /// Backward pass. Returns the parameter gradients and, if requested, the
    /// gradient with respect to the layer input.
    fn backward(
        &self,
        laplacian: &HodgeLaplacian,
        cache: &LayerCache,
        grad_out: &Channels,
        need_input_grad: bool,
    ) -> (LayerGradient, Option<Channels>) {
        let n = grad_out.len;
        let k = self.degree + 1;
        let mut dz = grad_out.clone();
        for (g, z) in dz.data.iter_mut().zip(&cache.pre.data) {
            *g *= self.activation.derivative(*z);
        }
        let mut grad = LayerGradient {
            weights: vec![0.0; self.weights.len()],
            bias: vec![0.0; self.bias.len()],
        };
        for o in 0..self.out_channels {
            let g = dz.row(o);
            grad.bias[o] = g.iter().sum();
            for c in 0..self.in_channels {
                for i in 0..k {
                    let p = &cache.powers[(c * k + i) * n..(c * k + i + 1) * n];
                    grad.weights[self.w_index(o, c, i)] = g.iter().zip(p).map(|(a, b)| a * b).sum();
                }
            }
        }
        if !need_input_grad {
            return (grad, None);
        }
        let l = laplacian.matrix();
        let mut dx = Channels::zeros(self.in_channels, n);
        let mut q = vec![0.0; n];
        let mut tmp = vec![0.0; n];
        for c in 0..self.in_channels {
            let acc = dx.row_mut(c);
            // Horner: Σ_i L^i q_i = q_0 + L(q_1 + L(q_2 + ...))
            for i in (0..k).rev() {
                q.fill(0.0);
                for o in 0..self.out_channels {
                    let w = self.weight(o, c, i);
                    for (qv, gv) in q.iter_mut().zip(dz.row(o)) {
                        *qv += w * gv;
                    }
                }
                if i + 1 < k {
                    l.apply_unchecked(acc, &mut tmp);
                    for ((a, t), qv) in acc.iter_mut().zip(&tmp).zip(&q) {
                        *a = t + qv;
                    }
                } else {
                    acc.copy_from_slice(&q);
                }
            }
        }
        (grad, Some(dx))
    }
}

struct LayerCache {
    powers: Vec<f64>,
    pre: Channels,
    out: Channels,
}

/// Gradient of the loss with respect to one layer's parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerGradient {
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

/// Per-layer gradients, aligned with [`SnnModel::layers`].
#[derive(Clone, Debug, PartialEq)]
pub struct Gradients {
    pub layers: Vec<LayerGradient>,
}

/// A stack of simplicial convolutional layers producing one output cochain.
#[derive(Clone, Debug, PartialEq)]
pub struct SnnModel {
    layers: Vec<ConvLayer>,
    dimension: usize,
}

impl SnnModel {
    pub fn new(layers: Vec<ConvLayer>, dimension: usize) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::InvalidParameter(
                "a model needs at least one layer".into(),
            ));
        }
        for w in layers.windows(2) {
            if w[0].out_channels != w[1].in_channels {
                return Err(Error::ShapeMismatch {
                    expected: format!("{} input channels", w[0].out_channels),
                    actual: format!("{}", w[1].in_channels),
                });
            }
        }
        let last = layers.last().expect("non-empty");
        if last.activation != Activation::Identity || last.out_channels != 1 {
            return Err(Error::InvalidParameter(
                "final layer must have one output channel and identity activation".into(),
            ));
        }
        if layers[0].in_channels != 1 {
            return Err(Error::InvalidParameter(
                "first layer must take one input channel".into(),
            ));
        }
        Ok(SnnModel { layers, dimension })
    }

    /// Seeded random model with channel plan `widths` (e.g. `[1, 30, 30, 1]`).
    /// Hidden layers use leaky ReLU with `slope`; the last layer is linear.
    pub fn random(
        widths: &[usize],
        degree: usize,
        slope: f64,
        dimension: usize,
        seed: u64,
    ) -> Result<Self> {
        if widths.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "layer widths need at least two entries, got {widths:?}"
            )));
        }
        let hidden = Activation::from_slope(slope)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_layers = widths.len() - 1;
        let layers = (0..n_layers)
            .map(|l| {
                let act = if l + 1 == n_layers {
                    Activation::Identity
                } else {
                    hidden
                };
                ConvLayer::random(widths[l], widths[l + 1], degree, act, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(layers, dimension)
    }

    pub fn layers(&self) -> &[ConvLayer] {
        &self.layers
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Sum of layer degrees: the model's receptive radius in simplicial distance.
    pub fn total_degree(&self) -> usize {
        self.layers.iter().map(|l| l.degree).sum()
    }

    pub fn parameter_count(&self) -> usize {
        self.layers.iter().map(ConvLayer::parameter_count).sum()
    }

    /// Output cochain for a single input cochain.
    pub fn forward(&self, laplacian: &HodgeLaplacian, input: &[f64]) -> Result<Vec<f64>> {
        let mut x = Channels::single(input.to_vec());
        for layer in &self.layers {
            x = layer.forward(laplacian, &x)?;
        }
        x.into_single()
    }

    /// Loss and exact gradients of the masked mean-L1 loss.
    pub fn gradients(
        &self,
        laplacian: &HodgeLaplacian,
        input: &[f64],
        target: &[f64],
        known: &[bool],
    ) -> Result<(f64, Gradients)> {
        let mut caches: Vec<LayerCache> = Vec::with_capacity(self.layers.len());
        let mut x = Channels::single(input.to_vec());
        for layer in &self.layers {
            let cache = layer.forward_cached(laplacian, &x)?;
            x = cache.out.clone();
            caches.push(cache);
        }
        let pred = x.row(0);
        let loss = l1_masked_loss(pred, target, known)?;
        let mut g = Channels::single(l1_masked_loss_grad(pred, target, known));
        let mut grads = Vec::with_capacity(self.layers.len());
        for (li, (layer, cache)) in self.layers.iter().zip(&caches).enumerate().rev() {
            let (lg, dx) = layer.backward(laplacian, cache, &g, li > 0);
            grads.push(lg);
            if let Some(dx) = dx {
                g = dx;
            }
        }
        grads.reverse();
        Ok((loss, Gradients { layers: grads }))
    }

    /// Text form: `snn v1`, then per layer `layer in out degree slope`, the
    /// weights in `[out][in][power]` order and the biases, one value per line.
    pub fn to_text(&self) -> String {
        let mut s = String::from("snn v1\n");
        for l in &self.layers {
            let _ = writeln!(
                s,
                "layer {} {} {} {:?}",
                l.in_channels,
                l.out_channels,
                l.degree,
                l.activation.slope()
            );
            for w in l.weights.iter().chain(&l.bias) {
                let _ = writeln!(s, "{w:?}");
            }
        }
        s
    }

    pub fn from_text(text: &str, dimension: usize) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == "snn v1" => {}
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    message: "expected header `snn v1`".into(),
                })
            }
        }
        let mut layers = Vec::new();
        while let Some((ln, line)) = lines.next() {
            let perr = |m: String| Error::Parse {
                line: ln + 1,
                message: m,
            };
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 5 || f[0] != "layer" {
                return Err(perr(format!(
                    "expected `layer in out degree slope`, got `{line}`"
                )));
            }
            let num = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| perr(format!("bad integer `{t}`")))
            };
            let (inc, outc, deg) = (num(f[1])?, num(f[2])?, num(f[3])?);
            let slope: f64 = f[4]
                .parse()
                .map_err(|_| perr(format!("bad slope `{}`", f[4])))?;
            let nw = inc * outc * (deg + 1);
            let mut vals = Vec::with_capacity(nw + outc);
            for _ in 0..nw + outc {
                let (vl, v) = lines.next().ok_or_else(|| Error::Parse {
                    line: ln + 1,
                    message: "truncated layer".into(),
                })?;
                vals.push(v.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: vl + 1,
                    message: format!("bad value `{v}`"),
                })?);
            }
            let bias = vals.split_off(nw);
            layers.push(ConvLayer::new(
                inc,
                outc,
                deg,
                vals,
                bias,
                Activation::from_slope(slope)?,
            )?);
        }
        Self::new(layers, dimension)
    }

    pub(crate) fn layers_mut(&mut self) -> &mut [ConvLayer] {
        &mut self.layers
    }
}

/// Mean absolute error over the known positions.
pub fn l1_masked_loss(prediction: &[f64], target: &[f64], known: &[bool]) -> Result<f64> {
    if prediction.len() != target.len() || target.len() != known.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} predictions, targets and mask entries", prediction.len()),
            actual: format!("{} targets, {} mask entries", target.len(), known.len()),
        });
    }
    let count = known.iter().filter(|&&k| k).count();
    if count == 0 {
        return Err(Error::InvalidParameter(
            "loss mask has no known entries".into(),
        ));
    }
    let sum: f64 = prediction
        .iter()
        .zip(target)
        .zip(known)
        .filter(|(_, &k)| k)
        .map(|((p, t), _)| (p - t).abs())
        .sum();
    Ok(sum / count as f64)
}

// Subgradient with sign(0) = 0; assumes shapes were validated by the loss.
fn l1_masked_loss_grad(prediction: &[f64], target: &[f64], known: &[bool]) -> Vec<f64> {
    let count = known.iter().filter(|&&k| k).count() as f64;
    prediction
        .iter()
        .zip(target)
        .zip(known)
        .map(|((p, t), &k)| {
            if !k || p == t {
                0.0
            } else {
                (p - t).signum() / count
            }
        })
        .collect()
}

/// Adam hyperparameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// Adam optimizer state with bias-corrected moments.
#[derive(Clone, Debug)]
pub struct AdamState {
    config: AdamConfig,
    step: u64,
    first: Vec<LayerGradient>,
    second: Vec<LayerGradient>,
}

impl AdamState {
    pub fn new(model: &SnnModel, config: AdamConfig) -> Self {
        let zeros: Vec<LayerGradient> = model
            .layers
            .iter()
            .map(|l| LayerGradient {
                weights: vec![0.0; l.weights.len()],
                bias: vec![0.0; l.bias.len()],
            })
            .collect();
        AdamState {
            config,
            step: 0,
            first: zeros.clone(),
            second: zeros,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// One Adam update of `model` with `grads`. Gradients are validated before
    /// anything is modified.
    pub fn step(&mut self, model: &mut SnnModel, grads: &Gradients) -> Result<()> {
        if grads.layers.len() != model.layers.len() || self.first.len() != model.layers.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} layer gradients", model.layers.len()),
                actual: format!("{}", grads.layers.len()),
            });
        }
        for (li, (g, l)) in grads.layers.iter().zip(&model.layers).enumerate() {
            if g.weights.len() != l.weights.len() || g.bias.len() != l.bias.len() {
                return Err(Error::ShapeMismatch {
                    expected: format!("layer {li}: {} weights", l.weights.len()),
                    actual: format!("{}", g.weights.len()),
                });
            }
            if g.weights.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteGradient(format!("layer{li}.weights")));
            }
            if g.bias.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteGradient(format!("layer{li}.bias")));
            }
        }
        self.step += 1;
        let AdamConfig {
            lr,
            beta1,
            beta2,
            eps,
        } = self.config;
        let c1 = 1.0 - beta1.powi(self.step as i32);
        let c2 = 1.0 - beta2.powi(self.step as i32);
        let update = |p: &mut [f64], g: &[f64], m: &mut [f64], v: &mut [f64]| {
            for k in 0..p.len() {
                m[k] = beta1 * m[k] + (1.0 - beta1) * g[k];
                v[k] = beta2 * v[k] + (1.0 - beta2) * g[k] * g[k];
                let m_hat = m[k] / c1;
                let v_hat = v[k] / c2;
                p[k] -= lr * m_hat / (v_hat.sqrt() + eps);
            }
        };
        for (li, layer) in model.layers_mut().iter_mut().enumerate() {
            let g = &grads.layers[li];
            let m = &mut self.first[li];
            let v = &mut self.second[li];
            update(
                &mut layer.weights,
                &g.weights,
                &mut m.weights,
                &mut v.weights,
            );
            update(&mut layer.bias, &g.bias, &mut m.bias, &mut v.bias);
        }
        Ok(())
    }
}

/// Training hyperparameters. Defaults: 1→30→30→1, degree 5, slope 0.01,
/// 1000 Adam iterations at lr 1e-3.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub iterations: usize,
    pub lr: f64,
    pub seed: u64,
    pub widths: Vec<usize>,
    pub degree: usize,
    pub leaky_slope: f64,
    /// Extension: divide the Laplacian by its largest eigenvalue before use.
    pub rescale_laplacian: bool,
    /// Extension: standardize inputs and targets by the known-entry statistics.
    pub standardize: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            iterations: 1000,
            lr: 1e-3,
            seed: 0,
            widths: vec![1, 30, 30, 1],
            degree: 5,
            leaky_slope: 0.01,
            rescale_laplacian: false,
            standardize: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidParameter(
                "iterations must be at least 1".into(),
            ));
        }
        if !(self.lr.is_finite() && self.lr > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "learning rate must be positive, got {}",
                self.lr
            )));
        }
        if self.widths.len() < 2 || self.widths[0] != 1 || *self.widths.last().unwrap() != 1 {
            return Err(Error::InvalidParameter(format!(
                "layer widths must start and end with 1, got {:?}",
                self.widths
            )));
        }
        if self.widths.contains(&0) {
            return Err(Error::InvalidParameter(
                "layer widths must be positive".into(),
            ));
        }
        Activation::from_slope(self.leaky_slope).map(|_| ())
    }

    pub fn init_model(&self, dimension: usize) -> Result<SnnModel> {
        self.validate()?;
        SnnModel::random(
            &self.widths,
            self.degree,
            self.leaky_slope,
            dimension,
            self.seed,
        )
    }
}

/// Trained model plus the loss recorded before each update.
#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub model: SnnModel,
    pub losses: Vec<f64>,
}

/// Full-batch Adam on the masked mean-L1 loss.
pub fn train(
    mut model: SnnModel,
    laplacian: &HodgeLaplacian,
    input: &[f64],
    target: &[f64],
    known: &[bool],
    config: &TrainConfig,
) -> Result<TrainOutcome> {
    config.validate()?;
    let mut adam = AdamState::new(
        &model,
        AdamConfig {
            lr: config.lr,
            ..AdamConfig::default()
        },
    );
    let mut losses = Vec::with_capacity(config.iterations);
    for it in 0..config.iterations {
        let (loss, grads) = model.gradients(laplacian, input, target, known)?;
        if !loss.is_finite() {
            return Err(Error::Diverged {
                iteration: it,
                loss,
            });
        }
        losses.push(loss);
        adam.step(&mut model, &grads)?;
    }
    Ok(TrainOutcome { model, losses })
}
