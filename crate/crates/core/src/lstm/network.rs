//! Parameters, batched forward pass and backpropagation through time.
//!
//! Gate blocks are laid out `[input | forget | cell | output]` along the
//! `4 * hidden` axis of every recurrent weight matrix.

use ndarray::{s, Array1, Array2, ArrayView2, Axis, Zip};
use rand::Rng;

use super::config::LstmConfig;
use super::loss::{huber, huber_grad};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LstmLayer {
    /// `(input_dim, 4 * hidden)`
    pub w_input: Array2<f64>,
    /// `(hidden, 4 * hidden)`
    pub w_recurrent: Array2<f64>,
    /// `4 * hidden`
    pub bias: Array1<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub layers: Vec<LstmLayer>,
    /// `(hidden, dense)`
    pub dense_w: Array2<f64>,
    pub dense_b: Array1<f64>,
    /// `dense`
    pub out_w: Array1<f64>,
    /// single output bias
    pub out_b: Array1<f64>,
}

impl Params {
    pub fn zeros(config: &LstmConfig) -> Self {
        let h = config.hidden_units;
        let d = config.dense_units;
        Self {
            layers: (0..config.recurrent_layers)
                .map(|l| {
                    let input = if l == 0 { 1 } else { h };
                    LstmLayer {
                        w_input: Array2::zeros((input, 4 * h)),
                        w_recurrent: Array2::zeros((h, 4 * h)),
                        bias: Array1::zeros(4 * h),
                    }
                })
                .collect(),
            dense_w: Array2::zeros((h, d)),
            dense_b: Array1::zeros(d),
            out_w: Array1::zeros(d),
            out_b: Array1::zeros(1),
        }
    }

    /// Uniform `(-s, s)` initialization with `s = 1 / sqrt(fan_in)`, where
    /// `fan_in` counts every input feeding a unit of the tensor's layer.
    pub fn init<R: Rng>(config: &LstmConfig, rng: &mut R) -> Self {
        let mut p = Self::zeros(config);
        let h = config.hidden_units;
        let d = config.dense_units;
        let mut fill = |data: &mut [f64], fan_in: usize| {
            let s = 1.0 / (fan_in as f64).sqrt();
            for v in data {
                *v = rng.gen_range(-s..s);
            }
        };
        for (l, layer) in p.layers.iter_mut().enumerate() {
            let fan_in = if l == 0 { 1 + h } else { 2 * h };
            fill(layer.w_input.as_slice_mut().expect("standard layout"), fan_in);
            fill(layer.w_recurrent.as_slice_mut().expect("standard layout"), fan_in);
            fill(layer.bias.as_slice_mut().expect("standard layout"), fan_in);
        }
        fill(p.dense_w.as_slice_mut().expect("standard layout"), h);
        fill(p.dense_b.as_slice_mut().expect("standard layout"), h);
        fill(p.out_w.as_slice_mut().expect("standard layout"), d);
        fill(p.out_b.as_slice_mut().expect("standard layout"), d);
        p
    }

    pub fn hidden_units(&self) -> usize {
        self.layers[0].w_recurrent.nrows()
    }

    pub fn dense_units(&self) -> usize {
        self.dense_w.ncols()
    }

    /// Named tensors with shapes, in a fixed order.
    pub fn tensors(&self) -> Vec<(String, Vec<usize>, &[f64])> {
        let mut out = Vec::new();
        for (l, layer) in self.layers.iter().enumerate() {
            out.push((format!("lstm.{l}.w_input"), layer.w_input.shape().to_vec(), slice(layer.w_input.as_slice())));
            out.push((format!("lstm.{l}.w_recurrent"), layer.w_recurrent.shape().to_vec(), slice(layer.w_recurrent.as_slice())));
            out.push((format!("lstm.{l}.bias"), layer.bias.shape().to_vec(), slice(layer.bias.as_slice())));
        }
        out.push(("dense.w".into(), self.dense_w.shape().to_vec(), slice(self.dense_w.as_slice())));
        out.push(("dense.b".into(), self.dense_b.shape().to_vec(), slice(self.dense_b.as_slice())));
        out.push(("output.w".into(), self.out_w.shape().to_vec(), slice(self.out_w.as_slice())));
        out.push(("output.b".into(), self.out_b.shape().to_vec(), slice(self.out_b.as_slice())));
        out
    }

    /// Mutable views of the tensors, in the order of [`Params::tensors`].
    pub fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out: Vec<&mut [f64]> = Vec::new();
        for layer in &mut self.layers {
            out.push(layer.w_input.as_slice_mut().expect("standard layout"));
            out.push(layer.w_recurrent.as_slice_mut().expect("standard layout"));
            out.push(layer.bias.as_slice_mut().expect("standard layout"));
        }
        out.push(self.dense_w.as_slice_mut().expect("standard layout"));
        out.push(self.dense_b.as_slice_mut().expect("standard layout"));
        out.push(self.out_w.as_slice_mut().expect("standard layout"));
        out.push(self.out_b.as_slice_mut().expect("standard layout"));
        out
    }

    pub fn count(&self) -> usize {
        self.tensors().iter().map(|t| t.2.len()).sum()
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            layers: self
                .layers
                .iter()
                .map(|l| LstmLayer {
                    w_input: Array2::zeros(l.w_input.raw_dim()),
                    w_recurrent: Array2::zeros(l.w_recurrent.raw_dim()),
                    bias: Array1::zeros(l.bias.raw_dim()),
                })
                .collect(),
            dense_w: Array2::zeros(self.dense_w.raw_dim()),
            dense_b: Array1::zeros(self.dense_b.raw_dim()),
            out_w: Array1::zeros(self.out_w.raw_dim()),
            out_b: Array1::zeros(1),
        }
    }

    /// True if every tensor matches the shapes implied by `config`.
    pub fn matches(&self, config: &LstmConfig) -> bool {
        let expected = Self::zeros(config);
        let a = self.tensors();
        let b = expected.tensors();
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.1 == y.1)
    }
}

fn slice(s: Option<&[f64]>) -> &[f64] {
    s.expect("standard layout")
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Activations of one recurrent layer at one time step.
struct StepCache {
    input: Array2<f64>,
    i: Array2<f64>,
    f: Array2<f64>,
    g: Array2<f64>,
    o: Array2<f64>,
    c: Array2<f64>,
    tanh_c: Array2<f64>,
    h: Array2<f64>,
}

struct LayerCache {
    steps: Vec<StepCache>,
    /// Inverted-dropout masks applied to this layer's outputs: one per step
    /// for sequence layers, a single one for the last layer.
    masks: Vec<Option<Array2<f64>>>,
}

/// Everything the backward pass needs from a forward pass.
pub struct ForwardCache {
    layers: Vec<LayerCache>,
    dense_in: Array2<f64>,
    dense_pre: Array2<f64>,
    dense_out: Array2<f64>,
    pub output: Array1<f64>,
}

fn dropout_mask<R: Rng>(shape: (usize, usize), rate: f64, rng: &mut R) -> Array2<f64> {
    let keep = 1.0 / (1.0 - rate);
    Array2::from_shape_simple_fn(shape, || if rng.gen::<f64>() < rate { 0.0 } else { keep })
}

fn layer_forward(layer: &LstmLayer, inputs: &[Array2<f64>]) -> Vec<StepCache> {
    let batch = inputs[0].nrows();
    let h = layer.w_recurrent.nrows();
    let mut h_prev = Array2::<f64>::zeros((batch, h));
    let mut c_prev = Array2::<f64>::zeros((batch, h));
    let mut steps = Vec::with_capacity(inputs.len());
    for x in inputs {
        let mut z = x.dot(&layer.w_input);
        z += &h_prev.dot(&layer.w_recurrent);
        z += &layer.bias;
        let i = z.slice(s![.., 0..h]).mapv(sigmoid);
        let f = z.slice(s![.., h..2 * h]).mapv(sigmoid);
        let g = z.slice(s![.., 2 * h..3 * h]).mapv(f64::tanh);
        let o = z.slice(s![.., 3 * h..4 * h]).mapv(sigmoid);
        let c = &f * &c_prev + &i * &g;
        let tanh_c = c.mapv(f64::tanh);
        let h_t = &o * &tanh_c;
        h_prev = h_t.clone();
        c_prev = c.clone();
        steps.push(StepCache {
            input: x.clone(),
            i,
            f,
            g,
            o,
            c,
            tanh_c,
            h: h_t,
        });
    }
    steps
}

/// Forward pass over a batch of windows `(batch, lookback)`.
///
/// Dropout is applied only when `dropout` carries an RNG; rates of zero
/// draw nothing from it.
pub fn forward<R: Rng>(
    params: &Params,
    windows: ArrayView2<'_, f64>,
    dropout_rate: f64,
    mut dropout: Option<&mut R>,
) -> ForwardCache {
    let (batch, steps) = windows.dim();
    let mut inputs: Vec<Array2<f64>> = (0..steps)
        .map(|t| windows.column(t).to_owned().insert_axis(Axis(1)))
        .collect();
    let n_layers = params.layers.len();
    let mut layers = Vec::with_capacity(n_layers);
    let mut last_hidden = Array2::zeros((batch, params.hidden_units()));
    for (l, layer) in params.layers.iter().enumerate() {
        let cache = layer_forward(layer, &inputs);
        let last = l + 1 == n_layers;
        let mut masks = Vec::new();
        let mut draw = |shape| match dropout.as_deref_mut() {
            Some(rng) if dropout_rate > 0.0 => Some(dropout_mask(shape, dropout_rate, rng)),
            _ => None,
        };
        if last {
            let h_final = &cache.last().expect("lookback >= 1").h;
            let mask = draw(h_final.dim());
            last_hidden = match &mask {
                Some(m) => h_final * m,
                None => h_final.clone(),
            };
            masks.push(mask);
        } else {
            inputs = cache
                .iter()
                .map(|step| {
                    let mask = draw(step.h.dim());
                    let out = match &mask {
                        Some(m) => &step.h * m,
                        None => step.h.clone(),
                    };
                    masks.push(mask);
                    out
                })
                .collect();
        }
        layers.push(LayerCache { steps: cache, masks });
    }
    let dense_pre = last_hidden.dot(&params.dense_w) + &params.dense_b;
    let dense_out = dense_pre.mapv(|v| v.max(0.0));
    let output = (dense_out.dot(&params.out_w) + params.out_b[0]).mapv(sigmoid);
    ForwardCache {
        layers,
        dense_in: last_hidden,
        dense_pre,
        dense_out,
        output,
    }
}

/// Gradients of one recurrent layer given the loss gradient on each of its
/// step outputs; returns the gradient on each step input.
fn layer_backward(
    layer: &LstmLayer,
    steps: &[StepCache],
    dh_out: &[Array2<f64>],
    grad: &mut LstmLayer,
) -> Vec<Array2<f64>> {
    let h = layer.w_recurrent.nrows();
    let batch = steps[0].h.nrows();
    let mut dh_next = Array2::<f64>::zeros((batch, h));
    let mut dc_next = Array2::<f64>::zeros((batch, h));
    let mut dx = vec![Array2::zeros((0, 0)); steps.len()];
    let zeros = Array2::<f64>::zeros((batch, h));
    for t in (0..steps.len()).rev() {
        let st = &steps[t];
        let (c_prev, h_prev) = if t == 0 {
            (&zeros, &zeros)
        } else {
            (&steps[t - 1].c, &steps[t - 1].h)
        };
        let dh = &dh_out[t] + &dh_next;
        let mut dz = Array2::<f64>::zeros((batch, 4 * h));
        let mut dc = dc_next.clone();
        Zip::from(&mut dc)
            .and(&dh)
            .and(&st.o)
            .and(&st.tanh_c)
            .for_each(|dc, &dh, &o, &tc| *dc += dh * o * (1.0 - tc * tc));
        {
            let (mut dzi, rest) = dz.view_mut().split_at(Axis(1), h);
            let (mut dzf, rest) = rest.split_at(Axis(1), h);
            let (mut dzg, mut dzo) = rest.split_at(Axis(1), h);
            Zip::from(&mut dzi).and(&dc).and(&st.i).and(&st.g).for_each(|d, &dc, &i, &g| *d = dc * g * i * (1.0 - i));
            Zip::from(&mut dzf).and(&dc).and(&st.f).and(c_prev).for_each(|d, &dc, &f, &cp| *d = dc * cp * f * (1.0 - f));
            Zip::from(&mut dzg).and(&dc).and(&st.i).and(&st.g).for_each(|d, &dc, &i, &g| *d = dc * i * (1.0 - g * g));
            Zip::from(&mut dzo).and(&dh).and(&st.o).and(&st.tanh_c).for_each(|d, &dh, &o, &tc| *d = dh * tc * o * (1.0 - o));
        }
        grad.w_input += &st.input.t().dot(&dz);
        grad.w_recurrent += &h_prev.t().dot(&dz);
        grad.bias += &dz.sum_axis(Axis(0));
        dx[t] = dz.dot(&layer.w_input.t());
        dh_next = dz.dot(&layer.w_recurrent.t());
        dc_next = dc * &st.f;
    }
    dx
}

/// Mean Huber loss and mean absolute error of `output` against `targets`.
pub fn batch_loss(output: &Array1<f64>, targets: &[f64], delta: f64) -> (f64, f64) {
    let n = targets.len() as f64;
    let (loss, mae) = output.iter().zip(targets).fold((0.0, 0.0), |(l, m), (y, t)| {
        let r = y - t;
        (l + huber(r, delta), m + r.abs())
    });
    (loss / n, mae / n)
}

/// Mean Huber loss over the batch and its gradient for every parameter.
pub fn backward(params: &Params, cache: &ForwardCache, targets: &[f64], delta: f64) -> Params {
    let batch = targets.len();
    let mut grad = params.zeros_like();
    // d loss / d pre-sigmoid output
    let dz_out = Array1::from_iter(cache.output.iter().zip(targets).map(|(y, t)| {
        huber_grad(y - t, delta) / batch as f64 * y * (1.0 - y)
    }));
    grad.out_w.assign(&cache.dense_out.t().dot(&dz_out));
    grad.out_b[0] = dz_out.sum();
    let mut d_dense = dz_out
        .view()
        .insert_axis(Axis(1))
        .dot(&params.out_w.view().insert_axis(Axis(0)));
    Zip::from(&mut d_dense).and(&cache.dense_pre).for_each(|d, &a| {
        if a <= 0.0 {
            *d = 0.0;
        }
    });
    grad.dense_w.assign(&cache.dense_in.t().dot(&d_dense));
    grad.dense_b.assign(&d_dense.sum_axis(Axis(0)));
    let mut dh_last = d_dense.dot(&params.dense_w.t());

    let n_layers = params.layers.len();
    let mut dh_seq: Vec<Array2<f64>> = Vec::new();
    for l in (0..n_layers).rev() {
        let layer_cache = &cache.layers[l];
        let steps = &layer_cache.steps;
        let h = params.hidden_units();
        let zeros = Array2::<f64>::zeros((batch, h));
        if l + 1 == n_layers {
            if let Some(m) = &layer_cache.masks[0] {
                dh_last *= m;
            }
            dh_seq = vec![zeros; steps.len()];
            *dh_seq.last_mut().expect("non-empty") = dh_last.clone();
        } else {
            for (d, mask) in dh_seq.iter_mut().zip(&layer_cache.masks) {
                if let Some(m) = mask {
                    *d *= m;
                }
            }
        }
        let dx = layer_backward(&params.layers[l], steps, &dh_seq, &mut grad.layers[l]);
        dh_seq = dx;
    }
    grad
}

/// Loss, mean absolute error and gradients for one batch.
pub fn loss_and_gradients<R: Rng>(
    params: &Params,
    windows: ArrayView2<'_, f64>,
    targets: &[f64],
    config: &LstmConfig,
    dropout: Option<&mut R>,
) -> Result<(f64, f64, Params)> {
    if windows.nrows() != targets.len() {
        return Err(Error::Shape(format!(
            "{} windows but {} targets",
            windows.nrows(),
            targets.len()
        )));
    }
    let cache = forward(params, windows, config.dropout_rate, dropout);
    let (loss, mae) = batch_loss(&cache.output, targets, config.huber_delta);
    let grad = backward(params, &cache, targets, config.huber_delta);
    Ok((loss, mae, grad))
}
