//! Fixed-topology two-layer perceptron: `tanh` hidden layer, linear output.

use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub inputs: usize,
    pub outputs: usize,
    /// Row-major `outputs x inputs`.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Dense {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Self {
            inputs,
            outputs,
            weights: vec![0.0; inputs * outputs],
            bias: vec![0.0; outputs],
        }
    }

    /// Glorot-uniform weights, zero bias.
    pub fn glorot<R: Rng + ?Sized>(inputs: usize, outputs: usize, rng: &mut R) -> Self {
        let limit = (6.0 / (inputs + outputs) as f64).sqrt();
        Self {
            inputs,
            outputs,
            weights: (0..inputs * outputs)
                .map(|_| rng.random_range(-limit..=limit))
                .collect(),
            bias: vec![0.0; outputs],
        }
    }

    fn forward(&self, x: &[f64]) -> Vec<f64> {
        (0..self.outputs)
            .map(|o| {
                let row = &self.weights[o * self.inputs..(o + 1) * self.inputs];
                self.bias[o] + row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>()
            })
            .collect()
    }

    /// Accumulate parameter gradients into `grad` and return `dL/dx`.
    fn backward(&self, x: &[f64], d_out: &[f64], grad: &mut Dense) -> Vec<f64> {
        let mut d_in = vec![0.0; self.inputs];
        for o in 0..self.outputs {
            let g = d_out[o];
            grad.bias[o] += g;
            let base = o * self.inputs;
            for i in 0..self.inputs {
                grad.weights[base + i] += g * x[i];
                d_in[i] += g * self.weights[base + i];
            }
        }
        d_in
    }

    fn params(&self) -> impl Iterator<Item = &f64> {
        self.weights.iter().chain(&self.bias)
    }

    fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.weights.iter_mut().chain(self.bias.iter_mut())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    pub hidden: Dense,
    pub output: Dense,
}

/// Activations kept for the backward pass.
#[derive(Debug, Clone)]
pub struct Trace {
    input: Vec<f64>,
    hidden: Vec<f64>,
    pub output: Vec<f64>,
}

impl Mlp {
    pub fn new<R: Rng + ?Sized>(inputs: usize, hidden: usize, outputs: usize, rng: &mut R) -> Self {
        Self {
            hidden: Dense::glorot(inputs, hidden, rng),
            output: Dense::glorot(hidden, outputs, rng),
        }
    }

    pub fn zeros(inputs: usize, hidden: usize, outputs: usize) -> Self {
        Self {
            hidden: Dense::zeros(inputs, hidden),
            output: Dense::zeros(hidden, outputs),
        }
    }

    pub fn inputs(&self) -> usize {
        self.hidden.inputs
    }

    pub fn outputs(&self) -> usize {
        self.output.outputs
    }

    pub fn forward(&self, x: &[f64]) -> Trace {
        let hidden: Vec<f64> = self.hidden.forward(x).into_iter().map(f64::tanh).collect();
        let output = self.output.forward(&hidden);
        Trace {
            input: x.to_vec(),
            hidden,
            output,
        }
    }

    /// Accumulate `dL/dθ` for one sample into `grad`; returns `dL/dx`.
    pub fn backward(&self, trace: &Trace, d_out: &[f64], grad: &mut Mlp) -> Vec<f64> {
        let d_hidden = self.output.backward(&trace.hidden, d_out, &mut grad.output);
        let d_pre: Vec<f64> = d_hidden
            .iter()
            .zip(&trace.hidden)
            .map(|(g, h)| g * (1.0 - h * h))
            .collect();
        self.hidden.backward(&trace.input, &d_pre, &mut grad.hidden)
    }

    pub fn zero_like(&self) -> Mlp {
        Mlp::zeros(self.hidden.inputs, self.hidden.outputs, self.output.outputs)
    }

    pub fn params(&self) -> impl Iterator<Item = &f64> {
        self.hidden.params().chain(self.output.params())
    }

    pub fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.hidden.params_mut().chain(self.output.params_mut())
    }

    pub fn is_finite(&self) -> bool {
        self.params().all(|p| p.is_finite())
    }

    /// `θ += step * g`, with `g` rescaled to norm at most `max_norm`.
    /// Non-finite gradients are discarded.
    pub fn apply(&mut self, grad: &Mlp, step: f64, max_norm: f64) {
        let norm = grad.params().map(|g| g * g).sum::<f64>().sqrt();
        if !norm.is_finite() || step == 0.0 {
            return;
        }
        let scale = if norm > max_norm {
            max_norm / norm
        } else {
            1.0
        };
        for (p, g) in self.params_mut().zip(grad.params()) {
            *p += step * scale * g;
        }
    }
}
