//! Small dense networks in f64 with explicit forward caches and backprop.

use serde::{Deserialize, Serialize};

use crate::rng::SeededRng;

/// Fully connected net: tanh hidden layers, linear output.
/// `weights[l]` is `sizes[l+1] x sizes[l]`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub sizes: Vec<usize>,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

/// Per-sample forward cache: inputs of every layer plus the output.
pub struct MlpCache {
    /// `layer_inputs[l]` is the activation entering layer `l`.
    pub layer_inputs: Vec<Vec<f64>>,
    pub output: Vec<f64>,
}

/// Gradient accumulator with the same shape as the net.
#[derive(Debug, Clone)]
pub struct MlpGrads {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl Mlp {
    /// Xavier-uniform initialization from the given stream.
    pub fn init(sizes: &[usize], rng: &mut SeededRng) -> Self {
        assert!(sizes.len() >= 2);
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for l in 0..sizes.len() - 1 {
            let (fan_in, fan_out) = (sizes[l], sizes[l + 1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            weights.push((0..fan_in * fan_out).map(|_| rng.uniform_range(-limit, limit)).collect());
            biases.push(vec![0.0; fan_out]);
        }
        Mlp { sizes: sizes.to_vec(), weights, biases }
    }

    pub fn zeros_like(&self) -> MlpGrads {
        MlpGrads {
            weights: self.weights.iter().map(|w| vec![0.0; w.len()]).collect(),
            biases: self.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
        }
    }

    pub fn n_layers(&self) -> usize {
        self.weights.len()
    }

    pub fn param_count(&self) -> usize {
        self.weights.iter().map(Vec::len).sum::<usize>()
            + self.biases.iter().map(Vec::len).sum::<usize>()
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        self.forward_cached(x).output
    }

    pub fn forward_cached(&self, x: &[f64]) -> MlpCache {
        debug_assert_eq!(x.len(), self.sizes[0]);
        let last = self.n_layers() - 1;
        let mut layer_inputs = Vec::with_capacity(self.n_layers());
        let mut cur = x.to_vec();
        for l in 0..self.n_layers() {
            layer_inputs.push(cur.clone());
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let mut next = self.biases[l].clone();
            let w = &self.weights[l];
            for o in 0..n_out {
                let row = &w[o * n_in..(o + 1) * n_in];
                let mut acc = 0.0;
                for i in 0..n_in {
                    acc += row[i] * cur[i];
                }
                next[o] += acc;
            }
            if l != last {
                for v in &mut next {
                    *v = v.tanh();
                }
            }
            cur = next;
        }
        MlpCache { layer_inputs, output: cur }
    }

    /// Accumulate gradients for one sample given `d loss / d output`.
    pub fn backward(&self, cache: &MlpCache, dout: &[f64], grads: &mut MlpGrads) {
        let last = self.n_layers() - 1;
        let mut delta = dout.to_vec();
        for l in (0..self.n_layers()).rev() {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            // through the tanh of this layer's output (output layer is linear)
            if l != last {
                // recompute this layer's post-activation from the next layer's input
                let act = &cache.layer_inputs[l + 1];
                for (d, a) in delta.iter_mut().zip(act) {
                    *d *= 1.0 - a * a;
                }
            }
            let input = &cache.layer_inputs[l];
            let gw = &mut grads.weights[l];
            for o in 0..n_out {
                grads.biases[l][o] += delta[o];
                let row = &mut gw[o * n_in..(o + 1) * n_in];
                for i in 0..n_in {
                    row[i] += delta[o] * input[i];
                }
            }
            if l > 0 {
                let w = &self.weights[l];
                let mut prev = vec![0.0; n_in];
                for o in 0..n_out {
                    let row = &w[o * n_in..(o + 1) * n_in];
                    for i in 0..n_in {
                        prev[i] += delta[o] * row[i];
                    }
                }
                delta = prev;
            }
        }
    }

    pub fn push_flat(&self, out: &mut Vec<f64>) {
        for w in &self.weights {
            out.extend_from_slice(w);
        }
        for b in &self.biases {
            out.extend_from_slice(b);
        }
    }

    pub fn load_flat(&mut self, src: &mut impl Iterator<Item = f64>) {
        for w in &mut self.weights {
            for v in w.iter_mut() {
                *v = src.next().expect("flat parameter vector too short");
            }
        }
        for b in &mut self.biases {
            for v in b.iter_mut() {
                *v = src.next().expect("flat parameter vector too short");
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().flatten().all(|v| v.is_finite())
            && self.biases.iter().flatten().all(|v| v.is_finite())
    }
}

impl MlpGrads {
    pub fn push_flat(&self, out: &mut Vec<f64>) {
        for w in &self.weights {
            out.extend_from_slice(w);
        }
        for b in &self.biases {
            out.extend_from_slice(b);
        }
    }

    pub fn scale(&mut self, c: f64) {
        for w in &mut self.weights {
            for v in w.iter_mut() {
                *v *= c;
            }
        }
        for b in &mut self.biases {
            for v in b.iter_mut() {
                *v *= c;
            }
        }
    }
}
