use super::network::Params;

/// Adam with bias-corrected moment estimates.
#[derive(Debug, Clone)]
pub struct Adam {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    step: i32,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

impl Adam {
    pub fn new(params: &Params, learning_rate: f64) -> Self {
        let shapes: Vec<usize> = params.tensors().iter().map(|t| t.2.len()).collect();
        Self {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-7,
            step: 0,
            m: shapes.iter().map(|n| vec![0.0; *n]).collect(),
            v: shapes.iter().map(|n| vec![0.0; *n]).collect(),
        }
    }

    pub fn step(&mut self, params: &mut Params, grad: &Params) {
        self.step += 1;
        let bc1 = 1.0 - self.beta1.powi(self.step);
        let bc2 = 1.0 - self.beta2.powi(self.step);
        let grads = grad.tensors();
        for (ti, p) in params.tensors_mut().into_iter().enumerate() {
            let g = grads[ti].2;
            let m = &mut self.m[ti];
            let v = &mut self.v[ti];
            for k in 0..p.len() {
                m[k] = self.beta1 * m[k] + (1.0 - self.beta1) * g[k];
                v[k] = self.beta2 * v[k] + (1.0 - self.beta2) * g[k] * g[k];
                let m_hat = m[k] / bc1;
                let v_hat = v[k] / bc2;
                p[k] -= self.learning_rate * m_hat / (v_hat.sqrt() + self.epsilon);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lstm::LstmConfig;

    #[test]
    fn first_step_moves_by_learning_rate() {
        let c = LstmConfig { hidden_units: 2, dense_units: 2, recurrent_layers: 1, ..Default::default() };
        let mut p = Params::zeros(&c);
        let mut g = p.zeros_like();
        g.out_b[0] = 3.0;
        g.dense_b[1] = -0.5;
        let mut opt = Adam::new(&p, 0.01);
        opt.step(&mut p, &g);
        // Bias correction makes the first update lr * sign(g).
        assert!((p.out_b[0] + 0.01).abs() < 1e-8);
        assert!((p.dense_b[1] - 0.01).abs() < 1e-8);
        assert_eq!(p.dense_b[0], 0.0);
    }
}
