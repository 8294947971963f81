//! Stand-alone evaluator of the dispatch formulas, written against the raw
//! system file so it shares no code with the library.

use serde_json::Value;

pub struct Oracle {
    power: Vec<Value>,
    cogen: Vec<Value>,
    heat: Vec<Value>,
    loss: Option<(Vec<Vec<f64>>, Vec<f64>, f64)>,
}

fn num(v: &Value, key: &str) -> f64 {
    v.get(key).and_then(Value::as_f64).unwrap_or(0.0)
}

impl Oracle {
    pub fn from_json(text: &str) -> Oracle {
        let doc: Value = serde_json::from_str(text).expect("system file parses");
        let list = |key: &str| doc[key].as_array().cloned().unwrap_or_default();
        let loss = doc
            .get("loss")
            .filter(|l| l["enabled"].as_bool() == Some(true))
            .map(|l| {
                let sb = l.get("scale_b").and_then(Value::as_f64).unwrap_or(1.0);
                let sb0 = l.get("scale_b0").and_then(Value::as_f64).unwrap_or(1.0);
                let b = l["b"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .unwrap()
                            .iter()
                            .map(|x| x.as_f64().unwrap() * sb)
                            .collect()
                    })
                    .collect();
                let b0 = l["b0"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|x| x.as_f64().unwrap() * sb0)
                    .collect();
                (b, b0, l["b00"].as_f64().unwrap())
            });
        Oracle {
            power: list("power_units"),
            cogen: list("cogen_units"),
            heat: list("heat_units"),
            loss,
        }
    }

    pub fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], &'a [f64], &'a [f64], &'a [f64]) {
        let (np, nc) = (self.power.len(), self.cogen.len());
        (
            &x[..np],
            &x[np..np + nc],
            &x[np + nc..np + 2 * nc],
            &x[np + 2 * nc..],
        )
    }

    pub fn cost(&self, x: &[f64]) -> f64 {
        let (p, o, h, t) = self.split(x);
        let mut total = 0.0;
        for (u, &pi) in self.power.iter().zip(p) {
            let ripple = num(u, "valve_e") * (num(u, "valve_f") * (num(u, "p_min") - pi)).sin();
            total += num(u, "cost_a")
                + num(u, "cost_b") * pi
                + num(u, "cost_d") * pi.powi(2)
                + num(u, "cost_cubic") * pi.powi(3)
                + ripple.abs();
        }
        for ((u, &oj), &hj) in self.cogen.iter().zip(o).zip(h) {
            total += num(u, "cost_alpha")
                + num(u, "cost_beta") * oj
                + num(u, "cost_gamma") * oj.powi(2)
                + num(u, "cost_delta") * hj
                + num(u, "cost_eps") * hj.powi(2)
                + num(u, "cost_xi") * oj * hj;
        }
        for (u, &tk) in self.heat.iter().zip(t) {
            total +=
                num(u, "cost_phi") + num(u, "cost_eta") * tk + num(u, "cost_lambda") * tk.powi(2);
        }
        total
    }

    pub fn emission(&self, x: &[f64]) -> f64 {
        let (p, o, _, t) = self.split(x);
        let mut total = 0.0;
        for (u, &pi) in self.power.iter().zip(p) {
            total += num(u, "em_mu")
                + num(u, "em_kappa") * pi
                + num(u, "em_pi") * pi.powi(2)
                + num(u, "em_sigma") * (num(u, "em_nu") * pi).exp()
                + num(u, "em_co2_theta") * pi;
        }
        for (u, &oj) in self.cogen.iter().zip(o) {
            total += (num(u, "em_tau") + num(u, "em_co2_psi")) * oj;
        }
        for (u, &tk) in self.heat.iter().zip(t) {
            total += (num(u, "em_rho") + num(u, "em_co2_varpi")) * tk;
        }
        total
    }

    /// The three double sums, the two linear sums and the constant, each
    /// written out separately.
    pub fn loss(&self, x: &[f64]) -> f64 {
        let Some((b, b0, b00)) = &self.loss else {
            return 0.0;
        };
        let (p, o, _, _) = self.split(x);
        let np = p.len();
        let mut total = *b00;
        for i in 0..np {
            for j in 0..np {
                total += p[i] * b[i][j] * p[j];
            }
        }
        for i in 0..np {
            for j in 0..o.len() {
                total += p[i] * b[i][np + j] * o[j];
            }
        }
        for i in 0..o.len() {
            for j in 0..o.len() {
                total += o[i] * b[np + i][np + j] * o[j];
            }
        }
        for i in 0..np {
            total += b0[i] * p[i];
        }
        for j in 0..o.len() {
            total += b0[np + j] * o[j];
        }
        total
    }
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}
