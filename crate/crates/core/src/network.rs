//! Maxout layers and networks: data model, JSON format, exact evaluation.

use num::Zero;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::geometry::AffineChart;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BiasMode {
    Bias,
    NoBias,
}

impl BiasMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BiasMode::Bias => "bias",
            BiasMode::NoBias => "no_bias",
        }
    }
}

/// `x -> max_r <weights[r], x> + biases[r]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaxoutUnit {
    pub weights: Vec<Vec<Rational>>,
    pub biases: Option<Vec<Rational>>,
}

impl MaxoutUnit {
    pub fn new(weights: Vec<Vec<Rational>>, biases: Option<Vec<Rational>>) -> Self {
        MaxoutUnit { weights, biases }
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn bias(&self, r: usize) -> Rational {
        self.biases.as_ref().map(|b| b[r].clone()).unwrap_or_else(Rational::zero)
    }

    pub fn preactivation(&self, r: usize, x: &[Rational]) -> Rational {
        rational::dot(&self.weights[r], x) + self.bias(r)
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        (0..self.rank()).map(|r| self.preactivation(r, x)).max().expect("rank >= 1")
    }

    /// All preactivation indices attaining the maximum, ties included.
    pub fn argmax(&self, x: &[Rational]) -> Vec<usize> {
        let vals: Vec<Rational> = (0..self.rank()).map(|r| self.preactivation(r, x)).collect();
        let best = vals.iter().max().expect("rank >= 1");
        (0..vals.len()).filter(|&r| &vals[r] == best).collect()
    }

    /// Feature `r` as a point `(w, b)`.
    pub fn lifted(&self, r: usize) -> Vec<Rational> {
        let mut p = self.weights[r].clone();
        p.push(self.bias(r));
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Layer {
    pub input_dim: usize,
    pub bias_mode: BiasMode,
    pub units: Vec<MaxoutUnit>,
}

impl Layer {
    pub fn new(input_dim: usize, bias_mode: BiasMode, units: Vec<MaxoutUnit>) -> Result<Self> {
        let layer = Layer { input_dim, bias_mode, units };
        layer.validate("layer")?;
        Ok(layer)
    }

    pub fn width(&self) -> usize {
        self.units.len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.units.iter().map(MaxoutUnit::rank).collect()
    }

    fn validate(&self, path: &str) -> Result<()> {
        if self.input_dim == 0 {
            return Err(Error::parse(path, "input dimension must be at least 1"));
        }
        for (i, u) in self.units.iter().enumerate() {
            let up = format!("{path}.units[{i}]");
            if u.rank() == 0 {
                return Err(Error::parse(&up, "rank must be at least 1"));
            }
            for (r, w) in u.weights.iter().enumerate() {
                if w.len() != self.input_dim {
                    return Err(Error::parse(
                        format!("{up}.weights[{r}]"),
                        format!("expected {} entries, found {}", self.input_dim, w.len()),
                    ));
                }
            }
            match (&u.biases, self.bias_mode) {
                (Some(b), BiasMode::Bias) if b.len() != u.rank() => {
                    return Err(Error::parse(
                        format!("{up}.biases"),
                        format!("expected {} entries, found {}", u.rank(), b.len()),
                    ))
                }
                (Some(_), BiasMode::NoBias) => {
                    return Err(Error::parse(format!("{up}.biases"), "biases given in a no_bias layer"))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.input_dim {
            return Err(Error::Input(format!("expected a point in dimension {}, got {}", self.input_dim, x.len())));
        }
        Ok(self.units.iter().map(|u| u.evaluate(x)).collect())
    }

    pub fn activation_pattern(&self, x: &[Rational]) -> Result<Vec<Vec<usize>>> {
        if x.len() != self.input_dim {
            return Err(Error::Input(format!("expected a point in dimension {}, got {}", self.input_dim, x.len())));
        }
        Ok(self.units.iter().map(|u| u.argmax(x)).collect())
    }

    /// The layer keeping only the listed units.
    pub fn sub_layer(&self, units: &[usize]) -> Layer {
        Layer {
            input_dim: self.input_dim,
            bias_mode: self.bias_mode,
            units: units.iter().map(|&i| self.units[i].clone()).collect(),
        }
    }

    /// Pulls the layer back along `x = origin + basis^T u`.
    pub fn restrict(&self, chart: &AffineChart) -> Layer {
        let origin_zero = chart.origin.iter().all(Zero::is_zero);
        let bias_mode = if origin_zero { self.bias_mode } else { BiasMode::Bias };
        let units = self
            .units
            .iter()
            .map(|u| {
                let weights = u
                    .weights
                    .iter()
                    .map(|w| chart.basis.iter().map(|b| rational::dot(w, b)).collect())
                    .collect();
                let biases = match bias_mode {
                    BiasMode::NoBias => None,
                    BiasMode::Bias => Some((0..u.rank()).map(|r| u.preactivation(r, &chart.origin)).collect()),
                };
                MaxoutUnit { weights, biases }
            })
            .collect();
        Layer { input_dim: chart.dim(), bias_mode, units }
    }

    /// The bias-free layer on `Q^{n+1}` whose slice at last coordinate 1 is this layer.
    pub fn homogenize(&self) -> Layer {
        let units = self
            .units
            .iter()
            .map(|u| MaxoutUnit { weights: (0..u.rank()).map(|r| u.lifted(r)).collect(), biases: None })
            .collect();
        Layer { input_dim: self.input_dim + 1, bias_mode: BiasMode::NoBias, units }
    }

    pub fn to_json(&self) -> Value {
        let units: Vec<Value> = self
            .units
            .iter()
            .map(|u| {
                let mut m = Map::new();
                m.insert("weights".into(), u.weights.iter().map(|w| rational::vec_to_json(w)).collect());
                if let Some(b) = &u.biases {
                    m.insert("biases".into(), rational::vec_to_json(b));
                }
                Value::Object(m)
            })
            .collect();
        json!({ "bias_mode": self.bias_mode.as_str(), "units": units })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Network {
    pub input_dim: usize,
    pub layers: Vec<Layer>,
}

impl Network {
    pub fn new(input_dim: usize, layers: Vec<Layer>) -> Result<Self> {
        let net = Network { input_dim, layers };
        net.validate()?;
        Ok(net)
    }

    pub fn single(layer: Layer) -> Network {
        Network { input_dim: layer.input_dim, layers: vec![layer] }
    }

    pub fn widths(&self) -> Vec<usize> {
        self.layers.iter().map(Layer::width).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::parse("layers", "a network needs at least one layer"));
        }
        let mut dim = self.input_dim;
        for (l, layer) in self.layers.iter().enumerate() {
            let path = format!("layers[{l}]");
            if layer.input_dim != dim {
                return Err(Error::parse(&path, format!("expects input dimension {}, previous width is {dim}", layer.input_dim)));
            }
            layer.validate(&path)?;
            if layer.units.is_empty() {
                return Err(Error::parse(&path, "a layer needs at least one unit"));
            }
            dim = layer.width();
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        let mut v = x.to_vec();
        for layer in &self.layers {
            v = layer.evaluate(&v)?;
        }
        Ok(v)
    }

    /// Per layer, per unit argmax sets along the forward pass.
    pub fn activation_pattern(&self, x: &[Rational]) -> Result<Vec<Vec<Vec<usize>>>> {
        let mut v = x.to_vec();
        let mut out = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            out.push(layer.activation_pattern(&v)?);
            v = layer.evaluate(&v)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({ "input_dim": self.input_dim, "layers": self.layers.iter().map(Layer::to_json).collect::<Vec<_>>() })
    }
}

pub fn serialize_network(net: &Network) -> String {
    serde_json::to_string_pretty(&net.to_json()).expect("json values serialize")
}

fn scalar(v: &Value, path: &str) -> Result<Rational> {
    rational::from_json(v).map_err(|m| Error::parse(path, m))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(path, "expected an array"))
}

fn vector(v: &Value, path: &str) -> Result<Vec<Rational>> {
    array(v, path)?.iter().enumerate().map(|(i, x)| scalar(x, &format!("{path}[{i}]"))).collect()
}

fn count(v: Option<&Value>, path: &str) -> Result<usize> {
    v.and_then(Value::as_u64)
        .map(|n| n as usize)
        .ok_or_else(|| Error::parse(path, "expected a nonnegative integer"))
}

pub fn parse_network(text: &str) -> Result<Network> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::parse("$", e.to_string()))?;
    network_from_json(&doc)
}

pub fn network_from_json(doc: &Value) -> Result<Network> {
    let input_dim = count(doc.get("input_dim"), "input_dim")?;
    let layers_v = array(doc.get("layers").unwrap_or(&Value::Null), "layers")?;
    let mut dim = input_dim;
    let mut layers = Vec::new();
    for (l, lv) in layers_v.iter().enumerate() {
        let lp = format!("layers[{l}]");
        let bias_mode = match lv.get("bias_mode").and_then(Value::as_str) {
            Some("bias") => BiasMode::Bias,
            Some("no_bias") => BiasMode::NoBias,
            _ => return Err(Error::parse(format!("{lp}.bias_mode"), "expected \"bias\" or \"no_bias\"")),
        };
        let mut units = Vec::new();
        for (i, uv) in array(lv.get("units").unwrap_or(&Value::Null), &format!("{lp}.units"))?.iter().enumerate() {
            let up = format!("{lp}.units[{i}]");
            let weights = array(uv.get("weights").unwrap_or(&Value::Null), &format!("{up}.weights"))?
                .iter()
                .enumerate()
                .map(|(r, w)| vector(w, &format!("{up}.weights[{r}]")))
                .collect::<Result<Vec<_>>>()?;
            let biases = match uv.get("biases") {
                None | Some(Value::Null) => None,
                Some(b) => Some(vector(b, &format!("{up}.biases"))?),
            };
            if bias_mode == BiasMode::Bias && biases.is_none() {
                return Err(Error::parse(format!("{up}.biases"), "missing in a bias layer"));
            }
            units.push(MaxoutUnit { weights, biases });
        }
        let layer = Layer { input_dim: dim, bias_mode, units };
        dim = layer.width();
        layers.push(layer);
    }
    Network::new(input_dim, layers)
}

/// Reads `{ "points": [[...], ...] }`.
pub fn parse_points(text: &str) -> Result<Vec<Vec<Rational>>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::parse("$", e.to_string()))?;
    array(doc.get("points").unwrap_or(&Value::Null), "points")?
        .iter()
        .enumerate()
        .map(|(i, p)| vector(p, &format!("points[{i}]")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    pub(crate) fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn relu() -> Layer {
        Layer::new(1, BiasMode::Bias, vec![MaxoutUnit::new(vec![v(&[1]), v(&[0])], Some(v(&[0, 0])))]).unwrap()
    }

    #[test]
    fn relu_evaluation_and_ties() {
        let l = relu();
        assert_eq!(l.evaluate(&v(&[-2])).unwrap(), v(&[0]));
        assert_eq!(l.evaluate(&v(&[5])).unwrap(), v(&[5]));
        assert_eq!(l.activation_pattern(&v(&[0])).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn parse_reports_paths() {
        let bad = r#"{"input_dim": 2, "layers": [{"bias_mode": "bias", "units": [
            {"weights": [[1, 2, 3]], "biases": [0]}]}]}"#;
        match parse_network(bad) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "layers[0].units[0].weights[0]"),
            other => panic!("unexpected {other:?}"),
        }
        let float = r#"{"input_dim": 1, "layers": [{"bias_mode": "bias", "units": [
            {"weights": [[0.5]], "biases": [0]}]}]}"#;
        assert!(parse_network(float).is_err());
        let zero_rank = r#"{"input_dim": 1, "layers": [{"bias_mode": "bias", "units": [
            {"weights": [], "biases": []}]}]}"#;
        assert!(parse_network(zero_rank).is_err());
    }

    #[test]
    fn round_trip_and_chaining() {
        let text = r#"{"input_dim": 2, "layers": [
            {"bias_mode": "bias", "units": [{"weights": [[0, 2], [1, 1], [0, 0]], "biases": [0, 1, "2"]},
                                            {"weights": [[0, 0], [3, 2], [5, 1]], "biases": [0, 0, 0]}]},
            {"bias_mode": "no_bias", "units": [{"weights": [["1/2", -1], [0, 1]]}]}]}"#;
        let net = parse_network(text).unwrap();
        assert_eq!(net.widths(), vec![2, 1]);
        assert_eq!(parse_network(&serialize_network(&net)).unwrap(), net);
        // first layer at (0,0) gives (2, 0); second layer max(1, 0) = 1
        assert_eq!(net.evaluate(&v(&[0, 0])).unwrap(), v(&[1]));
        let broken = text.replace("\"input_dim\": 2", "\"input_dim\": 3");
        assert!(parse_network(&broken).is_err());
    }

    #[test]
    fn homogenize_and_restrict() {
        let l = relu();
        let h = l.homogenize();
        assert_eq!(h.input_dim, 2);
        assert_eq!(h.units[0].weights, vec![v(&[1, 0]), v(&[0, 0])]);
        let chart = AffineChart { origin: v(&[3]), basis: vec![v(&[2])] };
        let r = l.restrict(&chart);
        // max(3 + 2u, 0)
        assert_eq!(r.evaluate(&v(&[-1])).unwrap(), v(&[1]));
        assert_eq!(r.bias_mode, BiasMode::Bias);
    }
}
