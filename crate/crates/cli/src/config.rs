//! Run configuration schemas. Configs are strict JSON documents:
//! unknown keys are rejected so a typo cannot silently fall back to a
//! default, and every value is in the gamma-unit system of the library.

use std::path::Path;

use serde::Deserialize;

/// One sweep axis: either a fixed value or a grid specification.
#[derive(Debug, Clone)]
pub enum Axis {
    Fixed(f64),
    Grid(GridSpec),
}

/// `{"start": a, "stop": b, "points": n, "spacing": "linear"|"log"}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

impl<'de> Deserialize<'de> for Axis {
    fn deserialize<D>(d: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::Number(_) => v
                .as_f64()
                .map(Axis::Fixed)
                .ok_or_else(|| serde::de::Error::custom("axis value does not fit in an f64")),
            serde_json::Value::Object(_) => serde_json::from_value::<GridSpec>(v)
                .map(Axis::Grid)
                .map_err(serde::de::Error::custom),
            _ => Err(serde::de::Error::custom(
                "axis must be a number or a grid object {start, stop, points, spacing}",
            )),
        }
    }
}

impl Axis {
    /// Expand to the concrete grid values, in sweep order.
    pub fn values(&self, name: &str) -> Result<Vec<f64>, String> {
        match self {
            Axis::Fixed(v) => {
                if !v.is_finite() {
                    return Err(format!("axis `{name}`: fixed value must be finite, got {v}"));
                }
                Ok(vec![*v])
            }
            Axis::Grid(g) => {
                if g.points < 2 {
                    return Err(format!(
                        "axis `{name}`: a grid needs at least 2 points; \
                         use a plain number for a fixed value"
                    ));
                }
                if !g.start.is_finite() || !g.stop.is_finite() || g.start == g.stop {
                    return Err(format!(
                        "axis `{name}`: start and stop must be distinct finite values"
                    ));
                }
                if g.spacing == Spacing::Log && (g.start <= 0.0 || g.stop <= 0.0) {
                    return Err(format!("axis `{name}`: log spacing needs positive endpoints"));
                }
                let n = g.points;
                let vals = (0..n)
                    .map(|k| {
                        let f = k as f64 / (n - 1) as f64;
                        match g.spacing {
                            Spacing::Linear => g.start + (g.stop - g.start) * f,
                            Spacing::Log => {
                                (g.start.ln() + (g.stop.ln() - g.start.ln()) * f).exp()
                            }
                        }
                    })
                    .collect();
                Ok(vals)
            }
        }
    }
}

/// Config for `dimer sweep`. The quantity picks the evaluator and the
/// set of axes it accepts; providing an axis the quantity does not use
/// is an error, as is omitting a required one.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub quantity: String,
    pub zeta: Option<Axis>,
    pub theta: Option<Axis>,
    pub xi: Option<Axis>,
    pub probe: Option<Axis>,
    pub efficiency: Option<Axis>,
}

/// Config for `dimer simulate`. Every field except `model` is
/// optional; defaults sit at the reference operating point
/// (`zeta = 0.033`, `theta = pi/2`, `xi = 0.1`). Fields that a model
/// does not use must stay unset.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub model: String,
    pub zeta: Option<f64>,
    pub theta: Option<f64>,
    pub xi: Option<f64>,
    pub drive: Option<f64>,
    pub phase: Option<f64>,
    pub mismatch: Option<f64>,
    pub initial: Option<usize>,
    pub duration: Option<f64>,
    pub points: Option<usize>,
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}

pub fn load_sweep(path: &Path) -> Result<SweepConfig, String> {
    load(path)
}

pub fn load_simulate(path: &Path) -> Result<SimulateConfig, String> {
    load(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_axis_is_one_value() {
        let axis: Axis = serde_json::from_str("0.033").unwrap();
        assert_eq!(axis.values("zeta").unwrap(), vec![0.033]);
    }

    #[test]
    fn linear_grid_hits_both_endpoints() {
        let axis: Axis =
            serde_json::from_str(r#"{"start": 1.0, "stop": 2.0, "points": 5}"#).unwrap();
        let v = axis.values("zeta").unwrap();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0], 1.0);
        assert_eq!(v[4], 2.0);
        assert!((v[2] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn log_grid_has_constant_ratio() {
        let axis: Axis = serde_json::from_str(
            r#"{"start": 0.01, "stop": 0.1, "points": 4, "spacing": "log"}"#,
        )
        .unwrap();
        let v = axis.values("zeta").unwrap();
        let r = v[1] / v[0];
        for k in 2..v.len() {
            assert!((v[k] / v[k - 1] / r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_validation_rejects_bad_specs() {
        let one: Axis =
            serde_json::from_str(r#"{"start": 1.0, "stop": 2.0, "points": 1}"#).unwrap();
        assert!(one.values("zeta").unwrap_err().contains("at least 2 points"));
        let neg: Axis = serde_json::from_str(
            r#"{"start": -1.0, "stop": 2.0, "points": 3, "spacing": "log"}"#,
        )
        .unwrap();
        assert!(neg.values("zeta").unwrap_err().contains("positive"));
    }

    #[test]
    fn unknown_keys_are_rejected_at_every_level() {
        let top = serde_json::from_str::<SweepConfig>(r#"{"quantity": "rddi", "zeat": 1}"#);
        assert!(top.unwrap_err().to_string().contains("zeat"));
        let inner = serde_json::from_str::<SweepConfig>(
            r#"{"quantity": "rddi", "zeta": {"start": 1, "stop": 2, "points": 3, "step": 1}}"#,
        );
        assert!(inner.unwrap_err().to_string().contains("step"));
    }
}
