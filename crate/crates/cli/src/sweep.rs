//! Parameter sweeps over dotted paths in a scenario document.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use crate::error::{CliError, CliResult};

/// Inclusive grid, linear unless `log` is set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub log: bool,
}

impl Grid {
    pub fn linear(start: f64, stop: f64, count: usize) -> Self {
        Grid {
            start,
            stop,
            count,
            log: false,
        }
    }

    pub fn log(start: f64, stop: f64, count: usize) -> Self {
        Grid {
            start,
            stop,
            count,
            log: true,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.log {
            logspace(self.start, self.stop, self.count)
        } else {
            linspace(self.start, self.stop, self.count)
        }
    }
}

/// `count` evenly spaced points with both endpoints exact; `count = 1` yields `[start]`.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| {
                if i + 1 == count {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// Geometric grid between positive endpoints.
pub fn logspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    let (a, b) = (start.ln(), stop.ln());
    linspace(a, b, count)
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            if i == 0 {
                start
            } else if i + 1 == count {
                stop
            } else {
                x.exp()
            }
        })
        .collect()
}

/// `path=start:stop:count` or `path=v1,v2,…`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub path: String,
    pub values: Vec<f64>,
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (path, grid) = s
            .split_once('=')
            .ok_or_else(|| format!("sweep `{s}` must look like key=start:stop:count"))?;
        let path = path.trim();
        if path.is_empty() || path.split('.').any(str::is_empty) {
            return Err(format!("sweep key `{path}` is not a dotted path"));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("`{t}` is not a finite number"))
        };
        let values = if grid.contains(':') {
            let parts: Vec<&str> = grid.split(':').collect();
            if parts.len() != 3 {
                return Err(format!("grid `{grid}` must be start:stop:count"));
            }
            let count: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| format!("count `{}` is not a positive integer", parts[2]))?;
            if count == 0 {
                return Err("sweep count must be at least 1".into());
            }
            linspace(num(parts[0])?, num(parts[1])?, count)
        } else {
            grid.split(',').map(num).collect::<Result<Vec<_>, _>>()?
        };
        Ok(SweepSpec {
            path: path.to_string(),
            values,
        })
    }
}

fn json_number(x: f64) -> Value {
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        Value::Number(Number::from(x as i64))
    } else {
        Number::from_f64(x)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }
}

/// Copy of `doc` with the number at `path` replaced by `x`.
///
/// Intermediate objects must exist; the leaf may be absent, in which case it is
/// created and left for schema validation to accept or reject.
pub fn set_path(doc: &Value, path: &str, x: f64) -> CliResult<Value> {
    let mut out = doc.clone();
    let keys: Vec<&str> = path.split('.').collect();
    let (leaf, parents) = keys.split_last().expect("non-empty path");
    let mut node = &mut out;
    for (i, k) in parents.iter().enumerate() {
        node = node
            .as_object_mut()
            .and_then(|m| m.get_mut(*k))
            .filter(|v| v.is_object())
            .ok_or_else(|| {
                CliError::Config(format!(
                    "sweep path `{}` does not exist",
                    keys[..=i].join(".")
                ))
            })?;
    }
    let obj = node
        .as_object_mut()
        .ok_or_else(|| CliError::Config(format!("sweep path `{path}` is not inside an object")))?;
    if let Some(old) = obj.get(*leaf) {
        if !old.is_number() {
            return Err(CliError::Config(format!(
                "sweep path `{path}` is not numeric"
            )));
        }
    }
    obj.insert(leaf.to_string(), json_number(x));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use serde_json::json;

    #[test]
    fn parses_range_and_list() {
        let s: SweepSpec = "qubit.n_g=0:1:5".parse().unwrap();
        assert_eq!(s.path, "qubit.n_g");
        assert_eq!(s.values, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let s: SweepSpec = "resonator.delta_over_g=-10,-5,5".parse().unwrap();
        assert_eq!(s.values, vec![-10.0, -5.0, 5.0]);
        let s: SweepSpec = "qubit.e_m=0.1:0.3:1".parse().unwrap();
        assert_eq!(s.values, vec![0.1]);
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "qubit.n_g",
            "=0:1:2",
            "q..x=0:1:2",
            "a=0:1",
            "a=0:1:0",
            "a=0:x:3",
            "a=nan,1",
        ] {
            assert!(bad.parse::<SweepSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn sets_nested_numbers() {
        let doc = json!({"qubit": {"e_m": 0.1}, "numerics": {"n_max": 30}});
        let v = set_path(&doc, "qubit.e_m", 0.25).unwrap();
        assert_eq!(v["qubit"]["e_m"], json!(0.25));
        let v = set_path(&doc, "numerics.n_max", 40.0).unwrap();
        assert_eq!(v["numerics"]["n_max"], json!(40));
        let v = set_path(&doc, "qubit.n_g", 0.5).unwrap();
        assert_eq!(v["qubit"]["n_g"], json!(0.5));
        assert!(set_path(&doc, "missing.x", 1.0).is_err());
        let doc = json!({"qubit_type": "transmon"});
        assert!(set_path(&doc, "qubit_type", 1.0).is_err());
    }

    #[test]
    fn log_grid_endpoints() {
        let g = Grid::log(1e-3, 10.0, 5).values();
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[4], 10.0);
        assert!((g[2] - 0.1).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn linspace_is_monotone_with_exact_ends(a in -1e3f64..1e3, d in 1e-6f64..1e3, n in 2usize..400) {
            let g = linspace(a, a + d, n);
            prop_assert_eq!(g.len(), n);
            prop_assert_eq!(g[0], a);
            prop_assert_eq!(g[n - 1], a + d);
            prop_assert!(g.windows(2).all(|w| w[1] > w[0]));
        }
    }
}
