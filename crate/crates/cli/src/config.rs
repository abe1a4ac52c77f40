//! JSON scenario configuration.
//!
//! Units are fixed: energies and frequencies in GHz (`E/h`, `ω/2π`), phases in
//! radians, times in µs. Readout rates carry an explicit `_MHz` suffix.
//!
//! ```json
//! {
//!   "qubit_type": "majorana-box",
//!   "qubit": { "e_tot": 1.0, "eps_dot": 4.0, "t_l": 1.0, "t_r": 1.0, "phi_x": 0.0 },
//!   "resonator": { "lambda_GHz": 0.1, "delta_over_g": -10.0 },
//!   "numerics": { "n_max": 30 },
//!   "readout": { "nbar_ratio": 0.2, "target_fidelity": 0.9999 }
//! }
//! ```

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use majorana_readout::{CouplingGeometry, MBParams, MTParams};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QubitType {
    Transmon,
    MajoranaTransmon,
    MajoranaBox,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmonConfig {
    pub e_c: f64,
    pub e_j: f64,
    #[serde(default)]
    pub n_g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MajoranaTransmonConfig {
    pub e_c: f64,
    pub e_j: f64,
    #[serde(default)]
    pub n_g: f64,
    pub e_m: f64,
    #[serde(default)]
    pub phi_x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxConfig {
    pub e_tot: f64,
    pub eps_dot: f64,
    #[serde(default)]
    pub n_g: f64,
    pub t_l: f64,
    pub t_r: f64,
    #[serde(default)]
    pub phi_x: f64,
    /// Island charge block used for χ and readout.
    #[serde(default)]
    pub block: i64,
    #[serde(default)]
    pub geometry: CouplingGeometry,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum QubitConfig {
    Transmon(TransmonConfig),
    MajoranaTransmon(MajoranaTransmonConfig),
    MajoranaBox(BoxConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResonatorConfig {
    #[serde(rename = "lambda_GHz")]
    pub lambda_ghz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_over_g: Option<f64>,
    #[serde(
        rename = "omega_r_GHz",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub omega_r_ghz: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsConfig {
    /// Charge cutoff of the transmon models.
    pub n_max: usize,
    /// Levels per sector in spectrum output.
    pub levels: usize,
    /// Smallest allowed `|Δ|/|g|` before a pair counts as resonant.
    pub guard: f64,
    /// Inclusive island-charge window of box spectra.
    pub blocks: [i64; 2],
    /// Double `n_max` until χ changes by less than `rel_tol`.
    pub converge: bool,
    pub rel_tol: f64,
    pub n_cap: usize,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        NumericsConfig {
            n_max: 30,
            levels: 4,
            guard: majorana_readout::DEFAULT_GUARD,
            blocks: [-1, 2],
            converge: false,
            rel_tol: 1e-8,
            n_cap: 240,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReadoutConfig {
    /// `κ/|χ|`; the SNR expression assumes 2.
    pub kappa_over_chi: f64,
    /// Explicit linewidth `κ/2π`, overriding `kappa_over_chi`.
    #[serde(rename = "kappa_MHz", skip_serializing_if = "Option::is_none")]
    pub kappa_mhz: Option<f64>,
    /// `n̄/n_crit`.
    pub nbar_ratio: f64,
    #[serde(rename = "gz_tilde_MHz")]
    pub gz_tilde_mhz: f64,
    pub target_fidelity: f64,
    /// Explicit integration times; otherwise a log grid from the three fields below.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_us: Option<Vec<f64>>,
    pub tau_min_us: f64,
    pub tau_max_us: f64,
    pub tau_points: usize,
}

impl Default for ReadoutConfig {
    fn default() -> Self {
        ReadoutConfig {
            kappa_over_chi: 2.0,
            kappa_mhz: None,
            nbar_ratio: 0.2,
            gz_tilde_mhz: 10.0,
            target_fidelity: 0.9999,
            tau_us: None,
            tau_min_us: 1e-3,
            tau_max_us: 10.0,
            tau_points: 41,
        }
    }
}

impl ReadoutConfig {
    pub fn tau_grid(&self) -> Vec<f64> {
        match &self.tau_us {
            Some(t) => t.clone(),
            None => crate::sweep::logspace(self.tau_min_us, self.tau_max_us, self.tau_points),
        }
    }
}

/// A validated scenario with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub qubit_type: QubitType,
    pub qubit: QubitConfig,
    pub resonator: ResonatorConfig,
    pub numerics: NumericsConfig,
    pub readout: ReadoutConfig,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    qubit_type: QubitType,
    qubit: Value,
    resonator: ResonatorConfig,
    #[serde(default)]
    numerics: NumericsConfig,
    #[serde(default)]
    readout: ReadoutConfig,
}

fn decode<T: DeserializeOwned>(v: Value, prefix: &str) -> CliResult<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix.is_empty(), inner == ".") {
            (true, true) => "<root>".to_string(),
            (true, false) => inner,
            (false, true) => prefix.to_string(),
            (false, false) => format!("{prefix}.{inner}"),
        };
        CliError::Config(format!("{path}: {}", e.inner()))
    })
}

fn check(ok: bool, path: &str, msg: &str) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(format!("{path}: {msg}")))
    }
}

fn in_domain(r: majorana_readout::Result<()>, path: &str) -> CliResult<()> {
    r.map_err(|e| CliError::Config(format!("{path}: {e}")))
}

impl QubitConfig {
    pub fn mt_params(&self) -> Option<MTParams> {
        match *self {
            QubitConfig::Transmon(t) => Some(MTParams {
                e_c: t.e_c,
                e_j: t.e_j,
                n_g: t.n_g,
                e_m: 0.0,
                phi_x: 0.0,
            }),
            QubitConfig::MajoranaTransmon(m) => Some(MTParams {
                e_c: m.e_c,
                e_j: m.e_j,
                n_g: m.n_g,
                e_m: m.e_m,
                phi_x: m.phi_x,
            }),
            QubitConfig::MajoranaBox(_) => None,
        }
    }

    pub fn mb_params(&self) -> Option<MBParams> {
        match *self {
            QubitConfig::MajoranaBox(b) => Some(MBParams {
                e_tot: b.e_tot,
                eps_dot: b.eps_dot,
                n_g: b.n_g,
                t_l: b.t_l,
                t_r: b.t_r,
                phi_x: b.phi_x,
            }),
            _ => None,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> CliResult<()> {
        match &self.qubit {
            QubitConfig::MajoranaBox(_) => {
                in_domain(self.qubit.mb_params().expect("box").validate(), "qubit")?
            }
            _ => in_domain(
                self.qubit.mt_params().expect("transmon").validate(),
                "qubit",
            )?,
        }
        let r = &self.resonator;
        check(
            r.lambda_ghz.is_finite() && r.lambda_ghz >= 0.0,
            "resonator.lambda_GHz",
            "must be finite and non-negative",
        )?;
        check(
            r.delta_over_g.is_some() != r.omega_r_ghz.is_some(),
            "resonator",
            "specify exactly one of delta_over_g and omega_r_GHz",
        )?;
        if let Some(x) = r.delta_over_g {
            check(x.is_finite(), "resonator.delta_over_g", "must be finite")?;
        }
        if let Some(w) = r.omega_r_ghz {
            check(
                w.is_finite() && w > 0.0,
                "resonator.omega_r_GHz",
                "must be positive",
            )?;
        }
        let n = &self.numerics;
        check(n.n_max >= 1, "numerics.n_max", "must be at least 1")?;
        check(
            n.n_cap >= n.n_max,
            "numerics.n_cap",
            "must be at least n_max",
        )?;
        check(n.levels >= 1, "numerics.levels", "must be at least 1")?;
        check(
            n.levels <= 2 * n.n_max + 1,
            "numerics.levels",
            "exceeds the basis dimension 2 n_max + 1",
        )?;
        check(n.guard > 0.0, "numerics.guard", "must be positive")?;
        check(
            n.blocks[0] <= n.blocks[1],
            "numerics.blocks",
            "must be ordered [lo, hi]",
        )?;
        check(n.rel_tol > 0.0, "numerics.rel_tol", "must be positive")?;
        let o = &self.readout;
        check(
            o.kappa_over_chi > 0.0,
            "readout.kappa_over_chi",
            "must be positive",
        )?;
        if let Some(k) = o.kappa_mhz {
            check(k > 0.0, "readout.kappa_MHz", "must be positive")?;
        }
        check(
            o.nbar_ratio >= 0.0,
            "readout.nbar_ratio",
            "must be non-negative",
        )?;
        check(
            o.gz_tilde_mhz >= 0.0,
            "readout.gz_tilde_MHz",
            "must be non-negative",
        )?;
        check(
            o.target_fidelity > 0.0 && o.target_fidelity < 1.0,
            "readout.target_fidelity",
            "must lie in (0, 1)",
        )?;
        match &o.tau_us {
            Some(t) => check(
                !t.is_empty() && t.iter().all(|x| x.is_finite() && *x >= 0.0),
                "readout.tau_us",
                "must be a non-empty list of non-negative times",
            )?,
            None => {
                check(
                    o.tau_min_us > 0.0 && o.tau_max_us >= o.tau_min_us,
                    "readout.tau_min_us",
                    "needs 0 < tau_min_us <= tau_max_us",
                )?;
                check(
                    o.tau_points >= 1,
                    "readout.tau_points",
                    "must be at least 1",
                )?;
            }
        }
        Ok(())
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

/// Decode and validate a scenario from its JSON value.
pub fn parse_scenario(v: &Value) -> CliResult<ScenarioConfig> {
    let raw: RawScenario = decode(v.clone(), "")?;
    let qubit = match raw.qubit_type {
        QubitType::Transmon => QubitConfig::Transmon(decode(raw.qubit, "qubit")?),
        QubitType::MajoranaTransmon => QubitConfig::MajoranaTransmon(decode(raw.qubit, "qubit")?),
        QubitType::MajoranaBox => QubitConfig::MajoranaBox(decode(raw.qubit, "qubit")?),
    };
    let cfg = ScenarioConfig {
        qubit_type: raw.qubit_type,
        qubit,
        resonator: raw.resonator,
        numerics: raw.numerics,
        readout: raw.readout,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Read a JSON document from disk without interpreting it.
pub fn load_json(path: &std::path::Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn box_json() -> Value {
        json!({
            "qubit_type": "majorana-box",
            "qubit": {"e_tot": 1.0, "eps_dot": 4.0, "t_l": 1.0, "t_r": 1.0},
            "resonator": {"lambda_GHz": 0.1, "delta_over_g": -10.0}
        })
    }

    #[test]
    fn defaults_are_filled() {
        let c = parse_scenario(&box_json()).unwrap();
        assert_eq!(c.numerics, NumericsConfig::default());
        assert_eq!(c.readout.kappa_over_chi, 2.0);
        let echoed = c.to_value();
        assert_eq!(echoed["qubit"]["block"], json!(0));
        assert_eq!(echoed["qubit"]["geometry"], json!("island"));
        assert_eq!(parse_scenario(&echoed).unwrap(), c);
    }

    #[test]
    fn errors_carry_field_paths() {
        let mut v = box_json();
        v["qubit"]["t_l"] = json!("one");
        let e = parse_scenario(&v).unwrap_err().to_string();
        assert!(e.contains("qubit.t_l"), "{e}");

        let mut v = box_json();
        v["numerics"] = json!({"n_maxx": 3});
        let e = parse_scenario(&v).unwrap_err().to_string();
        assert!(e.contains("numerics"), "{e}");

        let mut v = box_json();
        v["resonator"]["omega_r_GHz"] = json!(6.0);
        let e = parse_scenario(&v).unwrap_err().to_string();
        assert!(e.contains("exactly one"), "{e}");

        let mut v = box_json();
        v["qubit"]["t_l"] = json!(-1.0);
        assert!(matches!(parse_scenario(&v), Err(CliError::Config(_))));
    }

    #[test]
    fn transmon_rejects_majorana_fields() {
        let v = json!({
            "qubit_type": "transmon",
            "qubit": {"e_c": 0.25, "e_j": 12.5, "e_m": 0.1},
            "resonator": {"lambda_GHz": 0.1, "delta_over_g": -10.0}
        });
        let e = parse_scenario(&v).unwrap_err().to_string();
        assert!(e.contains("e_m"), "{e}");
    }
}
