//! Maps a scenario onto the core solvers and fixes the detuning conventions.
//!
//! `Δ/g` is measured from the exact `ω_t` for the transmon, from `ω_+` for the
//! Majorana transmon (exact for the numeric method, Kerr for the analytic one) and
//! from `f_+` with `g = |g_+|` for the box qubit.

use serde::{Deserialize, Serialize};

use majorana_readout::box_qubit::{block_solution, omega_r_for_detuning};
use majorana_readout::transmon::{
    converge, g_t, omega_mt_numeric, omega_plus_numeric, omega_r_analytic, omega_r_numeric,
    omega_r_transmon, omega_t_numeric, Convergence,
};
use majorana_readout::units::ghz;
use majorana_readout::{
    box_couplings, chi_mb_analytic, chi_mb_numeric, chi_mt_analytic, chi_mt_numeric, chi_t_numeric,
    ChargeBasis, CouplingGeometry, MBParams, MTParams, QubitShift, Result,
};

use crate::config::{NumericsConfig, QubitConfig, ScenarioConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Numeric,
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Qubit {
    Transmon(MTParams),
    MajoranaTransmon(MTParams),
    MajoranaBox {
        p: MBParams,
        block: i64,
        geometry: CouplingGeometry,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    DeltaOverG(f64),
    /// Resonator frequency in rad/ns.
    OmegaR(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model {
    pub qubit: Qubit,
    /// `λ` in rad/ns.
    pub lambda: f64,
    pub placement: Placement,
    pub numerics: NumericsConfig,
}

impl Model {
    pub fn from_config(cfg: &ScenarioConfig) -> Self {
        let qubit = match cfg.qubit {
            QubitConfig::Transmon(_) => Qubit::Transmon(cfg.qubit.mt_params().expect("transmon")),
            QubitConfig::MajoranaTransmon(_) => {
                Qubit::MajoranaTransmon(cfg.qubit.mt_params().expect("transmon"))
            }
            QubitConfig::MajoranaBox(b) => Qubit::MajoranaBox {
                p: cfg.qubit.mb_params().expect("box"),
                block: b.block,
                geometry: b.geometry,
            },
        };
        let placement = match (cfg.resonator.delta_over_g, cfg.resonator.omega_r_ghz) {
            (Some(x), _) => Placement::DeltaOverG(x),
            (None, Some(w)) => Placement::OmegaR(ghz(w)),
            (None, None) => unreachable!("validated config has a resonator placement"),
        };
        Model {
            qubit,
            lambda: ghz(cfg.resonator.lambda_ghz),
            placement,
            numerics: cfg.numerics,
        }
    }

    pub fn basis(&self) -> ChargeBasis {
        ChargeBasis::new(self.numerics.n_max)
    }

    /// Signed coupling constant after the box geometry is applied.
    pub fn lambda_eff(&self) -> f64 {
        match self.qubit {
            Qubit::MajoranaBox { geometry, .. } => geometry.lambda(self.lambda),
            _ => self.lambda,
        }
    }

    pub fn omega_r(&self, method: Method, basis: &ChargeBasis) -> Result<f64> {
        let x = match self.placement {
            Placement::OmegaR(w) => return Ok(w),
            Placement::DeltaOverG(x) => x,
        };
        match self.qubit {
            Qubit::Transmon(p) => omega_r_transmon(&p, self.lambda, x, basis),
            Qubit::MajoranaTransmon(p) => match method {
                Method::Numeric => omega_r_numeric(&p, self.lambda, x, basis),
                Method::Analytic => Ok(omega_r_analytic(&p, self.lambda, x)),
            },
            Qubit::MajoranaBox { p, block, .. } => {
                Ok(omega_r_for_detuning(&p, block, self.lambda_eff(), x))
            }
        }
    }

    fn chi_on(&self, method: Method, basis: &ChargeBasis) -> Result<Option<QubitShift>> {
        let guard = self.numerics.guard;
        let wr = self.omega_r(method, basis)?;
        let lam = self.lambda_eff();
        Ok(match (self.qubit, method) {
            (Qubit::Transmon(p), Method::Numeric) => {
                Some(chi_t_numeric(&p, lam, wr, basis, guard)?)
            }
            (Qubit::Transmon(_), Method::Analytic) => None,
            (Qubit::MajoranaTransmon(p), Method::Numeric) => {
                Some(chi_mt_numeric(&p, lam, wr, basis, guard)?)
            }
            (Qubit::MajoranaTransmon(p), Method::Analytic) => {
                Some(chi_mt_analytic(&p, lam, wr, guard)?)
            }
            (Qubit::MajoranaBox { p, block, .. }, Method::Numeric) => {
                Some(chi_mb_numeric(&p, lam, wr, block, guard)?)
            }
            (Qubit::MajoranaBox { p, block, .. }, Method::Analytic) => {
                Some(chi_mb_analytic(&p, lam, wr, block, guard)?)
            }
        })
    }

    /// Qubit-state dispersive shift; `None` when `method` does not apply to this qubit.
    pub fn chi(&self, method: Method) -> Result<Option<QubitShift>> {
        let charge_model = !matches!(self.qubit, Qubit::MajoranaBox { .. });
        if self.numerics.converge && charge_model && method == Method::Numeric {
            let c = Convergence {
                n_start: self.numerics.n_max,
                rel_tol: self.numerics.rel_tol,
                abs_tol: 1e-12,
                n_cap: self.numerics.n_cap,
            };
            let (basis, _) = converge(&c, |b| {
                Ok(vec![self.chi_on(method, b)?.map_or(0.0, |s| s.chi)])
            })?;
            return self.chi_on(method, &basis);
        }
        self.chi_on(method, &self.basis())
    }

    /// Qubit frequency `ω_q` in rad/ns.
    pub fn qubit_frequency(&self) -> Result<f64> {
        let b = self.basis();
        match self.qubit {
            Qubit::Transmon(p) => omega_t_numeric(&p, &b),
            Qubit::MajoranaTransmon(p) => omega_mt_numeric(&p, &b),
            Qubit::MajoranaBox { p, block, .. } => Ok(ghz(block_solution(&p, block).eps_m.abs())),
        }
    }

    /// Coupling `g` (rad/ns) that normalizes the detuning.
    pub fn coupling(&self) -> f64 {
        match self.qubit {
            Qubit::Transmon(p) | Qubit::MajoranaTransmon(p) => g_t(&p, self.lambda),
            Qubit::MajoranaBox { p, block, .. } => {
                box_couplings(&p, block, self.lambda_eff()).g_plus.norm()
            }
        }
    }

    /// `Δ/g` of the numeric method, derived from `ω_r` when that was given instead.
    pub fn delta_over_g(&self) -> Result<f64> {
        let w = match self.placement {
            Placement::DeltaOverG(x) => return Ok(x),
            Placement::OmegaR(w) => w,
        };
        let b = self.basis();
        let transition = match self.qubit {
            Qubit::Transmon(p) => omega_t_numeric(&p, &b)?,
            Qubit::MajoranaTransmon(p) => omega_plus_numeric(&p, &b)?,
            Qubit::MajoranaBox { p, block, .. } => ghz(block_solution(&p, block).f_plus),
        };
        Ok((transition - w) / self.coupling())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_scenario;
    use majorana_readout::units::to_mhz;
    use serde_json::json;

    #[test]
    fn omega_r_input_reproduces_delta_over_g() {
        let base = json!({
            "qubit_type": "majorana-box",
            "qubit": {"e_tot": 1.0, "eps_dot": 4.0, "t_l": 1.0, "t_r": 1.0, "phi_x": std::f64::consts::FRAC_PI_2},
            "resonator": {"lambda_GHz": 0.1, "delta_over_g": -10.0}
        });
        let m = Model::from_config(&parse_scenario(&base).unwrap());
        let wr = m.omega_r(Method::Numeric, &m.basis()).unwrap();
        let chi = m.chi(Method::Numeric).unwrap().unwrap().chi;
        let mut alt = base.clone();
        alt["resonator"] =
            json!({"lambda_GHz": 0.1, "omega_r_GHz": majorana_readout::units::to_ghz(wr)});
        let m2 = Model::from_config(&parse_scenario(&alt).unwrap());
        assert!((m2.delta_over_g().unwrap() + 10.0).abs() < 1e-9);
        let chi2 = m2.chi(Method::Numeric).unwrap().unwrap().chi;
        assert!((chi - chi2).abs() < 1e-12 * chi.abs());
        assert!((to_mhz(chi) + 0.80).abs() < 0.01);
    }

    #[test]
    fn transmon_has_no_analytic_shift() {
        let v = json!({
            "qubit_type": "transmon",
            "qubit": {"e_c": 0.25, "e_j": 12.5},
            "resonator": {"lambda_GHz": 0.1, "delta_over_g": -10.0}
        });
        let m = Model::from_config(&parse_scenario(&v).unwrap());
        assert!(m.chi(Method::Analytic).unwrap().is_none());
        let chi = m.chi(Method::Numeric).unwrap().unwrap().chi;
        // Independent dense diagonalization of 4E_C k^2 - E_J cos(phi) with k in [-30, 30]
        // and coupling lambda * 2k, summed over all levels.
        assert!(
            (to_mhz(chi) + 3.441_469_437_656_665).abs() < 1e-9,
            "{}",
            to_mhz(chi)
        );
    }

    #[test]
    fn converged_cutoff_matches_fixed() {
        let v = json!({
            "qubit_type": "majorana-transmon",
            "qubit": {"e_c": 0.25, "e_j": 12.5, "e_m": 0.475},
            "resonator": {"lambda_GHz": 0.1, "delta_over_g": -10.0},
            "numerics": {"converge": true}
        });
        let m = Model::from_config(&parse_scenario(&v).unwrap());
        let a = m.chi(Method::Numeric).unwrap().unwrap().chi;
        let mut fixed = m;
        fixed.numerics.converge = false;
        let b = fixed.chi(Method::Numeric).unwrap().unwrap().chi;
        assert!((a - b).abs() < 1e-6 * b.abs());
    }
}
