//! Figure presets.
//!
//! Every panel is a self-contained [`PanelSpec`]. The manifest stores each spec
//! verbatim, so any CSV in a bundle can be regenerated from the manifest alone.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use majorana_readout::box_qubit::{omega_r_for_detuning, solve_tunneling_for_splitting};
use majorana_readout::ops::{EIG_RESIDUAL_TOL, HERMITIAN_TOL};
use majorana_readout::readout::{
    g_m, required_amplitude, snr_dispersive, snr_longitudinal, solve_operating_points,
    FIDELITY_TOL, MODULATION_POINTS,
};
use majorana_readout::solve::MAX_BISECTIONS;
use majorana_readout::special::erfc;
use majorana_readout::transmon::{
    omega_r_analytic, omega_r_numeric, omega_r_transmon, solve_e_m_for_splitting,
};
use majorana_readout::units::{ghz, mhz, to_mhz};
use majorana_readout::{
    chi_mb_analytic, chi_mb_numeric, chi_mt_analytic, chi_mt_numeric, chi_t_numeric,
    kerr_approximation, longitudinal_modulation, time_to_fidelity, ChargeBasis,
    DispersiveBudgetParams, Error, LongitudinalBudgetParams, MBParams, MTParams,
    ModulatedParameter, ReadoutScheme,
};

use crate::commands::run_spectrum;
use crate::config::parse_scenario;
use crate::error::{CliError, CliResult};
use crate::output::{to_json, Cell, Table};
use crate::svg::{Plot, Series};
use crate::sweep::{Grid, SweepSpec};

pub const FIGURES: [u8; 6] = [2, 3, 4, 5, 6, 7];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelNumerics {
    pub n_max: usize,
    pub guard: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelReadout {
    pub nbar_ratio: f64,
    pub kappa_over_chi: f64,
    pub target_fidelity: f64,
    pub gz_tilde_mhz: f64,
}

/// Which transition the resonator detuning is measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetuningReference {
    /// `ω_t` for the transmon and `ω_+` for the Majorana transmon.
    Own,
    /// The transmon `ω_t` for every curve.
    Transmon,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MtAxis {
    /// `2E_M/ω_t` with `ω_t = √(8E_JE_C) − E_C`.
    EmRatio { grid: Grid },
    /// `φ_x/π` at fixed `2E_M/ω_t`.
    FluxOverPi { em_ratio: f64, grid: Grid },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MbAxis {
    TOverDelta {
        grid: Grid,
    },
    /// `φ_x` in radians at fixed `t/δ`.
    Flux {
        t_over_delta: f64,
        grid: Grid,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Chi,
    ReadoutTime,
}

/// One figure panel. Frequencies in GHz, `λ` as `λ/2π` in GHz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PanelSpec {
    Spectrum {
        scenario: Value,
        n_g: Grid,
    },
    MtChiVsDetuning {
        /// `e_m` is replaced by each entry of `em_ratios`.
        qubit: MTParams,
        lambda_ghz: f64,
        em_ratios: Vec<f64>,
        delta_over_g: Grid,
        reference: DetuningReference,
        numerics: PanelNumerics,
    },
    MtChiRatio {
        qubit: MTParams,
        lambda_ghz: f64,
        delta_over_g: f64,
        axis: MtAxis,
        numerics: PanelNumerics,
    },
    MbChiVsDetuning {
        /// Tunneling is replaced by each entry of `t_over_delta`.
        qubit: MBParams,
        lambda_ghz: f64,
        t_over_delta: Vec<f64>,
        delta_over_g: Grid,
        numerics: PanelNumerics,
    },
    MbChiSweep {
        qubit: MBParams,
        lambda_ghz: f64,
        delta_over_g: f64,
        axis: MbAxis,
        numerics: PanelNumerics,
    },
    QubitFrequencySweep {
        transmon: MTParams,
        box_qubit: MBParams,
        lambda_ghz: f64,
        delta_over_g: f64,
        omega_q_ghz: Grid,
        readout: PanelReadout,
        quantity: Quantity,
        numerics: PanelNumerics,
    },
    InfidelityVsTime {
        transmon: MTParams,
        box_qubit: MBParams,
        lambda_ghz: f64,
        delta_over_g: f64,
        omega_q_ghz: f64,
        tau_us: Grid,
        readout: PanelReadout,
        numerics: PanelNumerics,
    },
    Modulation {
        qubit: MBParams,
        lambda_ghz: f64,
        parameter: ModulatedParameter,
        /// `t̄/δ` for tunneling, `φ̄_x` (rad) for flux.
        axis: Grid,
        /// `t̃/δ` for tunneling, `φ̃_x` (rad) for flux.
        mod_amplitude: f64,
        target_gz_mhz: f64,
        solve_samples: usize,
    },
}

pub struct PanelOutput {
    pub table: Table,
    pub plot: Plot,
    pub derived: BTreeMap<String, Value>,
}

fn em_for_ratio(p: &MTParams, ratio: f64) -> MTParams {
    p.with_e_m(ratio * kerr_approximation(p).omega_t / 2.0)
}

/// Converts a solver result into a cell, flagging numeric failures.
fn cell(r: majorana_readout::Result<f64>, label: &str, flags: &mut Vec<String>) -> CliResult<Cell> {
    match r {
        Ok(x) => Ok(Cell::Float(x)),
        Err(Error::Domain(m)) => Err(CliError::Config(format!("{label}: {m}"))),
        Err(e) => {
            flags.push(format!("{label}: {e}"));
            Ok(Cell::Empty)
        }
    }
}

fn rows_par<F>(xs: &[f64], f: F) -> CliResult<Vec<Vec<Cell>>>
where
    F: Fn(f64) -> CliResult<Vec<Cell>> + Sync,
{
    xs.par_iter().map(|&x| f(x)).collect()
}

fn finish_row(mut row: Vec<Cell>, flags: Vec<String>) -> Vec<Cell> {
    row.push(if flags.is_empty() {
        Cell::Empty
    } else {
        Cell::Text(flags.join("; "))
    });
    row
}

fn plot(table: &Table, x: &str, ys: &[(&str, &str)], title: &str, y_label: &str) -> Plot {
    let xs = table.floats(x);
    Plot {
        title: title.into(),
        x_label: x.into(),
        y_label: y_label.into(),
        series: ys
            .iter()
            .map(|(col, name)| Series {
                name: (*name).into(),
                points: xs
                    .iter()
                    .zip(table.floats(col))
                    .map(|(a, b)| (a.unwrap_or(f64::NAN), b.unwrap_or(f64::NAN)))
                    .collect(),
                dashed: col.contains("analytic"),
            })
            .collect(),
        ..Plot::default()
    }
}

fn mhz_of(
    r: majorana_readout::Result<majorana_readout::QubitShift>,
) -> majorana_readout::Result<f64> {
    r.map(|s| to_mhz(s.chi))
}

pub fn run_panel(spec: &PanelSpec) -> CliResult<PanelOutput> {
    match spec {
        PanelSpec::Spectrum { scenario, n_g } => spectrum_panel(scenario, n_g),
        PanelSpec::MtChiVsDetuning {
            qubit,
            lambda_ghz,
            em_ratios,
            delta_over_g,
            reference,
            numerics,
        } => mt_chi_vs_detuning(
            qubit,
            *lambda_ghz,
            em_ratios,
            delta_over_g,
            *reference,
            numerics,
        ),
        PanelSpec::MtChiRatio {
            qubit,
            lambda_ghz,
            delta_over_g,
            axis,
            numerics,
        } => mt_chi_ratio(qubit, *lambda_ghz, *delta_over_g, axis, numerics),
        PanelSpec::MbChiVsDetuning {
            qubit,
            lambda_ghz,
            t_over_delta,
            delta_over_g,
            numerics,
        } => mb_chi_vs_detuning(qubit, *lambda_ghz, t_over_delta, delta_over_g, numerics),
        PanelSpec::MbChiSweep {
            qubit,
            lambda_ghz,
            delta_over_g,
            axis,
            numerics,
        } => mb_chi_sweep(qubit, *lambda_ghz, *delta_over_g, axis, numerics),
        PanelSpec::QubitFrequencySweep {
            transmon,
            box_qubit,
            lambda_ghz,
            delta_over_g,
            omega_q_ghz,
            readout,
            quantity,
            numerics,
        } => {
            let ctx = OperatingContext {
                transmon: *transmon,
                box_qubit: *box_qubit,
                lambda: ghz(*lambda_ghz),
                delta_over_g: *delta_over_g,
                readout: *readout,
                numerics: *numerics,
            };
            qubit_frequency_sweep(&ctx, omega_q_ghz, *quantity)
        }
        PanelSpec::InfidelityVsTime {
            transmon,
            box_qubit,
            lambda_ghz,
            delta_over_g,
            omega_q_ghz,
            tau_us,
            readout,
            numerics,
        } => {
            let ctx = OperatingContext {
                transmon: *transmon,
                box_qubit: *box_qubit,
                lambda: ghz(*lambda_ghz),
                delta_over_g: *delta_over_g,
                readout: *readout,
                numerics: *numerics,
            };
            infidelity_vs_time(&ctx, *omega_q_ghz, tau_us)
        }
        PanelSpec::Modulation {
            qubit,
            lambda_ghz,
            parameter,
            axis,
            mod_amplitude,
            target_gz_mhz,
            solve_samples,
        } => modulation(
            qubit,
            ghz(*lambda_ghz),
            *parameter,
            axis,
            *mod_amplitude,
            *target_gz_mhz,
            *solve_samples,
        ),
    }
}

fn spectrum_panel(scenario: &Value, n_g: &Grid) -> CliResult<PanelOutput> {
    let sweep = SweepSpec {
        path: "qubit.n_g".into(),
        values: n_g.values(),
    };
    let table = run_spectrum(scenario, Some(&sweep))?;
    let mut series: BTreeMap<(String, i64), Vec<(f64, f64)>> = BTreeMap::new();
    for r in &table.rows {
        if let (Cell::Float(x), Cell::Text(s), Cell::Int(l), Cell::Float(y)) =
            (&r[0], &r[1], &r[2], &r[3])
        {
            series.entry((s.clone(), *l)).or_default().push((*x, *y));
        }
    }
    let plot = Plot {
        title: "spectrum vs offset charge".into(),
        x_label: "n_g".into(),
        y_label: "E/h (GHz)".into(),
        series: series
            .into_iter()
            .map(|((s, l), points)| Series {
                name: format!("{s} level {l}"),
                points,
                dashed: s.ends_with('-'),
            })
            .collect(),
        ..Plot::default()
    };
    Ok(PanelOutput {
        table,
        plot,
        derived: BTreeMap::new(),
    })
}

fn mt_chi_vs_detuning(
    qubit: &MTParams,
    lambda_ghz: f64,
    em_ratios: &[f64],
    axis: &Grid,
    reference: DetuningReference,
    n: &PanelNumerics,
) -> CliResult<PanelOutput> {
    let lam = ghz(lambda_ghz);
    let basis = ChargeBasis::new(n.n_max);
    let base = qubit.with_e_m(0.0);
    let x_name = match reference {
        DetuningReference::Own => "delta_over_g",
        DetuningReference::Transmon => "delta_t_over_g",
    };
    let mut headers = vec![x_name.to_string(), "chi_t_MHz".to_string()];
    for r in em_ratios {
        headers.push(format!("chi_mt_numeric_MHz_em{r}"));
        headers.push(format!("chi_mt_analytic_MHz_em{r}"));
    }
    headers.push("flag".into());
    let xs = axis.values();
    let rows = rows_par(&xs, |x| {
        let mut flags = Vec::new();
        let wr_t = omega_r_transmon(&base, lam, x, &basis);
        let chi_t = wr_t
            .clone()
            .and_then(|w| mhz_of(chi_t_numeric(&base, lam, w, &basis, n.guard)));
        let mut row = vec![Cell::Float(x), cell(chi_t, "chi_t", &mut flags)?];
        for &r in em_ratios {
            let p = em_for_ratio(&base, r);
            let (wn, wa) = match reference {
                DetuningReference::Own => (
                    omega_r_numeric(&p, lam, x, &basis),
                    Ok(omega_r_analytic(&p, lam, x)),
                ),
                DetuningReference::Transmon => (wr_t.clone(), wr_t.clone()),
            };
            let num = wn.and_then(|w| mhz_of(chi_mt_numeric(&p, lam, w, &basis, n.guard)));
            let ana = wa.and_then(|w| mhz_of(chi_mt_analytic(&p, lam, w, n.guard)));
            row.push(cell(num, &format!("numeric em{r}"), &mut flags)?);
            row.push(cell(ana, &format!("analytic em{r}"), &mut flags)?);
        }
        Ok(finish_row(row, flags))
    })?;
    let table = Table { headers, rows };
    let mut ys: Vec<(String, String)> = vec![("chi_t_MHz".into(), "transmon".into())];
    for r in em_ratios {
        ys.push((format!("chi_mt_numeric_MHz_em{r}"), format!("2E_M/w_t={r}")));
        ys.push((
            format!("chi_mt_analytic_MHz_em{r}"),
            format!("analytic {r}"),
        ));
    }
    let refs: Vec<(&str, &str)> = ys.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let plot = plot(
        &table,
        x_name,
        &refs,
        "dispersive shift vs detuning",
        "chi/2pi (MHz)",
    );
    Ok(PanelOutput {
        table,
        plot,
        derived: BTreeMap::new(),
    })
}

fn mt_chi_ratio(
    qubit: &MTParams,
    lambda_ghz: f64,
    delta_over_g: f64,
    axis: &MtAxis,
    n: &PanelNumerics,
) -> CliResult<PanelOutput> {
    let lam = ghz(lambda_ghz);
    let basis = ChargeBasis::new(n.n_max);
    let base = qubit.with_e_m(0.0);
    let wr_t = omega_r_transmon(&base, lam, delta_over_g, &basis)?;
    let chi_t = to_mhz(chi_t_numeric(&base, lam, wr_t, &basis, n.guard)?.chi);
    let (x_name, grid) = match axis {
        MtAxis::EmRatio { grid } => ("em_ratio", grid),
        MtAxis::FluxOverPi { grid, .. } => ("phi_x_over_pi", grid),
    };
    let xs = grid.values();
    let rows = rows_par(&xs, |x| {
        let p = match *axis {
            MtAxis::EmRatio { .. } => em_for_ratio(&base, x).with_phi(qubit.phi_x),
            MtAxis::FluxOverPi { em_ratio, .. } => em_for_ratio(&base, em_ratio).with_phi(x * PI),
        };
        let mut flags = Vec::new();
        let num = omega_r_numeric(&p, lam, delta_over_g, &basis)
            .and_then(|w| mhz_of(chi_mt_numeric(&p, lam, w, &basis, n.guard)));
        let ana = mhz_of(chi_mt_analytic(
            &p,
            lam,
            omega_r_analytic(&p, lam, delta_over_g),
            n.guard,
        ));
        let num = cell(num, "numeric", &mut flags)?;
        let ana = cell(ana, "analytic", &mut flags)?;
        let ratio = |c: &Cell| Cell::opt(c.as_f64().map(|v| (v / chi_t).abs()));
        let row = vec![
            Cell::Float(x),
            Cell::Float(chi_t),
            num.clone(),
            ana.clone(),
            ratio(&num),
            ratio(&ana),
        ];
        Ok(finish_row(row, flags))
    })?;
    let table = Table {
        headers: [
            x_name,
            "chi_t_MHz",
            "chi_mt_numeric_MHz",
            "chi_mt_analytic_MHz",
            "ratio_numeric",
            "ratio_analytic",
            "flag",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    };
    let plot = plot(
        &table,
        x_name,
        &[("ratio_numeric", "numeric"), ("ratio_analytic", "analytic")],
        "|chi_mt / chi_t|",
        "ratio",
    );
    let mut derived = BTreeMap::new();
    derived.insert("chi_t_MHz".into(), json!(chi_t));
    Ok(PanelOutput {
        table,
        plot,
        derived,
    })
}

trait WithPhi {
    fn with_phi(self, phi: f64) -> Self;
}

impl WithPhi for MTParams {
    fn with_phi(self, phi_x: f64) -> Self {
        MTParams { phi_x, ..self }
    }
}

impl WithPhi for MBParams {
    fn with_phi(self, phi_x: f64) -> Self {
        MBParams { phi_x, ..self }
    }
}

fn box_chis(
    p: &MBParams,
    lam: f64,
    delta_over_g: f64,
    guard: f64,
) -> [majorana_readout::Result<f64>; 2] {
    let wr = omega_r_for_detuning(p, 0, lam, delta_over_g);
    [
        mhz_of(chi_mb_numeric(p, lam, wr, 0, guard)),
        mhz_of(chi_mb_analytic(p, lam, wr, 0, guard)),
    ]
}

fn mb_chi_vs_detuning(
    qubit: &MBParams,
    lambda_ghz: f64,
    t_over_delta: &[f64],
    axis: &Grid,
    n: &PanelNumerics,
) -> CliResult<PanelOutput> {
    let lam = ghz(lambda_ghz);
    let delta = qubit.delta(0);
    let mut headers = vec!["delta_over_g".to_string()];
    for r in t_over_delta {
        headers.push(format!("chi_mb_numeric_MHz_t{r}"));
        headers.push(format!("chi_mb_analytic_MHz_t{r}"));
    }
    headers.push("flag".into());
    let xs = axis.values();
    let rows = rows_par(&xs, |x| {
        let mut flags = Vec::new();
        let mut row = vec![Cell::Float(x)];
        for &r in t_over_delta {
            let [num, ana] = box_chis(&qubit.with_tunneling(r * delta), lam, x, n.guard);
            row.push(cell(num, &format!("numeric t{r}"), &mut flags)?);
            row.push(cell(ana, &format!("analytic t{r}"), &mut flags)?);
        }
        Ok(finish_row(row, flags))
    })?;
    let table = Table { headers, rows };
    let mut ys = Vec::new();
    for r in t_over_delta {
        ys.push((format!("chi_mb_numeric_MHz_t{r}"), format!("t/delta={r}")));
        ys.push((format!("chi_mb_analytic_MHz_t{r}"), format!("analytic {r}")));
    }
    let refs: Vec<(&str, &str)> = ys.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let plot = plot(
        &table,
        "delta_over_g",
        &refs,
        "box dispersive shift vs detuning",
        "chi/2pi (MHz)",
    );
    Ok(PanelOutput {
        table,
        plot,
        derived: BTreeMap::new(),
    })
}

fn mb_chi_sweep(
    qubit: &MBParams,
    lambda_ghz: f64,
    delta_over_g: f64,
    axis: &MbAxis,
    n: &PanelNumerics,
) -> CliResult<PanelOutput> {
    let lam = ghz(lambda_ghz);
    let delta = qubit.delta(0);
    let (x_name, grid) = match axis {
        MbAxis::TOverDelta { grid } => ("t_over_delta", grid),
        MbAxis::Flux { grid, .. } => ("phi_x", grid),
    };
    let xs = grid.values();
    let rows = rows_par(&xs, |x| {
        let p = match *axis {
            MbAxis::TOverDelta { .. } => qubit.with_tunneling(x * delta),
            MbAxis::Flux { t_over_delta, .. } => {
                qubit.with_tunneling(t_over_delta * delta).with_phi(x)
            }
        };
        let mut flags = Vec::new();
        let [num, ana] = box_chis(&p, lam, delta_over_g, n.guard);
        let row = vec![
            Cell::Float(x),
            cell(num, "numeric", &mut flags)?,
            cell(ana, "analytic", &mut flags)?,
        ];
        Ok(finish_row(row, flags))
    })?;
    let table = Table {
        headers: [x_name, "chi_mb_numeric_MHz", "chi_mb_analytic_MHz", "flag"]
            .map(String::from)
            .to_vec(),
        rows,
    };
    let plot = plot(
        &table,
        x_name,
        &[
            ("chi_mb_numeric_MHz", "numeric"),
            ("chi_mb_analytic_MHz", "analytic"),
        ],
        "box dispersive shift",
        "chi/2pi (MHz)",
    );
    Ok(PanelOutput {
        table,
        plot,
        derived: BTreeMap::new(),
    })
}

/// Shared inputs of the qubit-frequency comparisons. `lambda` in rad/ns.
struct OperatingContext {
    transmon: MTParams,
    box_qubit: MBParams,
    lambda: f64,
    delta_over_g: f64,
    readout: PanelReadout,
    numerics: PanelNumerics,
}

/// Dispersive shifts (rad/ns) of the three qubits at qubit frequency `omega_q_ghz`.
struct OperatingPoint {
    e_m: f64,
    t: f64,
    chi_t: majorana_readout::Result<f64>,
    chi_mt: majorana_readout::Result<f64>,
    chi_mb: majorana_readout::Result<f64>,
}

impl OperatingContext {
    fn at(&self, omega_q_ghz: f64) -> majorana_readout::Result<OperatingPoint> {
        let basis = ChargeBasis::new(self.numerics.n_max);
        let (lam, x, guard) = (self.lambda, self.delta_over_g, self.numerics.guard);
        let base = self.transmon.with_e_m(0.0);
        let chi_t = omega_r_transmon(&base, lam, x, &basis)
            .and_then(|w| chi_t_numeric(&base, lam, w, &basis, guard))
            .map(|s| s.chi);
        let e_m = solve_e_m_for_splitting(&base, omega_q_ghz, &basis)?;
        let p = base.with_e_m(e_m);
        let chi_mt = omega_r_numeric(&p, lam, x, &basis)
            .and_then(|w| chi_mt_numeric(&p, lam, w, &basis, guard))
            .map(|s| s.chi);
        let t = solve_tunneling_for_splitting(&self.box_qubit, 0, omega_q_ghz)?;
        let b = self.box_qubit.with_tunneling(t);
        let chi_mb =
            chi_mb_numeric(&b, lam, omega_r_for_detuning(&b, 0, lam, x), 0, guard).map(|s| s.chi);
        Ok(OperatingPoint {
            e_m,
            t,
            chi_t,
            chi_mt,
            chi_mb,
        })
    }

    fn dispersive(&self, chi: f64) -> majorana_readout::Result<DispersiveBudgetParams> {
        DispersiveBudgetParams::from_photon_budget(
            chi,
            self.readout.kappa_over_chi,
            self.delta_over_g,
            self.readout.nbar_ratio,
        )
    }

    fn readout_time(&self, chi: f64) -> majorana_readout::Result<f64> {
        let p = self.dispersive(chi)?;
        time_to_fidelity(&ReadoutScheme::Dispersive(p), self.readout.target_fidelity)
    }
}

fn qubit_frequency_sweep(
    ctx: &OperatingContext,
    grid: &Grid,
    quantity: Quantity,
) -> CliResult<PanelOutput> {
    let xs = grid.values();
    let rows = rows_par(&xs, |w| {
        let op = ctx.at(w)?;
        let mut flags = Vec::new();
        let mut row = vec![Cell::Float(w), Cell::Float(op.e_m), Cell::Float(op.t)];
        let chis = [("transmon", op.chi_t), ("mt", op.chi_mt), ("mb", op.chi_mb)];
        for (name, c) in &chis {
            row.push(cell(c.clone().map(to_mhz), name, &mut flags)?);
        }
        for (name, c) in chis {
            let tau = c.and_then(|chi| ctx.readout_time(chi));
            row.push(cell(tau, &format!("time {name}"), &mut flags)?);
        }
        Ok(finish_row(row, flags))
    })?;
    let table = Table {
        headers: [
            "omega_q_GHz",
            "e_m_GHz",
            "t_GHz",
            "chi_t_MHz",
            "chi_mt_MHz",
            "chi_mb_MHz",
            "tau_t_us",
            "tau_mt_us",
            "tau_mb_us",
            "flag",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    };
    let mut plot = match quantity {
        Quantity::Chi => plot(
            &table,
            "omega_q_GHz",
            &[
                ("chi_mt_MHz", "Majorana transmon"),
                ("chi_mb_MHz", "Majorana box"),
                ("chi_t_MHz", "transmon"),
            ],
            "dispersive shift vs qubit frequency",
            "chi/2pi (MHz)",
        ),
        Quantity::ReadoutTime => plot(
            &table,
            "omega_q_GHz",
            &[
                ("tau_mt_us", "Majorana transmon"),
                ("tau_mb_us", "Majorana box"),
                ("tau_t_us", "transmon"),
            ],
            "readout time to target fidelity",
            "tau (us)",
        ),
    };
    if quantity == Quantity::ReadoutTime {
        plot.log_y = true;
    }
    Ok(PanelOutput {
        table,
        plot,
        derived: BTreeMap::new(),
    })
}

fn infidelity_vs_time(
    ctx: &OperatingContext,
    omega_q_ghz: f64,
    tau: &Grid,
) -> CliResult<PanelOutput> {
    let op = ctx.at(omega_q_ghz)?;
    let chi_t = op.chi_t?;
    let chi_mt = op.chi_mt?;
    let chi_mb = op.chi_mb?;
    let disp = [chi_t, chi_mt, chi_mb]
        .map(|c| ctx.dispersive(c))
        .into_iter()
        .collect::<majorana_readout::Result<Vec<_>>>()?;
    let long = LongitudinalBudgetParams {
        gz_tilde: mhz(ctx.readout.gz_tilde_mhz),
        kappa: ctx.readout.kappa_over_chi * chi_mb.abs(),
    };
    let xs = tau.values();
    let rows = rows_par(&xs, |t| {
        let mut row = vec![Cell::Float(t)];
        for p in &disp {
            row.push(Cell::Float(erfc(snr_dispersive(p, t) / 2.0)));
        }
        row.push(Cell::Float(erfc(snr_longitudinal(&long, t) / 2.0)));
        Ok(row)
    })?;
    let table = Table {
        headers: [
            "tau_us",
            "infidelity_transmon",
            "infidelity_mt",
            "infidelity_mb",
            "infidelity_mb_longitudinal",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    };
    let mut plot = plot(
        &table,
        "tau_us",
        &[
            ("infidelity_mt", "Majorana transmon"),
            ("infidelity_mb", "Majorana box"),
            ("infidelity_transmon", "transmon"),
            ("infidelity_mb_longitudinal", "box longitudinal"),
        ],
        "readout infidelity vs time",
        "1 - F",
    );
    plot.log_x = true;
    plot.log_y = true;
    let target = ctx.readout.target_fidelity;
    let mut derived = BTreeMap::new();
    derived.insert("e_m_GHz".into(), json!(op.e_m));
    derived.insert("t_GHz".into(), json!(op.t));
    for (name, chi, p) in [
        ("transmon", chi_t, &disp[0]),
        ("mt", chi_mt, &disp[1]),
        ("mb", chi_mb, &disp[2]),
    ] {
        derived.insert(format!("chi_{name}_MHz"), json!(to_mhz(chi)));
        derived.insert(format!("kappa_{name}_MHz"), json!(to_mhz(p.kappa)));
        derived.insert(format!("nbar_{name}"), json!(p.nbar()));
        derived.insert(
            format!("tau_to_target_{name}_us"),
            json!(time_to_fidelity(&ReadoutScheme::Dispersive(*p), target)?),
        );
    }
    derived.insert("nbar_mb_longitudinal".into(), json!(long.nbar()));
    derived.insert(
        "tau_to_target_mb_longitudinal_us".into(),
        json!(time_to_fidelity(
            &ReadoutScheme::Longitudinal(long),
            target
        )?),
    );
    Ok(PanelOutput {
        table,
        plot,
        derived,
    })
}

fn modulation(
    qubit: &MBParams,
    lam: f64,
    parameter: ModulatedParameter,
    axis: &Grid,
    amplitude: f64,
    target_mhz: f64,
    samples: usize,
) -> CliResult<PanelOutput> {
    let delta = qubit.delta(0);
    // Axis and amplitude in physical units (GHz for tunneling, radians for flux).
    let scale = match parameter {
        ModulatedParameter::Tunneling => delta,
        ModulatedParameter::Flux => 1.0,
    };
    let at = |x: f64| match parameter {
        ModulatedParameter::Tunneling => qubit.with_tunneling(x * scale),
        ModulatedParameter::Flux => qubit.with_phi(x),
    };
    let target = mhz(target_mhz);
    let xs = axis.values();
    let rows = rows_par(&xs, |x| {
        let p = at(x);
        let mut row = vec![Cell::Float(x), Cell::Float(to_mhz(g_m(&p, lam) / 2.0))];
        let fits = parameter == ModulatedParameter::Flux || amplitude * scale <= x * scale;
        if fits {
            let r = longitudinal_modulation(&p, lam, parameter, amplitude * scale)?;
            row.push(Cell::Float(to_mhz(r.gz_tilde)));
            row.push(Cell::Float(to_mhz(r.gz_tilde_linear)));
        } else {
            row.extend([Cell::Empty, Cell::Empty]);
        }
        let max_amp = match parameter {
            ModulatedParameter::Tunneling => x * scale,
            ModulatedParameter::Flux => PI,
        };
        let need = if max_amp > 0.0 {
            required_amplitude(&p, lam, parameter, target, max_amp)?
        } else {
            None
        };
        row.push(Cell::opt(need.map(|a| a / scale)));
        Ok(row)
    })?;
    let x_name = match parameter {
        ModulatedParameter::Tunneling => "t_over_delta",
        ModulatedParameter::Flux => "phi_x",
    };
    let table = Table {
        headers: [
            x_name,
            "gz_MHz",
            "gz_tilde_MHz",
            "gz_tilde_linear_MHz",
            "required_amplitude",
        ]
        .map(String::from)
        .to_vec(),
        rows,
    };
    let mut plot = plot(
        &table,
        x_name,
        &[
            ("gz_MHz", "g_z = g_m/2"),
            ("gz_tilde_MHz", "modulated g~_z"),
        ],
        "longitudinal coupling",
        "MHz",
    );
    plot.series.push(Series {
        name: format!("{target_mhz} MHz"),
        points: xs.iter().map(|&x| (x, target_mhz)).collect(),
        dashed: true,
    });

    let lo = match parameter {
        ModulatedParameter::Tunneling => axis.start.max(amplitude) * scale,
        ModulatedParameter::Flux => axis.start,
    };
    let hi = axis.stop * scale;
    let points = solve_operating_points(
        &at(lo / scale),
        lam,
        parameter,
        amplitude * scale,
        target,
        (lo, hi),
        samples,
    )?;
    let max_gz = table
        .floats("gz_tilde_MHz")
        .into_iter()
        .flatten()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let min_need = table
        .floats("required_amplitude")
        .into_iter()
        .flatten()
        .fold(f64::INFINITY, f64::min);
    let mut derived = BTreeMap::new();
    derived.insert(
        "operating_points".into(),
        json!(points.iter().map(|v| v / scale).collect::<Vec<_>>()),
    );
    derived.insert("max_gz_tilde_MHz".into(), json!(max_gz));
    derived.insert(
        "min_required_amplitude".into(),
        if min_need.is_finite() {
            json!(min_need)
        } else {
            Value::Null
        },
    );
    Ok(PanelOutput {
        table,
        plot,
        derived,
    })
}

fn fig_transmon() -> MTParams {
    MTParams {
        e_c: 0.25,
        e_j: 12.5,
        n_g: 0.0,
        e_m: 0.0,
        phi_x: 0.0,
    }
}

/// `δ = E_tot + ε = 5 GHz` split as `E_tot = 1`, `ε = 4`.
fn fig_box(t_over_delta: f64, phi_x: f64) -> MBParams {
    let p = MBParams {
        e_tot: 1.0,
        eps_dot: 4.0,
        n_g: 0.0,
        t_l: 0.0,
        t_r: 0.0,
        phi_x,
    };
    p.with_tunneling(t_over_delta * p.delta(0))
}

const LAMBDA_GHZ: f64 = 0.1;
const NUMERICS: PanelNumerics = PanelNumerics {
    n_max: 30,
    guard: majorana_readout::DEFAULT_GUARD,
};
const READOUT: PanelReadout = PanelReadout {
    nbar_ratio: 0.2,
    kappa_over_chi: 2.0,
    target_fidelity: 0.9999,
    gz_tilde_mhz: 10.0,
};

fn resolved(v: Value) -> Value {
    parse_scenario(&v)
        .expect("preset scenario is valid")
        .to_value()
}

fn mt_scenario(e_m: f64, levels: usize) -> Value {
    let t = fig_transmon();
    resolved(json!({
        "qubit_type": "majorana-transmon",
        "qubit": {"e_c": t.e_c, "e_j": t.e_j, "n_g": 0.0, "e_m": e_m, "phi_x": 0.0},
        "resonator": {"lambda_GHz": LAMBDA_GHZ, "delta_over_g": -10.0},
        "numerics": {"levels": levels},
    }))
}

fn box_scenario(p: MBParams) -> Value {
    resolved(json!({
        "qubit_type": "majorana-box",
        "qubit": {"e_tot": p.e_tot, "eps_dot": p.eps_dot, "n_g": 0.0, "t_l": p.t_l, "t_r": p.t_r, "phi_x": p.phi_x},
        "resonator": {"lambda_GHz": LAMBDA_GHZ, "delta_over_g": -10.0},
        "numerics": {"blocks": [-1, 2]},
    }))
}

/// Panels of one figure as `(file stem, spec)`.
pub fn presets(figure: u8) -> CliResult<Vec<(String, PanelSpec)>> {
    let omega_t = kerr_approximation(&fig_transmon()).omega_t;
    let panels: Vec<(&str, PanelSpec)> = match figure {
        2 => vec![
            (
                "a",
                PanelSpec::Spectrum {
                    scenario: mt_scenario(0.0, 3),
                    n_g: Grid::linear(-1.0, 1.0, 201),
                },
            ),
            (
                "b",
                PanelSpec::Spectrum {
                    scenario: mt_scenario(0.05 * omega_t, 3),
                    n_g: Grid::linear(-1.0, 1.0, 201),
                },
            ),
        ],
        3 => {
            let chi_vs = |reference, grid| PanelSpec::MtChiVsDetuning {
                qubit: fig_transmon(),
                lambda_ghz: LAMBDA_GHZ,
                em_ratios: vec![0.1, 0.2, 0.5],
                delta_over_g: grid,
                reference,
                numerics: NUMERICS,
            };
            let ratio = |axis| PanelSpec::MtChiRatio {
                qubit: fig_transmon(),
                lambda_ghz: LAMBDA_GHZ,
                delta_over_g: -10.0,
                axis,
                numerics: NUMERICS,
            };
            vec![
                (
                    "a",
                    chi_vs(DetuningReference::Own, Grid::linear(-20.0, 20.0, 200)),
                ),
                (
                    "b",
                    chi_vs(DetuningReference::Transmon, Grid::linear(-3.0, 3.0, 300)),
                ),
                (
                    "c",
                    ratio(MtAxis::EmRatio {
                        grid: Grid::linear(0.01, 0.5, 50),
                    }),
                ),
                (
                    "d",
                    ratio(MtAxis::FluxOverPi {
                        em_ratio: 0.2,
                        grid: Grid::linear(0.0, 2.0, 101),
                    }),
                ),
            ]
        }
        4 => vec![
            (
                "a",
                PanelSpec::Spectrum {
                    scenario: box_scenario(fig_box(0.0, PI / 2.0)),
                    n_g: Grid::linear(-1.0, 1.0, 201),
                },
            ),
            (
                "b",
                PanelSpec::Spectrum {
                    scenario: box_scenario(fig_box(0.2, PI / 2.0)),
                    n_g: Grid::linear(-1.0, 1.0, 201),
                },
            ),
        ],
        5 => {
            let sweep = |axis, qubit| PanelSpec::MbChiSweep {
                qubit,
                lambda_ghz: LAMBDA_GHZ,
                delta_over_g: -10.0,
                axis,
                numerics: NUMERICS,
            };
            vec![
                (
                    "a",
                    PanelSpec::MbChiVsDetuning {
                        qubit: fig_box(0.0, 0.0),
                        lambda_ghz: LAMBDA_GHZ,
                        t_over_delta: vec![0.1, 0.2, 0.4],
                        delta_over_g: Grid::linear(-20.0, 20.0, 200),
                        numerics: NUMERICS,
                    },
                ),
                (
                    "b",
                    sweep(
                        MbAxis::TOverDelta {
                            grid: Grid::linear(0.05, 0.5, 46),
                        },
                        fig_box(0.0, 0.0),
                    ),
                ),
                (
                    "c",
                    sweep(
                        MbAxis::Flux {
                            t_over_delta: 0.2,
                            grid: Grid::linear(0.0, 2.0 * PI, 101),
                        },
                        fig_box(0.0, 0.0),
                    ),
                ),
            ]
        }
        6 => {
            let sweep = |quantity| PanelSpec::QubitFrequencySweep {
                transmon: fig_transmon(),
                box_qubit: fig_box(0.0, 0.0),
                lambda_ghz: LAMBDA_GHZ,
                delta_over_g: -10.0,
                omega_q_ghz: Grid::linear(0.25, 2.0, 36),
                readout: READOUT,
                quantity,
                numerics: NUMERICS,
            };
            vec![
                ("a", sweep(Quantity::Chi)),
                (
                    "b",
                    PanelSpec::InfidelityVsTime {
                        transmon: fig_transmon(),
                        box_qubit: fig_box(0.0, 0.0),
                        lambda_ghz: LAMBDA_GHZ,
                        delta_over_g: -10.0,
                        omega_q_ghz: 1.0,
                        tau_us: Grid::log(1e-3, 10.0, 121),
                        readout: READOUT,
                        numerics: NUMERICS,
                    },
                ),
                ("c", sweep(Quantity::ReadoutTime)),
            ]
        }
        7 => vec![
            (
                "a",
                PanelSpec::Modulation {
                    qubit: fig_box(0.0, 0.0),
                    lambda_ghz: LAMBDA_GHZ,
                    parameter: ModulatedParameter::Tunneling,
                    axis: Grid::linear(0.0, 1.0, 101),
                    mod_amplitude: 0.1,
                    target_gz_mhz: 10.0,
                    solve_samples: 200,
                },
            ),
            (
                "b",
                PanelSpec::Modulation {
                    qubit: fig_box(0.5, 0.0),
                    lambda_ghz: LAMBDA_GHZ,
                    parameter: ModulatedParameter::Flux,
                    axis: Grid::linear(0.0, 2.0 * PI, 101),
                    mod_amplitude: PI / 10.0,
                    target_gz_mhz: 10.0,
                    solve_samples: 200,
                },
            ),
        ],
        _ => {
            return Err(CliError::Config(format!(
                "unknown figure {figure}; choose one of 2, 3, 4, 5, 6, 7"
            )))
        }
    };
    Ok(panels
        .into_iter()
        .map(|(p, s)| (format!("fig{figure}{p}"), s))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub hermiticity_abs: f64,
    pub eigen_residual_rel: f64,
    pub bisection_max_iterations: usize,
    pub fidelity_abs: f64,
    pub modulation_points: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity_abs: HERMITIAN_TOL,
            eigen_residual_rel: EIG_RESIDUAL_TOL,
            bisection_max_iterations: MAX_BISECTIONS,
            fidelity_abs: FIDELITY_TOL,
            modulation_points: MODULATION_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestPanel {
    pub name: String,
    pub csv: String,
    pub svg: String,
    pub status: String,
    pub spec: PanelSpec,
    pub derived: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub figure: u8,
    pub generator: String,
    pub units: BTreeMap<String, String>,
    pub tolerances: Tolerances,
    pub panels: Vec<ManifestPanel>,
}

fn units() -> BTreeMap<String, String> {
    [
        ("energy", "GHz (E/h)"),
        ("frequency", "GHz (omega/2pi)"),
        ("shift", "MHz (chi/2pi)"),
        ("phase", "rad"),
        ("time", "us"),
    ]
    .into_iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect()
}

/// Write the bundle of `figure` into `<out>/fig<figure>/` and return the manifest path.
///
/// Failing panels are recorded in the manifest; the remaining panels are still written.
pub fn reproduce(figure: u8, out: &Path) -> CliResult<PathBuf> {
    let dir = out.join(format!("fig{figure}"));
    std::fs::create_dir_all(&dir)?;
    let mut panels = Vec::new();
    let mut failures = Vec::new();
    for (name, spec) in presets(figure)? {
        let csv = format!("{name}.csv");
        let svg = format!("{name}.svg");
        let (status, derived) = match run_panel(&spec) {
            Ok(o) => {
                o.table.write_csv(std::fs::File::create(dir.join(&csv))?)?;
                std::fs::write(dir.join(&svg), o.plot.render())?;
                ("ok".to_string(), o.derived)
            }
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                (format!("failed: {e}"), BTreeMap::new())
            }
        };
        panels.push(ManifestPanel {
            name,
            csv,
            svg,
            status,
            spec,
            derived,
        });
    }
    let manifest = Manifest {
        figure,
        generator: format!("majorana-readout {}", env!("CARGO_PKG_VERSION")),
        units: units(),
        tolerances: Tolerances::default(),
        panels,
    };
    let path = dir.join("manifest.json");
    std::fs::write(&path, to_json(&manifest))?;
    if failures.is_empty() {
        Ok(path)
    } else {
        Err(CliError::Numeric(failures.join("; ")))
    }
}
