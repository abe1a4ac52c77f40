//! `spectrum`, `chi` and `readout` subcommands on a scenario document.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use majorana_readout::readout::{fidelity_from_snr, time_to_fidelity, ReadoutScheme};
use majorana_readout::units::{mhz, to_ghz, to_mhz};
use majorana_readout::{
    mb_spectrum_vs_ng, mt_spectrum_vs_ng, DispersiveBudgetParams, Error, LongitudinalBudgetParams,
    SpectrumRow,
};

use crate::config::{parse_scenario, ScenarioConfig};
use crate::error::{CliError, CliResult};
use crate::model::{Method, Model, Qubit};
use crate::output::{Cell, Table};
use crate::sweep::{set_path, SweepSpec};

/// Resolve every sweep point into a validated scenario, in grid order.
pub fn resolve_points(
    doc: &Value,
    sweep: Option<&SweepSpec>,
) -> CliResult<Vec<(Option<f64>, ScenarioConfig)>> {
    match sweep {
        None => Ok(vec![(None, parse_scenario(doc)?)]),
        Some(s) => s
            .values
            .iter()
            .map(|&x| {
                let cfg = parse_scenario(&set_path(doc, &s.path, x)?)
                    .map_err(|e| CliError::Config(format!("sweep {} = {x}: {e}", s.path)))?;
                Ok((Some(x), cfg))
            })
            .collect(),
    }
}

/// Spectrum rows for one scenario at its own `n_g`.
pub fn spectrum_rows(cfg: &ScenarioConfig) -> majorana_readout::Result<Vec<SpectrumRow>> {
    let m = Model::from_config(cfg);
    let n = &cfg.numerics;
    match m.qubit {
        Qubit::Transmon(p) => {
            let rows = mt_spectrum_vs_ng(&p, &[p.n_g], n.levels, &m.basis())?;
            Ok(rows
                .into_iter()
                .filter(|r| r.sector == "+")
                .map(|r| SpectrumRow {
                    sector: "t".into(),
                    ..r
                })
                .collect())
        }
        Qubit::MajoranaTransmon(p) => mt_spectrum_vs_ng(&p, &[p.n_g], n.levels, &m.basis()),
        Qubit::MajoranaBox { p, .. } => mb_spectrum_vs_ng(&p, &[p.n_g], n.blocks[0]..=n.blocks[1]),
    }
}

/// Columns `n_g, sector_label, level_index, freq_GHz`; only `qubit.n_g` may be swept.
pub fn run_spectrum(doc: &Value, sweep: Option<&SweepSpec>) -> CliResult<Table> {
    if let Some(s) = sweep {
        if s.path != "qubit.n_g" {
            return Err(CliError::Config(format!(
                "spectrum sweeps qubit.n_g only, got `{}`",
                s.path
            )));
        }
    }
    let points = resolve_points(doc, sweep)?;
    let blocks: Vec<Vec<SpectrumRow>> = points
        .par_iter()
        .map(|(_, cfg)| spectrum_rows(cfg))
        .collect::<majorana_readout::Result<_>>()?;
    let mut t = Table::new(["n_g", "sector_label", "level_index", "freq_GHz"]);
    for r in blocks.into_iter().flatten() {
        t.rows.push(vec![
            Cell::Float(r.n_g),
            Cell::Text(r.sector),
            Cell::Int(r.level as i64),
            Cell::Float(r.freq_ghz),
        ]);
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodSel {
    Numeric,
    Analytic,
    Both,
}

impl MethodSel {
    fn methods(self) -> &'static [Method] {
        match self {
            MethodSel::Numeric => &[Method::Numeric],
            MethodSel::Analytic => &[Method::Analytic],
            MethodSel::Both => &[Method::Numeric, Method::Analytic],
        }
    }
}

/// Result of a `chi` run: the table plus per-row warnings.
#[derive(Debug, Clone)]
pub struct ChiRun {
    pub table: Table,
    pub warnings: Vec<String>,
    pub failed_rows: usize,
}

/// Columns `sweep_value, chi_numeric_MHz, chi_analytic_MHz, resonance_margin, flag`.
///
/// Resonances and convergence failures blank the affected cells and fill `flag`.
pub fn run_chi(doc: &Value, sweep: Option<&SweepSpec>, method: MethodSel) -> CliResult<ChiRun> {
    let points = resolve_points(doc, sweep)?;
    let is_transmon = matches!(Model::from_config(&points[0].1).qubit, Qubit::Transmon(_));
    if is_transmon && method == MethodSel::Analytic {
        return Err(CliError::config(
            "the conventional transmon has no analytic shift; use --method numeric",
        ));
    }
    let methods = method.methods();
    let results: Vec<Vec<majorana_readout::Result<Option<majorana_readout::QubitShift>>>> = points
        .par_iter()
        .map(|(_, cfg)| {
            let m = Model::from_config(cfg);
            methods.iter().map(|&k| m.chi(k)).collect()
        })
        .collect();

    let mut headers = vec!["sweep_value".to_string()];
    for k in methods {
        headers.push(match k {
            Method::Numeric => "chi_numeric_MHz".into(),
            Method::Analytic => "chi_analytic_MHz".into(),
        });
    }
    headers.push("resonance_margin".into());
    headers.push("flag".into());
    let mut table = Table {
        headers,
        rows: Vec::new(),
    };
    let mut warnings = Vec::new();
    let mut failed_rows = 0;
    for ((x, _), res) in points.iter().zip(results) {
        let mut row = vec![Cell::opt(*x)];
        let mut flags = Vec::new();
        let mut margin = f64::INFINITY;
        let mut any_ok = false;
        for (k, r) in methods.iter().zip(res) {
            match r {
                Ok(Some(s)) => {
                    any_ok = true;
                    margin = margin.min(s.resonance_margin);
                    row.push(Cell::Float(to_mhz(s.chi)));
                }
                Ok(None) => row.push(Cell::Empty),
                Err(Error::Domain(msg)) => return Err(CliError::Config(msg)),
                Err(e) => {
                    flags.push(format!("{}: {e}", method_name(*k)));
                    row.push(Cell::Empty);
                }
            }
        }
        row.push(if margin.is_finite() {
            Cell::Float(margin)
        } else {
            Cell::Empty
        });
        if !any_ok {
            failed_rows += 1;
        }
        if !flags.is_empty() {
            let at = x.map_or(String::new(), |v| format!(" at sweep_value {v}"));
            warnings.push(format!("{}{at}", flags.join("; ")));
        }
        row.push(if flags.is_empty() {
            Cell::Empty
        } else {
            Cell::Text(flags.join("; "))
        });
        table.rows.push(row);
    }
    Ok(ChiRun {
        table,
        warnings,
        failed_rows,
    })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Numeric => "numeric",
        Method::Analytic => "analytic",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeSel {
    Dispersive,
    Longitudinal,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReadoutReport {
    pub config: Value,
    pub scheme: SchemeSel,
    #[serde(rename = "qubit_frequency_GHz")]
    pub qubit_frequency_ghz: f64,
    #[serde(rename = "chi_MHz")]
    pub chi_mhz: f64,
    #[serde(rename = "kappa_MHz")]
    pub kappa_mhz: f64,
    pub nbar: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_crit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(rename = "drive_amp_MHz")]
    pub drive_amp_mhz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(rename = "gz_tilde_MHz")]
    pub gz_tilde_mhz: Option<f64>,
    pub target_fidelity: f64,
    pub tau_us: Vec<f64>,
    pub snr_at_tau: Vec<f64>,
    pub fidelity_at_tau: Vec<f64>,
    pub tau_to_target_us: f64,
    pub warnings: Vec<String>,
}

/// Readout scheme implied by a scenario; returns the scheme, `χ` and `n_crit`.
pub fn build_scheme(
    cfg: &ScenarioConfig,
    scheme: SchemeSel,
) -> CliResult<(ReadoutScheme, f64, Option<f64>, Vec<String>)> {
    let m = Model::from_config(cfg);
    let chi = m
        .chi(Method::Numeric)?
        .expect("numeric shift exists for every qubit")
        .chi;
    if chi == 0.0 {
        return Err(CliError::Numeric(
            "dispersive shift vanishes; no readout budget exists".into(),
        ));
    }
    let o = &cfg.readout;
    let kappa = o.kappa_mhz.map_or(o.kappa_over_chi * chi.abs(), mhz);
    let mut warnings = Vec::new();
    Ok(match scheme {
        SchemeSel::Dispersive => {
            let pb = majorana_readout::drive_from_photon_budget(
                chi,
                kappa,
                m.delta_over_g()?,
                o.nbar_ratio,
            )?;
            let p = DispersiveBudgetParams {
                chi,
                kappa,
                drive_amp: pb.drive_amp,
                delta_over_g: m.delta_over_g()?,
                nbar_target_ratio: o.nbar_ratio,
            };
            if !p.kappa_is_optimal() {
                warnings.push(format!(
                    "kappa = {:.6} MHz differs from 2|chi| = {:.6} MHz; the SNR expression assumes kappa = 2|chi|",
                    to_mhz(kappa),
                    to_mhz(2.0 * chi.abs())
                ));
            }
            (ReadoutScheme::Dispersive(p), chi, Some(pb.n_crit), warnings)
        }
        SchemeSel::Longitudinal => (
            ReadoutScheme::Longitudinal(LongitudinalBudgetParams {
                gz_tilde: mhz(o.gz_tilde_mhz),
                kappa,
            }),
            chi,
            None,
            warnings,
        ),
    })
}

pub fn run_readout(
    doc: &Value,
    scheme: SchemeSel,
    target: Option<f64>,
) -> CliResult<ReadoutReport> {
    let mut cfg = parse_scenario(doc)?;
    if let Some(f) = target {
        cfg.readout.target_fidelity = f;
        cfg.validate()?;
    }
    let (s, chi, n_crit, warnings) = build_scheme(&cfg, scheme)?;
    let tau = cfg.readout.tau_grid();
    let snr: Vec<f64> = tau.iter().map(|&t| s.snr(t)).collect();
    let fid = snr.iter().map(|&x| fidelity_from_snr(x)).collect();
    let tau_to_target = time_to_fidelity(&s, cfg.readout.target_fidelity)?;
    let omega_q = Model::from_config(&cfg).qubit_frequency()?;
    Ok(ReadoutReport {
        config: cfg.to_value(),
        scheme,
        qubit_frequency_ghz: to_ghz(omega_q),
        chi_mhz: to_mhz(chi),
        kappa_mhz: to_mhz(s.kappa()),
        nbar: s.nbar(),
        n_crit,
        drive_amp_mhz: match s {
            ReadoutScheme::Dispersive(p) => Some(to_mhz(p.drive_amp)),
            ReadoutScheme::Longitudinal(_) => None,
        },
        gz_tilde_mhz: match s {
            ReadoutScheme::Longitudinal(p) => Some(to_mhz(p.gz_tilde)),
            ReadoutScheme::Dispersive(_) => None,
        },
        target_fidelity: cfg.readout.target_fidelity,
        tau_us: tau,
        snr_at_tau: snr,
        fidelity_at_tau: fid,
        tau_to_target_us: tau_to_target,
        warnings,
    })
}
