//! Second-order Schrieffer-Wolff shifts of a single resonator mode coupled to a multilevel atom.
//!
//! For eigenstates `|l>` with frequencies `ω_l` and couplings
//! `g_{l,l'} = iλ<l|N|l'>`, the resonator pull of level `l` is
//! `χ_l = Σ_{l'} (χ_{l,l'} − χ_{l',l})` and its Lamb correction
//! `η_l = Σ_{l'} χ_{l,l'}`, where `χ_{l,l'} = |g_{l,l'}|² / (ω_l − ω_{l'} − ω_r)`.
//! Both co- and counter-rotating denominators are kept.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ops::{CMatrix, HermitianEigenSystem};

/// Smallest accepted `|Δ_{l,l'}| / |g_{l,l'}|` before a pair counts as resonant.
pub const DEFAULT_GUARD: f64 = 1e-3;

/// Ascending level frequencies (rad/ns) with caller-supplied labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSpectrum {
    pub omega: Vec<f64>,
    pub labels: Vec<String>,
}

impl LevelSpectrum {
    pub fn new(omega: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if omega.len() < 2 {
            return Err(Error::domain("level spectrum needs at least two levels"));
        }
        if labels.len() != omega.len() {
            return Err(Error::domain("one label per level required"));
        }
        if omega.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::domain("level frequencies must be ascending"));
        }
        Ok(LevelSpectrum { omega, labels })
    }

    /// Spectrum of an eigensystem whose values are already in rad/ns.
    pub fn from_eig(eig: &HermitianEigenSystem) -> Result<Self> {
        let labels = (0..eig.len()).map(|l| l.to_string()).collect();
        LevelSpectrum::new(eig.values.clone(), labels)
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }
}

/// Transition couplings `g_{l,l'}` in rad/ns.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelCouplings {
    pub g: CMatrix,
}

/// Per-level pulls and Lamb corrections in rad/ns.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersiveResult {
    pub chi: Vec<f64>,
    pub eta: Vec<f64>,
    /// Minimum `|Δ_{l,l'}| / |g_{l,l'}|` over pairs with non-zero coupling.
    pub resonance_margin: f64,
}

/// A logical-pair shift together with the smallest detuning margin that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitShift {
    /// `χ_q` in rad/ns.
    pub chi: f64,
    pub resonance_margin: f64,
}

/// `g = iλ V† N V` for the eigenvectors `V` of `eig`.
pub fn coupling_matrix(
    eig: &HermitianEigenSystem,
    n_op: &CMatrix,
    lambda: f64,
) -> Result<LevelCouplings> {
    let dim = eig.vectors.nrows();
    if n_op.shape() != (dim, dim) {
        return Err(Error::domain(format!(
            "coupling operator is {}x{} but the eigensystem has dimension {dim}",
            n_op.nrows(),
            n_op.ncols()
        )));
    }
    let inner = eig.vectors.adjoint() * n_op * &eig.vectors;
    Ok(LevelCouplings {
        g: inner * Complex64::new(0.0, lambda),
    })
}

/// Evaluate `χ_l` and `η_l` for every level with the full double sum.
pub fn dispersive_shifts(
    spec: &LevelSpectrum,
    coup: &LevelCouplings,
    omega_r: f64,
    guard: f64,
) -> Result<DispersiveResult> {
    let n = spec.len();
    if coup.g.shape() != (n, n) {
        return Err(Error::domain(format!(
            "coupling matrix is {}x{} for {n} levels",
            coup.g.nrows(),
            coup.g.ncols()
        )));
    }
    let mut pair = vec![0.0; n * n];
    let mut margin = f64::INFINITY;
    for l in 0..n {
        for lp in 0..n {
            let g = coup.g[(l, lp)].norm();
            if g == 0.0 {
                continue;
            }
            let delta = spec.omega[l] - spec.omega[lp] - omega_r;
            let ratio = delta.abs() / g;
            if ratio < guard {
                return Err(Error::ResonantPair { l, lp, delta, g });
            }
            margin = margin.min(ratio);
            pair[l * n + lp] = g * g / delta;
        }
    }
    let mut chi = vec![0.0; n];
    let mut eta = vec![0.0; n];
    for l in 0..n {
        for lp in 0..n {
            chi[l] += pair[l * n + lp] - pair[lp * n + l];
            eta[l] += pair[l * n + lp];
        }
    }
    Ok(DispersiveResult {
        chi,
        eta,
        resonance_margin: margin,
    })
}

/// Shift of the qubit encoded in levels `l0` and `l1`: `(χ_{l1} − χ_{l0}) / 2`.
pub fn qubit_chi(res: &DispersiveResult, l1: usize, l0: usize) -> Result<f64> {
    let n = res.chi.len();
    if l1 >= n || l0 >= n {
        return Err(Error::domain(format!(
            "level index out of range: ({l1}, {l0}) with {n} levels"
        )));
    }
    if l1 == l0 {
        return Err(Error::domain("qubit levels must differ"));
    }
    Ok((res.chi[l1] - res.chi[l0]) / 2.0)
}
