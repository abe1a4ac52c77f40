//! Conventional and Majorana transmon: charge-basis Hamiltonians, Kerr closed forms and
//! dispersive shifts, plus the dot-mediated variant of the Majorana coupling.
//!
//! Each Majorana parity sector is represented on the Cooper-pair lattice: index `k` of the
//! [`ChargeBasis`] is the number of pairs, so the island carries `N = 2k` electrons. The
//! Majorana tunneling term transfers a single electron, `e^{iφ/2}`, which is expressed with
//! the branch operator [`half_phase_window`] on `φ ∈ [-π, π)`. With this choice the two
//! parity sectors differ by the sign of the Majorana term and are never coupled by the
//! charge operator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersive::{coupling_matrix, dispersive_shifts, qubit_chi, LevelSpectrum, QubitShift};
use crate::error::{Error, Result};
use crate::ops::{
    charge_shift, half_phase_window, hermitian_eig, kron, number_operator, pauli, CMatrix,
    ChargeBasis, HermitianEigenSystem,
};
use crate::solve::{bisect, expand_upward};
use crate::units::{ghz, to_ghz};

/// Transmon and Majorana parameters. Energies in GHz (`E/h`), flux phase in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MTParams {
    pub e_c: f64,
    pub e_j: f64,
    pub n_g: f64,
    pub e_m: f64,
    pub phi_x: f64,
}

impl MTParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.e_c > 0.0) {
            return Err(Error::domain("E_C must be positive"));
        }
        if !(self.e_j >= 0.0) {
            return Err(Error::domain("E_J must be non-negative"));
        }
        if !(self.e_m >= 0.0) {
            return Err(Error::domain("E_M must be non-negative"));
        }
        if !self.n_g.is_finite() || !self.phi_x.is_finite() {
            return Err(Error::domain("n_g and phi_x must be finite"));
        }
        Ok(())
    }

    pub fn with_e_m(self, e_m: f64) -> Self {
        MTParams { e_m, ..self }
    }
}

/// Eigenvalue of `iγ₂γ₃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Plus => 1.0,
            Parity::Minus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Plus => "+",
            Parity::Minus => "-",
        }
    }

    pub const BOTH: [Parity; 2] = [Parity::Plus, Parity::Minus];
}

fn real_diag(values: impl Iterator<Item = f64>) -> CMatrix {
    let v: Vec<Complex64> = values.map(|x| Complex64::new(x, 0.0)).collect();
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(v))
}

/// Hamiltonian of one parity sector in rad/ns.
///
/// `H = E_C(2k − n_g)² − (E_J/2)(e^{iφ} + h.c.) − (p E_M/2)(e^{iφ_x/2} W + h.c.)`.
pub fn build_mt_hamiltonian(p: &MTParams, parity: Parity, basis: &ChargeBasis) -> CMatrix {
    let charging = real_diag(basis.charges().map(|k| {
        let q = 2.0 * k as f64 - p.n_g;
        ghz(p.e_c) * q * q
    }));
    let up = charge_shift(basis, 1).expect("unit shift fits any basis with n_max >= 1");
    let josephson = (&up + up.adjoint()) * Complex64::new(-ghz(p.e_j) / 2.0, 0.0);
    let w = half_phase_window(basis) * Complex64::from_polar(1.0, p.phi_x / 2.0);
    let majorana = (&w + w.adjoint()) * Complex64::new(-parity.sign() * ghz(p.e_m) / 2.0, 0.0);
    charging + josephson + majorana
}

/// Island electron number `N = 2k` on the pair lattice.
pub fn mt_number_operator(basis: &ChargeBasis) -> CMatrix {
    number_operator(basis) * Complex64::new(2.0, 0.0)
}

/// Eigensystems of both parity sectors, `+` first.
pub fn mt_sectors(p: &MTParams, basis: &ChargeBasis) -> Result<[HermitianEigenSystem; 2]> {
    let plus = hermitian_eig(&build_mt_hamiltonian(p, Parity::Plus, basis))?;
    let minus = hermitian_eig(&build_mt_hamiltonian(p, Parity::Minus, basis))?;
    Ok([plus, minus])
}

/// One point of a spectrum sweep; frequencies in GHz relative to the global ground state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n_g: f64,
    pub sector: String,
    pub level: usize,
    pub freq_ghz: f64,
}

/// Lowest `k_levels` levels of each parity sector at every offset charge.
pub fn mt_spectrum_vs_ng(
    p: &MTParams,
    ng_grid: &[f64],
    k_levels: usize,
    basis: &ChargeBasis,
) -> Result<Vec<SpectrumRow>> {
    if k_levels > basis.dim() {
        return Err(Error::domain(format!(
            "k_levels = {k_levels} exceeds basis dimension {}",
            basis.dim()
        )));
    }
    let mut rows = Vec::with_capacity(ng_grid.len() * 2 * k_levels);
    for &n_g in ng_grid {
        let q = MTParams { n_g, ..*p };
        let sectors = mt_sectors(&q, basis)?;
        let ground = sectors[0].values[0].min(sectors[1].values[0]);
        for (parity, eig) in Parity::BOTH.iter().zip(&sectors) {
            for level in 0..k_levels {
                rows.push(SpectrumRow {
                    n_g,
                    sector: parity.label().to_string(),
                    level,
                    freq_ghz: to_ghz(eig.values[level] - ground),
                });
            }
        }
    }
    Ok(rows)
}

/// Closed-form Kerr-oscillator quantities. Frequencies in GHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerrApprox {
    pub omega_t: f64,
    pub xi0: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub omega_mt: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub g_t_per_lambda: f64,
}

pub fn kerr_approximation(p: &MTParams) -> KerrApprox {
    let plasma = (8.0 * p.e_j * p.e_c).sqrt();
    let omega_t = plasma - p.e_c;
    let xi0 = (4.0 * plasma - p.e_c) / (64.0 * p.e_j);
    let xi1 = (4.0 * plasma - 2.0 * p.e_c) / (32.0 * p.e_j);
    let xi2 = p.e_c / (32.0 * p.e_j);
    KerrApprox {
        omega_t,
        xi0,
        xi1,
        xi2,
        omega_mt: 2.0 * p.e_m * (1.0 - xi0),
        omega_plus: omega_t + p.e_m * xi1,
        omega_minus: omega_t - p.e_m * xi1,
        g_t_per_lambda: (p.e_j / (2.0 * p.e_c)).powf(0.25),
    }
}

/// Transmon coupling `g_t = λ (E_J / 2E_C)^{1/4}` for `λ` in rad/ns.
pub fn g_t(p: &MTParams, lambda: f64) -> f64 {
    lambda * kerr_approximation(p).g_t_per_lambda
}

fn sector_pulls(
    eig: &HermitianEigenSystem,
    n_op: &CMatrix,
    lambda: f64,
    omega_r: f64,
    guard: f64,
) -> Result<crate::dispersive::DispersiveResult> {
    let spec = LevelSpectrum::from_eig(eig)?;
    let coup = coupling_matrix(eig, n_op, lambda)?;
    dispersive_shifts(&spec, &coup, omega_r, guard)
}

/// `χ_mt = (χ_{g,−} − χ_{g,+}) / 2` from exact diagonalization of both sectors.
pub fn chi_mt_numeric(
    p: &MTParams,
    lambda: f64,
    omega_r: f64,
    basis: &ChargeBasis,
    guard: f64,
) -> Result<QubitShift> {
    let n_op = mt_number_operator(basis);
    let [plus, minus] = mt_sectors(p, basis)?;
    let rp = sector_pulls(&plus, &n_op, lambda, omega_r, guard)?;
    let rm = sector_pulls(&minus, &n_op, lambda, omega_r, guard)?;
    Ok(QubitShift {
        chi: (rm.chi[0] - rp.chi[0]) / 2.0,
        resonance_margin: rp.resonance_margin.min(rm.resonance_margin),
    })
}

/// Conventional transmon `χ_t = (χ_e − χ_g) / 2`, evaluated with `E_M = 0`.
pub fn chi_t_numeric(
    p: &MTParams,
    lambda: f64,
    omega_r: f64,
    basis: &ChargeBasis,
    guard: f64,
) -> Result<QubitShift> {
    let q = p.with_e_m(0.0);
    let eig = hermitian_eig(&build_mt_hamiltonian(&q, Parity::Plus, basis))?;
    let r = sector_pulls(&eig, &mt_number_operator(basis), lambda, omega_r, guard)?;
    Ok(QubitShift {
        chi: qubit_chi(&r, 1, 0)?,
        resonance_margin: r.resonance_margin,
    })
}

/// `χ_mt ≈ ½ g_t² (1/(ω_+ − ω_r) − 1/(ω_− − ω_r))` from the Kerr closed forms.
pub fn chi_mt_analytic(p: &MTParams, lambda: f64, omega_r: f64, guard: f64) -> Result<QubitShift> {
    let k = kerr_approximation(p);
    let g = lambda * k.g_t_per_lambda;
    let dp = ghz(k.omega_plus) - omega_r;
    let dm = ghz(k.omega_minus) - omega_r;
    for (l, d) in [(1, dp), (2, dm)] {
        if g != 0.0 && d.abs() < guard * g.abs() {
            return Err(Error::ResonantPair {
                l,
                lp: 0,
                delta: d,
                g,
            });
        }
    }
    let margin = if g == 0.0 {
        f64::INFINITY
    } else {
        dp.abs().min(dm.abs()) / g.abs()
    };
    Ok(QubitShift {
        chi: 0.5 * g * g * (1.0 / dp - 1.0 / dm),
        resonance_margin: margin,
    })
}

/// Exact transmon frequency `ω_t` (rad/ns): first transition with `E_M = 0`.
pub fn omega_t_numeric(p: &MTParams, basis: &ChargeBasis) -> Result<f64> {
    let eig = hermitian_eig(&build_mt_hamiltonian(&p.with_e_m(0.0), Parity::Plus, basis))?;
    Ok(eig.values[1] - eig.values[0])
}

/// Exact `ω_+` (rad/ns): first transition inside the `+` sector.
pub fn omega_plus_numeric(p: &MTParams, basis: &ChargeBasis) -> Result<f64> {
    let eig = hermitian_eig(&build_mt_hamiltonian(p, Parity::Plus, basis))?;
    Ok(eig.values[1] - eig.values[0])
}

/// Exact qubit splitting `ω_mt = E_{g,−} − E_{g,+}` (rad/ns).
pub fn omega_mt_numeric(p: &MTParams, basis: &ChargeBasis) -> Result<f64> {
    let [plus, minus] = mt_sectors(p, basis)?;
    Ok(minus.values[0] - plus.values[0])
}

/// `E_M` (GHz) whose exact qubit splitting equals `target_ghz` at the other parameters of `p`.
/// `ω_r` (rad/ns) that puts the exact `|g,+⟩ → |e,+⟩` transition at `Δ = delta_over_g · g_t`.
pub fn omega_r_numeric(
    p: &MTParams,
    lambda: f64,
    delta_over_g: f64,
    basis: &ChargeBasis,
) -> Result<f64> {
    Ok(omega_plus_numeric(p, basis)? - delta_over_g * g_t(p, lambda))
}

/// `ω_r` (rad/ns) that puts the Kerr `ω_+` at `Δ = delta_over_g · g_t`.
pub fn omega_r_analytic(p: &MTParams, lambda: f64, delta_over_g: f64) -> f64 {
    ghz(kerr_approximation(p).omega_plus) - delta_over_g * g_t(p, lambda)
}

/// `ω_r` (rad/ns) that puts the exact transmon `ω_t` at `Δ_t = delta_over_g · g_t`.
pub fn omega_r_transmon(
    p: &MTParams,
    lambda: f64,
    delta_over_g: f64,
    basis: &ChargeBasis,
) -> Result<f64> {
    Ok(omega_t_numeric(p, basis)? - delta_over_g * g_t(p, lambda))
}

pub fn solve_e_m_for_splitting(p: &MTParams, target_ghz: f64, basis: &ChargeBasis) -> Result<f64> {
    if !(target_ghz > 0.0) {
        return Err(Error::domain("target splitting must be positive"));
    }
    let f = |e_m: f64| Ok(to_ghz(omega_mt_numeric(&p.with_e_m(e_m), basis)?) - target_ghz);
    let (lo, hi) = expand_upward(f, target_ghz, 2.0, "E_M for splitting")?;
    bisect(f, lo, hi, 1e-13 * target_ghz, "E_M for splitting")
}

/// Cutoff-doubling policy for charge-basis calculations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub n_start: usize,
    pub rel_tol: f64,
    /// Absolute floor (same units as the outputs) for values that vanish.
    pub abs_tol: f64,
    pub n_cap: usize,
}

impl Default for Convergence {
    fn default() -> Self {
        Convergence {
            n_start: 30,
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            n_cap: 240,
        }
    }
}

/// Evaluate `f` on doubling cutoffs until two consecutive results agree.
///
/// Returns the larger basis and its outputs.
pub fn converge<F>(c: &Convergence, mut f: F) -> Result<(ChargeBasis, Vec<f64>)>
where
    F: FnMut(&ChargeBasis) -> Result<Vec<f64>>,
{
    let mut n = c.n_start.max(1);
    let mut prev = f(&ChargeBasis::new(n))?;
    while 2 * n <= c.n_cap {
        n *= 2;
        let basis = ChargeBasis::new(n);
        let next = f(&basis)?;
        let agree = prev
            .iter()
            .zip(&next)
            .all(|(a, b)| (a - b).abs() <= c.rel_tol * b.abs().max(a.abs()) + c.abs_tol);
        if agree {
            return Ok((basis, next));
        }
        prev = next;
    }
    Err(Error::NoConvergence {
        what: format!("charge cutoff doubling up to n_max = {}", c.n_cap),
        iterations: n,
    })
}

/// Parameters of the dot-mediated Majorana coupling. `base.e_m` is ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndirectMTParams {
    pub base: MTParams,
    pub eps_dot: f64,
    pub t_l: f64,
    pub t_r: f64,
}

impl IndirectMTParams {
    pub fn validate(&self) -> Result<()> {
        self.base.with_e_m(0.0).validate()?;
        if !(self.t_l >= 0.0 && self.t_r >= 0.0) {
            return Err(Error::domain("tunnel amplitudes must be non-negative"));
        }
        Ok(())
    }
}

/// Dot and Majorana-fermion operators on the 4-dimensional `dot ⊗ f` factor.
struct Modes {
    d: CMatrix,
    gamma2: CMatrix,
    gamma3: CMatrix,
    n_d: CMatrix,
    n_f: CMatrix,
}

fn modes() -> Modes {
    let d = kron(&pauli::lower(), &pauli::identity());
    let f = kron(&pauli::z(), &pauli::lower());
    let gamma2 = &f + f.adjoint();
    let gamma3 = (f.adjoint() - &f) * Complex64::new(0.0, 1.0);
    let n_d = kron(&pauli::occupied(), &pauli::identity());
    let n_f = f.adjoint() * &f;
    Modes {
        d,
        gamma2,
        gamma3,
        n_d,
        n_f,
    }
}

/// Island charge `N = 2k − n_d` on `island ⊗ dot ⊗ f`.
///
/// With the dot empty the island holds an even number of electrons, with the dot
/// occupied it holds `2k − 1`.
pub fn indirect_number_operator(basis: &ChargeBasis) -> CMatrix {
    let m = modes();
    kron(&mt_number_operator(basis), &CMatrix::identity(4, 4))
        - kron(&CMatrix::identity(basis.dim(), basis.dim()), &m.n_d)
}

/// Full Hamiltonian (rad/ns) of island, dot and the Majorana pair, dimension `4(2n_max+1)`.
///
/// `H = E_C(N − n_g)² − (E_J/2)(e^{iφ} + h.c.) + ε n_d + H_t` with
/// `H_t = ½[(i t_L e^{iφ_x/2} e^{iφ/2} γ₂ − t_R γ₃) d + h.c.]`. The `t_L` process moves an
/// electron between the dot and the island and is diagonal in `k`; the `t_R` process
/// leaves the island charge unchanged and therefore crosses between the even and odd
/// charge branches, which is carried by the half-phase branch operator.
pub fn build_indirect_hamiltonian(p: &IndirectMTParams, basis: &ChargeBasis) -> CMatrix {
    let m = modes();
    let dim = basis.dim();
    let id_island = CMatrix::identity(dim, dim);
    let id4 = CMatrix::identity(4, 4);
    let q = indirect_number_operator(basis)
        - CMatrix::identity(4 * dim, 4 * dim) * Complex64::new(p.base.n_g, 0.0);
    let charging = (&q * &q) * Complex64::new(ghz(p.base.e_c), 0.0);
    let up = charge_shift(basis, 1).expect("unit shift fits any basis with n_max >= 1");
    let josephson = kron(&(&up + up.adjoint()), &id4) * Complex64::new(-ghz(p.base.e_j) / 2.0, 0.0);
    let dot = kron(&id_island, &m.n_d) * Complex64::new(ghz(p.eps_dot), 0.0);
    let left = kron(&id_island, &(&m.gamma2 * &m.d))
        * (Complex64::new(0.0, 1.0) * Complex64::from_polar(ghz(p.t_l), p.base.phi_x / 2.0));
    let right = kron(&half_phase_window(basis).adjoint(), &(&m.gamma3 * &m.d))
        * Complex64::new(-ghz(p.t_r), 0.0);
    let v = (left + right) * Complex64::new(0.5, 0.0);
    charging + josephson + dot + &v + v.adjoint()
}

/// Diagonal of the joint parity `(−1)^{n_d} iγ₂γ₃` on `island ⊗ dot ⊗ f`.
pub fn indirect_joint_parity(basis: &ChargeBasis) -> Vec<f64> {
    let m = modes();
    let local: Vec<f64> = (0..4)
        .map(|i| (1.0 - 2.0 * m.n_d[(i, i)].re) * (2.0 * m.n_f[(i, i)].re - 1.0))
        .collect();
    (0..basis.dim()).flat_map(|_| local.clone()).collect()
}

/// Effective Majorana parity of an indirect-model sector with joint parity `P`.
///
/// In these operator conventions the second-order dot process lowers the `P = −1`
/// sector, so the effective `iγ₂γ₃` of the low-energy island states is `−P`.
pub fn effective_parity(joint: f64) -> Parity {
    if joint < 0.0 {
        Parity::Plus
    } else {
        Parity::Minus
    }
}

/// A conserved-parity block of the indirect model.
pub struct IndirectSector {
    pub parity: Parity,
    pub hamiltonian: CMatrix,
    pub number: CMatrix,
}

fn submatrix(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

/// Split the indirect Hamiltonian and charge operator into its two parity blocks, `+` first.
pub fn indirect_sectors(p: &IndirectMTParams, basis: &ChargeBasis) -> [IndirectSector; 2] {
    let h = build_indirect_hamiltonian(p, basis);
    let n = indirect_number_operator(basis);
    let joint = indirect_joint_parity(basis);
    Parity::BOTH.map(|parity| {
        let idx: Vec<usize> = joint
            .iter()
            .enumerate()
            .filter(|(_, &j)| effective_parity(j) == parity)
            .map(|(i, _)| i)
            .collect();
        IndirectSector {
            parity,
            hamiltonian: submatrix(&h, &idx),
            number: submatrix(&n, &idx),
        }
    })
}

/// Eigensystems of both indirect-model sectors, `+` first.
pub fn indirect_eigensystems(
    p: &IndirectMTParams,
    basis: &ChargeBasis,
) -> Result<[HermitianEigenSystem; 2]> {
    let [a, b] = indirect_sectors(p, basis);
    Ok([
        hermitian_eig(&a.hamiltonian)?,
        hermitian_eig(&b.hamiltonian)?,
    ])
}

/// `χ_mt` of the dot-mediated model, defined as for the direct model.
pub fn chi_mt_indirect(
    p: &IndirectMTParams,
    lambda: f64,
    omega_r: f64,
    basis: &ChargeBasis,
    guard: f64,
) -> Result<QubitShift> {
    let [a, b] = indirect_sectors(p, basis);
    let ea = hermitian_eig(&a.hamiltonian)?;
    let eb = hermitian_eig(&b.hamiltonian)?;
    let rp = sector_pulls(&ea, &a.number, lambda, omega_r, guard)?;
    let rm = sector_pulls(&eb, &b.number, lambda, omega_r, guard)?;
    Ok(QubitShift {
        chi: (rm.chi[0] - rp.chi[0]) / 2.0,
        resonance_margin: rp.resonance_margin.min(rm.resonance_margin),
    })
}

/// Qubit splitting `E_{g,−} − E_{g,+}` (rad/ns) of the indirect model.
pub fn omega_mt_indirect(p: &IndirectMTParams, basis: &ChargeBasis) -> Result<f64> {
    let [plus, minus] = indirect_eigensystems(p, basis)?;
    Ok(minus.values[0] - plus.values[0])
}

/// Symmetric tunneling `t_L = t_R = t` (GHz) giving an indirect qubit splitting of `target_ghz`.
pub fn match_indirect_tunneling(
    base: &MTParams,
    eps_dot: f64,
    target_ghz: f64,
    basis: &ChargeBasis,
) -> Result<f64> {
    if !(target_ghz > 0.0) {
        return Err(Error::domain("target splitting must be positive"));
    }
    let f = |t: f64| {
        let q = IndirectMTParams {
            base: *base,
            eps_dot,
            t_l: t,
            t_r: t,
        };
        Ok(to_ghz(omega_mt_indirect(&q, basis)?) - target_ghz)
    };
    let (lo, hi) = expand_upward(f, 0.5, 2.0, "indirect tunneling")?;
    bisect(f, lo, hi, 1e-10, "indirect tunneling")
}
