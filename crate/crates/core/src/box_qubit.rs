//! Majorana box qubit: a floating island with two Majorana modes tunnel-coupled to a
//! single-level quantum dot.
//!
//! Total charge is conserved, so the Hamiltonian splits into 4×4 blocks labelled by `n`.
//! Block `n` acts on `{|0_n>, |1_n>} ⊗ {m = 0, 1}` where `|0_n>` has `n` electrons on the
//! island and an empty dot, `|1_n>` has `n − 1` on the island and one on the dot, and
//! `m` is the occupation of the Majorana fermion. Tunneling flips the dot and `m`
//! together, so each block splits further into the sub-blocks
//! `{|0_n,0>, |1_n,1>}` (splitting `f_−`) and `{|0_n,1>, |1_n,0>}` (splitting `f_+`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::RangeInclusive;

use crate::dispersive::{coupling_matrix, dispersive_shifts, LevelSpectrum, QubitShift};
use crate::error::{Error, Result};
use crate::ops::{hermitian_eig, kron, pauli, CMatrix, HermitianEigenSystem};
use crate::solve::bisect;
use crate::transmon::SpectrumRow;
use crate::units::{ghz, to_ghz};

/// Box-qubit parameters. Energies in GHz (`E/h`), flux phase in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MBParams {
    pub e_tot: f64,
    pub eps_dot: f64,
    pub n_g: f64,
    pub t_l: f64,
    pub t_r: f64,
    pub phi_x: f64,
}

impl MBParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.e_tot > 0.0) {
            return Err(Error::domain("E_tot must be positive"));
        }
        if !(self.t_l >= 0.0 && self.t_r >= 0.0) {
            return Err(Error::domain("tunnel amplitudes must be non-negative"));
        }
        if !self.eps_dot.is_finite() || !self.n_g.is_finite() || !self.phi_x.is_finite() {
            return Err(Error::domain("eps_dot, n_g and phi_x must be finite"));
        }
        Ok(())
    }

    pub fn with_tunneling(self, t: f64) -> Self {
        MBParams {
            t_l: t,
            t_r: t,
            ..self
        }
    }

    /// Dot-empty minus dot-occupied charging offset `δ(n)` in GHz.
    pub fn delta(&self, n: i64) -> f64 {
        self.e_tot + self.eps_dot - 2.0 * self.e_tot * (n as f64 - self.n_g)
    }

    fn tunnel_sum(&self) -> Complex64 {
        Complex64::from_polar(self.t_l, self.phi_x / 2.0) + self.t_r
    }

    fn tunnel_diff(&self) -> Complex64 {
        Complex64::from_polar(self.t_l, self.phi_x / 2.0) - self.t_r
    }
}

/// Which element of the circuit the resonator voltage couples to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingGeometry {
    #[default]
    Island,
    Dot,
}

impl CouplingGeometry {
    /// Signed coupling constant; the dot geometry reverses the sign of `λ`.
    pub fn lambda(self, lambda: f64) -> f64 {
        match self {
            CouplingGeometry::Island => lambda,
            CouplingGeometry::Dot => -lambda,
        }
    }
}

/// Basis positions of the `f_−` and `f_+` sub-blocks inside a block.
pub const SUB_BLOCK_MINUS: [usize; 2] = [0, 3];
pub const SUB_BLOCK_PLUS: [usize; 2] = [1, 2];

/// Block `n` of the box Hamiltonian in rad/ns.
pub fn block_hamiltonian(p: &MBParams, n: i64) -> CMatrix {
    let q0 = n as f64 - p.n_g;
    let q1 = q0 - 1.0;
    let e0 = ghz(p.e_tot * q0 * q0);
    let e1 = ghz(p.e_tot * q1 * q1 + p.eps_dot);
    let charge = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(e0, 0.0),
        Complex64::new(e1, 0.0),
    ]));
    let i = Complex64::new(0.0, 1.0);
    let a = pauli::x() * (i * Complex64::from_polar(ghz(p.t_l), p.phi_x / 2.0))
        + pauli::y() * Complex64::new(ghz(p.t_r), 0.0);
    let hop = kron(&pauli::lower(), &a) * Complex64::new(0.5, 0.0);
    kron(&charge, &pauli::identity()) + &hop + hop.adjoint()
}

/// Island charge `n − |1_n><1_n| ⊗ I` on block `n`.
pub fn block_number_operator(n: i64) -> CMatrix {
    let c = n as f64;
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(c, 0.0),
        Complex64::new(c, 0.0),
        Complex64::new(c - 1.0, 0.0),
        Complex64::new(c - 1.0, 0.0),
    ]))
}

/// Closed-form diagonalization of block `n`. Energies in GHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockSolution {
    pub n: i64,
    pub delta_n: f64,
    pub f_plus: f64,
    pub f_minus: f64,
    pub eps_c: f64,
    pub eps_m: f64,
    pub e_n: f64,
    pub alpha_plus_mag: f64,
    pub alpha_minus_mag: f64,
}

impl BlockSolution {
    /// `{E, E + ε_m, E + ε_c, E + ε_c + ε_m}` sorted ascending.
    pub fn energies(&self) -> [f64; 4] {
        let mut e = [
            self.e_n,
            self.e_n + self.eps_m,
            self.e_n + self.eps_c,
            self.e_n + self.eps_c + self.eps_m,
        ];
        e.sort_by(f64::total_cmp);
        e
    }
}

fn sgn(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

pub fn block_solution(p: &MBParams, n: i64) -> BlockSolution {
    let delta = p.delta(n);
    let ap = p.tunnel_sum().norm();
    let am = p.tunnel_diff().norm();
    let f_plus = delta.hypot(ap);
    let f_minus = delta.hypot(am);
    let s = sgn(delta);
    let eps_c = s * (f_plus + f_minus) / 2.0;
    let eps_m = s * (f_plus - f_minus) / 2.0;
    let q = n as f64 - p.n_g;
    BlockSolution {
        n,
        delta_n: delta,
        f_plus,
        f_minus,
        eps_c,
        eps_m,
        e_n: p.e_tot * q * q + (delta - eps_c - eps_m) / 2.0,
        alpha_plus_mag: 0.5 * ap.atan2(2.0 * delta.abs()),
        alpha_minus_mag: 0.5 * am.atan2(2.0 * delta.abs()),
    }
}

/// Dressed charge couplings in rad/ns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxCouplings {
    pub g_c: f64,
    pub g_m: f64,
    pub g_plus: Complex64,
    pub g_minus: Complex64,
}

/// `g_c`, `g_m` and `g_±` of block `n` for coupling `λ` in rad/ns.
pub fn box_couplings(p: &MBParams, n: i64, lambda: f64) -> BoxCouplings {
    let s = block_solution(p, n);
    let d = s.delta_n;
    let half = -lambda / 2.0;
    let ratio = |f: f64| if f == 0.0 { 0.0 } else { d / f };
    let i = Complex64::new(0.0, 1.0);
    let dressed = |a: Complex64, f: f64| {
        if f == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            i * a * (half / f)
        }
    };
    BoxCouplings {
        g_c: half * (ratio(s.f_plus) + ratio(s.f_minus)),
        g_m: half * (ratio(s.f_plus) - ratio(s.f_minus)),
        g_plus: dressed(p.tunnel_sum(), s.f_plus),
        g_minus: dressed(p.tunnel_diff(), s.f_minus),
    }
}

/// `χ_mb ≈ ½(|g_+|²/(f_+ − ω_r) − |g_−|²/(f_− − ω_r))` in rad/ns.
pub fn chi_mb_analytic(
    p: &MBParams,
    lambda: f64,
    omega_r: f64,
    n: i64,
    guard: f64,
) -> Result<QubitShift> {
    let s = block_solution(p, n);
    let g = box_couplings(p, n, lambda);
    let mut margin = f64::INFINITY;
    let mut chi = 0.0;
    for (l, (gabs, f, sign)) in [
        (g.g_plus.norm(), s.f_plus, 1.0),
        (g.g_minus.norm(), s.f_minus, -1.0),
    ]
    .into_iter()
    .enumerate()
    {
        if gabs == 0.0 {
            continue;
        }
        let delta = ghz(f) - omega_r;
        if delta.abs() < guard * gabs {
            return Err(Error::ResonantPair {
                l: l + 1,
                lp: 0,
                delta,
                g: gabs,
            });
        }
        margin = margin.min(delta.abs() / gabs);
        chi += sign * 0.5 * gabs * gabs / delta;
    }
    Ok(QubitShift {
        chi,
        resonance_margin: margin,
    })
}

/// Eigenpairs of block `n` with each state tagged by its sub-block.
///
/// Returns the eigensystem in ascending order and, per level, `true` for the `f_−`
/// sub-block (logical `+`) and `false` for the `f_+` sub-block (logical `−`).
pub fn block_eigensystem(p: &MBParams, n: i64) -> Result<(HermitianEigenSystem, Vec<bool>)> {
    let h = block_hamiltonian(p, n);
    let mut levels: Vec<(f64, bool, [Complex64; 4])> = Vec::with_capacity(4);
    for (idx, is_minus_block) in [(SUB_BLOCK_MINUS, true), (SUB_BLOCK_PLUS, false)] {
        let sub = CMatrix::from_fn(2, 2, |r, c| h[(idx[r], idx[c])]);
        let e = hermitian_eig(&sub)?;
        for k in 0..2 {
            let mut v = [Complex64::new(0.0, 0.0); 4];
            v[idx[0]] = e.vectors[(0, k)];
            v[idx[1]] = e.vectors[(1, k)];
            levels.push((e.values[k], is_minus_block, v));
        }
    }
    levels.sort_by(|a, b| a.0.total_cmp(&b.0));
    let values = levels.iter().map(|l| l.0).collect();
    let vectors = CMatrix::from_fn(4, 4, |r, c| levels[c].2[r]);
    let tags = levels.iter().map(|l| l.1).collect();
    Ok((HermitianEigenSystem { values, vectors }, tags))
}

/// `χ_mb = (χ_+ − χ_−)/2` from the exact block eigenstates, counter-rotating terms included.
pub fn chi_mb_numeric(
    p: &MBParams,
    lambda: f64,
    omega_r: f64,
    n: i64,
    guard: f64,
) -> Result<QubitShift> {
    let (eig, tags) = block_eigensystem(p, n)?;
    let spec = LevelSpectrum::new(
        eig.values.clone(),
        tags.iter()
            .map(|&t| if t { "+" } else { "-" }.to_string())
            .collect(),
    )?;
    let coup = coupling_matrix(&eig, &block_number_operator(n), lambda)?;
    let r = dispersive_shifts(&spec, &coup, omega_r, guard)?;
    let plus = tags
        .iter()
        .position(|&t| t)
        .expect("two states per sub-block");
    let minus = tags
        .iter()
        .position(|&t| !t)
        .expect("two states per sub-block");
    Ok(QubitShift {
        chi: (r.chi[plus] - r.chi[minus]) / 2.0,
        resonance_margin: r.resonance_margin,
    })
}

/// Eigenvalues of every block in `n_window` at each offset charge, relative to the global
/// minimum. Sector labels read `"<n><sign>"`, where the sign is the logical parity of the
/// sub-block; `level` counts within the sub-block.
pub fn mb_spectrum_vs_ng(
    p: &MBParams,
    ng_grid: &[f64],
    n_window: RangeInclusive<i64>,
) -> Result<Vec<SpectrumRow>> {
    let mut rows = Vec::new();
    for &n_g in ng_grid {
        let q = MBParams { n_g, ..*p };
        let mut point = Vec::new();
        for n in n_window.clone() {
            let (eig, tags) = block_eigensystem(&q, n)?;
            let mut seen = [0usize; 2];
            for (v, t) in eig.values.iter().zip(&tags) {
                let slot = usize::from(!*t);
                point.push((format!("{n}{}", if *t { "+" } else { "-" }), seen[slot], *v));
                seen[slot] += 1;
            }
        }
        let ground = point.iter().map(|x| x.2).fold(f64::INFINITY, f64::min);
        rows.extend(point.into_iter().map(|(sector, level, v)| SpectrumRow {
            n_g,
            sector,
            level,
            freq_ghz: to_ghz(v - ground),
        }));
    }
    Ok(rows)
}

/// `ω_r` (rad/ns) that puts `f_+` at `Δ = f_+ − ω_r = delta_over_g · |g_+|`.
pub fn omega_r_for_detuning(p: &MBParams, n: i64, lambda: f64, delta_over_g: f64) -> f64 {
    let s = block_solution(p, n);
    let g = box_couplings(p, n, lambda).g_plus.norm();
    ghz(s.f_plus) - delta_over_g * g
}

/// Symmetric tunneling `t` (GHz) at which `|ε_m|` of block `n` equals `target_ghz`.
pub fn solve_tunneling_for_splitting(p: &MBParams, n: i64, target_ghz: f64) -> Result<f64> {
    if !(target_ghz > 0.0) {
        return Err(Error::domain("target splitting must be positive"));
    }
    let f = |t: f64| Ok(block_solution(&p.with_tunneling(t), n).eps_m.abs() - target_ghz);
    let (lo, hi) = crate::solve::expand_upward(f, 0.1, 2.0, "box tunneling")?;
    bisect(f, lo, hi, 1e-13, "box tunneling")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersive::DEFAULT_GUARD;
    use crate::ops::hermiticity_defect;
    use crate::units::{mhz, to_mhz};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn fig(t: f64, phi: f64) -> MBParams {
        MBParams {
            e_tot: 1.0,
            eps_dot: 4.0,
            n_g: 0.0,
            t_l: t,
            t_r: t,
            phi_x: phi,
        }
    }

    #[test]
    fn block_is_hermitian_and_split() {
        let p = MBParams {
            n_g: 0.3,
            t_r: 0.4,
            ..fig(1.2, 0.9)
        };
        let h = block_hamiltonian(&p, 1);
        assert!(hermiticity_defect(&h) <= 1e-12);
        for a in SUB_BLOCK_MINUS {
            for b in SUB_BLOCK_PLUS {
                assert_eq!(h[(a, b)].norm(), 0.0);
            }
        }
    }

    #[test]
    fn decoupled_block_is_diagonal_and_degenerate() {
        let h = block_hamiltonian(&fig(0.0, 0.3), 0);
        let e = hermitian_eig(&h).unwrap();
        assert!((e.values[0] - e.values[1]).abs() < 1e-12);
        assert!((e.values[2] - e.values[3]).abs() < 1e-12);
        let s = block_solution(&fig(0.0, 0.3), 0);
        assert_eq!(s.eps_m, 0.0);
        assert_eq!(s.eps_c, s.delta_n.abs());
    }

    #[test]
    fn sub_block_splittings_are_f_minus_and_f_plus() {
        let p = fig(1.0, PI / 2.0);
        let h = block_hamiltonian(&p, 0);
        let split = |idx: [usize; 2]| {
            let sub = CMatrix::from_fn(2, 2, |r, c| h[(idx[r], idx[c])]);
            let e = hermitian_eig(&sub).unwrap();
            to_ghz(e.values[1] - e.values[0])
        };
        // Oracle: 2x2 closed form √(δ² + |a|²) with a printed-formula magnitude.
        let fm = (25.0 + 2.0 - 2.0 * (PI / 4.0).cos()).sqrt();
        let fp = (25.0 + 2.0 + 2.0 * (PI / 4.0).cos()).sqrt();
        assert!((split(SUB_BLOCK_MINUS) - fm).abs() < 1e-12);
        assert!((split(SUB_BLOCK_PLUS) - fp).abs() < 1e-12);
    }

    #[test]
    fn worked_example_values() {
        let s = block_solution(&fig(1.0, PI / 2.0), 0);
        assert!((s.f_plus - 5.3305).abs() < 1e-4);
        assert!((s.f_minus - 5.0583).abs() < 1e-4);
        assert!((s.eps_m - 0.1361).abs() < 1e-4);
        assert!((s.eps_c - 5.1944).abs() < 1e-4);
        let g = box_couplings(&fig(1.0, PI / 2.0), 0, mhz(100.0));
        assert!((to_mhz(g.g_plus.norm()) - 17.3).abs() < 0.05);
        assert!((to_mhz(g.g_minus.norm()) - 7.57).abs() < 0.01);
    }

    #[test]
    fn small_tunneling_limit() {
        for phi in [0.0, 0.8, 2.0] {
            let t = 0.05 * 5.0;
            let s = block_solution(&fig(t, phi), 0);
            let approx = t * t * (phi / 2.0).cos() / 5.0;
            assert!((s.eps_m - approx).abs() <= 0.01 * approx.abs(), "{phi}");
        }
    }

    #[test]
    fn resonant_dot_couplings() {
        let p = MBParams {
            e_tot: 1.0,
            eps_dot: -1.0,
            ..fig(0.7, 1.3)
        };
        assert_eq!(p.delta(0), 0.0);
        let lam = mhz(100.0);
        let g = box_couplings(&p, 0, lam);
        assert_eq!(g.g_c, 0.0);
        assert_eq!(g.g_m, 0.0);
        assert!((g.g_plus.norm() - lam / 2.0).abs() <= 1e-15 * lam);
        assert!((g.g_minus.norm() - lam / 2.0).abs() <= 1e-15 * lam);
        assert!((block_solution(&p, 0).alpha_plus_mag - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn couplings_match_numeric_matrix_elements() {
        let p = MBParams {
            t_r: 0.6,
            n_g: 0.2,
            ..fig(1.1, 0.7)
        };
        let lam = mhz(100.0);
        let (eig, tags) = block_eigensystem(&p, 0).unwrap();
        let c = coupling_matrix(&eig, &block_number_operator(0), lam).unwrap();
        let g = box_couplings(&p, 0, lam);
        let pick = |minus: bool| {
            let idx: Vec<usize> = (0..4).filter(|&i| tags[i] == minus).collect();
            c.g[(idx[0], idx[1])].norm()
        };
        assert!((pick(false) - g.g_plus.norm()).abs() < 1e-12);
        assert!((pick(true) - g.g_minus.norm()).abs() < 1e-12);
        for a in 0..4 {
            for b in 0..4 {
                if tags[a] != tags[b] {
                    assert_eq!(c.g[(a, b)].norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn analytic_spot_value() {
        let p = fig(1.0, PI / 2.0);
        let lam = mhz(100.0);
        let wr = omega_r_for_detuning(&p, 0, lam, -10.0);
        let chi = to_mhz(chi_mb_analytic(&p, lam, wr, 0, DEFAULT_GUARD).unwrap().chi);
        // Oracle: scalar arithmetic with the worked-example magnitudes.
        let fp = (27.0 + 2f64.sqrt()).sqrt();
        let fm = (27.0 - 2f64.sqrt()).sqrt();
        let gp = 0.05 * (2.0 + 2f64.sqrt()).sqrt() / fp;
        let gm = 0.05 * (2.0 - 2f64.sqrt()).sqrt() / fm;
        let wr_o = fp + 10.0 * gp;
        let oracle = 0.5 * (gp * gp / (fp - wr_o) - gm * gm / (fm - wr_o)) * 1e3;
        assert!((chi - oracle).abs() < 1e-9 * oracle.abs());
        assert!((chi + 0.80).abs() < 0.01, "{chi}");
    }

    #[test]
    fn numeric_tracks_analytic() {
        let lam = mhz(100.0);
        for ratio in [0.05, 0.2, 0.5] {
            let p = fig(ratio * 5.0, 0.0);
            let wr = omega_r_for_detuning(&p, 0, lam, -10.0);
            let a = chi_mb_analytic(&p, lam, wr, 0, DEFAULT_GUARD).unwrap().chi;
            let n = chi_mb_numeric(&p, lam, wr, 0, DEFAULT_GUARD).unwrap().chi;
            assert!((n - a).abs() < 0.05 * a.abs(), "{ratio}: {n} vs {a}");
        }
    }

    #[test]
    fn chi_vanishes_without_tunneling_and_at_pi() {
        let lam = mhz(100.0);
        let wr = ghz(4.0);
        assert_eq!(
            chi_mb_numeric(&fig(0.0, 0.0), lam, wr, 0, DEFAULT_GUARD)
                .unwrap()
                .chi,
            0.0
        );
        assert_eq!(
            chi_mb_analytic(&fig(0.0, 0.0), lam, wr, 0, DEFAULT_GUARD)
                .unwrap()
                .chi,
            0.0
        );
        let p = fig(1.0, PI);
        let wr = omega_r_for_detuning(&p, 0, lam, -10.0);
        assert!(
            chi_mb_analytic(&p, lam, wr, 0, DEFAULT_GUARD)
                .unwrap()
                .chi
                .abs()
                < 1e-15
        );
        assert!(
            chi_mb_numeric(&p, lam, wr, 0, DEFAULT_GUARD)
                .unwrap()
                .chi
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn chi_even_in_flux_and_flips_across_f_plus() {
        let lam = mhz(100.0);
        let wr = ghz(5.5);
        let at = |phi: f64| {
            chi_mb_numeric(&fig(1.0, phi), lam, wr, 0, DEFAULT_GUARD)
                .unwrap()
                .chi
        };
        assert!((at(0.7) - at(-0.7)).abs() < 1e-15);
        let p = fig(1.0, 0.0);
        let fp = ghz(block_solution(&p, 0).f_plus);
        let below = chi_mb_analytic(&p, lam, fp - 0.05, 0, DEFAULT_GUARD)
            .unwrap()
            .chi;
        let above = chi_mb_analytic(&p, lam, fp + 0.05, 0, DEFAULT_GUARD)
            .unwrap()
            .chi;
        assert!(below.signum() != above.signum());
    }

    #[test]
    fn dot_geometry_only_flips_lambda() {
        assert_eq!(CouplingGeometry::Dot.lambda(0.3), -0.3);
        let p = fig(1.0, 0.4);
        let wr = ghz(5.6);
        let a = chi_mb_numeric(&p, 0.3, wr, 0, DEFAULT_GUARD).unwrap().chi;
        let b = chi_mb_numeric(&p, CouplingGeometry::Dot.lambda(0.3), wr, 0, DEFAULT_GUARD)
            .unwrap()
            .chi;
        assert!((a - b).abs() <= 1e-15 * a.abs());
    }

    #[test]
    fn spectrum_shifts_with_offset_charge() {
        let p = fig(1.0, PI / 2.0);
        let a = mb_spectrum_vs_ng(&p, &[0.2], -1..=1).unwrap();
        let b = mb_spectrum_vs_ng(&p, &[1.2], 0..=2).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.freq_ghz - y.freq_ghz).abs() < 1e-9);
        }
        assert_eq!(a.len(), 12);
    }

    #[test]
    fn tunneling_solver() {
        let p = fig(0.0, 0.0);
        let t = solve_tunneling_for_splitting(&p, 0, 1.0).unwrap();
        assert!((block_solution(&p.with_tunneling(t), 0).eps_m - 1.0).abs() < 1e-10);
        // At φ_x = 0: f_+ = δ + 2ε_m, so 4t² = (δ + 2)² − δ².
        assert!((t - (24f64).sqrt() / 2.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn block_energies_match_closed_form(
            e_tot in 1.0f64..10.0, eps in 1.0f64..10.0, tl in 0.0f64..2.0, tr in 0.0f64..2.0,
            phi in 0.0f64..(2.0 * PI), n in -2i64..=2, ng in 0.0f64..1.0,
        ) {
            let p = MBParams { e_tot, eps_dot: eps, n_g: ng, t_l: tl, t_r: tr, phi_x: phi };
            let e = hermitian_eig(&block_hamiltonian(&p, n)).unwrap();
            let s = block_solution(&p, n).energies();
            for (x, y) in e.values.iter().zip(s) {
                prop_assert!((to_ghz(*x) - y).abs() < 1e-10);
            }
        }

        #[test]
        fn numeric_chi_quadratic_in_lambda(t in 0.1f64..2.5, lam in 0.01f64..1.0) {
            let p = fig(t, 0.3);
            let wr = ghz(7.5);
            let a = chi_mb_numeric(&p, lam, wr, 0, DEFAULT_GUARD).unwrap().chi;
            let b = chi_mb_numeric(&p, 2.0 * lam, wr, 0, DEFAULT_GUARD).unwrap().chi;
            prop_assert!((b - 4.0 * a).abs() <= 1e-12 * b.abs().max(1e-300));
        }
    }
}
