//! Shared fixtures for the solver benchmarks and acceptance checks.

use majorana_readout::units::ghz;
use majorana_readout::{ChargeBasis, MBParams, MTParams};

/// Transmon regime used throughout: `E_J/E_C = 50`.
pub const TRANSMON: MTParams = MTParams {
    e_c: 0.25,
    e_j: 12.5,
    n_g: 0.0,
    e_m: 0.0,
    phi_x: 0.0,
};

/// Box with `δ = 5 GHz` and no tunneling.
pub const BOX: MBParams = MBParams {
    e_tot: 1.0,
    eps_dot: 4.0,
    n_g: 0.0,
    t_l: 0.0,
    t_r: 0.0,
    phi_x: 0.0,
};

/// `λ/2π = 100 MHz` in rad/ns.
pub fn lambda() -> f64 {
    ghz(0.1)
}

pub fn basis() -> ChargeBasis {
    ChargeBasis::new(30)
}

/// Majorana transmon with `E_M` set to a fraction of `ω_t = √(8E_JE_C) − E_C`.
pub fn mt_with_ratio(ratio: f64) -> MTParams {
    let omega_t = (8.0 * TRANSMON.e_j * TRANSMON.e_c).sqrt() - TRANSMON.e_c;
    TRANSMON.with_e_m(ratio * omega_t / 2.0)
}

/// Box with tunneling `t = ratio · δ`.
pub fn box_with_ratio(ratio: f64, phi_x: f64) -> MBParams {
    MBParams { phi_x, ..BOX }.with_tunneling(ratio * BOX.delta(0))
}
