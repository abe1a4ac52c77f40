//! Conversions between linear frequency (GHz) and the internal angular unit (rad/ns).

use std::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

/// Linear frequency in GHz to angular frequency in rad/ns.
pub fn ghz(f: f64) -> f64 {
    TWO_PI * f
}

/// Linear frequency in MHz to angular frequency in rad/ns.
pub fn mhz(f: f64) -> f64 {
    TWO_PI * f * 1e-3
}

/// Angular frequency in rad/ns to linear GHz.
pub fn to_ghz(w: f64) -> f64 {
    w / TWO_PI
}

/// Angular frequency in rad/ns to linear MHz.
pub fn to_mhz(w: f64) -> f64 {
    w / TWO_PI * 1e3
}

/// Dimensionless product of an angular rate (rad/ns) and a time in µs.
pub fn rate_time(w: f64, tau_us: f64) -> f64 {
    w * tau_us * 1e3
}
