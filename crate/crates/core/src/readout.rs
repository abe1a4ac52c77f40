//! Readout budgets: SNR, assignment fidelity and integration time for dispersive and
//! longitudinal measurement, plus the parametric modulation that produces a
//! longitudinal coupling for the box qubit.
//!
//! Rates are angular (rad/ns) and integration times are in µs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::box_qubit::{box_couplings, MBParams};
use crate::error::{Error, Result};
use crate::solve::{bisect, MAX_BISECTIONS};
use crate::special::erfc;
use crate::units::rate_time;

/// Below this value of `χτ` (or `κτ/2`) the SNR brackets are summed as Taylor series.
const SERIES_CUTOFF: f64 = 0.5;
const SERIES_TERMS: usize = 40;

/// Dispersive-readout inputs. Rates in rad/ns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersiveBudgetParams {
    pub chi: f64,
    pub kappa: f64,
    pub drive_amp: f64,
    pub delta_over_g: f64,
    pub nbar_target_ratio: f64,
}

impl DispersiveBudgetParams {
    /// Budget with `κ = kappa_over_chi·|χ|` and the drive set by `n̄ = ratio · n_crit`.
    pub fn from_photon_budget(
        chi: f64,
        kappa_over_chi: f64,
        delta_over_g: f64,
        nbar_target_ratio: f64,
    ) -> Result<Self> {
        let kappa = kappa_over_chi * chi.abs();
        let pb = drive_from_photon_budget(chi, kappa, delta_over_g, nbar_target_ratio)?;
        Ok(DispersiveBudgetParams {
            chi,
            kappa,
            drive_amp: pb.drive_amp,
            delta_over_g,
            nbar_target_ratio,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.chi == 0.0 || !self.chi.is_finite() {
            return Err(Error::domain("chi must be non-zero and finite"));
        }
        if !(self.kappa > 0.0) {
            return Err(Error::domain("kappa must be positive"));
        }
        if !(self.drive_amp >= 0.0) {
            return Err(Error::domain("drive amplitude must be non-negative"));
        }
        Ok(())
    }

    /// Resonator photon number `2(ϵ/κ)²`.
    pub fn nbar(&self) -> f64 {
        2.0 * (self.drive_amp / self.kappa).powi(2)
    }

    /// Whether `κ = 2|χ|`, the condition under which the SNR expression holds.
    pub fn kappa_is_optimal(&self) -> bool {
        (self.kappa - 2.0 * self.chi.abs()).abs() <= 1e-12 * self.kappa
    }
}

/// Longitudinal-readout inputs. Rates in rad/ns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LongitudinalBudgetParams {
    pub gz_tilde: f64,
    pub kappa: f64,
}

impl LongitudinalBudgetParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gz_tilde >= 0.0) {
            return Err(Error::domain("gz_tilde must be non-negative"));
        }
        if !(self.kappa > 0.0) {
            return Err(Error::domain("kappa must be positive"));
        }
        Ok(())
    }

    /// Intracavity photon number `(g̃_z/κ)²`.
    pub fn nbar(&self) -> f64 {
        (self.gz_tilde / self.kappa).powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "lowercase")]
pub enum ReadoutScheme {
    Dispersive(DispersiveBudgetParams),
    Longitudinal(LongitudinalBudgetParams),
}

impl ReadoutScheme {
    pub fn snr(&self, tau_us: f64) -> f64 {
        match self {
            ReadoutScheme::Dispersive(p) => snr_dispersive(p, tau_us),
            ReadoutScheme::Longitudinal(p) => snr_longitudinal(p, tau_us),
        }
    }

    pub fn nbar(&self) -> f64 {
        match self {
            ReadoutScheme::Dispersive(p) => p.nbar(),
            ReadoutScheme::Longitudinal(p) => p.nbar(),
        }
    }

    pub fn kappa(&self) -> f64 {
        match self {
            ReadoutScheme::Dispersive(p) => p.kappa,
            ReadoutScheme::Longitudinal(p) => p.kappa,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ReadoutScheme::Dispersive(_) => "dispersive",
            ReadoutScheme::Longitudinal(_) => "longitudinal",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ReadoutScheme::Dispersive(p) => p.validate(),
            ReadoutScheme::Longitudinal(p) => p.validate(),
        }
    }
}

/// SNR and fidelity of one scheme at one integration time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutBudget {
    pub snr: f64,
    pub fidelity: f64,
    pub tau: f64,
    pub nbar: f64,
    pub scheme: String,
}

impl ReadoutBudget {
    pub fn at(scheme: &ReadoutScheme, tau_us: f64) -> Self {
        let snr = scheme.snr(tau_us);
        ReadoutBudget {
            snr,
            fidelity: fidelity_from_snr(snr),
            tau: tau_us,
            nbar: scheme.nbar(),
            scheme: scheme.name().to_string(),
        }
    }
}

/// `1 − (1/x)(1 − e^{−x} cos x)`.
pub fn dispersive_bracket(x: f64) -> f64 {
    if x < SERIES_CUTOFF {
        // Σ_{k≥3} Re(zᵏ/k!)/x with z = −(1−i)x, leading terms x²/3 − x³/6 + x⁴/30.
        let z = Complex64::new(-x, x);
        let mut term = z * z / 2.0;
        let mut sum = 0.0;
        for k in 3..SERIES_TERMS {
            term *= z / k as f64;
            sum += term.re;
        }
        sum / x
    } else {
        1.0 - (1.0 - (-x).exp() * x.cos()) / x
    }
}

/// `1 − (2/y)(1 − e^{−y/2})`.
pub fn longitudinal_bracket(y: f64) -> f64 {
    let u = y / 2.0;
    if u < SERIES_CUTOFF {
        // Σ_{k≥1} (−1)^{k+1} uᵏ/(k+1)!, leading terms u/2 − u²/6 + u³/24.
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..SERIES_TERMS {
            term *= -u / (k + 1) as f64;
            sum -= term;
        }
        sum
    } else {
        1.0 - (1.0 - (-u).exp()) / u
    }
}

/// `SNR = 2|ϵ| √(τ/χ) [1 − (1/χτ)(1 − e^{−χτ} cos χτ)]` with `χ = |chi|`.
pub fn snr_dispersive(p: &DispersiveBudgetParams, tau_us: f64) -> f64 {
    if tau_us <= 0.0 {
        return 0.0;
    }
    let chi = p.chi.abs();
    let x = rate_time(chi, tau_us);
    2.0 * p.drive_amp.abs() * (x.sqrt() / chi) * dispersive_bracket(x)
}

/// `SNR_l = √8 |g̃_z| √(τ/κ) [1 − (2/κτ)(1 − e^{−κτ/2})]`.
pub fn snr_longitudinal(p: &LongitudinalBudgetParams, tau_us: f64) -> f64 {
    if tau_us <= 0.0 {
        return 0.0;
    }
    let y = rate_time(p.kappa, tau_us);
    8f64.sqrt() * p.gz_tilde.abs() * (y.sqrt() / p.kappa) * longitudinal_bracket(y)
}

/// `F = 1 − erfc(SNR/2)`.
pub fn fidelity_from_snr(snr: f64) -> f64 {
    1.0 - erfc(snr / 2.0)
}

/// Photon budget implied by `n̄ = ratio · n_crit` with `n_crit = (Δ/2g)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonBudget {
    pub n_crit: f64,
    pub nbar: f64,
    pub drive_amp: f64,
}

/// Drive amplitude `ϵ = κ √(n̄/2)` for `n̄ = nbar_ratio · (Δ/2g)²`.
pub fn drive_from_photon_budget(
    chi: f64,
    kappa: f64,
    delta_over_g: f64,
    nbar_ratio: f64,
) -> Result<PhotonBudget> {
    if chi == 0.0 || !(kappa > 0.0) || !(nbar_ratio >= 0.0) || delta_over_g == 0.0 {
        return Err(Error::domain(
            "photon budget needs chi != 0, kappa > 0, delta_over_g != 0, nbar_ratio >= 0",
        ));
    }
    let n_crit = (delta_over_g / 2.0).powi(2);
    let nbar = nbar_ratio * n_crit;
    Ok(PhotonBudget {
        n_crit,
        nbar,
        drive_amp: kappa * (nbar / 2.0).sqrt(),
    })
}

/// Accepted `|F(τ) − target|` of [`time_to_fidelity`].
pub const FIDELITY_TOL: f64 = 1e-8;

/// Integration time (µs) at which the fidelity reaches `target`.
///
/// The upper bracket grows geometrically from `1e-4 µs`; bisection then runs until
/// `|F(τ) − target| < FIDELITY_TOL`.
pub fn time_to_fidelity(scheme: &ReadoutScheme, target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::domain("target fidelity must lie in (0, 1)"));
    }
    scheme.validate()?;
    let gap = |tau: f64| fidelity_from_snr(scheme.snr(tau)) - target;
    let mut lo = 0.0;
    let mut hi = 1e-4;
    let mut expansions = 0;
    while gap(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        expansions += 1;
        if expansions > MAX_BISECTIONS {
            return Err(Error::NoConvergence {
                what: "readout time bracket".into(),
                iterations: expansions,
            });
        }
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let g = gap(mid);
        if g.abs() < FIDELITY_TOL {
            return Ok(mid);
        }
        if g < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        what: "readout time bisection".into(),
        iterations: MAX_BISECTIONS,
    })
}

/// Which box parameter is driven at the resonator frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModulatedParameter {
    /// Symmetric tunneling `t_L = t_R = t` (GHz).
    Tunneling,
    /// Flux phase `φ_x` (radians).
    Flux,
}

/// Longitudinal coupling produced by a sinusoidal modulation. Rates in rad/ns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulationResult {
    /// `g̃_z = g̃_m / 2` from the first Fourier cosine coefficient.
    pub gz_tilde: f64,
    /// Linearized estimate `(∂g_m/∂x) · x̃ / 2`.
    pub gz_tilde_linear: f64,
    /// Cycle-averaged `ḡ_m`.
    pub gm_mean: f64,
}

pub const MODULATION_POINTS: usize = 256;

fn with_parameter(p: &MBParams, which: ModulatedParameter, x: f64) -> MBParams {
    match which {
        ModulatedParameter::Tunneling => p.with_tunneling(x),
        ModulatedParameter::Flux => MBParams { phi_x: x, ..*p },
    }
}

fn operating_value(p: &MBParams, which: ModulatedParameter) -> f64 {
    match which {
        ModulatedParameter::Tunneling => p.t_l,
        ModulatedParameter::Flux => p.phi_x,
    }
}

/// `g_m` (rad/ns) of the zero-charge block.
pub fn g_m(p: &MBParams, lambda: f64) -> f64 {
    box_couplings(p, 0, lambda).g_m
}

/// Longitudinal coupling from modulating `parameter` around its value in `p`.
///
/// Operates on the zero-charge block. For tunneling modulation `p.t_l` is the operating
/// point and `t_R` is driven together with `t_L`.
pub fn longitudinal_modulation(
    p: &MBParams,
    lambda: f64,
    parameter: ModulatedParameter,
    mod_amplitude: f64,
) -> Result<ModulationResult> {
    let centre = operating_value(p, parameter);
    if parameter == ModulatedParameter::Tunneling {
        if (p.t_l - p.t_r).abs() > 0.0 {
            return Err(Error::domain("tunneling modulation needs t_L = t_R"));
        }
        if mod_amplitude.abs() > centre {
            return Err(Error::domain(
                "tunneling modulation would drive t below zero",
            ));
        }
    }
    let gm = |x: f64| g_m(&with_parameter(p, parameter, x), lambda);
    let h = 1e-6 * (1.0 + centre.abs());
    let slope = (gm(centre + h) - gm(centre - h)) / (2.0 * h);
    if mod_amplitude == 0.0 {
        return Ok(ModulationResult {
            gz_tilde: 0.0,
            gz_tilde_linear: 0.0,
            gm_mean: gm(centre),
        });
    }
    let m = MODULATION_POINTS;
    let mut first = 0.0;
    let mut mean = 0.0;
    for j in 0..m {
        let theta = 2.0 * PI * j as f64 / m as f64;
        let v = gm(centre + mod_amplitude * theta.cos());
        first += v * theta.cos();
        mean += v;
    }
    let gm_tilde = 2.0 * first / m as f64;
    Ok(ModulationResult {
        gz_tilde: gm_tilde / 2.0,
        gz_tilde_linear: slope * mod_amplitude / 2.0,
        gm_mean: mean / m as f64,
    })
}

/// Operating points `x̄` on `[lo, hi]` where a modulation of fixed amplitude yields
/// `|g̃_z| = target`, located by scanning `samples` points and bisecting sign changes.
pub fn solve_operating_points(
    p: &MBParams,
    lambda: f64,
    parameter: ModulatedParameter,
    mod_amplitude: f64,
    target: f64,
    (lo, hi): (f64, f64),
    samples: usize,
) -> Result<Vec<f64>> {
    let gap = |x: f64| -> Result<f64> {
        let q = with_parameter(p, parameter, x);
        Ok(
            longitudinal_modulation(&q, lambda, parameter, mod_amplitude)?
                .gz_tilde
                .abs()
                - target,
        )
    };
    let n = samples.max(2);
    let xs: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let mut roots = Vec::new();
    let mut prev = gap(xs[0])?;
    for w in xs.windows(2) {
        let next = gap(w[1])?;
        if prev.signum() != next.signum() {
            roots.push(bisect(
                gap,
                w[0],
                w[1],
                1e-12 * (1.0 + w[1].abs()),
                "operating point",
            )?);
        }
        prev = next;
    }
    Ok(roots)
}

/// Modulation amplitude needed at the operating point in `p` to reach `|g̃_z| = target`,
/// searched on `(0, max_amplitude]`. `None` when the target is out of reach.
pub fn required_amplitude(
    p: &MBParams,
    lambda: f64,
    parameter: ModulatedParameter,
    target: f64,
    max_amplitude: f64,
) -> Result<Option<f64>> {
    let gap = |a: f64| -> Result<f64> {
        Ok(longitudinal_modulation(p, lambda, parameter, a)?
            .gz_tilde
            .abs()
            - target)
    };
    let samples = 64;
    let mut prev_a = 0.0;
    let mut prev = -target;
    for i in 1..=samples {
        let a = max_amplitude * i as f64 / samples as f64;
        let g = gap(a)?;
        if prev < 0.0 && g >= 0.0 {
            return bisect(gap, prev_a, a, 1e-12 * (1.0 + a), "modulation amplitude").map(Some);
        }
        prev_a = a;
        prev = g;
    }
    Ok(None)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // reference values keep every printed digit
mod tests {
    use super::*;
    use crate::units::{ghz, mhz, to_mhz};
    use proptest::prelude::*;

    fn disp(chi_mhz: f64, nbar: f64) -> DispersiveBudgetParams {
        let chi = mhz(chi_mhz);
        let kappa = 2.0 * chi;
        DispersiveBudgetParams {
            chi,
            kappa,
            drive_amp: kappa * (nbar / 2.0).sqrt(),
            delta_over_g: -10.0,
            nbar_target_ratio: 0.2,
        }
    }

    #[test]
    fn brackets_at_worked_points() {
        let want = 1.0 - (1.0 - (-5f64).exp() * 5f64.cos()) / 5.0;
        assert!((dispersive_bracket(5.0) - want).abs() < 1e-15);
        assert!((dispersive_bracket(5.0) - 0.8004).abs() < 1e-4);
        assert!((longitudinal_bracket(4.0) - 0.5677).abs() < 1e-4);
    }

    #[test]
    fn brackets_match_high_precision_values() {
        // 40-digit reference values on both sides of the series cutoff.
        let disp_ref = [
            (1e-5, 3.333_316_666_7e-11),
            (5e-4, 8.331_250_208_333_330_9e-8),
            (1e-3, 3.331_666_999_999_984_1e-7),
            (0.3, 0.025_768_926_754_502_535),
            (0.499, 0.064_336_849_578_758_320),
            (0.5, 0.064_561_460_431_341_430),
            (0.7, 0.114_013_414_178_791_17),
            (2.0, 0.471_840_325_003_936_06),
        ];
        for (x, want) in disp_ref {
            assert!((dispersive_bracket(x) - want).abs() < 1e-13 * want, "{x}");
        }
        let long_ref = [
            (2e-5, 4.999_983_333_375e-6),
            (1e-3, 2.499_583_385_411_458_8e-4),
            (2e-3, 4.998_333_749_916_680_6e-4),
            (0.6, 0.136_060_735_605_726_22),
            (0.998, 0.212_700_388_254_087_44),
            (1.0, 0.213_061_319_425_266_85),
            (1.4, 0.280_836_148_273_442_16),
        ];
        for (y, want) in long_ref {
            assert!((longitudinal_bracket(y) - want).abs() < 1e-13 * want, "{y}");
        }
    }

    #[test]
    fn dispersive_snr_worked_example() {
        let p = disp(1.0, 5.0);
        let tau = 5.0 / (p.chi * 1e3);
        let snr = snr_dispersive(&p, tau);
        // Oracle: 2ϵ√(τ/χ)·bracket with ϵ = 2χ√2.5 is 4√2.5·√5·bracket.
        let oracle =
            4.0 * 2.5f64.sqrt() * 5f64.sqrt() * (1.0 - (1.0 - (-5f64).exp() * 5f64.cos()) / 5.0);
        assert!((snr - oracle).abs() < 1e-12 * oracle);
        assert!((snr - 11.3).abs() < 0.05);
        assert_eq!(snr_dispersive(&p, 0.0), 0.0);
    }

    #[test]
    fn snr_long_time_asymptotes() {
        let p = disp(1.0, 5.0);
        let tau = 1e4;
        let asym = 2.0 * p.drive_amp * (tau * 1e3 / p.chi).sqrt();
        assert!((snr_dispersive(&p, tau) / asym - 1.0).abs() < 1e-4);
        let l = LongitudinalBudgetParams {
            gz_tilde: mhz(10.0),
            kappa: mhz(2.0),
        };
        let asym = 8f64.sqrt() * l.gz_tilde * (tau * 1e3 / l.kappa).sqrt();
        assert!((snr_longitudinal(&l, tau) / asym - 1.0).abs() < 1e-4);
        assert_eq!(snr_longitudinal(&l, 0.0), 0.0);
    }

    /// SNR at which `F = target`, by bisection on the statrs erfc.
    fn snr_for_fidelity(target: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, 20.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if 1.0 - statrs::function::erf::erfc(mid / 2.0) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn fidelity_endpoints() {
        assert_eq!(fidelity_from_snr(0.0), 0.0);
        let snr = snr_for_fidelity(0.9999);
        assert!((snr - 5.5021).abs() < 1e-4, "{snr}");
        assert!((fidelity_from_snr(snr) - 0.9999).abs() < 1e-12);
    }

    #[test]
    fn photon_budget_numbers() {
        let chi = mhz(1.0);
        let pb = drive_from_photon_budget(chi, 2.0 * chi, -10.0, 0.2).unwrap();
        assert_eq!(pb.n_crit, 25.0);
        assert!((pb.nbar - 5.0).abs() < 1e-15);
        assert!((pb.drive_amp / (2.0 * chi) - 2.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(
            drive_from_photon_budget(chi, 2.0 * chi, -10.0, 0.0)
                .unwrap()
                .drive_amp,
            0.0
        );
        let a = drive_from_photon_budget(chi, 1.0, -10.0, 0.2)
            .unwrap()
            .drive_amp;
        let b = drive_from_photon_budget(chi, 3.0, -10.0, 0.2)
            .unwrap()
            .drive_amp;
        assert!((b - 3.0 * a).abs() < 1e-15);
    }

    #[test]
    fn readout_time_worked_example() {
        let s = ReadoutScheme::Dispersive(disp(1.0, 5.0));
        let tau = time_to_fidelity(&s, 0.9999).unwrap();
        // Oracle: independent bisection of the printed SNR formula in x = χτ.
        let target_snr = snr_for_fidelity(0.9999);
        let snr_of =
            |x: f64| 4.0 * 2.5f64.sqrt() * x.sqrt() * (1.0 - (1.0 - (-x).exp() * x.cos()) / x);
        let (mut lo, mut hi) = (0.1, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if snr_of(mid) < target_snr {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = lo;
        let chi = mhz(1.0);
        assert!(
            (tau * chi * 1e3 - x).abs() < 1e-3,
            "{} vs {x}",
            tau * chi * 1e3
        );
        assert!((x - 2.43).abs() < 0.01);
        assert!((tau - 0.39).abs() / 0.39 < 0.02, "{tau}");
    }

    #[test]
    fn readout_time_limits() {
        let s = ReadoutScheme::Dispersive(disp(1.0, 5.0));
        assert!(time_to_fidelity(&s, 1e-6).unwrap() < 1e-3);
        assert!(time_to_fidelity(&s, 1.0).is_err());
        assert!(time_to_fidelity(&s, 0.0).is_err());
        let mut strong = disp(1.0, 5.0);
        strong.drive_amp *= 2.0;
        let t1 = time_to_fidelity(&s, 0.999).unwrap();
        let t2 = time_to_fidelity(&ReadoutScheme::Dispersive(strong), 0.999).unwrap();
        assert!(t2 < t1);
    }

    fn box_at(t_over_delta: f64, phi: f64) -> MBParams {
        MBParams {
            e_tot: 1.0,
            eps_dot: 4.0,
            n_g: 0.0,
            t_l: 5.0 * t_over_delta,
            t_r: 5.0 * t_over_delta,
            phi_x: phi,
        }
    }

    #[test]
    fn modulation_zero_amplitude() {
        let r = longitudinal_modulation(
            &box_at(0.5, 0.0),
            mhz(100.0),
            ModulatedParameter::Tunneling,
            0.0,
        )
        .unwrap();
        assert_eq!(r.gz_tilde, 0.0);
    }

    #[test]
    fn modulation_linearizes_for_small_amplitude() {
        for (which, amp) in [
            (ModulatedParameter::Tunneling, 1e-3),
            (ModulatedParameter::Flux, 1e-3),
        ] {
            let r = longitudinal_modulation(&box_at(0.4, 1.0), mhz(100.0), which, amp).unwrap();
            assert!((r.gz_tilde - r.gz_tilde_linear).abs() < 0.01 * r.gz_tilde_linear.abs());
        }
    }

    #[test]
    fn modulation_of_tunneling_is_bounded() {
        // |g_m| < λ/2, so |g̃_z| stays below the first harmonic of a λ/4 square wave.
        let lam = mhz(100.0);
        let r = longitudinal_modulation(&box_at(1.0, 0.0), lam, ModulatedParameter::Tunneling, 5.0)
            .unwrap();
        assert!(r.gz_tilde.abs() < 4.0 / PI * lam / 4.0);
        assert!(to_mhz(r.gz_tilde.abs()) > 1.0);
    }

    #[test]
    fn required_amplitude_roundtrip() {
        let lam = ghz(1.0);
        let p = box_at(0.5, 0.0);
        let a = required_amplitude(&p, lam, ModulatedParameter::Tunneling, mhz(10.0), 2.5)
            .unwrap()
            .unwrap();
        let r = longitudinal_modulation(&p, lam, ModulatedParameter::Tunneling, a).unwrap();
        assert!((r.gz_tilde.abs() - mhz(10.0)).abs() < 1e-9);
        assert!(
            required_amplitude(&p, mhz(1.0), ModulatedParameter::Tunneling, mhz(10.0), 2.5)
                .unwrap()
                .is_none()
        );
    }

    proptest! {
        #[test]
        fn snr_increases_with_time(chi_mhz in 0.1f64..5.0, t1 in 1e-4f64..5.0, dt in 1e-4f64..5.0) {
            let p = disp(chi_mhz, 5.0);
            let a = snr_dispersive(&p, t1);
            let b = snr_dispersive(&p, t1 + dt);
            prop_assert!(a >= 0.0 && b > a);
            prop_assert!(fidelity_from_snr(b) >= fidelity_from_snr(a));
            let l = LongitudinalBudgetParams { gz_tilde: mhz(10.0), kappa: 2.0 * p.chi };
            prop_assert!(snr_longitudinal(&l, t1 + dt) > snr_longitudinal(&l, t1));
        }

        #[test]
        fn readout_time_inverts_fidelity(chi_mhz in 0.2f64..5.0, target in 0.6f64..0.99999) {
            let s = ReadoutScheme::Dispersive(disp(chi_mhz, 5.0));
            let tau = time_to_fidelity(&s, target).unwrap();
            prop_assert!((fidelity_from_snr(s.snr(tau)) - target).abs() < 1e-8);
        }
    }
}
