//! Readout models for Majorana qubits coupled to a microwave resonator.
//!
//! The crate builds charge-basis Hamiltonians for the conventional transmon,
//! the Majorana transmon and the Majorana box qubit, extracts resonator
//! dispersive shifts from a second-order Schrieffer-Wolff sum over exact
//! eigenstates, and turns those shifts into readout SNR, fidelity and time
//! budgets.
//!
//! Energies are stored internally as angular frequencies in rad/ns
//! (`2π × GHz`). Parameter records take linear frequencies in GHz; the
//! [`units`] module converts at the boundary. Readout times are in µs.
//!
//! ```
//! use majorana_readout::transmon::omega_r_numeric;
//! use majorana_readout::units::{ghz, to_mhz};
//! use majorana_readout::{chi_mt_numeric, time_to_fidelity, ChargeBasis, DispersiveBudgetParams,
//!     MTParams, ReadoutScheme, DEFAULT_GUARD};
//!
//! let p = MTParams { e_c: 0.25, e_j: 12.5, n_g: 0.0, e_m: 0.475, phi_x: 0.0 };
//! let basis = ChargeBasis::new(30);
//! let lambda = ghz(0.1);
//! let wr = omega_r_numeric(&p, lambda, -10.0, &basis)?;
//! let chi = chi_mt_numeric(&p, lambda, wr, &basis, DEFAULT_GUARD)?.chi;
//! let scheme = ReadoutScheme::Dispersive(DispersiveBudgetParams::from_photon_budget(chi, 2.0, -10.0, 0.2)?);
//! let tau = time_to_fidelity(&scheme, 0.9999)?;
//! assert!(to_mhz(chi) < 0.0 && tau > 0.0);
//! # Ok::<(), majorana_readout::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod box_qubit;
pub mod dispersive;
pub mod error;
pub mod ops;
pub mod readout;
pub mod solve;
pub mod special;
pub mod transmon;
pub mod units;

pub use box_qubit::{
    block_hamiltonian, block_number_operator, block_solution, box_couplings, chi_mb_analytic,
    chi_mb_numeric, mb_spectrum_vs_ng, BlockSolution, BoxCouplings, CouplingGeometry, MBParams,
};
pub use dispersive::{
    coupling_matrix, dispersive_shifts, qubit_chi, DispersiveResult, LevelCouplings, LevelSpectrum,
    QubitShift, DEFAULT_GUARD,
};
pub use error::{Error, Result};
pub use ops::{
    charge_shift, half_phase_window, hermitian_eig, hermiticity_defect, kron, number_operator,
    CMatrix, ChargeBasis, HermitianEigenSystem,
};
pub use readout::{
    drive_from_photon_budget, fidelity_from_snr, longitudinal_modulation, snr_dispersive,
    snr_longitudinal, time_to_fidelity, DispersiveBudgetParams, LongitudinalBudgetParams,
    ModulatedParameter, ModulationResult, PhotonBudget, ReadoutBudget, ReadoutScheme,
};
pub use transmon::{
    build_indirect_hamiltonian, build_mt_hamiltonian, chi_mt_analytic, chi_mt_numeric,
    chi_t_numeric, kerr_approximation, mt_spectrum_vs_ng, IndirectMTParams, KerrApprox, MTParams,
    Parity, SpectrumRow,
};
