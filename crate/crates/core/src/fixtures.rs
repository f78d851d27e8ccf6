//! Worked example states.
//!
//! The `psi*` states are returned with their integer amplitudes, unnormalized;
//! call [`BipartitePureState::normalized`] before analysis.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::density::{classical_mixture, pure_density, DensityMatrix, Factors, MixtureTerm};
use crate::numlin::{re, C64};
use crate::schmidt::BipartitePureState;

const LATIN: [&str; 2] = ["a", "b"];
const GREEK3: [&str; 3] = ["alpha", "beta", "gamma"];
const GREEK4: [&str; 4] = ["alpha", "beta", "gamma", "delta"];
const HV: [&str; 2] = ["H", "V"];

pub const PSI0_EXPR: &str = "(2|a> + |b>)(x)|alpha> + (|a> + 2|b>)(x)|beta> + (|a> + |b>)(x)|gamma>";
pub const PSI1_EXPR: &str = "(2|a> + |b>)(x)|alpha> + (|a> + 2|b>)(x)|beta> + (|a> - |b>)(x)|gamma>";
pub const PSI2_EXPR: &str =
    "(2|a> + |b>)(x)|alpha> + (|a> + 2|b>)(x)|beta> + (|a> - |b>)(x)(|gamma> - |delta>)";
pub const PSI3_EXPR: &str = "(2|a> + i|b>)(x)|alpha> + (i|a> + 2|b>)(x)|beta> + (|a> + |b>)(x)|gamma>";

/// Names accepted by [`by_name`].
pub const STATE_NAMES: [&str; 4] = ["psi0", "psi1", "psi2", "psi3"];

/// Atom-photon state with norm √12.
pub fn psi0() -> BipartitePureState {
    BipartitePureState::from_real(&LATIN, &GREEK3, &[[2.0, 1.0, 1.0], [1.0, 2.0, 1.0]]).unwrap()
}

/// `psi0` with the sign of `|b⟩⊗|γ⟩` flipped.
pub fn psi1() -> BipartitePureState {
    BipartitePureState::from_real(&LATIN, &GREEK3, &[[2.0, 1.0, 1.0], [1.0, 2.0, -1.0]]).unwrap()
}

/// Four atomic levels; norm √14.
pub fn psi2() -> BipartitePureState {
    BipartitePureState::from_real(
        &LATIN,
        &GREEK4,
        &[[2.0, 1.0, 1.0, -1.0], [1.0, 2.0, -1.0, 1.0]],
    )
    .unwrap()
}

/// Complex amplitudes; norm √12.
pub fn psi3() -> BipartitePureState {
    let i = C64::i();
    BipartitePureState::from_complex(
        &LATIN,
        &GREEK3,
        &[vec![re(2.0), i, re(1.0)], vec![i, re(2.0), re(1.0)]],
    )
    .unwrap()
}

pub fn by_name(name: &str) -> Option<BipartitePureState> {
    match name {
        "psi0" => Some(psi0()),
        "psi1" => Some(psi1()),
        "psi2" => Some(psi2()),
        "psi3" => Some(psi3()),
        _ => None,
    }
}

pub fn expression(name: &str) -> Option<&'static str> {
    match name {
        "psi0" => Some(PSI0_EXPR),
        "psi1" => Some(PSI1_EXPR),
        "psi2" => Some(PSI2_EXPR),
        "psi3" => Some(PSI3_EXPR),
        _ => None,
    }
}

fn two_qubit(amps: [[f64; 2]; 2]) -> BipartitePureState {
    BipartitePureState::from_real(&HV, &HV, &amps).unwrap()
}

/// `(|H_A V_B⟩ + |V_A H_B⟩)/√2`.
pub fn bell_hv() -> BipartitePureState {
    two_qubit([[0.0, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, 0.0]])
}

/// The four Bell states `Φ⁺, Φ⁻, Ψ⁺, Ψ⁻` in the H/V basis.
pub fn bell_states() -> [(&'static str, BipartitePureState); 4] {
    let r = FRAC_1_SQRT_2;
    [
        ("phi+", two_qubit([[r, 0.0], [0.0, r]])),
        ("phi-", two_qubit([[r, 0.0], [0.0, -r]])),
        ("psi+", two_qubit([[0.0, r], [r, 0.0]])),
        ("psi-", two_qubit([[0.0, r], [-r, 0.0]])),
    ]
}

pub fn qubit_factors() -> Factors {
    Factors::new(&HV, &HV)
}

/// Projector onto the `bell_hv` state.
pub fn rho_qm() -> DensityMatrix {
    pure_density(&bell_hv()).unwrap()
}

/// Equal-weight incoherent mixture of `H_A V_B` and `V_A H_B`.
pub fn rho_cl() -> DensityMatrix {
    classical_mixture(
        &qubit_factors(),
        &[MixtureTerm::new(0.5, "H", "V"), MixtureTerm::new(0.5, "V", "H")],
    )
    .unwrap()
}
