//! Noise channels acting on both qubits of an X state.
//!
//! Every channel exists twice: as explicit Kraus operators applied to a dense
//! matrix (the `kraus` module) and as a closed-form update of the eight X-state
//! parameters (the `closed_form` module). The two routes check each other.
//!
//! Conventions worth knowing, all chosen so that every set is trace
//! preserving:
//!
//! * phase damping uses `E1 = diag(0, sqrt(eta_p))`;
//! * non-Markovian dephasing uses the `sigma_z` weight `p + alpha p (1 - p)`;
//! * the correlated amplitude-damping-with-memory set acts as the identity on
//!   `|01>` and `|10>`;
//! * combined amplitude and phase damping is amplitude damping followed by
//!   phase damping on each qubit;
//! * the OUN and PLN kernels decay (`|Lambda| <= 1`).

mod closed_form;
mod kernel;
mod kraus;
mod spec;

pub use closed_form::apply_x_closed_form;
pub use kernel::{
    eta_from_p, kernel, nmad_kernel, omega, oun_lambda, p_from_eta, per_qubit_factor, pln_lambda,
    rtn_lambda, upsilon, DampingFactor,
};
pub use kraus::{
    apply, apply_memory, completeness_residual2, lift_two_qubit, memory_channel,
    single_qubit_kraus, two_qubit_channel, KrausSet, MemoryChannel, TwoQubitChannel, CPTP_TOL,
};
pub use spec::{ChannelKind, ChannelSpec, ParamDomain};
