//! Damping factors: the scalar by which a channel multiplies the X-state
//! coherences.

use crate::channels::spec::ChannelSpec;
use crate::error::Result;

/// Two-qubit coherence factor `zeta`. Per-qubit kernels (NMD, RTN, OUN, PLN)
/// enter squared, so their sign cancels here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingFactor(f64);

impl DampingFactor {
    pub fn zeta(self) -> f64 {
        self.0
    }
}

/// `eta_p = 1 - (1 - 2p)^2`, written as `4p(1 - p)`.
pub fn eta_from_p(p: f64) -> f64 {
    4.0 * p * (1.0 - p)
}

/// Inverse of [`eta_from_p`] on `p` in `[0, 1/2]`.
pub fn p_from_eta(eta_p: f64) -> f64 {
    0.5 * (1.0 - (1.0 - eta_p).max(0.0).sqrt())
}

/// `Omega(p, mu) = (1 - 2p)^2 + 4 mu p (1 - p)`.
///
/// Evaluated as `1 - 4p(1-p)(1-mu)` so that `mu = 1` gives exactly one.
pub fn omega(p: f64, mu: f64) -> f64 {
    1.0 - eta_from_p(p) * (1.0 - mu)
}

/// Per-qubit non-Markovian dephasing factor `1 - 2p - 2 alpha p (1 - p)`.
pub fn upsilon(p: f64, alpha: f64) -> f64 {
    1.0 - 2.0 * p - 2.0 * alpha * p * (1.0 - p)
}

/// Random telegraph noise kernel with `x = gamma t` and
/// `w^2 = (2b/gamma)^2 - 1`:
///
/// `Lambda = e^{-x} [cos(w x) + sin(w x) / w]`.
///
/// For `4b^2 < gamma^2` the frequency is imaginary and the same expression
/// becomes `e^{-x} [cosh(k x) + sinh(k x) / k]` with `k^2 = -w^2`.
pub fn rtn_lambda(gamma: f64, b: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let x = gamma * t;
    let w2 = (2.0 * b / gamma).powi(2) - 1.0;
    if w2 > 0.0 {
        let w = w2.sqrt();
        (-x).exp() * ((w * x).cos() + (w * x).sin() / w)
    } else if w2 < 0.0 {
        // 0 < k < 1; fold e^{-x} into the exponentials so large x cannot overflow.
        let k = (-w2).sqrt();
        0.5 * (((k - 1.0) * x).exp() * (1.0 + 1.0 / k) + (-(k + 1.0) * x).exp() * (1.0 - 1.0 / k))
    } else {
        (-x).exp() * (1.0 + x)
    }
}

/// Modified Ornstein-Uhlenbeck kernel
/// `exp[-(Gamma/2) (t + (e^{-gamma t} - 1) / gamma)]`; tends to
/// `exp(-Gamma t / 2)` for large `gamma`.
pub fn oun_lambda(gamma: f64, big_gamma: f64, t: f64) -> f64 {
    // -expm1(-x) = 1 - e^{-x}, accurate for small gamma t.
    let memory = t + (-gamma * t).exp_m1() / gamma;
    (-0.5 * big_gamma * memory).exp()
}

/// Power law noise kernel `exp[-Gamma t (gamma t + 2) / (2 (gamma t + 1)^2)]`.
pub fn pln_lambda(gamma: f64, big_gamma: f64, t: f64) -> f64 {
    let x = gamma * t;
    (-big_gamma * t * (x + 2.0) / (2.0 * (x + 1.0).powi(2))).exp()
}

/// Non-Markovian amplitude damping kernel
///
/// `p(t) = e^{-Gamma t} [cos(d t/2) + (Gamma/d) sin(d t/2)]^2`,
/// `d = sqrt(2 gamma Gamma - Gamma^2)`,
///
/// with the hyperbolic continuation when `2 gamma < Gamma`.
pub fn nmad_kernel(gamma: f64, big_gamma: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let d2 = 2.0 * gamma * big_gamma - big_gamma * big_gamma;
    let half_t = 0.5 * t;
    let damp = -big_gamma * half_t;
    let amplitude = if d2 > 0.0 {
        let d = d2.sqrt();
        damp.exp() * ((d * half_t).cos() + big_gamma / d * (d * half_t).sin())
    } else if d2 < 0.0 {
        // k < Gamma, so both exponents below are non-positive.
        let k = (-d2).sqrt();
        let r = big_gamma / k;
        0.5 * ((k * half_t + damp).exp() * (1.0 + r) + (damp - k * half_t).exp() * (1.0 - r))
    } else {
        damp.exp() * (1.0 + big_gamma * half_t)
    };
    amplitude * amplitude
}

/// Factor applied to a single-qubit coherence, for the kinds that act
/// identically and independently on each qubit with a Pauli-diagonal Kraus
/// form. `None` for the others.
pub fn per_qubit_factor(spec: &ChannelSpec) -> Option<f64> {
    match *spec {
        ChannelSpec::Nmd { p, alpha } => Some(upsilon(p, alpha)),
        ChannelSpec::Rtn { gamma, b, t } => Some(rtn_lambda(gamma, b, t)),
        ChannelSpec::Oun {
            gamma,
            big_gamma,
            t,
        } => Some(oun_lambda(gamma, big_gamma, t)),
        ChannelSpec::Pln {
            gamma,
            big_gamma,
            t,
        } => Some(pln_lambda(gamma, big_gamma, t)),
        _ => None,
    }
}

/// The coherence factor of a channel:
///
/// | kind            | zeta                       |
/// |-----------------|----------------------------|
/// | PD              | `1 - eta_p`                |
/// | PDMem           | `Omega(p, mu)`             |
/// | NMD             | `Upsilon(p, alpha)^2`      |
/// | RTN / OUN / PLN | `Lambda(t)^2`              |
/// | AD              | `1 - eta_a`                |
/// | AP              | `(1 - eta_a)(1 - eta_p)`   |
/// | NMAD            | `p(t)`                     |
///
/// ADMem scales its two coherences differently; its value here is the
/// memoryless `1 - eta_a`.
pub fn kernel(spec: &ChannelSpec) -> Result<DampingFactor> {
    spec.validate()?;
    let zeta = match *spec {
        ChannelSpec::Pd { eta_p } => 1.0 - eta_p,
        ChannelSpec::PdMem { p, mu } => omega(p, mu),
        ChannelSpec::Ad { eta_a } | ChannelSpec::AdMem { eta_a, .. } => 1.0 - eta_a,
        ChannelSpec::Ap { eta_a, eta_p } => (1.0 - eta_a) * (1.0 - eta_p),
        ChannelSpec::Nmad {
            gamma,
            big_gamma,
            t,
        } => nmad_kernel(gamma, big_gamma, t),
        ChannelSpec::Nmd { .. }
        | ChannelSpec::Rtn { .. }
        | ChannelSpec::Oun { .. }
        | ChannelSpec::Pln { .. } => {
            let f = per_qubit_factor(spec).expect("per-qubit kind");
            f * f
        }
    };
    Ok(DampingFactor(zeta))
}
