//! Closed-form X-state updates.

use crate::channels::kernel::{kernel, nmad_kernel};
use crate::channels::spec::ChannelSpec;
use crate::error::Result;
use crate::qmat::XState;

/// Populations after amplitude damping on both qubits with survival
/// amplitude factor `zeta = 1 - eta_a`:
///
/// ```text
/// p11' = p11 + (1 - zeta)(p22 + p33 + (1 - zeta) p44)
/// p44' = zeta^2 p44
/// pjj' = zeta (pjj + (1 - zeta) p44),  j = 2, 3
/// ```
pub(crate) fn damped_populations(pop: [f64; 4], zeta: f64) -> [f64; 4] {
    let [p11, p22, p33, p44] = pop;
    let loss = 1.0 - zeta;
    [
        p11 + loss * (p22 + p33 + loss * p44),
        zeta * (p22 + loss * p44),
        zeta * (p33 + loss * p44),
        zeta * zeta * p44,
    ]
}

/// Applies a channel directly to the X-state parameters.
///
/// Dephasing kinds keep the populations and multiply both coherences by
/// the kernel's `zeta`. AD, NMAD and AP move population towards `|00>` with
/// the amplitude factor (`1 - eta_a`, or `p(t)` for NMAD) and scale the
/// coherences by their `zeta`. ADMem mixes the uncorrelated AD update with
/// the correlated branch, giving distinct factors
/// `zeta + mu sqrt(zeta)(1 - sqrt(zeta))` on `rho_14` and `zeta + mu eta_a`
/// on `rho_23`.
pub fn apply_x_closed_form(spec: &ChannelSpec, x: &XState) -> Result<XState> {
    let zeta = kernel(spec)?.zeta();
    let pop = x.populations();
    let (new_pop, f14, f23) = match *spec {
        ChannelSpec::Pd { .. }
        | ChannelSpec::PdMem { .. }
        | ChannelSpec::Nmd { .. }
        | ChannelSpec::Rtn { .. }
        | ChannelSpec::Oun { .. }
        | ChannelSpec::Pln { .. } => (pop, zeta, zeta),
        ChannelSpec::Ad { .. } => (damped_populations(pop, zeta), zeta, zeta),
        ChannelSpec::Nmad {
            gamma,
            big_gamma,
            t,
        } => {
            let amp = nmad_kernel(gamma, big_gamma, t).clamp(0.0, 1.0);
            (damped_populations(pop, amp), amp, amp)
        }
        ChannelSpec::Ap { eta_a, .. } => (damped_populations(pop, 1.0 - eta_a), zeta, zeta),
        ChannelSpec::AdMem { eta_a, mu } => {
            let [_, p22, p33, p44] = pop;
            let ad = damped_populations(pop, zeta);
            let loss = 1.0 - zeta;
            let new_pop = [
                ad[0] - mu * loss * (p22 + p33 - zeta * p44),
                ad[1] + mu * loss * (p22 - zeta * p44),
                ad[2] + mu * loss * (p33 - zeta * p44),
                ad[3] + mu * zeta * loss * p44,
            ];
            let root = zeta.sqrt();
            (new_pop, zeta + mu * root * (1.0 - root), zeta + mu * eta_a)
        }
    };
    XState::new(new_pop, x.c14() * f14, x.c23() * f23)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xstates::{bell, mnms};

    #[test]
    fn mnms_stays_mnms_under_phase_damping() {
        for (eps, eta) in [(0.6, 0.3), (1.0, 0.5), (0.2, 0.9)] {
            let out =
                apply_x_closed_form(&ChannelSpec::Pd { eta_p: eta }, &mnms(eps).unwrap()).unwrap();
            let expected = mnms(eps * (1.0 - eta)).unwrap();
            assert!(out.max_abs_diff(&expected) < 1e-16);
        }
    }

    #[test]
    fn bell_under_amplitude_damping() {
        let out = apply_x_closed_form(&ChannelSpec::Ad { eta_a: 0.3 }, &bell()).unwrap();
        let expected = [0.545, 0.105, 0.105, 0.245];
        for (a, b) in out.populations().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{:?}", out.populations());
        }
        assert!((out.c14().re - 0.35).abs() < 1e-15);
    }

    #[test]
    fn admem_reduces_to_ad_without_memory() {
        let x = XState::real([0.1, 0.2, 0.3, 0.4], 0.15, 0.2).unwrap();
        let a = apply_x_closed_form(
            &ChannelSpec::AdMem {
                eta_a: 0.4,
                mu: 0.0,
            },
            &x,
        )
        .unwrap();
        let b = apply_x_closed_form(&ChannelSpec::Ad { eta_a: 0.4 }, &x).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-16);
    }
}
