//! Scalar figures of merit for X states: the l1-norm and relative-entropy
//! coherences, concurrence, teleportation and CHSH quantities, first-order
//! and hidden coherence, and their rates of change along channel parameters.

use std::fmt;
use std::str::FromStr;

use crate::channels::{apply_x_closed_form, ChannelSpec, ParamDomain};
use crate::error::{Error, Result};
use crate::qmat::{entropy_bits, partial_trace, DenseState, Spectrum, Subsystem, XState};

/// l1 norm of coherence: the sum of moduli of all off-diagonal entries,
/// `2(|rho_14| + |rho_23|)` for an X state.
pub fn m0_l1(x: &XState) -> f64 {
    2.0 * (x.c14().norm() + x.c23().norm())
}

/// Slack under which a negative relative entropy is rounding noise.
const M1_CLAMP: f64 = 1e-12;

/// Relative entropy of coherence in bits: `S(diag rho) - S(rho)`.
pub fn m1_rel_ent(x: &XState) -> f64 {
    let s_diag = entropy_bits(&x.populations()).expect("validated populations");
    let s = x.spectrum().entropy();
    let m1 = s_diag - s;
    if (-M1_CLAMP..0.0).contains(&m1) {
        0.0
    } else {
        m1
    }
}

pub fn concurrence_x(x: &XState) -> f64 {
    let a = x.c14().norm() - (x.p22() * x.p33()).sqrt();
    let b = x.c23().norm() - (x.p11() * x.p44()).sqrt();
    (2.0 * a).max(2.0 * b).max(0.0)
}

fn population_contrast(x: &XState) -> f64 {
    x.p11() + x.p44() - x.p22() - x.p33()
}

/// `N = 2[|rho_14| + |rho_23| + ||rho_14| - |rho_23||] + |rho_11 + rho_44 - rho_22 - rho_33|`,
/// the trace norm of the correlation matrix.
pub fn n_tele(x: &XState) -> f64 {
    let a = x.c14().norm();
    let b = x.c23().norm();
    2.0 * (a + b + (a - b).abs()) + population_contrast(x).abs()
}

/// Maximal average teleportation fidelity `1/2 + N/6`.
pub fn f_max(x: &XState) -> f64 {
    0.5 + n_tele(x) / 6.0
}

/// Beats the classical fidelity 2/3, i.e. `N > 1`.
pub fn useful_for_teleportation(x: &XState) -> bool {
    n_tele(x) > 1.0
}

/// CHSH quantity `max{8(|rho_14|^2 + |rho_23|^2), 4(|rho_14| + |rho_23|)^2 + contrast^2}`.
pub fn m_bell(x: &XState) -> f64 {
    let a = x.c14().norm();
    let b = x.c23().norm();
    let first = 8.0 * (a * a + b * b);
    let second = 4.0 * (a + b).powi(2) + population_contrast(x).powi(2);
    first.max(second)
}

/// Strictly `m_bell > 1`; the boundary counts as local.
pub fn violates_chsh(x: &XState) -> bool {
    m_bell(x) > 1.0
}

fn purity2(m: &crate::qmat::Mat2) -> f64 {
    // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho.
    m.iter().flatten().map(|z| z.norm_sqr()).sum()
}

/// First-order coherence `D^2 = (D_A^2 + D_B^2)/2` with
/// `D_i^2 = 2 Tr[rho_i^2] - 1`. Purities are clamped to `[1/2, 1]`.
pub fn first_order_coherence(m: &DenseState) -> f64 {
    let d2 = |keep| 2.0 * purity2(&partial_trace(m, keep)).clamp(0.5, 1.0) - 1.0;
    0.5 * (d2(Subsystem::A) + d2(Subsystem::B))
}

/// Hidden coherence `(l1 - l4)^2 + (l2 - l3)^2` for eigenvalues in
/// decreasing order.
pub fn hidden_coherence(s: &Spectrum) -> f64 {
    let [l1, l2, l3, l4] = s.values();
    (l1 - l4).powi(2) + (l2 - l3).powi(2)
}

/// Names accepted on the command line and used as CSV column headers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MeasureId {
    M0,
    M1,
    Conc,
    N,
    Fmax,
    Mbell,
    D2,
    D2max,
}

impl MeasureId {
    pub const ALL: [MeasureId; 8] = [
        MeasureId::M0,
        MeasureId::M1,
        MeasureId::Conc,
        MeasureId::N,
        MeasureId::Fmax,
        MeasureId::Mbell,
        MeasureId::D2,
        MeasureId::D2max,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureId::M0 => "m0",
            MeasureId::M1 => "m1",
            MeasureId::Conc => "conc",
            MeasureId::N => "n",
            MeasureId::Fmax => "fmax",
            MeasureId::Mbell => "mbell",
            MeasureId::D2 => "d2",
            MeasureId::D2max => "d2max",
        }
    }

    pub fn evaluate(self, x: &XState) -> f64 {
        match self {
            MeasureId::M0 => m0_l1(x),
            MeasureId::M1 => m1_rel_ent(x),
            MeasureId::Conc => concurrence_x(x),
            MeasureId::N => n_tele(x),
            MeasureId::Fmax => f_max(x),
            MeasureId::Mbell => m_bell(x),
            MeasureId::D2 => first_order_coherence(&x.to_dense()),
            MeasureId::D2max => hidden_coherence(&x.spectrum()),
        }
    }

    pub fn parse_list(text: &str) -> Result<Vec<MeasureId>> {
        let mut out = Vec::new();
        for item in text.split(',').map(str::trim) {
            let id: MeasureId = item.parse()?;
            if !out.contains(&id) {
                out.push(id);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeasureId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown measure `{s}` (expected one of m0, m1, conc, n, fmax, mbell, d2, d2max)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureVector {
    pub m0: f64,
    pub m1: f64,
    pub concurrence: f64,
    pub n_tele: f64,
    pub f_max: f64,
    pub m_bell: f64,
    pub d2: f64,
    pub d2_max: f64,
}

impl MeasureVector {
    pub fn of(x: &XState) -> Self {
        let n = n_tele(x);
        Self {
            m0: m0_l1(x),
            m1: m1_rel_ent(x),
            concurrence: concurrence_x(x),
            n_tele: n,
            f_max: 0.5 + n / 6.0,
            m_bell: m_bell(x),
            d2: first_order_coherence(&x.to_dense()),
            d2_max: hidden_coherence(&x.spectrum()),
        }
    }

    pub fn get(&self, id: MeasureId) -> f64 {
        match id {
            MeasureId::M0 => self.m0,
            MeasureId::M1 => self.m1,
            MeasureId::Conc => self.concurrence,
            MeasureId::N => self.n_tele,
            MeasureId::Fmax => self.f_max,
            MeasureId::Mbell => self.m_bell,
            MeasureId::D2 => self.d2,
            MeasureId::D2max => self.d2_max,
        }
    }
}

/// Step used by [`rate_fd`] when the caller has no reason to choose another.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// A finite-difference derivative; `one_sided` is set when the parameter
/// was too close to its domain boundary for a central difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdRate {
    pub value: f64,
    pub one_sided: bool,
}

/// Derivative of `measure(channel(x))` with respect to one channel parameter,
/// by central difference `[f(theta + h) - f(theta - h)] / 2h`, falling back
/// to a forward or backward difference at the domain edges.
pub fn rate_fd(
    measure: MeasureId,
    spec: &ChannelSpec,
    param: &str,
    x: &XState,
    h: f64,
) -> Result<FdRate> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Usage(format!(
            "finite-difference step {h} must be positive"
        )));
    }
    let theta = spec.param(param).ok_or_else(|| {
        Error::Usage(format!(
            "channel {} has no parameter `{param}`",
            spec.kind()
        ))
    })?;
    let domain = ParamDomain::of(param).expect("parameter of a valid spec");
    let f = |v: f64| -> Result<f64> {
        let moved = spec.with_param(param, v)?;
        Ok(measure.evaluate(&apply_x_closed_form(&moved, x)?))
    };
    let lo_ok = domain.contains(theta - h);
    let hi_ok = domain.contains(theta + h);
    match (lo_ok, hi_ok) {
        (true, true) => Ok(FdRate {
            value: (f(theta + h)? - f(theta - h)?) / (2.0 * h),
            one_sided: false,
        }),
        (false, true) => Ok(FdRate {
            value: (f(theta + h)? - f(theta)?) / h,
            one_sided: true,
        }),
        (true, false) => Ok(FdRate {
            value: (f(theta)? - f(theta - h)?) / h,
            one_sided: true,
        }),
        (false, false) => Err(Error::Domain(format!(
            "step {h} does not fit inside the domain of `{param}`"
        ))),
    }
}

/// `dM0/d eta_p` under phase damping: `-M0(rho)` for every X state.
pub fn rate_m0_pd(x: &XState) -> f64 {
    -m0_l1(x)
}

/// Decay rate of the relative entropy of coherence of an MNMS under phase
/// damping, `(eps / ln 2) artanh(eps (1 - eta_p))`. This is
/// `-dM1/d eta_p`.
pub fn rate_m1_mnms_pd(epsilon: f64, eta_p: f64) -> Result<f64> {
    let arg = epsilon * (1.0 - eta_p);
    if !(0.0..1.0).contains(&arg) {
        return Err(Error::Domain(format!(
            "artanh argument eps(1 - eta_p) = {arg} outside [0, 1)"
        )));
    }
    Ok(epsilon / std::f64::consts::LN_2 * arg.atanh())
}

/// Decay rate of the relative entropy of coherence of a Werner state under
/// phase damping,
/// `(eps / 2 ln 2) ln[(1 + eps + 2 eps (1 - eta_p)) / (1 + eps - 2 eps (1 - eta_p))]`.
/// This is `-dM1/d eta_p`.
pub fn rate_m1_werner_pd(epsilon: f64, eta_p: f64) -> Result<f64> {
    let shift = 2.0 * epsilon * (1.0 - eta_p);
    let num = 1.0 + epsilon + shift;
    let den = 1.0 + epsilon - shift;
    if !(num > 0.0 && den > 0.0) {
        return Err(Error::Domain(format!(
            "log argument {num}/{den} is not positive"
        )));
    }
    Ok(epsilon / (2.0 * std::f64::consts::LN_2) * (num / den).ln())
}

pub fn binary_entropy(q: f64) -> f64 {
    entropy_bits(&[q, 1.0 - q]).unwrap_or(0.0)
}

/// Relative entropy of coherence of `MNMS(eps)`: `1 - h2((1 + eps)/2)`.
pub fn mnms_m1(epsilon: f64) -> f64 {
    1.0 - binary_entropy(0.5 * (1.0 + epsilon))
}

/// The MNMS boundary: the `eps` at which `MNMS(eps)` has relative entropy
/// of coherence `m1`, found by bisection to `1e-12`. Its l1 coherence is
/// `eps`, so `m0 <= mnms_boundary(m1)` is the dephasing containment bound.
pub fn mnms_boundary(m1: f64) -> f64 {
    if m1 <= 0.0 {
        return 0.0;
    }
    if m1 >= 1.0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if mnms_m1(mid) < m1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xstates::{bell, mnms, werner};

    fn diagonal() -> XState {
        XState::real([0.1, 0.2, 0.3, 0.4], 0.0, 0.0).unwrap()
    }

    #[test]
    fn l1_examples() {
        assert_eq!(m0_l1(&bell()), 1.0);
        assert_eq!(m0_l1(&diagonal()), 0.0);
        let out =
            apply_x_closed_form(&ChannelSpec::Pd { eta_p: 0.3 }, &mnms(0.6).unwrap()).unwrap();
        assert!((m0_l1(&out) - 0.42).abs() < 1e-15);
    }

    #[test]
    fn relative_entropy_examples() {
        assert!((m1_rel_ent(&bell()) - 1.0).abs() < 1e-15);
        assert_eq!(m1_rel_ent(&diagonal()), 0.0);
        let h2 = -(0.8f64 * 0.8f64.log2() + 0.2 * 0.2f64.log2());
        assert!((m1_rel_ent(&mnms(0.6).unwrap()) - (1.0 - h2)).abs() < 1e-15);
        assert!((m1_rel_ent(&mnms(0.6).unwrap()) - 0.278_071_905_112_637_7).abs() < 1e-15);
    }

    #[test]
    fn concurrence_examples() {
        assert_eq!(concurrence_x(&bell()), 1.0);
        assert!(concurrence_x(&werner(1.0 / 3.0).unwrap()).abs() < 1e-15);
        assert!((concurrence_x(&werner(0.5).unwrap()) - 0.25).abs() < 1e-15);
        assert_eq!(concurrence_x(&werner(0.2).unwrap()), 0.0);
    }

    #[test]
    fn teleportation_examples() {
        assert_eq!(n_tele(&bell()), 3.0);
        assert_eq!(f_max(&bell()), 1.0);
        let dephased = XState::real([0.5, 0.0, 0.0, 0.5], 0.0, 0.0).unwrap();
        assert_eq!(n_tele(&dephased), 1.0);
        assert!((f_max(&dephased) - 2.0 / 3.0).abs() < 1e-15);
        assert!(!useful_for_teleportation(&dephased));
    }

    #[test]
    fn dephased_mnms_fidelity_tracks_l1() {
        // With the trace-norm N, an MNMS has N = 1 + 4|rho_14| = 1 + 2 M0.
        for eps in [0.1, 0.5, 0.9, 1.0] {
            for eta in [0.0, 0.3, 0.7] {
                let x = apply_x_closed_form(&ChannelSpec::Pd { eta_p: eta }, &mnms(eps).unwrap())
                    .unwrap();
                assert!((n_tele(&x) - (1.0 + 2.0 * m0_l1(&x))).abs() < 1e-15);
                assert!(f_max(&x) >= 2.0 / 3.0);
            }
        }
    }

    #[test]
    fn chsh_examples() {
        assert_eq!(m_bell(&bell()), 2.0);
        let mixed = XState::real([0.25; 4], 0.0, 0.0).unwrap();
        assert_eq!(m_bell(&mixed), 0.0);
        for eps in [0.01, 0.3, 0.7, 1.0] {
            let x = mnms(eps).unwrap();
            let expected = (2.0 * eps * eps).max(eps * eps + 1.0);
            assert!((m_bell(&x) - expected).abs() < 1e-15);
            assert!(violates_chsh(&x));
        }
    }

    #[test]
    fn first_order_coherence_examples() {
        assert!(first_order_coherence(&bell().to_dense()).abs() < 1e-15);
        let ground = XState::real([1.0, 0.0, 0.0, 0.0], 0.0, 0.0).unwrap();
        assert_eq!(first_order_coherence(&ground.to_dense()), 1.0);
        assert!(first_order_coherence(&werner(0.5).unwrap().to_dense()).abs() < 1e-15);
    }

    #[test]
    fn hidden_coherence_examples() {
        assert_eq!(hidden_coherence(&bell().spectrum()), 1.0);
        let mixed = XState::real([0.25; 4], 0.0, 0.0).unwrap();
        assert_eq!(hidden_coherence(&mixed.spectrum()), 0.0);
        let eps: f64 = 0.5;
        let spec = Spectrum::new([
            (1.0 + 3.0 * eps) / 4.0,
            (1.0 - eps) / 4.0,
            (1.0 - eps) / 4.0,
            (1.0 - eps) / 4.0,
        ])
        .unwrap();
        assert!((hidden_coherence(&spec) - 0.25).abs() < 1e-15);
        assert!((hidden_coherence(&werner(0.5).unwrap().spectrum()) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn measure_ids_parse() {
        assert_eq!(
            MeasureId::parse_list("m0,m1,d2max").unwrap(),
            vec![MeasureId::M0, MeasureId::M1, MeasureId::D2max]
        );
        assert!("M0".parse::<MeasureId>().is_err());
        let v = MeasureVector::of(&bell());
        for id in MeasureId::ALL {
            assert_eq!(v.get(id), id.evaluate(&bell()));
        }
    }

    #[test]
    fn closed_form_rate_values() {
        assert_eq!(rate_m1_mnms_pd(0.7, 1.0).unwrap(), 0.0);
        let v = rate_m1_mnms_pd(1.0, 0.3).unwrap();
        assert!((v - 0.7f64.atanh() / std::f64::consts::LN_2).abs() < 1e-15);
        assert!((v - 1.251_250_170_264_591_5).abs() < 1e-12);
        assert!(rate_m1_mnms_pd(1.0, 0.0).is_err());
        assert!(rate_m1_mnms_pd(1e-12, 0.3).unwrap() < 1e-20);

        assert_eq!(rate_m1_werner_pd(0.5, 1.0).unwrap(), 0.0);
        assert!(rate_m1_werner_pd(1.0, 0.0).is_err());
        assert!(rate_m1_werner_pd(1e-12, 0.3).unwrap() < 1e-20);
    }

    #[test]
    fn fd_matches_closed_form_rates() {
        let h = DEFAULT_FD_STEP;
        let pd = ChannelSpec::Pd { eta_p: 0.3 };
        let fd = rate_fd(MeasureId::M1, &pd, "eta_p", &bell(), h).unwrap();
        assert!(!fd.one_sided);
        let closed = rate_m1_mnms_pd(1.0, 0.3).unwrap();
        assert!(((-fd.value) - closed).abs() / closed < 1e-4);

        let w = werner(0.5).unwrap();
        let fd = rate_fd(MeasureId::M1, &pd, "eta_p", &w, h).unwrap();
        let closed = rate_m1_werner_pd(0.5, 0.3).unwrap();
        assert!(((-fd.value) - closed).abs() / closed < 1e-4);

        let fd = rate_fd(MeasureId::M0, &pd, "eta_p", &w, h).unwrap();
        assert!((fd.value - rate_m0_pd(&w)).abs() < 1e-9);
    }

    #[test]
    fn fd_falls_back_at_edges() {
        let frozen = ChannelSpec::PdMem { p: 0.0, mu: 1.0 };
        let x = werner(0.7).unwrap();
        for id in MeasureId::ALL {
            let fd = rate_fd(id, &frozen, "p", &x, DEFAULT_FD_STEP).unwrap();
            assert!(fd.one_sided);
            assert_eq!(fd.value, 0.0);
        }
        let top = ChannelSpec::Pd { eta_p: 1.0 };
        assert!(
            rate_fd(MeasureId::M0, &top, "eta_p", &x, 1e-5)
                .unwrap()
                .one_sided
        );
        assert!(rate_fd(MeasureId::M0, &top, "mu", &x, 1e-5).is_err());
        assert!(rate_fd(MeasureId::M0, &top, "eta_p", &x, 0.0).is_err());
    }

    #[test]
    fn small_damping_m1_falls_faster_when_strongly_coherent() {
        // |dM1/d eta_p| >= |dM0/d eta_p| = eps holds iff artanh(eps(1-eta_p)) >= ln 2,
        // i.e. eps(1 - eta_p) >= tanh(ln 2) = 0.6.
        assert!((std::f64::consts::LN_2.tanh() - 0.6).abs() < 1e-15);
        for eps in [0.64, 0.7, 0.85, 1.0] {
            for eta in [0.001, 0.02, 0.05] {
                if eps * (1.0 - eta) >= 0.6 {
                    assert!(rate_m1_mnms_pd(eps, eta).unwrap() >= eps);
                }
            }
        }
        assert!(rate_m1_mnms_pd(0.3, 0.01).unwrap() < 0.3);
    }

    #[test]
    fn mnms_boundary_inverts_relative_entropy() {
        for eps in [0.0, 0.05, 0.3, 0.6, 0.97] {
            let m1 = mnms_m1(eps);
            assert!((mnms_boundary(m1) - eps).abs() < 1e-9);
        }
        assert_eq!(mnms_boundary(1.0), 1.0);
        assert_eq!(mnms_boundary(-1e-14), 0.0);
    }
}
