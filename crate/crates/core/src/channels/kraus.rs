//! Operator-sum representations and their application to dense states.

use crate::channels::kernel::{nmad_kernel, per_qubit_factor};
use crate::channels::spec::ChannelSpec;
use crate::error::{Error, Result};
use crate::qmat::{
    adjoint2, adjoint4, identity2, identity4, kron, max_abs_diff2, max_abs_diff4, mul2, mul4, re,
    zeros2, zeros4, DenseState, Mat2, Mat4,
};

/// Maximum allowed `|sum E^dag E - I|` entry.
pub const CPTP_TOL: f64 = 1e-12;

/// Maximum allowed deviation of an output trace from one.
const TRACE_TOL: f64 = 1e-10;

fn sum_dagger_products4(ops: &[Mat4]) -> Mat4 {
    let mut acc = zeros4();
    for e in ops {
        let p = mul4(&adjoint4(e), e);
        for i in 0..4 {
            for j in 0..4 {
                acc[i][j] += p[i][j];
            }
        }
    }
    acc
}

pub fn completeness_residual2(ops: &[Mat2]) -> f64 {
    let mut acc = zeros2();
    for e in ops {
        let p = mul2(&adjoint2(e), e);
        for i in 0..2 {
            for j in 0..2 {
                acc[i][j] += p[i][j];
            }
        }
    }
    max_abs_diff2(&acc, &identity2())
}

/// Kraus operators on the two-qubit space.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    ops: Vec<Mat4>,
}

impl KrausSet {
    pub fn new(ops: Vec<Mat4>) -> Result<Self> {
        let set = Self { ops };
        let residual = set.completeness_residual();
        if residual > CPTP_TOL {
            return Err(Error::Cptp(residual));
        }
        Ok(set)
    }

    /// Skips the completeness check. Only for exercising the checks
    /// themselves.
    pub fn new_unchecked(ops: Vec<Mat4>) -> Self {
        Self { ops }
    }

    pub fn identity() -> Self {
        Self {
            ops: vec![identity4()],
        }
    }

    pub fn operators(&self) -> &[Mat4] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn completeness_residual(&self) -> f64 {
        max_abs_diff4(&sum_dagger_products4(&self.ops), &identity4())
    }

    fn conjugate_sum(&self, rho: &Mat4) -> Mat4 {
        let mut out = zeros4();
        for e in &self.ops {
            let term = mul4(&mul4(e, rho), &adjoint4(e));
            for i in 0..4 {
                for j in 0..4 {
                    out[i][j] += term[i][j];
                }
            }
        }
        out
    }

    pub fn apply(&self, rho: &DenseState) -> Result<DenseState> {
        apply(self, rho)
    }
}

fn checked_output(m: Mat4) -> Result<DenseState> {
    let tr: f64 = (0..4).map(|i| m[i][i].re).sum();
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceDrift((tr - 1.0).abs()));
    }
    Ok(DenseState::from_channel_output(m))
}

/// `rho -> sum_i E_i rho E_i^dag`.
pub fn apply(ks: &KrausSet, rho: &DenseState) -> Result<DenseState> {
    checked_output(ks.conjugate_sum(rho.matrix()))
}

/// Two uses of a channel with memory: with probability `1 - mu` the noise on
/// the two qubits is uncorrelated, with probability `mu` it is perfectly
/// correlated.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryChannel {
    uncorrelated: KrausSet,
    correlated: KrausSet,
    mu: f64,
}

impl MemoryChannel {
    pub fn new(uncorrelated: KrausSet, correlated: KrausSet, mu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::Parameter {
                name: "mu",
                value: mu,
                domain: "[0, 1]",
            });
        }
        let mc = Self {
            uncorrelated,
            correlated,
            mu,
        };
        let residual = mc.completeness_residual();
        if residual > CPTP_TOL {
            return Err(Error::Cptp(residual));
        }
        Ok(mc)
    }

    pub fn uncorrelated(&self) -> &KrausSet {
        &self.uncorrelated
    }

    pub fn correlated(&self) -> &KrausSet {
        &self.correlated
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Residual of `(1 - mu) sum E_u^dag E_u + mu sum E_c^dag E_c = I`.
    pub fn completeness_residual(&self) -> f64 {
        let u = sum_dagger_products4(&self.uncorrelated.ops);
        let c = sum_dagger_products4(&self.correlated.ops);
        let mut acc = zeros4();
        for i in 0..4 {
            for j in 0..4 {
                acc[i][j] = u[i][j] * (1.0 - self.mu) + c[i][j] * self.mu;
            }
        }
        max_abs_diff4(&acc, &identity4())
    }

    pub fn apply(&self, rho: &DenseState) -> Result<DenseState> {
        apply_memory(self, rho)
    }
}

pub fn apply_memory(mc: &MemoryChannel, rho: &DenseState) -> Result<DenseState> {
    let mu = mc.mu;
    // Skip a branch entirely when its weight is zero so that mu = 0 and
    // mu = 1 reproduce the single-branch result bit for bit.
    let out = if mu == 0.0 {
        mc.uncorrelated.conjugate_sum(rho.matrix())
    } else if mu == 1.0 {
        mc.correlated.conjugate_sum(rho.matrix())
    } else {
        let u = mc.uncorrelated.conjugate_sum(rho.matrix());
        let c = mc.correlated.conjugate_sum(rho.matrix());
        let mut m = zeros4();
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = u[i][j] * (1.0 - mu) + c[i][j] * mu;
            }
        }
        m
    };
    checked_output(out)
}

fn diag2(a: f64, b: f64) -> Mat2 {
    [[re(a), re(0.0)], [re(0.0), re(b)]]
}

fn lowering(weight: f64) -> Mat2 {
    [[re(0.0), re(weight)], [re(0.0), re(0.0)]]
}

fn sigma_z() -> Mat2 {
    diag2(1.0, -1.0)
}

fn scaled(m: &Mat2, s: f64) -> Mat2 {
    m.map(|row| row.map(|z| z * s))
}

fn amplitude_damping_ops(eta_a: f64) -> Vec<Mat2> {
    vec![diag2(1.0, (1.0 - eta_a).sqrt()), lowering(eta_a.sqrt())]
}

fn phase_damping_ops(eta_p: f64) -> Vec<Mat2> {
    vec![diag2(1.0, (1.0 - eta_p).sqrt()), diag2(0.0, eta_p.sqrt())]
}

/// Pauli-diagonal dephasing with coherence factor `f`:
/// `{sqrt((1+f)/2) I, sqrt((1-f)/2) Z}`.
fn pauli_dephasing_ops(f: f64) -> Vec<Mat2> {
    vec![
        scaled(&identity2(), (0.5 * (1.0 + f)).sqrt()),
        scaled(&sigma_z(), (0.5 * (1.0 - f)).sqrt()),
    ]
}

/// Single-qubit Kraus operators of a channel that acts independently on each
/// qubit. Memory kinds have no such form and are rejected.
pub fn single_qubit_kraus(spec: &ChannelSpec) -> Result<Vec<Mat2>> {
    spec.validate()?;
    let ops = match *spec {
        ChannelSpec::Pd { eta_p } => phase_damping_ops(eta_p),
        ChannelSpec::Nmd { p, alpha } => {
            let w0 = (1.0 - alpha * p) * (1.0 - p);
            let w1 = p + alpha * p * (1.0 - p);
            vec![
                scaled(&identity2(), w0.sqrt()),
                scaled(&sigma_z(), w1.sqrt()),
            ]
        }
        ChannelSpec::Rtn { .. } | ChannelSpec::Oun { .. } | ChannelSpec::Pln { .. } => {
            pauli_dephasing_ops(per_qubit_factor(spec).expect("per-qubit kind"))
        }
        ChannelSpec::Ad { eta_a } => amplitude_damping_ops(eta_a),
        ChannelSpec::Ap { eta_a, eta_p } => {
            let mut ops = Vec::with_capacity(4);
            for pd in phase_damping_ops(eta_p) {
                for ad in amplitude_damping_ops(eta_a) {
                    ops.push(mul2(&pd, &ad));
                }
            }
            ops
        }
        ChannelSpec::Nmad {
            gamma,
            big_gamma,
            t,
        } => {
            let pt = nmad_kernel(gamma, big_gamma, t).clamp(0.0, 1.0);
            vec![diag2(1.0, pt.sqrt()), lowering((1.0 - pt).sqrt())]
        }
        ChannelSpec::PdMem { .. } | ChannelSpec::AdMem { .. } => {
            return Err(Error::Usage(format!(
                "{} is a two-use memory channel; build it with memory_channel",
                spec.kind()
            )))
        }
    };
    Ok(ops)
}

/// All pairwise tensor products `E_i ⊗ E_j` of a complete single-qubit set.
pub fn lift_two_qubit(ops: &[Mat2]) -> Result<KrausSet> {
    let residual = completeness_residual2(ops);
    if residual > CPTP_TOL {
        return Err(Error::Cptp(residual));
    }
    let lifted = ops
        .iter()
        .flat_map(|a| ops.iter().map(move |b| kron(a, b)))
        .collect();
    KrausSet::new(lifted)
}

fn ket_bra(row: usize, col: usize, weight: f64) -> Mat4 {
    let mut m = zeros4();
    m[row][col] = re(weight);
    m
}

fn add4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j];
        }
    }
    out
}

/// Builds the uncorrelated and correlated operator sets of a memory kind.
///
/// * PDMem: `E^u_ij = sqrt(p_i p_j) s_i ⊗ s_j` and `E^c_kk = sqrt(p_k) s_k ⊗ s_k`
///   over `s_0 = I`, `s_3 = Z` with `p_0 = 1 - p`, `p_3 = p`.
/// * ADMem: the uncorrelated part is amplitude damping on each qubit. The
///   correlated part is `E^c_00 = |00><00| + |01><01| + |10><10| +
///   sqrt(1 - eta_a)|11><11|` and `E^c_11 = sqrt(eta_a)|00><11|`: the pair
///   decays together, single excitations are untouched.
pub fn memory_channel(spec: &ChannelSpec) -> Result<MemoryChannel> {
    spec.validate()?;
    match *spec {
        ChannelSpec::PdMem { p, mu } => {
            let paulis = [(1.0 - p, identity2()), (p, sigma_z())];
            let mut unc = Vec::with_capacity(4);
            for (pi, si) in &paulis {
                for (pj, sj) in &paulis {
                    unc.push(kron(&scaled(si, (pi * pj).sqrt()), sj));
                }
            }
            let cor = paulis
                .iter()
                .map(|(pk, sk)| kron(&scaled(sk, pk.sqrt()), sk))
                .collect();
            MemoryChannel::new(KrausSet::new(unc)?, KrausSet::new(cor)?, mu)
        }
        ChannelSpec::AdMem { eta_a, mu } => {
            let unc = lift_two_qubit(&amplitude_damping_ops(eta_a))?;
            let e00 = [
                ket_bra(0, 0, 1.0),
                ket_bra(1, 1, 1.0),
                ket_bra(2, 2, 1.0),
                ket_bra(3, 3, (1.0 - eta_a).sqrt()),
            ]
            .iter()
            .fold(zeros4(), |acc, m| add4(&acc, m));
            let e11 = ket_bra(0, 3, eta_a.sqrt());
            MemoryChannel::new(unc, KrausSet::new(vec![e00, e11])?, mu)
        }
        _ => Err(Error::Usage(format!(
            "{} is not a memory channel",
            spec.kind()
        ))),
    }
}

/// Either form of two-qubit channel.
#[derive(Debug, Clone, PartialEq)]
pub enum TwoQubitChannel {
    Plain(KrausSet),
    Memory(MemoryChannel),
}

impl TwoQubitChannel {
    pub fn apply(&self, rho: &DenseState) -> Result<DenseState> {
        match self {
            TwoQubitChannel::Plain(ks) => apply(ks, rho),
            TwoQubitChannel::Memory(mc) => apply_memory(mc, rho),
        }
    }

    pub fn completeness_residual(&self) -> f64 {
        match self {
            TwoQubitChannel::Plain(ks) => ks.completeness_residual(),
            TwoQubitChannel::Memory(mc) => mc.completeness_residual(),
        }
    }
}

/// The Kraus route for any spec: the lifted single-qubit set, or the memory
/// channel for PDMem/ADMem.
pub fn two_qubit_channel(spec: &ChannelSpec) -> Result<TwoQubitChannel> {
    if spec.kind().is_memory() {
        memory_channel(spec).map(TwoQubitChannel::Memory)
    } else {
        lift_two_qubit(&single_qubit_kraus(spec)?).map(TwoQubitChannel::Plain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{dense_to_x, XState};
    use crate::xstates::{bell, mnms};

    #[test]
    fn zero_phase_damping_is_identity_plus_null_operator() {
        let ops = single_qubit_kraus(&ChannelSpec::Pd { eta_p: 0.0 }).unwrap();
        assert_eq!(ops[0], identity2());
        assert_eq!(ops[1], zeros2());
        assert_eq!(completeness_residual2(&ops), 0.0);
    }

    #[test]
    fn full_amplitude_damping_lowers_one_to_zero() {
        let ops = single_qubit_kraus(&ChannelSpec::Ad { eta_a: 1.0 }).unwrap();
        assert_eq!(ops[1][0][1], re(1.0));
        assert_eq!(ops[0][1][1], re(0.0));
    }

    #[test]
    fn nmd_weights_at_full_non_markovianity() {
        let ops = single_qubit_kraus(&ChannelSpec::Nmd {
            p: 0.25,
            alpha: 1.0,
        })
        .unwrap();
        let w0 = ops[0][0][0].norm_sqr();
        let w1 = ops[1][0][0].norm_sqr();
        assert!((w0 - 0.5625).abs() < 1e-15);
        assert!((w1 - 0.4375).abs() < 1e-15);
        assert!(completeness_residual2(&ops) < 1e-15);
    }

    #[test]
    fn lifting_cardinality_and_completeness() {
        let one = lift_two_qubit(&[identity2()]).unwrap();
        assert_eq!(one.operators(), &[identity4()]);
        let pd =
            lift_two_qubit(&single_qubit_kraus(&ChannelSpec::Pd { eta_p: 0.3 }).unwrap()).unwrap();
        assert_eq!(pd.len(), 4);
        assert!(pd.completeness_residual() < 1e-15);
        let broken = [diag2(1.0, 1.0), diag2(0.0, 0.1)];
        assert!(matches!(lift_two_qubit(&broken), Err(Error::Cptp(_))));
    }

    #[test]
    fn memory_kinds_are_not_single_qubit() {
        let spec = ChannelSpec::PdMem { p: 0.1, mu: 0.5 };
        assert!(matches!(single_qubit_kraus(&spec), Err(Error::Usage(_))));
        assert!(memory_channel(&ChannelSpec::Pd { eta_p: 0.1 }).is_err());
    }

    #[test]
    fn identity_set_leaves_state_unchanged() {
        let rho = bell().to_dense();
        assert_eq!(KrausSet::identity().apply(&rho).unwrap(), rho);
    }

    #[test]
    fn full_amplitude_damping_relaxes_to_ground() {
        let ks = lift_two_qubit(&amplitude_damping_ops(1.0)).unwrap();
        let x = XState::real([0.1, 0.2, 0.3, 0.4], 0.1, 0.2).unwrap();
        let out = dense_to_x(&apply(&ks, &x.to_dense()).unwrap(), 1e-15).unwrap();
        assert_eq!(out, XState::real([1.0, 0.0, 0.0, 0.0], 0.0, 0.0).unwrap());
    }

    #[test]
    fn phase_damping_on_bell() {
        let ks = lift_two_qubit(&phase_damping_ops(0.3)).unwrap();
        let out = dense_to_x(&apply(&ks, &bell().to_dense()).unwrap(), 1e-15).unwrap();
        assert!((out.c14().re - 0.35).abs() < 1e-15);
        assert_eq!(out.populations(), [0.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn memory_channel_limits() {
        let x = XState::real([0.1, 0.2, 0.3, 0.4], 0.15, 0.2).unwrap();
        let rho = x.to_dense();

        // mu = 0 is the plain uncorrelated channel.
        let mc = memory_channel(&ChannelSpec::PdMem { p: 0.2, mu: 0.0 }).unwrap();
        assert_eq!(
            apply_memory(&mc, &rho).unwrap(),
            apply(mc.uncorrelated(), &rho).unwrap()
        );

        // mu = 1 freezes X states under correlated dephasing.
        for p in [0.0, 0.1, 0.3, 0.5] {
            let mc = memory_channel(&ChannelSpec::PdMem { p, mu: 1.0 }).unwrap();
            let out = apply_memory(&mc, &rho).unwrap();
            assert!(max_abs_diff4(out.matrix(), rho.matrix()) <= 1e-15);
        }
    }

    #[test]
    fn admem_full_memory_full_damping() {
        let mc = memory_channel(&ChannelSpec::AdMem {
            eta_a: 1.0,
            mu: 1.0,
        })
        .unwrap();
        let out = dense_to_x(&apply_memory(&mc, &bell().to_dense()).unwrap(), 1e-15).unwrap();
        assert_eq!(out.c14().norm(), 0.0);

        let x = XState::real([0.2, 0.3, 0.3, 0.2], 0.1, 0.25).unwrap();
        let out = dense_to_x(&apply_memory(&mc, &x.to_dense()).unwrap(), 1e-15).unwrap();
        assert_eq!(out.c23(), x.c23());
        assert_eq!(out.c14().norm(), 0.0);
    }

    #[test]
    fn admem_bell_coherence_factors() {
        for (eta_a, mu) in [(0.3, 0.9), (0.5, 0.5), (0.8, 0.2)] {
            let mc = memory_channel(&ChannelSpec::AdMem { eta_a, mu }).unwrap();
            let zeta: f64 = 1.0 - eta_a;
            let x = mnms(1.0).unwrap();
            let out = dense_to_x(&apply_memory(&mc, &x.to_dense()).unwrap(), 1e-15).unwrap();
            let f14 = zeta + mu * zeta.sqrt() * (1.0 - zeta.sqrt());
            assert!((out.c14().re - 0.5 * f14).abs() < 1e-15);

            let y = XState::real([0.0, 0.5, 0.5, 0.0], 0.0, 0.5).unwrap();
            let out = dense_to_x(&apply_memory(&mc, &y.to_dense()).unwrap(), 1e-15).unwrap();
            assert!((out.c23().re - 0.5 * (zeta + mu * eta_a)).abs() < 1e-15);
        }
    }

    #[test]
    fn trace_drift_is_reported() {
        let mut e = identity4();
        e[0][0] = re(1.01);
        let ks = KrausSet::new_unchecked(vec![e]);
        assert!(KrausSet::new(vec![e]).is_err());
        assert!(matches!(
            ks.apply(&bell().to_dense()),
            Err(Error::TraceDrift(_))
        ));
    }
}
