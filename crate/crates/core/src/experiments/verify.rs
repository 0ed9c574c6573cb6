use std::fmt;

use rayon::prelude::*;

use super::with_workers;
use crate::channels::{
    apply_x_closed_form, single_qubit_kraus, two_qubit_channel, ChannelKind, ChannelSpec, KrausSet,
    ParamDomain, TwoQubitChannel, CPTP_TOL,
};
use crate::error::Result;
use crate::measures::{
    f_max, m0_l1, m1_rel_ent, m_bell, mnms_boundary, rate_fd, MeasureId, DEFAULT_FD_STEP,
};
use crate::qmat::{eigvals_dense, eigvals_x, kron, max_abs_diff4, Mat2, XState};
use crate::xstates::XSampler;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub workers: Option<usize>,
    /// Break completeness of one phase-damping operator by this amount.
    pub inject_cptp_fault: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            samples: 10_000,
            seed: super::DEFAULT_SEED,
            workers: None,
            inject_cptp_fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, max_residual: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name,
            max_residual,
            tolerance,
            detail,
        }
    }

    /// NaN residuals (a failed evaluation somewhere) never pass.
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<16} max residual {:.3e} (tol {:.0e})  {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.max_residual,
            self.tolerance,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

/// NaN-propagating maximum.
fn worst(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn par_max(samples: usize, f: impl Fn(u64) -> f64 + Sync + Send) -> f64 {
    (0..samples as u64)
        .into_par_iter()
        .map(f)
        .reduce(|| f64::NEG_INFINITY, worst)
}

fn ok_or_nan(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

/// Five parameter settings per channel kind, chosen to reach every branch
/// of its kernel.
pub fn representative_settings(kind: ChannelKind) -> Vec<ChannelSpec> {
    use ChannelSpec::*;
    match kind {
        ChannelKind::Pd => [0.0, 0.1, 0.3, 0.7, 1.0].map(|eta_p| Pd { eta_p }).to_vec(),
        ChannelKind::PdMem => [(0.0, 0.5), (0.1, 0.9), (0.25, 0.5), (0.4, 0.0), (0.5, 1.0)]
            .map(|(p, mu)| PdMem { p, mu })
            .to_vec(),
        ChannelKind::Nmd => [(0.1, 1.0), (0.25, 1.0), (0.5, 1.0), (0.3, 0.5), (0.45, 0.0)]
            .map(|(p, alpha)| Nmd { p, alpha })
            .to_vec(),
        ChannelKind::Rtn => [
            (10.0, 0.05),
            (10.0, 0.1),
            (10.0, 0.15),
            (10.0, 0.4),
            (0.2, 1.0),
        ]
        .map(|(b, t)| Rtn { gamma: 1.0, b, t })
        .to_vec(),
        ChannelKind::Oun => [
            (1.0, 16.0, 0.05),
            (1.0, 16.0, 0.15),
            (1.0, 16.0, 0.5),
            (2.0, 1.0, 1.0),
            (0.5, 3.0, 2.0),
        ]
        .map(|(gamma, big_gamma, t)| Oun {
            gamma,
            big_gamma,
            t,
        })
        .to_vec(),
        ChannelKind::Pln => [
            (1.0, 16.0, 0.05),
            (1.0, 16.0, 0.15),
            (1.0, 16.0, 0.5),
            (2.0, 1.0, 1.0),
            (0.5, 3.0, 2.0),
        ]
        .map(|(gamma, big_gamma, t)| Pln {
            gamma,
            big_gamma,
            t,
        })
        .to_vec(),
        ChannelKind::Ad => [0.0, 0.1, 0.3, 0.7, 1.0].map(|eta_a| Ad { eta_a }).to_vec(),
        ChannelKind::AdMem => [(0.3, 0.9), (0.3, 0.0), (0.5, 0.5), (0.9, 1.0), (0.0, 0.3)]
            .map(|(eta_a, mu)| AdMem { eta_a, mu })
            .to_vec(),
        ChannelKind::Ap => [(0.3, 0.1), (0.0, 0.0), (0.5, 0.5), (1.0, 0.2), (0.2, 1.0)]
            .map(|(eta_a, eta_p)| Ap { eta_a, eta_p })
            .to_vec(),
        ChannelKind::Nmad => [
            (0.1, 0.25),
            (0.1, 1.0),
            (0.1, 1.5),
            (0.1, 8.24),
            (10.0, 0.5),
        ]
        .map(|(big_gamma, t)| Nmad {
            gamma: 1.0,
            big_gamma,
            t,
        })
        .to_vec(),
    }
}

fn all_settings() -> Vec<ChannelSpec> {
    ChannelKind::ALL
        .into_iter()
        .flat_map(representative_settings)
        .collect()
}

const GRID_POINTS: usize = 20;

fn param_grid(name: &str) -> Vec<f64> {
    let dom = ParamDomain::of(name).expect("known parameter");
    let lin = |lo: f64, hi: f64| -> Vec<f64> {
        (0..GRID_POINTS)
            .map(|i| lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64)
            .collect()
    };
    if dom.hi.is_finite() {
        lin(dom.lo, dom.hi)
    } else if dom.lo_inclusive {
        lin(0.0, 10.0)
    } else {
        lin(-2.0, 2.0).into_iter().map(|e| 10f64.powf(e)).collect()
    }
}

/// Twenty points along each parameter of `kind`, the others held at a
/// representative setting.
pub fn cptp_grid(kind: ChannelKind) -> Vec<ChannelSpec> {
    let base = representative_settings(kind)[1];
    let mut out = Vec::new();
    for &(name, _) in base.params().iter() {
        for v in param_grid(name) {
            out.push(base.with_param(name, v).expect("grid inside domain"));
        }
    }
    out
}

fn faulty_phase_damping(fault: f64) -> KrausSet {
    let mut ops: Vec<Mat2> =
        single_qubit_kraus(&ChannelSpec::Pd { eta_p: 0.3 }).expect("valid phase damping");
    let scale = (1.0 + fault).sqrt();
    for z in ops[0].iter_mut().flatten() {
        *z *= scale;
    }
    let mut lifted = Vec::new();
    for a in &ops {
        for b in &ops {
            lifted.push(kron(a, b));
        }
    }
    KrausSet::new_unchecked(lifted)
}

/// Completeness of every channel kind over its parameter grids.
pub fn check_cptp(inject_fault: Option<f64>) -> CheckResult {
    let mut worst_res = f64::NEG_INFINITY;
    let mut worst_at = String::new();
    let mut count = 0;
    for kind in ChannelKind::ALL {
        for spec in cptp_grid(kind) {
            count += 1;
            let r = two_qubit_channel(&spec)
                .map(|ch| ch.completeness_residual())
                .unwrap_or(f64::NAN);
            if r.is_nan() || r > worst_res {
                worst_res = worst(worst_res, r);
                worst_at = spec.to_string();
            }
        }
    }
    if let Some(fault) = inject_fault {
        count += 1;
        let r = faulty_phase_damping(fault).completeness_residual();
        if r > worst_res {
            worst_res = r;
            worst_at = format!("injected fault {fault:e}");
        }
    }
    CheckResult::new(
        "cptp",
        worst_res,
        CPTP_TOL,
        format!("{count} parameter points, worst at {worst_at}"),
    )
}

/// Closed-form X update against explicit Kraus evolution of the dense state.
pub fn check_dual_path(samples: usize, seed: u64) -> CheckResult {
    let sampler = XSampler::new(seed);
    let channels: Vec<(ChannelSpec, Option<TwoQubitChannel>)> = all_settings()
        .into_iter()
        .map(|s| (s, two_qubit_channel(&s).ok()))
        .collect();
    let res = par_max(samples, |i| {
        let x = sampler.sample(i);
        let dense = x.to_dense();
        channels.iter().fold(f64::NEG_INFINITY, |acc, (spec, ch)| {
            let Some(ch) = ch else { return f64::NAN };
            let d = (|| -> Result<f64> {
                let kraus = ch.apply(&dense)?;
                let closed = apply_x_closed_form(spec, &x)?.to_dense();
                Ok(max_abs_diff4(kraus.matrix(), closed.matrix()))
            })();
            worst(acc, ok_or_nan(d))
        })
    });
    CheckResult::new(
        "dual-path",
        res,
        1e-12,
        format!("{samples} states x {} settings", channels.len()),
    )
}

/// Closed-form X spectrum against the dense Hermitian solver.
pub fn check_eigen_oracle(samples: usize, seed: u64) -> CheckResult {
    let sampler = XSampler::new(seed);
    let res = par_max(samples, |i| {
        let x = sampler.sample(i);
        ok_or_nan(eigvals_dense(&x.to_dense()).map(|d| {
            let c = eigvals_x(&x).values();
            d.values()
                .iter()
                .zip(c.iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        }))
    });
    CheckResult::new("eigen-oracle", res, 1e-10, format!("{samples} states"))
}

fn rana_gap(x: &XState) -> f64 {
    m1_rel_ent(x) - m0_l1(x)
}

/// `M1 <= M0` before and after every representative channel.
pub fn check_rana(samples: usize, seed: u64) -> CheckResult {
    let sampler = XSampler::new(seed);
    let settings = all_settings();
    let res = par_max(samples, |i| {
        let x = sampler.sample(i);
        settings.iter().fold(rana_gap(&x), |acc, spec| {
            worst(
                acc,
                ok_or_nan(apply_x_closed_form(spec, &x).map(|y| rana_gap(&y))),
            )
        })
    });
    CheckResult::new(
        "rana",
        res,
        1e-9,
        format!(
            "max(M1 - M0) over {samples} states, pre and {} settings",
            settings.len()
        ),
    )
}

fn horodecki_violation(x: &XState) -> f64 {
    if m_bell(x) > 1.0 && f_max(x) <= 2.0 / 3.0 {
        1.0
    } else {
        0.0
    }
}

/// Counterexamples to `m_bell > 1 => F_max > 2/3`, before and after every
/// representative channel.
pub fn check_horodecki(samples: usize, seed: u64) -> CheckResult {
    let sampler = XSampler::new(seed);
    let settings = all_settings();
    let count: f64 = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let x = sampler.sample(i);
            settings.iter().fold(horodecki_violation(&x), |acc, spec| {
                acc + apply_x_closed_form(spec, &x)
                    .map(|y| horodecki_violation(&y))
                    .unwrap_or(f64::NAN)
            })
        })
        .sum();
    CheckResult::new(
        "horodecki",
        count,
        0.0,
        format!(
            "counterexamples among {samples} states, pre and {} settings",
            settings.len()
        ),
    )
}

const FROZEN_P: [f64; 6] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];
const FROZEN_RATE_STATES: usize = 256;

/// Complete memory freezes dephasing with memory: the state is untouched
/// and every measure is flat in `p`. Returns the state check and the rate
/// check.
pub fn check_frozen(samples: usize, seed: u64) -> [CheckResult; 2] {
    let sampler = XSampler::new(seed);
    let specs = FROZEN_P.map(|p| ChannelSpec::PdMem { p, mu: 1.0 });
    let state = par_max(samples, |i| {
        let x = sampler.sample(i);
        specs.iter().fold(f64::NEG_INFINITY, |acc, s| {
            worst(
                acc,
                ok_or_nan(apply_x_closed_form(s, &x).map(|y| y.max_abs_diff(&x))),
            )
        })
    });
    let rate_states = samples.min(FROZEN_RATE_STATES);
    let rates = par_max(rate_states, |i| {
        let x = sampler.sample(i);
        let mut acc = f64::NEG_INFINITY;
        for s in &specs {
            for m in MeasureId::ALL {
                let r = rate_fd(m, s, "p", &x, DEFAULT_FD_STEP).map(|r| r.value.abs());
                acc = worst(acc, ok_or_nan(r));
            }
        }
        acc
    });
    [
        CheckResult::new(
            "frozen-state",
            state,
            1e-15,
            format!("{samples} states, p in 0..0.5, mu = 1"),
        ),
        CheckResult::new(
            "frozen-rates",
            rates,
            1e-10,
            format!("|d measure / dp| for {rate_states} states, all measures"),
        ),
    ]
}

/// Dephasing settings whose scatter clouds sit under the MNMS curve.
pub fn containment_presets() -> Vec<ChannelSpec> {
    let nmd = |eta_p: f64| {
        ChannelSpec::from_params(ChannelKind::Nmd, &[("eta_p", eta_p), ("alpha", 1.0)])
            .expect("valid preset")
    };
    vec![
        ChannelSpec::Pd { eta_p: 0.3 },
        nmd(0.3),
        nmd(1.0),
        ChannelSpec::Rtn {
            gamma: 1.0,
            b: 10.0,
            t: 0.1,
        },
        ChannelSpec::Rtn {
            gamma: 1.0,
            b: 10.0,
            t: 0.15,
        },
        ChannelSpec::Oun {
            gamma: 1.0,
            big_gamma: 16.0,
            t: 0.15,
        },
        ChannelSpec::Pln {
            gamma: 1.0,
            big_gamma: 16.0,
            t: 0.15,
        },
    ]
}

/// Largest `m0 - eps*(m1)` over channel outputs: how far any point rises
/// above the MNMS boundary.
pub fn check_containment(samples: usize, seed: u64, presets: &[ChannelSpec]) -> CheckResult {
    let sampler = XSampler::new(seed);
    let res = par_max(samples, |i| {
        let x = sampler.sample(i);
        presets.iter().fold(f64::NEG_INFINITY, |acc, s| {
            let excess =
                apply_x_closed_form(s, &x).map(|y| m0_l1(&y) - mnms_boundary(m1_rel_ent(&y)));
            worst(acc, ok_or_nan(excess))
        })
    });
    CheckResult::new(
        "mnms-boundary",
        res,
        1e-6,
        format!(
            "max(m0 - eps*(m1)) over {samples} states x {} dephasing presets",
            presets.len()
        ),
    )
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let (n, seed) = (cfg.samples, cfg.seed);
    with_workers(cfg.workers, || {
        let mut checks = vec![
            check_cptp(cfg.inject_cptp_fault),
            check_dual_path(n, seed),
            check_eigen_oracle(n, seed),
            check_rana(n, seed),
            check_horodecki(n, seed),
        ];
        checks.extend(check_frozen(n, seed));
        checks.push(check_containment(n, seed, &containment_presets()));
        VerifyReport { checks }
    })
}
