//! Named X-state families and a seeded sampler over the whole X-state
//! manifold.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qmat::XState;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter {
            name: "epsilon",
            value: epsilon,
            domain: "(0, 1]",
        })
    }
}

pub fn bell() -> XState {
    XState::real([0.5, 0.0, 0.0, 0.5], 0.5, 0.0).expect("Bell state is physical")
}

/// Maximally nonlocal mixed state `(|00><00| + |11><11| + eps(|00><11| + h.c.)) / 2`.
pub fn mnms(epsilon: f64) -> Result<XState> {
    check_epsilon(epsilon)?;
    XState::real([0.5, 0.0, 0.0, 0.5], epsilon / 2.0, 0.0)
}

/// Werner state: Bell state with weight `eps` mixed with `I/4`.
pub fn werner(epsilon: f64) -> Result<XState> {
    check_epsilon(epsilon)?;
    let outer = (1.0 + epsilon) / 4.0;
    let inner = (1.0 - epsilon) / 4.0;
    XState::real([outer, inner, inner, outer], epsilon / 2.0, 0.0)
}

/// The piecewise MEMS weight: `eps/2` for `eps >= 2/3`, otherwise `1/3`.
pub fn mems_weight(epsilon: f64) -> f64 {
    if epsilon >= 2.0 / 3.0 {
        epsilon / 2.0
    } else {
        1.0 / 3.0
    }
}

/// Maximally entangled mixed state with populations `(g, 1 - 2g, 0, g)`.
pub fn mems(epsilon: f64) -> Result<XState> {
    check_epsilon(epsilon)?;
    let g = mems_weight(epsilon);
    XState::real([g, 1.0 - 2.0 * g, 0.0, g], epsilon / 2.0, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Mnms,
    Werner,
    Mems,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Mnms, Family::Mems, Family::Werner];

    pub fn state(self, epsilon: f64) -> Result<XState> {
        match self {
            Family::Mnms => mnms(epsilon),
            Family::Werner => werner(epsilon),
            Family::Mems => mems(epsilon),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Mnms => "mnms",
            Family::Werner => "werner",
            Family::Mems => "mems",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mnms" => Ok(Family::Mnms),
            "werner" => Ok(Family::Werner),
            "mems" => Ok(Family::Mems),
            other => Err(Error::Usage(format!(
                "unknown family `{other}` (expected mnms, werner or mems)"
            ))),
        }
    }
}

/// A family member together with its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParam {
    Mnms(f64),
    Werner(f64),
    Mems(f64),
    Bell,
    Custom(XState),
}

impl FamilyParam {
    pub fn new(family: Family, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(match family {
            Family::Mnms => FamilyParam::Mnms(epsilon),
            Family::Werner => FamilyParam::Werner(epsilon),
            Family::Mems => FamilyParam::Mems(epsilon),
        })
    }

    pub fn state(&self) -> Result<XState> {
        match *self {
            FamilyParam::Mnms(e) => mnms(e),
            FamilyParam::Werner(e) => werner(e),
            FamilyParam::Mems(e) => mems(e),
            FamilyParam::Bell => Ok(bell()),
            FamilyParam::Custom(x) => Ok(x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub count: usize,
}

impl SamplerConfig {
    pub fn new(seed: u64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::Usage("sample count must be at least 1".into()));
        }
        Ok(Self { seed, count })
    }
}

/// Counter-based sampler: sample `i` depends only on `(seed, i)`.
///
/// Populations are uniform on the 3-simplex (normalised exponential draws),
/// coherence moduli are uniform on `[0, sqrt(p11 p44)]` and
/// `[0, sqrt(p22 p33)]`, and both phases are uniform on `[0, 2pi)`.
#[derive(Debug, Clone, Copy)]
pub struct XSampler {
    seed: u64,
}

impl XSampler {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn sample(&self, index: u64) -> XState {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);

        let mut w = [0.0f64; 4];
        for wi in &mut w {
            // 1 - U lies in (0, 1], so the log is finite.
            *wi = -(1.0 - rng.gen::<f64>()).ln();
        }
        let total: f64 = w.iter().sum();
        let mut pop = w.map(|v| v / total);
        // Put the rounding residue on the largest entry so the sum is 1 to
        // within an ulp.
        let (imax, _) =
            pop.iter().enumerate().fold(
                (0, f64::MIN),
                |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
            );
        let rest: f64 = pop
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != imax)
            .map(|(_, v)| v)
            .sum();
        pop[imax] = 1.0 - rest;

        let r14 = rng.gen::<f64>() * (pop[0] * pop[3]).sqrt();
        let r23 = rng.gen::<f64>() * (pop[1] * pop[2]).sqrt();
        let phi14 = rng.gen::<f64>() * TAU;
        let phi23 = rng.gen::<f64>() * TAU;
        XState::new(
            pop,
            Complex64::from_polar(r14, phi14),
            Complex64::from_polar(r23, phi23),
        )
        .expect("sampler output satisfies the X-state conditions by construction")
    }

    pub fn iter(&self, count: usize) -> impl Iterator<Item = XState> + '_ {
        (0..count as u64).map(move |i| self.sample(i))
    }
}

pub fn sample_random_x(cfg: SamplerConfig) -> impl Iterator<Item = XState> {
    let sampler = XSampler::new(cfg.seed);
    (0..cfg.count as u64).map(move |i| sampler.sample(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::eigvals_dense;

    #[test]
    fn families_meet_at_bell() {
        assert_eq!(mnms(1.0).unwrap(), bell());
        assert_eq!(werner(1.0).unwrap(), bell());
        assert_eq!(mems(1.0).unwrap(), bell());
    }

    #[test]
    fn mnms_substitution() {
        let x = mnms(0.6).unwrap();
        assert_eq!(x.populations(), [0.5, 0.0, 0.0, 0.5]);
        assert_eq!(x.c14().re, 0.3);
    }

    #[test]
    fn mnms_spectrum_against_dense_oracle() {
        for eps in [0.1, 0.35, 0.6, 0.99] {
            let v = eigvals_dense(&mnms(eps).unwrap().to_dense())
                .unwrap()
                .values();
            let expected = [(1.0 + eps) / 2.0, (1.0 - eps) / 2.0, 0.0, 0.0];
            for (a, b) in v.iter().zip(expected) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn mems_branches_agree_at_two_thirds() {
        let eps: f64 = 2.0 / 3.0;
        assert!((eps / 2.0 - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(mems_weight(eps), eps / 2.0);
        assert_eq!(mems_weight(eps - 1e-12), 1.0 / 3.0);
        let x = mems(0.5).unwrap();
        let third = 1.0 / 3.0;
        assert_eq!(x.populations(), [third, 1.0 - 2.0 * third, 0.0, third]);
        assert_eq!(x.c14().re, 0.25);
    }

    #[test]
    fn epsilon_domain() {
        for bad in [0.0, -0.1, 1.0 + 1e-9, f64::NAN] {
            assert!(matches!(mnms(bad), Err(Error::Parameter { .. })));
            assert!(werner(bad).is_err());
            assert!(mems(bad).is_err());
        }
    }

    #[test]
    fn family_param_dispatch() {
        let fp = FamilyParam::new(Family::Werner, 0.5).unwrap();
        assert_eq!(fp.state().unwrap(), werner(0.5).unwrap());
        assert_eq!(FamilyParam::Bell.state().unwrap(), bell());
        assert!(FamilyParam::new(Family::Mems, 0.0).is_err());
        assert_eq!("MNMS".parse::<Family>().unwrap(), Family::Mnms);
    }

    #[test]
    fn sampler_is_deterministic_and_indexed() {
        let cfg = SamplerConfig::new(42, 50).unwrap();
        let a: Vec<_> = sample_random_x(cfg).collect();
        let b: Vec<_> = sample_random_x(cfg).collect();
        assert_eq!(a, b);
        let s = XSampler::new(42);
        assert_eq!(s.sample(17), a[17]);
        assert_ne!(XSampler::new(43).sample(17), a[17]);
        assert!(SamplerConfig::new(1, 0).is_err());
    }

    #[test]
    fn sampler_marginal_is_symmetric() {
        let n = 100_000;
        let mean: f64 = XSampler::new(7).iter(n).map(|x| x.p11()).sum::<f64>() / n as f64;
        assert!((mean - 0.25).abs() < 0.005, "mean p11 = {mean}");
    }
}
