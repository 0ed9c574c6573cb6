//! Channel descriptions and their textual form, e.g. `pd:eta_p=0.3` or
//! `rtn:gamma=1,b=10,t=0.15`.
//!
//! Kind names are case-insensitive. Parameter names are matched exactly, so
//! `gamma` (noise bandwidth / coupling) and `Gamma` (relaxation rate / line
//! width) stay distinct.

use std::fmt;
use std::str::FromStr;

use crate::channels::kernel::{eta_from_p, p_from_eta};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    /// Phase damping.
    Pd,
    /// Phase damping with memory over two uses.
    PdMem,
    /// Non-Markovian dephasing.
    Nmd,
    /// Random telegraph noise.
    Rtn,
    /// Modified Ornstein-Uhlenbeck noise.
    Oun,
    /// Power law noise.
    Pln,
    /// Amplitude damping.
    Ad,
    /// Amplitude damping with memory over two uses.
    AdMem,
    /// Amplitude damping followed by phase damping.
    Ap,
    /// Non-Markovian amplitude damping.
    Nmad,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 10] = [
        ChannelKind::Pd,
        ChannelKind::PdMem,
        ChannelKind::Nmd,
        ChannelKind::Rtn,
        ChannelKind::Oun,
        ChannelKind::Pln,
        ChannelKind::Ad,
        ChannelKind::AdMem,
        ChannelKind::Ap,
        ChannelKind::Nmad,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Pd => "pd",
            ChannelKind::PdMem => "pdmem",
            ChannelKind::Nmd => "nmd",
            ChannelKind::Rtn => "rtn",
            ChannelKind::Oun => "oun",
            ChannelKind::Pln => "pln",
            ChannelKind::Ad => "ad",
            ChannelKind::AdMem => "admem",
            ChannelKind::Ap => "ap",
            ChannelKind::Nmad => "nmad",
        }
    }

    /// Dephasing kinds leave populations untouched.
    pub fn is_dephasing(self) -> bool {
        matches!(
            self,
            ChannelKind::Pd
                | ChannelKind::PdMem
                | ChannelKind::Nmd
                | ChannelKind::Rtn
                | ChannelKind::Oun
                | ChannelKind::Pln
        )
    }

    pub fn is_memory(self) -> bool {
        matches!(self, ChannelKind::PdMem | ChannelKind::AdMem)
    }

    /// Canonical parameter names, in display order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            ChannelKind::Pd => &["eta_p"],
            ChannelKind::PdMem => &["p", "mu"],
            ChannelKind::Nmd => &["p", "alpha"],
            ChannelKind::Rtn => &["gamma", "b", "t"],
            ChannelKind::Oun | ChannelKind::Pln | ChannelKind::Nmad => &["gamma", "Gamma", "t"],
            ChannelKind::Ad => &["eta_a"],
            ChannelKind::AdMem => &["eta_a", "mu"],
            ChannelKind::Ap => &["eta_a", "eta_p"],
        }
    }

    fn accepts(self, name: &str) -> bool {
        self.param_names().contains(&name)
            || (name == "eta_p" && matches!(self, ChannelKind::PdMem | ChannelKind::Nmd))
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        ChannelKind::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| Error::parse(0, format!("unknown channel kind `{s}`")))
    }
}

/// Admissible range of one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamDomain {
    pub lo: f64,
    pub hi: f64,
    /// `false` for the strictly positive rates.
    pub lo_inclusive: bool,
    pub label: &'static str,
}

impl ParamDomain {
    const UNIT: ParamDomain = ParamDomain {
        lo: 0.0,
        hi: 1.0,
        lo_inclusive: true,
        label: "[0, 1]",
    };
    const HALF: ParamDomain = ParamDomain {
        lo: 0.0,
        hi: 0.5,
        lo_inclusive: true,
        label: "[0, 1/2]",
    };
    const POSITIVE: ParamDomain = ParamDomain {
        lo: 0.0,
        hi: f64::INFINITY,
        lo_inclusive: false,
        label: "(0, inf)",
    };
    const TIME: ParamDomain = ParamDomain {
        lo: 0.0,
        hi: f64::INFINITY,
        lo_inclusive: true,
        label: "[0, inf)",
    };

    pub fn contains(&self, v: f64) -> bool {
        let above = if self.lo_inclusive {
            v >= self.lo
        } else {
            v > self.lo
        };
        above && v <= self.hi
    }

    pub fn of(name: &str) -> Option<ParamDomain> {
        Some(match name {
            "eta_p" | "eta_a" | "alpha" | "mu" => Self::UNIT,
            "p" => Self::HALF,
            "gamma" | "b" | "Gamma" => Self::POSITIVE,
            "t" => Self::TIME,
            _ => return None,
        })
    }
}

fn static_name(name: &str) -> &'static str {
    match name {
        "eta_p" => "eta_p",
        "eta_a" => "eta_a",
        "alpha" => "alpha",
        "mu" => "mu",
        "p" => "p",
        "gamma" => "gamma",
        "b" => "b",
        "Gamma" => "Gamma",
        "t" => "t",
        _ => "?",
    }
}

fn check(name: &'static str, value: f64) -> Result<()> {
    let dom = ParamDomain::of(name).expect("known parameter");
    if value.is_finite() && dom.contains(value) {
        Ok(())
    } else {
        Err(Error::Parameter {
            name,
            value,
            domain: dom.label,
        })
    }
}

/// A channel kind with its physical parameters.
///
/// `PdMem` and `Nmd` store the dephasing probability `p`; `eta_p` is
/// accepted as an alias through `eta_p = 1 - (1 - 2p)^2`. Time-dependent
/// kinds use `gamma`, `big_gamma` (written `Gamma` in text) and `t` exactly
/// as they enter their kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec {
    Pd { eta_p: f64 },
    PdMem { p: f64, mu: f64 },
    Nmd { p: f64, alpha: f64 },
    Rtn { gamma: f64, b: f64, t: f64 },
    Oun { gamma: f64, big_gamma: f64, t: f64 },
    Pln { gamma: f64, big_gamma: f64, t: f64 },
    Ad { eta_a: f64 },
    AdMem { eta_a: f64, mu: f64 },
    Ap { eta_a: f64, eta_p: f64 },
    Nmad { gamma: f64, big_gamma: f64, t: f64 },
}

impl ChannelSpec {
    pub fn kind(&self) -> ChannelKind {
        match self {
            ChannelSpec::Pd { .. } => ChannelKind::Pd,
            ChannelSpec::PdMem { .. } => ChannelKind::PdMem,
            ChannelSpec::Nmd { .. } => ChannelKind::Nmd,
            ChannelSpec::Rtn { .. } => ChannelKind::Rtn,
            ChannelSpec::Oun { .. } => ChannelKind::Oun,
            ChannelSpec::Pln { .. } => ChannelKind::Pln,
            ChannelSpec::Ad { .. } => ChannelKind::Ad,
            ChannelSpec::AdMem { .. } => ChannelKind::AdMem,
            ChannelSpec::Ap { .. } => ChannelKind::Ap,
            ChannelSpec::Nmad { .. } => ChannelKind::Nmad,
        }
    }

    /// Canonical `(name, value)` pairs.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            ChannelSpec::Pd { eta_p } => vec![("eta_p", eta_p)],
            ChannelSpec::PdMem { p, mu } => vec![("p", p), ("mu", mu)],
            ChannelSpec::Nmd { p, alpha } => vec![("p", p), ("alpha", alpha)],
            ChannelSpec::Rtn { gamma, b, t } => vec![("gamma", gamma), ("b", b), ("t", t)],
            ChannelSpec::Oun {
                gamma,
                big_gamma,
                t,
            }
            | ChannelSpec::Pln {
                gamma,
                big_gamma,
                t,
            }
            | ChannelSpec::Nmad {
                gamma,
                big_gamma,
                t,
            } => vec![("gamma", gamma), ("Gamma", big_gamma), ("t", t)],
            ChannelSpec::Ad { eta_a } => vec![("eta_a", eta_a)],
            ChannelSpec::AdMem { eta_a, mu } => vec![("eta_a", eta_a), ("mu", mu)],
            ChannelSpec::Ap { eta_a, eta_p } => vec![("eta_a", eta_a), ("eta_p", eta_p)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.params() {
            check(name, value)?;
        }
        Ok(())
    }

    /// Value of a named parameter, including the `eta_p` alias of the
    /// `p`-parametrised kinds.
    pub fn param(&self, name: &str) -> Option<f64> {
        match (self, name) {
            (ChannelSpec::PdMem { p, .. } | ChannelSpec::Nmd { p, .. }, "eta_p") => {
                Some(eta_from_p(*p))
            }
            _ => self
                .params()
                .into_iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| v),
        }
    }

    /// A copy with one parameter replaced; the result is validated.
    pub fn with_param(&self, name: &str, value: f64) -> Result<ChannelSpec> {
        let mut out = *self;
        let unknown = || Error::Usage(format!("channel {} has no parameter `{name}`", self.kind()));
        match (&mut out, name) {
            (ChannelSpec::Pd { eta_p }, "eta_p") => *eta_p = value,
            (ChannelSpec::PdMem { p, .. } | ChannelSpec::Nmd { p, .. }, "eta_p") => {
                check("eta_p", value)?;
                *p = p_from_eta(value);
            }
            (ChannelSpec::PdMem { p, .. } | ChannelSpec::Nmd { p, .. }, "p") => *p = value,
            (ChannelSpec::PdMem { mu, .. } | ChannelSpec::AdMem { mu, .. }, "mu") => *mu = value,
            (ChannelSpec::Nmd { alpha, .. }, "alpha") => *alpha = value,
            (ChannelSpec::Rtn { gamma, .. }, "gamma") => *gamma = value,
            (ChannelSpec::Rtn { b, .. }, "b") => *b = value,
            (ChannelSpec::Rtn { t, .. }, "t") => *t = value,
            (
                ChannelSpec::Oun { gamma, .. }
                | ChannelSpec::Pln { gamma, .. }
                | ChannelSpec::Nmad { gamma, .. },
                "gamma",
            ) => *gamma = value,
            (
                ChannelSpec::Oun { big_gamma, .. }
                | ChannelSpec::Pln { big_gamma, .. }
                | ChannelSpec::Nmad { big_gamma, .. },
                "Gamma",
            ) => *big_gamma = value,
            (
                ChannelSpec::Oun { t, .. }
                | ChannelSpec::Pln { t, .. }
                | ChannelSpec::Nmad { t, .. },
                "t",
            ) => *t = value,
            (ChannelSpec::Ad { eta_a } | ChannelSpec::AdMem { eta_a, .. }, "eta_a") => {
                *eta_a = value
            }
            (ChannelSpec::Ap { eta_a, .. }, "eta_a") => *eta_a = value,
            (ChannelSpec::Ap { eta_p, .. }, "eta_p") => *eta_p = value,
            _ => return Err(unknown()),
        }
        out.validate()?;
        Ok(out)
    }

    /// Builds a spec from `(name, value)` pairs, checking that exactly the
    /// required names are present.
    pub fn from_params(kind: ChannelKind, pairs: &[(&str, f64)]) -> Result<ChannelSpec> {
        let get = |name: &str| pairs.iter().find(|(n, _)| *n == name).map(|(_, v)| *v);
        for (name, _) in pairs {
            if !kind.accepts(name) {
                return Err(Error::Usage(format!(
                    "channel {kind} does not take parameter `{name}` (expected {})",
                    kind.param_names().join(", ")
                )));
            }
        }
        let need = |name: &'static str| {
            get(name).ok_or_else(|| Error::Usage(format!("channel {kind} requires `{name}`")))
        };
        let dephasing_p = || -> Result<f64> {
            match (get("p"), get("eta_p")) {
                (Some(p), None) => Ok(p),
                (None, Some(eta)) => {
                    check("eta_p", eta)?;
                    Ok(p_from_eta(eta))
                }
                (Some(_), Some(_)) => Err(Error::Usage(format!(
                    "channel {kind} takes either `p` or `eta_p`, not both"
                ))),
                (None, None) => Err(Error::Usage(format!(
                    "channel {kind} requires `p` or `eta_p`"
                ))),
            }
        };
        let spec = match kind {
            ChannelKind::Pd => ChannelSpec::Pd {
                eta_p: need("eta_p")?,
            },
            ChannelKind::PdMem => ChannelSpec::PdMem {
                p: dephasing_p()?,
                mu: need("mu")?,
            },
            ChannelKind::Nmd => ChannelSpec::Nmd {
                p: dephasing_p()?,
                alpha: need("alpha")?,
            },
            ChannelKind::Rtn => ChannelSpec::Rtn {
                gamma: need("gamma")?,
                b: need("b")?,
                t: need("t")?,
            },
            ChannelKind::Oun => ChannelSpec::Oun {
                gamma: need("gamma")?,
                big_gamma: need("Gamma")?,
                t: need("t")?,
            },
            ChannelKind::Pln => ChannelSpec::Pln {
                gamma: need("gamma")?,
                big_gamma: need("Gamma")?,
                t: need("t")?,
            },
            ChannelKind::Nmad => ChannelSpec::Nmad {
                gamma: need("gamma")?,
                big_gamma: need("Gamma")?,
                t: need("t")?,
            },
            ChannelKind::Ad => ChannelSpec::Ad {
                eta_a: need("eta_a")?,
            },
            ChannelKind::AdMem => ChannelSpec::AdMem {
                eta_a: need("eta_a")?,
                mu: need("mu")?,
            },
            ChannelKind::Ap => ChannelSpec::Ap {
                eta_a: need("eta_a")?,
                eta_p: need("eta_p")?,
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.kind())?;
        for (i, (name, value)) in self.params().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{name}={value}")?;
        }
        Ok(())
    }
}

impl FromStr for ChannelSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let colon = text
            .find(':')
            .ok_or_else(|| Error::parse(text.len(), "expected `kind:` prefix"))?;
        let kind: ChannelKind = text[..colon]
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("unknown channel kind `{}`", &text[..colon])))?;

        let mut pairs: Vec<(&'static str, f64)> = Vec::new();
        let mut offset = colon + 1;
        for item in text[colon + 1..].split(',') {
            let start = offset;
            offset += item.len() + 1;
            if item.trim().is_empty() {
                return Err(Error::parse(start, "empty parameter"));
            }
            let eq = item
                .find('=')
                .ok_or_else(|| Error::parse(start, format!("expected `name=value` in `{item}`")))?;
            let name = item[..eq].trim();
            if !kind.accepts(name) {
                return Err(Error::parse(
                    start,
                    format!(
                        "unknown parameter `{name}` for {kind} (expected {})",
                        kind.param_names().join(", ")
                    ),
                ));
            }
            let name = static_name(name);
            if pairs.iter().any(|(n, _)| *n == name) {
                return Err(Error::parse(start, format!("duplicate parameter `{name}`")));
            }
            let raw = item[eq + 1..].trim();
            let value: f64 = raw
                .parse()
                .map_err(|_| Error::parse(start + eq + 1, format!("`{raw}` is not a number")))?;
            pairs.push((name, value));
        }
        ChannelSpec::from_params(kind, &pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_examples() {
        let pd: ChannelSpec = "pd:eta_p=0.3".parse().unwrap();
        assert_eq!(pd, ChannelSpec::Pd { eta_p: 0.3 });

        let pdm: ChannelSpec = "pdmem:eta_p=0.3,mu=0.9".parse().unwrap();
        assert_eq!(pdm.kind(), ChannelKind::PdMem);
        assert!((pdm.param("eta_p").unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(pdm.param("mu"), Some(0.9));

        let rtn: ChannelSpec = "rtn:gamma=1,b=10,t=0.15".parse().unwrap();
        assert_eq!(
            rtn,
            ChannelSpec::Rtn {
                gamma: 1.0,
                b: 10.0,
                t: 0.15
            }
        );

        let nmad: ChannelSpec = "NMAD:gamma=1,Gamma=0.1,t=0.25".parse().unwrap();
        assert_eq!(
            nmad,
            ChannelSpec::Nmad {
                gamma: 1.0,
                big_gamma: 0.1,
                t: 0.25
            }
        );
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "pd:eta_p=0.3",
            "pdmem:p=0.25,mu=0.5",
            "nmd:p=0.5,alpha=1",
            "oun:gamma=1,Gamma=16,t=0.15",
            "ap:eta_a=0.3,eta_p=0.1",
            "admem:eta_a=0.3,mu=0.9",
        ] {
            let spec: ChannelSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
    }

    #[test]
    fn parameter_names_are_strict() {
        let err = "nmad:gamma=1,gamma=0.1,t=1"
            .parse::<ChannelSpec>()
            .unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
        let err = "pd:ETA_P=0.3".parse::<ChannelSpec>().unwrap_err();
        match err {
            Error::Parse { pos, .. } => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        assert!("rtn:gamma=1,b=10".parse::<ChannelSpec>().is_err());
        assert!("pdmem:p=0.1,eta_p=0.2,mu=0".parse::<ChannelSpec>().is_err());
    }

    #[test]
    fn parse_errors_carry_positions() {
        match "pd:eta_p=abc".parse::<ChannelSpec>() {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 9),
            other => panic!("{other:?}"),
        }
        match "xx:eta_p=0.1".parse::<ChannelSpec>() {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 0),
            other => panic!("{other:?}"),
        }
        match "ad:eta_a=0.1,".parse::<ChannelSpec>() {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 13),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            "pd".parse::<ChannelSpec>(),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn domains_are_enforced() {
        assert!(matches!(
            "pd:eta_p=1.2".parse::<ChannelSpec>(),
            Err(Error::Parameter { name: "eta_p", .. })
        ));
        assert!("nmd:p=0.6,alpha=1".parse::<ChannelSpec>().is_err());
        assert!("rtn:gamma=0,b=1,t=1".parse::<ChannelSpec>().is_err());
        assert!("rtn:gamma=1,b=1,t=-1".parse::<ChannelSpec>().is_err());
        assert!("admem:eta_a=0.5,mu=1.5".parse::<ChannelSpec>().is_err());
    }

    #[test]
    fn with_param_handles_eta_alias() {
        let spec = ChannelSpec::Nmd { p: 0.1, alpha: 1.0 };
        let moved = spec.with_param("eta_p", 1.0).unwrap();
        assert_eq!(moved, ChannelSpec::Nmd { p: 0.5, alpha: 1.0 });
        assert!(spec.with_param("mu", 0.5).is_err());
        assert!(spec.with_param("alpha", 2.0).is_err());
    }
}
