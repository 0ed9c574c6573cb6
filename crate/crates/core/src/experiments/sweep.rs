use std::fmt;
use std::io::Write;
use std::str::FromStr;

use super::csv::{num, write_preamble, write_row, SWEEP_SCHEMA};
use super::Grid;
use crate::channels::{apply_x_closed_form, ChannelKind, ChannelSpec};
use crate::error::{Error, Result};
use crate::measures::MeasureVector;
use crate::xstates::FamilyParam;

/// Channel presets driven by a single scaled noise parameter `kappa`.
///
/// | preset | fixed          | kappa      |
/// |--------|----------------|------------|
/// | pd     |                | `eta_p`    |
/// | nmd    | `alpha = 1`    | `eta_p`    |
/// | rtn    | `b = 10 gamma` | `gamma t/2`|
/// | pln    | `Gamma = 16 gamma` | `gamma t` |
/// | oun    | `Gamma = 16 gamma` | `gamma t` |
/// | ad     |                | `eta_a`    |
/// | admem  | `mu = 0.5`     | `eta_a`    |
/// | nmad   | `Gamma = 0.1 gamma` | `3.5 gamma t` |
///
/// Time-dependent presets use `gamma = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepPreset {
    Pd,
    Nmd,
    Rtn,
    Pln,
    Oun,
    Ad,
    AdMem,
    Nmad,
}

impl SweepPreset {
    pub const ALL: [SweepPreset; 8] = [
        SweepPreset::Pd,
        SweepPreset::Nmd,
        SweepPreset::Rtn,
        SweepPreset::Pln,
        SweepPreset::Oun,
        SweepPreset::Ad,
        SweepPreset::AdMem,
        SweepPreset::Nmad,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepPreset::Pd => "pd",
            SweepPreset::Nmd => "nmd",
            SweepPreset::Rtn => "rtn",
            SweepPreset::Pln => "pln",
            SweepPreset::Oun => "oun",
            SweepPreset::Ad => "ad",
            SweepPreset::AdMem => "admem",
            SweepPreset::Nmad => "nmad",
        }
    }

    pub fn channel_at(self, kappa: f64) -> Result<ChannelSpec> {
        let spec = match self {
            SweepPreset::Pd => ChannelSpec::Pd { eta_p: kappa },
            SweepPreset::Nmd => {
                ChannelSpec::from_params(ChannelKind::Nmd, &[("eta_p", kappa), ("alpha", 1.0)])?
            }
            SweepPreset::Rtn => ChannelSpec::Rtn {
                gamma: 1.0,
                b: 10.0,
                t: 2.0 * kappa,
            },
            SweepPreset::Pln => ChannelSpec::Pln {
                gamma: 1.0,
                big_gamma: 16.0,
                t: kappa,
            },
            SweepPreset::Oun => ChannelSpec::Oun {
                gamma: 1.0,
                big_gamma: 16.0,
                t: kappa,
            },
            SweepPreset::Ad => ChannelSpec::Ad { eta_a: kappa },
            SweepPreset::AdMem => ChannelSpec::AdMem {
                eta_a: kappa,
                mu: 0.5,
            },
            SweepPreset::Nmad => ChannelSpec::Nmad {
                gamma: 1.0,
                big_gamma: 0.1,
                t: kappa / 3.5,
            },
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for SweepPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        SweepPreset::ALL
            .into_iter()
            .find(|p| p.name() == lower)
            .ok_or_else(|| {
                let valid: Vec<&str> = SweepPreset::ALL.iter().map(|p| p.name()).collect();
                Error::Usage(format!(
                    "unknown preset `{s}`; valid presets: {}",
                    valid.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub preset: SweepPreset,
    pub initial: FamilyParam,
    pub grid: Grid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub kappa: f64,
    pub m0: f64,
    pub m1: f64,
    pub f_max: f64,
    pub concurrence: f64,
    pub d2_max: f64,
}

pub fn sweep_rows(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let x = cfg.initial.state()?;
    cfg.grid
        .values()
        .map(|kappa| {
            let out = apply_x_closed_form(&cfg.preset.channel_at(kappa)?, &x)?;
            let v = MeasureVector::of(&out);
            Ok(SweepRow {
                kappa,
                m0: v.m0,
                m1: v.m1,
                f_max: v.f_max,
                concurrence: v.concurrence,
                d2_max: v.d2_max,
            })
        })
        .collect()
}

fn describe(initial: &FamilyParam) -> String {
    match initial {
        FamilyParam::Mnms(e) => format!("mnms:{e}"),
        FamilyParam::Werner(e) => format!("werner:{e}"),
        FamilyParam::Mems(e) => format!("mems:{e}"),
        FamilyParam::Bell => "bell".into(),
        FamilyParam::Custom(_) => "custom".into(),
    }
}

pub fn write_sweep(w: &mut dyn Write, cfg: &SweepConfig, rows: &[SweepRow]) -> Result<()> {
    write_preamble(
        w,
        SWEEP_SCHEMA,
        &[
            ("preset", cfg.preset.to_string()),
            ("initial", describe(&cfg.initial)),
            ("grid", cfg.grid.to_string()),
        ],
    )?;
    write_row(w, &["kappa", "m0", "m1", "fmax", "conc", "d2max"])?;
    for r in rows {
        write_row(
            w,
            &[
                num(r.kappa),
                num(r.m0),
                num(r.m1),
                num(r.f_max),
                num(r.concurrence),
                num(r.d2_max),
            ],
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn run_sweep(cfg: &SweepConfig, out: &mut dyn Write) -> Result<usize> {
    let rows = sweep_rows(cfg)?;
    write_sweep(out, cfg, &rows)?;
    Ok(rows.len())
}
