use std::io::Write;

use rayon::prelude::*;

use super::csv::{num, write_preamble, write_row, SCATTER_SCHEMA};
use super::with_workers;
use crate::channels::{apply_x_closed_form, ChannelSpec};
use crate::error::{Error, Result};
use crate::measures::{m0_l1, m1_rel_ent, MeasureId, MeasureVector};
use crate::qmat::XState;
use crate::xstates::{Family, XSampler};

/// Points on each family overlay curve.
pub const OVERLAY_POINTS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterConfig {
    pub channel: ChannelSpec,
    pub samples: usize,
    pub seed: u64,
    pub measures: Vec<MeasureId>,
    pub workers: Option<usize>,
    /// Append MNMS, Werner and MEMS overlay rows.
    pub overlays: bool,
}

impl ScatterConfig {
    pub fn new(channel: ChannelSpec, samples: usize, seed: u64) -> Self {
        Self {
            channel,
            samples,
            seed,
            measures: MeasureId::ALL.to_vec(),
            workers: None,
            overlays: true,
        }
    }
}

/// One CSV row: the initial state, its two coherences, and every measure of
/// the channel output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterRecord {
    pub index: u64,
    /// `None` for random samples.
    pub family: Option<(Family, f64)>,
    pub state: XState,
    pub m0_pre: f64,
    pub m1_pre: f64,
    pub post: MeasureVector,
}

impl ScatterRecord {
    fn new(
        index: u64,
        family: Option<(Family, f64)>,
        state: XState,
        channel: &ChannelSpec,
    ) -> Result<Self> {
        let out = apply_x_closed_form(channel, &state)?;
        Ok(Self {
            index,
            family,
            state,
            m0_pre: m0_l1(&state),
            m1_pre: m1_rel_ent(&state),
            post: MeasureVector::of(&out),
        })
    }
}

/// `eps_k = k / 200` for `k = 1..=200`.
pub fn overlay_epsilons() -> impl Iterator<Item = f64> {
    (1..=OVERLAY_POINTS).map(|k| k as f64 / OVERLAY_POINTS as f64)
}

/// Sampled records in index order, followed by the overlay rows when enabled.
pub fn scatter_records(cfg: &ScatterConfig) -> Result<Vec<ScatterRecord>> {
    if cfg.samples == 0 {
        return Err(Error::Usage("scatter needs at least one sample".into()));
    }
    cfg.channel.validate()?;
    let sampler = XSampler::new(cfg.seed);
    let channel = cfg.channel;
    let mut records = with_workers(cfg.workers, || {
        (0..cfg.samples as u64)
            .into_par_iter()
            .map(|i| ScatterRecord::new(i, None, sampler.sample(i), &channel))
            .collect::<Result<Vec<_>>>()
    })??;
    if cfg.overlays {
        for family in Family::ALL {
            for (k, eps) in overlay_epsilons().enumerate() {
                let state = family.state(eps)?;
                records.push(ScatterRecord::new(
                    k as u64,
                    Some((family, eps)),
                    state,
                    &channel,
                )?);
            }
        }
    }
    Ok(records)
}

fn header(measures: &[MeasureId]) -> Vec<String> {
    let mut cols: Vec<String> = [
        "index", "family", "epsilon", "p11", "p22", "p33", "p44", "abs_c14", "arg_c14", "abs_c23",
        "arg_c23", "m0_pre", "m1_pre",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    cols.extend(measures.iter().map(|m| m.name().to_string()));
    cols
}

pub fn write_scatter(
    w: &mut dyn Write,
    cfg: &ScatterConfig,
    records: &[ScatterRecord],
) -> Result<()> {
    write_preamble(
        w,
        SCATTER_SCHEMA,
        &[
            ("channel", cfg.channel.to_string()),
            ("samples", cfg.samples.to_string()),
            ("seed", cfg.seed.to_string()),
        ],
    )?;
    write_row(w, &header(&cfg.measures))?;
    let mut row = Vec::with_capacity(13 + cfg.measures.len());
    for r in records {
        row.clear();
        row.push(r.index.to_string());
        match r.family {
            Some((f, eps)) => {
                row.push(f.name().to_string());
                row.push(num(eps));
            }
            None => {
                row.push(String::new());
                row.push(String::new());
            }
        }
        let x = &r.state;
        row.extend(x.populations().iter().map(|&p| num(p)));
        row.push(num(x.c14().norm()));
        row.push(num(x.c14().arg()));
        row.push(num(x.c23().norm()));
        row.push(num(x.c23().arg()));
        row.push(num(r.m0_pre));
        row.push(num(r.m1_pre));
        row.extend(cfg.measures.iter().map(|&m| num(r.post.get(m))));
        write_row(w, &row)?;
    }
    w.flush()?;
    Ok(())
}

/// Samples, evolves and writes; returns the number of rows written.
pub fn run_scatter(cfg: &ScatterConfig, out: &mut dyn Write) -> Result<usize> {
    let records = scatter_records(cfg)?;
    write_scatter(out, cfg, &records)?;
    Ok(records.len())
}
