use crate::channels::{apply_x_closed_form, ChannelSpec};
use crate::error::Result;
use crate::measures::{hidden_coherence, MeasureVector};
use crate::xstates::Family;

/// Smallest `eps` visited when searching a family curve for its infimum.
pub const FAMILY_MIN_FLOOR: f64 = 1e-9;

/// Measures of `channel(family(eps))` for each `eps`.
pub fn family_curve(
    family: Family,
    channel: &ChannelSpec,
    epsilons: impl IntoIterator<Item = f64>,
) -> Result<Vec<(f64, MeasureVector)>> {
    epsilons
        .into_iter()
        .map(|eps| {
            let out = apply_x_closed_form(channel, &family.state(eps)?)?;
            Ok((eps, MeasureVector::of(&out)))
        })
        .collect()
}

/// Infimum of the hidden coherence along the channel-evolved family over
/// `eps` in `(0, 1]`, scanned on a linear grid plus a logarithmic grid
/// reaching down to [`FAMILY_MIN_FLOOR`].
pub fn family_min_d2max(family: Family, channel: &ChannelSpec) -> Result<f64> {
    const N: usize = 2000;
    let linear = (1..=N).map(|k| k as f64 / N as f64);
    let decades = -FAMILY_MIN_FLOOR.log10();
    let log = (0..=N).map(move |k| 10f64.powf(-decades * k as f64 / N as f64));
    let mut best = f64::INFINITY;
    for eps in linear.chain(log) {
        let out = apply_x_closed_form(channel, &family.state(eps)?)?;
        best = best.min(hidden_coherence(&out.spectrum()));
    }
    Ok(best)
}
