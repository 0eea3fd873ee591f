//! Waveform measurements.

use super::{EngineError, Result, Waveform};

/// Conventional 10 %–90 % window.
pub const DEFAULT_SLEW_WINDOW: (f64, f64) = (0.1, 0.9);

/// Slew rate between the first crossings of `lo_frac` and `hi_frac` of the total swing.
///
/// The swing runs from the first to the last sample, so a falling edge yields a negative
/// rate. Crossing times are linearly interpolated between samples.
pub fn measure_slew_rate(waveform: &Waveform, signal: &str, lo_frac: f64, hi_frac: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lo_frac) || !(0.0..=1.0).contains(&hi_frac) || lo_frac >= hi_frac {
        return Err(EngineError::InvalidAnalysis(format!(
            "slew window {lo_frac}..{hi_frac} must satisfy 0 <= lo < hi <= 1"
        )));
    }
    let v = waveform
        .column(signal)
        .ok_or_else(|| EngineError::UnknownSignal(signal.to_string()))?;
    let t = &waveform.abscissa;
    let (first, last) = match (v.first(), v.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(EngineError::NoCrossing { signal: signal.into(), level: f64::NAN }),
    };
    let swing = last - first;
    let lo = first + lo_frac * swing;
    let hi = first + hi_frac * swing;
    if swing == 0.0 || !swing.is_finite() {
        return Err(EngineError::NoCrossing { signal: signal.into(), level: lo });
    }
    let dir = swing.signum();
    let crossing = |level: f64, from: usize| -> Option<(usize, f64)> {
        (from..v.len()).find(|&i| dir * (v[i] - level) >= 0.0).map(|i| {
            if i == 0 || dir * (v[i - 1] - level) >= 0.0 {
                (i, t[i])
            } else {
                let frac = (level - v[i - 1]) / (v[i] - v[i - 1]);
                (i, t[i - 1] + frac * (t[i] - t[i - 1]))
            }
        })
    };
    let no_crossing = |level| EngineError::NoCrossing { signal: signal.into(), level };
    let (i_lo, t_lo) = crossing(lo, 0).ok_or_else(|| no_crossing(lo))?;
    let (_, t_hi) = crossing(hi, i_lo).ok_or_else(|| no_crossing(hi))?;
    if t_hi <= t_lo {
        return Err(EngineError::InvalidAnalysis("slew window collapses to zero time".into()));
    }
    Ok((hi - lo) / (t_hi - t_lo))
}
