use std::time::Instant;

use crate::error::{Error, Result};

pub const DEFAULT_REPEATS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct TimingSummary {
    pub min_seconds: f64,
    pub mean_seconds: f64,
    pub std_seconds: f64,
    pub samples: Vec<f64>,
}

impl TimingSummary {
    pub fn repeats(&self) -> usize {
        self.samples.len()
    }
}

/// Runs `f` once as warm-up, then `repeats` timed times; the minimum is the
/// reported cost.
pub fn timing_protocol<F>(mut f: F, repeats: usize) -> Result<TimingSummary>
where
    F: FnMut() -> Result<()>,
{
    if repeats == 0 {
        return Err(Error::InvalidArgument("repeats must be at least 1".into()));
    }
    f()?;
    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        f()?;
        samples.push(start.elapsed().as_secs_f64().max(f64::MIN_POSITIVE));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n;
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TimingSummary { min_seconds: min, mean_seconds: mean, std_seconds: var.sqrt(), samples })
}
