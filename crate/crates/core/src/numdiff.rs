//! Numerical path: jets estimated from uniformly sampled waveforms.
//!
//! Derivatives use 5-point centered stencils. The two outermost samples on
//! each side have no centered stencil and are dropped rather than
//! extrapolated.

use crate::error::{Error, Result};
use crate::frenet::Jet2;
use crate::geometry::Vec3;

/// Minimum number of samples for a 5-point stencil to produce any output.
pub const MIN_SAMPLES: usize = 5;

/// Relative tolerance on sample spacing when building a series from
/// explicit timestamps.
pub const DT_JITTER: f64 = 1e-9;

/// Uniformly sampled multi-channel series. Rows are time points.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    channels: Vec<String>,
    times: Vec<f64>,
    dt: f64,
    samples: Vec<Vec<f64>>,
}

impl TimeSeries {
    /// Series at `t0 + k·dt`.
    pub fn uniform(channels: Vec<String>, t0: f64, dt: f64, samples: Vec<Vec<f64>>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite() && t0.is_finite()) {
            return Err(Error::InvalidRange(format!("dt must be positive and finite, got {dt}")));
        }
        let times = (0..samples.len()).map(|k| t0 + k as f64 * dt).collect();
        Self::build(channels, times, dt, samples)
    }

    /// Series from explicit timestamps, which must be uniformly spaced to
    /// within [`DT_JITTER`] relative. The timestamps are kept verbatim.
    pub fn from_times(channels: Vec<String>, times: Vec<f64>, samples: Vec<Vec<f64>>) -> Result<Self> {
        if times.len() != samples.len() {
            return Err(Error::MalformedCsv(format!(
                "{} timestamps for {} rows",
                times.len(),
                samples.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::TooFewSamples {
                needed: 2,
                got: times.len(),
            });
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite("timestamps"));
        }
        let n = times.len();
        let dt = (times[n - 1] - times[0]) / (n - 1) as f64;
        if !(dt > 0.0) {
            return Err(Error::MalformedCsv("timestamps are not increasing".into()));
        }
        for (k, w) in times.windows(2).enumerate() {
            let step = w[1] - w[0];
            // timestamps far from zero carry a few ulps of rounding of their own
            let tol = (DT_JITTER * dt).max(4.0 * f64::EPSILON * w[1].abs());
            if (step - dt).abs() > tol {
                return Err(Error::MalformedCsv(format!(
                    "non-uniform time step at row {}: {step} vs mean {dt}",
                    k + 1
                )));
            }
        }
        Self::build(channels, times, dt, samples)
    }

    fn build(channels: Vec<String>, times: Vec<f64>, dt: f64, samples: Vec<Vec<f64>>) -> Result<Self> {
        for (k, row) in samples.iter().enumerate() {
            if row.len() != channels.len() {
                return Err(Error::WrongChannelCount {
                    expected: channels.len(),
                    got: row.len(),
                });
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter(format!("non-finite sample at row {k}")));
            }
        }
        Ok(TimeSeries {
            channels,
            times,
            dt,
            samples,
        })
    }

    pub fn channels(&self) -> &[String] {
        &self.channels
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn t0(&self) -> f64 {
        self.times.first().copied().unwrap_or(0.0)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// One channel as a contiguous vector.
    pub fn column(&self, c: usize) -> Vec<f64> {
        self.samples.iter().map(|r| r[c]).collect()
    }

    fn with_samples(&self, samples: Vec<Vec<f64>>) -> TimeSeries {
        TimeSeries {
            channels: self.channels.clone(),
            times: self.times.clone(),
            dt: self.dt,
            samples,
        }
    }

    fn require_channels(&self, n: usize) -> Result<()> {
        if self.channels.len() == n {
            Ok(())
        } else {
            Err(Error::WrongChannelCount {
                expected: n,
                got: self.channels.len(),
            })
        }
    }
}

/// 5-point first derivative at interior index `i`.
#[inline]
pub fn stencil_d1(x: &[f64], i: usize, h: f64) -> f64 {
    (x[i - 2] - 8.0 * x[i - 1] + 8.0 * x[i + 1] - x[i + 2]) / (12.0 * h)
}

/// 5-point second derivative at interior index `i`.
#[inline]
pub fn stencil_d2(x: &[f64], i: usize, h: f64) -> f64 {
    (-x[i - 2] + 16.0 * x[i - 1] - 30.0 * x[i] + 16.0 * x[i + 1] - x[i + 2]) / (12.0 * h * h)
}

/// First and second derivatives of a scalar sequence at indices
/// `2..len-2`. Output index `k` corresponds to input index `k + 2`.
pub fn derivatives(x: &[f64], h: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if x.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_SAMPLES,
            got: x.len(),
        });
    }
    let idx = 2..x.len() - 2;
    let d1 = idx.clone().map(|i| stencil_d1(x, i, h)).collect();
    let d2 = idx.map(|i| stencil_d2(x, i, h)).collect();
    Ok((d1, d2))
}

/// Jets for every retained sample of a 3-channel series.
pub fn differentiate(series: &TimeSeries) -> Result<Vec<Jet2>> {
    series.require_channels(3)?;
    let n = series.len();
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_SAMPLES,
            got: n,
        });
    }
    let h = series.dt;
    let cols: Vec<Vec<f64>> = (0..3).map(|c| series.column(c)).collect();
    let jets = (2..n - 2)
        .map(|i| {
            let v = Vec3::new(cols[0][i], cols[1][i], cols[2][i]);
            let dv = Vec3::new(
                stencil_d1(&cols[0], i, h),
                stencil_d1(&cols[1], i, h),
                stencil_d1(&cols[2], i, h),
            );
            let ddv = Vec3::new(
                stencil_d2(&cols[0], i, h),
                stencil_d2(&cols[1], i, h),
                stencil_d2(&cols[2], i, h),
            );
            Jet2::new(series.times[i], v, dv, ddv)
        })
        .collect();
    Ok(jets)
}

/// Causal first-order smoothing per channel:
/// `y[k] = y[k-1] + dt/(time_constant+dt) · (x[k] − y[k-1])`, `y[0] = x[0]`.
pub fn lowpass_first_order(series: &TimeSeries, time_constant: f64) -> Result<TimeSeries> {
    if !(time_constant >= 0.0 && time_constant.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "filter time constant must be non-negative, got {time_constant}"
        )));
    }
    let alpha = series.dt / (time_constant + series.dt);
    let mut out = Vec::with_capacity(series.len());
    let mut state: Option<Vec<f64>> = None;
    for row in &series.samples {
        let y = match &state {
            None => row.clone(),
            Some(prev) => prev.iter().zip(row).map(|(&p, &x)| p + alpha * (x - p)).collect(),
        };
        out.push(y.clone());
        state = Some(y);
    }
    Ok(series.with_samples(out))
}

/// Subtracts the instantaneous mean `(va + vb + vc)/3` from each channel.
pub fn remove_zero_sequence(series: &TimeSeries) -> Result<TimeSeries> {
    series.require_channels(3)?;
    let out = series
        .samples
        .iter()
        .map(|r| {
            let zero = (r[0] + r[1] + r[2]) / 3.0;
            vec![r[0] - zero, r[1] - zero, r[2] - zero]
        })
        .collect();
    Ok(series.with_samples(out))
}
