//! Batch analysis: jets in, one [`AnalysisRow`] per sample out.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frenet::{invariants, omega_dot_direct, rocof_from_parts, Jet2, Thresholds};
use crate::io::AnalysisRow;
use crate::numdiff::{differentiate, lowpass_first_order, remove_zero_sequence, TimeSeries};
use crate::signals::{sample_times, SignalModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Analytic,
    Numeric,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Analytic => "analytic",
            Mode::Numeric => "numeric",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "analytic" => Ok(Mode::Analytic),
            "numeric" => Ok(Mode::Numeric),
            other => Err(Error::InvalidParameter(format!("unknown mode `{other}`"))),
        }
    }
}

/// Preprocessing applied to sampled data before differentiation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NumericOptions {
    pub remove_zero_seq: bool,
    pub filter_tau: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisTable {
    pub rows: Vec<AnalysisRow>,
    pub degenerate_speed_rows: usize,
}

/// One row from one jet. Degenerate speed leaves every invariant empty;
/// degenerate rotation keeps `ρ`, `ω = 0`, `κ = 0` and `ω'` but empties
/// `ξ`, `τ` and `η`.
pub fn analyze_jet(j: &Jet2, th: &Thresholds) -> Result<Option<AnalysisRow>> {
    if !j.is_finite() {
        return Err(Error::NonFinite("jet"));
    }
    let inv = match invariants(j, th) {
        Ok(inv) => inv,
        Err(Error::DegenerateSpeed { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let omega_dot = omega_dot_direct(j, th)?;
    let mut row = AnalysisRow {
        t: j.t,
        v: inv.v_mag,
        rho: Some(inv.rho),
        w_vec: Some(inv.omega_vec.to_array()),
        w: Some(inv.omega_mag),
        kappa: Some(inv.kappa),
        rocof: Some(omega_dot.to_array()),
        rotation_defined: inv.rotation_defined,
        ..Default::default()
    };
    if inv.rotation_defined {
        let dec = rocof_from_parts(j, &inv, omega_dot)?;
        row.xi = Some(inv.xi);
        row.tau = Some(inv.tau);
        row.eta = Some(dec.eta);
    }
    Ok(Some(row))
}

pub fn analyze_jets(jets: &[Jet2], th: &Thresholds) -> Result<AnalysisTable> {
    let mut rows = Vec::with_capacity(jets.len());
    let mut degenerate = 0;
    for j in jets {
        match analyze_jet(j, th)? {
            Some(row) => rows.push(row),
            None => {
                degenerate += 1;
                rows.push(AnalysisRow {
                    t: j.t,
                    v: j.v.norm(),
                    ..Default::default()
                });
            }
        }
    }
    if !rows.is_empty() && degenerate == rows.len() {
        return Err(Error::DegenerateInput(format!(
            "all {degenerate} rows have |v| <= {:e}",
            th.eps_v
        )));
    }
    Ok(AnalysisTable {
        rows,
        degenerate_speed_rows: degenerate,
    })
}

/// Exact jets of a closed-form model on the sampling grid.
pub fn analytic_jets(model: &SignalModel, t0: f64, t1: f64, dt: f64) -> Result<Vec<Jet2>> {
    Ok(sample_times(t0, t1, dt)?
        .into_iter()
        .map(|t| model.eval_jet(t))
        .collect())
}

/// Zero-sequence removal, then filtering, then 5-point differentiation.
pub fn numeric_jets(series: &TimeSeries, opts: &NumericOptions) -> Result<Vec<Jet2>> {
    let mut s = if opts.remove_zero_seq {
        remove_zero_sequence(series)?
    } else {
        series.clone()
    };
    if let Some(tau) = opts.filter_tau {
        s = lowpass_first_order(&s, tau)?;
    }
    differentiate(&s)
}

pub fn analyze_model(model: &SignalModel, t0: f64, t1: f64, dt: f64, th: &Thresholds) -> Result<AnalysisTable> {
    analyze_jets(&analytic_jets(model, t0, t1, dt)?, th)
}

pub fn analyze_series(series: &TimeSeries, opts: &NumericOptions, th: &Thresholds) -> Result<AnalysisTable> {
    analyze_jets(&numeric_jets(series, opts)?, th)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec3;
    use crate::signals::{make_scenario, ScenarioId};
    use std::collections::BTreeMap;
    use std::f64::consts::PI;

    fn model(id: ScenarioId) -> SignalModel {
        make_scenario(id, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn e0_rows() {
        let t = analyze_model(&model(ScenarioId::E0), 0.0, 0.02, 1e-4, &Thresholds::default()).unwrap();
        assert_eq!(t.rows.len(), 201);
        assert_eq!(t.degenerate_speed_rows, 0);
        for r in &t.rows {
            assert!(r.rho.unwrap().abs() < 1e-9);
            assert!((r.w.unwrap() - 100.0 * PI).abs() < 1e-6);
            assert!(r.xi.unwrap().abs() < 1e-9);
            assert!(r.rotation_defined);
        }
    }

    #[test]
    fn dc_has_no_rotation() {
        let t = analyze_model(&model(ScenarioId::Dc), 0.0, 0.01, 1e-3, &Thresholds::default()).unwrap();
        for r in &t.rows {
            assert!(!r.rotation_defined);
            assert_eq!(r.w, Some(0.0));
            assert_eq!(r.xi, None);
            assert_eq!(r.eta, None);
        }
    }

    #[test]
    fn degenerate_rows_are_counted() {
        let z = Jet2::new(0.0, Vec3::ZERO, Vec3::ZERO, Vec3::ZERO);
        let ok = Jet2::new(1.0, Vec3::E1, Vec3::E2, -1.0 * Vec3::E1);
        let t = analyze_jets(&[z, ok], &Thresholds::default()).unwrap();
        assert_eq!(t.degenerate_speed_rows, 1);
        assert_eq!(t.rows[0].rho, None);
        assert!(t.rows[1].rotation_defined);
        assert!(matches!(
            analyze_jets(&[z, z], &Thresholds::default()),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn numeric_path_tracks_analytic_on_e0() {
        let s = model(ScenarioId::E0).sample(0.0, 0.1, 1e-4).unwrap();
        let t = analyze_series(&s, &NumericOptions::default(), &Thresholds::default()).unwrap();
        assert_eq!(t.rows.len(), s.len() - 4);
        assert_eq!(t.rows[0].t, s.times()[2]);
        for r in &t.rows {
            assert!((r.w.unwrap() / (100.0 * PI) - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn modes_parse() {
        assert_eq!("Numeric".parse::<Mode>().unwrap(), Mode::Numeric);
        assert!("spectral".parse::<Mode>().is_err());
    }
}
