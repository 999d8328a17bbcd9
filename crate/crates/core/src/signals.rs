//! Closed-form waveform models with exact first and second derivatives.
//!
//! Three-phase models are sums of sinusoidal components per phase,
//! `v_i = Σ M(t) sin θ(t)`. Each component is handled as the imaginary part
//! of a phasor `z = M e^{jθ}`, which makes the chain rule mechanical and also
//! yields the envelope/phase jet `(V_i, θ_i)` of the phase for the closed-form
//! invariants.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frenet::Jet2;
use crate::geometry::Vec3;
use crate::numdiff::TimeSeries;
use crate::threephase::PhaseJet;

/// Nominal angular frequency used by every preset, rad/s.
pub const W_NOMINAL: f64 = 100.0 * PI;

/// A scalar function of time with closed-form derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Profile {
    Constant { value: f64 },
    /// `value + slope·t`
    Ramp { value: f64, slope: f64 },
    /// `offset + amplitude·sin(rate·t)`
    Sine { offset: f64, amplitude: f64, rate: f64 },
}

impl Default for Profile {
    fn default() -> Self {
        Profile::Constant { value: 0.0 }
    }
}

impl Profile {
    pub const fn constant(value: f64) -> Self {
        Profile::Constant { value }
    }

    /// `[f(t), f'(t), f''(t)]`
    pub fn eval(&self, t: f64) -> [f64; 3] {
        match *self {
            Profile::Constant { value } => [value, 0.0, 0.0],
            Profile::Ramp { value, slope } => [value + slope * t, slope, 0.0],
            Profile::Sine {
                offset,
                amplitude,
                rate,
            } => {
                let (s, c) = (rate * t).sin_cos();
                [offset + amplitude * s, amplitude * rate * c, -amplitude * rate * rate * s]
            }
        }
    }

    fn base(&self) -> f64 {
        match *self {
            Profile::Constant { value } | Profile::Ramp { value, .. } => value,
            Profile::Sine { offset, .. } => offset,
        }
    }

    fn set_base(&mut self, v: f64) {
        match self {
            Profile::Constant { value } | Profile::Ramp { value, .. } => *value = v,
            Profile::Sine { offset, .. } => *offset = v,
        }
    }

    // smallest value the profile reaches over all t ≥ 0 (ramps: at t = 0)
    fn lower_bound(&self) -> f64 {
        match *self {
            Profile::Constant { value } => value,
            Profile::Ramp { value, slope } => {
                if slope < 0.0 {
                    f64::NEG_INFINITY
                } else {
                    value
                }
            }
            Profile::Sine {
                offset, amplitude, ..
            } => offset - amplitude.abs(),
        }
    }
}

/// `h`-th harmonic of one phase: `magnitude · sin(h w_o t + angle_offset)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub magnitude: f64,
    pub angle_offset: f64,
}

/// One phase: `V(t) sin(w_o t + θ_o + θ(t)) [+ harmonic]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseModel {
    pub magnitude: Profile,
    pub angle_offset: f64,
    #[serde(default)]
    pub angle_mod: Profile,
    #[serde(default)]
    pub harmonic: Option<HarmonicTerm>,
}

impl PhaseModel {
    fn stationary(magnitude: f64, angle_offset: f64) -> Self {
        PhaseModel {
            magnitude: Profile::constant(magnitude),
            angle_offset,
            angle_mod: Profile::default(),
            harmonic: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreePhaseModel {
    pub w_o: f64,
    /// Order `h` shared by every harmonic term.
    #[serde(default = "default_harmonic_order")]
    pub harmonic_order: u32,
    pub phases: [PhaseModel; 3],
}

fn default_harmonic_order() -> u32 {
    11
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "layout", rename_all = "snake_case")]
pub enum SignalModel {
    /// `v = v_dc e1`
    Dc { vdc: f64 },
    /// `v = V cos(w_o t + α) e1 + V sin(w_o t + α) e2`: a signal and its
    /// Hilbert transform.
    SinglePhase { magnitude: f64, w_o: f64, alpha: f64 },
    /// `v = v_a e1 + v_b e2 + v_c e3`
    ThreePhase(ThreePhaseModel),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ScenarioId {
    Dc,
    SinglePhase,
    E0,
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    E7,
    E8,
    Custom,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 12] = [
        ScenarioId::Dc,
        ScenarioId::SinglePhase,
        ScenarioId::E0,
        ScenarioId::E1,
        ScenarioId::E2,
        ScenarioId::E3,
        ScenarioId::E4,
        ScenarioId::E5,
        ScenarioId::E6,
        ScenarioId::E7,
        ScenarioId::E8,
        ScenarioId::Custom,
    ];

    /// The nine three-phase examples E0..E8.
    pub const THREE_PHASE: [ScenarioId; 9] = [
        ScenarioId::E0,
        ScenarioId::E1,
        ScenarioId::E2,
        ScenarioId::E3,
        ScenarioId::E4,
        ScenarioId::E5,
        ScenarioId::E6,
        ScenarioId::E7,
        ScenarioId::E8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioId::Dc => "DC",
            ScenarioId::SinglePhase => "SINGLE_PHASE",
            ScenarioId::E0 => "E0",
            ScenarioId::E1 => "E1",
            ScenarioId::E2 => "E2",
            ScenarioId::E3 => "E3",
            ScenarioId::E4 => "E4",
            ScenarioId::E5 => "E5",
            ScenarioId::E6 => "E6",
            ScenarioId::E7 => "E7",
            ScenarioId::E8 => "E8",
            ScenarioId::Custom => "CUSTOM",
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.name() == norm)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

const TWO_THIRDS_PI: f64 = 2.0 * PI / 3.0;

fn balanced(v: f64) -> ThreePhaseModel {
    ThreePhaseModel {
        w_o: W_NOMINAL,
        harmonic_order: 11,
        phases: [
            PhaseModel::stationary(v, 0.0),
            PhaseModel::stationary(v, -TWO_THIRDS_PI),
            PhaseModel::stationary(v, TWO_THIRDS_PI),
        ],
    }
}

fn with_harmonic(mut m: ThreePhaseModel, mags: [f64; 3], offs: [f64; 3]) -> ThreePhaseModel {
    for i in 0..3 {
        m.phases[i].harmonic = Some(HarmonicTerm {
            magnitude: mags[i],
            angle_offset: offs[i],
        });
    }
    m
}

fn with_angle_mod(mut m: ThreePhaseModel, mods: [(f64, f64); 3]) -> ThreePhaseModel {
    for (phase, (amplitude, rate)) in m.phases.iter_mut().zip(mods) {
        phase.angle_mod = Profile::Sine {
            offset: 0.0,
            amplitude,
            rate,
        };
    }
    m
}

fn preset(id: ScenarioId) -> SignalModel {
    let h11 = [0.0, -TWO_THIRDS_PI, TWO_THIRDS_PI];
    let swing = (PI, 0.4 * PI);
    match id {
        ScenarioId::Dc => SignalModel::Dc { vdc: 5.0 },
        ScenarioId::SinglePhase => SignalModel::SinglePhase {
            magnitude: 12.0,
            w_o: W_NOMINAL,
            alpha: 0.0,
        },
        ScenarioId::E0 | ScenarioId::Custom => SignalModel::ThreePhase(balanced(12.0)),
        ScenarioId::E1 => {
            let mut m = balanced(12.0);
            m.phases[1].magnitude = Profile::constant(8.0);
            SignalModel::ThreePhase(m)
        }
        ScenarioId::E2 => {
            let mut m = balanced(12.0);
            m.phases[2].angle_offset = 1.5 * PI / 3.0;
            SignalModel::ThreePhase(m)
        }
        ScenarioId::E3 => SignalModel::ThreePhase(with_harmonic(balanced(12.0), [0.5; 3], h11)),
        ScenarioId::E4 => SignalModel::ThreePhase(with_harmonic(
            balanced(12.0),
            [0.5; 3],
            [0.0, -2.7 * PI / 3.0, 2.7 * PI / 3.0],
        )),
        ScenarioId::E5 => SignalModel::ThreePhase(with_harmonic(balanced(12.0), [0.5, 0.9, 1.3], h11)),
        ScenarioId::E6 => SignalModel::ThreePhase(with_angle_mod(balanced(12.0), [swing; 3])),
        ScenarioId::E7 => SignalModel::ThreePhase(with_angle_mod(
            balanced(12.0),
            [swing, swing, (PI, 0.44 * PI)],
        )),
        ScenarioId::E8 => SignalModel::ThreePhase(with_angle_mod(
            balanced(12.0),
            [swing, swing, (1.1 * PI, 0.4 * PI)],
        )),
    }
}

/// Builds a scenario model from its preset table, then applies named scalar
/// overrides.
///
/// Recognized keys: `vdc` (DC); `v`, `w_o`, `alpha` (single phase); for
/// three-phase models `w_o`, `h`, and per phase `x ∈ {a, b, c}`:
/// `v<x>` magnitude, `v<x>_slope` magnitude ramp, `v<x>_amp`/`v<x>_rate`
/// sinusoidal magnitude modulation, `theta_<x>o` angle offset,
/// `mod_<x>_amp`/`mod_<x>_rate` sinusoidal angle modulation,
/// `mod_<x>_slope` angle ramp, `v<x>_h` and `theta_<x>o_h` harmonic
/// magnitude and offset.
pub fn make_scenario(id: ScenarioId, overrides: &BTreeMap<String, f64>) -> Result<SignalModel> {
    let mut model = preset(id);
    for (key, &value) in overrides {
        apply_override(&mut model, key, value)?;
    }
    model.validate()?;
    Ok(model)
}

fn unknown_key(key: &str, layout: &str) -> Error {
    Error::InvalidParameter(format!("`{key}` does not apply to a {layout} model"))
}

fn apply_override(model: &mut SignalModel, key: &str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::InvalidParameter(format!("`{key}` must be finite")));
    }
    match model {
        SignalModel::Dc { vdc } => match key {
            "vdc" => *vdc = value,
            _ => return Err(unknown_key(key, "DC")),
        },
        SignalModel::SinglePhase {
            magnitude,
            w_o,
            alpha,
        } => match key {
            "v" => *magnitude = value,
            "w_o" => *w_o = value,
            "alpha" => *alpha = value,
            _ => return Err(unknown_key(key, "single-phase")),
        },
        SignalModel::ThreePhase(m) => apply_three_phase(m, key, value)?,
    }
    Ok(())
}

fn apply_three_phase(m: &mut ThreePhaseModel, key: &str, value: f64) -> Result<()> {
    match key {
        "w_o" => {
            m.w_o = value;
            return Ok(());
        }
        "h" => {
            if value.fract() != 0.0 || value < 2.0 || value > u32::MAX as f64 {
                return Err(Error::InvalidParameter(format!(
                    "harmonic order must be an integer >= 2, got {value}"
                )));
            }
            m.harmonic_order = value as u32;
            return Ok(());
        }
        _ => {}
    }

    let phase_of = |c: char| match c {
        'a' => Some(0),
        'b' => Some(1),
        'c' => Some(2),
        _ => None,
    };
    let bad = || unknown_key(key, "three-phase");

    if let Some(rest) = key.strip_prefix("theta_") {
        // theta_<x>o or theta_<x>o_h
        let mut chars = rest.chars();
        let i = chars.next().and_then(phase_of).ok_or_else(bad)?;
        let phase = &mut m.phases[i];
        match chars.as_str() {
            "o" => phase.angle_offset = value,
            "o_h" => phase.harmonic.get_or_insert(HarmonicTerm { magnitude: 0.0, angle_offset: 0.0 }).angle_offset = value,
            _ => return Err(bad()),
        }
        return Ok(());
    }

    if let Some(rest) = key.strip_prefix("mod_") {
        let mut chars = rest.chars();
        let i = chars.next().and_then(phase_of).ok_or_else(bad)?;
        let phase = &mut m.phases[i];
        let (offset, amplitude, rate) = match phase.angle_mod {
            Profile::Sine { offset, amplitude, rate } => (offset, amplitude, rate),
            p => (p.base(), 0.0, 0.0),
        };
        phase.angle_mod = match chars.as_str() {
            "_amp" => Profile::Sine { offset, amplitude: value, rate },
            "_rate" => Profile::Sine { offset, amplitude, rate: value },
            "_slope" => Profile::Ramp { value: phase.angle_mod.base(), slope: value },
            _ => return Err(bad()),
        };
        return Ok(());
    }

    if let Some(rest) = key.strip_prefix('v') {
        let mut chars = rest.chars();
        let i = chars.next().and_then(phase_of).ok_or_else(bad)?;
        let phase = &mut m.phases[i];
        let base = phase.magnitude.base();
        let (amplitude, rate) = match phase.magnitude {
            Profile::Sine { amplitude, rate, .. } => (amplitude, rate),
            _ => (0.0, 0.0),
        };
        match chars.as_str() {
            "" => phase.magnitude.set_base(value),
            "_slope" => phase.magnitude = Profile::Ramp { value: base, slope: value },
            "_amp" => phase.magnitude = Profile::Sine { offset: base, amplitude: value, rate },
            "_rate" => phase.magnitude = Profile::Sine { offset: base, amplitude, rate: value },
            "_h" => {
                phase
                    .harmonic
                    .get_or_insert(HarmonicTerm { magnitude: 0.0, angle_offset: 0.0 })
                    .magnitude = value
            }
            _ => return Err(bad()),
        }
        return Ok(());
    }

    Err(bad())
}

impl SignalModel {
    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{what} must be finite")))
            }
        };
        match self {
            SignalModel::Dc { vdc } => finite(*vdc, "vdc"),
            SignalModel::SinglePhase {
                magnitude,
                w_o,
                alpha,
            } => {
                finite(*w_o, "w_o")?;
                finite(*alpha, "alpha")?;
                if !(*magnitude >= 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "magnitude must be non-negative, got {magnitude}"
                    )));
                }
                Ok(())
            }
            SignalModel::ThreePhase(m) => {
                finite(m.w_o, "w_o")?;
                let has_harmonic = m.phases.iter().any(|p| p.harmonic.is_some());
                if has_harmonic && m.harmonic_order < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "harmonic order must be >= 2, got {}",
                        m.harmonic_order
                    )));
                }
                for (name, p) in ["a", "b", "c"].iter().zip(&m.phases) {
                    if !(p.magnitude.lower_bound() >= 0.0) {
                        return Err(Error::InvalidParameter(format!(
                            "phase {name} magnitude can become negative"
                        )));
                    }
                    if let Some(h) = p.harmonic {
                        if !(h.magnitude >= 0.0) {
                            return Err(Error::InvalidParameter(format!(
                                "phase {name} harmonic magnitude must be non-negative"
                            )));
                        }
                        finite(h.angle_offset, "harmonic angle offset")?;
                    }
                    finite(p.angle_offset, "angle offset")?;
                }
                Ok(())
            }
        }
    }

    pub fn eval_jet(&self, t: f64) -> Jet2 {
        match *self {
            SignalModel::Dc { vdc } => Jet2::new(t, Vec3::new(vdc, 0.0, 0.0), Vec3::ZERO, Vec3::ZERO),
            SignalModel::SinglePhase {
                magnitude,
                w_o,
                alpha,
            } => {
                let (s, c) = (w_o * t + alpha).sin_cos();
                let v = Vec3::new(magnitude * c, magnitude * s, 0.0);
                let dv = Vec3::new(-magnitude * w_o * s, magnitude * w_o * c, 0.0);
                Jet2::new(t, v, dv, -(w_o * w_o) * v)
            }
            SignalModel::ThreePhase(ref m) => {
                let z = m.phasors(t);
                Jet2::new(
                    t,
                    Vec3::new(z[0][0].im, z[1][0].im, z[2][0].im),
                    Vec3::new(z[0][1].im, z[1][1].im, z[2][1].im),
                    Vec3::new(z[0][2].im, z[1][2].im, z[2][2].im),
                )
            }
        }
    }

    /// Envelope/phase jets of the three phases, `v_i = V_i sin θ_i`. `None`
    /// for models that are not three-phase, or when a phase envelope passes
    /// through zero (its phase is then undefined).
    pub fn phase_jets(&self, t: f64) -> Option<[PhaseJet; 3]> {
        match self {
            SignalModel::ThreePhase(m) => m.phase_jets(t),
            _ => None,
        }
    }

    /// Uniformly sampled `v` over `[t0, t1]` with step `dt`.
    pub fn sample(&self, t0: f64, t1: f64, dt: f64) -> Result<TimeSeries> {
        let times = sample_times(t0, t1, dt)?;
        let rows = times
            .iter()
            .map(|&t| self.eval_jet(t).v.to_array().to_vec())
            .collect();
        TimeSeries::from_times(abc_channels(), times, rows)
    }
}

pub fn abc_channels() -> Vec<String> {
    ["va", "vb", "vc"].map(String::from).to_vec()
}

/// `t0 + k·dt` for `k = 0..=round((t1 − t0)/dt)`.
pub fn sample_times(t0: f64, t1: f64, dt: f64) -> Result<Vec<f64>> {
    if !(t0.is_finite() && t1.is_finite() && dt.is_finite()) || !(dt > 0.0) || !(t1 > t0) {
        return Err(Error::InvalidRange(format!(
            "need t1 > t0 and dt > 0, got t0 = {t0}, t1 = {t1}, dt = {dt}"
        )));
    }
    let steps = ((t1 - t0) / dt).round();
    if !(1.0..=1e9).contains(&steps) {
        return Err(Error::InvalidRange(format!(
            "range [{t0}, {t1}] with dt = {dt} gives {steps} steps"
        )));
    }
    Ok((0..=steps as usize).map(|k| t0 + k as f64 * dt).collect())
}

// Phasor of `M(t) e^{jθ(t)}` and its first two derivatives.
fn component(mag: [f64; 3], ang: [f64; 3]) -> [Complex64; 3] {
    let [m, dm, ddm] = mag;
    let [th, dth, ddth] = ang;
    let e = Complex64::from_polar(1.0, th);
    [
        e * m,
        e * Complex64::new(dm, m * dth),
        e * Complex64::new(ddm - m * dth * dth, 2.0 * dm * dth + m * ddth),
    ]
}

impl ThreePhaseModel {
    fn fundamental(&self, i: usize, t: f64) -> ([f64; 3], [f64; 3]) {
        let p = &self.phases[i];
        let [a, da, dda] = p.angle_mod.eval(t);
        let angle = [self.w_o * t + p.angle_offset + a, self.w_o + da, dda];
        (p.magnitude.eval(t), angle)
    }

    fn phasors(&self, t: f64) -> [[Complex64; 3]; 3] {
        std::array::from_fn(|i| {
            let (mag, ang) = self.fundamental(i, t);
            let mut z = component(mag, ang);
            if let Some(h) = self.phases[i].harmonic {
                let hw = self.harmonic_order as f64 * self.w_o;
                let zh = component([h.magnitude, 0.0, 0.0], [hw * t + h.angle_offset, hw, 0.0]);
                for k in 0..3 {
                    z[k] += zh[k];
                }
            }
            z
        })
    }

    fn phase_jets(&self, t: f64) -> Option<[PhaseJet; 3]> {
        let z = self.phasors(t);
        let mut out = [PhaseJet::default(); 3];
        for i in 0..3 {
            out[i] = if self.phases[i].harmonic.is_none() {
                let (mag, ang) = self.fundamental(i, t);
                PhaseJet {
                    mag: mag[0],
                    dmag: mag[1],
                    ddmag: mag[2],
                    angle: ang[0],
                    dangle: ang[1],
                    ddangle: ang[2],
                }
            } else {
                polar_jet(z[i])?
            };
        }
        Some(out)
    }
}

// (|z|, arg z) and derivatives from (z, z', z'').
fn polar_jet([z, dz, ddz]: [Complex64; 3]) -> Option<PhaseJet> {
    let r = z.norm();
    if !(r > 0.0) {
        return None;
    }
    let zc = z.conj();
    let a = zc * dz;
    let b = zc * ddz;
    let dr = a.re / r;
    let dphi = a.im / (r * r);
    let ddr = (dz.norm_sqr() + b.re - dr * dr) / r;
    let ddphi = (b.im - 2.0 * r * dr * dphi) / (r * r);
    Some(PhaseJet {
        mag: r,
        dmag: dr,
        ddmag: ddr,
        angle: z.im.atan2(z.re),
        dangle: dphi,
        ddangle: ddphi,
    })
}
