//! Park (dq0) coordinates and the rotating-frame derivative relations.
//!
//! Amplitude-invariant convention: `α = ⅔(v_a − v_b/2 − v_c/2)`,
//! `β = (v_b − v_c)/√3`, `o = (v_a + v_b + v_c)/3`, then a rotation by
//! `θ(t) = w_dq t + θ₀` with `d = α cos θ + β sin θ`, `q = −α sin θ + β cos θ`.
//! The axes then satisfy `ê_d' = w_dq ê_q` and `ê_q' = −w_dq ê_d`.

use crate::error::{Error, Result};
use crate::frenet::{Jet2, Thresholds};
use crate::geometry::{cross, inner, Vec3};

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParkConfig {
    pub w_dq: f64,
    pub theta0: f64,
}

impl Default for ParkConfig {
    fn default() -> Self {
        ParkConfig {
            w_dq: 0.0,
            theta0: 0.0,
        }
    }
}

impl ParkConfig {
    pub fn new(w_dq: f64, theta0: f64) -> Result<Self> {
        if !(w_dq.is_finite() && theta0.is_finite()) {
            return Err(Error::InvalidParameter("Park frame speed and angle must be finite".into()));
        }
        Ok(ParkConfig { w_dq, theta0 })
    }

    pub fn angle(&self, t: f64) -> f64 {
        self.w_dq * t + self.theta0
    }
}

/// Voltage in dq0 coordinates, ordered `(v_d, v_q, v_o)`, with coordinate
/// derivatives (the rotating-frame derivatives).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DqoJet {
    pub t: f64,
    pub vdq0: Vec3,
    pub dvdq0: Vec3,
    pub ddvdq0: Vec3,
}

fn clarke(x: Vec3) -> Vec3 {
    Vec3::new(
        2.0 / 3.0 * (x.x - 0.5 * x.y - 0.5 * x.z),
        (x.y - x.z) / SQRT3,
        (x.x + x.y + x.z) / 3.0,
    )
}

fn inverse_clarke(y: Vec3) -> Vec3 {
    let h = 0.5 * SQRT3 * y.y;
    Vec3::new(y.x + y.z, -0.5 * y.x + h + y.z, -0.5 * y.x - h + y.z)
}

fn rotate(y: Vec3, theta: f64) -> Vec3 {
    let (s, c) = theta.sin_cos();
    Vec3::new(c * y.x + s * y.y, -s * y.x + c * y.y, y.z)
}

/// `K y = (y_q, −y_d, 0)`: the generator of the frame rotation.
fn k(y: Vec3) -> Vec3 {
    Vec3::new(y.y, -y.x, 0.0)
}

fn planar(y: Vec3) -> Vec3 {
    Vec3::new(y.x, y.y, 0.0)
}

pub fn park_position(x: Vec3, theta: f64) -> Vec3 {
    rotate(clarke(x), theta)
}

pub fn inverse_park_position(y: Vec3, theta: f64) -> Vec3 {
    inverse_clarke(rotate(y, -theta))
}

pub fn to_dq0(abc: &Jet2, cfg: &ParkConfig) -> DqoJet {
    let th = cfg.angle(abc.t);
    let w = cfg.w_dq;
    let y = park_position(abc.v, th);
    let dy = park_position(abc.dv, th) + w * k(y);
    let ddy = park_position(abc.ddv, th) + 2.0 * w * k(dy) + w * w * planar(y);
    DqoJet {
        t: abc.t,
        vdq0: y,
        dvdq0: dy,
        ddvdq0: ddy,
    }
}

pub fn from_dq0(j: &DqoJet, cfg: &ParkConfig) -> Jet2 {
    let th = cfg.angle(j.t);
    let w = cfg.w_dq;
    let (y, dy, ddy) = (j.vdq0, j.dvdq0, j.ddvdq0);
    Jet2::new(
        j.t,
        inverse_park_position(y, th),
        inverse_park_position(dy - w * k(y), th),
        inverse_park_position(ddy - 2.0 * w * k(dy) - w * w * planar(y), th),
    )
}

/// `ρ`, `ω` and `Δω` written in dq0 coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DqoInvariants {
    pub rho: f64,
    pub omega_vec: Vec3,
    /// `(v_d v_q' − v_q v_d')/(v_d² + v_q²)`, zero when `v_d = v_q = 0`.
    pub delta_omega: f64,
}

fn check_speed(v: Vec3, th: &Thresholds) -> Result<f64> {
    let s = v.norm();
    if s > th.eps_v {
        Ok(s)
    } else {
        Err(Error::DegenerateSpeed {
            speed: s,
            threshold: th.eps_v,
        })
    }
}

pub fn dq0_invariants(j: &DqoJet, cfg: &ParkConfig, th: &Thresholds) -> Result<DqoInvariants> {
    let s = check_speed(j.vdq0, th)?;
    let v2 = s * s;
    let w = cfg.w_dq;
    let Vec3 { x: d, y: q, z: o } = j.vdq0;
    let Vec3 { x: dd, y: dq, z: dox } = j.dvdq0;

    let rho = (d * dd + q * dq + o * dox) / v2;
    let omega_vec = Vec3::new(
        (q * dox - o * dq - w * o * d) / v2,
        (o * dd - d * dox - w * o * q) / v2,
        (d * dq - q * dd + w * (d * d + q * q)) / v2,
    );
    let dq2 = d * d + q * q;
    let delta_omega = if dq2 > 0.0 { (d * dq - q * dd) / dq2 } else { 0.0 };
    Ok(DqoInvariants {
        rho,
        omega_vec,
        delta_omega,
    })
}

/// Derivative in the inertial frame, expressed in dq0 components:
/// `(v_d' − w v_q, v_q' + w v_d, v_o')`.
pub fn inertial_derivative(j: &DqoJet, cfg: &ParkConfig) -> Vec3 {
    j.dvdq0 - cfg.w_dq * k(j.vdq0)
}

/// Both splittings of the inertial derivative: rotating-frame
/// `v̂' + r × v` and geometric `ρ v + ω × v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameCheck {
    pub inertial: Vec3,
    pub v_hat_dot: Vec3,
    pub r_cross_v: Vec3,
    pub rho_v: Vec3,
    pub omega_cross_v: Vec3,
    pub delta_omega: f64,
    /// `|v̂' + r×v − (ρv + ω×v)|`, relative.
    pub sum_dev: f64,
    /// `|v̂' − ρv|`, relative; zero only when `Δω = 0` and `v_o` is static.
    pub term_dev: f64,
    /// `|v̂' − (ρv + Δω ê_o × v)|`, relative; meaningful when `v_o = 0`.
    pub balanced_dev: f64,
    /// `|v' − v̂'|`, relative; zero for `w_dq = 0`.
    pub clarke_dev: f64,
    pub balanced: bool,
}

pub const FRAME_TOL: f64 = 1e-9;

impl FrameCheck {
    pub fn sums_agree(&self) -> bool {
        self.sum_dev <= FRAME_TOL
    }

    pub fn terms_coincide(&self) -> bool {
        self.term_dev <= FRAME_TOL
    }
}

pub fn derivative_frame_check(j: &DqoJet, cfg: &ParkConfig, th: &Thresholds) -> Result<FrameCheck> {
    let inv = dq0_invariants(j, cfg, th)?;
    let v = j.vdq0;
    let inertial = inertial_derivative(j, cfg);
    let v_hat_dot = j.dvdq0;
    let r_cross_v = cross(Vec3::new(0.0, 0.0, cfg.w_dq), v);
    let rho_v = inv.rho * v;
    let omega_cross_v = cross(inv.omega_vec, v);
    let balanced_pred = rho_v + cross(Vec3::new(0.0, 0.0, inv.delta_omega), v);

    let scale = [inertial, v_hat_dot, r_cross_v, rho_v, omega_cross_v]
        .iter()
        .map(|x| x.norm())
        .fold(f64::MIN_POSITIVE, f64::max);
    let rel = |x: Vec3| x.norm() / scale;

    Ok(FrameCheck {
        inertial,
        v_hat_dot,
        r_cross_v,
        rho_v,
        omega_cross_v,
        delta_omega: inv.delta_omega,
        sum_dev: rel(v_hat_dot + r_cross_v - rho_v - omega_cross_v),
        term_dev: rel(v_hat_dot - rho_v),
        balanced_dev: rel(v_hat_dot - balanced_pred),
        clarke_dev: rel(inertial - v_hat_dot),
        balanced: v.z.abs() <= th.eps_v.max(1e-12 * v.norm()),
    })
}

/// `(v̂' + r×v) · v / |v|²` equals `ρ`; exposed for tests of the
/// inertial route.
pub fn rho_from_inertial(j: &DqoJet, cfg: &ParkConfig) -> f64 {
    inner(j.vdq0, inertial_derivative(j, cfg)) / j.vdq0.norm_sq()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frenet::invariants;
    use std::f64::consts::PI;

    const W: f64 = 100.0 * PI;

    fn e0(t: f64) -> Jet2 {
        let ph = [0.0, -2.0 * PI / 3.0, 2.0 * PI / 3.0];
        let f = |k: usize, d: u32| {
            let a = W * t + ph[k];
            12.0 * W.powi(d as i32)
                * match d % 4 {
                    0 => a.sin(),
                    1 => a.cos(),
                    2 => -a.sin(),
                    _ => -a.cos(),
                }
        };
        Jet2::new(
            t,
            Vec3::new(f(0, 0), f(1, 0), f(2, 0)),
            Vec3::new(f(0, 1), f(1, 1), f(2, 1)),
            Vec3::new(f(0, 2), f(1, 2), f(2, 2)),
        )
    }

    #[test]
    fn aligned_e0_is_constant() {
        let cfg = ParkConfig::new(W, -PI / 2.0).unwrap();
        for &t in &[0.0, 0.0013, 0.017, 0.5] {
            let y = to_dq0(&e0(t), &cfg);
            assert!((y.vdq0.x - 12.0).abs() < 1e-9);
            assert!(y.vdq0.y.abs() < 1e-9 && y.vdq0.z.abs() < 1e-9);
            assert!(y.dvdq0.max_abs() < 1e-9 * W * 12.0);
            assert!(y.ddvdq0.max_abs() < 1e-9 * W * W * 12.0);
        }
    }

    #[test]
    fn clarke_case_rotates_at_w_o() {
        let cfg = ParkConfig::default();
        let y = to_dq0(&e0(0.003), &cfg);
        let inv = dq0_invariants(&y, &cfg, &Thresholds::default()).unwrap();
        assert!((inv.delta_omega - W).abs() < 1e-9 * W);
        assert!((inv.omega_vec.z - W).abs() < 1e-9 * W);
    }

    #[test]
    fn zero_in_zero_out() {
        let z = Jet2::new(0.1, Vec3::ZERO, Vec3::ZERO, Vec3::ZERO);
        let y = to_dq0(&z, &ParkConfig::new(W, 0.3).unwrap());
        assert_eq!(y.vdq0, Vec3::ZERO);
        assert_eq!(y.dvdq0, Vec3::ZERO);
        assert!(matches!(
            dq0_invariants(&y, &ParkConfig::default(), &Thresholds::default()),
            Err(Error::DegenerateSpeed { .. })
        ));
    }

    #[test]
    fn synchronous_frame_remark() {
        let cfg = ParkConfig::new(W, 0.4).unwrap();
        let y = to_dq0(&e0(0.0021), &cfg);
        let inv = dq0_invariants(&y, &cfg, &Thresholds::default()).unwrap();
        assert!(inv.rho.abs() < 1e-9);
        assert!(inv.delta_omega.abs() < 1e-9);
        assert!((inv.omega_vec - Vec3::new(0.0, 0.0, W)).norm() < 1e-9 * W);
        let c = derivative_frame_check(&y, &cfg, &Thresholds::default()).unwrap();
        assert!(c.sums_agree() && c.terms_coincide());
        assert!((c.r_cross_v - c.omega_cross_v).norm() < 1e-9 * c.inertial.norm());
    }

    #[test]
    fn constant_dq_off_nominal() {
        let w = W + 2.0 * PI;
        let cfg = ParkConfig::new(w, 0.0).unwrap();
        let y = DqoJet {
            t: 0.37,
            vdq0: Vec3::new(7.0, -3.0, 0.0),
            dvdq0: Vec3::ZERO,
            ddvdq0: Vec3::ZERO,
        };
        let inv = dq0_invariants(&y, &cfg, &Thresholds::default()).unwrap();
        assert_eq!(inv.delta_omega, 0.0);
        assert!((inv.omega_vec.z - w).abs() < 1e-12 * w);
        let abc = from_dq0(&y, &cfg);
        let g = invariants(&abc, &Thresholds::default()).unwrap();
        assert!((g.omega_mag - w).abs() < 1e-9 * w);
        assert!(g.rho.abs() < 1e-9);
    }

    #[test]
    fn generic_jet_sums_agree_terms_differ() {
        let cfg = ParkConfig::new(W, 0.2).unwrap();
        let y = DqoJet {
            t: 0.01,
            vdq0: Vec3::new(10.0, 2.0, 1.5),
            dvdq0: Vec3::new(30.0, -50.0, 8.0),
            ddvdq0: Vec3::new(1.0, 2.0, 3.0),
        };
        let c = derivative_frame_check(&y, &cfg, &Thresholds::default()).unwrap();
        assert!(c.sums_agree());
        assert!(!c.terms_coincide());
        assert!(!c.balanced);
        assert!((rho_from_inertial(&y, &cfg) - inner(y.vdq0, y.dvdq0) / y.vdq0.norm_sq()).abs() < 1e-12);
    }

    #[test]
    fn round_trip() {
        let cfg = ParkConfig::new(123.0, -0.7).unwrap();
        let j = Jet2::new(0.2, Vec3::new(1.0, -4.0, 2.5), Vec3::new(300.0, 20.0, -7.0), Vec3::new(1e4, -3e3, 5e2));
        let back = from_dq0(&to_dq0(&j, &cfg), &cfg);
        assert!((back.v - j.v).norm() < 1e-12 * j.v.norm());
        assert!((back.dv - j.dv).norm() < 1e-12 * j.dv.norm());
        assert!((back.ddv - j.ddv).norm() < 1e-11 * j.ddv.norm());
    }
}
