//! Closed-form ρ, ω and ξ for three-phase voltages `v_i = V_i sin θ_i`,
//! written directly in terms of per-phase magnitudes and angles and their
//! time derivatives.
//!
//! These formulas are kept separate from [`crate::frenet`] so that each
//! route can serve as an oracle for the other.
//!
//! Notes on the forms used here:
//!
//! * the auxiliary `v` is the Euclidean norm of the voltage vector,
//!   `v² = ½ Σ V_i² (1 − cos 2θ_i)`, and the numerator of ρ carries the
//!   matching factor ½. Dropping the ½ from `v²` leaves ρ unchanged but
//!   halves ω.
//! * [`xi_pq_form`] evaluates the `p_i`/`q_i` expression for ξ with `ω_i`
//!   taken as the components of the closed-form ω. It only agrees with the
//!   generic path when the numerator vanishes (stationary phases).
//!   [`xi_exact`] is the rearrangement that agrees everywhere.

use crate::error::{Error, Result};
use crate::frenet::Thresholds;
use crate::geometry::Vec3;

/// Magnitude and angle of one phase, with their first two time derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseJet {
    /// `V_i` (V), non-negative
    pub mag: f64,
    pub dmag: f64,
    pub ddmag: f64,
    /// `θ_i` (rad)
    pub angle: f64,
    pub dangle: f64,
    pub ddangle: f64,
}

impl PhaseJet {
    /// `(v_i, v_i', v_i'')` of `V_i sin θ_i`.
    pub fn value_jet(&self) -> [f64; 3] {
        let (s, c) = self.angle.sin_cos();
        let v = self.mag * s;
        let dv = self.dmag * s + self.mag * self.dangle * c;
        let ddv = (self.ddmag - self.mag * self.dangle * self.dangle) * s
            + (2.0 * self.dmag * self.dangle + self.mag * self.ddangle) * c;
        [v, dv, ddv]
    }
}

/// Auxiliary quantities shared by the closed forms. `r`, `u` are indexed by
/// `i` with `jk` the cyclic successor pair: `a → bc`, `b → ca`, `c → ab`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Auxiliaries {
    pub v: f64,
    pub r: [f64; 3],
    pub u: [f64; 3],
    pub p: [f64; 3],
    pub q: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormInvariants {
    pub rho: f64,
    pub omega_vec: Vec3,
    /// ξ from the `p_i`/`q_i` expression.
    pub xi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sequence {
    Positive,
    Negative,
}

const CYCLE: [(usize, usize); 3] = [(1, 2), (2, 0), (0, 1)];

pub fn auxiliaries(p: &[PhaseJet; 3], th: &Thresholds) -> Result<Auxiliaries> {
    let v_sq: f64 = 0.5 * p.iter().map(|x| x.mag * x.mag * (1.0 - (2.0 * x.angle).cos())).sum::<f64>();
    let v = v_sq.max(0.0).sqrt();
    if v <= th.eps_v {
        return Err(Error::DegenerateSpeed {
            speed: v,
            threshold: th.eps_v,
        });
    }

    let mut r = [0.0; 3];
    let mut u = [0.0; 3];
    for (i, &(j, k)) in CYCLE.iter().enumerate() {
        let (pj, pk) = (&p[j], &p[k]);
        let (sj, cj) = pj.angle.sin_cos();
        let (sk, ck) = pk.angle.sin_cos();
        r[i] = (pj.mag * pk.dmag - pk.mag * pj.dmag) * sj * sk;
        u[i] = pj.mag * pk.mag * (pk.dangle * sj * ck - pj.dangle * sk * cj);
    }
    let pp = p.map(|x| x.mag * x.ddmag + x.dmag * x.dmag - x.mag * x.dangle * x.dangle);
    let qq = p.map(|x| x.dmag * x.dangle - x.mag * x.ddangle);
    Ok(Auxiliaries { v, r, u, p: pp, q: qq })
}

fn rho_omega(p: &[PhaseJet; 3], aux: &Auxiliaries) -> (f64, Vec3) {
    let v_sq = aux.v * aux.v;
    let num: f64 = p
        .iter()
        .map(|x| {
            x.mag * x.mag * x.dangle * (2.0 * x.angle).sin()
                + x.mag * x.dmag * (1.0 - (2.0 * x.angle).cos())
        })
        .sum();
    let rho = 0.5 * num / v_sq;
    let omega = Vec3::new(aux.r[0] + aux.u[0], aux.r[1] + aux.u[1], aux.r[2] + aux.u[2]) / v_sq;
    (rho, omega)
}

// Σ (r_jk + u_jk)², i.e. |v × v'|².
fn rotation_sq(aux: &Auxiliaries) -> f64 {
    (0..3).map(|i| (aux.r[i] + aux.u[i]).powi(2)).sum()
}

fn require_rotation(omega: Vec3, th: &Thresholds) -> Result<()> {
    let w = omega.norm();
    if w > th.eps_w {
        Ok(())
    } else {
        Err(Error::DegenerateRotation {
            omega: w,
            threshold: th.eps_w,
        })
    }
}

/// ρ, ω and ξ from the closed forms. Errors with `DegenerateRotation` when
/// the phases are linearly dependent (e.g. a pure zero sequence), since ξ is
/// then undefined.
pub fn closed_form_invariants(p: &[PhaseJet; 3], th: &Thresholds) -> Result<ClosedFormInvariants> {
    let aux = auxiliaries(p, th)?;
    let (rho, omega_vec) = rho_omega(p, &aux);
    require_rotation(omega_vec, th)?;
    Ok(ClosedFormInvariants {
        rho,
        omega_vec,
        xi: xi_from(p, &aux, omega_vec),
    })
}

/// `ξ = v Σ (p_i sin θ_i + q_i cos θ_i) ω_i / Σ (r_jk + u_jk)²`, with `ω_i`
/// the components of the closed-form ω vector.
pub fn xi_pq_form(p: &[PhaseJet; 3], th: &Thresholds) -> Result<f64> {
    let aux = auxiliaries(p, th)?;
    let (_, omega) = rho_omega(p, &aux);
    require_rotation(omega, th)?;
    Ok(xi_from(p, &aux, omega))
}

fn xi_from(p: &[PhaseJet; 3], aux: &Auxiliaries, omega: Vec3) -> f64 {
    let num: f64 = (0..3)
        .map(|i| {
            let (s, c) = p[i].angle.sin_cos();
            (aux.p[i] * s + aux.q[i] * c) * omega[i]
        })
        .sum();
    aux.v * num / rotation_sq(aux)
}

/// `ξ = v³ Σ v_i'' ω_i / Σ (r_jk + u_jk)²` with `v_i''` expanded from the
/// phase jets. Equal to `|v| v·(v'×v'') / |v×v'|²`.
pub fn xi_exact(p: &[PhaseJet; 3], th: &Thresholds) -> Result<f64> {
    let aux = auxiliaries(p, th)?;
    let (_, omega) = rho_omega(p, &aux);
    require_rotation(omega, th)?;
    let num: f64 = (0..3).map(|i| p[i].value_jet()[2] * omega[i]).sum();
    Ok(aux.v.powi(3) * num / rotation_sq(&aux))
}

/// Stationary symmetric sequences: ρ = ξ = 0 and ω = ±(w_o/√3)(1,1,1),
/// independent of the magnitude.
pub fn stationary_sequence(kind: Sequence, magnitude: f64, w_o: f64) -> Result<ClosedFormInvariants> {
    if !(magnitude > 0.0) || w_o == 0.0 || !w_o.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "stationary sequence needs V > 0 and w_o != 0, got V = {magnitude}, w_o = {w_o}"
        )));
    }
    let s = match kind {
        Sequence::Positive => 1.0,
        Sequence::Negative => -1.0,
    };
    let c = s * w_o / 3f64.sqrt();
    Ok(ClosedFormInvariants {
        rho: 0.0,
        omega_vec: Vec3::new(c, c, c),
        xi: 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const W: f64 = 100.0 * PI;
    const TH: Thresholds = Thresholds {
        eps_v: 1e-9,
        eps_w: 1e-9,
    };

    fn stationary(mags: [f64; 3], offs: [f64; 3], t: f64) -> [PhaseJet; 3] {
        std::array::from_fn(|i| PhaseJet {
            mag: mags[i],
            angle: W * t + offs[i],
            dangle: W,
            ..Default::default()
        })
    }

    const E0_OFF: [f64; 3] = [0.0, -2.0 * PI / 3.0, 2.0 * PI / 3.0];

    #[test]
    fn e0_auxiliary_norm() {
        let aux = auxiliaries(&stationary([12.0; 3], E0_OFF, 0.0), &TH).unwrap();
        assert!((aux.v - 14.696938456699067).abs() < 1e-12);
        assert_eq!(aux.r, [0.0; 3]);
    }

    #[test]
    fn zero_magnitudes_are_degenerate() {
        let p = stationary([0.0; 3], E0_OFF, 0.01);
        assert!(matches!(auxiliaries(&p, &TH), Err(Error::DegenerateSpeed { .. })));
    }

    #[test]
    fn e0_closed_form() {
        for &t in &[0.0, 0.0017, 0.009] {
            let cf = closed_form_invariants(&stationary([12.0; 3], E0_OFF, t), &TH).unwrap();
            assert!(cf.rho.abs() < 1e-12);
            assert!(cf.xi.abs() < 1e-9);
            let c = W / 3f64.sqrt();
            for k in 0..3 {
                assert!((cf.omega_vec[k] - c).abs() < 1e-9 * c);
            }
        }
    }

    #[test]
    fn unbalanced_stationary_special_case() {
        let mags = [12.0, 8.0, 12.0];
        let p = stationary(mags, E0_OFF, 0.0);
        let cf = closed_form_invariants(&p, &TH).unwrap();
        // ρ = w_o Σ V_i² sin 2θ_i / Σ V_i² (1 − cos 2θ_i)
        let num: f64 = (0..3).map(|i| mags[i].powi(2) * (2.0 * p[i].angle).sin()).sum();
        let den: f64 = (0..3).map(|i| mags[i].powi(2) * (1.0 - (2.0 * p[i].angle).cos())).sum();
        assert!((cf.rho - W * num / den).abs() < 1e-9 * W);
        // ω_i = w_o V_j V_k sin(θ_j − θ_k) / |v|²
        let v_sq = den / 2.0;
        for (i, &(j, k)) in CYCLE.iter().enumerate() {
            let expect = W * mags[j] * mags[k] * (p[j].angle - p[k].angle).sin() / v_sq;
            assert!((cf.omega_vec[i] - expect).abs() < 1e-9 * W);
        }
        assert!(cf.xi.abs() < 1e-9);
    }

    #[test]
    fn zero_sequence_is_rejected() {
        let p = stationary([12.0; 3], [0.3; 3], 0.004);
        assert!(matches!(
            closed_form_invariants(&p, &TH),
            Err(Error::DegenerateRotation { .. })
        ));
    }

    #[test]
    fn stationary_sequences() {
        let pos = stationary_sequence(Sequence::Positive, 12.0, W).unwrap();
        assert!((pos.omega_vec.x - 181.37993642342178).abs() < 1e-9);
        assert!((pos.omega_vec.norm() - W).abs() < 1e-12);
        let neg = stationary_sequence(Sequence::Negative, 12.0, W).unwrap();
        assert_eq!(neg.omega_vec, -pos.omega_vec);
        assert_eq!(stationary_sequence(Sequence::Positive, 24.0, W).unwrap(), pos);
        assert!(stationary_sequence(Sequence::Positive, 0.0, W).is_err());
    }

    #[test]
    fn xi_vanishes_for_stationary_unbalanced() {
        let p = stationary([12.0, 8.0, 10.0], [0.0, -2.0, 2.3], 0.0031);
        assert!(xi_pq_form(&p, &TH).unwrap().abs() < 1e-9);
        assert!(xi_exact(&p, &TH).unwrap().abs() < 1e-9);
    }
}
