//! Geometric invariants of the flux curve whose time derivative is the
//! voltage vector.
//!
//! A voltage jet `(v, v', v'')` is read as `(x', x'', x''')` of a space curve
//! `x = -φ` (flux). From it we get the radial frequency `ρ`, the azimuthal
//! frequency vector `ω`, curvature `κ`, torsion `τ`, torsional frequency
//! `ξ = |v| τ`, the Frenet frame and the decomposition of the frequency
//! derivative `ω' = η ω + τ v × ω`.
//!
//! Everything here is a pure per-sample function. Current jets go through
//! the same functions unchanged.

use crate::error::{Error, Result};
use crate::geometry::{cross, inner, triple_scalar, Vec3};

/// Degeneracy thresholds for `|v|` (V) and `|ω|` (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub eps_v: f64,
    pub eps_w: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            eps_v: 1e-9,
            eps_w: 1e-9,
        }
    }
}

/// Value, first and second time derivative of the voltage vector at `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub t: f64,
    pub v: Vec3,
    pub dv: Vec3,
    pub ddv: Vec3,
}

impl Jet2 {
    pub fn new(t: f64, v: Vec3, dv: Vec3, ddv: Vec3) -> Self {
        Jet2 { t, v, dv, ddv }
    }

    /// Like [`Jet2::new`] but rejects NaN/Inf anywhere in the jet.
    pub fn checked(t: f64, v: Vec3, dv: Vec3, ddv: Vec3) -> Result<Self> {
        let j = Jet2::new(t, v, dv, ddv);
        if j.is_finite() {
            Ok(j)
        } else {
            Err(Error::NonFinite("jet"))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.v.is_finite() && self.dv.is_finite() && self.ddv.is_finite()
    }
}

/// Invariants of the flux curve at one time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeomInvariants {
    /// `|v|` (V)
    pub v_mag: f64,
    /// `(v·v')/|v|²` (1/s)
    pub rho: f64,
    /// `(v×v')/|v|²` (rad/s)
    pub omega_vec: Vec3,
    pub omega_mag: f64,
    /// `|ω|/|v|` (1/(V·s))
    pub kappa: f64,
    /// 1/(V·s)
    pub tau: f64,
    /// `|v| τ` (1/s)
    pub xi: f64,
    /// `v' − ρ v`, the normal before normalization (V/s)
    pub n_vec: Vec3,
    pub n_mag: f64,
    /// False when `|ω| <= eps_w`; then ω, κ, τ, ξ and n are reported as zero.
    pub rotation_defined: bool,
}

/// Unit tangent, normal and binormal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetFrame {
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
}

/// `ω' = η ω + τ v × ω`, with the measured residual of that identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocofDecomposition {
    pub omega_dot: Vec3,
    pub eta: f64,
    /// `η ω`
    pub sym_part: Vec3,
    /// `τ v × ω`
    pub antisym_part: Vec3,
    /// `ω' − η ω − τ v × ω`
    pub residual: Vec3,
}

/// Which published coefficient pair a recovered coefficient matches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateMatch {
    /// Coefficient list: `b2 = 2ρ − η`, `c2 = vξ`
    pub listed: bool,
    /// Expanded form `v'' = … − (2ρ − η) n − vξ ω`: `b2 = η − 2ρ`, `c2 = −vξ`
    pub displayed: bool,
    /// Direct derivation: `b2 = 2ρ + η`, `c2 = +vξ`
    pub corrected: bool,
}

/// `v'' = a2 v + b2 n + c2 ω`, recovered by projection on the orthogonal
/// basis `{v, n, ω}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondDerivativeDecomposition {
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
    /// `v'' − (a2 v + b2 n + c2 ω)`
    pub residual: Vec3,
    /// `ρ' + ρ² − ω²`
    pub a2_closed: f64,
    /// `2ρ − η`
    pub b2_listed: f64,
    /// `2ρ + η`
    pub b2_corrected: f64,
    /// `|v| ξ`
    pub c2_closed: f64,
    pub b2_match: CandidateMatch,
    pub c2_match: CandidateMatch,
}

/// Arc-length rate `s' = |v|`.
pub fn speed(j: &Jet2) -> f64 {
    j.v.norm()
}

fn check_speed(j: &Jet2, th: &Thresholds) -> Result<f64> {
    let s = speed(j);
    if s > th.eps_v {
        Ok(s)
    } else {
        Err(Error::DegenerateSpeed {
            speed: s,
            threshold: th.eps_v,
        })
    }
}

// ρ and the raw (un-thresholded) ω.
fn rho_omega(j: &Jet2, v_sq: f64) -> (f64, Vec3) {
    (inner(j.v, j.dv) / v_sq, cross(j.v, j.dv) / v_sq)
}

pub fn invariants(j: &Jet2, th: &Thresholds) -> Result<GeomInvariants> {
    let v_mag = check_speed(j, th)?;
    let v_sq = v_mag * v_mag;
    let (rho, omega_raw) = rho_omega(j, v_sq);
    let omega_mag = omega_raw.norm();

    if omega_mag <= th.eps_w {
        return Ok(GeomInvariants {
            v_mag,
            rho,
            omega_vec: Vec3::ZERO,
            omega_mag: 0.0,
            kappa: 0.0,
            tau: 0.0,
            xi: 0.0,
            n_vec: Vec3::ZERO,
            n_mag: 0.0,
            rotation_defined: false,
        });
    }

    let n_vec = j.dv - rho * j.v;
    // τ = v·(v'×v'') / (ω² v⁴)
    let tau = triple_scalar(j.v, j.dv, j.ddv) / (omega_mag * omega_mag * v_sq * v_sq);
    Ok(GeomInvariants {
        v_mag,
        rho,
        omega_vec: omega_raw,
        omega_mag,
        kappa: omega_mag / v_mag,
        tau,
        xi: v_mag * tau,
        n_vec,
        n_mag: n_vec.norm(),
        rotation_defined: true,
    })
}

pub fn frame(j: &Jet2, th: &Thresholds) -> Result<FrenetFrame> {
    let inv = invariants(j, th)?;
    if !inv.rotation_defined {
        let v_sq = inv.v_mag * inv.v_mag;
        return Err(Error::DegenerateRotation {
            omega: rho_omega(j, v_sq).1.norm(),
            threshold: th.eps_w,
        });
    }
    Ok(FrenetFrame {
        t: j.v / inv.v_mag,
        n: inv.n_vec / inv.n_mag,
        b: inv.omega_vec / inv.omega_mag,
    })
}

/// Applies `D_t = d/dt − [ρ + ω×]` to a vector `x` with time derivative
/// `dx`, using the `ρ` and `ω` of that same vector.
pub fn derivative_operator(rho: f64, omega: Vec3, x: Vec3, dx: Vec3) -> Vec3 {
    dx - (rho * x + cross(omega, x))
}

/// `v' − (ρ v + ω × v)`; zero for every valid jet.
pub fn velocity_identity_residual(j: &Jet2, th: &Thresholds) -> Result<Vec3> {
    let v_mag = check_speed(j, th)?;
    let (rho, omega) = rho_omega(j, v_mag * v_mag);
    Ok(derivative_operator(rho, omega, j.v, j.dv))
}

/// `ρ' = (v·v'')/|v|² + |ω|² − ρ²`
pub fn rho_prime(j: &Jet2, th: &Thresholds) -> Result<f64> {
    let v_mag = check_speed(j, th)?;
    let v_sq = v_mag * v_mag;
    let (rho, omega) = rho_omega(j, v_sq);
    Ok(inner(j.v, j.ddv) / v_sq + omega.norm_sq() - rho * rho)
}

/// `ω' = (v×v'')/|v|² − 2ρω`, the analytic derivative of `ω = (v×v')/|v|²`.
pub fn omega_dot_direct(j: &Jet2, th: &Thresholds) -> Result<Vec3> {
    let v_mag = check_speed(j, th)?;
    let v_sq = v_mag * v_mag;
    let (rho, omega) = rho_omega(j, v_sq);
    Ok(cross(j.v, j.ddv) / v_sq - 2.0 * rho * omega)
}

fn require_rotation(inv: &GeomInvariants, j: &Jet2, th: &Thresholds) -> Result<()> {
    if inv.rotation_defined {
        Ok(())
    } else {
        Err(Error::DegenerateRotation {
            omega: rho_omega(j, inv.v_mag * inv.v_mag).1.norm(),
            threshold: th.eps_w,
        })
    }
}

pub fn rocof(j: &Jet2, th: &Thresholds) -> Result<RocofDecomposition> {
    let inv = invariants(j, th)?;
    require_rotation(&inv, j, th)?;
    let omega_dot = omega_dot_direct(j, th)?;
    rocof_from_parts(j, &inv, omega_dot)
}

/// Decomposes a given `ω'` (e.g. one obtained by differencing a series of
/// `ω` samples) around the invariants of `j`.
pub fn rocof_from_parts(j: &Jet2, inv: &GeomInvariants, omega_dot: Vec3) -> Result<RocofDecomposition> {
    if !inv.rotation_defined {
        return Err(Error::DegenerateRotation {
            omega: inv.omega_mag,
            threshold: 0.0,
        });
    }
    let w = inv.omega_vec;
    let eta = inner(w, omega_dot) / w.norm_sq();
    let sym_part = eta * w;
    let antisym_part = inv.tau * cross(j.v, w);
    Ok(RocofDecomposition {
        omega_dot,
        eta,
        sym_part,
        antisym_part,
        residual: omega_dot - sym_part - antisym_part,
    })
}

pub fn second_derivative_decomposition(
    j: &Jet2,
    th: &Thresholds,
) -> Result<SecondDerivativeDecomposition> {
    let inv = invariants(j, th)?;
    require_rotation(&inv, j, th)?;
    let (v, n, w) = (j.v, inv.n_vec, inv.omega_vec);

    // {v, n, ω} is orthogonal, so the 3×3 solve reduces to projections.
    let a2 = inner(j.ddv, v) / v.norm_sq();
    let b2 = inner(j.ddv, n) / n.norm_sq();
    let c2 = inner(j.ddv, w) / w.norm_sq();
    let residual = j.ddv - (a2 * v + b2 * n + c2 * w);

    let rho = inv.rho;
    let eta = rocof(j, th)?.eta;
    let a2_closed = rho_prime(j, th)? + rho * rho - inv.omega_mag * inv.omega_mag;
    let b2_listed = 2.0 * rho - eta;
    let b2_corrected = 2.0 * rho + eta;
    let c2_closed = inv.v_mag * inv.xi;

    let close = |x: f64, y: f64, scale: f64| (x - y).abs() <= 1e-6 * scale.max(x.abs()).max(y.abs());
    let b_scale = rho.abs() + eta.abs() + inv.omega_mag;
    let c_scale = c2_closed.abs() + inv.v_mag * inv.omega_mag * 1e-6;
    Ok(SecondDerivativeDecomposition {
        a2,
        b2,
        c2,
        residual,
        a2_closed,
        b2_listed,
        b2_corrected,
        c2_closed,
        b2_match: CandidateMatch {
            listed: close(b2, b2_listed, b_scale),
            displayed: close(b2, -b2_listed, b_scale),
            corrected: close(b2, b2_corrected, b_scale),
        },
        c2_match: CandidateMatch {
            listed: close(c2, c2_closed, c_scale),
            displayed: close(c2, -c2_closed, c_scale),
            corrected: close(c2, c2_closed, c_scale),
        },
    })
}

/// Curvature of a curve from `(x', x'')`: `|x'×x''| / |x'|³`.
pub fn curve_curvature(dx: Vec3, ddx: Vec3) -> f64 {
    cross(dx, ddx).norm() / dx.norm().powi(3)
}

/// Torsion of a curve from `(x', x'', x''')`: `x'·(x''×x''') / |x'×x''|²`.
pub fn curve_torsion(dx: Vec3, ddx: Vec3, dddx: Vec3) -> f64 {
    triple_scalar(dx, ddx, dddx) / cross(dx, ddx).norm_sq()
}
