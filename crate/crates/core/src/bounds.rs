//! Closed-form failure-probability bounds of the planner, plus a Monte
//! Carlo estimate of the C_N volume they need.
//!
//! Powers `(1 - x)^N` are evaluated as `exp(N · ln_1p(-x))`, which keeps full
//! relative precision when `x` is tiny and `N` is huge.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::biped::{necessary_check, BipedSpec};
use crate::explorespace::{sample_pose, ExploreBounds};
use crate::scalar::Scalar;
use crate::world::Environment;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("domain error: {0}")]
    Domain(&'static str),
}

fn clamp01<T: Scalar>(v: T) -> T {
    v.max(T::zero()).min(T::one())
}

/// `(1 - x)^n` for `x ∈ [0, 1]`.
fn one_minus_pow<T: Scalar>(x: T, n: T) -> T {
    if n == T::zero() {
        return T::one();
    }
    if x >= T::one() {
        return T::zero();
    }
    (n * (-x).ln_1p()).exp()
}

/// β_m = r²Δθ / (2|F_σ|): probability that one uniform (x, y, yaw) draw over
/// F_σ × [0, 2π) lands in a cylinder of radius `r` and yaw span `dtheta`.
pub fn beta_m<T: Scalar>(r: T, dtheta: T, area_f: T) -> Result<T, BoundError> {
    if !(r > T::zero() && dtheta > T::zero() && area_f > T::zero()) {
        return Err(BoundError::Domain("r_m, Δθ_m and |F_σ| must be positive"));
    }
    let two = T::lit(2.0);
    let cyl = T::PI() * r * r * dtheta;
    let space = two * T::PI() * area_f;
    if cyl > space * (T::one() + T::boundary_tol()) {
        return Err(BoundError::Domain("sampling space smaller than the cylinder"));
    }
    Ok((r * r * dtheta / (two * area_f)).min(T::one()))
}

/// min(1, M (1 - β)^N).
pub fn mode_failure_bound<T: Scalar>(m: usize, beta: T, n_sigma: u64) -> T {
    let mt = T::from_usize(m).unwrap();
    let n = T::from_u64(n_sigma).unwrap();
    clamp01(mt * one_minus_pow(beta, n))
}

/// ε = min(R/2, ρ/4).
pub fn epsilon_for<T: Scalar>(r: T, rho: T) -> T {
    (r / T::lit(2.0)).min(rho / T::lit(4.0))
}

/// Volume of a 6-ball of radius ε: π³ε⁶/6.
pub fn ball6_volume<T: Scalar>(eps: T) -> T {
    T::PI().powi(3) * eps.powi(6) / T::lit(6.0)
}

/// min(1, (L/ε)(1 - π³ε⁶/(6|C_N|))^{N_P}).
pub fn exploration_failure_bound<T: Scalar>(l: T, eps: T, vol_cn: T, n_p: u64) -> Result<T, BoundError> {
    if !(eps > T::zero() && l > T::zero() && vol_cn > T::zero()) {
        return Err(BoundError::Domain("L, ε and |C_N| must be positive"));
    }
    let x = ball6_volume(eps) / vol_cn;
    if x > T::one() {
        return Err(BoundError::Domain("ε-ball larger than the necessary-condition manifold"));
    }
    let n = T::from_u64(n_p).unwrap();
    Ok(clamp01(l / eps * one_minus_pow(x, n)))
}

/// min(1, a + b).
pub fn combined_bound<T: Scalar>(a: T, b: T) -> T {
    clamp01(a + b)
}

/// Everything the bounds need about one problem instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct BoundInputs<T> {
    /// Single-support modes in the reference solution.
    pub m: usize,
    pub r_m: T,
    pub dtheta_m: T,
    pub area_f: T,
    /// Route arclength.
    pub l: T,
    pub eps: T,
    pub vol_cn: T,
    /// Clearance of the route from the boundary of C_N.
    pub r: T,
    pub rho: T,
    pub h_m: T,
    pub n_p: u64,
    pub n_sigma: u64,
}

impl<T: Scalar> BoundInputs<T> {
    pub fn mode_bound(&self) -> Result<T, BoundError> {
        Ok(mode_failure_bound(self.m, beta_m(self.r_m, self.dtheta_m, self.area_f)?, self.n_sigma))
    }

    pub fn exploration_bound(&self) -> Result<T, BoundError> {
        exploration_failure_bound(self.l, self.eps, self.vol_cn, self.n_p)
    }

    pub fn combined(&self) -> Result<T, BoundError> {
        Ok(combined_bound(self.exploration_bound()?, self.mode_bound()?))
    }
}

/// (α, β) with α·e^{-β} bounding the combined failure probability:
/// α = L/ε + M, β = min(π³ε⁶N_P/(6|C_N|), r²ΔθN_σ/(2|F_σ|)).
pub fn combined_exponential_form<T: Scalar>(i: &BoundInputs<T>) -> Result<(T, T), BoundError> {
    let beta = beta_m(i.r_m, i.dtheta_m, i.area_f)?;
    exploration_failure_bound(i.l, i.eps, i.vol_cn, 0)?;
    let alpha = i.l / i.eps + T::from_usize(i.m).unwrap();
    let b_explore = ball6_volume(i.eps) * T::from_u64(i.n_p).unwrap() / i.vol_cn;
    let b_modes = beta * T::from_u64(i.n_sigma).unwrap();
    Ok((alpha, b_explore.min(b_modes)))
}

/// min((L/ε)πρ², 4Lπρ); the second term applies when ε = ρ/4.
pub fn area_f_upper_bound<T: Scalar>(l: T, eps: T, rho: T) -> T {
    let disks = l / eps * T::PI() * rho * rho;
    let tube = T::lit(4.0) * l * T::PI() * rho;
    disks.min(tube)
}

/// min(1, M(1 - r²Δθ/(8Lπρ))^{N_σ}).
pub fn mode_convergence_bound<T: Scalar>(m: usize, r: T, dtheta: T, l: T, rho: T, n_sigma: u64) -> T {
    let x = (r * r * dtheta / (T::lit(8.0) * l * T::PI() * rho)).min(T::one());
    let n = T::from_u64(n_sigma).unwrap();
    clamp01(T::from_usize(m).unwrap() * one_minus_pow(x, n))
}

/// Monte Carlo estimate of the 6-volume of C_N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub volume: f64,
    pub accepted: u64,
    pub draws: u64,
    /// 95% interval on the volume (normal approximation, clamped at 0).
    pub ci95: (f64, f64),
}

/// |𝓔| times the fraction of `n` uniform draws accepted by the necessary check.
pub fn estimate_vol_cn<R: Rng + ?Sized>(
    env: &Environment,
    spec: &BipedSpec,
    bounds: &ExploreBounds,
    n: u64,
    rng: &mut R,
) -> VolumeEstimate {
    assert!(n > 0, "need at least one draw");
    let accepted = (0..n).filter(|_| necessary_check(env, spec, &sample_pose(bounds, rng))).count() as u64;
    let vol = bounds.volume();
    let p = accepted as f64 / n as f64;
    let half = 1.96 * (p * (1.0 - p) / n as f64).sqrt();
    VolumeEstimate {
        volume: vol * p,
        accepted,
        draws: n,
        ci95: (vol * (p - half).max(0.0), vol * (p + half).min(1.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn beta_examples() {
        // 0.01 · (π/2) / (2 · 2)
        let b = beta_m(0.1, PI / 2.0, 2.0).unwrap();
        assert!((b - PI / 800.0).abs() < 1e-15);
        let r: f64 = 0.3;
        assert_eq!(beta_m(r, 2.0 * PI, PI * r * r).unwrap(), 1.0);
        assert!(beta_m(r, 2.0 * PI, 0.9 * PI * r * r).is_err());
        assert!(beta_m(1e-6, 1.0, 1.0).unwrap() < 1e-12);
    }

    #[test]
    fn f32_evaluation_matches_f64() {
        let b32 = beta_m(0.1f32, std::f32::consts::FRAC_PI_2, 2.0).unwrap();
        assert!((b32 as f64 - PI / 800.0).abs() < 1e-8);
        let m32 = mode_failure_bound(3, 0.01f32, 1000);
        assert!(((m32 as f64) - 1.2951e-4).abs() / 1.2951e-4 < 1e-3);
    }

    #[test]
    fn combined_examples() {
        assert!((combined_bound(0.3, 0.4) - 0.7f64).abs() < 1e-15);
        assert_eq!(combined_bound(0.8, 0.8), 1.0f64);
        assert_eq!(combined_bound(0.0, 0.25), 0.25f64);
    }
}
