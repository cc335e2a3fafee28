//! Quadrature and special functions for every integral in the model:
//! `I_inf = int (1 - e^{-u})`, `I_t = int (1 - e^{-tU})`, and the
//! axisymmetric reduction they share.
//!
//! Every integrand in this crate depends on the spatial point only through
//! `(|x_perp|, |x_3|)` and is even in `x_3`, so volume integrals over R^3
//! reduce to weighted quarter-plane integrals with weight `4 pi r`.

pub mod quad;
pub mod special;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::DecayParams;
use crate::potential::{u_limit_rz, ImpurityPotential};

pub use special::{bessel_i0e, gamma, log_gamma};

/// Outcome of an adaptive quadrature.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Default evaluation budget for the 2-d adaptive engine.
const MAX_EVALS_2D: usize = 60_000_000;

/// `4 pi * int_0^inf int_0^inf r f(r, z) dr dz` on the compactified square.
///
/// Both half-lines are mapped through `r = s/(1-s)`; algebraically decaying
/// integrands stay adaptive-friendly under this rational stretching. The
/// convergence target is `max(tol, tol * |value|)`.
pub fn integrate_axisymmetric<F: Fn(f64, f64) -> f64>(f: F, tol: f64) -> Result<QuadResult> {
    let g = |s: f64, w: f64| {
        let omr = 1.0 - s;
        let omz = 1.0 - w;
        let r = s / omr;
        let z = w / omz;
        let v = f(r, z);
        if v == 0.0 {
            return 0.0;
        }
        4.0 * std::f64::consts::PI * r * v / (omr * omr * omz * omz)
    };
    let res = quad::integrate2d(g, [0.0, 1.0, 0.0, 1.0], tol, tol, MAX_EVALS_2D)?;
    if !res.converged {
        return Err(Error::Convergence(format!(
            "axisymmetric quadrature exhausted its budget (error estimate {:.3e}, tol {:.1e})",
            res.abs_error_estimate, tol
        )));
    }
    Ok(res)
}

/// `int_{R^3} (1 - e^{-u(x)}) dx` for the scaling-limit profile `u`.
///
/// Returned without the impurity-concentration factor; multiply by `rho`
/// to compare against the closed-form Laplace constant.
pub fn i_infinity(params: &DecayParams, tol: f64) -> Result<QuadResult> {
    let derived = crate::params::derive(params)?;
    debug_assert!(derived.eta > 3.0);
    let p = params.clone();
    integrate_axisymmetric(
        move |r, z| {
            let u = u_limit_rz(r, z, &p);
            -(-u).exp_m1()
        },
        tol,
    )
}

/// `int_{R^3} (1 - e^{-t U(x)}) dx` for an evaluable impurity profile.
pub fn i_t(u: &ImpurityPotential, t: f64, tol_rel: f64) -> Result<QuadResult> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("i_t requires t > 0, got {t}")));
    }
    integrate_axisymmetric(move |r, z| -(-t * u.eval_rz(r, z)).exp_m1(), tol_rel)
}

/// Same integral restricted to the centred ball of the given radius.
///
/// Computed on the polar rectangle `[0, radius] x [0, pi/2]`; this is the
/// quadrature reference for ball-truncated Monte Carlo runs.
pub fn i_t_ball(u: &ImpurityPotential, t: f64, radius: f64, tol_rel: f64) -> Result<QuadResult> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("i_t_ball requires t >= 0, got {t}")));
    }
    if !(radius > 0.0) {
        return Err(Error::Domain(format!(
            "i_t_ball requires radius > 0, got {radius}"
        )));
    }
    let res = quad::integrate2d(
        |rho, theta| {
            let (sin_t, cos_t) = theta.sin_cos();
            let r = rho * sin_t;
            let z = rho * cos_t;
            let v = -(-t * u.eval_rz(r, z)).exp_m1();
            4.0 * std::f64::consts::PI * rho * rho * sin_t * v
        },
        [0.0, radius, 0.0, std::f64::consts::FRAC_PI_2],
        1e-300,
        tol_rel,
        MAX_EVALS_2D,
    )?;
    if !res.converged {
        return Err(Error::Convergence(format!(
            "ball-restricted quadrature did not converge (error estimate {:.3e})",
            res.abs_error_estimate
        )));
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::DecayParams;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_normalization() {
        // f = e^{-(r^2+z^2)/2} -> (2 pi)^{3/2}
        let r = integrate_axisymmetric(|x, z| (-0.5 * (x * x + z * z)).exp(), 1e-10).unwrap();
        assert_relative_eq!(
            r.value,
            (2.0 * std::f64::consts::PI).powf(1.5),
            max_relative = 1e-9
        );
    }

    #[test]
    fn unit_quarter_disk_gives_ball_volume() {
        // indicator of the unit quarter-disk through the 4 pi r weight is the
        // volume of the unit ball in R^3; the jump discontinuity caps how
        // tightly the panels can converge
        let r = integrate_axisymmetric(
            |x, z| if x * x + z * z <= 1.0 { 1.0 } else { 0.0 },
            2e-4,
        )
        .unwrap();
        assert_relative_eq!(r.value, 4.0 * std::f64::consts::PI / 3.0, max_relative = 1e-3);
    }

    #[test]
    fn i_infinity_isotropic_closed_form() {
        // alpha = 4, g = 1: (4 pi / 3) Gamma(1/4) = 15.186919269936416
        let p = DecayParams::new(1.0, 4.0, 4.0, 4.0, 1.0, 1.0).unwrap();
        let r = i_infinity(&p, 1e-7).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, 15.186919269936416, max_relative = 1e-7);
    }

    #[test]
    fn i_t_linearizes_for_small_t() {
        // I_t ~ t * int U as t -> 0 (within 0.1% at t = 1e-6)
        let p = DecayParams::new(1.0, 4.0, 4.0, 4.0, 1.0, 1.0).unwrap();
        let u = ImpurityPotential::canonical(p);
        let t = 1e-6;
        let it = i_t(&u, t, 1e-9).unwrap();
        let int_u = integrate_axisymmetric(|r, z| u.eval_rz(r, z), 1e-10).unwrap();
        assert_relative_eq!(it.value, t * int_u.value, max_relative = 1e-3);
    }

    #[test]
    fn i_t_monotone_in_t() {
        let p = DecayParams::new(1.0, 4.0, 4.0, 4.0, 1.0, 1.0).unwrap();
        let u = ImpurityPotential::canonical(p);
        let a = i_t(&u, 1.0, 1e-8).unwrap().value;
        let b = i_t(&u, 2.0, 1e-8).unwrap().value;
        let c = i_t(&u, 8.0, 1e-8).unwrap().value;
        assert!(a < b && b < c);
    }

    #[test]
    fn i_t_ball_approaches_full_integral() {
        let p = DecayParams::new(1.0, 4.0, 4.0, 4.0, 1.0, 1.0).unwrap();
        let u = ImpurityPotential::canonical(p);
        let full = i_t(&u, 10.0, 1e-9).unwrap().value;
        let b50 = i_t_ball(&u, 10.0, 50.0, 1e-9).unwrap().value;
        let b200 = i_t_ball(&u, 10.0, 200.0, 1e-9).unwrap().value;
        assert!(b50 < b200 && b200 < full);
        // isotropic alpha=4 tail of (1 - e^{-tU}) ~ 4 pi t g / R
        assert_relative_eq!(full - b50, 4.0 * std::f64::consts::PI * 10.0 / 50.0, max_relative = 0.05);
    }
}
