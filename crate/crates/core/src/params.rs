//! Parameter algebra: derived exponents, validity region checks, and all
//! closed-form constants of the decay model.
//!
//! Two distinct energy-domain constants are exposed on purpose. The printed
//! constant raises the Laplace-domain bracket to the power `(eta-3)/eta`,
//! while inverting the Laplace asymptotics through the saddle-point map
//! yields the reciprocal exponent `eta/(eta-3)` on the same bracket. Both
//! are computed here; the forward oracle in [`crate::asymptotics`]
//! adjudicates numerically which one reproduces the Laplace constant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::special::log_gamma;

/// Below this anisotropy exponent the Gamma-ratio in the closed forms is
/// evaluated through its analytic small-beta limit; the direct ratio loses
/// digits to `1/beta` cancellations there while the limit is exact.
pub const BETA_LIMIT_BRANCH: f64 = 1e-3;

/// The decay model `(g, alpha, beta, gamma, rho, B)` plus the origin
/// regularizer of the canonical potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayParams {
    /// Potential amplitude at infinity.
    pub g: f64,
    /// Transverse decay exponent (> 2).
    pub alpha: f64,
    /// Anisotropy/pseudo-norm exponent (>= 0; 0 selects the max-combination).
    pub beta: f64,
    /// Longitudinal decay exponent (> 0).
    pub gamma: f64,
    /// Impurity concentration per unit volume.
    pub rho: f64,
    /// Magnetic field strength (>= 0).
    #[serde(rename = "B", alias = "b")]
    pub b: f64,
    /// Origin regularizer of the canonical potential.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

fn default_epsilon() -> f64 {
    1.0
}

impl DecayParams {
    /// Builds the model with the default regularizer `epsilon = 1`.
    pub fn new(g: f64, alpha: f64, beta: f64, gamma: f64, rho: f64, b: f64) -> Result<Self> {
        Self::with_epsilon(g, alpha, beta, gamma, rho, b, 1.0)
    }

    pub fn with_epsilon(
        g: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
        rho: f64,
        b: f64,
        epsilon: f64,
    ) -> Result<Self> {
        let p = Self {
            g,
            alpha,
            beta,
            gamma,
            rho,
            b,
            epsilon,
        };
        p.check_fields()?;
        Ok(p)
    }

    /// Isotropic decay `alpha = beta = gamma` with unit field.
    pub fn isotropic(alpha: f64, g: f64, rho: f64) -> Result<Self> {
        Self::new(g, alpha, alpha, alpha, rho, 1.0)
    }

    /// Field-level invariants; integrability and the theorem window are
    /// reported separately by [`validate`].
    pub fn check_fields(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Domain(msg));
        if !(self.g > 0.0) {
            return fail(format!("g must be positive, got {}", self.g));
        }
        if !(self.alpha > 2.0) {
            return fail(format!("alpha must exceed 2, got {}", self.alpha));
        }
        if !(self.beta >= 0.0) {
            return fail(format!("beta must be nonnegative, got {}", self.beta));
        }
        if !(self.gamma > 0.0) {
            return fail(format!("gamma must be positive, got {}", self.gamma));
        }
        // rho = 0 is admitted so the free Monte Carlo paths stay reachable;
        // the asymptotic constants themselves insist on rho > 0
        if !(self.rho >= 0.0) {
            return fail(format!("rho must be nonnegative, got {}", self.rho));
        }
        if !(self.b >= 0.0) {
            return fail(format!("B must be nonnegative, got {}", self.b));
        }
        if !(self.epsilon > 0.0) {
            return fail(format!("epsilon must be positive, got {}", self.epsilon));
        }
        Ok(())
    }
}

/// Exponents derived from the decay model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    /// `eta = 3 alpha gamma / (2 gamma + alpha)`, always > 3 on success.
    pub eta: f64,
    /// Lifshits exponent `mu = 3 / (eta - 3)`.
    pub mu: f64,
    /// Laplace exponent `nu = 3 / eta`, in (0, 1).
    pub nu: f64,
    /// Default variational scaling, midpoint of the admissible window.
    pub sigma: f64,
}

/// Computes `eta`, `mu`, `nu` and the default `sigma`.
pub fn derive(p: &DecayParams) -> Result<DerivedParams> {
    p.check_fields()?;
    let eta = 3.0 * p.alpha * p.gamma / (2.0 * p.gamma + p.alpha);
    if !(eta > 3.0) {
        return Err(Error::Domain(format!(
            "eta = {eta} <= 3: gamma must exceed alpha/(alpha-2) = {}",
            p.alpha / (p.alpha - 2.0)
        )));
    }
    Ok(DerivedParams {
        eta,
        mu: 3.0 / (eta - 3.0),
        nu: 3.0 / eta,
        sigma: (1.0 - 2.0 / p.alpha + 1.0 / p.gamma) / 4.0,
    })
}

/// Validity report for a raw parameter set; failures are carried as
/// messages rather than errors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidityReport {
    /// `alpha > 2` and `gamma > alpha/(alpha-2)`: the potential is
    /// integrable at infinity.
    pub integrable: bool,
    /// The full window `alpha/(alpha-2) < gamma < 3 alpha/(alpha-2)`.
    pub theorem_applies: bool,
    /// Whether the asymptotics survive switching the field off, from the
    /// piecewise region `gamma < 3a/(a-2)` for `a <= 5`, `gamma < a/(a-4)`
    /// beyond.
    pub zero_field_ok: bool,
    pub messages: Vec<String>,
}

/// Checks integrability, the theorem window and the zero-field region.
///
/// All boundaries are strict; boundary values are rejected.
pub fn validate(p: &DecayParams) -> ValidityReport {
    let mut messages = Vec::new();
    let lower = p.alpha / (p.alpha - 2.0);
    let upper = 3.0 * p.alpha / (p.alpha - 2.0);

    let integrable = p.alpha > 2.0 && p.gamma > lower;
    if !integrable {
        messages.push(format!(
            "not integrable at infinity: need alpha > 2 and gamma > alpha/(alpha-2) = {lower:.6}, got alpha = {}, gamma = {}",
            p.alpha, p.gamma
        ));
    }

    let theorem_applies = integrable && p.gamma < upper;
    if integrable && !theorem_applies {
        messages.push(format!(
            "outside the theorem window: need gamma < 3 alpha/(alpha-2) = {upper:.6}, got gamma = {}",
            p.gamma
        ));
    }

    let zero_field_upper = if p.alpha <= 5.0 {
        upper
    } else {
        p.alpha / (p.alpha - 4.0)
    };
    let zero_field_ok = p.alpha > 2.0 && p.gamma > lower && p.gamma < zero_field_upper;
    if !zero_field_ok {
        messages.push(format!(
            "zero-field asymptotics not guaranteed: need {lower:.6} < gamma < {zero_field_upper:.6}"
        ));
    }

    ValidityReport {
        integrable,
        theorem_applies,
        zero_field_ok,
        messages,
    }
}

/// The Laplace-domain constant
/// `a = 2 pi rho g^{3/eta} (beta eta / 3 alpha gamma)
///      Gamma(beta/alpha) Gamma(beta/2gamma) Gamma((eta-3)/eta) / Gamma(3beta/2eta)`,
/// equal to `rho * int (1 - e^{-u})`.
///
/// For `beta` below [`BETA_LIMIT_BRANCH`] the analytic limit
/// `a = 2 pi rho g^{3/eta} Gamma(1 - 3/eta)` is returned instead.
pub fn laplace_constant_closed(p: &DecayParams) -> Result<f64> {
    let d = derive(p)?;
    if !(p.rho > 0.0) {
        return Err(Error::Domain("the Laplace constant requires rho > 0".into()));
    }
    let eta = d.eta;
    let g_pow = p.g.powf(3.0 / eta);
    if p.beta < BETA_LIMIT_BRANCH {
        let gam = log_gamma(1.0 - 3.0 / eta)?.exp();
        return Ok(2.0 * std::f64::consts::PI * p.rho * g_pow * gam);
    }
    let log_ratio = log_gamma(p.beta / p.alpha)? + log_gamma(p.beta / (2.0 * p.gamma))?
        - log_gamma(3.0 * p.beta / (2.0 * eta))?
        + log_gamma((eta - 3.0) / eta)?;
    let pref = 2.0 * std::f64::consts::PI * p.rho * g_pow * p.beta * eta
        / (3.0 * p.alpha * p.gamma);
    Ok(pref * log_ratio.exp())
}

/// The Lifshits constant exactly as printed in the source model:
/// `C = ((eta-3)/3) g^{3/(eta-3)} [bracket]^{(eta-3)/eta}` with
/// `bracket = 2 pi rho (beta/alpha gamma) Gamma(beta/alpha)
///            Gamma(beta/2gamma) / Gamma(3beta/2eta) * Gamma((eta-3)/eta)`.
///
/// See the module docs: this exponent disagrees with the saddle-point
/// inversion computed by [`lifshits_constant_legendre`].
pub fn lifshits_constant_paper(p: &DecayParams) -> Result<f64> {
    let d = derive(p)?;
    if !(p.rho > 0.0) {
        return Err(Error::Domain("the Lifshits constant requires rho > 0".into()));
    }
    let eta = d.eta;
    let exponent = (eta - 3.0) / eta;
    let g_pow = p.g.powf(3.0 / (eta - 3.0));
    if p.beta < BETA_LIMIT_BRANCH {
        let bracket_log = (6.0 * std::f64::consts::PI * p.rho / eta).ln()
            + log_gamma(1.0 - 3.0 / eta)?;
        return Ok((eta / 3.0 - 1.0) * g_pow * (exponent * bracket_log).exp());
    }
    let bracket_log = (2.0 * std::f64::consts::PI * p.rho * p.beta / (p.alpha * p.gamma)).ln()
        + log_gamma(p.beta / p.alpha)?
        + log_gamma(p.beta / (2.0 * p.gamma))?
        - log_gamma(3.0 * p.beta / (2.0 * eta))?
        + log_gamma((eta - 3.0) / eta)?;
    Ok((eta - 3.0) / 3.0 * g_pow * (exponent * bracket_log).exp())
}

/// Saddle-point (Legendre) inversion of the Laplace asymptotics: the `C`
/// for which `min_{E>0} (tE + C E^{-mu}) = a t^{mu/(mu+1)}`, in closed form
/// `C = a^{mu+1} mu^mu / (mu+1)^{mu+1}`.
pub fn lifshits_constant_legendre(a: f64, mu: f64) -> Result<f64> {
    if !(a > 0.0) || !(mu > 0.0) {
        return Err(Error::Domain(format!(
            "legendre inversion requires a > 0 and mu > 0, got a = {a}, mu = {mu}"
        )));
    }
    let log_c = (mu + 1.0) * a.ln() + mu * mu.ln() - (mu + 1.0) * (mu + 1.0).ln();
    Ok(log_c.exp())
}

/// Forward saddle map: `min_{E>0} (tE + C E^{-mu}) / t^{mu/(mu+1)}`,
/// the inverse of [`lifshits_constant_legendre`].
pub fn legendre_forward(c: f64, mu: f64) -> Result<f64> {
    if !(c > 0.0) || !(mu > 0.0) {
        return Err(Error::Domain(format!(
            "forward saddle map requires C > 0 and mu > 0, got C = {c}, mu = {mu}"
        )));
    }
    Ok((mu + 1.0) * mu.powf(-mu / (mu + 1.0)) * c.powf(1.0 / (mu + 1.0)))
}

/// Printed isotropic constant
/// `((alpha-3)/3) g^{3/(alpha-3)} [(4 pi rho / alpha) Gamma((alpha-3)/alpha)]^{(alpha-3)/alpha}`
/// for `3 < alpha < 5`.
pub fn isotropic_constant(alpha: f64, g: f64, rho: f64) -> Result<f64> {
    if !(alpha > 3.0 && alpha < 5.0) {
        return Err(Error::Domain(format!(
            "isotropic constant requires 3 < alpha < 5, got {alpha}"
        )));
    }
    if !(g > 0.0 && rho > 0.0) {
        return Err(Error::Domain(format!(
            "isotropic constant requires g > 0 and rho > 0, got g = {g}, rho = {rho}"
        )));
    }
    let exponent = (alpha - 3.0) / alpha;
    let bracket_log = (4.0 * std::f64::consts::PI * rho / alpha).ln()
        + log_gamma((alpha - 3.0) / alpha)?;
    Ok((alpha - 3.0) / 3.0 * g.powf(3.0 / (alpha - 3.0)) * (exponent * bracket_log).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn iso4() -> DecayParams {
        DecayParams::new(1.0, 4.0, 4.0, 4.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn derive_examples() {
        // alpha = gamma = 4 collapses to eta = alpha
        let d = derive(&iso4()).unwrap();
        assert_relative_eq!(d.eta, 4.0);
        assert_relative_eq!(d.mu, 3.0);
        assert_relative_eq!(d.nu, 0.75);

        // alpha = 6, gamma = 3: eta = 54/12 = 4.5, mu = 2
        let p = DecayParams::new(1.0, 6.0, 1.0, 3.0, 1.0, 1.0).unwrap();
        let d = derive(&p).unwrap();
        assert_relative_eq!(d.eta, 4.5);
        assert_relative_eq!(d.mu, 2.0);
    }

    #[test]
    fn derive_rejects_eta_below_three() {
        let p = DecayParams::new(1.0, 4.0, 4.0, 1.5, 1.0, 1.0).unwrap();
        assert!(derive(&p).is_err());
        // boundary gamma = alpha/(alpha-2) = 2 is rejected (strict)
        let p = DecayParams::new(1.0, 4.0, 4.0, 2.0, 1.0, 1.0).unwrap();
        assert!(derive(&p).is_err());
    }

    #[test]
    fn mu_nu_relation() {
        for (alpha, gamma) in [(4.0, 4.0), (3.5, 5.0), (6.0, 2.0), (4.5, 4.0)] {
            let p = DecayParams::new(1.0, alpha, 1.0, gamma, 1.0, 1.0).unwrap();
            if let Ok(d) = derive(&p) {
                assert_relative_eq!(d.nu, d.mu / (d.mu + 1.0), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn validate_examples() {
        // gamma = 1.5 < alpha/(alpha-2) = 2: not integrable
        let p = DecayParams::new(1.0, 4.0, 4.0, 1.5, 1.0, 1.0).unwrap();
        let r = validate(&p);
        assert!(!r.integrable && !r.theorem_applies);
        assert!(!r.messages.is_empty());

        // 2 < 4 < 6
        let r = validate(&iso4());
        assert!(r.integrable && r.theorem_applies && r.zero_field_ok);
        assert!(r.messages.is_empty());

        // alpha = 6 > 5: zero-field needs gamma < alpha/(alpha-4) = 3
        let p = DecayParams::new(1.0, 6.0, 1.0, 9.0, 1.0, 0.0).unwrap();
        let r = validate(&p);
        assert!(r.integrable);
        assert!(!r.zero_field_ok);
    }

    #[test]
    fn validate_boundaries_are_strict() {
        // gamma exactly at 3 alpha/(alpha-2) = 6
        let p = DecayParams::new(1.0, 4.0, 4.0, 6.0, 1.0, 1.0).unwrap();
        let r = validate(&p);
        assert!(r.integrable && !r.theorem_applies);
    }

    #[test]
    fn field_invariants_rejected() {
        assert!(DecayParams::new(0.0, 4.0, 4.0, 4.0, 1.0, 1.0).is_err());
        assert!(DecayParams::new(1.0, 2.0, 4.0, 4.0, 1.0, 1.0).is_err());
        assert!(DecayParams::new(1.0, 4.0, -1.0, 4.0, 1.0, 1.0).is_err());
        assert!(DecayParams::new(1.0, 4.0, 4.0, 4.0, -1.0, 1.0).is_err());
        assert!(DecayParams::new(1.0, 4.0, 4.0, 4.0, 1.0, -0.5).is_err());
        assert!(DecayParams::with_epsilon(1.0, 4.0, 4.0, 4.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn laplace_constant_isotropic() {
        // (4 pi / 3) Gamma(1/4) = 15.186919269936416
        let a = laplace_constant_closed(&iso4()).unwrap();
        assert_relative_eq!(a, 15.186919269936416, max_relative = 1e-13);
    }

    #[test]
    fn laplace_constant_g_scaling() {
        let base = laplace_constant_closed(&iso4()).unwrap();
        for g in [0.3, 2.0, 17.5] {
            let p = DecayParams::new(g, 4.0, 4.0, 4.0, 1.0, 1.0).unwrap();
            let a = laplace_constant_closed(&p).unwrap();
            assert_relative_eq!(a, g.powf(0.75) * base, max_relative = 1e-14);
        }
    }

    #[test]
    fn laplace_constant_beta_branch_continuity() {
        for (alpha, gamma) in [(4.0, 4.0), (4.0, 5.0), (4.5, 3.0)] {
            let limit = laplace_constant_closed(
                &DecayParams::new(1.0, alpha, 0.0, gamma, 1.0, 1.0).unwrap(),
            )
            .unwrap();
            for beta in [1e-2, 1e-3] {
                let a = laplace_constant_closed(
                    &DecayParams::new(1.0, alpha, beta, gamma, 1.0, 1.0).unwrap(),
                )
                .unwrap();
                assert_relative_eq!(a, limit, max_relative = 1e-3);
            }
        }
    }

    #[test]
    fn laplace_constant_isotropic_collapse() {
        // general form must reduce to (4 pi rho / 3) g^{3/alpha} Gamma(1 - 3/alpha)
        for alpha in [3.5, 4.0, 4.5] {
            let p = DecayParams::new(1.3, alpha, alpha, alpha, 0.7, 1.0).unwrap();
            let a = laplace_constant_closed(&p).unwrap();
            let reduced = 4.0 * std::f64::consts::PI * 0.7 / 3.0
                * 1.3_f64.powf(3.0 / alpha)
                * log_gamma(1.0 - 3.0 / alpha).unwrap().exp();
            assert_relative_eq!(a, reduced, max_relative = 1e-12);
        }
    }

    #[test]
    fn paper_constant_isotropic_value() {
        // (1/3) [pi Gamma(1/4)]^{1/4} = 0.6123665817339358
        let c = lifshits_constant_paper(&iso4()).unwrap();
        assert_relative_eq!(c, 0.6123665817339358, max_relative = 1e-13);
        // and it agrees with the printed isotropic corollary form
        let iso = isotropic_constant(4.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(c, iso, max_relative = 1e-13);
    }

    #[test]
    fn paper_constant_beta_limit_branch() {
        let p0 = DecayParams::new(1.0, 4.0, 0.0, 4.0, 1.0, 1.0).unwrap();
        let limit = lifshits_constant_paper(&p0).unwrap();
        let p = DecayParams::new(1.0, 4.0, 1e-2, 4.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(lifshits_constant_paper(&p).unwrap(), limit, max_relative = 1e-3);
    }

    #[test]
    fn legendre_examples() {
        // min_E (E + E^{-3}) = 4 * 3^{-3/4}; inverting it recovers C = 1
        let a = 4.0 * 3.0_f64.powf(-0.75);
        assert_relative_eq!(lifshits_constant_legendre(a, 3.0).unwrap(), 1.0, max_relative = 1e-14);
        // the isotropic Laplace constant maps to ~5.61e3
        let c = lifshits_constant_legendre(15.186919269936416, 3.0).unwrap();
        assert_relative_eq!(c, 5610.512524988886, max_relative = 1e-12);
        // forward round trip
        assert_relative_eq!(
            legendre_forward(c, 3.0).unwrap(),
            15.186919269936416,
            max_relative = 1e-13
        );
        assert!(lifshits_constant_legendre(-1.0, 3.0).is_err());
        assert!(lifshits_constant_legendre(1.0, 0.0).is_err());
    }

    #[test]
    fn legendre_homogeneity() {
        let (a, mu) = (2.37, 1.8);
        let c1 = lifshits_constant_legendre(a, mu).unwrap();
        let c2 = lifshits_constant_legendre(3.0 * a, mu).unwrap();
        assert_relative_eq!(c2, 3.0_f64.powf(mu + 1.0) * c1, max_relative = 1e-12);
    }

    #[test]
    fn isotropic_constant_domain_and_limit() {
        assert!(isotropic_constant(3.0, 1.0, 1.0).is_err());
        assert!(isotropic_constant(5.0, 1.0, 1.0).is_err());
        // prefactor (alpha-3)/3 drives the value to zero at the lower boundary
        let near = isotropic_constant(3.0 + 1e-6, 1.0, 1.0).unwrap();
        assert!(near < 1e-5, "value near alpha = 3 was {near}");
    }
}
