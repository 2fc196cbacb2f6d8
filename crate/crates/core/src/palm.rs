//! Distance distributions of the layered point processes.
//!
//! Poisson and mixed-Poisson layers have closed-form contact moments. The
//! Thomas-clustered base-station layer needs its void probability, its
//! J-function and the moments of the distances built from them; all of those
//! reduce to one-dimensional radial integrals whose inner kernel is the
//! probability mass a displaced Gaussian puts on a disc.

use std::cell::RefCell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma_lr;

use crate::error::{ensure_finite_nonneg, ensure_positive, ensure_probability, Error, Result};
use crate::quadrature::{integrate, QuadratureSettings};
use crate::special::{ln_gamma, ppp_moment_unchecked};

/// Thomas cluster process: parent intensity, mean offspring per parent, and
/// per-axis standard deviation of the offspring displacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterParams {
    pub lambda1c: f64,
    pub lambda1m: f64,
    pub sigma: f64,
}

impl ClusterParams {
    pub fn new(lambda1c: f64, lambda1m: f64, sigma: f64) -> Result<Self> {
        let params = Self {
            lambda1c,
            lambda1m,
            sigma,
        };
        params.validate()?;
        Ok(params)
    }

    /// Splits a total intensity `λ1 = λ1c(1 + λ1m)` into parents and offspring.
    pub fn from_total(lambda1: f64, lambda1m: f64, sigma: f64) -> Result<Self> {
        ensure_finite_nonneg("lambda1m", lambda1m)?;
        Self::new(lambda1 / (1.0 + lambda1m), lambda1m, sigma)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("lambda1c", self.lambda1c)?;
        ensure_finite_nonneg("lambda1m", self.lambda1m)?;
        ensure_positive("sigma", self.sigma)?;
        Ok(())
    }

    /// Total intensity of parents and offspring.
    pub fn intensity(&self) -> f64 {
        self.lambda1c * (1.0 + self.lambda1m)
    }

    fn parent_weight(&self) -> f64 {
        1.0 / (1.0 + self.lambda1m)
    }
}

/// `E[R^β]` for the distance from a fixed location to the nearest point of a PPP.
pub fn ppp_contact_moment(beta: f64, lambda: f64) -> Result<f64> {
    ensure_finite_nonneg("beta", beta)?;
    ensure_positive("lambda", lambda)?;
    Ok(ppp_moment_unchecked(beta, lambda))
}

/// `base · E[R^β]` for the two-point mixed Poisson layer, weighting the
/// microwave intensity by `p` and the fibre intensity by `1 − p`.
pub fn mixed_contact_moment(base: f64, beta: f64, p: f64, lambda_mw: f64, lambda_of: f64) -> Result<f64> {
    ensure_probability("p", p)?;
    let mw = ppp_contact_moment(beta, lambda_mw)?;
    let of = ppp_contact_moment(beta, lambda_of)?;
    Ok(base * (p * mw + (1.0 - p) * of))
}

/// Probability that a bivariate Gaussian with per-axis std `sigma`, centred
/// `center_dist` away from the origin, falls inside the origin-centred disc
/// of radius `radius`.
pub fn gaussian_disc_mass(center_dist: f64, sigma: f64, radius: f64) -> Result<f64> {
    ensure_finite_nonneg("center_dist", center_dist)?;
    ensure_positive("sigma", sigma)?;
    ensure_finite_nonneg("radius", radius)?;
    Ok(disc_mass(center_dist, sigma, radius))
}

/// Noncentral chi-square CDF with two degrees of freedom, written as the
/// Poisson mixture `Σ_j Pois(j; μ) · P(j + 1, ν)` with `μ = s²/2σ²`,
/// `ν = R²/2σ²` and `P` the regularized lower incomplete gamma function.
/// Only the Poisson(μ) terms within a dozen standard deviations of the mean
/// contribute; `P(j + 1, ν)` is stepped downward by the Poisson(ν) pmf.
fn disc_mass(s: f64, sigma: f64, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let nu = 0.5 * (r / sigma).powi(2);
    let mu = 0.5 * (s / sigma).powi(2);
    if mu == 0.0 {
        return -(-nu).exp_m1();
    }
    let spread = 12.0 * mu.sqrt() + 12.0;
    let j_lo = (mu - spread).max(0.0).floor();
    let mut j_hi = (mu + spread).ceil();
    // P(j + 1, ν) is negligible once j sits far above ν.
    j_hi = j_hi.min((nu + 12.0 * nu.sqrt() + 40.0).ceil());
    if j_hi < j_lo {
        return 0.0;
    }
    let (ln_mu, ln_nu) = (mu.ln(), nu.ln());
    let mut ln_w = -mu + j_lo * ln_mu - ln_gamma(j_lo + 1.0);
    let mut lower = gamma_lr(j_lo + 1.0, nu);
    let mut ln_step = -nu + (j_lo + 1.0) * ln_nu - ln_gamma(j_lo + 2.0);
    let mut acc = 0.0;
    let mut j = j_lo;
    while j <= j_hi {
        acc += ln_w.exp() * lower;
        ln_w += ln_mu - (j + 1.0).ln();
        lower = (lower - ln_step.exp()).max(0.0);
        ln_step += ln_nu - (j + 2.0).ln();
        j += 1.0;
    }
    acc.min(1.0)
}

/// Runs `body` with an integrand that may fail; the first inner failure is
/// reported instead of the outer quadrature's own error.
fn nested<T>(body: impl FnOnce(&dyn Fn(Result<f64>) -> f64) -> Result<T>) -> Result<T> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let unwrap = |value: Result<f64>| match value {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let outcome = body(&unwrap);
    match failure.into_inner() {
        Some(e) => Err(e),
        None => outcome,
    }
}

fn check_radius(r: f64) -> Result<()> {
    ensure_finite_nonneg("r", r)
}

/// Probability that the disc `b(o, r)` holds no base station (`1 − F(r)`).
pub fn void_probability(r: f64, params: &ClusterParams, quad: &QuadratureSettings) -> Result<f64> {
    check_radius(r)?;
    params.validate()?;
    quad.validate()?;
    void_unchecked(r, params, quad)
}

fn void_unchecked(r: f64, params: &ClusterParams, quad: &QuadratureSettings) -> Result<f64> {
    if r == 0.0 {
        return Ok(1.0);
    }
    let disc = PI * r * r;
    if params.lambda1m == 0.0 {
        return Ok((-params.lambda1c * disc).exp());
    }
    // Parents outside the disc still void it only if none of their offspring land inside.
    let (m, sigma) = (params.lambda1m, params.sigma);
    let upper = r + quad.max_radius_factor * sigma;
    let ring = integrate(|s| s * -(-m * disc_mass(s, sigma, r)).exp_m1(), r, upper, quad)?;
    Ok((-params.lambda1c * (disc + 2.0 * PI * ring.value)).exp())
}

/// `J(r) = (1 − G(r)) / (1 − F(r))` for the combined parent and offspring process.
///
/// A typical parent's own offspring must all avoid the disc. A typical
/// offspring needs its parent outside the disc and its Poisson(λ1m) siblings
/// too; the parent sits at a Rayleigh(σ) distance.
pub fn j_function(r: f64, params: &ClusterParams, quad: &QuadratureSettings) -> Result<f64> {
    check_radius(r)?;
    params.validate()?;
    quad.validate()?;
    j_unchecked(r, params, quad)
}

fn j_unchecked(r: f64, params: &ClusterParams, quad: &QuadratureSettings) -> Result<f64> {
    if r == 0.0 || params.lambda1m == 0.0 {
        return Ok(1.0);
    }
    let (m, sigma) = (params.lambda1m, params.sigma);
    let w_parent = params.parent_weight();
    let own_children = (-m * disc_mass(0.0, sigma, r)).exp();
    let upper = r + quad.max_radius_factor * sigma;
    let siblings = integrate(
        |s| rayleigh_pdf(s, sigma) * (-m * disc_mass(s, sigma, r)).exp(),
        r,
        upper,
        quad,
    )?;
    Ok(w_parent * own_children + (1.0 - w_parent) * siblings.value)
}

/// J-function of the parent and offspring processes mixed as if independent:
/// the parent component contributes 1 and the offspring component averages
/// the sibling void probability over all parent displacements.
pub fn j_function_independent_mixture(r: f64, params: &ClusterParams, quad: &QuadratureSettings) -> Result<f64> {
    check_radius(r)?;
    params.validate()?;
    quad.validate()?;
    if r == 0.0 || params.lambda1m == 0.0 {
        return Ok(1.0);
    }
    let (m, sigma) = (params.lambda1m, params.sigma);
    let w_parent = params.parent_weight();
    let upper = quad.max_radius_factor * sigma;
    let offspring = integrate(
        |s| rayleigh_pdf(s, sigma) * (-m * disc_mass(s, sigma, r)).exp(),
        0.0,
        upper,
        quad,
    )?;
    Ok(w_parent + (1.0 - w_parent) * offspring.value)
}

fn rayleigh_pdf(s: f64, sigma: f64) -> f64 {
    let v = sigma * sigma;
    s / v * (-0.5 * s * s / v).exp()
}

/// Distance from a base station to its nearest other base station: `G(r) = 1 − (1 − F(r)) J(r)`.
pub fn nn_distance_cdf(r: f64, params: &ClusterParams, quad: &QuadratureSettings) -> Result<f64> {
    check_radius(r)?;
    params.validate()?;
    quad.validate()?;
    Ok(1.0 - void_unchecked(r, params, quad)? * j_unchecked(r, params, quad)?)
}

/// Distance from a fixed location to the nearest base station: `F(r) = 1 − void(r)`.
pub fn empty_space_cdf(r: f64, params: &ClusterParams, quad: &QuadratureSettings) -> Result<f64> {
    Ok(1.0 - void_probability(r, params, quad)?)
}

/// Which distance distribution a base-station moment is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceLaw {
    /// From a fixed (or independently placed) location: `F`.
    #[default]
    EmptySpace,
    /// From a typical base station to its nearest other one: `G`.
    NearestNeighbour,
}

fn tail_moment(
    exponent: f64,
    params: &ClusterParams,
    quad: &QuadratureSettings,
    law: DistanceLaw,
) -> Result<f64> {
    ensure_finite_nonneg("exponent", exponent)?;
    params.validate()?;
    quad.validate()?;
    if exponent == 0.0 {
        return Ok(1.0);
    }
    let upper = quad.max_radius_factor / params.lambda1c.sqrt();
    nested(|unwrap| {
        let survival = |r: f64| -> f64 {
            let void = unwrap(void_unchecked(r, params, quad));
            match law {
                DistanceLaw::EmptySpace => void,
                DistanceLaw::NearestNeighbour => void * unwrap(j_unchecked(r, params, quad)),
            }
        };
        let integral = integrate(|r| exponent * r.powf(exponent - 1.0) * survival(r), 0.0, upper, quad)?;
        Ok(integral.value)
    })
}

/// `E[R^β]` of the base-station nearest-neighbour distance, by the tail formula
/// `∫ β r^{β−1} (1 − G(r)) dr`.
pub fn cluster_nn_moment(exponent: f64, params: &ClusterParams, quad: &QuadratureSettings) -> Result<f64> {
    tail_moment(exponent, params, quad, DistanceLaw::NearestNeighbour)
}

/// `E[R^β]` of the distance from a fixed location to the nearest base station.
pub fn cluster_contact_moment(exponent: f64, params: &ClusterParams, quad: &QuadratureSettings) -> Result<f64> {
    tail_moment(exponent, params, quad, DistanceLaw::EmptySpace)
}

/// Moment under the chosen distance law.
pub fn cluster_moment(exponent: f64, params: &ClusterParams, quad: &QuadratureSettings, law: DistanceLaw) -> Result<f64> {
    tail_moment(exponent, params, quad, law)
}
