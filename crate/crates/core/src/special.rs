//! Special functions not covered by `statrs`.

use std::f64::consts::PI;

pub use statrs::function::erf::erfc;
pub use statrs::function::gamma::{gamma, ln_gamma};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Scaled complementary error function `exp(x²)·erfc(x)`.
///
/// Stays finite for arbitrarily large positive `x`, where the naive product
/// is `∞·0`. Small arguments use the direct product; from `x = 2` on, the
/// Laplace continued fraction `erfc(x) = e^{-x²}/√π · 1/(x + ½/(x + 1/(x + …)))`
/// is evaluated with the modified Lentz algorithm.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x < 2.0 {
        return (x * x).exp() * erfc(x);
    }
    if x > 1e8 {
        // Continued fraction has converged to 1/x far below f64 resolution.
        let inv2 = 1.0 / (x * x);
        return FRAC_1_SQRT_PI / x * (1.0 - 0.5 * inv2);
    }
    FRAC_1_SQRT_PI / laplace_continued_fraction(x)
}

fn laplace_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..2000 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f
}

/// Nearest-point contact moment of a homogeneous PPP: `Γ(β/2+1)/(πλ)^{β/2}`.
pub(crate) fn ppp_moment_unchecked(exponent: f64, intensity: f64) -> f64 {
    if exponent == 0.0 {
        return 1.0;
    }
    gamma(0.5 * exponent + 1.0) / (PI * intensity).powf(0.5 * exponent)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}
