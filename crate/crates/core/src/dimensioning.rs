//! Base-station intensity from the spatially averaged spectral efficiency.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::special::{erfc, erfcx};

/// Spectral-efficiency target at 0 dB link-adaptation offset, bit/s/Hz.
pub const BASE_TARGET: f64 = 1.0847;

/// Extra spectral efficiency needed at each link-adaptation offset (dB, bit/s/Hz).
pub const RATE_OFFSETS: [(f64, f64); 3] = [(0.0, 0.0), (0.4, 0.01322), (0.9, 0.029751)];

pub fn rate_offset(gamma_offset_db: f64) -> Option<f64> {
    RATE_OFFSETS
        .iter()
        .find(|(db, _)| (db - gamma_offset_db).abs() < 1e-9)
        .map(|&(_, dr)| dr)
}

/// Spectral-efficiency target at a link-adaptation offset with a tabulated rate offset.
pub fn target_for_offset(gamma_offset_db: f64) -> Result<f64> {
    rate_offset(gamma_offset_db)
        .map(|dr| BASE_TARGET + dr)
        .ok_or_else(|| Error::parameter("gamma_offset_db", format!("no rate offset tabulated for {gamma_offset_db} dB")))
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadioParams {
    pub p_tx_dbm: f64,
    pub noise_dbm: f64,
    pub n_subcarriers: f64,
    pub bandwidth_hz: f64,
    pub control_overhead: f64,
}

impl Default for RadioParams {
    fn default() -> Self {
        Self::lte_10mhz()
    }
}

impl RadioParams {
    pub const LTE_10MHZ: &'static str = "paper-lte-10mhz";

    /// 10 MHz LTE carrier with 600 sub-carriers.
    pub fn lte_10mhz() -> Self {
        Self {
            p_tx_dbm: 46.0,
            noise_dbm: -146.22,
            n_subcarriers: 600.0,
            bandwidth_hz: 10e6,
            control_overhead: 0.29,
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        (name == Self::LTE_10MHZ).then(Self::lte_10mhz)
    }

    pub fn p_tx_watts(&self) -> f64 {
        dbm_to_watts(self.p_tx_dbm)
    }

    pub fn noise_watts(&self) -> f64 {
        dbm_to_watts(self.noise_dbm)
    }

    pub fn snr(&self) -> f64 {
        self.p_tx_watts() / self.noise_watts()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.p_tx_dbm.is_finite() || !self.noise_dbm.is_finite() {
            return Err(Error::parameter("radio", "powers must be finite"));
        }
        ensure_positive("n_subcarriers", self.n_subcarriers)?;
        ensure_positive("bandwidth_hz", self.bandwidth_hz)?;
        if !(0.0..1.0).contains(&self.control_overhead) {
            return Err(Error::parameter("control_overhead", "must lie in [0, 1)"));
        }
        Ok(())
    }
}

/// Argument `x = (π²λ0/4)·√(P/σ²)` of the scaled error function.
fn erfcx_argument(lambda0: f64, snr: f64) -> f64 {
    PI * PI * lambda0 / 4.0 * snr.sqrt()
}

/// Spatially averaged spectral efficiency of a typical user, bit/s/Hz.
pub fn spatial_avg_rate(lambda0: f64, lambda1: f64, radio: &RadioParams) -> Result<f64> {
    ensure_positive("lambda0", lambda0)?;
    ensure_positive("lambda1", lambda1)?;
    radio.validate()?;
    let snr = radio.snr();
    let x = erfcx_argument(lambda0, snr);
    Ok(PI.powf(2.5) / 2.0 * (lambda0 * lambda1 * snr).sqrt() * erfcx(x))
}

/// The same expression with `erfc(x)·exp(x²)` evaluated directly. Overflows
/// to NaN or infinity once `x` exceeds about 26.
pub fn spatial_avg_rate_naive(lambda0: f64, lambda1: f64, radio: &RadioParams) -> f64 {
    let snr = radio.snr();
    let x = erfcx_argument(lambda0, snr);
    PI.powf(2.5) / 2.0 * (lambda0 * lambda1 * snr).sqrt() * erfc(x) * (x * x).exp()
}

/// Inverts [`spatial_avg_rate`] for `λ1`; the rate is `C·√λ1` with `C` free of `λ1`.
pub fn invert_for_bs_intensity(target: f64, lambda0: f64, radio: &RadioParams) -> Result<f64> {
    ensure_positive("target", target)?;
    let c = spatial_avg_rate(lambda0, 1.0, radio)?;
    Ok((target / c).powi(2))
}

/// Transmit and noise power from the dBm formulas, next to the radio preset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerParams {
    /// `10·log10(n_subcarriers)`.
    pub subcarrier_gain_db: f64,
    /// `18.22 + 10·log10(n_subcarriers) + 30`.
    pub formula_p_tx_dbm: f64,
    /// `−174 + 10·log10(bandwidth)`.
    pub formula_noise_dbm: f64,
    /// Values the rest of the model uses.
    pub preset: RadioParams,
}

pub fn power_params(n_subcarriers: f64, bandwidth_hz: f64) -> Result<PowerParams> {
    ensure_positive("n_subcarriers", n_subcarriers)?;
    ensure_positive("bandwidth_hz", bandwidth_hz)?;
    let gain = 10.0 * n_subcarriers.log10();
    Ok(PowerParams {
        subcarrier_gain_db: gain,
        formula_p_tx_dbm: 18.22 + gain + 30.0,
        formula_noise_dbm: -174.0 + 10.0 * bandwidth_hz.log10(),
        preset: RadioParams {
            n_subcarriers,
            bandwidth_hz,
            ..RadioParams::lte_10mhz()
        },
    })
}

/// Spectral efficiency a per-user demand needs after control overhead:
/// `demand / (bandwidth · (1 − overhead))`. This is not how [`BASE_TARGET`]
/// was obtained; 10 Mbit/s on the 10 MHz preset gives about 1.408.
pub fn spectral_efficiency_from_demand(demand_bps: f64, radio: &RadioParams) -> Result<f64> {
    ensure_positive("demand_bps", demand_bps)?;
    radio.validate()?;
    Ok(demand_bps / (radio.bandwidth_hz * (1.0 - radio.control_overhead)))
}

/// Base-station intensity required at `lambda0` users/km² and a link-adaptation offset.
pub fn bs_intensity_for_offset(lambda0: f64, gamma_offset_db: f64, radio: &RadioParams) -> Result<f64> {
    invert_for_bs_intensity(target_for_offset(gamma_offset_db)?, lambda0, radio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    #[test]
    fn reference_rate_and_inverse() {
        let radio = RadioParams::lte_10mhz();
        assert_abs_diff_eq!(spatial_avg_rate(170.0, 50.03, &radio).unwrap(), 1.0847, epsilon = 1e-3);
        assert_abs_diff_eq!(spatial_avg_rate(170.0, 50.0, &radio).unwrap(), 1.08465, epsilon = 1e-4);
        assert_abs_diff_eq!(invert_for_bs_intensity(1.0847, 170.0, &radio).unwrap(), 50.0, epsilon = 0.5);
        assert_abs_diff_eq!(bs_intensity_for_offset(170.0, 0.4, &radio).unwrap(), 51.2, epsilon = 0.5);
        assert_abs_diff_eq!(bs_intensity_for_offset(170.0, 0.9, &radio).unwrap(), 52.8, epsilon = 0.5);
        assert!(bs_intensity_for_offset(170.0, 0.5, &radio).is_err());
        assert!(invert_for_bs_intensity(0.0, 170.0, &radio).is_err());
    }

    #[test]
    fn naive_form_breaks_at_reference_scale() {
        let radio = RadioParams::lte_10mhz();
        assert!(!spatial_avg_rate_naive(170.0, 50.0, &radio).is_finite());
    }

    #[test]
    fn vanishing_intensity() {
        let radio = RadioParams::lte_10mhz();
        assert!(spatial_avg_rate(170.0, 1e-12, &radio).unwrap() < 1e-6);
        assert!(spatial_avg_rate(170.0, 0.0, &radio).is_err());
    }

    #[test]
    fn power_formulas() {
        let p = power_params(600.0, 10e6).unwrap();
        assert_abs_diff_eq!(p.subcarrier_gain_db, 27.78, epsilon = 5e-3);
        assert_abs_diff_eq!(p.formula_p_tx_dbm, 76.0, epsilon = 5e-3);
        assert_abs_diff_eq!(p.formula_noise_dbm, -104.0, epsilon = 1e-9);
        assert_eq!(p.preset.p_tx_dbm, 46.0);
        assert_eq!(p.preset.noise_dbm, -146.22);
        assert_abs_diff_eq!(dbm_to_watts(46.0), 39.81, epsilon = 5e-3);
        assert_relative_eq!(watts_to_dbm(dbm_to_watts(46.0)), 46.0, max_relative = 1e-14);
    }

    #[test]
    fn demand_helper_is_labelled_separately() {
        let se = spectral_efficiency_from_demand(10e6, &RadioParams::lte_10mhz()).unwrap();
        assert_abs_diff_eq!(se, 1.408, epsilon = 1e-3);
    }

    #[test]
    fn agrees_with_naive_where_finite() {
        // Low powers bring x into the range where erfc·exp does not overflow.
        let mut radio = RadioParams::lte_10mhz();
        for noise_dbm in [46.0, 40.0, 30.0, 20.0, 10.0, 0.0] {
            radio.noise_dbm = noise_dbm;
            for lambda0 in [0.01, 0.1, 0.5, 1.0, 2.0, 4.0] {
                let naive = spatial_avg_rate_naive(lambda0, 3.0, &radio);
                if naive.is_finite() && naive > 0.0 {
                    let stable = spatial_avg_rate(lambda0, 3.0, &radio).unwrap();
                    assert_relative_eq!(stable, naive, max_relative = 1e-10);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn square_root_scaling(l0 in 1.0..500.0f64, l1 in 0.1..200.0f64) {
            let radio = RadioParams::lte_10mhz();
            let a = spatial_avg_rate(l0, l1, &radio).unwrap();
            let b = spatial_avg_rate(l0, 4.0 * l1, &radio).unwrap();
            prop_assert!((b / a - 2.0).abs() < 1e-9);
            prop_assert!(spatial_avg_rate(l0, l1 * 1.01, &radio).unwrap() > a);
            let back = invert_for_bs_intensity(a, l0, &radio).unwrap();
            prop_assert!((back / l1 - 1.0).abs() < 1e-9);
            prop_assert!((a / (2.0 * (l1 / l0).sqrt()) - 1.0).abs() < 1e-9);
        }
    }
}
