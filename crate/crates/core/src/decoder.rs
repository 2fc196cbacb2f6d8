//! Turbo-decoder workload, link adaptation, computational outage and the
//! conversion from bit-iterations to servers and dollars.

use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite_nonneg, ensure_positive, Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::seed::{SeedSequence, SimRng, Stream};
use crate::special::db_to_linear;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecoderParams {
    /// Decoder connectivity ζ.
    pub zeta: f64,
    /// Complexity scaling K at the target channel outage.
    pub k_scale: f64,
    pub eps_channel: f64,
    /// Calibration factor ν in dB.
    pub nu_db: f64,
    pub gamma_offset_db: f64,
}

impl Default for DecoderParams {
    fn default() -> Self {
        Self {
            zeta: 6.0,
            k_scale: 0.2,
            eps_channel: 0.1,
            nu_db: 0.2,
            gamma_offset_db: 0.0,
        }
    }
}

impl DecoderParams {
    pub fn with_offset(self, gamma_offset_db: f64) -> Self {
        Self { gamma_offset_db, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.zeta.is_finite() || self.zeta <= 2.0 {
            return Err(Error::parameter("zeta", format!("must exceed 2, got {}", self.zeta)));
        }
        ensure_positive("k_scale", self.k_scale)?;
        if !(self.eps_channel > 0.0 && self.eps_channel < 1.0) {
            return Err(Error::parameter("eps_channel", "must lie in (0, 1)"));
        }
        if !self.nu_db.is_finite() || !self.gamma_offset_db.is_finite() {
            return Err(Error::parameter("nu_db", "dB values must be finite"));
        }
        Ok(())
    }

    /// `γ^r / γ^c`.
    pub fn threshold_factor(&self) -> f64 {
        db_to_linear(self.nu_db) * db_to_linear(self.gamma_offset_db)
    }
}

/// Bit-iterations per channel use needed to decode rate `rate` at linear SNR `gamma`.
///
/// Clamped at zero: far above threshold the approximation turns negative.
pub fn decoding_complexity(gamma: f64, rate: f64, params: &DecoderParams) -> Result<f64> {
    ensure_finite_nonneg("gamma", gamma)?;
    ensure_positive("rate", rate)?;
    let margin = (1.0 + gamma).log2() - rate;
    if margin.is_nan() || margin <= 0.0 {
        return Err(Error::Domain(format!(
            "SNR {gamma} supports at most {:.6} bit/cu, below rate {rate}",
            (1.0 + gamma).log2()
        )));
    }
    Ok(complexity_unchecked(margin, rate, params))
}

fn complexity_unchecked(margin: f64, rate: f64, params: &DecoderParams) -> f64 {
    let z = params.zeta;
    let bracket = ((z - 2.0) / (params.k_scale * z)).log2() - 2.0 * margin.log2();
    (rate / (z - 1.0).log2() * bracket).max(0.0)
}

/// Code rates with their capacity and practical SNR thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McsTable {
    pub rates: Vec<f64>,
    pub gamma_c: Vec<f64>,
    pub gamma_r: Vec<f64>,
}

impl McsTable {
    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// Highest scheme whose practical threshold `gamma` meets.
    pub fn select(&self, gamma: f64) -> Option<usize> {
        let n = self.gamma_r.partition_point(|&t| t <= gamma);
        n.checked_sub(1)
    }

    pub fn lowest_threshold(&self) -> f64 {
        self.gamma_r[0]
    }

    /// Workload at `gamma` after link adaptation.
    pub fn workload(&self, gamma: f64, params: &DecoderParams) -> Result<f64> {
        let k = self.select(gamma).ok_or_else(|| {
            Error::Domain(format!(
                "SNR {gamma} is below the lowest scheme threshold {}",
                self.lowest_threshold()
            ))
        })?;
        decoding_complexity(gamma, self.rates[k], params)
    }
}

/// `n` rates spaced geometrically over `[low, high]`.
pub fn geometric_rates(n: usize, low: f64, high: f64) -> Vec<f64> {
    if n == 1 {
        return vec![low];
    }
    let step = (high / low).ln() / (n - 1) as f64;
    (0..n).map(|i| low * (step * i as f64).exp()).collect()
}

pub fn snr_thresholds(rates: &[f64], params: &DecoderParams) -> Result<McsTable> {
    params.validate()?;
    if rates.is_empty() {
        return Err(Error::parameter("rates", "at least one rate is required"));
    }
    if rates.iter().any(|&r| !r.is_finite() || r <= 0.0) {
        return Err(Error::parameter("rates", "rates must be positive and finite"));
    }
    if rates.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::parameter("rates", "rates must be strictly increasing"));
    }
    let factor = params.threshold_factor();
    let gamma_c: Vec<f64> = rates.iter().map(|&r| 2f64.powf(r) - 1.0).collect();
    let gamma_r = gamma_c.iter().map(|g| factor * g).collect();
    Ok(McsTable {
        rates: rates.to_vec(),
        gamma_c,
        gamma_r,
    })
}

/// Distribution of a user's SNR, conditioned on reaching the lowest threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SnrSampler {
    Constant { snr_db: f64 },
    /// Exponential SNR (Rayleigh fading) with the given mean.
    Rayleigh { mean_db: f64 },
    LogNormal { median_db: f64, sigma_db: f64 },
    UniformDb { low_db: f64, high_db: f64 },
}

impl Default for SnrSampler {
    fn default() -> Self {
        SnrSampler::Rayleigh { mean_db: 10.0 }
    }
}

const MAX_REJECTIONS: usize = 10_000;

impl SnrSampler {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, SnrSampler::Constant { .. })
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            SnrSampler::Constant { snr_db } => snr_db.is_finite(),
            SnrSampler::Rayleigh { mean_db } => mean_db.is_finite(),
            SnrSampler::LogNormal { median_db, sigma_db } => median_db.is_finite() && sigma_db > 0.0 && sigma_db.is_finite(),
            SnrSampler::UniformDb { low_db, high_db } => low_db.is_finite() && high_db.is_finite() && low_db < high_db,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::parameter("snr_sampler", format!("invalid sampler {self:?}")))
        }
    }

    /// Draws a linear SNR of at least `floor`.
    pub fn sample(&self, floor: f64, rng: &mut SimRng) -> Result<f64> {
        match *self {
            SnrSampler::Constant { snr_db } => {
                let g = db_to_linear(snr_db);
                if g < floor {
                    return Err(Error::Domain(format!(
                        "constant SNR {snr_db} dB is below the lowest scheme threshold"
                    )));
                }
                Ok(g)
            }
            SnrSampler::Rayleigh { mean_db } => {
                // The exponential is memoryless, so truncation is a shift.
                let exp = Exp::new(1.0 / db_to_linear(mean_db)).map_err(|e| Error::parameter("mean_db", e.to_string()))?;
                Ok(floor + exp.sample(rng))
            }
            SnrSampler::LogNormal { median_db, sigma_db } => {
                let normal = Normal::new(median_db, sigma_db).map_err(|e| Error::parameter("sigma_db", e.to_string()))?;
                rejection(floor, rng, |rng| db_to_linear(normal.sample(rng)))
            }
            SnrSampler::UniformDb { low_db, high_db } => {
                rejection(floor, rng, |rng| db_to_linear(rng.random_range(low_db..high_db)))
            }
        }
    }
}

fn rejection(floor: f64, rng: &mut SimRng, mut draw: impl FnMut(&mut SimRng) -> f64) -> Result<f64> {
    for _ in 0..MAX_REJECTIONS {
        let g = draw(rng);
        if g >= floor {
            return Ok(g);
        }
    }
    Err(Error::Domain(
        "SNR sampler almost never reaches the lowest scheme threshold".into(),
    ))
}

/// Monte Carlo setup shared by the outage computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageRun {
    pub eps_comp: f64,
    pub n_mc: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl OutageRun {
    pub fn new(eps_comp: f64, n_mc: usize, seed: u64) -> Self {
        Self {
            eps_comp,
            n_mc,
            seed,
            execution: Execution::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps_comp > 0.0 && self.eps_comp < 1.0) {
            return Err(Error::parameter("eps_comp", "must lie in (0, 1)"));
        }
        if self.n_mc == 0 {
            return Err(Error::parameter("n_mc", "must be at least 1"));
        }
        Ok(())
    }
}

/// Aggregate workload of `n_cloud` base stations, one draw per Monte Carlo
/// realization. Realization `i` always sees the same user SNRs, so runs with
/// different `n_cloud` share their first users.
pub fn aggregate_workloads(
    n_cloud: usize,
    sampler: &SnrSampler,
    mcs: &McsTable,
    params: &DecoderParams,
    run: &OutageRun,
) -> Result<Vec<f64>> {
    if n_cloud == 0 {
        return Err(Error::parameter("n_cloud", "must be at least 1"));
    }
    run.validate()?;
    params.validate()?;
    sampler.validate()?;
    if mcs.is_empty() {
        return Err(Error::parameter("rates", "empty scheme table"));
    }
    let seeds = SeedSequence::new(run.seed);
    let floor = mcs.lowest_threshold();
    let sums = map_indexed(run.execution, run.n_mc, |i| -> Result<f64> {
        let mut rng = seeds.rng(i as u64, Stream::Snr);
        let mut total = 0.0;
        for _ in 0..n_cloud {
            let gamma = sampler.sample(floor, &mut rng)?;
            total += mcs.workload(gamma, params)?;
        }
        Ok(total)
    });
    sums.into_iter().collect()
}

/// Empirical `q`-quantile (inverse of the empirical CDF).
fn quantile(mut values: Vec<f64>, q: f64) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    let idx = ((q * n as f64).ceil() as usize).clamp(1, n) - 1;
    values[idx]
}

/// Workload that `n_cloud` pooled base stations exceed with probability `eps_comp`.
pub fn outage_demand(
    n_cloud: usize,
    sampler: &SnrSampler,
    mcs: &McsTable,
    params: &DecoderParams,
    run: &OutageRun,
) -> Result<f64> {
    let sums = aggregate_workloads(n_cloud, sampler, mcs, params, run)?;
    Ok(quantile(sums, 1.0 - run.eps_comp))
}

/// Workload when each of `n_cloud` base stations is provisioned on its own.
pub fn dran_equivalent_demand(
    n_cloud: usize,
    sampler: &SnrSampler,
    mcs: &McsTable,
    params: &DecoderParams,
    run: &OutageRun,
) -> Result<f64> {
    if n_cloud == 0 {
        return Err(Error::parameter("n_cloud", "must be at least 1"));
    }
    Ok(n_cloud as f64 * outage_demand(1, sampler, mcs, params, run)?)
}

/// Frame structure and server figures for converting workload to hardware.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FrameConstants {
    pub subframe_s: f64,
    pub resource_blocks: f64,
    pub subcarriers: f64,
    pub symbols: f64,
    pub flop_per_bit_iter: f64,
    /// FLOP/s of one server (four 96 GFLOP/s sockets).
    pub server_flops: f64,
    pub server_cost: f64,
}

impl Default for FrameConstants {
    fn default() -> Self {
        Self {
            subframe_s: 0.5e-3,
            resource_blocks: 45.0,
            subcarriers: 12.0,
            symbols: 7.0,
            flop_per_bit_iter: 1000.0,
            server_flops: 4.0 * 96e9,
            server_cost: 20_000.0,
        }
    }
}

impl FrameConstants {
    /// Channel uses per second occupied by one user.
    pub fn channel_uses_per_s(&self) -> f64 {
        self.resource_blocks * self.subcarriers * self.symbols / self.subframe_s
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("subframe_s", self.subframe_s),
            ("resource_blocks", self.resource_blocks),
            ("subcarriers", self.subcarriers),
            ("symbols", self.symbols),
            ("flop_per_bit_iter", self.flop_per_bit_iter),
            ("server_flops", self.server_flops),
            ("server_cost", self.server_cost),
        ] {
            ensure_positive(name, v)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ProcessingDemand {
    /// Bit-iterations per channel use.
    pub d_outage: f64,
    /// Bit-iterations per second.
    pub d_abs: f64,
    /// FLOP per second.
    pub d_flops: f64,
    /// Servers, fractional.
    pub d_unit: f64,
}

pub fn servers_required(d_outage: f64, frame: &FrameConstants) -> Result<ProcessingDemand> {
    ensure_finite_nonneg("d_outage", d_outage)?;
    frame.validate()?;
    let d_abs = d_outage * frame.channel_uses_per_s();
    let d_flops = d_abs * frame.flop_per_bit_iter;
    Ok(ProcessingDemand {
        d_outage,
        d_abs,
        d_flops,
        d_unit: d_flops / frame.server_flops,
    })
}

/// Per-user processing price `(slope·λ1 + intercept)·server_cost/λ0`.
pub fn processing_cost_rate(slope: f64, intercept: f64, lambda1: f64, server_cost: f64, lambda0: f64) -> Result<f64> {
    ensure_finite_nonneg("slope", slope)?;
    ensure_finite_nonneg("intercept", intercept)?;
    ensure_finite_nonneg("lambda1", lambda1)?;
    ensure_finite_nonneg("server_cost", server_cost)?;
    ensure_positive("lambda0", lambda0)?;
    Ok((slope * lambda1 + intercept) * server_cost / lambda0)
}

/// Servers per base station as a linear fit in the base-station intensity,
/// with the intensity the fit was read at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessingPreset {
    pub gamma_offset_db: f64,
    pub lambda1: f64,
    pub slope: f64,
    pub intercept: f64,
}

pub const PROCESSING_PRESETS: [ProcessingPreset; 3] = [
    ProcessingPreset {
        gamma_offset_db: 0.0,
        lambda1: 50.0,
        slope: 0.111,
        intercept: 0.0051,
    },
    ProcessingPreset {
        gamma_offset_db: 0.4,
        lambda1: 51.2,
        slope: 0.096,
        intercept: 0.0036,
    },
    ProcessingPreset {
        gamma_offset_db: 0.9,
        lambda1: 52.8,
        slope: 0.083,
        intercept: 0.0027,
    },
];

pub fn processing_preset(gamma_offset_db: f64) -> Option<ProcessingPreset> {
    PROCESSING_PRESETS
        .iter()
        .copied()
        .find(|p| (p.gamma_offset_db - gamma_offset_db).abs() < 1e-9)
}

/// Decoder model configuration as carried by a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ComplexityProfile {
    pub decoder: DecoderParams,
    pub rates: Vec<f64>,
    pub snr: SnrSampler,
    pub eps_comp: f64,
    pub n_mc: usize,
    /// Pool size at which the distributed-to-pooled workload ratio is taken.
    pub pool_size: usize,
    /// Multiplier covering downlink processing on top of the uplink decoder.
    pub downlink_uplift: f64,
    pub frame: FrameConstants,
}

impl Default for ComplexityProfile {
    fn default() -> Self {
        Self {
            decoder: DecoderParams::default(),
            rates: geometric_rates(15, 0.15, 5.55),
            snr: SnrSampler::default(),
            eps_comp: 0.1,
            n_mc: 20_000,
            pool_size: 50,
            downlink_uplift: 1.4,
            frame: FrameConstants::default(),
        }
    }
}

impl ComplexityProfile {
    pub fn validate(&self) -> Result<()> {
        self.decoder.validate()?;
        self.snr.validate()?;
        self.frame.validate()?;
        snr_thresholds(&self.rates, &self.decoder)?;
        OutageRun::new(self.eps_comp, self.n_mc, 0).validate()?;
        if self.pool_size == 0 {
            return Err(Error::parameter("pool_size", "must be at least 1"));
        }
        ensure_positive("downlink_uplift", self.downlink_uplift)
    }

    pub fn run(&self, seed: u64, execution: Execution) -> OutageRun {
        OutageRun {
            execution,
            ..OutageRun::new(self.eps_comp, self.n_mc, seed)
        }
    }

    /// Ratio of stand-alone to pooled workload at `pool_size` base stations.
    pub fn pooling_ratio(&self, gamma_offset_db: f64, seed: u64, execution: Execution) -> Result<f64> {
        let params = self.decoder.with_offset(gamma_offset_db);
        let mcs = snr_thresholds(&self.rates, &params)?;
        let run = self.run(seed, execution);
        let pooled = outage_demand(self.pool_size, &self.snr, &mcs, &params, &run)?;
        let alone = dran_equivalent_demand(self.pool_size, &self.snr, &mcs, &params, &run)?;
        if pooled <= 0.0 {
            return Err(Error::Domain("pooled workload is zero; the ratio is undefined".into()));
        }
        Ok(alone / pooled)
    }
}

/// One row of the workload-versus-pool-size table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityRow {
    pub gamma_offset_db: f64,
    pub n_cloud: usize,
    pub outage_per_bs: f64,
    pub dran_per_bs: f64,
    pub servers_per_bs: f64,
    pub dran_servers_per_bs: f64,
}

/// Pooled and stand-alone workloads per base station for each pool size,
/// with servers including the downlink uplift.
pub fn complexity_table(
    profile: &ComplexityProfile,
    offsets_db: &[f64],
    pool_sizes: &[usize],
    seed: u64,
    execution: Execution,
) -> Result<Vec<ComplexityRow>> {
    profile.validate()?;
    let mut rows = Vec::with_capacity(offsets_db.len() * pool_sizes.len());
    for &offset in offsets_db {
        let params = profile.decoder.with_offset(offset);
        let mcs = snr_thresholds(&profile.rates, &params)?;
        let run = profile.run(seed, execution);
        let single = outage_demand(1, &profile.snr, &mcs, &params, &run)?;
        for &n in pool_sizes {
            let pooled = outage_demand(n, &profile.snr, &mcs, &params, &run)? / n as f64;
            let uplift = profile.downlink_uplift;
            rows.push(ComplexityRow {
                gamma_offset_db: offset,
                n_cloud: n,
                outage_per_bs: pooled,
                dran_per_bs: single,
                servers_per_bs: servers_required(uplift * pooled, &profile.frame)?.d_unit,
                dran_servers_per_bs: servers_required(uplift * single, &profile.frame)?.d_unit,
            });
        }
    }
    Ok(rows)
}
