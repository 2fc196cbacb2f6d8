//! Closed-form expected deployment cost per data center and per km².

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite_nonneg, ensure_positive, ensure_probability, Error, Result};
use crate::palm::{cluster_moment, ppp_contact_moment, ClusterParams, DistanceLaw};
use crate::quadrature::QuadratureSettings;
use crate::special::ppp_moment_unchecked;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Architecture {
    #[serde(rename = "DRAN")]
    Dran,
    #[default]
    #[serde(rename = "CloudRAN")]
    CloudRan,
}

impl Architecture {
    pub fn label(self) -> &'static str {
        match self {
            Architecture::Dran => "DRAN",
            Architecture::CloudRan => "CloudRAN",
        }
    }
}

/// Per-device equipment prices. `c_macro` and `c_micro` are distributed-RAN
/// prices; a cloud deployment pays `alpha` times them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquipmentCosts {
    pub c_macro: f64,
    pub c_micro: f64,
    pub c_mw: f64,
    pub c_of: f64,
    pub c_dc: f64,
    pub alpha: f64,
}

impl EquipmentCosts {
    pub fn reference() -> Self {
        Self {
            c_macro: 50_000.0,
            c_micro: 20_000.0,
            c_mw: 50_000.0,
            c_of: 5_000.0,
            c_dc: 40_000.0,
            alpha: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite_nonneg("c_macro", self.c_macro)?;
        ensure_finite_nonneg("c_micro", self.c_micro)?;
        ensure_finite_nonneg("c_mw", self.c_mw)?;
        ensure_finite_nonneg("c_of", self.c_of)?;
        ensure_finite_nonneg("c_dc", self.c_dc)?;
        ensure_probability("alpha", self.alpha)
    }

    /// Macro and micro prices actually paid under `arch`.
    pub fn base_station_prices(&self, arch: Architecture) -> (f64, f64) {
        match arch {
            Architecture::Dran => (self.c_macro, self.c_micro),
            Architecture::CloudRan => (self.alpha * self.c_macro, self.alpha * self.c_micro),
        }
    }

    /// Data-center price `C3`; zero without data centers to equip.
    pub fn datacenter_price(&self, arch: Architecture) -> f64 {
        match arch {
            Architecture::Dran => 0.0,
            Architecture::CloudRan => self.c_dc,
        }
    }
}

/// Distance-scaled link cost `A·d^β + B·d^θ` between two layers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairCost {
    pub capacity: f64,
    pub capacity_exp: f64,
    pub infra: f64,
    pub infra_exp: f64,
}

impl PairCost {
    fn validate(&self, name: &'static str) -> Result<()> {
        for v in [self.capacity, self.capacity_exp, self.infra, self.infra_exp] {
            ensure_finite_nonneg(name, v)?;
        }
        Ok(())
    }
}

/// Link cost per backhaul technology.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TechCosts {
    pub mw: PairCost,
    pub of: PairCost,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkCostParams {
    pub user_bs: PairCost,
    pub bs_backhaul: TechCosts,
    pub backhaul_dc: TechCosts,
    /// Distance-independent data-processing cost per user, `A''`.
    pub processing: f64,
}

impl LinkCostParams {
    pub fn reference(processing: f64) -> Self {
        let pair = |capacity, capacity_exp, infra, infra_exp| PairCost {
            capacity,
            capacity_exp,
            infra,
            infra_exp,
        };
        Self {
            user_bs: pair(5_000.0, 4.0, 10_000.0, 2.0),
            bs_backhaul: TechCosts {
                mw: pair(5_000.0, 2.0, 5_000.0, 2.0),
                of: pair(5_000.0, 1.0, 100_000.0, 1.0),
            },
            backhaul_dc: TechCosts {
                mw: pair(5_000.0, 2.0, 10_000.0, 2.0),
                of: pair(5_000.0, 1.0, 100_000.0, 1.0),
            },
            processing,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.user_bs.validate("links.user_bs")?;
        self.bs_backhaul.mw.validate("links.bs_backhaul.mw")?;
        self.bs_backhaul.of.validate("links.bs_backhaul.of")?;
        self.backhaul_dc.mw.validate("links.backhaul_dc.mw")?;
        self.backhaul_dc.of.validate("links.backhaul_dc.of")?;
        ensure_finite_nonneg("links.processing", self.processing)
    }
}

/// How the backhaul equipment price `C2` is formed from the per-node prices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackhaulEquipment {
    /// `p·λ2MW·C_MW + (1 − p)·λ2OF·C_OF`.
    #[default]
    Literal,
    /// The same sum divided by `λ2`: the mean price of one node.
    Normalized,
}

/// Mixing weights of the per-node infrastructure cost toward data centers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeWeights {
    /// Share of nodes of each type: `p·λ2MW/λ2` and `(1 − p)·λ2OF/λ2`.
    #[default]
    NodeShare,
    /// `p` and `1 − p`, regardless of how many nodes each type deploys.
    Probability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelOptions {
    pub backhaul_equipment: BackhaulEquipment,
    pub user_distance: DistanceLaw,
    pub node_weights: NodeWeights,
}

/// Everything the cost evaluation needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub lambda0: f64,
    pub lambda1c: f64,
    pub lambda1m: f64,
    pub lambda2_mw: f64,
    pub lambda2_of: f64,
    pub lambda3: f64,
    pub p: f64,
    pub sigma: f64,
    pub equipment: EquipmentCosts,
    pub links: LinkCostParams,
    pub architecture: Architecture,
    pub gamma_offset_db: f64,
    pub options: ModelOptions,
}

impl Scenario {
    pub fn lambda1(&self) -> f64 {
        self.lambda1c * (1.0 + self.lambda1m)
    }

    pub fn lambda2(&self) -> f64 {
        self.p * self.lambda2_mw + (1.0 - self.p) * self.lambda2_of
    }

    pub fn cluster(&self) -> Result<ClusterParams> {
        ClusterParams::new(self.lambda1c, self.lambda1m, self.sigma)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("lambda0", self.lambda0)?;
        ensure_positive("lambda1c", self.lambda1c)?;
        ensure_finite_nonneg("lambda1m", self.lambda1m)?;
        ensure_positive("lambda2_mw", self.lambda2_mw)?;
        ensure_positive("lambda2_of", self.lambda2_of)?;
        ensure_positive("lambda3", self.lambda3)?;
        ensure_probability("p", self.p)?;
        ensure_positive("sigma", self.sigma)?;
        if !self.gamma_offset_db.is_finite() {
            return Err(Error::parameter("gamma_offset_db", "must be finite"));
        }
        self.equipment.validate()?;
        self.links.validate()
    }

    /// Per-cluster average base-station price `C1` under the scenario's architecture.
    pub fn c1(&self) -> f64 {
        let (c_macro, c_micro) = self.equipment.base_station_prices(self.architecture);
        equipment_cost_bs(c_macro, c_micro, self.lambda1m)
    }

    /// Backhaul equipment price `C2` under the configured convention.
    pub fn c2(&self) -> f64 {
        let literal = equipment_cost_backhaul(
            self.p,
            self.lambda2_mw,
            self.lambda2_of,
            self.equipment.c_mw,
            self.equipment.c_of,
        );
        match self.options.backhaul_equipment {
            BackhaulEquipment::Literal => literal,
            BackhaulEquipment::Normalized => literal / self.lambda2(),
        }
    }

    pub fn c3(&self) -> f64 {
        self.equipment.datacenter_price(self.architecture)
    }

    /// Microwave share of the backhaul-to-data-center infrastructure term.
    pub fn node_weight_mw(&self) -> f64 {
        match self.options.node_weights {
            NodeWeights::NodeShare => self.p * self.lambda2_mw / self.lambda2(),
            NodeWeights::Probability => self.p,
        }
    }
}

/// Expected cost terms for one data center, plus the derived totals.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub equipment_backhaul: f64,
    pub processing: f64,
    pub capacity_dc: f64,
    pub infra_dc: f64,
    pub equipment_bs: f64,
    pub capacity_bs_backhaul: f64,
    pub infra_bs_backhaul: f64,
    pub capacity_user_bs: f64,
    pub infra_user_bs: f64,
    pub c_phi3: f64,
    pub c3: f64,
    pub total_per_km2: f64,
}

/// Totals grouped by cost kind, in currency per km².
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostGroups {
    pub equipment: f64,
    pub capacity: f64,
    pub infrastructure: f64,
    pub processing: f64,
}

impl CostBreakdown {
    pub const TERM_NAMES: [&'static str; 9] = [
        "equipment_backhaul",
        "processing",
        "capacity_dc",
        "infra_dc",
        "equipment_bs",
        "capacity_bs_backhaul",
        "infra_bs_backhaul",
        "capacity_user_bs",
        "infra_user_bs",
    ];

    pub fn terms(&self) -> [f64; 9] {
        [
            self.equipment_backhaul,
            self.processing,
            self.capacity_dc,
            self.infra_dc,
            self.equipment_bs,
            self.capacity_bs_backhaul,
            self.infra_bs_backhaul,
            self.capacity_user_bs,
            self.infra_user_bs,
        ]
    }

    pub fn from_terms(terms: [f64; 9]) -> Self {
        let [equipment_backhaul, processing, capacity_dc, infra_dc, equipment_bs, capacity_bs_backhaul, infra_bs_backhaul, capacity_user_bs, infra_user_bs] =
            terms;
        Self {
            equipment_backhaul,
            processing,
            capacity_dc,
            infra_dc,
            equipment_bs,
            capacity_bs_backhaul,
            infra_bs_backhaul,
            capacity_user_bs,
            infra_user_bs,
            ..Default::default()
        }
    }

    /// Fills `c_phi3` and `total_per_km2` from the terms.
    pub fn with_totals(mut self, c3: f64, lambda3: f64) -> Self {
        self.c_phi3 = self.terms().iter().sum();
        self.c3 = c3;
        self.total_per_km2 = lambda3 * (c3 + self.c_phi3);
        self
    }

    /// Per-km² totals by kind; they add up to `total_per_km2`.
    pub fn groups(&self, lambda3: f64) -> CostGroups {
        CostGroups {
            equipment: lambda3 * (self.c3 + self.equipment_backhaul + self.equipment_bs),
            capacity: lambda3 * (self.capacity_dc + self.capacity_bs_backhaul + self.capacity_user_bs),
            infrastructure: lambda3 * (self.infra_dc + self.infra_bs_backhaul + self.infra_user_bs),
            processing: lambda3 * self.processing,
        }
    }
}

/// Average price of one base station in a cluster of one macro and on average `λ1m` micros.
pub fn equipment_cost_bs(c_macro: f64, c_micro: f64, lambda1m: f64) -> f64 {
    (c_macro + lambda1m * c_micro) / (1.0 + lambda1m)
}

/// Backhaul equipment price `p·λ2MW·C_MW + (1 − p)·λ2OF·C_OF`.
pub fn equipment_cost_backhaul(p: f64, lambda_mw: f64, lambda_of: f64, c_mw: f64, c_of: f64) -> f64 {
    let mw = if p > 0.0 { p * lambda_mw * c_mw } else { 0.0 };
    let of = if p < 1.0 { (1.0 - p) * lambda_of * c_of } else { 0.0 };
    mw + of
}

/// Expected cost of deploying one data center and everything below it.
pub fn datacenter_cost(scenario: &Scenario, quad: &QuadratureSettings) -> Result<CostBreakdown> {
    scenario.validate()?;
    quad.validate()?;
    let s = scenario;
    let (l0, l1, l2, l3) = (s.lambda0, s.lambda1(), s.lambda2(), s.lambda3);
    let links = &s.links;
    let cluster = s.cluster()?;
    let law = s.options.user_distance;

    let dc = &links.backhaul_dc;
    let capacity_dc = s.p * dc.mw.capacity * ppp_moment_unchecked(dc.mw.capacity_exp, l3)
        + (1.0 - s.p) * dc.of.capacity * ppp_moment_unchecked(dc.of.capacity_exp, l3);
    let w_mw = s.node_weight_mw();
    let infra_dc = w_mw * dc.mw.infra * ppp_moment_unchecked(dc.mw.infra_exp, l3)
        + (1.0 - w_mw) * dc.of.infra * ppp_moment_unchecked(dc.of.infra_exp, l3);

    let bh = &links.bs_backhaul;
    let psi1 = mix_tech(bh.mw.capacity, bh.of.capacity, bh.mw.capacity_exp, bh.of.capacity_exp, s)?;
    let psi2 = mix_tech(bh.mw.infra, bh.of.infra, bh.mw.infra_exp, bh.of.infra_exp, s)?;

    let ub = &links.user_bs;
    let psi3 = user_term(ub.capacity, ub.capacity_exp, &cluster, quad, law)?;
    let psi4 = user_term(ub.infra, ub.infra_exp, &cluster, quad, law)?;

    let terms = CostBreakdown {
        equipment_backhaul: l2 / l3 * s.c2(),
        processing: l0 / l3 * links.processing,
        capacity_dc: l0 / l3 * capacity_dc,
        infra_dc: l2 / l3 * infra_dc,
        equipment_bs: l1 / l3 * s.c1(),
        capacity_bs_backhaul: l0 / l3 * psi1,
        infra_bs_backhaul: l1 / l3 * psi2,
        capacity_user_bs: l0 / l3 * psi3,
        infra_user_bs: l0 / l3 * psi4,
        ..Default::default()
    };
    Ok(terms.with_totals(s.c3(), l3))
}

/// Network cost per km², `λ3 (C3 + C_Φ3)`, with its breakdown.
pub fn total_cost(scenario: &Scenario, quad: &QuadratureSettings) -> Result<CostBreakdown> {
    datacenter_cost(scenario, quad)
}

/// Base-station to backhaul moment; reduces to `mixed_contact_moment` when
/// both technologies share one price and exponent.
fn mix_tech(base_mw: f64, base_of: f64, exp_mw: f64, exp_of: f64, s: &Scenario) -> Result<f64> {
    let mw = base_mw * ppp_contact_moment(exp_mw, s.lambda2_mw)?;
    let of = base_of * ppp_contact_moment(exp_of, s.lambda2_of)?;
    Ok(s.p * mw + (1.0 - s.p) * of)
}

fn user_term(base: f64, exponent: f64, cluster: &ClusterParams, quad: &QuadratureSettings, law: DistanceLaw) -> Result<f64> {
    // A zero price needs no distance law.
    if base == 0.0 {
        return Ok(0.0);
    }
    Ok(base * cluster_moment(exponent, cluster, quad, law)?)
}
