//! Monte Carlo deployments: sample all four layers, attach every point to
//! its nearest point one layer up, and add up what the network costs.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cost::{CostBreakdown, Scenario};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, CompensatedSum, Execution};
use crate::geometry::{
    nearest_assign, sample_backhaul, sample_cluster_bs, sample_ppp, AssignmentMap, BackhaulDraw, BackhaulTech, Layer,
    MarkedBaseStationSet, Point, PointSet, Window,
};
use crate::seed::{SeedSequence, Stream};

/// How the per-data-center mean is formed from one realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Realization total divided by the expected data-center count `λ3·|W|`.
    #[default]
    ExpectedCount,
    /// Realization total divided by the data centers actually drawn.
    RealizedCount,
}

/// Distance used for the user to base-station link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UserLink {
    /// Straight-line distance between the user and its base station.
    #[default]
    Euclidean,
    /// `‖x − y − z‖` with user, base station and backhaul node all taken
    /// relative to the serving data center.
    DataCenterOffsets,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    pub window: Window,
    pub n_reps: usize,
    pub seed: u64,
    pub execution: Execution,
    pub normalization: Normalization,
    pub user_link: UserLink,
}

impl SimSettings {
    pub fn new(window: Window, n_reps: usize, seed: u64) -> Self {
        Self {
            window,
            n_reps,
            seed,
            execution: Execution::default(),
            normalization: Normalization::default(),
            user_link: UserLink::default(),
        }
    }

    /// 10×10 km torus, 2000 replications.
    pub fn standard(seed: u64) -> Self {
        Self::new(Window::torus(10.0).expect("valid window"), 2000, seed)
    }
}

/// The sampled layers of one deployment, before any attachment.
#[derive(Debug, Clone, PartialEq)]
pub struct Layers {
    pub users: PointSet,
    pub base_stations: MarkedBaseStationSet,
    pub backhaul: BackhaulDraw,
    pub data_centers: PointSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentRealization {
    pub layers: Layers,
    /// Macros first, then micros.
    pub base_station_points: PointSet,
    pub user_to_bs: AssignmentMap,
    pub bs_to_backhaul: AssignmentMap,
    pub backhaul_to_dc: AssignmentMap,
    pub users_per_bs: Vec<usize>,
    pub users_per_backhaul: Vec<usize>,
    pub users_per_dc: Vec<usize>,
    /// Summed over every data center in the window.
    pub cost: CostBreakdown,
}

impl DeploymentRealization {
    pub fn n_data_centers(&self) -> usize {
        self.layers.data_centers.len()
    }

    /// One CSV row per node: `layer,x,y,parent_index,subtree_count`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "layer,x,y,parent_index,subtree_count")?;
        let rows = [
            (Layer::Users, &self.layers.users.points, Some(&self.user_to_bs.upper_of), None),
            (
                Layer::BaseStations,
                &self.base_station_points.points,
                Some(&self.bs_to_backhaul.upper_of),
                Some(&self.users_per_bs),
            ),
            (
                Layer::Backhaul,
                &self.layers.backhaul.nodes.points,
                Some(&self.backhaul_to_dc.upper_of),
                Some(&self.users_per_backhaul),
            ),
            (Layer::DataCenters, &self.layers.data_centers.points, None, Some(&self.users_per_dc)),
        ];
        for (layer, points, parents, counts) in rows {
            for (i, p) in points.iter().enumerate() {
                let parent = parents.map(|v| v[i].to_string()).unwrap_or_default();
                let count = counts.map_or(1, |c| c[i]);
                writeln!(out, "{},{},{},{},{}", layer.name(), p.x, p.y, parent, count)?;
            }
        }
        Ok(())
    }
}

fn check_window(scenario: &Scenario, window: &Window) -> Result<()> {
    if scenario.lambda3 * window.area() < 1.0 {
        return Err(Error::parameter(
            "window",
            format!(
                "expects {:.3} data centers; enlarge the window to hold at least one",
                scenario.lambda3 * window.area()
            ),
        ));
    }
    Ok(())
}

/// Draws layers for replication `rep` from independent streams.
pub fn sample_layers(scenario: &Scenario, window: &Window, seeds: &SeedSequence, rep: u64) -> Result<Layers> {
    let s = scenario;
    Ok(Layers {
        users: sample_ppp(s.lambda0, window, Layer::Users, &mut seeds.rng(rep, Stream::Users))?,
        base_stations: sample_cluster_bs(
            s.lambda1c,
            s.lambda1m,
            s.sigma,
            window,
            &mut seeds.rng(rep, Stream::BaseStations),
        )?,
        backhaul: sample_backhaul(s.p, s.lambda2_mw, s.lambda2_of, window, &mut seeds.rng(rep, Stream::Backhaul))?,
        data_centers: sample_ppp(s.lambda3, window, Layer::DataCenters, &mut seeds.rng(rep, Stream::DataCenters))?,
    })
}

/// Attaches the layers and prices every node and link.
pub fn assemble(scenario: &Scenario, layers: Layers, window: &Window, user_link: UserLink) -> Result<DeploymentRealization> {
    let s = scenario;
    let bs_points = layers.base_stations.combined();
    let backhaul = &layers.backhaul.nodes;
    let dcs = &layers.data_centers;
    let user_to_bs = nearest_assign(&layers.users, &bs_points, window)?;
    let bs_to_backhaul = nearest_assign(&bs_points, backhaul, window)?;
    let backhaul_to_dc = nearest_assign(backhaul, dcs, window)?;

    let users_per_bs = user_to_bs.counts(bs_points.len());
    let mut users_per_backhaul = vec![0; backhaul.len()];
    for (b, &z) in bs_to_backhaul.upper_of.iter().enumerate() {
        users_per_backhaul[z] += users_per_bs[b];
    }
    let mut users_per_dc = vec![0; dcs.len()];
    for (z, &d) in backhaul_to_dc.upper_of.iter().enumerate() {
        users_per_dc[d] += users_per_backhaul[z];
    }

    let links = &s.links;
    let (bh, dc) = match layers.backhaul.realized {
        BackhaulTech::Microwave => (links.bs_backhaul.mw, links.backhaul_dc.mw),
        BackhaulTech::OpticalFiber => (links.bs_backhaul.of, links.backhaul_dc.of),
    };
    let mut terms = [CompensatedSum::default(); 9];
    let [eq_bh, proc, cap_dc, inf_dc, eq_bs, cap_bb, inf_bb, cap_ub, inf_ub] = &mut terms;

    let c2 = s.c2();
    for (z, &d) in backhaul_to_dc.distance.iter().enumerate() {
        let n = users_per_backhaul[z] as f64;
        eq_bh.add(c2);
        proc.add(n * links.processing);
        cap_dc.add(n * dc.capacity * d.powf(dc.capacity_exp));
        inf_dc.add(dc.infra * d.powf(dc.infra_exp));
    }
    let c1 = s.c1();
    for (y, &d) in bs_to_backhaul.distance.iter().enumerate() {
        let n = users_per_bs[y] as f64;
        eq_bs.add(c1);
        cap_bb.add(n * bh.capacity * d.powf(bh.capacity_exp));
        inf_bb.add(bh.infra * d.powf(bh.infra_exp));
    }
    let ub = links.user_bs;
    for (x, (&y, &euclid)) in user_to_bs.upper_of.iter().zip(&user_to_bs.distance).enumerate() {
        let d = match user_link {
            UserLink::Euclidean => euclid,
            UserLink::DataCenterOffsets => {
                let z = bs_to_backhaul.upper_of[y];
                let o = dcs.points[backhaul_to_dc.upper_of[z]];
                let rel = |p: Point| window.displacement(o, p);
                let (ux, uy) = rel(layers.users.points[x]);
                let (yx, yy) = rel(bs_points.points[y]);
                let (zx, zy) = rel(backhaul.points[z]);
                (ux - yx - zx).hypot(uy - yy - zy)
            }
        };
        cap_ub.add(ub.capacity * d.powf(ub.capacity_exp));
        inf_ub.add(ub.infra * d.powf(ub.infra_exp));
    }
    let cost = CostBreakdown::from_terms(terms.map(|t| t.value())).with_totals(s.c3() * dcs.len() as f64, 1.0);

    Ok(DeploymentRealization {
        layers,
        base_station_points: bs_points,
        user_to_bs,
        bs_to_backhaul,
        backhaul_to_dc,
        users_per_bs,
        users_per_backhaul,
        users_per_dc,
        cost,
    })
}

/// Samples and prices replication `rep`.
pub fn simulate_realization(scenario: &Scenario, settings: &SimSettings, rep: u64) -> Result<DeploymentRealization> {
    scenario.validate()?;
    check_window(scenario, &settings.window)?;
    let seeds = SeedSequence::new(settings.seed);
    let layers = sample_layers(scenario, &settings.window, &seeds, rep)?;
    assemble(scenario, layers, &settings.window, settings.user_link)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TermEstimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Monte Carlo estimate of the expected cost per data center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostEstimate {
    /// Mean of `C_Φ3`, the cost below one data center excluding its own price.
    pub mean: f64,
    pub std_error: f64,
    pub n_reps: usize,
    pub n_discarded: usize,
    pub per_term: Vec<(String, TermEstimate)>,
}

impl CostEstimate {
    pub fn discard_rate(&self) -> f64 {
        self.n_discarded as f64 / (self.n_reps + self.n_discarded) as f64
    }

    pub fn term(&self, name: &str) -> Option<TermEstimate> {
        self.per_term.iter().find(|(n, _)| n == name).map(|&(_, t)| t)
    }
}

fn summarize(samples: &[[f64; 10]]) -> [TermEstimate; 10] {
    let n = samples.len() as f64;
    let mut out = [TermEstimate::default(); 10];
    for (k, slot) in out.iter_mut().enumerate() {
        let mean = samples.iter().map(|s| s[k]).collect::<CompensatedSum>().value() / n;
        let var = samples.iter().map(|s| (s[k] - mean).powi(2)).collect::<CompensatedSum>().value() / (n - 1.0);
        *slot = TermEstimate {
            mean,
            std_error: (var / n).sqrt(),
        };
    }
    out
}

/// Averages the per-data-center cost over independent replications.
/// Replications in which some layer has nothing to attach to are discarded.
pub fn estimate_mean_dc_cost(scenario: &Scenario, settings: &SimSettings) -> Result<CostEstimate> {
    scenario.validate()?;
    check_window(scenario, &settings.window)?;
    if settings.n_reps < 2 {
        return Err(Error::parameter("reps", "at least 2 replications are required"));
    }
    let seeds = SeedSequence::new(settings.seed);
    let expected_dcs = scenario.lambda3 * settings.window.area();
    let outcomes = map_indexed(settings.execution, settings.n_reps, |rep| -> Result<Option<[f64; 10]>> {
        let layers = sample_layers(scenario, &settings.window, &seeds, rep as u64)?;
        let realization = match assemble(scenario, layers, &settings.window, settings.user_link) {
            Ok(r) => r,
            Err(Error::EmptyUpperLayer { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let divisor = match settings.normalization {
            Normalization::ExpectedCount => expected_dcs,
            Normalization::RealizedCount => realization.n_data_centers() as f64,
        };
        if divisor == 0.0 {
            return Ok(None);
        }
        let mut row = [0.0; 10];
        for (slot, t) in row.iter_mut().zip(realization.cost.terms()) {
            *slot = t / divisor;
        }
        row[9] = realization.cost.c_phi3 / divisor;
        Ok(Some(row))
    });
    let mut kept = Vec::with_capacity(settings.n_reps);
    let mut discarded = 0;
    for outcome in outcomes {
        match outcome? {
            Some(row) => kept.push(row),
            None => discarded += 1,
        }
    }
    if kept.len() < 2 {
        return Err(Error::Estimation(format!(
            "{discarded} of {} replications were discarded; nothing left to average",
            settings.n_reps
        )));
    }
    let stats = summarize(&kept);
    Ok(CostEstimate {
        mean: stats[9].mean,
        std_error: stats[9].std_error,
        n_reps: kept.len(),
        n_discarded: discarded,
        per_term: CostBreakdown::TERM_NAMES
            .iter()
            .zip(&stats[..9])
            .map(|(n, &t)| (n.to_string(), t))
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermComparison {
    pub name: String,
    pub closed_form: f64,
    pub mean: f64,
    pub std_error: f64,
    pub z: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub terms: Vec<TermComparison>,
    pub overall: TermComparison,
    pub discard_rate: f64,
    pub note: String,
    pub pass: bool,
}

/// Largest tolerated |z|.
pub const Z_LIMIT: f64 = 3.0;

fn compare_term(name: &str, closed_form: f64, est: TermEstimate) -> TermComparison {
    let diff = est.mean - closed_form;
    let scale = closed_form.abs().max(est.mean.abs()).max(1.0);
    let z = if est.std_error > 0.0 {
        diff / est.std_error
    } else if diff.abs() <= 1e-9 * scale {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    };
    TermComparison {
        name: name.to_string(),
        closed_form,
        mean: est.mean,
        std_error: est.std_error,
        z,
        pass: z.abs() <= Z_LIMIT,
    }
}

impl ComparisonReport {
    /// Z-scores of the simulated terms against a closed-form breakdown.
    pub fn new(closed: &CostBreakdown, estimate: &CostEstimate, note: String) -> Self {
        let terms: Vec<TermComparison> = CostBreakdown::TERM_NAMES
            .iter()
            .zip(closed.terms())
            .map(|(name, cf)| compare_term(name, cf, estimate.term(name).unwrap_or_default()))
            .collect();
        let overall = compare_term(
            "c_phi3",
            closed.c_phi3,
            TermEstimate {
                mean: estimate.mean,
                std_error: estimate.std_error,
            },
        );
        let pass = overall.pass && terms.iter().all(|t| t.pass);
        Self {
            terms,
            overall,
            discard_rate: estimate.discard_rate(),
            note,
            pass,
        }
    }
}

/// Runs the simulation and scores it against [`crate::cost::datacenter_cost`].
pub fn compare_to_closed_form(
    scenario: &Scenario,
    settings: &SimSettings,
    quad: &crate::quadrature::QuadratureSettings,
) -> Result<ComparisonReport> {
    let closed = crate::cost::datacenter_cost(scenario, quad)?;
    let estimate = estimate_mean_dc_cost(scenario, settings)?;
    let w = settings.window;
    let note = format!(
        "{}x{} km {} window, {:.0} data centers expected per realization; terms driven by distances comparable to the window side are biased",
        w.width(),
        w.height(),
        if w.wraps() { "toroidal" } else { "planar" },
        scenario.lambda3 * w.area()
    );
    Ok(ComparisonReport::new(&closed, &estimate, note))
}
