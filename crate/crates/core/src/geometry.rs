//! Four-layer point-process geometry in a finite observation window.

use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite_nonneg, ensure_positive, ensure_probability, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Rectangular observation window, optionally with toroidal (wrap-around) metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    width: f64,
    height: f64,
    wrap: bool,
}

impl Window {
    pub fn new(width: f64, height: f64, wrap: bool) -> Result<Self> {
        ensure_positive("window.width", width)?;
        ensure_positive("window.height", height)?;
        Ok(Self { width, height, wrap })
    }

    /// Square torus of side `side` km.
    pub fn torus(side: f64) -> Result<Self> {
        Self::new(side, side, true)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn wraps(&self) -> bool {
        self.wrap
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn contains(&self, p: Point) -> bool {
        (0.0..self.width).contains(&p.x) && (0.0..self.height).contains(&p.y)
    }

    /// Displacement `to − from` under the window metric (minimal image on a torus).
    pub fn displacement(&self, from: Point, to: Point) -> (f64, f64) {
        let mut dx = to.x - from.x;
        let mut dy = to.y - from.y;
        if self.wrap {
            dx -= self.width * (dx / self.width).round();
            dy -= self.height * (dy / self.height).round();
        }
        (dx, dy)
    }

    pub fn distance_sq(&self, a: Point, b: Point) -> f64 {
        let (dx, dy) = self.displacement(a, b);
        dx * dx + dy * dy
    }

    pub fn distance(&self, a: Point, b: Point) -> f64 {
        self.distance_sq(a, b).sqrt()
    }

    /// Maps a point back into the window on a torus; `None` if it falls outside a planar window.
    pub fn fold(&self, p: Point) -> Option<Point> {
        if self.wrap {
            let mut x = p.x.rem_euclid(self.width);
            let mut y = p.y.rem_euclid(self.height);
            // rem_euclid can round up to the modulus for tiny negative inputs.
            if x >= self.width {
                x = 0.0;
            }
            if y >= self.height {
                y = 0.0;
            }
            Some(Point::new(x, y))
        } else if self.contains(p) {
            Some(p)
        } else {
            None
        }
    }

    fn uniform_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        Point::new(rng.random::<f64>() * self.width, rng.random::<f64>() * self.height)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    Users,
    BaseStations,
    Backhaul,
    DataCenters,
}

impl Layer {
    pub fn name(self) -> &'static str {
        match self {
            Layer::Users => "users",
            Layer::BaseStations => "base_stations",
            Layer::Backhaul => "backhaul",
            Layer::DataCenters => "data_centers",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub points: Vec<Point>,
    pub layer: Layer,
}

impl PointSet {
    pub fn new(layer: Layer, points: Vec<Point>) -> Self {
        Self { points, layer }
    }

    pub fn empty(layer: Layer) -> Self {
        Self::new(layer, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Macro base stations (cluster centres) and their micro base stations.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedBaseStationSet {
    pub macros: PointSet,
    pub micros: PointSet,
    /// `parent_of[i]` is the macro index of micro `i`.
    pub parent_of: Vec<usize>,
}

impl MarkedBaseStationSet {
    pub fn len(&self) -> usize {
        self.macros.len() + self.micros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All base stations as one layer: macros first, then micros.
    pub fn combined(&self) -> PointSet {
        let mut points = Vec::with_capacity(self.len());
        points.extend_from_slice(&self.macros.points);
        points.extend_from_slice(&self.micros.points);
        PointSet::new(Layer::BaseStations, points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BackhaulTech {
    #[serde(rename = "MW")]
    Microwave,
    #[serde(rename = "OF")]
    OpticalFiber,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackhaulDraw {
    pub nodes: PointSet,
    pub realized: BackhaulTech,
}

/// Lower-layer point → nearest upper-layer point.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentMap {
    pub upper_of: Vec<usize>,
    pub distance: Vec<f64>,
}

impl AssignmentMap {
    pub fn len(&self) -> usize {
        self.upper_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper_of.is_empty()
    }

    /// Number of lower points attached to each of `n_upper` upper points.
    pub fn counts(&self, n_upper: usize) -> Vec<usize> {
        let mut counts = vec![0; n_upper];
        for &u in &self.upper_of {
            counts[u] += 1;
        }
        counts
    }
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let dist = Poisson::new(mean).expect("finite positive Poisson mean");
    dist.sample(rng) as usize
}

/// Homogeneous Poisson process of `intensity` points/km² in `window`.
pub fn sample_ppp<R: Rng + ?Sized>(intensity: f64, window: &Window, layer: Layer, rng: &mut R) -> Result<PointSet> {
    ensure_finite_nonneg("intensity", intensity)?;
    let n = poisson_count(intensity * window.area(), rng);
    let points = (0..n).map(|_| window.uniform_point(rng)).collect();
    Ok(PointSet::new(layer, points))
}

/// Mixed Poisson backhaul layer: one Bernoulli(p) draw picks the microwave
/// intensity, otherwise the fibre intensity, for the whole realization.
pub fn sample_backhaul<R: Rng + ?Sized>(
    p: f64,
    lambda_mw: f64,
    lambda_of: f64,
    window: &Window,
    rng: &mut R,
) -> Result<BackhaulDraw> {
    ensure_probability("p", p)?;
    ensure_finite_nonneg("lambda2_mw", lambda_mw)?;
    ensure_finite_nonneg("lambda2_of", lambda_of)?;
    let realized = if rng.random::<f64>() < p {
        BackhaulTech::Microwave
    } else {
        BackhaulTech::OpticalFiber
    };
    let intensity = match realized {
        BackhaulTech::Microwave => lambda_mw,
        BackhaulTech::OpticalFiber => lambda_of,
    };
    let nodes = sample_ppp(intensity, window, Layer::Backhaul, rng)?;
    Ok(BackhaulDraw { nodes, realized })
}

/// Thomas cluster process: macro PPP(λ1c), each macro spawning Poisson(λ1m)
/// micros displaced by an isotropic Gaussian with per-axis std `sigma`.
///
/// On a torus displaced micros wrap into the window; in a planar window
/// micros landing outside are dropped.
pub fn sample_cluster_bs<R: Rng + ?Sized>(
    lambda1c: f64,
    lambda1m: f64,
    sigma: f64,
    window: &Window,
    rng: &mut R,
) -> Result<MarkedBaseStationSet> {
    ensure_finite_nonneg("lambda1c", lambda1c)?;
    ensure_finite_nonneg("lambda1m", lambda1m)?;
    ensure_positive("sigma", sigma)?;
    let macros = sample_ppp(lambda1c, window, Layer::BaseStations, rng)?;
    let kernel = Normal::new(0.0, sigma).map_err(|e| Error::parameter("sigma", e.to_string()))?;
    let mut micros = Vec::new();
    let mut parent_of = Vec::new();
    for (parent, centre) in macros.points.iter().enumerate() {
        let n = poisson_count(lambda1m, rng);
        for _ in 0..n {
            let displaced = Point::new(centre.x + kernel.sample(rng), centre.y + kernel.sample(rng));
            if let Some(p) = window.fold(displaced) {
                micros.push(p);
                parent_of.push(parent);
            }
        }
    }
    Ok(MarkedBaseStationSet {
        macros,
        micros: PointSet::new(Layer::BaseStations, micros),
        parent_of,
    })
}

/// Uniform bucket grid over a point set, for nearest-neighbour queries
/// under the window metric.
#[derive(Debug, Clone)]
pub struct GridIndex<'a> {
    window: Window,
    points: &'a [Point],
    nx: usize,
    ny: usize,
    cell_w: f64,
    cell_h: f64,
    starts: Vec<usize>,
    order: Vec<usize>,
}

impl<'a> GridIndex<'a> {
    pub fn new(points: &'a [Point], window: &Window) -> Self {
        let n = points.len().max(1);
        let cells = (n / 2).max(1) as f64;
        let aspect = window.width / window.height;
        let nx = ((cells * aspect).sqrt().ceil() as usize).clamp(1, 4096);
        let ny = ((cells / nx as f64).ceil() as usize).clamp(1, 4096);
        let cell_w = window.width / nx as f64;
        let cell_h = window.height / ny as f64;
        let mut index = Self {
            window: *window,
            points,
            nx,
            ny,
            cell_w,
            cell_h,
            starts: vec![0; nx * ny + 1],
            order: Vec::with_capacity(points.len()),
        };
        let cell_of: Vec<usize> = points.iter().map(|&p| index.cell_of(p)).collect();
        for &c in &cell_of {
            index.starts[c + 1] += 1;
        }
        for c in 0..nx * ny {
            index.starts[c + 1] += index.starts[c];
        }
        let mut fill = index.starts.clone();
        index.order = vec![0; points.len()];
        for (i, &c) in cell_of.iter().enumerate() {
            index.order[fill[c]] = i;
            fill[c] += 1;
        }
        index
    }

    fn cell_coords(&self, p: Point) -> (usize, usize) {
        let cx = ((p.x / self.cell_w).floor().max(0.0) as usize).min(self.nx - 1);
        let cy = ((p.y / self.cell_h).floor().max(0.0) as usize).min(self.ny - 1);
        (cx, cy)
    }

    fn cell_of(&self, p: Point) -> usize {
        let (cx, cy) = self.cell_coords(p);
        cy * self.nx + cx
    }

    fn scan_cell(&self, cell: usize, q: Point, best: &mut (f64, usize)) {
        for &i in &self.order[self.starts[cell]..self.starts[cell + 1]] {
            let d2 = self.window.distance_sq(q, self.points[i]);
            if d2 < best.0 || (d2 == best.0 && i < best.1) {
                *best = (d2, i);
            }
        }
    }

    fn visit(&self, cx: isize, cy: isize, q: Point, best: &mut (f64, usize)) {
        let (nx, ny) = (self.nx as isize, self.ny as isize);
        let (x, y) = if self.window.wrap {
            (cx.rem_euclid(nx), cy.rem_euclid(ny))
        } else if (0..nx).contains(&cx) && (0..ny).contains(&cy) {
            (cx, cy)
        } else {
            return;
        };
        self.scan_cell(y as usize * self.nx + x as usize, q, best);
    }

    /// Index of and squared distance to the nearest indexed point; lowest index wins ties.
    pub fn nearest(&self, q: Point) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let (cx, cy) = self.cell_coords(q);
        let (cx, cy) = (cx as isize, cy as isize);
        let cell_min = self.cell_w.min(self.cell_h);
        let max_ring = if self.window.wrap {
            (self.nx.min(self.ny) - 1) / 2
        } else {
            self.nx.max(self.ny)
        };
        let mut best = (f64::INFINITY, usize::MAX);
        for k in 0..=max_ring as isize {
            if k == 0 {
                self.visit(cx, cy, q, &mut best);
            } else {
                for d in -k..=k {
                    self.visit(cx + d, cy - k, q, &mut best);
                    self.visit(cx + d, cy + k, q, &mut best);
                }
                for d in (-k + 1)..k {
                    self.visit(cx - k, cy + d, q, &mut best);
                    self.visit(cx + k, cy + d, q, &mut best);
                }
            }
            let reach = k as f64 * cell_min;
            if best.1 != usize::MAX && best.0 < reach * reach {
                return Some((best.1, best.0));
            }
        }
        if self.window.wrap {
            // Rings would start overlapping on a small torus; finish exhaustively.
            for (i, &p) in self.points.iter().enumerate() {
                let d2 = self.window.distance_sq(q, p);
                if d2 < best.0 || (d2 == best.0 && i < best.1) {
                    best = (d2, i);
                }
            }
        }
        Some((best.1, best.0))
    }
}

/// Assigns every lower point to its nearest upper point (Voronoi rule).
pub fn nearest_assign(lower: &PointSet, upper: &PointSet, window: &Window) -> Result<AssignmentMap> {
    if lower.is_empty() {
        return Ok(AssignmentMap {
            upper_of: Vec::new(),
            distance: Vec::new(),
        });
    }
    if upper.is_empty() {
        return Err(Error::EmptyUpperLayer {
            layer: upper.layer.name(),
            lower: lower.len(),
        });
    }
    let index = GridIndex::new(&upper.points, window);
    let (upper_of, distance) = lower
        .points
        .iter()
        .map(|&q| {
            let (i, d2) = index.nearest(q).expect("upper layer is nonempty");
            (i, d2.sqrt())
        })
        .unzip();
    Ok(AssignmentMap { upper_of, distance })
}

/// Nearest *other* point of the same set, for every point.
pub fn nearest_neighbour_distances(points: &PointSet, window: &Window) -> Vec<f64> {
    let index = GridIndex::new(&points.points, window);
    points
        .points
        .iter()
        .enumerate()
        .map(|(i, &q)| nearest_excluding(&index, q, i))
        .collect()
}

fn nearest_excluding(index: &GridIndex<'_>, q: Point, skip: usize) -> f64 {
    // Brute force is fine for the tiny sets where the ring search degenerates.
    if index.points.len() <= 1 {
        return f64::INFINITY;
    }
    let (cx, cy) = index.cell_coords(q);
    let (cx, cy) = (cx as isize, cy as isize);
    let cell_min = index.cell_w.min(index.cell_h);
    let max_ring = if index.window.wrap {
        (index.nx.min(index.ny) - 1) / 2
    } else {
        index.nx.max(index.ny)
    };
    let mut best = f64::INFINITY;
    let scan = |x: isize, y: isize, best: &mut f64| {
        let (nx, ny) = (index.nx as isize, index.ny as isize);
        let (x, y) = if index.window.wrap {
            (x.rem_euclid(nx), y.rem_euclid(ny))
        } else if (0..nx).contains(&x) && (0..ny).contains(&y) {
            (x, y)
        } else {
            return;
        };
        let cell = y as usize * index.nx + x as usize;
        for &i in &index.order[index.starts[cell]..index.starts[cell + 1]] {
            if i != skip {
                *best = best.min(index.window.distance_sq(q, index.points[i]));
            }
        }
    };
    for k in 0..=max_ring as isize {
        if k == 0 {
            scan(cx, cy, &mut best);
        } else {
            for d in -k..=k {
                scan(cx + d, cy - k, &mut best);
                scan(cx + d, cy + k, &mut best);
            }
            for d in (-k + 1)..k {
                scan(cx - k, cy + d, &mut best);
                scan(cx + k, cy + d, &mut best);
            }
        }
        let reach = k as f64 * cell_min;
        if best < reach * reach {
            return best.sqrt();
        }
    }
    if index.window.wrap {
        for (i, &p) in index.points.iter().enumerate() {
            if i != skip {
                best = best.min(index.window.distance_sq(q, p));
            }
        }
    }
    best.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{SeedSequence, Stream};
    use proptest::prelude::*;

    fn brute_force(lower: &PointSet, upper: &PointSet, window: &Window) -> Vec<usize> {
        lower
            .points
            .iter()
            .map(|&q| {
                let mut best = (f64::INFINITY, 0);
                for (i, &p) in upper.points.iter().enumerate() {
                    let d2 = window.distance_sq(q, p);
                    if d2 < best.0 {
                        best = (d2, i);
                    }
                }
                best.1
            })
            .collect()
    }

    #[test]
    fn zero_intensity_is_empty() {
        let mut rng = SeedSequence::new(1).rng(0, Stream::Users);
        let w = Window::torus(3.0).unwrap();
        assert!(sample_ppp(0.0, &w, Layer::Users, &mut rng).unwrap().is_empty());
    }

    #[test]
    fn negative_intensity_rejected() {
        let mut rng = SeedSequence::new(1).rng(0, Stream::Users);
        let w = Window::torus(1.0).unwrap();
        assert!(matches!(
            sample_ppp(-1.0, &w, Layer::Users, &mut rng),
            Err(Error::Parameter { .. })
        ));
        assert!(sample_backhaul(1.5, 1.0, 1.0, &w, &mut rng).is_err());
        assert!(sample_cluster_bs(1.0, 1.0, 0.0, &w, &mut rng).is_err());
    }

    #[test]
    fn ppp_mean_count() {
        // 10,000 seeds: sample mean within 3·sqrt(170/10000) of 170.
        let w = Window::torus(1.0).unwrap();
        let seeds = SeedSequence::new(11);
        let total: usize = (0..10_000)
            .map(|r| sample_ppp(170.0, &w, Layer::Users, &mut seeds.rng(r, Stream::Users)).unwrap().len())
            .sum();
        let mean = total as f64 / 10_000.0;
        assert!((mean - 170.0).abs() < 3.0 * (170.0f64 / 10_000.0).sqrt(), "mean {mean}");
    }

    #[test]
    fn ppp_counts_pass_chi_square() {
        // Counts from 2000 seeds binned against Poisson(20) probabilities.
        use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, DiscreteCDF, Poisson as PoissonDist};
        let w = Window::new(2.0, 2.0, true).unwrap();
        let seeds = SeedSequence::new(5);
        let n = 2000;
        let edges = [0usize, 14, 16, 18, 20, 22, 24, 26, usize::MAX];
        let mut observed = vec![0f64; edges.len() - 1];
        for r in 0..n {
            let c = sample_ppp(5.0, &w, Layer::Users, &mut seeds.rng(r, Stream::Users)).unwrap().len();
            let bin = edges.windows(2).position(|e| c >= e[0] && c < e[1]).unwrap();
            observed[bin] += 1.0;
        }
        let pois = PoissonDist::new(20.0).unwrap();
        let mut stat = 0.0;
        for (b, e) in edges.windows(2).enumerate() {
            let lo = if e[0] == 0 { 0.0 } else { pois.cdf(e[0] as u64 - 1) };
            let hi = if e[1] == usize::MAX { 1.0 } else { pois.cdf(e[1] as u64 - 1) };
            let expected = (hi - lo) * n as f64;
            stat += (observed[b] - expected).powi(2) / expected;
        }
        let _ = pois.pmf(0);
        let critical = ChiSquared::new((edges.len() - 2) as f64).unwrap().inverse_cdf(0.99);
        assert!(stat < critical, "chi2 {stat} >= {critical}");
    }

    #[test]
    fn backhaul_degenerate_mixtures() {
        let w = Window::torus(4.0).unwrap();
        let seeds = SeedSequence::new(2);
        for r in 0..50 {
            let mw = sample_backhaul(1.0, 5.0, 1.0, &w, &mut seeds.rng(r, Stream::Backhaul)).unwrap();
            assert_eq!(mw.realized, BackhaulTech::Microwave);
            let of = sample_backhaul(0.0, 1.0, 5.0, &w, &mut seeds.rng(r, Stream::Backhaul)).unwrap();
            assert_eq!(of.realized, BackhaulTech::OpticalFiber);
        }
    }

    #[test]
    fn backhaul_marginal_mean() {
        let w = Window::torus(2.0).unwrap();
        let seeds = SeedSequence::new(3);
        let n = 4000;
        let total: usize = (0..n)
            .map(|r| {
                sample_backhaul(0.5, 5.0, 5.0, &w, &mut seeds.rng(r, Stream::Backhaul))
                    .unwrap()
                    .nodes
                    .len()
            })
            .sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 20.0).abs() < 3.0 * (20.0f64 / n as f64).sqrt());
    }

    #[test]
    fn cluster_counts_and_parents() {
        let w = Window::torus(1.0).unwrap();
        let seeds = SeedSequence::new(4);
        let n = 4000;
        let mut total = 0;
        for r in 0..n {
            let bs = sample_cluster_bs(10.0, 4.0, 0.2, &w, &mut seeds.rng(r, Stream::BaseStations)).unwrap();
            assert_eq!(bs.parent_of.len(), bs.micros.len());
            assert!(bs.parent_of.iter().all(|&p| p < bs.macros.len()));
            assert!(bs.micros.points.iter().all(|&p| w.contains(p)));
            total += bs.len();
        }
        let mean = total as f64 / n as f64;
        // Var of a Thomas count = λ1c·A·(1 + 3λ1m + λ1m²) for Poisson offspring.
        let sd = (10.0f64 * (1.0 + 12.0 + 16.0) / n as f64).sqrt();
        assert!((mean - 50.0).abs() < 3.0 * sd, "mean {mean}");
    }

    #[test]
    fn cluster_without_members_is_ppp() {
        let w = Window::torus(2.0).unwrap();
        let mut rng = SeedSequence::new(9).rng(0, Stream::BaseStations);
        let bs = sample_cluster_bs(10.0, 0.0, 0.3, &w, &mut rng).unwrap();
        assert!(bs.micros.is_empty());
        assert!(!bs.macros.is_empty());
    }

    #[test]
    fn collapsed_kernel_keeps_micros_on_parent() {
        let w = Window::torus(1.0).unwrap();
        let mut rng = SeedSequence::new(9).rng(1, Stream::BaseStations);
        let bs = sample_cluster_bs(10.0, 4.0, 1e-12, &w, &mut rng).unwrap();
        for (m, &p) in bs.micros.points.iter().zip(&bs.parent_of) {
            assert!(w.distance(*m, bs.macros.points[p]) < 1e-9);
        }
    }

    #[test]
    fn assignment_examples() {
        let w = Window::new(10.0, 10.0, false).unwrap();
        let lower = PointSet::new(Layer::Users, vec![Point::new(0.0, 0.0)]);
        let upper = PointSet::new(Layer::BaseStations, vec![Point::new(1.0, 0.0), Point::new(0.0, 2.0)]);
        assert_eq!(nearest_assign(&lower, &upper, &w).unwrap().upper_of, vec![0]);

        let lower = PointSet::new(Layer::Users, vec![Point::new(5.0, 5.0)]);
        let upper = PointSet::new(
            Layer::BaseStations,
            vec![Point::new(9.0, 9.0), Point::new(6.0, 5.0), Point::new(1.0, 1.0), Point::new(4.0, 5.0)],
        );
        assert_eq!(nearest_assign(&lower, &upper, &w).unwrap().upper_of, vec![1]);

        let empty = PointSet::empty(Layer::BaseStations);
        assert!(matches!(
            nearest_assign(&lower, &empty, &w),
            Err(Error::EmptyUpperLayer { .. })
        ));
    }

    #[test]
    fn assignment_matches_brute_force() {
        for (seed, wrap) in [(1u64, true), (2, false), (3, true)] {
            let w = Window::new(3.0, 2.0, wrap).unwrap();
            let seeds = SeedSequence::new(seed);
            let lower = sample_ppp(100.0 / 6.0, &w, Layer::Users, &mut seeds.rng(0, Stream::Users)).unwrap();
            let upper = sample_ppp(5.0, &w, Layer::BaseStations, &mut seeds.rng(0, Stream::BaseStations)).unwrap();
            let map = nearest_assign(&lower, &upper, &w).unwrap();
            assert_eq!(map.upper_of, brute_force(&lower, &upper, &w));
            assert_eq!(map.counts(upper.len()).iter().sum::<usize>(), lower.len());
        }
    }

    #[test]
    fn torus_distance_bounds() {
        let w = Window::torus(4.0).unwrap();
        let a = Point::new(0.5, 0.5);
        let b = Point::new(3.8, 1.0);
        let planar = ((3.3f64).powi(2) + 0.25).sqrt();
        assert!(w.distance(a, b) < planar);
        let c = Point::new(1.5, 1.9);
        let planar_c = ((1.0f64).powi(2) + 1.4f64.powi(2)).sqrt();
        assert!((w.distance(a, c) - planar_c).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn assignment_is_permutation_equivariant(seed in 0u64..500, shift in 0usize..50) {
            let w = Window::torus(2.0).unwrap();
            let seeds = SeedSequence::new(seed);
            let lower = sample_ppp(20.0, &w, Layer::Users, &mut seeds.rng(0, Stream::Users)).unwrap();
            let upper = sample_ppp(3.0, &w, Layer::BaseStations, &mut seeds.rng(0, Stream::BaseStations)).unwrap();
            prop_assume!(!upper.is_empty() && !lower.is_empty());
            let map = nearest_assign(&lower, &upper, &w).unwrap();
            let mut rotated = lower.points.clone();
            let k = shift % rotated.len();
            rotated.rotate_left(k);
            let rotated = PointSet::new(Layer::Users, rotated);
            let map_rot = nearest_assign(&rotated, &upper, &w).unwrap();
            for i in 0..lower.len() {
                prop_assert_eq!(map_rot.upper_of[i], map.upper_of[(i + k) % lower.len()]);
            }
            prop_assert_eq!(nearest_assign(&lower, &upper, &w).unwrap(), map);
        }

        #[test]
        fn torus_never_exceeds_planar(ax in 0.0..5.0f64, ay in 0.0..3.0f64, bx in 0.0..5.0f64, by in 0.0..3.0f64) {
            let torus = Window::new(5.0, 3.0, true).unwrap();
            let plane = Window::new(5.0, 3.0, false).unwrap();
            let (a, b) = (Point::new(ax, ay), Point::new(bx, by));
            prop_assert!(torus.distance(a, b) <= plane.distance(a, b) + 1e-12);
            if (ax - bx).abs() < 2.5 && (ay - by).abs() < 1.5 {
                prop_assert!((torus.distance(a, b) - plane.distance(a, b)).abs() < 1e-12);
            }
        }

        #[test]
        fn nearest_neighbour_distances_match_brute_force(seed in 0u64..200) {
            let w = Window::torus(1.5).unwrap();
            let pts = sample_ppp(30.0, &w, Layer::BaseStations, &mut SeedSequence::new(seed).rng(0, Stream::Probe)).unwrap();
            let nn = nearest_neighbour_distances(&pts, &w);
            for (i, &p) in pts.points.iter().enumerate() {
                let brute = pts.points.iter().enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, &q)| w.distance(p, q))
                    .fold(f64::INFINITY, f64::min);
                prop_assert!((nn[i] - brute).abs() < 1e-12);
            }
        }
    }
}
