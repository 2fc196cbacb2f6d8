//! Independent checks of the radial-integral distance laws: brute-force
//! grid integration and point-process simulation.

use std::f64::consts::PI;

use cran_cost::exec::{map_indexed, Execution};
use cran_cost::geometry::{nearest_assign, nearest_neighbour_distances, sample_cluster_bs, sample_ppp, Layer, Point, Window};
use cran_cost::palm::{
    cluster_contact_moment, cluster_nn_moment, j_function, j_function_independent_mixture, void_probability,
    ClusterParams,
};
use cran_cost::quadrature::QuadratureSettings;
use cran_cost::seed::{SeedSequence, Stream};
use rand::Rng;
use statrs::function::erf::erf;

/// Gaussian mass on the disc `b(o, r)` from a centre at `(cx, cy)`, summed
/// along vertical chords with `x = r sin t`.
fn chord_mass(cx: f64, cy: f64, sigma: f64, r: f64) -> f64 {
    let n = 64;
    let h = PI / n as f64;
    let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
    let k = 1.0 / (sigma * 2f64.sqrt());
    let mut acc = 0.0;
    for i in 0..n {
        let t = -0.5 * PI + (i as f64 + 0.5) * h;
        let x = r * t.sin();
        let half = r * t.cos();
        let along = norm * (-0.5 * ((x - cx) / sigma).powi(2)).exp();
        let across = 0.5 * (erf((half - cy) * k) + erf((half + cy) * k));
        acc += along * across * half * h;
    }
    acc
}

/// Distance from 0 to the interval `[lo, lo + h]`.
fn axis_gap(lo: f64, h: f64) -> f64 {
    if lo <= 0.0 && lo + h >= 0.0 {
        0.0
    } else {
        lo.abs().min((lo + h).abs())
    }
}

/// Both J forms by a midpoint sum over a square grid of parent offsets.
/// Cells cut by the disc boundary are refined so the indicator is resolved.
fn grid_j(params: &ClusterParams, r: f64) -> (f64, f64) {
    let (m, sigma) = (params.lambda1m, params.sigma);
    let half_width = 8.0 * sigma;
    let cells = 400;
    let h = 2.0 * half_width / cells as f64;
    let density = |x: f64, y: f64| (-(x * x + y * y) / (2.0 * sigma * sigma)).exp() / (2.0 * PI * sigma * sigma);
    let mut mixture = 0.0;
    let mut outside = 0.0;
    for i in 0..cells {
        for j in 0..cells {
            let x0 = -half_width + i as f64 * h;
            let y0 = -half_width + j as f64 * h;
            let (xc, yc) = (x0 + 0.5 * h, y0 + 0.5 * h);
            let weight = density(xc, yc) * (-m * chord_mass(xc, yc, sigma, r)).exp() * h * h;
            mixture += weight;
            let near = axis_gap(x0, h).hypot(axis_gap(y0, h));
            let far = x0.abs().max((x0 + h).abs()).hypot(y0.abs().max((y0 + h).abs()));
            if near > r {
                outside += weight;
            } else if far > r {
                let sub = 16;
                let hs = h / sub as f64;
                for a in 0..sub {
                    for b in 0..sub {
                        let (xs, ys) = (x0 + (a as f64 + 0.5) * hs, y0 + (b as f64 + 0.5) * hs);
                        if xs.hypot(ys) > r {
                            outside += density(xs, ys) * (-m * chord_mass(xs, ys, sigma, r)).exp() * hs * hs;
                        }
                    }
                }
            }
        }
    }
    let w_parent = 1.0 / (1.0 + m);
    let own = (-m * chord_mass(0.0, 0.0, sigma, r)).exp();
    (
        w_parent * own + (1.0 - w_parent) * outside,
        w_parent + (1.0 - w_parent) * mixture,
    )
}

#[test]
fn j_function_matches_grid_integration() {
    let quad = QuadratureSettings::default();
    for params in [
        ClusterParams::new(1.0, 1.0, 1.0).unwrap(),
        ClusterParams::new(2.0, 3.0, 0.5).unwrap(),
    ] {
        for r in [0.3, 1.0] {
            let (exact, mixture) = grid_j(&params, r);
            let got = j_function(r, &params, &quad).unwrap();
            let got_mixture = j_function_independent_mixture(r, &params, &quad).unwrap();
            assert!(got > 0.0 && got <= 1.0);
            assert!((got - exact).abs() < 2e-5, "exact J {got} vs grid {exact} at {params:?}, r={r}");
            assert!((got_mixture - mixture).abs() < 2e-5, "mixture J {got_mixture} vs grid {mixture}");
        }
    }
}

#[test]
fn void_probability_matches_empirical_frequency() {
    let params = ClusterParams::new(1.0, 4.0, 0.707).unwrap();
    let r = 0.5;
    let want = void_probability(r, &params, &QuadratureSettings::default()).unwrap();
    assert!(want > 0.0 && want < 1.0);

    // 25 probe discs per realization on a 2 km lattice with a random offset.
    let window = Window::torus(10.0).unwrap();
    let seeds = SeedSequence::new(20_240_501);
    let reps = 10_000;
    let empty: Vec<usize> = map_indexed(Execution::Parallel, reps, |rep| {
        let rep = rep as u64;
        let bs = sample_cluster_bs(1.0, 4.0, 0.707, &window, &mut seeds.rng(rep, Stream::BaseStations)).unwrap();
        let all = bs.combined();
        let mut probe_rng = seeds.rng(rep, Stream::Probe);
        let (ox, oy): (f64, f64) = (probe_rng.random::<f64>() * 2.0, probe_rng.random::<f64>() * 2.0);
        let mut count = 0;
        for i in 0..5 {
            for j in 0..5 {
                let centre = Point::new(ox + 2.0 * i as f64, oy + 2.0 * j as f64);
                if all.points.iter().all(|&p| window.distance(centre, p) > r) {
                    count += 1;
                }
            }
        }
        count
    });
    let freq = empty.iter().sum::<usize>() as f64 / (25 * reps) as f64;
    assert!((freq - want).abs() < 0.005, "empirical {freq} vs {want}");
}

/// Ratio estimator `ΣY/ΣN` with its delta-method standard error.
fn ratio_estimate(samples: &[(f64, f64)]) -> (f64, f64) {
    let n = samples.len() as f64;
    let (sy, sn) = samples.iter().fold((0.0, 0.0), |(a, b), &(y, c)| (a + y, b + c));
    let ratio = sy / sn;
    let mean_n = sn / n;
    let var = samples.iter().map(|&(y, c)| (y - ratio * c).powi(2)).sum::<f64>() / (n - 1.0);
    (ratio, (var / n).sqrt() / mean_n)
}

#[test]
fn nearest_neighbour_moment_matches_simulation() {
    let params = ClusterParams::new(10.0, 4.0, 0.707).unwrap();
    let quad = QuadratureSettings::default();
    let want = cluster_nn_moment(2.0, &params, &quad).unwrap();
    let window = Window::torus(5.0).unwrap();
    let seeds = SeedSequence::new(77);
    let samples = map_indexed(Execution::Parallel, 10_000, |rep| {
        let bs = sample_cluster_bs(10.0, 4.0, 0.707, &window, &mut seeds.rng(rep as u64, Stream::BaseStations)).unwrap();
        let d = nearest_neighbour_distances(&bs.combined(), &window);
        (d.iter().map(|x| x * x).sum::<f64>(), d.len() as f64)
    });
    let (mean, se) = ratio_estimate(&samples);
    assert!((mean - want).abs() < 3.0 * se, "simulated {mean} ± {se} vs {want}");
}

#[test]
fn contact_moment_matches_simulation() {
    let params = ClusterParams::new(10.0, 4.0, 0.707).unwrap();
    let quad = QuadratureSettings::default();
    let window = Window::torus(5.0).unwrap();
    let seeds = SeedSequence::new(78);
    for beta in [2.0, 4.0] {
        let want = cluster_contact_moment(beta, &params, &quad).unwrap();
        let samples = map_indexed(Execution::Parallel, 4_000, |rep| {
            let rep = rep as u64;
            let bs = sample_cluster_bs(10.0, 4.0, 0.707, &window, &mut seeds.rng(rep, Stream::BaseStations)).unwrap();
            let users = sample_ppp(40.0, &window, Layer::Users, &mut seeds.rng(rep, Stream::Users)).unwrap();
            let map = nearest_assign(&users, &bs.combined(), &window).unwrap();
            (map.distance.iter().map(|d| d.powf(beta)).sum::<f64>(), map.len() as f64)
        });
        let (mean, se) = ratio_estimate(&samples);
        assert!((mean - want).abs() < 3.0 * se, "β={beta}: simulated {mean} ± {se} vs {want}");
    }
}
