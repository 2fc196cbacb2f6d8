use cran_cost::config::{Config, ModelInputs};
use cran_cost::cost::{datacenter_cost, Scenario};
use cran_cost::geometry::Window;
use cran_cost::quadrature::QuadratureSettings;
use cran_cost::sim::{estimate_mean_dc_cost, simulate_realization, ComparisonReport, Normalization, SimSettings};
use proptest::prelude::*;

fn reference_scenario() -> Scenario {
    Config::new(ModelInputs::reference()).scenario().unwrap()
}

#[test]
fn doubling_the_window_leaves_the_mean_alone() {
    let s = reference_scenario();
    let small = estimate_mean_dc_cost(&s, &SimSettings::new(Window::torus(5.0).unwrap(), 400, 11)).unwrap();
    let large = estimate_mean_dc_cost(&s, &SimSettings::new(Window::torus(5.0 * 2f64.sqrt()).unwrap(), 400, 12)).unwrap();
    let se = small.std_error.hypot(large.std_error);
    assert!((small.mean - large.mean).abs() < 3.0 * se, "{} vs {} (se {se})", small.mean, large.mean);
}

#[test]
fn doubled_capacity_price_is_caught() {
    let s = reference_scenario();
    let settings = SimSettings::new(Window::torus(8.0).unwrap(), 300, 13);
    let estimate = estimate_mean_dc_cost(&s, &settings).unwrap();
    let closed = datacenter_cost(&s, &QuadratureSettings::default()).unwrap();
    let honest = ComparisonReport::new(&closed, &estimate, String::new());
    assert!(honest.pass, "{:?}", honest.terms);

    let mut wrong = closed;
    wrong.capacity_dc *= 2.0;
    let report = ComparisonReport::new(&wrong, &estimate, String::new());
    let term = report.terms.iter().find(|t| t.name == "capacity_dc").unwrap();
    assert!(!term.pass && term.z < -3.0, "z = {}", term.z);
    assert!(!report.pass);
}

#[test]
fn realized_count_normalization_is_close() {
    let s = reference_scenario();
    let mut settings = SimSettings::new(Window::torus(8.0).unwrap(), 200, 14);
    let expected = estimate_mean_dc_cost(&s, &settings).unwrap();
    settings.normalization = Normalization::RealizedCount;
    let realized = estimate_mean_dc_cost(&s, &settings).unwrap();
    assert!((expected.mean / realized.mean - 1.0).abs() < 0.02);
}

#[test]
fn estimates_do_not_depend_on_thread_count() {
    let s = reference_scenario();
    let mut settings = SimSettings::new(Window::torus(4.0).unwrap(), 16, 15);
    let a = estimate_mean_dc_cost(&s, &settings).unwrap();
    settings.execution = cran_cost::Execution::Sequential;
    let b = estimate_mean_dc_cost(&s, &settings).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_user_reaches_exactly_one_data_center(seed in any::<u64>(), rep in 0u64..1000) {
        let s = reference_scenario();
        let r = simulate_realization(&s, &SimSettings::new(Window::torus(2.0).unwrap(), 2, seed), rep).unwrap();
        let users = r.layers.users.len();
        prop_assert_eq!(r.users_per_bs.iter().sum::<usize>(), users);
        prop_assert_eq!(r.users_per_backhaul.iter().sum::<usize>(), users);
        prop_assert_eq!(r.users_per_dc.iter().sum::<usize>(), users);
        for (z, &d) in r.backhaul_to_dc.upper_of.iter().enumerate() {
            prop_assert!(d < r.layers.data_centers.len());
            prop_assert!(r.users_per_backhaul[z] <= r.users_per_dc[d]);
        }
    }
}
