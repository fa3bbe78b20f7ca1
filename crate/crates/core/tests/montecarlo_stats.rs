use qreset_core::ensemble::EnsembleState;
use qreset_core::linalg::one_norm;
use qreset_core::models::GateModel;
use qreset_core::montecarlo::{empirical_density, empirical_distribution, exact_distribution, total_variation};
use qreset_core::ResetSchedule;

#[test]
fn tv_shrinks_like_inverse_root_samples() {
    let s = ResetSchedule::power_law(0.2, 2.0).unwrap();
    let exact = exact_distribution(&s, 20).unwrap();
    // average over seeds so the ratio is not at the mercy of one draw
    let mean_tv = |samples: u64| -> f64 {
        (0..8)
            .map(|seed| total_variation(&empirical_distribution(&s, 20, samples, 1000 + seed).unwrap(), &exact))
            .sum::<f64>()
            / 8.0
    };
    let ratio = mean_tv(10_000) / mean_tv(1_000_000);
    assert!((5.0..=20.0).contains(&ratio), "{ratio}");
}

#[test]
fn power_law_histogram() {
    let s = ResetSchedule::power_law(0.2, 2.0).unwrap();
    let samples = 1_000_000;
    let emp = empirical_distribution(&s, 50, samples, 42).unwrap();
    let tv = total_variation(&emp, &exact_distribution(&s, 50).unwrap());
    assert!(tv < 5.0 * (50.0 / samples as f64).sqrt(), "{tv}");
}

#[test]
fn density_from_samples() {
    let m = GateModel::<f64>::entangling(0.9);
    let s = ResetSchedule::poisson(0.3).unwrap();
    let samples = 100_000;
    let emp = empirical_distribution(&s, 12, samples, 9).unwrap();
    let mut st = EnsembleState::new(&m);
    for _ in 0..12 {
        st.step(&s).unwrap();
    }
    let d = one_norm(&(&empirical_density(&m, &emp).unwrap() - st.rho()));
    assert!(d < 10.0 * (4.0 / samples as f64).sqrt(), "{d}");
}

#[test]
fn chunking_does_not_change_results() {
    let s = ResetSchedule::poisson(0.4).unwrap();
    let a = empirical_distribution(&s, 10, 10_000, 5).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| empirical_distribution(&s, 10, 10_000, 5).unwrap());
    assert_eq!(a, b);
}
