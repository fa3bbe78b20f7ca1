use qreset_core::ensemble::{build_density, evolve_until, renewal_density, step_probabilities, EnsembleState};
use qreset_core::linalg::{one_norm, Matrix};
use qreset_core::models::GateModel;
use qreset_core::observables::Observable;
use qreset_core::ResetSchedule;
use std::f64::consts::PI;

fn schedules() -> Vec<ResetSchedule> {
    vec![
        ResetSchedule::poisson(0.3).unwrap(),
        ResetSchedule::poisson(0.02).unwrap(),
        ResetSchedule::power_law(0.2, 0.2).unwrap(),
        ResetSchedule::power_law(0.2, 1.0).unwrap(),
        ResetSchedule::power_law(0.9, 2.0).unwrap(),
        ResetSchedule::deterministic(1).unwrap(),
        ResetSchedule::deterministic(7).unwrap(),
    ]
}

#[test]
fn probability_is_conserved() {
    for s in schedules() {
        let mut p = vec![1.0];
        for t in 1..=1000 {
            p = step_probabilities(&p, &s).unwrap();
            let total: f64 = p.iter().sum();
            assert!((total - 1.0).abs() < 1e-12, "{s} t={t}: {total}");
            assert!(p.iter().all(|&x| x >= 0.0));
            assert_eq!(p.len(), t + 1);
        }
    }
}

#[test]
fn last_renewal_identity() {
    for s in schedules() {
        let rates: Vec<f64> = (0..300).map(|n| s.prob_at(n).unwrap()).collect();
        let mut history = vec![vec![1.0]];
        for _ in 0..300 {
            let next = step_probabilities(history.last().unwrap(), &s).unwrap();
            history.push(next);
        }
        for (t, p) in history.iter().enumerate() {
            let mut survival = 1.0;
            for n in 0..=t {
                let expected = if n == t { survival } else { history[t - n][0] * survival };
                assert!((p[n] - expected).abs() < 1e-13, "{s} t={t} n={n}");
                if n < t {
                    survival *= 1.0 - rates[n];
                }
            }
        }
    }
}

#[test]
fn recursion_and_renewal_agree() {
    let models = [GateModel::<f64>::noninteracting(PI / 4.0), GateModel::<f64>::entangling(0.9)];
    for m in &models {
        for s in schedules() {
            let mut p = vec![1.0];
            for t in 0..=100 {
                if t > 0 {
                    p = step_probabilities(&p, &s).unwrap();
                }
                if t % 10 != 0 && t > 12 {
                    continue;
                }
                let branches: Vec<_> = (0..=t).map(|n| m.branch(n)).collect();
                let a = build_density(&p, &branches).unwrap();
                let b = renewal_density(&s, m, t).unwrap();
                let d = (&a - &b).max_abs();
                assert!(d < 1e-12, "{s} t={t}: {d}");
            }
        }
    }
}

#[test]
fn ensemble_state_matches_plain_recursion() {
    let m = GateModel::<f64>::entangling(1.3);
    let s = ResetSchedule::power_law(0.2, 1.0).unwrap();
    let mut st = EnsembleState::new(&m);
    for _ in 0..60 {
        st.step(&s).unwrap();
    }
    let exact = renewal_density(&s, &m, 60).unwrap();
    assert!(one_norm(&(st.rho() - &exact)) < 1e-11);
}

#[test]
fn states_stay_physical() {
    let m = GateModel::<f64>::entangling(PI / 5.0 + 0.013);
    for s in schedules() {
        let mut st = EnsembleState::new(&m);
        for _ in 0..150 {
            st.step(&s).unwrap();
            assert!(st.rho().is_density(1e-10), "{s}");
        }
    }
}

#[test]
fn purely_unitary_never_settles() {
    let m = GateModel::<f64>::noninteracting(1.0);
    let s = ResetSchedule::poisson(0.0).unwrap();
    let rec = evolve_until(&m, &s, 1e-10, 1000, &[Observable::Magnetization]).unwrap();
    assert!(!rec.converged);
    assert_eq!(rec.steps_used, 1000);
    let min = rec.delta_norms.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(min > 1e-3, "{min}");
}

#[test]
fn poisson_reaches_steady_state() {
    let m = GateModel::<f64>::noninteracting(0.6);
    let s = ResetSchedule::poisson(0.5).unwrap();
    let rec = evolve_until(&m, &s, 1e-10, 10_000, &[Observable::Magnetization]).unwrap();
    assert!(rec.converged);
    assert_eq!(rec.times.len(), rec.delta_norms.len());
    assert!(rec.delta_norms.iter().all(|&d| d >= 0.0));
    // <sigma_z> of each qubit is f(r, 2 theta)
    let f = qreset_core::observables::analytic_f(0.5, 1.2).unwrap();
    let m_final = *rec.trace("magnetization").unwrap().last().unwrap();
    assert!((m_final - 2.0 * f).abs() < 1e-9);
}

#[test]
fn deterministic_is_periodic() {
    let m = GateModel::<f64>::noninteracting(0.4);
    let s = ResetSchedule::deterministic(3).unwrap();
    let mut st = EnsembleState::new(&m);
    let mut seen: Vec<Matrix<f64>> = vec![st.rho().clone()];
    for _ in 0..8 {
        st.step(&s).unwrap();
        seen.push(st.rho().clone());
    }
    assert!((&seen[4] - &seen[0]).max_abs() < 1e-14);
    assert!((&seen[8] - &seen[4]).max_abs() < 1e-14);
    let rec = evolve_until(&m, &s, 1e-10, 200, &[]).unwrap();
    assert!(!rec.converged);
}
