mod common;

use approx::assert_abs_diff_eq;
use common::*;
use sarima_core::sim::ensemble_summary;
use sarima_core::*;

#[test]
fn airline_seasonal_january() {
    let fc = forecast(&frozen_seasonal(), 1).unwrap();
    assert_abs_diff_eq!(fc[0], 444.3670, epsilon = 1.0);
}

#[test]
fn airline_arma_july() {
    let fc = forecast(&frozen_arma(), 12).unwrap();
    assert_abs_diff_eq!(fc[6], 398.4239, epsilon = 1.0);
}

#[test]
fn continuation_time_base() {
    let e = simulate_ensemble(
        &frozen_seasonal(),
        &SimulationRequest::new(12, 5, Some(4321)).unwrap(),
    )
    .unwrap();
    assert_eq!(e.horizon(), 12);
    assert_eq!(e.n_paths(), 5);
    assert_eq!(e.start(), 1961.0);
    assert_eq!(e.frequency(), 12);
}

fn moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = xs.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
}

#[test]
fn marginals_look_normal() {
    // Skewness and excess kurtosis have standard errors sqrt(6/n), sqrt(24/n).
    let n = 10_000;
    let e = simulate_ensemble(
        &frozen_seasonal(),
        &SimulationRequest::new(12, n, Some(11)).unwrap(),
    )
    .unwrap();
    let (se_skew, se_kurt) = ((6.0 / n as f64).sqrt(), (24.0 / n as f64).sqrt());
    for h in [0, 5, 11] {
        let (skew, kurt) = moments(e.row(h));
        assert!(skew.abs() < 4.0 * se_skew, "h={h} skew {skew}");
        assert!(kurt.abs() < 4.0 * se_kurt, "h={h} kurtosis {kurt}");
    }
}

#[test]
fn uncertainty_grows_with_horizon() {
    let fitted = fit(
        &datasets::airline(),
        SarimaOrder::new(1, 1, 1, 0, 1, 0, 12),
        &FitConfig::default(),
    )
    .unwrap();
    let e = simulate_ensemble(
        &fitted,
        &SimulationRequest::new(12, 10_000, Some(3)).unwrap(),
    )
    .unwrap();
    for h in 1..12 {
        assert!(
            e.sd()[h] >= 0.99 * e.sd()[h - 1],
            "sd fell at h={h}: {:?}",
            e.sd()
        );
    }
}

#[test]
fn paths_are_affine_in_innovations() {
    let fitted = frozen_seasonal();
    let fc = forecast(&fitted, 6).unwrap();
    let a = [1.0, -2.0, 0.5, 3.0, 0.0, 1.5];
    let b = [-0.5, 0.25, 2.0, -1.0, 4.0, 0.0];
    let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
    let pa = simulate_path(&fitted, &a).unwrap();
    let pb = simulate_path(&fitted, &b).unwrap();
    let ps = simulate_path(&fitted, &sum).unwrap();
    for h in 0..6 {
        assert_abs_diff_eq!(
            ps[h] - fc[h],
            (pa[h] - fc[h]) + (pb[h] - fc[h]),
            epsilon = 1e-9
        );
    }
}

#[test]
fn path_depends_only_on_seed_and_index() {
    let fitted = frozen_arma();
    let small =
        simulate_ensemble(&fitted, &SimulationRequest::new(4, 5, Some(42)).unwrap()).unwrap();
    let large =
        simulate_ensemble(&fitted, &SimulationRequest::new(4, 500, Some(42)).unwrap()).unwrap();
    for r in 0..5 {
        assert_eq!(small.path(r), large.path(r));
    }
}

#[cfg(feature = "parallel")]
#[test]
fn thread_count_does_not_change_output() {
    let fitted = frozen_seasonal();
    let req = SimulationRequest::new(12, 3000, Some(4321)).unwrap();
    let reference = simulate_ensemble_sequential(&fitted, &req).unwrap();
    for threads in [1, 2, 7] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let e = pool
            .install(|| simulate_ensemble_parallel(&fitted, &req))
            .unwrap();
        assert_eq!(e, reference, "{threads} threads");
    }
}

#[test]
fn normal_quantile_from_white_noise() {
    let fitted = load_model(
        &[0.0],
        SarimaOrder::arima(0, 0, 0),
        1.0,
        series(vec![0.0, 1.0]),
    )
    .unwrap();
    let e = simulate_ensemble(
        &fitted,
        &SimulationRequest::new(1, 10_000, Some(8)).unwrap(),
    )
    .unwrap();
    let q = ensemble_summary(&e, &[0.975]).unwrap();
    assert_abs_diff_eq!(q.rows[0][0], 1.96, epsilon = 0.08);
}

#[test]
fn residuals_replay_the_observed_tail() {
    // Condition on a prefix, then feed the residuals of the full series as
    // innovations: the continuation must be the observed remainder.
    let order = SarimaOrder::new(1, 1, 1, 0, 1, 0, 12);
    let coefs = [-0.3009, -0.0073];
    let full = datasets::airline();
    let whole = load_model(&coefs, order, 137.0, full.clone()).unwrap();
    let cut = 120;
    let prefix = TimeSeries::new(
        full.values()[..cut].to_vec(),
        full.start(),
        full.frequency(),
    )
    .unwrap();
    let head = load_model(&coefs, order, 137.0, prefix).unwrap();

    let loss = order.differencing_loss();
    let innovations = &whole.residuals()[cut - loss..];
    let path = simulate_path(&head, innovations).unwrap();
    let err = max_abs_diff(&path, &full.values()[cut..]);
    assert!(err < 1e-9, "max error {err}");
}

#[test]
fn residual_mean_is_near_zero_for_a_good_fit() {
    let x = generate_arma(&[0.6], &[0.3], 10.0, 2.0, 2000, 77);
    let f = fit(
        &series(x),
        SarimaOrder::arima(1, 0, 1),
        &FitConfig::default(),
    )
    .unwrap();
    let p = f.model().phi_full().len();
    let used = &f.residuals()[p..];
    let mean = used.iter().sum::<f64>() / used.len() as f64;
    assert!(
        mean.abs() < 3.0 * (f.model().sigma2() / used.len() as f64).sqrt(),
        "residual mean {mean}"
    );
}

#[test]
fn short_history_is_rejected() {
    // 13 AR lags need more than 13 differenced values.
    let data = series((0..12).map(f64::from).collect());
    let r = load_model(
        &[0.1, 0.2],
        SarimaOrder::new(1, 0, 0, 1, 0, 0, 12),
        1.0,
        data,
    );
    assert!(matches!(r, Err(Error::SeriesTooShort(_))));
}
