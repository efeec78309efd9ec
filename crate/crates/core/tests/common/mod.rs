#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use sarima_core::{datasets, load_model, FittedModel, SarimaOrder, TimeSeries};

pub const SEASONAL_FORECAST: [f64; 12] = [
    444.3670, 418.2566, 446.2898, 488.2798, 499.2828, 562.2819, 649.2822, 633.2821, 535.2821,
    488.2821, 417.2821, 459.2821,
];

pub const ARMA_FORECAST: [f64; 12] = [
    453.9038, 443.0989, 432.9713, 423.4785, 414.5809, 406.2410, 398.4239, 391.0969, 384.2292,
    377.7920, 371.7583, 366.1029,
];

/// ARIMA(1,1,1)(0,1,0)[12] with the published coefficients.
pub fn frozen_seasonal() -> FittedModel {
    load_model(
        &[-0.3009, -0.0073],
        SarimaOrder::new(1, 1, 1, 0, 1, 0, 12),
        137.0,
        datasets::airline(),
    )
    .unwrap()
}

/// ARIMA(1,0,1) with mean, published coefficients.
pub fn frozen_arma() -> FittedModel {
    load_model(
        &[0.9373, 0.4264, 281.5426],
        SarimaOrder::arima(1, 0, 1),
        968.5,
        datasets::airline(),
    )
    .unwrap()
}

/// Stationary ARMA realization from the plain difference equation with
/// zero start-up values, `burn_in` leading values discarded. Coefficients
/// are the expanded (full-lag) vectors in the plus-sign MA convention.
pub fn generate_arma(
    phi: &[f64],
    theta: &[f64],
    mean: f64,
    sigma: f64,
    n: usize,
    seed: u64,
) -> Vec<f64> {
    let burn_in = 500;
    let total = n + burn_in;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e: Vec<f64> = (0..total)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            sigma * z
        })
        .collect();
    let mut y = vec![0.0; total];
    for t in 0..total {
        let mut v = e[t];
        for (i, c) in phi.iter().enumerate() {
            if t > i {
                v += c * y[t - 1 - i];
            }
        }
        for (j, c) in theta.iter().enumerate() {
            if t > j {
                v += c * e[t - 1 - j];
            }
        }
        y[t] = v;
    }
    y[burn_in..].iter().map(|v| v + mean).collect()
}

pub fn series(values: Vec<f64>) -> TimeSeries {
    TimeSeries::from_values(values).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
