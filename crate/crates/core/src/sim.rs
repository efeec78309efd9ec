//! Conditional simulation of series continuations.
//!
//! Given a fitted model and the series it was fitted to, future values are
//! generated by running the ARMA recursion forward on the differenced scale,
//! seeded with the newest differenced observations and the newest residuals,
//! and then integrating back to the original scale. Feeding zero innovations
//! yields the point forecast; feeding N(0, sigma2) draws yields a random
//! continuation from the conditional distribution of the future values.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::differencing::{self, DifferencingState};
use crate::error::{Error, Result};
use crate::rng;
use crate::series::FittedModel;

/// Runs `x_k = mu + sum phi_i x_{k-i} + e_k + sum theta_j e_{k-j}` forward.
///
/// `lag_seed` holds the `phi_full.len()` values preceding the first output,
/// oldest first; `shock_seed` likewise holds the `theta_full.len()` shocks
/// preceding the first innovation. Returns one value per innovation.
pub fn arma_recursion(
    phi_full: &[f64],
    theta_full: &[f64],
    intercept: f64,
    lag_seed: &[f64],
    shock_seed: &[f64],
    innovations: &[f64],
) -> Vec<f64> {
    let p = phi_full.len();
    let q = theta_full.len();
    assert_eq!(
        lag_seed.len(),
        p,
        "lag seed length must equal the AR lag count"
    );
    assert_eq!(
        shock_seed.len(),
        q,
        "shock seed length must equal the MA lag count"
    );

    let m = innovations.len();
    let mut x = Vec::with_capacity(p + m);
    x.extend_from_slice(lag_seed);
    let mut e = Vec::with_capacity(q + m);
    e.extend_from_slice(shock_seed);
    e.extend_from_slice(innovations);

    for k in 0..m {
        let mut v = e[q + k];
        for (j, th) in theta_full.iter().enumerate() {
            v += th * e[q + k - 1 - j];
        }
        for (i, ph) in phi_full.iter().enumerate() {
            v += ph * x[p + k - 1 - i];
        }
        v += intercept;
        x.push(v);
    }
    x.split_off(p)
}

/// Everything needed to continue a particular fitted series, precomputed
/// once and shared by all paths.
#[derive(Debug, Clone)]
pub struct ConditionalSimulator {
    phi_full: Vec<f64>,
    theta_full: Vec<f64>,
    intercept: f64,
    lag_seed: Vec<f64>,
    shock_seed: Vec<f64>,
    state: DifferencingState,
    innovation_sd: f64,
}

impl ConditionalSimulator {
    pub fn new(fitted: &FittedModel) -> Result<Self> {
        let model = fitted.model();
        let order = model.order();
        let data = fitted.data();
        let (d, sd, s) = (order.d, order.sd, order.period());
        let (dx, _) = differencing::difference(data.values(), d, sd, s)?;
        let state = DifferencingState::continuation(data.values(), d, sd, s)?;

        let p = model.phi_full().len();
        let q = model.theta_full().len();
        if dx.len() < p {
            return Err(Error::SeriesTooShort(format!(
                "the differenced series has {} values but {p} AR lags are needed",
                dx.len()
            )));
        }
        let residuals = fitted.residuals();
        if residuals.len() < q {
            return Err(Error::SeriesTooShort(format!(
                "{} residuals available but {q} MA lags are needed",
                residuals.len()
            )));
        }

        Ok(Self {
            phi_full: model.phi_full().to_vec(),
            theta_full: model.theta_full().to_vec(),
            intercept: model.intercept(),
            lag_seed: dx[dx.len() - p..].to_vec(),
            shock_seed: residuals[residuals.len() - q..].to_vec(),
            state,
            innovation_sd: model.sigma2().sqrt(),
        })
    }

    /// Continuation on the original scale for the given innovations.
    pub fn path(&self, innovations: &[f64]) -> Result<Vec<f64>> {
        if innovations.is_empty() {
            return Err(Error::HorizonZero);
        }
        let dx = arma_recursion(
            &self.phi_full,
            &self.theta_full,
            self.intercept,
            &self.lag_seed,
            &self.shock_seed,
            innovations,
        );
        differencing::integrate(&dx, &self.state)
    }

    /// Random path `index` of the ensemble seeded with `seed`.
    pub fn random_path(&self, m: usize, seed: u64, index: u64) -> Result<Vec<f64>> {
        let innovations = rng::normal_innovations(seed, index, m, self.innovation_sd);
        self.path(&innovations)
    }

    pub fn innovation_sd(&self) -> f64 {
        self.innovation_sd
    }
}

/// One continuation for explicitly supplied innovations (length = horizon).
pub fn simulate_path(fitted: &FittedModel, innovations: &[f64]) -> Result<Vec<f64>> {
    ConditionalSimulator::new(fitted)?.path(innovations)
}

/// Point forecasts: the continuation with all innovations set to zero.
pub fn forecast(fitted: &FittedModel, m: usize) -> Result<Vec<f64>> {
    simulate_path(fitted, &vec![0.0; m])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationRequest {
    pub horizon: usize,
    pub n_paths: usize,
    pub seed: Option<u64>,
    pub zero_innovations: bool,
}

impl SimulationRequest {
    pub fn new(horizon: usize, n_paths: usize, seed: Option<u64>) -> Result<Self> {
        let req = Self {
            horizon,
            n_paths,
            seed,
            zero_innovations: false,
        };
        req.validate()?;
        Ok(req)
    }

    /// The single zero-innovation path, i.e. the forecast.
    pub fn zero_innovations(horizon: usize) -> Result<Self> {
        let req = Self {
            horizon,
            n_paths: 1,
            seed: None,
            zero_innovations: true,
        };
        req.validate()?;
        Ok(req)
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::HorizonZero);
        }
        if self.n_paths == 0 {
            return Err(Error::InvalidRequest(
                "at least one path is required".into(),
            ));
        }
        if self.zero_innovations && self.n_paths != 1 {
            return Err(Error::InvalidRequest(
                "zero innovations produce a single path; use n_paths = 1".into(),
            ));
        }
        Ok(())
    }
}

/// An `horizon x n_paths` matrix of simulated values on the original scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationEnsemble {
    horizon: usize,
    n_paths: usize,
    /// Seed the innovations were drawn with; `None` for zero innovations.
    seed: Option<u64>,
    /// Row-major: `values[h * n_paths + r]`.
    values: Vec<f64>,
    mean: Vec<f64>,
    sd: Vec<f64>,
    start: f64,
    frequency: u32,
}

impl SimulationEnsemble {
    fn from_paths(paths: Vec<Vec<f64>>, seed: Option<u64>, start: f64, frequency: u32) -> Self {
        let n_paths = paths.len();
        let horizon = paths[0].len();
        let mut values = vec![0.0; horizon * n_paths];
        for (r, path) in paths.iter().enumerate() {
            for (h, v) in path.iter().enumerate() {
                values[h * n_paths + r] = *v;
            }
        }
        let (mean, sd) = values.chunks(n_paths).map(mean_sd).unzip();
        Self {
            horizon,
            n_paths,
            seed,
            values,
            mean,
            sd,
            start,
            frequency,
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Values of every path at horizon `h` (zero based).
    pub fn row(&self, h: usize) -> &[f64] {
        &self.values[h * self.n_paths..(h + 1) * self.n_paths]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.n_paths)
    }

    pub fn value(&self, h: usize, path: usize) -> f64 {
        self.values[h * self.n_paths + path]
    }

    pub fn path(&self, r: usize) -> Vec<f64> {
        (0..self.horizon).map(|h| self.value(h, r)).collect()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Per-horizon sample standard deviation (n - 1 denominator; 0 for one path).
    pub fn sd(&self) -> &[f64] {
        &self.sd
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn frequency(&self) -> u32 {
        self.frequency
    }

    pub fn time(&self, h: usize) -> f64 {
        self.start + h as f64 / f64::from(self.frequency)
    }
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

fn resolve_seed(req: &SimulationRequest) -> Option<u64> {
    if req.zero_innovations {
        None
    } else {
        Some(req.seed.unwrap_or_else(rand::random))
    }
}

fn run_ensemble<F>(
    fitted: &FittedModel,
    req: &SimulationRequest,
    collect: F,
) -> Result<SimulationEnsemble>
where
    F: FnOnce(&ConditionalSimulator, u64) -> Result<Vec<Vec<f64>>>,
{
    req.validate()?;
    let sim = ConditionalSimulator::new(fitted)?;
    let seed = resolve_seed(req);
    let paths = match seed {
        None => vec![sim.path(&vec![0.0; req.horizon])?],
        Some(seed) => collect(&sim, seed)?,
    };
    Ok(SimulationEnsemble::from_paths(
        paths,
        seed,
        fitted.data().continuation_start(),
        fitted.data().frequency(),
    ))
}

/// Runs the ensemble on the current thread.
pub fn simulate_ensemble_sequential(
    fitted: &FittedModel,
    req: &SimulationRequest,
) -> Result<SimulationEnsemble> {
    run_ensemble(fitted, req, |sim, seed| {
        (0..req.n_paths as u64)
            .map(|r| sim.random_path(req.horizon, seed, r))
            .collect()
    })
}

/// Runs the ensemble on the rayon thread pool. Output is identical to
/// [`simulate_ensemble_sequential`] for the same seed.
#[cfg(feature = "parallel")]
pub fn simulate_ensemble_parallel(
    fitted: &FittedModel,
    req: &SimulationRequest,
) -> Result<SimulationEnsemble> {
    run_ensemble(fitted, req, |sim, seed| {
        (0..req.n_paths)
            .into_par_iter()
            .with_min_len(64)
            .map(|r| sim.random_path(req.horizon, seed, r as u64))
            .collect()
    })
}

/// Simulates `req.n_paths` independent continuations. Uses the rayon pool
/// when the `parallel` feature is enabled.
pub fn simulate_ensemble(
    fitted: &FittedModel,
    req: &SimulationRequest,
) -> Result<SimulationEnsemble> {
    #[cfg(feature = "parallel")]
    {
        simulate_ensemble_parallel(fitted, req)
    }
    #[cfg(not(feature = "parallel"))]
    {
        simulate_ensemble_sequential(fitted, req)
    }
}

/// Empirical per-horizon quantiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileTable {
    pub probabilities: Vec<f64>,
    /// `rows[h][k]` is quantile `probabilities[k]` at horizon `h`.
    pub rows: Vec<Vec<f64>>,
}

/// Quantile by linear interpolation between order statistics (position
/// `(n - 1) * prob` in the sorted sample).
pub fn empirical_quantile(sorted: &[f64], prob: f64) -> f64 {
    let pos = (sorted.len() - 1) as f64 * prob;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

pub fn ensemble_summary(e: &SimulationEnsemble, quantiles: &[f64]) -> Result<QuantileTable> {
    if let Some(&bad) = quantiles.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(Error::InvalidProbability(bad));
    }
    let rows = e
        .rows()
        .map(|row| {
            let mut sorted = row.to_vec();
            sorted.sort_by(f64::total_cmp);
            quantiles
                .iter()
                .map(|&p| empirical_quantile(&sorted, p))
                .collect()
        })
        .collect();
    Ok(QuantileTable {
        probabilities: quantiles.to_vec(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::load_model;
    use crate::series::{SarimaOrder, TimeSeries};
    use approx::assert_abs_diff_eq;

    fn fitted(order: SarimaOrder, coefs: &[f64], sigma2: f64, values: Vec<f64>) -> FittedModel {
        load_model(
            coefs,
            order,
            sigma2,
            TimeSeries::from_values(values).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn ar1_forecast_decays() {
        let f = fitted(
            SarimaOrder::arima(1, 0, 0),
            &[0.5, 0.0],
            1.0,
            vec![3.0, 1.0, 8.0],
        );
        assert_eq!(forecast(&f, 3).unwrap(), vec![4.0, 2.0, 1.0]);
    }

    #[test]
    fn random_walk_forecast_is_flat() {
        let f = fitted(SarimaOrder::arima(0, 1, 0), &[], 1.0, vec![1.0, 4.0, 2.5]);
        assert_eq!(simulate_path(&f, &[0.0, 0.0]).unwrap(), vec![2.5, 2.5]);
        assert_eq!(forecast(&f, 5).unwrap(), vec![2.5; 5]);
    }

    #[test]
    fn white_noise_forecast_is_mean() {
        let f = fitted(
            SarimaOrder::arima(0, 0, 0),
            &[281.5426],
            4.0,
            vec![250.0, 300.0, 290.0],
        );
        assert_eq!(forecast(&f, 4).unwrap(), vec![281.5426; 4]);
    }

    #[test]
    fn random_walk_path_adds_innovations() {
        let f = fitted(SarimaOrder::arima(0, 1, 0), &[], 1.0, vec![1.0, 2.0]);
        assert_eq!(
            simulate_path(&f, &[0.5, -1.0, 2.0]).unwrap(),
            vec![2.5, 1.5, 3.5]
        );
    }

    #[test]
    fn horizon_zero_and_short_series() {
        let f = fitted(SarimaOrder::arima(0, 1, 0), &[], 1.0, vec![1.0, 2.0]);
        assert!(matches!(forecast(&f, 0), Err(Error::HorizonZero)));
        assert!(SimulationRequest::new(0, 3, None).is_err());
        assert!(SimulationRequest::new(3, 0, None).is_err());
    }

    #[test]
    fn recursion_with_ma_terms() {
        // x_k = 1 + 0.5 x_{k-1} + e_k + 0.25 e_{k-1}
        let out = arma_recursion(&[0.5], &[0.25], 1.0, &[2.0], &[4.0], &[1.0, 0.0]);
        assert_abs_diff_eq!(out[0], 1.0 + 1.0 + 1.0 + 1.0);
        assert_abs_diff_eq!(out[1], 1.0 + 2.0 + 0.0 + 0.25);
    }

    #[test]
    fn zero_innovation_ensemble_is_forecast() {
        let f = fitted(
            SarimaOrder::arima(1, 1, 1),
            &[0.4, 0.2],
            2.0,
            (0..30).map(|t| (t as f64).sin() + t as f64).collect(),
        );
        let req = SimulationRequest::zero_innovations(6).unwrap();
        let e = simulate_ensemble(&f, &req).unwrap();
        assert_eq!(e.path(0), forecast(&f, 6).unwrap());
        assert_eq!(e.sd(), &[0.0; 6]);
        assert!(SimulationRequest {
            horizon: 2,
            n_paths: 3,
            seed: None,
            zero_innovations: true
        }
        .validate()
        .is_err());
    }

    #[test]
    fn seeded_ensembles_agree() {
        let f = fitted(
            SarimaOrder::arima(1, 1, 1),
            &[0.4, 0.2],
            2.0,
            (0..30).map(|t| (t as f64).cos() + t as f64).collect(),
        );
        let req = SimulationRequest::new(5, 300, Some(99)).unwrap();
        let a = simulate_ensemble_sequential(&f, &req).unwrap();
        let b = simulate_ensemble(&f, &req).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.seed(), Some(99));
        assert_eq!(a.start(), 31.0);
    }

    #[test]
    fn unseeded_ensemble_records_its_seed() {
        let f = fitted(SarimaOrder::arima(0, 1, 0), &[], 1.0, vec![1.0, 2.0, 3.0]);
        let e = simulate_ensemble(&f, &SimulationRequest::new(2, 4, None).unwrap()).unwrap();
        let seed = e.seed().unwrap();
        let again =
            simulate_ensemble(&f, &SimulationRequest::new(2, 4, Some(seed)).unwrap()).unwrap();
        assert_eq!(e, again);
    }

    #[test]
    fn quantiles() {
        let constant = SimulationEnsemble::from_paths(vec![vec![7.0]; 5], Some(1), 0.0, 1);
        let t = ensemble_summary(&constant, &[0.1, 0.5, 0.9]).unwrap();
        assert_eq!(t.rows[0], vec![7.0; 3]);

        let two = SimulationEnsemble::from_paths(vec![vec![1.0], vec![3.0]], Some(1), 0.0, 1);
        assert_eq!(ensemble_summary(&two, &[0.5]).unwrap().rows[0], vec![2.0]);

        assert!(matches!(
            ensemble_summary(&two, &[1.0]),
            Err(Error::InvalidProbability(_))
        ));
        assert!(matches!(
            ensemble_summary(&two, &[0.0]),
            Err(Error::InvalidProbability(_))
        ));
    }

    #[test]
    fn ensemble_stats_are_recomputable() {
        let paths = vec![vec![1.0, 10.0], vec![2.0, 20.0], vec![6.0, 30.0]];
        let e = SimulationEnsemble::from_paths(paths, Some(1), 5.0, 4);
        assert_eq!(e.mean(), &[3.0, 20.0]);
        assert_abs_diff_eq!(e.sd()[0], (7.0f64).sqrt(), epsilon = 1e-12);
        assert_eq!(e.row(1), &[10.0, 20.0, 30.0]);
        assert_eq!(e.time(2), 5.5);
    }
}
