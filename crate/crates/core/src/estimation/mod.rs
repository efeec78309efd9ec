//! Conditional-sum-of-squares (CSS) estimation.
//!
//! Residuals follow the classical conditional recursion: the first
//! `phi_full.len()` differenced values only serve as lags, and shocks before
//! the first emitted residual are taken as zero. The objective is minimized
//! with Nelder–Mead started from the sample mean, Yule–Walker AR values and
//! zero MA values.

mod nelder_mead;
mod yule_walker;

pub use nelder_mead::{NelderMead, NelderMeadResult};
pub use yule_walker::{
    autocovariances, is_invertible, is_stationary, levinson_durbin, yule_walker,
};

use serde::{Deserialize, Serialize};

use crate::differencing;
use crate::error::{Error, Result};
use crate::series::{FitInfo, FittedModel, SarimaModel, SarimaOrder, TimeSeries};

/// Floor applied to the estimated innovation variance.
pub const SIGMA2_FLOOR: f64 = 1e-12;

pub const OPTIMIZER_NAME: &str = "nelder-mead";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub max_iterations: usize,
    pub tolerance: f64,
    /// `None` means: estimate a mean exactly when the model has no differencing.
    pub include_mean: Option<bool>,
    /// Start vector in `phi, theta, sphi, stheta[, mean]` order.
    pub initial_coefficients: Option<Vec<f64>>,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            tolerance: 1e-8,
            include_mean: None,
            initial_coefficients: None,
        }
    }
}

impl FitConfig {
    fn wants_mean(&self, order: &SarimaOrder) -> Result<bool> {
        match self.include_mean {
            None => Ok(order.allows_mean()),
            Some(true) if !order.allows_mean() => Err(Error::InvalidModel(
                "a mean cannot be estimated for a differenced model".into(),
            )),
            Some(flag) => Ok(flag),
        }
    }
}

/// CSS residuals of `dx` under `model`, aligned with `dx`.
///
/// `e_t = dx_t - mu - sum phi*_i dx_{t-i} - sum theta*_j e_{t-j}` for
/// `t >= phi_full.len()` (zero based); earlier entries are zero padding.
pub fn css_residuals(model: &SarimaModel, dx: &[f64]) -> Result<Vec<f64>> {
    let phi = model.phi_full();
    let theta = model.theta_full();
    let p = phi.len();
    if dx.len() <= p {
        return Err(Error::SeriesTooShort(format!(
            "{} differenced values leave no residuals with {p} AR lags",
            dx.len()
        )));
    }
    let mu = model.intercept();
    let mut e = vec![0.0; dx.len()];
    for t in p..dx.len() {
        let mut v = dx[t] - mu;
        for (i, c) in phi.iter().enumerate() {
            v -= c * dx[t - 1 - i];
        }
        for (j, c) in theta.iter().enumerate().take(t) {
            v -= c * e[t - 1 - j];
        }
        e[t] = v;
    }
    Ok(e)
}

/// Sum of squared emitted residuals and their count.
pub fn css_sum_of_squares(model: &SarimaModel, dx: &[f64]) -> Result<(f64, usize)> {
    let e = css_residuals(model, dx)?;
    let p = model.phi_full().len();
    Ok((e[p..].iter().map(|v| v * v).sum(), e.len() - p))
}

/// Conditional sum of squares `S`; `S / N_eff` estimates sigma2.
pub fn css_objective(model: &SarimaModel, dx: &[f64]) -> Result<f64> {
    css_sum_of_squares(model, dx).map(|(s, _)| s)
}

/// Builds a model from a flat `phi, theta, sphi, stheta[, mean]` vector.
fn unpack(order: SarimaOrder, coefs: &[f64], with_mean: bool, sigma2: f64) -> Result<SarimaModel> {
    let k = order.n_coefficients() + usize::from(with_mean);
    if coefs.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients given, {order} needs {k}",
            coefs.len()
        )));
    }
    let (phi, rest) = coefs.split_at(order.p);
    let (theta, rest) = rest.split_at(order.q);
    let (sphi, rest) = rest.split_at(order.sp);
    let (stheta, rest) = rest.split_at(order.sq);
    let mean = with_mean.then(|| rest[0]);
    SarimaModel::new(
        order,
        phi.to_vec(),
        theta.to_vec(),
        sphi.to_vec(),
        stheta.to_vec(),
        mean,
        sigma2,
    )
}

fn loglik_css(sigma2: f64, n_eff: usize) -> f64 {
    -(n_eff as f64) / 2.0 * ((2.0 * std::f64::consts::PI * sigma2).ln() + 1.0)
}

fn diagnostics(model: &SarimaModel) -> Vec<String> {
    let mut warnings = Vec::new();
    if !is_stationary(model.phi_full()) {
        warnings.push("AR polynomial is not stationary".to_string());
    }
    if !is_invertible(model.theta_full()) {
        warnings.push("MA polynomial is not invertible".to_string());
    }
    warnings
}

fn assemble(
    model: SarimaModel,
    data: TimeSeries,
    dx: &[f64],
    info: impl FnOnce(f64, usize) -> FitInfo,
) -> Result<FittedModel> {
    let residuals = css_residuals(&model, dx)?;
    let p = model.phi_full().len();
    let css: f64 = residuals[p..].iter().map(|v| v * v).sum();
    let n_eff = residuals.len() - p;
    let k = model.coefficients().len();
    let sigma2_hat = (css / n_eff as f64).max(SIGMA2_FLOOR);
    let ll = loglik_css(sigma2_hat, n_eff);
    let aic = -2.0 * ll + 2.0 * (k as f64 + 1.0);
    FittedModel::new(model, data, residuals, ll, aic, info(css, n_eff))
}

/// Wraps known coefficients (`phi, theta, sphi, stheta[, mean]`) around a
/// series without any optimization. A trailing extra coefficient is read as
/// the mean.
pub fn load_model(
    coefficients: &[f64],
    order: SarimaOrder,
    sigma2: f64,
    data: TimeSeries,
) -> Result<FittedModel> {
    order.validate()?;
    let with_mean = coefficients.len() == order.n_coefficients() + 1;
    if with_mean && !order.allows_mean() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients given but {order} has {} and no mean",
            coefficients.len(),
            order.n_coefficients()
        )));
    }
    let model = unpack(order, coefficients, with_mean, sigma2)?;
    let (dx, _) = differencing::difference(data.values(), order.d, order.sd, order.period())?;
    let warnings = diagnostics(&model);
    assemble(model, data, &dx, |css, n_effective| FitInfo {
        optimizer: "frozen".into(),
        iterations: 0,
        converged: true,
        n_effective,
        css,
        warnings,
    })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Documented start: sample mean, Yule–Walker for the regular and seasonal
/// AR parts, zeros for MA.
pub fn start_values(order: &SarimaOrder, dx: &[f64], with_mean: bool) -> Vec<f64> {
    let s = order.period();
    let mut start = Vec::with_capacity(order.n_coefficients() + 1);
    start.extend(yule_walker(dx, order.p, 1));
    start.extend(std::iter::repeat_n(0.0, order.q));
    start.extend(yule_walker(dx, order.sp, s));
    start.extend(std::iter::repeat_n(0.0, order.sq));
    if with_mean {
        start.push(mean(dx));
    }
    start
}

/// Fits `order` to `data` by minimizing the conditional sum of squares.
///
/// Non-convergence and stationarity/invertibility problems are reported as
/// warnings in [`FitInfo`]; the best parameters found are still returned.
pub fn fit(data: &TimeSeries, order: SarimaOrder, cfg: &FitConfig) -> Result<FittedModel> {
    order.validate()?;
    if cfg.tolerance.is_nan() || cfg.tolerance <= 0.0 {
        return Err(Error::InvalidRequest("tolerance must be positive".into()));
    }
    let with_mean = cfg.wants_mean(&order)?;
    let (dx, _) = differencing::difference(data.values(), order.d, order.sd, order.period())?;
    let k = order.n_coefficients() + usize::from(with_mean);
    let p_full = order.ar_lags();
    let n_eff = dx.len().saturating_sub(p_full);
    let needed = (10 * k).max(1);
    if n_eff < needed {
        return Err(Error::SeriesTooShort(format!(
            "{n_eff} usable residuals for {k} parameters; at least {needed} required"
        )));
    }

    let start = match &cfg.initial_coefficients {
        Some(v) if v.len() != k => {
            return Err(Error::DimensionMismatch(format!(
                "initial coefficients have length {}, expected {k}",
                v.len()
            )))
        }
        Some(v) => v.clone(),
        None => start_values(&order, &dx, with_mean),
    };

    let objective = |x: &[f64]| -> f64 {
        match unpack(order, x, with_mean, 1.0).and_then(|m| css_objective(&m, &dx)) {
            Ok(v) if v.is_finite() => v,
            _ => f64::INFINITY,
        }
    };

    let mut warnings = Vec::new();
    let dx_sd = {
        let m = mean(&dx);
        (dx.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / dx.len() as f64).sqrt()
    };
    if dx_sd == 0.0 {
        warnings.push("differenced series is constant".to_string());
    }

    let (coefs, iterations, converged) = if k == 0 {
        (Vec::new(), 0, true)
    } else {
        let mut steps = vec![0.1; k];
        if with_mean {
            steps[k - 1] = if dx_sd > 0.0 { 0.5 * dx_sd } else { 1.0 };
        }
        let nm = NelderMead {
            max_iterations: cfg.max_iterations,
            tolerance: cfg.tolerance,
        };
        let r = nm.minimize(objective, &start, &steps);
        // keep the start if the search never beat it
        if r.fx <= objective(&start) {
            (r.x, r.iterations, r.converged)
        } else {
            (start.clone(), r.iterations, r.converged)
        }
    };
    if !converged {
        warnings.push(format!(
            "optimizer did not converge within {} iterations",
            cfg.max_iterations
        ));
    }

    let probe = unpack(order, &coefs, with_mean, 1.0)?;
    let (css, n_eff) = css_sum_of_squares(&probe, &dx)?;
    let sigma2 = (css / n_eff as f64).max(SIGMA2_FLOOR);
    let model = unpack(order, &coefs, with_mean, sigma2)?;
    warnings.extend(diagnostics(&model));

    assemble(model, data.clone(), &dx, |css, n_effective| FitInfo {
        optimizer: OPTIMIZER_NAME.into(),
        iterations,
        converged,
        n_effective,
        css,
        warnings,
    })
}
