//! Core data types: the observed series, model orders and fitted models.
//!
//! Sign convention used throughout the crate (the R `arima` convention):
//!
//! ```text
//! X_t = mu + phi_1 X_{t-1} + ... + phi_p X_{t-p}
//!          + e_t + theta_1 e_{t-1} + ... + theta_q e_{t-q}
//! ```
//!
//! MA coefficients enter with a **plus** sign. Many textbooks write
//! `e_t - theta_1 e_{t-1}` instead; coefficients taken from such sources must
//! be negated before use here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lag_poly;

/// Equally spaced observations with a time base.
///
/// Observation `k` (zero based) sits at time `start + k / frequency`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TimeSeriesRepr")]
pub struct TimeSeries {
    values: Vec<f64>,
    start: f64,
    frequency: u32,
}

#[derive(Deserialize)]
struct TimeSeriesRepr {
    values: Vec<f64>,
    start: f64,
    frequency: u32,
}

impl TryFrom<TimeSeriesRepr> for TimeSeries {
    type Error = Error;

    fn try_from(r: TimeSeriesRepr) -> Result<Self> {
        TimeSeries::new(r.values, r.start, r.frequency)
    }
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, start: f64, frequency: u32) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SeriesTooShort(
                "the series has no observations".into(),
            ));
        }
        if frequency == 0 {
            return Err(Error::InvalidModel("frequency must be at least 1".into()));
        }
        if !start.is_finite() {
            return Err(Error::InvalidModel(format!(
                "start time {start} is not finite"
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Parse(format!(
                "observation {} is not a finite number",
                bad + 1
            )));
        }
        Ok(Self {
            values,
            start,
            frequency,
        })
    }

    /// A series starting at time 1 with frequency 1.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(values, 1.0, 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn frequency(&self) -> u32 {
        self.frequency
    }

    /// Time of observation `k`; `k` may run past the end for continuations.
    pub fn time_at(&self, k: usize) -> f64 {
        self.start + k as f64 / f64::from(self.frequency)
    }

    /// Time of the first value following the observed series.
    pub fn continuation_start(&self) -> f64 {
        self.time_at(self.values.len())
    }
}

/// Orders of a SARIMA(p,d,q)(P,D,Q)_s model.
///
/// `sp`, `sd`, `sq` are the seasonal orders. When all three are zero the
/// season length `s` has no effect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SarimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub sp: usize,
    pub sd: usize,
    pub sq: usize,
    pub s: usize,
}

impl SarimaOrder {
    pub fn new(p: usize, d: usize, q: usize, sp: usize, sd: usize, sq: usize, s: usize) -> Self {
        Self {
            p,
            d,
            q,
            sp,
            sd,
            sq,
            s,
        }
    }

    pub fn arima(p: usize, d: usize, q: usize) -> Self {
        Self::new(p, d, q, 0, 0, 0, 1)
    }

    pub fn is_seasonal(&self) -> bool {
        self.sp + self.sd + self.sq > 0
    }

    pub fn validate(&self) -> Result<()> {
        if self.s == 0 {
            return Err(Error::InvalidModel(
                "season length s must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Season length as used by the algebra; 1 for non-seasonal models.
    pub fn period(&self) -> usize {
        if self.is_seasonal() {
            self.s
        } else {
            1
        }
    }

    /// Observations consumed by differencing: `d + s * sd`.
    pub fn differencing_loss(&self) -> usize {
        self.d + self.period() * self.sd
    }

    pub fn ar_lags(&self) -> usize {
        self.p + self.period() * self.sp
    }

    pub fn ma_lags(&self) -> usize {
        self.q + self.period() * self.sq
    }

    /// Whether a process mean may be estimated (no differencing of any kind).
    pub fn allows_mean(&self) -> bool {
        self.d == 0 && self.sd == 0
    }

    /// ARMA coefficient count `p + q + P + Q`.
    pub fn n_coefficients(&self) -> usize {
        self.p + self.q + self.sp + self.sq
    }
}

impl std::fmt::Display for SarimaOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ARIMA({},{},{})", self.p, self.d, self.q)?;
        if self.is_seasonal() {
            write!(f, "({},{},{})[{}]", self.sp, self.sd, self.sq, self.s)?;
        }
        Ok(())
    }
}

/// A SARIMA model with known coefficients.
///
/// The expanded full-lag vectors `phi_full`/`theta_full` are derived from the
/// factor coefficients on construction and cannot be edited independently.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SarimaModelRepr")]
pub struct SarimaModel {
    order: SarimaOrder,
    phi: Vec<f64>,
    theta: Vec<f64>,
    sphi: Vec<f64>,
    stheta: Vec<f64>,
    mean: Option<f64>,
    sigma2: f64,
    phi_full: Vec<f64>,
    theta_full: Vec<f64>,
}

#[derive(Deserialize)]
struct SarimaModelRepr {
    order: SarimaOrder,
    phi: Vec<f64>,
    theta: Vec<f64>,
    sphi: Vec<f64>,
    stheta: Vec<f64>,
    mean: Option<f64>,
    sigma2: f64,
    #[serde(default)]
    phi_full: Option<Vec<f64>>,
    #[serde(default)]
    theta_full: Option<Vec<f64>>,
}

impl TryFrom<SarimaModelRepr> for SarimaModel {
    type Error = Error;

    fn try_from(r: SarimaModelRepr) -> Result<Self> {
        let model = SarimaModel::new(r.order, r.phi, r.theta, r.sphi, r.stheta, r.mean, r.sigma2)?;
        if r.phi_full.is_some_and(|v| v != model.phi_full) {
            return Err(Error::InvalidModel(
                "phi_full disagrees with phi and sphi".into(),
            ));
        }
        if r.theta_full.is_some_and(|v| v != model.theta_full) {
            return Err(Error::InvalidModel(
                "theta_full disagrees with theta and stheta".into(),
            ));
        }
        Ok(model)
    }
}

impl SarimaModel {
    pub fn new(
        order: SarimaOrder,
        phi: Vec<f64>,
        theta: Vec<f64>,
        sphi: Vec<f64>,
        stheta: Vec<f64>,
        mean: Option<f64>,
        sigma2: f64,
    ) -> Result<Self> {
        order.validate()?;
        let check = |name: &str, got: usize, want: usize| {
            if got == want {
                Ok(())
            } else {
                Err(Error::DimensionMismatch(format!(
                    "{name} has {got} coefficients but the order requires {want}"
                )))
            }
        };
        check("phi", phi.len(), order.p)?;
        check("theta", theta.len(), order.q)?;
        check("sphi", sphi.len(), order.sp)?;
        check("stheta", stheta.len(), order.sq)?;

        let all = phi
            .iter()
            .chain(&theta)
            .chain(&sphi)
            .chain(&stheta)
            .chain(mean.iter());
        if all.into_iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidModel("coefficients must be finite".into()));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "sigma2 must be positive, got {sigma2}"
            )));
        }
        if mean.is_some() && !order.allows_mean() {
            return Err(Error::InvalidModel(
                "a mean is only allowed for models without differencing".into(),
            ));
        }

        let s = order.period();
        let phi_full = lag_poly::expand_ar(&phi, &sphi, s);
        let theta_full = lag_poly::expand_ma(&theta, &stheta, s);
        Ok(Self {
            order,
            phi,
            theta,
            sphi,
            stheta,
            mean,
            sigma2,
            phi_full,
            theta_full,
        })
    }

    pub fn order(&self) -> &SarimaOrder {
        &self.order
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn sphi(&self) -> &[f64] {
        &self.sphi
    }

    pub fn stheta(&self) -> &[f64] {
        &self.stheta
    }

    pub fn mean(&self) -> Option<f64> {
        self.mean
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn phi_full(&self) -> &[f64] {
        &self.phi_full
    }

    pub fn theta_full(&self) -> &[f64] {
        &self.theta_full
    }

    /// Coefficients in the order `phi, theta, sphi, stheta[, mean]`.
    pub fn coefficients(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.order.n_coefficients() + 1);
        out.extend_from_slice(&self.phi);
        out.extend_from_slice(&self.theta);
        out.extend_from_slice(&self.sphi);
        out.extend_from_slice(&self.stheta);
        out.extend(self.mean);
        out
    }

    /// Constant term of the recursion; see [`intercept_from_mean`].
    pub fn intercept(&self) -> f64 {
        intercept_from_mean(self)
    }
}

/// Constant `mu = mean * (1 - sum(phi_full))` of the ARMA recursion.
///
/// Models without a mean (any differencing, or fitted without one) have a
/// zero intercept.
pub fn intercept_from_mean(model: &SarimaModel) -> f64 {
    match model.mean {
        Some(mean) => mean * (1.0 - model.phi_full.iter().sum::<f64>()),
        None => 0.0,
    }
}

/// Bookkeeping from the fitting routine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitInfo {
    /// Optimizer used, e.g. `"nelder-mead"`, or `"frozen"` for loaded models.
    pub optimizer: String,
    pub iterations: usize,
    pub converged: bool,
    /// Number of residuals entering the conditional sum of squares.
    pub n_effective: usize,
    pub css: f64,
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// A model together with the series it is conditioned on and its residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FittedModelRepr")]
pub struct FittedModel {
    model: SarimaModel,
    data: TimeSeries,
    residuals: Vec<f64>,
    loglik_css: f64,
    aic: f64,
    fit_info: FitInfo,
}

#[derive(Deserialize)]
struct FittedModelRepr {
    model: SarimaModel,
    data: TimeSeries,
    residuals: Vec<f64>,
    loglik_css: f64,
    aic: f64,
    fit_info: FitInfo,
}

impl TryFrom<FittedModelRepr> for FittedModel {
    type Error = Error;

    fn try_from(r: FittedModelRepr) -> Result<Self> {
        FittedModel::new(
            r.model,
            r.data,
            r.residuals,
            r.loglik_css,
            r.aic,
            r.fit_info,
        )
    }
}

impl FittedModel {
    pub fn new(
        model: SarimaModel,
        data: TimeSeries,
        residuals: Vec<f64>,
        loglik_css: f64,
        aic: f64,
        fit_info: FitInfo,
    ) -> Result<Self> {
        let loss = model.order().differencing_loss();
        let expected = data.len().checked_sub(loss).ok_or_else(|| {
            Error::SeriesTooShort(format!(
                "{} observations cannot be differenced {loss} times",
                data.len()
            ))
        })?;
        if residuals.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "expected {expected} residuals, got {}",
                residuals.len()
            )));
        }
        Ok(Self {
            model,
            data,
            residuals,
            loglik_css,
            aic,
            fit_info,
        })
    }

    pub fn model(&self) -> &SarimaModel {
        &self.model
    }

    pub fn data(&self) -> &TimeSeries {
        &self.data
    }

    /// Residuals aligned with the differenced series (leading zeros where
    /// the recursion had no lags available).
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn loglik_css(&self) -> f64 {
        self.loglik_css
    }

    pub fn aic(&self) -> f64 {
        self.aic
    }

    pub fn fit_info(&self) -> &FitInfo {
        &self.fit_info
    }
}
