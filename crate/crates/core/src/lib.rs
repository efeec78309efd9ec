//! Seasonal ARIMA models: CSS fitting, exact forecasts and conditional
//! simulation of random continuations of an observed series.
//!
//! MA coefficients use the plus-sign convention
//! `X_t = mu + sum phi_i X_{t-i} + e_t + sum theta_j e_{t-j}`; see [`series`].

pub mod cli;
pub mod datasets;
pub mod differencing;
pub mod error;
pub mod estimation;
pub mod lag_poly;
pub mod rng;
pub mod series;
pub mod sim;

pub use differencing::{difference, integrate, DifferencingState};
pub use error::{Error, Result};
pub use estimation::{css_objective, css_residuals, fit, load_model, FitConfig};
pub use lag_poly::{expand_ar, expand_ma, LagPolynomial};
pub use series::{intercept_from_mean, FitInfo, FittedModel, SarimaModel, SarimaOrder, TimeSeries};
#[cfg(feature = "parallel")]
pub use sim::simulate_ensemble_parallel;
pub use sim::{
    ensemble_summary, forecast, simulate_ensemble, simulate_ensemble_sequential, simulate_path,
    ConditionalSimulator, QuantileTable, SimulationEnsemble, SimulationRequest,
};
