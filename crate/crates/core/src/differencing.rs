//! Ordinary and seasonal differencing and its inverse.
//!
//! Going down, `sd` passes of lag-`s` differencing are applied first and
//! then `d` passes of lag-1 differencing. Integration undoes them in reverse
//! order. A [`DifferencingState`] holds the values immediately preceding the
//! first integrated value at each stage:
//!
//! * `xi_ordinary`: the `d` values of the seasonally differenced series
//!   preceding the block;
//! * `xi_seasonal`: the `sd * s` values of the original series preceding it.
//!
//! [`difference`] returns seeds taken from the head of the series, so that
//! `integrate(difference(x))` rebuilds `x[d + sd*s..]`. For extending a series
//! past its end use [`DifferencingState::continuation`], which takes the
//! seeds from the tail.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferencingState {
    pub d: usize,
    pub sd: usize,
    pub s: usize,
    pub xi_ordinary: Vec<f64>,
    pub xi_seasonal: Vec<f64>,
}

impl DifferencingState {
    /// Seeds for integrating values that follow the end of `x`.
    pub fn continuation(x: &[f64], d: usize, sd: usize, s: usize) -> Result<Self> {
        check_length(x.len(), d, sd, s)?;
        let seasonal = diff_passes(x, sd, s);
        Ok(Self {
            d,
            sd,
            s,
            xi_ordinary: seasonal[seasonal.len() - d..].to_vec(),
            xi_seasonal: x[x.len() - sd * s..].to_vec(),
        })
    }

    fn validate(&self) -> Result<()> {
        if self.s == 0 {
            return Err(Error::StateMismatch(
                "season length must be at least 1".into(),
            ));
        }
        if self.xi_ordinary.len() != self.d {
            return Err(Error::StateMismatch(format!(
                "xi_ordinary has {} values, expected d = {}",
                self.xi_ordinary.len(),
                self.d
            )));
        }
        if self.xi_seasonal.len() != self.sd * self.s {
            return Err(Error::StateMismatch(format!(
                "xi_seasonal has {} values, expected sd * s = {}",
                self.xi_seasonal.len(),
                self.sd * self.s
            )));
        }
        Ok(())
    }
}

fn check_length(n: usize, d: usize, sd: usize, s: usize) -> Result<()> {
    if s == 0 {
        return Err(Error::InvalidModel(
            "season length must be at least 1".into(),
        ));
    }
    let loss = d + sd * s;
    if n <= loss {
        return Err(Error::SeriesTooShort(format!(
            "{n} observations, differencing needs more than {loss}"
        )));
    }
    Ok(())
}

/// `passes` rounds of lag-`lag` differencing.
fn diff_passes(x: &[f64], passes: usize, lag: usize) -> Vec<f64> {
    let mut out = x.to_vec();
    for _ in 0..passes {
        out = out.windows(lag + 1).map(|w| w[lag] - w[0]).collect();
    }
    out
}

/// Inverts `passes` rounds of lag-`lag` differencing of `dx`, given the
/// `passes * lag` values of the undifferenced series immediately preceding
/// it. Returns only the continuation values.
fn integrate_passes(dx: &[f64], seeds: &[f64], passes: usize, lag: usize) -> Vec<f64> {
    debug_assert_eq!(seeds.len(), passes * lag);
    // levels[k] = the last `lag` values of the k-times differenced seeds.
    let levels: Vec<Vec<f64>> = (0..passes)
        .map(|k| {
            let diffed = diff_passes(seeds, k, lag);
            diffed[diffed.len() - lag..].to_vec()
        })
        .collect();

    let mut current = dx.to_vec();
    for seed in levels.iter().rev() {
        let mut out: Vec<f64> = Vec::with_capacity(current.len());
        for (i, v) in current.iter().enumerate() {
            let prev = if i >= lag { out[i - lag] } else { seed[i] };
            out.push(prev + v);
        }
        current = out;
    }
    current
}

/// Differences `x` (seasonal stage first, then ordinary).
pub fn difference(
    x: &[f64],
    d: usize,
    sd: usize,
    s: usize,
) -> Result<(Vec<f64>, DifferencingState)> {
    check_length(x.len(), d, sd, s)?;
    let seasonal = diff_passes(x, sd, s);
    let dx = diff_passes(&seasonal, d, 1);
    let state = DifferencingState {
        d,
        sd,
        s,
        xi_ordinary: seasonal[..d].to_vec(),
        xi_seasonal: x[d..d + sd * s].to_vec(),
    };
    Ok((dx, state))
}

/// Inverts [`difference`] (ordinary stage first, then seasonal), returning
/// only the values that follow the seeds held in `state`.
pub fn integrate(dx: &[f64], state: &DifferencingState) -> Result<Vec<f64>> {
    state.validate()?;
    let seasonal = integrate_passes(dx, &state.xi_ordinary, state.d, 1);
    Ok(integrate_passes(
        &seasonal,
        &state.xi_seasonal,
        state.sd,
        state.s,
    ))
}
