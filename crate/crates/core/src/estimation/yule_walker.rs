//! Levinson–Durbin recursion, Yule–Walker start values and the
//! stationarity/invertibility checks built on the same reflection
//! coefficients.

/// Biased sample autocovariances at lags `0, step, 2*step, ..., order*step`.
pub fn autocovariances(x: &[f64], order: usize, step: usize) -> Vec<f64> {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    (0..=order)
        .map(|k| {
            let lag = k * step;
            if lag >= n {
                return 0.0;
            }
            (lag..n)
                .map(|t| (x[t] - mean) * (x[t - lag] - mean))
                .sum::<f64>()
                / n as f64
        })
        .collect()
}

/// Solves the Yule–Walker equations for autocovariances `acov[0..=order]`.
/// Returns `(ar coefficients, reflection coefficients)`.
pub fn levinson_durbin(acov: &[f64], order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut phi = vec![0.0; order];
    let mut reflection = Vec::with_capacity(order);
    let mut err = acov[0];
    for k in 0..order {
        if err <= 0.0 {
            break;
        }
        let mut num = acov[k + 1];
        for j in 0..k {
            num -= phi[j] * acov[k - j];
        }
        let kappa = num / err;
        let prev = phi.clone();
        phi[k] = kappa;
        for j in 0..k {
            phi[j] = prev[j] - kappa * prev[k - 1 - j];
        }
        reflection.push(kappa);
        err *= 1.0 - kappa * kappa;
    }
    (phi, reflection)
}

/// Yule–Walker AR estimate on lags that are multiples of `step`; zeros for a
/// constant series.
pub fn yule_walker(x: &[f64], order: usize, step: usize) -> Vec<f64> {
    if order == 0 {
        return Vec::new();
    }
    let acov = autocovariances(x, order, step);
    if acov[0].is_nan() || acov[0] <= 0.0 {
        return vec![0.0; order];
    }
    levinson_durbin(&acov, order).0
}

/// Whether `1 - sum c_k z^k` has all roots outside the unit circle, via the
/// step-down (Schur–Cohn) recursion.
pub fn is_stationary(coeffs: &[f64]) -> bool {
    let mut a = coeffs.to_vec();
    while a.last() == Some(&0.0) {
        a.pop();
    }
    while let Some(&kappa) = a.last() {
        if kappa.is_nan() || kappa.abs() >= 1.0 {
            return false;
        }
        let k = a.len();
        let denom = 1.0 - kappa * kappa;
        let next: Vec<f64> = (0..k - 1)
            .map(|j| (a[j] + kappa * a[k - 2 - j]) / denom)
            .collect();
        a = next;
    }
    true
}

/// Whether `1 + sum c_k z^k` has all roots outside the unit circle.
pub fn is_invertible(coeffs: &[f64]) -> bool {
    let neg: Vec<f64> = coeffs.iter().map(|c| -c).collect();
    is_stationary(&neg)
}
