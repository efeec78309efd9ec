//! Lag polynomial algebra.
//!
//! Seasonal and non-seasonal factors are multiplied out here into single
//! full-lag coefficient vectors. Every other module consumes only the
//! expanded vectors in recursion form, so the sign handling at the seasonal
//! interaction lags lives in this file alone.

use serde::{Deserialize, Serialize};

/// Which operator form a coefficient vector represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LagKind {
    /// `1 - sum c_k B^k`
    Ar,
    /// `1 + sum c_k B^k`
    Ma,
}

impl LagKind {
    fn sign(self) -> f64 {
        match self {
            LagKind::Ar => -1.0,
            LagKind::Ma => 1.0,
        }
    }
}

/// Coefficients indexed by lag `1..=L`; `coeffs[k - 1]` multiplies `B^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagPolynomial {
    pub kind: LagKind,
    pub coeffs: Vec<f64>,
}

impl LagPolynomial {
    pub fn ar(coeffs: Vec<f64>) -> Self {
        Self {
            kind: LagKind::Ar,
            coeffs,
        }
    }

    pub fn ma(coeffs: Vec<f64>) -> Self {
        Self {
            kind: LagKind::Ma,
            coeffs,
        }
    }

    /// Puts the coefficients on every `s`-th lag: `c(B) -> c(B^s)`.
    pub fn seasonal(kind: LagKind, coeffs: &[f64], s: usize) -> Self {
        let mut out = vec![0.0; coeffs.len() * s];
        for (j, c) in coeffs.iter().enumerate() {
            out[(j + 1) * s - 1] = *c;
        }
        Self { kind, coeffs: out }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Drops trailing zero coefficients.
    pub fn canonicalize(mut self) -> Self {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
        self
    }

    /// Evaluates the operator polynomial `1 -/+ sum c_k z^k` (Horner).
    pub fn eval(&self, z: f64) -> f64 {
        let sign = self.kind.sign();
        let tail = self
            .coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| (acc + sign * c) * z);
        1.0 + tail
    }

    /// Product of two polynomials of the same kind.
    pub fn multiply(&self, other: &LagPolynomial) -> LagPolynomial {
        assert_eq!(
            self.kind, other.kind,
            "cannot multiply AR and MA polynomials"
        );
        let sign = self.kind.sign();
        let n = self.coeffs.len() + other.coeffs.len();
        // Work in plain polynomial form (leading 1, signed coefficients).
        let a: Vec<f64> = std::iter::once(1.0)
            .chain(self.coeffs.iter().map(|c| sign * c))
            .collect();
        let b: Vec<f64> = std::iter::once(1.0)
            .chain(other.coeffs.iter().map(|c| sign * c))
            .collect();
        let mut prod = vec![0.0; n + 1];
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                prod[i + j] += ai * bj;
            }
        }
        LagPolynomial {
            kind: self.kind,
            coeffs: prod[1..].iter().map(|c| sign * c).collect(),
        }
    }
}

/// Expanded AR vector `c` with `1 - sum c_k B^k = (1 - sum phi_i B^i)(1 - sum Phi_j B^{js})`.
///
/// The result always has length `phi.len() + s * sphi.len()`.
pub fn expand_ar(phi: &[f64], sphi: &[f64], s: usize) -> Vec<f64> {
    expand(phi, sphi, s, LagKind::Ar)
}

/// Expanded MA vector `c` with `1 + sum c_k B^k = (1 + sum theta_i B^i)(1 + sum Theta_j B^{js})`.
///
/// The result always has length `theta.len() + s * stheta.len()`.
pub fn expand_ma(theta: &[f64], stheta: &[f64], s: usize) -> Vec<f64> {
    expand(theta, stheta, s, LagKind::Ma)
}

fn expand(regular: &[f64], seasonal: &[f64], s: usize, kind: LagKind) -> Vec<f64> {
    assert!(s >= 1, "season length must be at least 1");
    let mut out = vec![0.0; regular.len() + s * seasonal.len()];
    for (i, c) in regular.iter().enumerate() {
        out[i] += c;
    }
    for (j, sc) in seasonal.iter().enumerate() {
        let lag = (j + 1) * s;
        out[lag - 1] += sc;
        // Cross terms: AR gives +phi_i Phi_j B^(i+js) in the product, which
        // is a coefficient of -phi_i Phi_j in the `1 - sum` form. MA keeps +.
        for (i, c) in regular.iter().enumerate() {
            out[lag + i] += kind.sign() * c * sc;
        }
    }
    out
}
