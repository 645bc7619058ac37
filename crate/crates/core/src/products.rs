//! The phi-product family and the anti-Wick product.
//!
//! `X o_phi Y = sum_n a_n int D^n X . D^n Y dt` for `phi(x) = sum a_n x^n`
//! with `phi(0) = 1`. `phi = 1` recovers the pointwise product,
//! `phi = e^{-x}` the Wick product and `phi = e^x` the anti-Wick product,
//! which also equals `Gamma(1/sqrt2)(Gamma(sqrt2)X . Gamma(sqrt2)Y)`. Both
//! anti-Wick routes are implemented independently so each can check the other.

use serde::Serialize;

use crate::basis::L2Function;
use crate::chaos::hermite::factorial;
use crate::chaos::ChaosVector;
use crate::error::{Error, Result};
use crate::malliavin::{derivative_contraction, iterated_pairing};
use crate::sampling::{mc_mean, MeanEstimate};

/// Truncated Taylor coefficients `(a_0, ..., a_K)` of `phi`, with `a_0 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhiSeries {
    coeffs: Vec<f64>,
}

impl PhiSeries {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        match coeffs.first().copied() {
            Some(1.0) => Ok(Self { coeffs }),
            a0 => Err(Error::PhiNotNormalized(a0.unwrap_or(0.0))),
        }
    }

    /// `phi = 1`.
    pub fn one() -> Self {
        Self { coeffs: vec![1.0] }
    }

    /// `phi(x) = e^{alpha x}` truncated after `x^terms`.
    pub fn exponential(alpha: f64, terms: usize) -> Self {
        let coeffs = (0..=terms)
            .map(|k| alpha.powi(k as i32) / factorial(k))
            .collect();
        Self { coeffs }
    }

    /// `e^{alpha x}` with enough terms that the Taylor remainder at every
    /// `|x| <= max_arg` stays below `1e-16` relative to the function value.
    pub fn exponential_for(alpha: f64, max_arg: f64) -> Self {
        let r = (alpha * max_arg).abs();
        let mut k = 1;
        while k < crate::chaos::MAX_ORDER
            && exp_tail_bound(r, k) > 1e-16 * (-r).exp()
        {
            k += 1;
        }
        Self::exponential(alpha, k)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Highest retained power `K`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Scalar value of the truncated series (Horner).
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * x + a)
    }
}

/// Lagrange remainder bound of `e^x` truncated after `x^k`, for `|x| <= r`.
pub fn exp_tail_bound(r: f64, k: usize) -> f64 {
    r.powi(k as i32 + 1) / factorial(k + 1) * r.exp()
}

/// `X o_phi Y`. Terms beyond `min(K, deg X, deg Y)` vanish identically.
pub fn circle_phi(x: &ChaosVector, y: &ChaosVector, phi: &PhiSeries) -> Result<ChaosVector> {
    let phi = PhiSeries::new(phi.coeffs.clone())?;
    let top = phi.degree().min(x.degree()).min(y.degree());
    let mut acc = x.pointwise_product(y)?;
    for n in 1..=top {
        let a = phi.coeffs[n];
        if a != 0.0 {
            acc = acc.axpy(a, &iterated_pairing(x, y, n)?)?;
        }
    }
    Ok(acc)
}

/// Anti-Wick product from its defining series `sum_n (1/n!) int D^n X . D^n Y`.
pub fn anti_wick_series(x: &ChaosVector, y: &ChaosVector) -> Result<ChaosVector> {
    let top = x.degree().min(y.degree());
    let mut acc = x.pointwise_product(y)?;
    for n in 1..=top {
        acc = acc.axpy(1.0 / factorial(n), &iterated_pairing(x, y, n)?)?;
    }
    Ok(acc)
}

/// Anti-Wick product through second quantization,
/// `Gamma(1/sqrt2)(Gamma(sqrt2)X . Gamma(sqrt2)Y)`.
pub fn anti_wick_gamma(x: &ChaosVector, y: &ChaosVector) -> Result<ChaosVector> {
    let s = 2f64.sqrt();
    x.gamma_scale(s)?
        .pointwise_product(&y.gamma_scale(s)?)?
        .gamma_scale(1.0 / s)
}

/// Both sides of `phi(<f,g>) phi(<f+g,h>) = phi(<f,g+h>) phi(<g,h>)`, the
/// scalar identity that associativity of `o_phi` forces on exponential triples.
pub fn associativity_probe(
    phi: &PhiSeries,
    f: &L2Function,
    g: &L2Function,
    h: &L2Function,
) -> Result<(f64, f64)> {
    let fg = f.inner_product(g)?;
    let fg_h = f.add(g)?.inner_product(h)?;
    let f_gh = f.inner_product(&g.add(h)?)?;
    let gh = g.inner_product(h)?;
    Ok((phi.eval(fg) * phi.eval(fg_h), phi.eval(f_gh) * phi.eval(gh)))
}

/// `X o Y = sum_n (2^n/n!) int D^n X <> D^n Y dt`.
pub fn wick_to_antiwick(x: &ChaosVector, y: &ChaosVector) -> Result<ChaosVector> {
    let top = x.degree().min(y.degree());
    let mut acc = x.wick_product(y)?;
    for n in 1..=top {
        let term = derivative_contraction(x, y, n, ChaosVector::wick_product)?;
        acc = acc.axpy(2f64.powi(n as i32) / factorial(n), &term)?;
    }
    Ok(acc)
}

/// `X <> Y = sum_n ((-2)^n/n!) int D^n X o D^n Y dt`.
pub fn antiwick_to_wick(x: &ChaosVector, y: &ChaosVector) -> Result<ChaosVector> {
    let top = x.degree().min(y.degree());
    let mut acc = anti_wick_series(x, y)?;
    for n in 1..=top {
        let term = derivative_contraction(x, y, n, anti_wick_series)?;
        acc = acc.axpy((-2f64).powi(n as i32) / factorial(n), &term)?;
    }
    Ok(acc)
}

/// Monte Carlo `E|X o Y|` against the bound `||X||_{G_sqrt2} ||Y||_{G_sqrt2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L1Estimate {
    pub mc_l1: MeanEstimate,
    pub bound: f64,
}

impl L1Estimate {
    /// One-sided check `mc <= bound + sigmas * stderr`.
    pub fn holds(&self, sigmas: f64) -> bool {
        self.mc_l1.mean <= self.bound + sigmas * self.mc_l1.std_error
    }
}

pub fn l1_bound_check(
    x: &ChaosVector,
    y: &ChaosVector,
    samples: usize,
    seed: u64,
) -> Result<L1Estimate> {
    let z = anti_wick_series(x, y)?;
    let s = 2f64.sqrt();
    let bound = x.norm_g(s)? * y.norm_g(s)?;
    let mc_l1 = mc_mean(z.modes(), samples, seed, |xi| {
        z.eval(xi).map(f64::abs).unwrap_or(f64::NAN)
    });
    Ok(L1Estimate { mc_l1, bound })
}
