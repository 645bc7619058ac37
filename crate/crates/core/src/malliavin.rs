//! Hida-Malliavin derivatives in the indicator basis.
//!
//! Along `e_i` the derivative acts as the annihilation operator
//! `A_i H_alpha = alpha_i H_{alpha - eps_i}`, and `D_t X = sum_i e_i(t) A_i X`.
//! Orthonormality of the `e_i` turns every time integral
//! `int_{[0,T]^n} D^n X . D^n Y dt` into the finite mode sum
//! `sum_{|beta| = n} (n! / beta!) A^beta X . A^beta Y`.

use rayon::prelude::*;

use crate::basis::TimeGrid;
use crate::chaos::hermite::factorial_exact;
use crate::chaos::{ChaosVector, MultiIndex};
use crate::error::{Error, Result};

/// Below this many `beta` terms the contraction runs sequentially.
const PARALLEL_THRESHOLD: usize = 32;

/// `D_t X` as its basis components `A_i X`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeField {
    components: Vec<ChaosVector>,
}

impl DerivativeField {
    pub fn components(&self) -> &[ChaosVector] {
        &self.components
    }

    pub fn component(&self, mode: usize) -> &ChaosVector {
        &self.components[mode]
    }

    /// `E[int_0^T |D_t X|^2 dt] = sum_i ||A_i X||_2^2`.
    pub fn energy(&self) -> f64 {
        self.components.iter().map(|c| c.norm_l2().powi(2)).sum()
    }

    /// `D_t X` at a raw time `t`, i.e. `(m/T)^{1/2} A_i X` for the cell holding `t`.
    pub fn at_time(&self, grid: TimeGrid, t: f64) -> Result<ChaosVector> {
        if grid.cells() != self.components.len() {
            return Err(Error::ModeMismatch {
                left: self.components.len(),
                right: grid.cells(),
            });
        }
        let first = &self.components[0];
        if !(0.0..grid.horizon()).contains(&t) {
            return Ok(first.empty_like());
        }
        let i = ((t / grid.cell_width()) as usize).min(grid.cells() - 1);
        Ok(self.components[i].scale(1.0 / grid.cell_width().sqrt()))
    }
}

/// `A_mode X` (0-based mode).
pub fn annihilate(x: &ChaosVector, mode: usize) -> Result<ChaosVector> {
    if mode >= x.modes() {
        return Err(Error::ModeOutOfRange {
            mode,
            modes: x.modes(),
        });
    }
    let unit = MultiIndex::unit(x.modes(), mode);
    ChaosVector::from_terms(
        x.modes(),
        x.order(),
        x.iter().filter_map(|(alpha, c)| {
            let k = alpha.get(mode);
            alpha.checked_sub(&unit).map(|rest| (rest, c * k as f64))
        }),
    )
    .map(|r| r.with_truncation(x.is_truncated()))
}

/// `A^beta X`: `H_alpha -> alpha! / (alpha - beta)! H_{alpha - beta}`.
pub fn annihilate_multi(x: &ChaosVector, beta: &MultiIndex) -> Result<ChaosVector> {
    if beta.len() != x.modes() {
        return Err(Error::IndexLength {
            expected: x.modes(),
            got: beta.len(),
        });
    }
    ChaosVector::from_terms(
        x.modes(),
        x.order(),
        x.iter().filter_map(|(alpha, c)| {
            let rest = alpha.checked_sub(beta)?;
            let falling: f64 = alpha
                .exponents()
                .iter()
                .zip(rest.exponents())
                .map(|(&a, &r)| (factorial_exact(a as usize) / factorial_exact(r as usize)) as f64)
                .product();
            Some((rest, c * falling))
        }),
    )
    .map(|r| r.with_truncation(x.is_truncated()))
}

pub fn derivative_field(x: &ChaosVector) -> Result<DerivativeField> {
    let components = (0..x.modes())
        .map(|i| annihilate(x, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(DerivativeField { components })
}

/// Multinomial `n! / beta!` with `n = |beta|`, exact in integers.
fn multinomial(beta: &MultiIndex) -> f64 {
    let n = beta.degree();
    let denom: u128 = beta
        .exponents()
        .iter()
        .map(|&b| factorial_exact(b as usize))
        .product();
    (factorial_exact(n) / denom) as f64
}

/// `int_{[0,T]^n} D^n X * D^n Y dt` for an arbitrary bilinear `product`
/// taking the place of `*`.
///
/// Only `beta` below the componentwise exponent bound shared by `X` and `Y`
/// can contribute, so the `O(m^n)` sum is restricted to those.
pub fn derivative_contraction<F>(
    x: &ChaosVector,
    y: &ChaosVector,
    n: usize,
    product: F,
) -> Result<ChaosVector>
where
    F: Fn(&ChaosVector, &ChaosVector) -> Result<ChaosVector> + Sync,
{
    if x.modes() != y.modes() {
        return Err(Error::ModeMismatch {
            left: x.modes(),
            right: y.modes(),
        });
    }
    if n == 0 {
        return product(x, y);
    }
    let bound: Vec<u8> = x
        .exponent_bound()
        .iter()
        .zip(y.exponent_bound().iter())
        .map(|(a, b)| *a.min(b))
        .collect();
    let betas = MultiIndex::bounded_of_degree(&bound, n);
    let term = |beta: &MultiIndex| -> Result<ChaosVector> {
        let ax = annihilate_multi(x, beta)?;
        let ay = annihilate_multi(y, beta)?;
        Ok(product(&ax, &ay)?.scale(multinomial(beta)))
    };
    let terms: Vec<ChaosVector> = if betas.len() >= PARALLEL_THRESHOLD {
        betas.par_iter().map(term).collect::<Result<_>>()?
    } else {
        betas.iter().map(term).collect::<Result<_>>()?
    };
    // Fixed summation order keeps results bit-reproducible.
    let mut acc = x.empty_like().with_truncation(x.is_truncated() || y.is_truncated());
    for t in &terms {
        acc = acc.add(t)?;
    }
    Ok(acc)
}

/// `int_{[0,T]^n} D^n X . D^n Y dt` with the pointwise product.
pub fn iterated_pairing(x: &ChaosVector, y: &ChaosVector, n: usize) -> Result<ChaosVector> {
    derivative_contraction(x, y, n, ChaosVector::pointwise_product)
}

/// Both sides of `sum_n (1/n!) E[int |D^n X|^2] = ||X||^2_{G_sqrt2}`.
pub fn smoothness_norm_identity(x: &ChaosVector) -> Result<(f64, f64)> {
    let mut lhs = 0.0;
    for n in 0..=x.degree() {
        let pairing = iterated_pairing(x, x, n)?;
        lhs += pairing.expectation() / factorial_exact(n) as f64;
    }
    let rhs = x.norm_g(2f64.sqrt())?.powi(2);
    Ok((lhs, rhs))
}
