//! Probabilists' Hermite polynomials and the exact integer combinatorics
//! behind their products.

use std::sync::OnceLock;

use super::MAX_ORDER;

/// Largest `n` with `n!` representable in `u128`.
const MAX_EXACT_FACTORIAL: usize = 34;

fn factorial_table() -> &'static [u128; MAX_EXACT_FACTORIAL + 1] {
    static TABLE: OnceLock<[u128; MAX_EXACT_FACTORIAL + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1u128; MAX_EXACT_FACTORIAL + 1];
        for n in 1..=MAX_EXACT_FACTORIAL {
            t[n] = t[n - 1] * n as u128;
        }
        t
    })
}

/// `n!` as an exact integer.
pub fn factorial_exact(n: usize) -> u128 {
    factorial_table()[n]
}

/// `n!`, rounded to `f64` only after the exact integer product.
pub fn factorial(n: usize) -> f64 {
    factorial_exact(n) as f64
}

/// Exact binomial coefficient.
pub fn binomial_exact(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    // Multiplicative formula keeps every intermediate an integer.
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn binomial(n: usize, k: usize) -> f64 {
    binomial_exact(n, k) as f64
}

/// `(2j - 1)!!`, with `(-1)!! = 1`.
pub fn odd_double_factorial(j: usize) -> f64 {
    (1..=j).fold(1u128, |acc, i| acc * (2 * i - 1) as u128) as f64
}

/// Weight of `h_{a+b-2k}` in `h_a h_b`: `k! C(a,k) C(b,k)`.
pub fn linearization(a: usize, b: usize, k: usize) -> f64 {
    let n = MAX_ORDER + 1;
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for k in 0..=a.min(b) {
                    // 30! * C(30,15)^2 overflows u128; split into two exact factors.
                    let left = factorial_exact(k) * binomial_exact(a, k);
                    t[(a * n + b) * n + k] = left as f64 * binomial_exact(b, k) as f64;
                }
            }
        }
        t
    });
    if a >= n || b >= n || k > a.min(b) {
        return 0.0;
    }
    table[(a * n + b) * n + k]
}

/// `h_k(x)` by the three-term recurrence `h_{k+1} = x h_k - k h_{k-1}`.
pub fn hermite(k: usize, x: f64) -> f64 {
    hermite_values(x, k)[k]
}

/// `[h_0(x), ..., h_up_to(x)]`.
pub fn hermite_values(x: f64, up_to: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(up_to + 1);
    out.push(1.0);
    if up_to >= 1 {
        out.push(x);
    }
    for k in 1..up_to {
        let next = x * out[k] - k as f64 * out[k - 1];
        out.push(next);
    }
    out
}
