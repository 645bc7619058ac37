//! Functional calculus `f°(X) = Gamma(1/sqrt2) f(Gamma(sqrt2) X)` and the
//! heat-equation representation `u(t, B_t) = f°(B_t)`.
//!
//! Polynomial initial data give exact coefficient-level checks. Bounded
//! entire data (`cos`) are checked statistically through the pairing
//! `E[u(t,B_t) E(h)] = E[f°(B_t) E(h)]`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::basis::{L2Function, TimeGrid};
use crate::chaos::hermite::{binomial, factorial, odd_double_factorial};
use crate::chaos::{gaussian_of, stochastic_exponential, ChaosVector};
use crate::error::{Error, Result};
use crate::products::anti_wick_series;
use crate::sampling::mc_mean;

/// Default Gauss-Hermite node count.
pub const DEFAULT_NODES: usize = 40;
/// Default Taylor truncation degree for entire initial data.
pub const DEFAULT_TAYLOR_DEGREE: usize = 16;

/// Real polynomial `sum_k c_k x^k`, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Poly1D {
    coeffs: Vec<f64>,
}

impl Poly1D {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self::new(c)
    }

    /// Taylor polynomial of `e^x` through `x^degree`.
    pub fn exp_taylor(degree: usize) -> Self {
        Self::new((0..=degree).map(|k| 1.0 / factorial(k)).collect())
    }

    /// Taylor polynomial of `cos x` through `x^degree`.
    pub fn cos_taylor(degree: usize) -> Self {
        Self::new(
            (0..=degree)
                .map(|k| match k % 4 {
                    0 => 1.0 / factorial(k),
                    2 => -1.0 / factorial(k),
                    _ => 0.0,
                })
                .collect(),
        )
    }

    /// Parameter-`t` Hermite polynomial with leading coefficient one,
    /// `h_{n+1,t} = x h_{n,t} - n t h_{n-1,t}`.
    pub fn hermite_t(n: usize, t: f64) -> Self {
        let mut prev = Self::constant(1.0);
        if n == 0 {
            return prev;
        }
        let mut cur = Self::monomial(1);
        for k in 1..n {
            let next = cur.mul(&Self::monomial(1)).add(&prev.scale(-(k as f64) * t));
            prev = cur;
            cur = next;
        }
        cur
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&0.0) + other.coeffs.get(k).unwrap_or(&0.0))
                .collect(),
        )
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(vec![]);
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| k as f64 * c)
                .collect(),
        )
    }
}

/// `u(t, x) = E[f(x + sqrt(t) Z)]` as a bivariate polynomial:
/// map `(power of t, power of x) -> coefficient`.
pub fn heat_terms(f: &Poly1D) -> BTreeMap<(usize, usize), f64> {
    let mut terms = BTreeMap::new();
    for (k, &c) in f.coeffs().iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        for j in 0..=k / 2 {
            let w = binomial(k, 2 * j) * odd_double_factorial(j);
            *terms.entry((j, k - 2 * j)).or_insert(0.0) += c * w;
        }
    }
    terms
}

/// Exact polynomial solution of `u_t = u_xx / 2`, `u(0, .) = f`, at time `t`.
pub fn heat_solution_poly(f: &Poly1D, t: f64) -> Poly1D {
    let mut coeffs = vec![0.0; f.coeffs().len()];
    for ((j, p), c) in heat_terms(f) {
        coeffs[p] += c * t.powi(j as i32);
    }
    Poly1D::new(coeffs)
}

/// Gauss-Hermite rule for `E[g(Z)]`, `Z ~ N(0, 1)`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        // Newton iteration on the orthonormal physicists' recurrence, then
        // rescaled to the standard normal weight.
        let pim4 = std::f64::consts::PI.powf(-0.25);
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        let nf = n as f64;
        let mut z = 0.0f64;
        for i in 0..n.div_ceil(2) {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * x[0],
                3 => 1.91 * z - 0.91 * x[1],
                _ => 2.0 * z - x[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..100 {
                let mut p1 = pim4;
                let mut p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
                }
                pp = (2.0 * nf).sqrt() * p2;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            x[i] = z;
            x[n - 1 - i] = -z;
            w[i] = 2.0 / (pp * pp);
            w[n - 1 - i] = w[i];
        }
        let sqrt_pi = std::f64::consts::PI.sqrt();
        Self {
            nodes: x.iter().map(|v| v * 2f64.sqrt()).collect(),
            weights: w.iter().map(|v| v / sqrt_pi).collect(),
        }
    }

    pub fn expectation<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * g(z))
            .sum()
    }
}

/// `E[f(x + sqrt(t) Z)]` by `nodes`-point Gauss-Hermite quadrature.
pub fn heat_solution_quadrature<F: Fn(f64) -> f64>(f: F, t: f64, x: f64, nodes: usize) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    let rule = GaussHermite::new(nodes);
    let s = t.sqrt();
    Ok(rule.expectation(|z| f(x + s * z)))
}

/// Quadrature value together with its change when the node count doubles.
pub fn heat_solution_quadrature_checked<F: Fn(f64) -> f64>(
    f: F,
    t: f64,
    x: f64,
    nodes: usize,
) -> Result<(f64, f64)> {
    let coarse = heat_solution_quadrature(&f, t, x, nodes)?;
    let fine = heat_solution_quadrature(&f, t, x, 2 * nodes)?;
    Ok((fine, (fine - coarse).abs()))
}

/// `p(X)` by Horner's scheme on the pointwise product. Exact when
/// `deg p * deg X <= N`; otherwise the result is flagged truncated.
pub fn poly_of_chaos(p: &Poly1D, x: &ChaosVector) -> Result<ChaosVector> {
    let (m, n) = (x.modes(), x.order());
    let mut acc = ChaosVector::constant(*p.coeffs().last().unwrap_or(&0.0), m, n)?;
    for &c in p.coeffs().iter().rev().skip(1) {
        acc = acc
            .pointwise_product(x)?
            .add(&ChaosVector::constant(c, m, n)?)?;
    }
    Ok(acc)
}

/// `f°(X) = Gamma(1/sqrt2) p(Gamma(sqrt2) X)`.
pub fn functional_calculus(p: &Poly1D, x: &ChaosVector) -> Result<ChaosVector> {
    let s = 2f64.sqrt();
    poly_of_chaos(p, &x.gamma_scale(s)?)?.gamma_scale(1.0 / s)
}

fn brownian(grid: TimeGrid, order: usize, t: f64) -> Result<ChaosVector> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let ind = L2Function::indicator(grid, t)?;
    gaussian_of(&ind, order.max(1))
}

/// Outcome of a coefficient-level identity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientCheck {
    /// `max |lhs - rhs| / (1 + max |coeff|)`.
    pub residual: f64,
    /// `||lhs||_2` and `||rhs||_2`.
    pub lhs_norm: f64,
    pub rhs_norm: f64,
    pub truncated: bool,
}

impl CoefficientCheck {
    pub fn compare(lhs: &ChaosVector, rhs: &ChaosVector) -> Result<Self> {
        Ok(Self {
            residual: lhs.residual(rhs)?,
            lhs_norm: lhs.norm_l2(),
            rhs_norm: rhs.norm_l2(),
            truncated: lhs.is_truncated() || rhs.is_truncated(),
        })
    }
}

/// `u(t, B_t)` against `f°(B_t)` for polynomial `f`; `t` must be a grid node.
pub fn representation_check(f: &Poly1D, grid: TimeGrid, order: usize, t: f64) -> Result<CoefficientCheck> {
    let b = brownian(grid, order, t)?;
    let lhs = poly_of_chaos(&heat_solution_poly(f, t), &b)?;
    let rhs = functional_calculus(f, &b)?;
    CoefficientCheck::compare(&lhs, &rhs)
}

/// `u(t, B_t) o v(t, B_t)` against `w(t, B_t)` where `w` solves the heat
/// equation with data `f g`.
pub fn product_representation_check(
    f: &Poly1D,
    g: &Poly1D,
    grid: TimeGrid,
    order: usize,
    t: f64,
) -> Result<CoefficientCheck> {
    let b = brownian(grid, order, t)?;
    let u = poly_of_chaos(&heat_solution_poly(f, t), &b)?;
    let v = poly_of_chaos(&heat_solution_poly(g, t), &b)?;
    let lhs = anti_wick_series(&u, &v)?;
    let rhs = poly_of_chaos(&heat_solution_poly(&f.mul(g), t), &b)?;
    CoefficientCheck::compare(&lhs, &rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentialCheck {
    /// `max_alpha |exp°(I_1(h)) - e^{|h|^2} E(h)|`.
    pub residual: f64,
    /// Largest per-coefficient Taylor tail.
    pub tail_bound: f64,
    /// Every coefficient difference lies within its own tail bound
    /// (plus the identity tolerance).
    pub within_tail: bool,
    /// `max_alpha |exp<>(I_1(h)) - E(h)|`.
    pub wick_residual: f64,
}

/// `exp°(int h dB) = exp(int h dB + 1/2 int h^2 ds) = e^{|h|^2} E(h)`, with
/// `exp` truncated after `x^order` so Horner stays inside the cap.
///
/// The truncated Taylor series misses, in the `H_alpha` coefficient,
/// exactly `|h^alpha| / alpha! * sum_{i >= i0} |h|^{2i} / i!` with
/// `i0 = floor((order - |alpha|) / 2) + 1`; that sum is the tail bound.
pub fn exponential_check(h: &L2Function, order: usize) -> Result<ExponentialCheck> {
    let x = gaussian_of(h, order)?;
    let lhs = functional_calculus(&Poly1D::exp_taylor(order), &x)?;
    let norm_sq = h.norm_sq();
    let rhs = stochastic_exponential(h, order)?.scale(norm_sq.exp());

    let exp_tail = |from: usize| -> f64 {
        let mut term = (0..from).fold(1.0, |acc, i| acc * norm_sq / (i + 1) as f64);
        let mut sum = 0.0;
        let mut i = from;
        while term > 1e-300 && i < from + 400 {
            sum += term;
            i += 1;
            term *= norm_sq / i as f64;
        }
        sum
    };

    let mut residual = 0.0f64;
    let mut tail_bound = 0.0f64;
    let mut within_tail = true;
    let scale = 1.0 + lhs.max_abs_coeff().max(rhs.max_abs_coeff());
    let keys: Vec<_> = lhs.iter().chain(rhs.iter()).map(|(a, _)| a.clone()).collect();
    for alpha in keys {
        let diff = (lhs.coeff(&alpha) - rhs.coeff(&alpha)).abs();
        let j = alpha.degree();
        let i0 = (order - j) / 2 + 1;
        let bound = alpha.monomial(h.coeffs()).abs() / alpha.factorial() * exp_tail(i0);
        residual = residual.max(diff);
        tail_bound = tail_bound.max(bound);
        if diff > bound * (1.0 + 1e-9) + crate::chaos::REL_TOL * scale {
            within_tail = false;
        }
    }

    let mut wick_exp = ChaosVector::constant(1.0, x.modes(), order)?;
    let mut power = wick_exp.clone();
    for k in 1..=order {
        power = power.wick_product(&x)?;
        wick_exp = wick_exp.axpy(1.0 / factorial(k), &power)?;
    }
    let wick_residual = wick_exp.max_abs_diff(&stochastic_exponential(h, order)?)?;

    Ok(ExponentialCheck {
        residual,
        tail_bound,
        within_tail,
        wick_residual,
    })
}

/// Initial data admitting both pointwise evaluation and a Taylor polynomial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AnalyticData {
    Polynomial(Poly1D),
    Cos,
    Exp,
}

impl AnalyticData {
    pub fn name(&self) -> String {
        match self {
            Self::Polynomial(p) => format!("poly{:?}", p.coeffs()),
            Self::Cos => "cos".into(),
            Self::Exp => "exp".into(),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Self::Polynomial(p) => p.eval(x),
            Self::Cos => x.cos(),
            Self::Exp => x.exp(),
        }
    }

    pub fn taylor(&self, degree: usize) -> Poly1D {
        match self {
            Self::Polynomial(p) => p.clone(),
            Self::Cos => Poly1D::cos_taylor(degree),
            Self::Exp => Poly1D::exp_taylor(degree),
        }
    }

    /// Lagrange bound on `|f(x) - taylor_degree(x)|` over `|x| <= r`.
    pub fn remainder_bound(&self, degree: usize, r: f64) -> f64 {
        let base = r.powi(degree as i32 + 1) / factorial(degree + 1);
        match self {
            Self::Polynomial(p) if p.degree() <= degree => 0.0,
            Self::Polynomial(_) => f64::INFINITY,
            Self::Cos => base,
            Self::Exp => base * r.exp(),
        }
    }
}

/// Monte Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    pub confidence_sigma: f64,
    pub taylor_degree: usize,
    pub quadrature_nodes: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 42,
            confidence_sigma: 3.0,
            taylor_degree: DEFAULT_TAYLOR_DEGREE,
            quadrature_nodes: DEFAULT_NODES,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McPairing {
    /// Monte Carlo `E[u(t, B_t) E(h)]`.
    pub lhs: f64,
    /// Exact `E[f°(B_t) E(h)]` from the chaos coefficients.
    pub rhs: f64,
    /// Standard error of `lhs`.
    pub sigma: f64,
    pub samples: usize,
    pub seed: u64,
    /// Bound on `|rhs - E[f(sqrt2 B_t + int_0^t h)]|` from truncating `f`
    /// to its Taylor polynomial.
    pub taylor_tail: f64,
    pub truncated: bool,
}

impl McPairing {
    pub fn agrees(&self, sigmas: f64) -> bool {
        (self.lhs - self.rhs).abs() <= sigmas * self.sigma
    }
}

/// `E[u(t, B_t) E(h)]` by sampling against `E[f°(B_t) E(h)]` in closed form.
pub fn mc_pairing_check(
    f: &AnalyticData,
    grid: TimeGrid,
    t: f64,
    h: &L2Function,
    cfg: &McConfig,
) -> Result<McPairing> {
    if cfg.samples == 0 {
        return Err(Error::Config("samples must be >= 1".into()));
    }
    let order = cfg.taylor_degree.max(1);
    let taylor = f.taylor(cfg.taylor_degree);
    let b = brownian(grid, order, t)?;
    let rhs_chaos = functional_calculus(&taylor, &b)?;
    let rhs = rhs_chaos.pair_expectation(h)?;

    let ind = L2Function::indicator(grid, t)?;
    let rule = GaussHermite::new(cfg.quadrature_nodes);
    let st = t.sqrt();
    let h_norm_sq = h.norm_sq();
    let est = mc_mean(grid.cells(), cfg.samples, cfg.seed, |xi| {
        let bt: f64 = ind.coeffs().iter().zip(xi).map(|(a, x)| a * x).sum();
        let drift: f64 = h.coeffs().iter().zip(xi).map(|(a, x)| a * x).sum();
        let u = if t > 0.0 {
            rule.expectation(|z| f.value(bt + st * z))
        } else {
            f.value(bt)
        };
        u * (drift - 0.5 * h_norm_sq).exp()
    });

    // rhs pairs the Taylor polynomial, so it equals E[T(s + sqrt2 B_t)];
    // its bias against f is at most the expected Lagrange remainder.
    let shift = h.inner_product(&ind)?;
    let spread = (2.0 * t).sqrt();
    let taylor_tail = rule.expectation(|z| f.remainder_bound(cfg.taylor_degree, (shift + spread * z).abs()));
    Ok(McPairing {
        lhs: est.mean,
        rhs,
        sigma: est.std_error,
        samples: cfg.samples,
        seed: cfg.seed,
        taylor_tail,
        truncated: rhs_chaos.is_truncated(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::MultiIndex;

    fn grid() -> TimeGrid {
        TimeGrid::uniform(1.0, 4).unwrap()
    }

    // Gaussian moments E[(x + sqrt(t) Z)^k] expanded by hand.
    #[test]
    fn heat_solution_examples() {
        let t = 0.7;
        assert_eq!(
            heat_solution_poly(&Poly1D::monomial(2), t),
            Poly1D::new(vec![t, 0.0, 1.0])
        );
        let cubic = heat_solution_poly(&Poly1D::monomial(3), t);
        assert!((cubic.coeffs()[1] - 3.0 * t).abs() < 1e-15);
        assert_eq!(cubic.coeffs()[3], 1.0);
        let quartic = heat_solution_poly(&Poly1D::monomial(4), 0.25);
        assert_eq!(quartic, Poly1D::new(vec![3.0 * 0.0625, 0.0, 1.5, 0.0, 1.0]));
        let f = Poly1D::new(vec![3.0, -2.0, 0.0, 1.0]);
        assert_eq!(heat_solution_poly(&f, 0.0), f);
    }

    #[test]
    fn heat_semigroup() {
        let f = Poly1D::new(vec![1.0, -0.5, 2.0, 0.0, 0.25, 1.5]);
        let (t, s) = (0.3, 0.45);
        let two_step = heat_solution_poly(&heat_solution_poly(&f, t), s);
        let one_step = heat_solution_poly(&f, t + s);
        for (a, b) in two_step.coeffs().iter().zip(one_step.coeffs()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn heat_terms_solve_the_pde() {
        // d/dt t^j x^p = j t^{j-1} x^p ; (1/2) d2/dx2 = p(p-1)/2 t^j x^{p-2}
        let f = Poly1D::new(vec![0.5, 1.0, -3.0, 2.0, 0.0, 1.0, 4.0]);
        let terms = heat_terms(&f);
        let mut dt = BTreeMap::new();
        let mut dxx = BTreeMap::new();
        for (&(j, p), &c) in &terms {
            if j > 0 {
                *dt.entry((j - 1, p)).or_insert(0.0) += j as f64 * c;
            }
            if p > 1 {
                *dxx.entry((j, p - 2)).or_insert(0.0) += 0.5 * (p * (p - 1)) as f64 * c;
            }
        }
        assert_eq!(dt, dxx);
        let initial: Vec<f64> = (0..f.coeffs().len())
            .map(|p| terms.get(&(0, p)).copied().unwrap_or(0.0))
            .collect();
        assert_eq!(initial, f.coeffs());
    }

    #[test]
    fn gauss_hermite_moments() {
        let rule = GaussHermite::new(DEFAULT_NODES);
        assert!((rule.expectation(|_| 1.0) - 1.0).abs() < 1e-13);
        assert!(rule.expectation(|z| z).abs() < 1e-13);
        assert!((rule.expectation(|z| z * z) - 1.0).abs() < 1e-12);
        assert!((rule.expectation(|z| z.powi(4)) - 3.0).abs() < 1e-11);
        assert!((rule.expectation(|z| z.powi(6)) - 15.0).abs() < 1e-10);
    }

    #[test]
    fn quadrature_examples() {
        for &(t, x) in &[(0.5, 0.3), (1.0, -1.2), (0.25, 2.0)] {
            let u = heat_solution_quadrature(f64::cos, t, x, DEFAULT_NODES).unwrap();
            assert!((u - (-t / 2.0f64).exp() * x.cos()).abs() < 1e-10);
            assert!((heat_solution_quadrature(|_| 1.0, t, x, 10).unwrap() - 1.0).abs() < 1e-14);
            assert!((heat_solution_quadrature(|y| y, t, x, 10).unwrap() - x).abs() < 1e-13);
        }
        assert!(heat_solution_quadrature(f64::cos, 0.0, 1.0, 10).is_err());
        let (_, change) = heat_solution_quadrature_checked(f64::cos, 1.0, 0.5, 20).unwrap();
        assert!(change < 1e-10);
    }

    #[test]
    fn poly_of_chaos_examples() {
        let g = grid();
        let b1 = gaussian_of(&L2Function::indicator(g, 1.0).unwrap(), 6).unwrap();
        let sq = poly_of_chaos(&Poly1D::monomial(2), &b1).unwrap();
        assert!((sq.expectation() - 1.0).abs() < 1e-15);
        assert_eq!(
            poly_of_chaos(&Poly1D::constant(2.0), &b1).unwrap(),
            ChaosVector::constant(2.0, 4, 6).unwrap()
        );
        let p = Poly1D::new(vec![1.0, -2.0, 0.5, 0.25]);
        let v = poly_of_chaos(&p, &b1).unwrap();
        assert!(!v.is_truncated());
        let mut rng = crate::sampling::stream_rng(3, 0);
        for _ in 0..100 {
            use rand::Rng;
            let xi: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
            let bt = b1.eval(&xi).unwrap();
            let got = v.eval(&xi).unwrap();
            assert!((got - p.eval(bt)).abs() < 1e-10 * (1.0 + got.abs()));
        }
        let over = poly_of_chaos(&Poly1D::monomial(7), &b1).unwrap();
        assert!(over.is_truncated());
    }

    #[test]
    fn functional_calculus_examples() {
        let g = grid();
        for &t in &[0.25, 0.5, 1.0] {
            let b = gaussian_of(&L2Function::indicator(g, t).unwrap(), 6).unwrap();
            let sq = functional_calculus(&Poly1D::monomial(2), &b).unwrap();
            let expected = poly_of_chaos(&Poly1D::new(vec![t, 0.0, 1.0]), &b).unwrap();
            assert!(sq.residual(&expected).unwrap() < 1e-14);
            let cube = functional_calculus(&Poly1D::monomial(3), &b).unwrap();
            let expected = poly_of_chaos(&Poly1D::new(vec![0.0, 3.0 * t, 0.0, 1.0]), &b).unwrap();
            assert!(cube.residual(&expected).unwrap() < 1e-14);
            let lin = functional_calculus(&Poly1D::monomial(1), &b).unwrap();
            assert!(lin.residual(&b).unwrap() < 1e-15);
        }
        // B_0 = 0 maps to the constant f(0).
        let b0 = gaussian_of(&L2Function::indicator(g, 0.0).unwrap(), 6).unwrap();
        let f = Poly1D::new(vec![3.0, -2.0, 0.0, 1.0]);
        assert_eq!(
            functional_calculus(&f, &b0).unwrap(),
            ChaosVector::constant(3.0, 4, 6).unwrap()
        );
    }

    #[test]
    fn representation_examples() {
        let g = TimeGrid::uniform(1.0, 8).unwrap();
        let r = representation_check(&Poly1D::monomial(2), g, 12, 0.5).unwrap();
        assert!(r.residual < 1e-15);
        assert_eq!(
            representation_check(&Poly1D::constant(4.0), g, 12, 0.5).unwrap().residual,
            0.0
        );
        assert!(representation_check(&Poly1D::monomial(4), g, 12, 0.25).unwrap().residual <= 1e-9);
        assert!(representation_check(&Poly1D::monomial(2), g, 12, 0.3).is_err());
        assert_eq!(
            representation_check(&Poly1D::monomial(3), g, 12, 0.0).unwrap().residual,
            0.0
        );
    }

    #[test]
    fn product_representation_examples() {
        let g = TimeGrid::uniform(1.0, 8).unwrap();
        let x = Poly1D::monomial(1);
        assert!(product_representation_check(&x, &x, g, 12, 0.5).unwrap().residual < 1e-15);
        let c = Poly1D::constant(-2.0);
        assert!(product_representation_check(&c, &Poly1D::monomial(3), g, 12, 0.25).unwrap().residual < 1e-14);
        assert!(product_representation_check(&Poly1D::monomial(2), &x, g, 12, 0.5).unwrap().residual <= 1e-9);
    }

    #[test]
    fn exponential_check_examples() {
        let g = TimeGrid::uniform(1.0, 8).unwrap();
        let zero = exponential_check(&L2Function::zero(g), 12).unwrap();
        assert_eq!(zero.residual, 0.0);
        assert_eq!(zero.wick_residual, 0.0);
        let e1 = L2Function::basis_vector(g, 0).unwrap();
        let out = exponential_check(&e1, 20).unwrap();
        assert!(out.within_tail, "{out:?}");
        assert!(out.residual <= out.tail_bound * (1.0 + 1e-9) + 1e-9);
        assert!(out.wick_residual < 1e-12);
    }

    #[test]
    fn exponential_check_needs_the_squared_integrand() {
        // e^{int h^2} E(h) differs from the variant with e^{int h ds} in the exponent.
        let g = TimeGrid::uniform(1.0, 8).unwrap();
        let h = L2Function::basis_vector(g, 0).unwrap().scale(0.5);
        let x = gaussian_of(&h, 20).unwrap();
        let lhs = functional_calculus(&Poly1D::exp_taylor(20), &x).unwrap();
        let unsquared = h.integral_to(1.0).unwrap();
        let wrong = stochastic_exponential(&h, 20)
            .unwrap()
            .scale((unsquared - 0.5 * h.norm_sq() + 0.5 * h.norm_sq()).exp());
        assert!(lhs.max_abs_diff(&wrong).unwrap() > 1e-3);
        let right = stochastic_exponential(&h, 20).unwrap().scale(h.norm_sq().exp());
        assert!(lhs.max_abs_diff(&right).unwrap() < 1e-12);
    }

    #[test]
    fn mc_pairing_examples() {
        let g = TimeGrid::uniform(1.0, 2).unwrap();
        let cfg = McConfig {
            samples: 50_000,
            ..McConfig::default()
        };
        let one = AnalyticData::Polynomial(Poly1D::constant(1.0));
        let r = mc_pairing_check(&one, g, 0.5, &L2Function::zero(g), &cfg).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12 && (r.rhs - 1.0).abs() < 1e-12);

        // E[e^{-t/2} cos(B_t)] = e^{-t}.
        let r = mc_pairing_check(&AnalyticData::Cos, g, 0.5, &L2Function::zero(g), &cfg).unwrap();
        let rule = GaussHermite::new(60);
        let oracle = rule.expectation(|z| (-0.25f64).exp() * (0.5f64.sqrt() * z).cos());
        assert!((oracle - (-0.5f64).exp()).abs() < 1e-12);
        assert!((r.rhs - oracle).abs() < 1e-6);
        assert!(r.agrees(3.0), "{r:?}");

        let e1 = L2Function::basis_vector(g, 0).unwrap();
        let r = mc_pairing_check(&AnalyticData::Cos, g, 1.0, &e1, &cfg).unwrap();
        // Girsanov: E[cos(sqrt2 B_t + int_0^t h)] = e^{-t} cos(int_0^t h).
        let shift = e1.integral_to(1.0).unwrap();
        // The exact pairing of the degree-16 Taylor polynomial is
        // E[T_16(s + sqrt2 B_t)]; the Taylor bias against cos is ~1e-5.
        let taylor = Poly1D::cos_taylor(16);
        let exact = rule.expectation(|z| taylor.eval(shift + 2f64.sqrt() * z));
        assert!((r.rhs - exact).abs() < 1e-12);
        assert!((r.rhs - (-1f64).exp() * shift.cos()).abs() <= r.taylor_tail);
        assert!(r.taylor_tail < 1e-4);
        assert!(r.agrees(3.0), "{r:?}");
    }

    #[test]
    fn parameter_hermite() {
        let h3 = Poly1D::hermite_t(3, 0.5);
        assert_eq!(h3, Poly1D::new(vec![0.0, -1.5, 0.0, 1.0]));
        assert_eq!(Poly1D::hermite_t(0, 2.0), Poly1D::constant(1.0));
        // Wick powers of xi are the t = 1 polynomials.
        let xi = ChaosVector::basis_element(1, 6, MultiIndex::new(&[1])).unwrap();
        let w = xi.wick_power(4).unwrap();
        let p = poly_of_chaos(&Poly1D::hermite_t(4, 1.0), &xi).unwrap();
        assert!(w.residual(&p).unwrap() < 1e-14);
    }
}
