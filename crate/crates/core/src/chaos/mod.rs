//! Sparse truncated Wiener-Ito chaos expansions.
//!
//! A [`ChaosVector`] stores `X = sum_alpha c_alpha H_alpha(xi)` over
//! multi-indices of total degree at most the order cap `N`, where
//! `xi_i = int e_i dB` are independent standard Gaussians and `h_k` are the
//! monic probabilists' Hermite polynomials (`E[h_k(xi)^2] = k!`).
//!
//! Products that would create terms above the cap drop them and set the
//! [`ChaosVector::is_truncated`] flag, so exactness can always be asserted.

pub mod hermite;
mod multi_index;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::basis::L2Function;
use crate::error::{Error, Result};

pub use multi_index::MultiIndex;

/// Largest supported order cap; factorial tables are exact up to here.
/// Desk-scale runs stay within `m <= 12`, `N <= 20`.
pub const MAX_ORDER: usize = 30;

/// Relative coefficient tolerance for identity checks.
pub const REL_TOL: f64 = 1e-9;
/// Absolute coefficient tolerance for identity checks.
pub const ABS_TOL: f64 = 1e-12;

/// Truncated chaos expansion over `m` Gaussian modes with order cap `N`.
#[derive(Debug, Clone)]
pub struct ChaosVector {
    modes: usize,
    order: usize,
    coeffs: BTreeMap<MultiIndex, f64>,
    truncated: bool,
}

impl PartialEq for ChaosVector {
    fn eq(&self, other: &Self) -> bool {
        self.modes == other.modes && self.order == other.order && self.coeffs == other.coeffs
    }
}

impl ChaosVector {
    pub fn zero(modes: usize, order: usize) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge(order));
        }
        if modes == 0 {
            return Err(Error::Config("chaos vectors need at least one mode".into()));
        }
        Ok(Self {
            modes,
            order,
            coeffs: BTreeMap::new(),
            truncated: false,
        })
    }

    pub fn constant(c: f64, modes: usize, order: usize) -> Result<Self> {
        let mut x = Self::zero(modes, order)?;
        if c != 0.0 {
            x.coeffs.insert(MultiIndex::zero(modes), c);
        }
        Ok(x)
    }

    /// Builds a vector from `(alpha, c)` pairs. Repeated indices are summed;
    /// indices above the cap are dropped and flag the result as truncated.
    pub fn from_terms<I>(modes: usize, order: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        let mut x = Self::zero(modes, order)?;
        let mut acc = HashMap::new();
        for (alpha, c) in terms {
            if alpha.len() != modes {
                return Err(Error::IndexLength {
                    expected: modes,
                    got: alpha.len(),
                });
            }
            if alpha.degree() > order {
                x.truncated |= c != 0.0;
                continue;
            }
            *acc.entry(alpha).or_insert(0.0) += c;
        }
        x.absorb(acc);
        Ok(x)
    }

    /// The single basis functional `H_alpha`.
    pub fn basis_element(modes: usize, order: usize, alpha: MultiIndex) -> Result<Self> {
        Self::from_terms(modes, order, [(alpha, 1.0)])
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when some operation producing this vector dropped terms above the cap.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn with_truncation(mut self, flag: bool) -> Self {
        self.truncated |= flag;
        self
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> f64 {
        self.coeffs.get(alpha).copied().unwrap_or(0.0)
    }

    /// Terms in graded-lex order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.coeffs.iter().map(|(a, &c)| (a, c))
    }

    /// Largest stored total degree (0 for the zero vector).
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    /// Componentwise maximum exponent over the stored terms.
    pub fn exponent_bound(&self) -> SmallVec<[u8; 12]> {
        let mut bound: SmallVec<[u8; 12]> = smallvec::smallvec![0; self.modes];
        for alpha in self.coeffs.keys() {
            for (b, &a) in bound.iter_mut().zip(alpha.exponents()) {
                *b = (*b).max(a);
            }
        }
        bound
    }

    pub fn scale(&self, factor: f64) -> Self {
        let mut out = self.empty_like();
        out.truncated = self.truncated;
        if factor != 0.0 {
            out.coeffs = self
                .coeffs
                .iter()
                .map(|(a, &c)| (a.clone(), c * factor))
                .filter(|(_, c)| *c != 0.0)
                .collect();
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        out.truncated |= other.truncated;
        for (alpha, &c) in &other.coeffs {
            let entry = out.coeffs.entry(alpha.clone()).or_insert(0.0);
            *entry += a * c;
            if *entry == 0.0 {
                out.coeffs.remove(alpha);
            }
        }
        Ok(out)
    }

    /// `E[X]`, the coefficient of the zero index.
    pub fn expectation(&self) -> f64 {
        self.coeff(&MultiIndex::zero(self.modes))
    }

    /// `||X||_2 = (sum alpha! c_alpha^2)^{1/2}`.
    pub fn norm_l2(&self) -> f64 {
        self.weighted_norm_sq(1.0).sqrt()
    }

    /// `||X||_{G_lambda} = ||Gamma(lambda) X||_2`, defined for `lambda >= 1`.
    pub fn norm_g(&self, lambda: f64) -> Result<f64> {
        if lambda.is_nan() || lambda < 1.0 {
            return Err(Error::NormScaleBelowOne(lambda));
        }
        Ok(self.weighted_norm_sq(lambda * lambda).sqrt())
    }

    fn weighted_norm_sq(&self, lambda_sq: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(a, c)| a.factorial() * lambda_sq.powi(a.degree() as i32) * c * c)
            .sum()
    }

    /// Second quantization `Gamma(lambda)`: the degree-`n` chaos is scaled by `lambda^n`.
    pub fn gamma_scale(&self, lambda: f64) -> Result<Self> {
        if lambda.is_nan() || lambda <= 0.0 {
            return Err(Error::NonPositiveScale(lambda));
        }
        let mut out = self.empty_like();
        out.truncated = self.truncated;
        out.coeffs = self
            .coeffs
            .iter()
            .map(|(a, &c)| (a.clone(), c * lambda.powi(a.degree() as i32)))
            .filter(|(_, c)| *c != 0.0)
            .collect();
        Ok(out)
    }

    /// Value of the expansion at the Gaussian sample `xi`.
    pub fn eval(&self, xi: &[f64]) -> Result<f64> {
        if xi.len() != self.modes {
            return Err(Error::PointLength {
                expected: self.modes,
                got: xi.len(),
            });
        }
        let bound = self.exponent_bound();
        let tables: Vec<Vec<f64>> = xi
            .iter()
            .zip(&bound)
            .map(|(&x, &b)| hermite::hermite_values(x, b as usize))
            .collect();
        Ok(self
            .coeffs
            .iter()
            .map(|(alpha, c)| {
                let h: f64 = alpha
                    .exponents()
                    .iter()
                    .zip(&tables)
                    .map(|(&a, t)| t[a as usize])
                    .product();
                c * h
            })
            .sum())
    }

    /// Ordinary (pointwise in omega) product, via per-mode Hermite linearization
    /// `h_a h_b = sum_k k! C(a,k) C(b,k) h_{a+b-2k}`.
    pub fn pointwise_product(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.empty_like();
        out.truncated = self.truncated || other.truncated;
        let mut acc: HashMap<MultiIndex, f64> = HashMap::new();
        let cap = self.order;
        for (a, &ca) in &self.coeffs {
            for (b, &cb) in &other.coeffs {
                if a.degree() + b.degree() > cap {
                    out.truncated = true;
                }
                let w = ca * cb;
                expand_hermite_product(a.exponents(), b.exponents(), cap, &mut |gamma, lin| {
                    *acc.entry(gamma).or_insert(0.0) += w * lin;
                });
            }
        }
        out.absorb(acc);
        Ok(out)
    }

    /// Wick product: `H_alpha <> H_beta = H_{alpha+beta}`.
    pub fn wick_product(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.empty_like();
        out.truncated = self.truncated || other.truncated;
        let mut acc: HashMap<MultiIndex, f64> = HashMap::new();
        for (a, &ca) in &self.coeffs {
            for (b, &cb) in &other.coeffs {
                if a.degree() + b.degree() > self.order {
                    out.truncated = true;
                    continue;
                }
                *acc.entry(a.add(b)).or_insert(0.0) += ca * cb;
            }
        }
        out.absorb(acc);
        Ok(out)
    }

    /// `X^{<>n}`; the zeroth power is the constant one.
    pub fn wick_power(&self, n: usize) -> Result<Self> {
        let mut out = Self::constant(1.0, self.modes, self.order)?;
        for _ in 0..n {
            out = out.wick_product(self)?;
        }
        Ok(out)
    }

    /// S-transform pairing `E[X E(h)] = sum_alpha c_alpha h^alpha`.
    pub fn pair_expectation(&self, h: &L2Function) -> Result<f64> {
        if h.modes() != self.modes {
            return Err(Error::ModeMismatch {
                left: self.modes,
                right: h.modes(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(a, c)| c * a.monomial(h.coeffs()))
            .sum())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// `max_alpha |x_alpha - y_alpha|` over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.compatible(other)?;
        let mut worst = 0.0f64;
        for (a, &c) in &self.coeffs {
            worst = worst.max((c - other.coeff(a)).abs());
        }
        for (a, &c) in &other.coeffs {
            if !self.coeffs.contains_key(a) {
                worst = worst.max(c.abs());
            }
        }
        Ok(worst)
    }

    /// Scale-aware residual `max |x - y| / (1 + max(|x|, |y|))`.
    ///
    /// Coefficients that cancel to zero in one route keep rounding residue of
    /// the size of the largest coefficient, so the comparison is scaled by it.
    pub fn residual(&self, other: &Self) -> Result<f64> {
        let scale = 1.0 + self.max_abs_coeff().max(other.max_abs_coeff());
        Ok(self.max_abs_diff(other)? / scale)
    }

    /// Per-coefficient check `|x - y| <= abs + rel * max(|x|, |y|)`.
    pub fn approx_eq(&self, other: &Self, rel: f64, abs: f64) -> bool {
        if self.compatible(other).is_err() {
            return false;
        }
        let close = |x: f64, y: f64| (x - y).abs() <= abs + rel * x.abs().max(y.abs());
        self.coeffs.iter().all(|(a, &c)| close(c, other.coeff(a)))
            && other.coeffs.iter().all(|(a, &c)| close(c, self.coeff(a)))
    }

    pub(crate) fn empty_like(&self) -> Self {
        Self {
            modes: self.modes,
            order: self.order,
            coeffs: BTreeMap::new(),
            truncated: false,
        }
    }

    pub(crate) fn absorb(&mut self, acc: HashMap<MultiIndex, f64>) {
        for (alpha, c) in acc {
            if c != 0.0 {
                *self.coeffs.entry(alpha).or_insert(0.0) += c;
            }
        }
        self.coeffs.retain(|_, c| *c != 0.0);
    }

    pub(crate) fn compatible(&self, other: &Self) -> Result<()> {
        if self.modes != other.modes {
            return Err(Error::ModeMismatch {
                left: self.modes,
                right: other.modes,
            });
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }
}

/// Expands `H_a H_b` mode by mode, emitting `(gamma, weight)` for every
/// `H_gamma` with `|gamma| <= cap`. Branches that cannot come back under the
/// cap (the remaining modes contribute at least `|a_i - b_i|`) are pruned.
fn expand_hermite_product(a: &[u8], b: &[u8], cap: usize, emit: &mut dyn FnMut(MultiIndex, f64)) {
    let m = a.len();
    let mut floor: SmallVec<[usize; 13]> = smallvec::smallvec![0; m + 1];
    for i in (0..m).rev() {
        floor[i] = floor[i + 1] + (a[i] as isize - b[i] as isize).unsigned_abs();
    }
    if floor[0] > cap {
        return;
    }
    let mut cur: SmallVec<[u8; 12]> = SmallVec::with_capacity(m);
    expand_rec(a, b, cap, &floor, 0, 1.0, &mut cur, emit);
}

#[allow(clippy::too_many_arguments)]
fn expand_rec(
    a: &[u8],
    b: &[u8],
    cap: usize,
    floor: &[usize],
    deg: usize,
    weight: f64,
    cur: &mut SmallVec<[u8; 12]>,
    emit: &mut dyn FnMut(MultiIndex, f64),
) {
    let i = cur.len();
    if i == a.len() {
        emit(MultiIndex::from_exponents(cur.clone()), weight);
        return;
    }
    let (ai, bi) = (a[i] as usize, b[i] as usize);
    for k in 0..=ai.min(bi) {
        let e = ai + bi - 2 * k;
        if deg + e + floor[i + 1] > cap {
            continue;
        }
        cur.push(e as u8);
        expand_rec(
            a,
            b,
            cap,
            floor,
            deg + e,
            weight * hermite::linearization(ai, bi, k),
            cur,
            emit,
        );
        cur.pop();
    }
}

/// First-chaos element `I_1(f) = sum_i f_i xi_i`.
pub fn gaussian_of(f: &L2Function, order: usize) -> Result<ChaosVector> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    let m = f.modes();
    ChaosVector::from_terms(
        m,
        order,
        f.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(i, &c)| (MultiIndex::unit(m, i), c)),
    )
}

/// Stochastic exponential `E(f) = exp(int f dB - 1/2 int f^2)`, whose
/// `H_alpha` coefficient is `f^alpha / alpha!`, kept for `|alpha| <= order`.
pub fn stochastic_exponential(f: &L2Function, order: usize) -> Result<ChaosVector> {
    let m = f.modes();
    let support: Vec<usize> = (0..m).filter(|&i| f.coeffs()[i] != 0.0).collect();
    let local = if support.is_empty() {
        vec![MultiIndex::zero(0)]
    } else {
        MultiIndex::all_up_to(support.len(), order)
    };
    let terms = local.into_iter().map(|beta| {
        let mut e: SmallVec<[u8; 12]> = smallvec::smallvec![0; m];
        for (&i, &b) in support.iter().zip(beta.exponents()) {
            e[i] = b;
        }
        let alpha = MultiIndex::from_exponents(e);
        let c = alpha.monomial(f.coeffs()) / alpha.factorial();
        (alpha, c)
    });
    ChaosVector::from_terms(m, order, terms)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    coeffs: Vec<(Vec<u32>, f64)>,
}

impl Serialize for ChaosVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            m: self.modes,
            n: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, &c)| (a.exponents().iter().map(|&e| e as u32).collect(), c))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ChaosVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = Wire::deserialize(deserializer)?;
        ChaosVector::try_from(wire).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<Wire> for ChaosVector {
    type Error = Error;

    fn try_from(wire: Wire) -> Result<Self> {
        let mut x = ChaosVector::zero(wire.m, wire.n)?;
        for (exps, c) in wire.coeffs {
            if exps.len() != wire.m {
                return Err(Error::IndexLength {
                    expected: wire.m,
                    got: exps.len(),
                });
            }
            let bytes = exps
                .iter()
                .map(|&e| u8::try_from(e).map_err(|_| Error::Decode(format!("exponent {e} too large"))))
                .collect::<Result<Vec<u8>>>()?;
            let alpha = MultiIndex::new(&bytes);
            if alpha.degree() > wire.n {
                return Err(Error::Decode(format!(
                    "index {alpha:?} exceeds order cap {}",
                    wire.n
                )));
            }
            if !c.is_finite() {
                return Err(Error::Decode(format!("non-finite coefficient at {alpha:?}")));
            }
            if x.coeffs.contains_key(&alpha) {
                return Err(Error::Decode(format!("duplicate index {alpha:?}")));
            }
            if c != 0.0 {
                x.coeffs.insert(alpha, c);
            }
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::TimeGrid;

    fn xi(m: usize, n: usize, i: usize) -> ChaosVector {
        ChaosVector::basis_element(m, n, MultiIndex::unit(m, i)).unwrap()
    }

    fn idx(e: &[u8]) -> MultiIndex {
        MultiIndex::new(e)
    }

    #[test]
    fn constants() {
        let one = ChaosVector::constant(1.0, 2, 3).unwrap();
        assert_eq!(one.expectation(), 1.0);
        assert!(ChaosVector::constant(0.0, 2, 3).unwrap().is_empty());
        let x = ChaosVector::from_terms(2, 3, [(idx(&[1, 1]), 2.0), (idx(&[0, 3]), -1.0)]).unwrap();
        let five = ChaosVector::constant(5.0, 2, 3).unwrap();
        assert_eq!(five.pointwise_product(&x).unwrap(), x.scale(5.0));
        assert_eq!(x.pointwise_product(&one).unwrap(), x);
    }

    #[test]
    fn order_cap_limits() {
        assert!(matches!(
            ChaosVector::zero(2, MAX_ORDER + 1),
            Err(Error::OrderTooLarge(_))
        ));
        let x = ChaosVector::from_terms(1, 2, [(idx(&[3]), 1.0)]).unwrap();
        assert!(x.is_empty());
        assert!(x.is_truncated());
        assert!(ChaosVector::from_terms(2, 2, [(idx(&[1]), 1.0)]).is_err());
    }

    #[test]
    fn gaussian_of_examples() {
        let g = TimeGrid::uniform(1.0, 4).unwrap();
        let e1 = L2Function::basis_vector(g, 0).unwrap();
        let x = gaussian_of(&e1, 3).unwrap();
        assert_eq!(x, xi(4, 3, 0));
        assert_eq!(x.norm_l2(), 1.0);
        assert!(gaussian_of(&L2Function::zero(g), 3).unwrap().is_empty());
        assert_eq!(gaussian_of(&e1, 0), Err(Error::ZeroOrder));
    }

    #[test]
    fn eval_examples() {
        let c = ChaosVector::constant(2.5, 3, 4).unwrap();
        assert_eq!(c.eval(&[0.1, -4.0, 9.0]).unwrap(), 2.5);
        assert_eq!(xi(3, 4, 0).eval(&[2.0, 0.0, 0.0]).unwrap(), 2.0);
        let h2 = ChaosVector::basis_element(3, 4, idx(&[2, 0, 0])).unwrap();
        assert_eq!(h2.eval(&[3.0, 1.0, 1.0]).unwrap(), 8.0);
        assert!(h2.eval(&[1.0]).is_err());
    }

    #[test]
    fn hermite_basis_eval_matches_closed_form() {
        // h_k(x) = sum_j (-1)^j k!/(j!(k-2j)!2^j) x^{k-2j}
        for k in 0..=12u8 {
            let hk = ChaosVector::basis_element(2, 12, idx(&[0, k])).unwrap();
            for s in 0..20 {
                let x = -2.5 + 0.27 * s as f64;
                let closed: f64 = (0..=k as usize / 2)
                    .map(|j| {
                        let kk = k as usize;
                        let c = hermite::factorial(kk)
                            / (hermite::factorial(j) * hermite::factorial(kk - 2 * j) * 2f64.powi(j as i32));
                        (if j % 2 == 0 { c } else { -c }) * x.powi((kk - 2 * j) as i32)
                    })
                    .sum();
                let v = hk.eval(&[0.4, x]).unwrap();
                assert!((v - closed).abs() <= 1e-9 * (1.0 + closed.abs()));
            }
        }
    }

    #[test]
    fn xi_squared() {
        let x = xi(2, 4, 0);
        let sq = x.pointwise_product(&x).unwrap();
        let expected = ChaosVector::from_terms(2, 4, [(idx(&[2, 0]), 1.0), (idx(&[0, 0]), 1.0)]).unwrap();
        assert_eq!(sq, expected);
        assert!(!sq.is_truncated());
        let w = x.wick_product(&x).unwrap();
        assert_eq!(w, ChaosVector::basis_element(2, 4, idx(&[2, 0])).unwrap());
    }

    #[test]
    fn truncation_is_flagged() {
        let x = ChaosVector::basis_element(1, 3, idx(&[2])).unwrap();
        let p = x.pointwise_product(&x).unwrap();
        assert!(p.is_truncated());
        // h2^2 = h4 + 4 h2 + 2; h4 dropped.
        assert_eq!(p.coeff(&idx(&[2])), 4.0);
        assert_eq!(p.coeff(&idx(&[0])), 2.0);
        assert_eq!(p.coeff(&idx(&[4])), 0.0);
        assert!(x.wick_product(&x).unwrap().is_truncated());
    }

    #[test]
    fn wick_expectation_multiplies() {
        let x = ChaosVector::from_terms(2, 6, [(idx(&[0, 0]), 2.0), (idx(&[1, 1]), 3.0)]).unwrap();
        let y = ChaosVector::from_terms(2, 6, [(idx(&[0, 0]), -1.5), (idx(&[2, 0]), 1.0)]).unwrap();
        assert_eq!(x.wick_product(&y).unwrap().expectation(), -3.0);
    }

    #[test]
    fn wick_square_of_brownian_motion() {
        let g = TimeGrid::uniform(1.0, 4).unwrap();
        for &t in &[0.25, 0.5, 1.0] {
            let b = gaussian_of(&L2Function::indicator(g, t).unwrap(), 4).unwrap();
            let w = b.wick_power(2).unwrap();
            let oracle = b
                .pointwise_product(&b)
                .unwrap()
                .sub(&ChaosVector::constant(t, 4, 4).unwrap())
                .unwrap();
            assert!(w.residual(&oracle).unwrap() < 1e-14);
        }
    }

    #[test]
    fn gamma_examples() {
        let g = TimeGrid::uniform(1.0, 3).unwrap();
        let f = L2Function::new(g, vec![0.3, -0.2, 0.5]).unwrap();
        let e = stochastic_exponential(&f, 6).unwrap();
        assert_eq!(e.gamma_scale(1.0).unwrap(), e);
        let back = e
            .gamma_scale(2f64.sqrt())
            .unwrap()
            .gamma_scale(1.0 / 2f64.sqrt())
            .unwrap();
        assert!(back.approx_eq(&e, REL_TOL, ABS_TOL));
        let lam = 1.7;
        let scaled = e.gamma_scale(lam).unwrap();
        let direct = stochastic_exponential(&f.scale(lam), 6).unwrap();
        assert!(scaled.approx_eq(&direct, REL_TOL, ABS_TOL));
        assert!(e.gamma_scale(0.0).is_err());
        assert!(e.gamma_scale(-1.0).is_err());
    }

    #[test]
    fn norm_examples() {
        let x = xi(2, 3, 1);
        assert!((x.norm_g(2f64.sqrt()).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let c = ChaosVector::constant(-3.0, 2, 3).unwrap();
        assert_eq!(c.norm_g(5.0).unwrap(), 3.0);
        let y = ChaosVector::from_terms(2, 3, [(idx(&[2, 1]), 0.5), (idx(&[0, 1]), 2.0)]).unwrap();
        assert_eq!(y.norm_g(1.0).unwrap(), y.norm_l2());
        assert!(y.norm_g(0.9).is_err());
    }

    #[test]
    fn stochastic_exponential_examples() {
        let g = TimeGrid::uniform(1.0, 2).unwrap();
        let zero = stochastic_exponential(&L2Function::zero(g), 5).unwrap();
        assert_eq!(zero, ChaosVector::constant(1.0, 2, 5).unwrap());
        let f = L2Function::new(g, vec![0.4, -0.3]).unwrap();
        let order = 12;
        let e = stochastic_exponential(&f, order).unwrap();
        assert_eq!(e.expectation(), 1.0);
        // Scalar oracle: the generating function sum_n s^n h_n(u) / n! with
        // s = |f| and u = <f, xi> / |f|, cut at the same order.
        let s = f.norm_sq().sqrt();
        for p in [[0.5, -1.0], [1.2, 0.7], [-2.0, 0.1]] {
            let u = (0.4 * p[0] - 0.3 * p[1]) / s;
            let hs = hermite::hermite_values(u, order);
            let cut: f64 = (0..=order)
                .map(|n| s.powi(n as i32) * hs[n] / hermite::factorial(n))
                .sum();
            let v = e.eval(&p).unwrap();
            assert!((v - cut).abs() <= 1e-13, "{v} vs {cut}");
            let direct = (s * u - 0.5 * f.norm_sq()).exp();
            assert!((v - direct).abs() <= 1e-8);
        }
    }

    #[test]
    fn pair_expectation_examples() {
        let g = TimeGrid::uniform(1.0, 3).unwrap();
        let h = L2Function::new(g, vec![0.2, -0.7, 1.1]).unwrap();
        let c = ChaosVector::constant(4.0, 3, 6).unwrap();
        assert_eq!(c.pair_expectation(&h).unwrap(), 4.0);
        for i in 0..3 {
            assert_eq!(xi(3, 6, i).pair_expectation(&h).unwrap(), h.coeffs()[i]);
        }
        let f = L2Function::new(g, vec![0.3, 0.1, -0.2]).unwrap();
        let e = stochastic_exponential(&f, 20).unwrap();
        let expected = f.inner_product(&h).unwrap().exp();
        assert!((e.pair_expectation(&h).unwrap() - expected).abs() < 1e-12);
        assert!(c
            .pair_expectation(&L2Function::zero(TimeGrid::uniform(1.0, 2).unwrap()))
            .is_err());
    }

    #[test]
    fn mode_mismatch_rejected() {
        let a = xi(2, 3, 0);
        let b = xi(3, 3, 0);
        assert!(matches!(a.pointwise_product(&b), Err(Error::ModeMismatch { .. })));
        assert!(matches!(a.wick_product(&b), Err(Error::ModeMismatch { .. })));
        assert!(a.add(&xi(2, 4, 0)).is_err());
    }

    #[test]
    fn json_layout() {
        let x = ChaosVector::from_terms(2, 3, [(idx(&[1, 1]), 2.0), (idx(&[0, 0]), -0.5)]).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"m":2,"N":3,"coeffs":[[[0,0],-0.5],[[1,1],2.0]]}"#);
        let back: ChaosVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<ChaosVector>(r#"{"m":2,"N":1,"coeffs":[[[1,1],2.0]]}"#).is_err());
        assert!(serde_json::from_str::<ChaosVector>(r#"{"m":2,"N":3,"coeffs":[[[1],2.0]]}"#).is_err());
        assert!(serde_json::from_str::<ChaosVector>(
            r#"{"m":1,"N":3,"coeffs":[[[1],2.0],[[1],1.0]]}"#
        )
        .is_err());
    }
}
