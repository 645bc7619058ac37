use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::hermite::factorial;

type Exponents = SmallVec<[u8; 12]>;

/// Exponent vector `alpha = (alpha_1, ..., alpha_m)` indexing the basis
/// functional `H_alpha(xi) = prod_i h_{alpha_i}(xi_i)`.
///
/// Ordered graded-lexicographically: total degree first, then the
/// exponents lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Exponents);

impl MultiIndex {
    pub fn new(exponents: &[u8]) -> Self {
        Self(Exponents::from_slice(exponents))
    }

    pub fn zero(modes: usize) -> Self {
        Self(smallvec::smallvec![0; modes])
    }

    /// `epsilon_mode`: degree one in `mode`, zero elsewhere.
    pub fn unit(modes: usize, mode: usize) -> Self {
        let mut e = Self::zero(modes);
        e.0[mode] = 1;
        e
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, mode: usize) -> usize {
        self.0[mode] as usize
    }

    /// `|alpha| = sum_i alpha_i`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    /// `alpha! = prod_i alpha_i!`.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a as usize)).product()
    }

    /// `x^alpha = prod_i x_i^{alpha_i}`.
    pub fn monomial(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .filter(|(&a, _)| a > 0)
            .map(|(&a, &xi)| xi.powi(a as i32))
            .product()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `alpha - beta` when `beta <= alpha` componentwise.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Exponents>>()
            .map(Self)
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub(crate) fn from_exponents(e: Exponents) -> Self {
        Self(e)
    }

    /// All multi-indices with `|beta| = degree` and `beta <= bound` componentwise,
    /// in graded-lex order.
    pub fn bounded_of_degree(bound: &[u8], degree: usize) -> Vec<Self> {
        fn rec(bound: &[u8], left: usize, cur: &mut Exponents, out: &mut Vec<MultiIndex>) {
            let i = cur.len();
            if i == bound.len() {
                if left == 0 {
                    out.push(MultiIndex(cur.clone()));
                }
                return;
            }
            let rest: usize = bound[i + 1..].iter().map(|&b| b as usize).sum();
            let lo = left.saturating_sub(rest);
            let hi = left.min(bound[i] as usize);
            for e in lo..=hi {
                cur.push(e as u8);
                rec(bound, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        let total: usize = bound.iter().map(|&b| b as usize).sum();
        if degree <= total {
            rec(bound, degree, &mut Exponents::new(), &mut out);
        }
        out.sort();
        out
    }

    /// All multi-indices over `modes` modes with `|alpha| <= max_degree`.
    pub fn all_up_to(modes: usize, max_degree: usize) -> Vec<Self> {
        let bound = vec![max_degree.min(u8::MAX as usize) as u8; modes];
        (0..=max_degree)
            .flat_map(|d| Self::bounded_of_degree(&bound, d))
            .collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}
