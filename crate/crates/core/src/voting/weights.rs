use num_traits::{FromPrimitive, Num};
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stream::{self, tag};

/// Positive BTL scores, optionally normalized to sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector<S> {
    values: Vec<S>,
    normalized: bool,
}

impl<S: Num + Clone + PartialOrd> WeightVector<S> {
    /// Wraps raw positive scores (not normalized).
    pub fn new(values: Vec<S>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("weight vector must be non-empty"));
        }
        if let Some(i) = values.iter().position(|w| !(*w > S::zero())) {
            return Err(Error::param(format!("weight {i} is not strictly positive")));
        }
        Ok(Self { values, normalized: false })
    }

    /// Divides every entry by the total.
    pub fn normalized(self) -> Self {
        let total = self.sum();
        let values = self.values.into_iter().map(|w| w / total.clone()).collect();
        Self { values, normalized: true }
    }

    pub fn sum(&self) -> S {
        self.values.iter().cloned().fold(S::zero(), |acc, w| acc + w)
    }

    /// Skew `b = max_i w_i / min_j w_j`.
    pub fn skew(&self) -> S {
        let mut lo = self.values[0].clone();
        let mut hi = self.values[0].clone();
        for w in &self.values[1..] {
            if *w < lo {
                lo = w.clone();
            }
            if *w > hi {
                hi = w.clone();
            }
        }
        hi / lo
    }
}

impl<S> WeightVector<S> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn as_slice(&self) -> &[S] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<S> {
        self.values
    }

    /// Permutes entries: entry `i` moves to position `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self
    where
        S: Clone,
    {
        let mut values = self.values.clone();
        for (i, &p) in perm.iter().enumerate() {
            values[p] = self.values[i].clone();
        }
        Self { values, normalized: self.normalized }
    }
}

impl<S: Scalar> WeightVector<S> {
    /// Builds a normalized vector from an estimate such as a stationary distribution.
    /// Entries may be zero; only non-negativity is required.
    pub fn from_distribution(values: Vec<S>) -> Result<Self> {
        if values.iter().any(|w| !(*w >= S::zero())) {
            return Err(Error::param("distribution has negative or NaN entries"));
        }
        let total: S = values.iter().copied().sum();
        if !(total > S::zero()) {
            return Err(Error::param("distribution sums to zero"));
        }
        Ok(Self { values: values.into_iter().map(|w| w / total).collect(), normalized: true })
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|w| w.as_f64()).collect()
    }

    /// Objects sorted by descending weight; equal weights keep index order.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| {
            self.values[b].partial_cmp(&self.values[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
        });
        order
    }
}

/// i.i.d. Uniform(lo, hi) scores, normalized to sum one.
pub fn sample_uniform_weights<S: Scalar>(n: usize, lo: f64, hi: f64, seed: u64) -> Result<WeightVector<S>> {
    if n == 0 {
        return Err(Error::param("need at least one object"));
    }
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(Error::param(format!("uniform weight bounds must satisfy 0 < lo <= hi, got [{lo}, {hi}]")));
    }
    let mut rng = stream::rng(seed, &[tag::WEIGHTS]);
    let values = (0..n)
        .map(|_| if lo == hi { lo } else { rng.random_range(lo..=hi) })
        .map(S::of)
        .collect();
    Ok(WeightVector::new(values)?.normalized())
}

fn skewed<S>(n: usize, b: S, high: impl Fn(usize) -> bool) -> Result<WeightVector<S>>
where
    S: Num + Clone + PartialOrd + FromPrimitive,
{
    if n < 2 {
        return Err(Error::param(format!("skewed weights need n >= 2, got {n}")));
    }
    if !(b > S::one()) {
        return Err(Error::param("skew b must exceed 1"));
    }
    let n_s = S::from_usize(n).ok_or_else(|| Error::param("n not representable"))?;
    let ceil_half = S::from_usize(n.div_ceil(2)).ok_or_else(|| Error::param("n not representable"))?;
    let denom = n_s + (b.clone() - S::one()) * ceil_half;
    let low = S::one() / denom.clone();
    let hi = b / denom;
    let values = (0..n).map(|i| if high(i) { hi.clone() } else { low.clone() }).collect();
    let mut w = WeightVector::new(values)?;
    w.normalized = true;
    Ok(w)
}

/// Half-low / half-high scores: the first `floor(n/2)` objects get
/// `1 / (n + (b-1) ceil(n/2))`, the rest get `b` times that.
///
/// Generic over any numeric type so the construction can be checked with
/// exact rationals.
pub fn make_skewed_weights<S>(n: usize, b: S) -> Result<WeightVector<S>>
where
    S: Num + Clone + PartialOrd + FromPrimitive,
{
    skewed(n, b, |i| i >= n / 2)
}

/// Mirror image of [`make_skewed_weights`]: the first `ceil(n/2)` objects are
/// high, the rest low. Same normalizer, so it also sums to one.
pub fn make_mirrored_skewed_weights<S>(n: usize, b: S) -> Result<WeightVector<S>>
where
    S: Num + Clone + PartialOrd + FromPrimitive,
{
    skewed(n, b, |i| i < n.div_ceil(2))
}
