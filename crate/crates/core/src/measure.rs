//! Finite discrete measures, nonnegative functions on their atoms, and the
//! integrals every bound in this crate is built from.
//!
//! All arithmetic is `f64`. Powers of zero follow the continuous extension
//! `0^r = 0` for `r > 0`, which is what `f64::powf` already does.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A measure on finitely many atoms, each carrying a strictly positive finite weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DiscreteMeasure {
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("a measure needs at least one atom"));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::domain(format!(
                "weight {i} is {w}; weights must be finite and strictly positive"
            )));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// Always false for a constructed measure.
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `μ(1)`, the integral of the constant function one.
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub(crate) fn check_paired(&self, f: &SampledFunction) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                found: f.len(),
            });
        }
        Ok(())
    }

    /// `μ(f) = Σ w_i f_i`.
    pub fn integrate(&self, f: &SampledFunction) -> Result<f64> {
        self.check_paired(f)?;
        Ok(self
            .weights
            .iter()
            .zip(f.values())
            .map(|(w, v)| w * v)
            .sum())
    }

    /// `μ(f^r)^{1/r}` for `r > 1`.
    pub fn lr_mean(&self, f: &SampledFunction, r: f64) -> Result<f64> {
        if !(r.is_finite() && r > 1.0) {
            return Err(Error::domain(format!("L^r mean needs 1 < r < inf, got r = {r}")));
        }
        self.check_paired(f)?;
        let s: f64 = self
            .weights
            .iter()
            .zip(f.values())
            .map(|(w, v)| w * v.powf(r))
            .sum();
        Ok(s.powf(r.recip()))
    }
}

impl TryFrom<Vec<f64>> for DiscreteMeasure {
    type Error = Error;

    fn try_from(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights)
    }
}

impl From<DiscreteMeasure> for Vec<f64> {
    fn from(mu: DiscreteMeasure) -> Self {
        mu.weights
    }
}

/// A nonnegative finite value per atom.
///
/// The pairing with a [`DiscreteMeasure`] is not stored; every operation that
/// takes both checks the lengths agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SampledFunction {
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::domain(format!(
                "value {i} is {v}; function values must be finite and nonnegative"
            )));
        }
        Ok(Self { values })
    }

    pub fn constant(len: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest value, or 0 for the empty function.
    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Applies a map atomwise. The map must keep values finite and nonnegative.
    pub fn map(&self, op: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| op(v)).collect())
    }
}

impl TryFrom<Vec<f64>> for SampledFunction {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<SampledFunction> for Vec<f64> {
    fn from(f: SampledFunction) -> Self {
        f.values
    }
}

/// Atomwise binary operations used to build the integrands of the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointwiseOp {
    /// `f g`
    Product,
    /// `f ∨ g`
    Max,
    /// `f ∧ g`
    Min,
    /// `(f - g)_+`
    PosDiff,
}

impl PointwiseOp {
    #[inline]
    pub fn eval(self, x: f64, y: f64) -> f64 {
        match self {
            PointwiseOp::Product => x * y,
            PointwiseOp::Max => x.max(y),
            PointwiseOp::Min => x.min(y),
            PointwiseOp::PosDiff => (x - y).max(0.0),
        }
    }
}

pub fn pointwise(op: PointwiseOp, f: &SampledFunction, g: &SampledFunction) -> Result<SampledFunction> {
    if f.len() != g.len() {
        return Err(Error::Dimension {
            expected: f.len(),
            found: g.len(),
        });
    }
    let values: Vec<f64> = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(&x, &y)| op.eval(x, y))
        .collect();
    // Inputs are finite and nonnegative, so only overflow can break the invariant.
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Invariant(format!("{op:?} overflows at atom {i}")));
    }
    Ok(SampledFunction { values })
}

/// Largest `|f_i - g_i|` over the atoms.
pub fn sup_abs_diff(f: &SampledFunction, g: &SampledFunction) -> Result<f64> {
    if f.len() != g.len() {
        return Err(Error::Dimension {
            expected: f.len(),
            found: g.len(),
        });
    }
    Ok(f.values()
        .iter()
        .zip(g.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

/// `q = p / (p - 1)`.
pub fn conjugate(p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::domain(format!("exponent must lie in (1, inf), got {p}")));
    }
    Ok(p / (p - 1.0))
}

/// Conjugate exponents `1/p + 1/q = 1`; `q` is always derived from `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentPair {
    p: f64,
    q: f64,
}

impl ExponentPair {
    pub fn new(p: f64) -> Result<Self> {
        let q = conjugate(p)?;
        if !q.is_finite() {
            return Err(Error::domain(format!("conjugate of p = {p} is not finite")));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The pair with the roles of `p` and `q` exchanged.
    pub fn swapped(&self) -> Self {
        Self { p: self.q, q: self.p }
    }

    pub fn is_self_conjugate(&self) -> bool {
        self.p == self.q
    }
}
