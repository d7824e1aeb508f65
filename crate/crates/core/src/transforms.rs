//! Product-preserving maps `T = (T1, T2)` on `[0, ∞)²`, i.e. `T1(x, y) T2(x, y) = x y`.
//!
//! Only the maps that are product preserving by construction are offered:
//! rescaling `(k x, y / k)`, the swap `(y, x)`, the sort `(x ∨ y, x ∧ y)` and
//! compositions of these. Substituting `T1(f, g)`, `T2(f, g)` for `f`, `g` in
//! Hölder's inequality gives [`transformed_holder_bound`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, ExponentPair, SampledFunction};

#[derive(Debug, Clone, PartialEq)]
pub enum TransformSpec {
    /// `(k x, y / k)`, `k > 0`.
    Scale(f64),
    /// `(y, x)`
    Swap,
    /// `(x ∨ y, x ∧ y)`
    MaxMin,
    /// Applied left to right.
    Compose(Vec<TransformSpec>),
}

impl TransformSpec {
    pub fn scale(k: f64) -> Result<Self> {
        let t = TransformSpec::Scale(k);
        t.validate()?;
        Ok(t)
    }

    pub fn compose(parts: Vec<TransformSpec>) -> Result<Self> {
        let t = TransformSpec::Compose(parts);
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TransformSpec::Scale(k) if !(k.is_finite() && *k > 0.0) => {
                Err(Error::domain(format!("scale factor must be finite and positive, got {k}")))
            }
            TransformSpec::Compose(parts) if parts.is_empty() => {
                Err(Error::domain("a composition needs at least one transform"))
            }
            TransformSpec::Compose(parts) => parts.iter().try_for_each(TransformSpec::validate),
            _ => Ok(()),
        }
    }

    // Unchecked; callers validate the spec and the point first.
    fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        match self {
            TransformSpec::Scale(k) => (k * x, y / k),
            TransformSpec::Swap => (y, x),
            TransformSpec::MaxMin => (x.max(y), x.min(y)),
            TransformSpec::Compose(parts) => parts.iter().fold((x, y), |(a, b), t| t.eval(a, b)),
        }
    }

    /// `(T1(x, y), T2(x, y))`.
    pub fn apply(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        self.validate()?;
        check_point(x, y)?;
        Ok(self.eval(x, y))
    }

    /// Applies the map atomwise to a pair of functions.
    pub fn apply_functions(
        &self,
        f: &SampledFunction,
        g: &SampledFunction,
    ) -> Result<(SampledFunction, SampledFunction)> {
        self.validate()?;
        if f.len() != g.len() {
            return Err(Error::Dimension {
                expected: f.len(),
                found: g.len(),
            });
        }
        let (t1, t2): (Vec<f64>, Vec<f64>) = f
            .values()
            .iter()
            .zip(g.values())
            .map(|(&x, &y)| self.eval(x, y))
            .unzip();
        Ok((SampledFunction::new(t1)?, SampledFunction::new(t2)?))
    }
}

fn check_point(x: f64, y: f64) -> Result<()> {
    if !(x.is_finite() && y.is_finite() && x >= 0.0 && y >= 0.0) {
        return Err(Error::domain(format!(
            "transform arguments must be finite and nonnegative, got ({x}, {y})"
        )));
    }
    Ok(())
}

/// Largest `|T1 T2 - x y|` over the grid.
pub fn verify_product_preserving(t: &TransformSpec, grid: &[(f64, f64)]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::usage("product check needs a non-empty grid"));
    }
    t.validate()?;
    grid.iter().try_fold(0.0f64, |worst, &(x, y)| {
        check_point(x, y)?;
        let (a, b) = t.eval(x, y);
        Ok(worst.max((a * b - x * y).abs()))
    })
}

/// `μ(T1(f, g)^p)^{1/p} μ(T2(f, g)^q)^{1/q}`, an upper bound on `μ(f g)`.
pub fn transformed_holder_bound(
    mu: &DiscreteMeasure,
    f: &SampledFunction,
    g: &SampledFunction,
    e: ExponentPair,
    t: &TransformSpec,
) -> Result<f64> {
    mu.check_paired(f)?;
    mu.check_paired(g)?;
    let (t1, t2) = t.apply_functions(f, g)?;
    Ok(mu.lr_mean(&t1, e.p())? * mu.lr_mean(&t2, e.q())?)
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformSpec::Scale(k) => write!(f, "scale:{k}"),
            TransformSpec::Swap => f.write_str("swap"),
            TransformSpec::MaxMin => f.write_str("maxmin"),
            TransformSpec::Compose(parts) => {
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(">")?;
                    }
                    write!(f, "{part}")?;
                }
                Ok(())
            }
        }
    }
}

fn parse_token(token: &str) -> Result<TransformSpec> {
    let bad = |reason: &str| Error::TransformParse {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    match token.trim() {
        "swap" => Ok(TransformSpec::Swap),
        "maxmin" => Ok(TransformSpec::MaxMin),
        "" => Err(bad("empty transform")),
        other => {
            let k = other
                .strip_prefix("scale:")
                .ok_or_else(|| bad("expected `scale:k`, `swap` or `maxmin`"))?;
            let k: f64 = k.trim().parse().map_err(|_| bad("scale factor is not a number"))?;
            if !(k.is_finite() && k > 0.0) {
                return Err(bad("scale factor must be finite and positive"));
            }
            Ok(TransformSpec::Scale(k))
        }
    }
}

impl FromStr for TransformSpec {
    type Err = Error;

    /// Parses `scale:k`, `swap`, `maxmin`, or `a>b>c` for a composition.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split('>').map(parse_token).collect::<Result<Vec<_>>>()?;
        if parts.len() == 1 {
            Ok(parts.pop().unwrap())
        } else {
            Ok(TransformSpec::Compose(parts))
        }
    }
}
