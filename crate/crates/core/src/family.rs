//! A two-step family on `[0, 1)` for which `B_p ∧ B_q` exceeds the Hölder
//! bound whenever `p != 2`.
//!
//! For `m ∈ (0, 1)`, `w > 0` on the correct side of one (`w < 1` when `p < 2`,
//! `w > 1` when `p > 2`, so that `w^p - w^q > 0`) and `t ∈ [0, 1)`:
//!
//! ```text
//! g = w 1[0,m) + 1[m,1)
//! f = (1 - t) w 1[0,m) + (1 + t) 1[m,1)
//! ```
//!
//! `d1(t) = B_p - Hölder` and `d2(t) = B_q - Hölder` have closed forms, vanish
//! at `t = 0`, and share the derivative
//!
//! ```text
//! d'(0) = (1 - m) m (w^p - w^q) (1 - m + m w^p)^{-1/q} (1 - m + m w^q)^{-1/p} > 0
//! ```
//!
//! Both step functions are constant on `[0, m)` and `[m, 1)`, so two atoms with
//! weights `m` and `1 - m` represent them exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{conjugate, DiscreteMeasure, SampledFunction};
use crate::order_margin;

/// Smallest `t` on the scan grid.
pub const SCAN_T_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyParams {
    p: f64,
    q: f64,
    m: f64,
    w: f64,
}

impl FamilyParams {
    pub fn new(p: f64, m: f64, w: f64) -> Result<Self> {
        let q = conjugate(p)?;
        if p == 2.0 {
            return Err(Error::ExceptionalExponent);
        }
        if !(m.is_finite() && m > 0.0 && m < 1.0) {
            return Err(Error::domain(format!("m must lie in (0, 1), got {m}")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::domain(format!("w must be finite and positive, got {w}")));
        }
        let correct_side = if p < 2.0 { w < 1.0 } else { w > 1.0 };
        let diff = w.powf(p) - w.powf(q);
        if !correct_side || diff.is_nan() || diff <= 0.0 {
            return Err(Error::SignCondition { p, w, diff });
        }
        Ok(Self { p, q, m, w })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn w(&self) -> f64 {
        self.w
    }
}

/// Same as [`FamilyParams::new`].
pub fn validate_params(p: f64, m: f64, w: f64) -> Result<FamilyParams> {
    FamilyParams::new(p, m, w)
}

fn check_t(t: f64) -> Result<()> {
    if !(t.is_finite() && (0.0..1.0).contains(&t)) {
        return Err(Error::domain(format!("t must lie in [0, 1), got {t}")));
    }
    Ok(())
}

/// `(μ, f, g)` on two atoms of mass `m` and `1 - m`.
pub fn family_functions(
    params: &FamilyParams,
    t: f64,
) -> Result<(DiscreteMeasure, SampledFunction, SampledFunction)> {
    check_t(t)?;
    let FamilyParams { m, w, .. } = *params;
    Ok((
        DiscreteMeasure::new(vec![m, 1.0 - m])?,
        SampledFunction::new(vec![(1.0 - t) * w, 1.0 + t])?,
        SampledFunction::new(vec![w, 1.0])?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapPoint {
    pub t: f64,
    pub d1: f64,
    pub d2: f64,
    pub min_gap: f64,
}

struct ClosedForm {
    d1: f64,
    d2: f64,
    holder: f64,
}

fn closed_form(params: &FamilyParams, t: f64) -> ClosedForm {
    let FamilyParams { p, q, m, w } = *params;
    let (up, down) = (1.0 + t, 1.0 - t);
    let holder = ((1.0 - m) * up.powf(p) + m * down.powf(p) * w.powf(p)).powf(1.0 / p)
        * (1.0 - m + m * w.powf(q)).powf(1.0 / q);
    let b_p = ((1.0 - m) * up.powf(p) + m * w.powf(p)).powf(1.0 / p)
        * (1.0 - m + m * down.powf(q) * w.powf(q)).powf(1.0 / q);
    let b_q = ((1.0 - m) * up.powf(q) + m * w.powf(q)).powf(1.0 / q)
        * (1.0 - m + m * down.powf(p) * w.powf(p)).powf(1.0 / p);
    ClosedForm {
        d1: b_p - holder,
        d2: b_q - holder,
        holder,
    }
}

/// Closed-form `d1(t)`, `d2(t)`.
pub fn gap_pair(params: &FamilyParams, t: f64) -> Result<GapPoint> {
    check_t(t)?;
    let c = closed_form(params, t);
    Ok(GapPoint {
        t,
        d1: c.d1,
        d2: c.d2,
        min_gap: c.d1.min(c.d2),
    })
}

/// Closed-form Hölder bound `μ(f^p)^{1/p} μ(g^q)^{1/q}` along the family.
pub fn family_holder(params: &FamilyParams, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok(closed_form(params, t).holder)
}

/// `d'_j(0)`, the same for `j = 1` and `j = 2`.
pub fn derivative_at_zero(params: &FamilyParams) -> f64 {
    let FamilyParams { p, q, m, w } = *params;
    (1.0 - m)
        * m
        * (w.powf(p) - w.powf(q))
        * (1.0 - m + m * w.powf(p)).powf(-1.0 / q)
        * (1.0 - m + m * w.powf(q)).powf(-1.0 / p)
}

/// Finite-difference estimate of `d'_j(0)`.
///
/// With `D(s) = (d_j(s) - d_j(0)) / s` the forward difference has an `O(s)`
/// leading error; `2 D(h/2) - D(h)` cancels it.
pub fn fd_derivative_at_zero(params: &FamilyParams, h: f64, j: u8) -> Result<f64> {
    if !(h > 0.0 && h <= 1e-2) {
        return Err(Error::usage(format!("step h must lie in (0, 1e-2], got {h}")));
    }
    let d = |t: f64| -> Result<f64> {
        let g = gap_pair(params, t)?;
        match j {
            1 => Ok(g.d1),
            2 => Ok(g.d2),
            _ => Err(Error::usage(format!("gap index must be 1 or 2, got {j}"))),
        }
    };
    let d0 = d(0.0)?;
    let forward = |s: f64| -> Result<f64> { Ok((d(s)? - d0) / s) };
    Ok(2.0 * forward(h / 2.0)? - forward(h)?)
}

/// `steps` points, log-spaced from [`SCAN_T_MIN`] to `t_max`.
pub fn scan_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(t_max.is_finite() && t_max > SCAN_T_MIN && t_max < 1.0) {
        return Err(Error::usage(format!("t_max must lie in ({SCAN_T_MIN:e}, 1), got {t_max}")));
    }
    if steps == 0 {
        return Err(Error::usage("scan needs at least one grid point"));
    }
    if steps == 1 {
        return Ok(vec![SCAN_T_MIN]);
    }
    let ratio = (t_max / SCAN_T_MIN).ln();
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i == steps - 1 {
                t_max
            } else {
                SCAN_T_MIN * (ratio * i as f64 / last).exp()
            }
        })
        .collect())
}

/// `steps` points, evenly spaced from 0 to `t_max` inclusive.
pub fn curve_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(t_max.is_finite() && t_max > 0.0 && t_max < 1.0) {
        return Err(Error::usage(format!("t_max must lie in (0, 1), got {t_max}")));
    }
    if steps < 2 {
        return Err(Error::usage("a curve needs at least two grid points"));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i == steps - 1 { t_max } else { t_max * i as f64 / last })
        .collect())
}

pub fn curve(params: &FamilyParams, t_max: f64, steps: usize) -> Result<Vec<GapPoint>> {
    curve_grid(t_max, steps)?
        .into_iter()
        .map(|t| gap_pair(params, t))
        .collect()
}

/// Outcome of [`find_violation_t`]. Not finding a violation is a result, not an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub found: bool,
    /// Smallest grid `t` with `min_gap > 1e-9 (1 + holder)`.
    pub t: Option<f64>,
    pub min_gap: Option<f64>,
    pub holder: Option<f64>,
    /// Largest `min_gap` seen anywhere on the grid, and where.
    pub max_min_gap: f64,
    pub t_at_max: f64,
    pub points: usize,
}

pub fn find_violation_t(params: &FamilyParams, t_max: f64, steps: usize) -> Result<ScanOutcome> {
    let grid = scan_grid(t_max, steps)?;
    let mut hit: Option<(f64, f64, f64)> = None;
    let mut best = (f64::NEG_INFINITY, grid[0]);
    for &t in &grid {
        let c = closed_form(params, t);
        let gap = c.d1.min(c.d2);
        if gap > best.0 {
            best = (gap, t);
        }
        if hit.is_none() && gap > order_margin(c.holder) {
            hit = Some((t, gap, c.holder));
        }
    }
    Ok(ScanOutcome {
        found: hit.is_some(),
        t: hit.map(|h| h.0),
        min_gap: hit.map(|h| h.1),
        holder: hit.map(|h| h.2),
        max_min_gap: best.0,
        t_at_max: best.1,
        points: grid.len(),
    })
}
