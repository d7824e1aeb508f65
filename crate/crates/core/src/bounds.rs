//! Upper bounds on `μ(f g)`: Hölder, the max-min bound `B_p`, its
//! symmetrization `B_p ∧ B_q`, and the exact Cauchy-Schwarz improvement
//! identity at `p = 2`.
//!
//! With `a = f²`, `b = g²`:
//!
//! ```text
//! μ(a) μ(b) = μ(a ∨ b) μ(a ∧ b) + μ((a - b)_+) μ((b - a)_+)
//! ```
//!
//! so `B_2² = μ(a ∨ b) μ(a ∧ b)` never exceeds the Cauchy-Schwarz bound. For
//! `p != 2` no such ordering holds; see [`crate::family`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{pointwise, sup_abs_diff, DiscreteMeasure, ExponentPair, PointwiseOp, SampledFunction};
use crate::{identity_margin, order_margin};

/// `μ(f^p)^{1/p} μ(g^q)^{1/q}`.
pub fn holder_rhs(mu: &DiscreteMeasure, f: &SampledFunction, g: &SampledFunction, e: ExponentPair) -> Result<f64> {
    mu.check_paired(g)?;
    Ok(mu.lr_mean(f, e.p())? * mu.lr_mean(g, e.q())?)
}

/// `B_p(f, g) = μ((f ∨ g)^p)^{1/p} μ((f ∧ g)^q)^{1/q}`. Symmetric in `f` and `g`.
pub fn maxmin_bound(mu: &DiscreteMeasure, f: &SampledFunction, g: &SampledFunction, e: ExponentPair) -> Result<f64> {
    mu.check_paired(f)?;
    mu.check_paired(g)?;
    let hi = pointwise(PointwiseOp::Max, f, g)?;
    let lo = pointwise(PointwiseOp::Min, f, g)?;
    Ok(mu.lr_mean(&hi, e.p())? * mu.lr_mean(&lo, e.q())?)
}

/// `B_p ∧ B_q`.
pub fn symmetrized_bound(
    mu: &DiscreteMeasure,
    f: &SampledFunction,
    g: &SampledFunction,
    e: ExponentPair,
) -> Result<f64> {
    let b_p = maxmin_bound(mu, f, g, e)?;
    let b_q = maxmin_bound(mu, f, g, e.swapped())?;
    Ok(b_p.min(b_q))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub mu_fg: f64,
    pub holder: f64,
    pub b_p: f64,
    pub b_q: f64,
    pub symmetrized: f64,
    pub improves_holder: bool,
    pub violates_holder_order: bool,
}

impl BoundReport {
    /// `symmetrized - holder`; positive means the max-min bound is worse than Hölder.
    pub fn gap(&self) -> f64 {
        self.symmetrized - self.holder
    }

    /// Checks that every bound dominates `μ(f g)` up to the ordering margin.
    pub fn check_ordering(&self) -> Result<()> {
        for (name, bound) in [("holder", self.holder), ("b_p", self.b_p), ("b_q", self.b_q)] {
            if self.mu_fg > bound + order_margin(bound) {
                return Err(Error::Invariant(format!(
                    "mu(fg) = {} exceeds {name} = {bound}",
                    self.mu_fg
                )));
            }
        }
        Ok(())
    }
}

pub fn bound_report(mu: &DiscreteMeasure, f: &SampledFunction, g: &SampledFunction, e: ExponentPair) -> Result<BoundReport> {
    let mu_fg = mu.integrate(&pointwise(PointwiseOp::Product, f, g)?)?;
    let holder = holder_rhs(mu, f, g, e)?;
    let b_p = maxmin_bound(mu, f, g, e)?;
    let b_q = maxmin_bound(mu, f, g, e.swapped())?;
    let symmetrized = b_p.min(b_q);
    let tol = order_margin(holder);
    Ok(BoundReport {
        mu_fg,
        holder,
        b_p,
        b_q,
        symmetrized,
        improves_holder: symmetrized <= holder + tol,
        violates_holder_order: symmetrized > holder + tol,
    })
}

/// Terms of the `p = 2` identity with `a = f²`, `b = g²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsIdentityReport {
    /// `μ(a) μ(b)`
    pub lhs: f64,
    /// `μ(a ∨ b) μ(a ∧ b)`
    pub rhs_main: f64,
    /// `μ((a - b)_+) μ((b - a)_+)`
    pub improvement: f64,
    pub residual: f64,
    /// `μ(1)² sup|a - b|²`
    pub eps_bound: f64,
}

impl CsIdentityReport {
    /// `|residual| / (1 + lhs)`.
    pub fn relative_residual(&self) -> f64 {
        self.residual.abs() / (1.0 + self.lhs.abs())
    }

    /// Identity exactness and the ε-bound on the improvement term.
    pub fn check(&self) -> Result<()> {
        let terms = [self.lhs, self.rhs_main, self.improvement, self.residual, self.eps_bound];
        if terms.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invariant(format!("non-finite identity term in {terms:?}")));
        }
        if self.residual.abs() > identity_margin(self.lhs) {
            return Err(Error::Invariant(format!(
                "identity residual {:e} exceeds tolerance for lhs = {}",
                self.residual, self.lhs
            )));
        }
        if self.improvement < 0.0 {
            return Err(Error::Invariant(format!("negative improvement {}", self.improvement)));
        }
        if self.improvement > self.eps_bound + identity_margin(self.eps_bound) {
            return Err(Error::Invariant(format!(
                "improvement {} exceeds mu(1)^2 eps^2 = {}",
                self.improvement, self.eps_bound
            )));
        }
        Ok(())
    }
}

pub fn cs_identity_report(mu: &DiscreteMeasure, f: &SampledFunction, g: &SampledFunction) -> Result<CsIdentityReport> {
    mu.check_paired(f)?;
    mu.check_paired(g)?;
    let a = pointwise(PointwiseOp::Product, f, f)?;
    let b = pointwise(PointwiseOp::Product, g, g)?;
    let integral = |op, x: &SampledFunction, y: &SampledFunction| -> Result<f64> { mu.integrate(&pointwise(op, x, y)?) };

    let lhs = mu.integrate(&a)? * mu.integrate(&b)?;
    let rhs_main = integral(PointwiseOp::Max, &a, &b)? * integral(PointwiseOp::Min, &a, &b)?;
    let improvement = integral(PointwiseOp::PosDiff, &a, &b)? * integral(PointwiseOp::PosDiff, &b, &a)?;
    let eps = sup_abs_diff(&a, &b)?;
    let mass = mu.total_mass();
    Ok(CsIdentityReport {
        lhs,
        rhs_main,
        improvement,
        residual: lhs - rhs_main - improvement,
        eps_bound: mass * mass * eps * eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(w: &[f64], f: &[f64], g: &[f64]) -> (DiscreteMeasure, SampledFunction, SampledFunction) {
        (
            DiscreteMeasure::new(w.to_vec()).unwrap(),
            SampledFunction::new(f.to_vec()).unwrap(),
            SampledFunction::new(g.to_vec()).unwrap(),
        )
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * (1.0 + b.abs())
    }

    #[test]
    fn holder_single_atom_is_exact() {
        for p in [1.1, 2.0, 3.0, 7.5] {
            let (mu, f, g) = inst(&[1.0], &[2.5], &[4.0]);
            let e = ExponentPair::new(p).unwrap();
            let h = holder_rhs(&mu, &f, &g, e).unwrap();
            assert!(close(h, 10.0, 1e-14), "p = {p}: {h}");
        }
    }

    #[test]
    fn holder_normalized_constants() {
        let (mu, f, g) = inst(&[0.25, 0.25, 0.5], &[1.0; 3], &[1.0; 3]);
        let h = holder_rhs(&mu, &f, &g, ExponentPair::new(3.0).unwrap()).unwrap();
        assert!(close(h, 1.0, 1e-15));
    }

    #[test]
    fn two_atom_swap_pair() {
        let (mu, f, g) = inst(&[0.5, 0.5], &[1.0, 2.0], &[2.0, 1.0]);
        let e = ExponentPair::new(2.0).unwrap();
        assert!(close(holder_rhs(&mu, &f, &g, e).unwrap(), 2.5, 1e-15));
        assert!(close(maxmin_bound(&mu, &f, &g, e).unwrap(), 2.0, 1e-15));
        assert!(close(symmetrized_bound(&mu, &f, &g, e).unwrap(), 2.0, 1e-15));

        let r = cs_identity_report(&mu, &f, &g).unwrap();
        assert!(close(r.lhs, 6.25, 1e-15));
        assert!(close(r.rhs_main, 4.0, 1e-15));
        assert!(close(r.improvement, 2.25, 1e-15));
    }

    #[test]
    fn coincident_functions() {
        let (mu, f, _) = inst(&[0.2, 0.3, 0.5], &[1.0, 3.0, 0.5], &[0.0; 3]);
        for p in [1.5, 2.0, 4.0] {
            let e = ExponentPair::new(p).unwrap();
            let h = holder_rhs(&mu, &f, &f, e).unwrap();
            assert_eq!(maxmin_bound(&mu, &f, &f, e).unwrap(), h);
            assert_eq!(symmetrized_bound(&mu, &f, &f, e).unwrap(), h);
            let r = bound_report(&mu, &f, &f, e).unwrap();
            assert!(r.improves_holder);
            assert!(!r.violates_holder_order);
        }
        let r = cs_identity_report(&mu, &f, &f).unwrap();
        assert_eq!(r.improvement, 0.0);
        assert_eq!(r.lhs, r.rhs_main);
    }

    #[test]
    fn self_conjugate_symmetrization_is_b2() {
        let (mu, f, g) = inst(&[0.1, 0.9], &[3.0, 0.2], &[1.0, 1.5]);
        let e = ExponentPair::new(2.0).unwrap();
        assert_eq!(symmetrized_bound(&mu, &f, &g, e).unwrap(), maxmin_bound(&mu, &f, &g, e).unwrap());
    }

    #[test]
    fn identity_unit_weights() {
        // a = (1, 4), b = (4, 1)
        let (mu, f, g) = inst(&[1.0, 1.0], &[1.0, 2.0], &[2.0, 1.0]);
        let r = cs_identity_report(&mu, &f, &g).unwrap();
        assert_eq!((r.lhs, r.rhs_main, r.improvement, r.residual), (25.0, 16.0, 9.0, 0.0));
        let mu_fg = mu.integrate(&pointwise(PointwiseOp::Product, &f, &g).unwrap()).unwrap();
        assert!(mu_fg * mu_fg <= r.rhs_main);
        r.check().unwrap();
    }

    #[test]
    fn eps_observation_small_perturbation() {
        let (mu, f, g) = inst(&[0.3, 0.3, 0.4], &[1.0, 1.001, 0.999], &[1.0005, 1.0, 1.0]);
        let r = cs_identity_report(&mu, &f, &g).unwrap();
        assert!(r.improvement <= r.eps_bound);
        r.check().unwrap();
    }

    #[test]
    fn mismatched_lengths() {
        let mu = DiscreteMeasure::new(vec![1.0, 1.0]).unwrap();
        let f = SampledFunction::new(vec![1.0, 2.0]).unwrap();
        let g = SampledFunction::new(vec![1.0]).unwrap();
        let e = ExponentPair::new(2.0).unwrap();
        assert!(matches!(holder_rhs(&mu, &f, &g, e), Err(Error::Dimension { .. })));
        assert!(matches!(maxmin_bound(&mu, &f, &g, e), Err(Error::Dimension { .. })));
        assert!(matches!(cs_identity_report(&mu, &g, &f), Err(Error::Dimension { .. })));
        assert!(matches!(bound_report(&mu, &f, &g, e), Err(Error::Dimension { .. })));
    }

    #[test]
    fn report_flags_use_strict_margin() {
        let (mu, f, g) = inst(&[0.5, 0.5], &[1.0, 2.0], &[2.0, 1.0]);
        let r = bound_report(&mu, &f, &g, ExponentPair::new(2.0).unwrap()).unwrap();
        assert_eq!(r.symmetrized, r.b_p.min(r.b_q));
        assert!(r.improves_holder ^ r.violates_holder_order);
        r.check_ordering().unwrap();
    }
}
