//! Closed-form reduced Wigner coefficients (RWCs) for one branching step.
//!
//! For a branching pair Λ (shape (m,n)) ⊃ λ the module evaluates, in exact
//! arithmetic, the squared-coefficient invariants and assembles the phased
//! coefficients:
//!
//! * `c̄_r` / `c_r` — squares of the *u-absent* coefficients (the subalgebra
//!   weight is unchanged while Λ shifts by ±ε_r);
//! * `δ̄_u` / `δ_u` — reduced matrix elements entering the factorized ρ;
//! * `ρ̄_{ru}` / `ρ_{ru}` — squares of the *u-present* coefficients (both Λ
//!   and λ shift);
//! * [`BranchContext::rwc`] — the phased square root per the printed sign
//!   rules;
//! * [`eta_squared_product`] — the closed-form product candidate for the
//!   symmetry constant η².
//!
//! Barred quantities govern the covariant (+ε) direction and are built from
//! barred roots with the primed index sets (Ĩ', I'); unbarred quantities
//! govern the contravariant (−ε) direction with (Ĩ, I).  Classical levels
//! (n = 0) use all of 1..a as the outer set and 1..a−1 as the inner set.
//!
//! ### Forms used
//!
//! With `a_k` the algebra roots, `b_k` the subalgebra roots of the matching
//! flavour, `s_k = (−1)^{(k)}`, `O` the outer set, `N` the inner set:
//!
//! * `c_r = ∏_{k∈O, k≠r} (a_r − a_k)^{-1} · ∏_{k∈N} (a_r − b_k − s_k)`;
//! * `δ_u = (−1)^{|N|} ∏_{k∈N, k≠u} (b_u − b_k − s_k)^{-1} · ∏_{k∈O} (a_k − b_u)`;
//! * odd `u` (and every classical `(r,u)`): the cancelled ratio form
//!   `ρ_{ru} = (−1)^{|N|} ∏_{k∈O,k≠r} (a_k − b_u)/(a_r − a_k) ·
//!   ∏_{k∈N,k≠u} (a_r − b_k − s_k)/(b_u − b_k − s_k)`, which equals
//!   `(denominator pair)^{-1} c_r δ_u` wherever the latter is defined but
//!   stays finite at the classical diagonal;
//! * even `u` off the outer set: the expanded form keeps the single
//!   denominator `(a_r − b_u + 1)^{-1}` and cancels `(a_r − b_u)` against
//!   the `k = r` factor of the `δ_u` product;
//! * diagonal `r = u` for even `u` in the direction's shiftable set (I0 for
//!   barred, Ī0 for unbarred): `ρ_uu = c_u[(Λ, λ±ε_u)] · δ_u[(Λ, λ)]` with
//!   the subalgebra weight shifted along the coefficient's direction.  The
//!   shifted context is evaluated *formally* (the shifted λ need not be
//!   dominant); this is exactly what the sum rule `Σ_r ρ_{ru} = 1` requires;
//! * diagonal `r = u` for even `u` in the *other* even set (Ī0 for barred,
//!   I0 for unbarred): the squared coefficient is identically 1 — every
//!   ratio-form factor pairs to ±1 because the algebra and subalgebra roots
//!   agree at `u` — and r = u is the only admissible parent shift.
//!
//! A vanishing denominator raises [`Error::DegenerateRoots`]; a key outside
//! its support returns an exact zero (the coefficient genuinely vanishes).

use crate::algebra::{index_sets, roots, HighestWeight, IndexSets, RootVariant, Shape};
use crate::branching::{is_valid_branch, StepKind};
use crate::error::Error;
use crate::exact::{CoefficientValue, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Shift direction of the fundamental coupling.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Couple with the vector module: Λ → Λ + ε_r (barred quantities).
    Covariant,
    /// Couple with the dual vector module: Λ → Λ − ε_r (unbarred quantities).
    Contravariant,
}

/// A reduced-Wigner-coefficient request: direction, algebra index `r`, and an
/// optional subalgebra index `u` (`None` = the subalgebra weight stays put).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RWCKey {
    pub direction: Direction,
    pub r: usize,
    pub u: Option<usize>,
}

/// A validated branching pair together with everything the closed forms
/// need: both root flavours for parent and child, and the index sets (super
/// steps only — classical steps use the full index ranges).
#[derive(Clone, Debug)]
pub struct BranchContext {
    parent: HighestWeight,
    child: HighestWeight,
    kind: StepKind,
    parent_barred: Vec<i64>,
    parent_unbarred: Vec<i64>,
    child_barred: Vec<i64>,
    child_unbarred: Vec<i64>,
    sets: Option<IndexSets>,
}

/// Internal view of one coefficient family (barred or unbarred): roots plus
/// the sets its products range over.
struct FamilyView<'a> {
    shape: Shape,
    algebra_roots: &'a [i64],
    subalgebra_roots: &'a [i64],
    /// Outer set: Ĩ' (barred) or Ĩ (unbarred); 1..=a classically.
    outer: BTreeSet<usize>,
    /// Inner set: I' (barred) or I (unbarred); 1..a classically.
    inner: BTreeSet<usize>,
    /// Support of the subalgebra index u: I (barred) or I' (unbarred);
    /// 1..a classically.
    u_support: BTreeSet<usize>,
    /// Even indices with a diagonal prescription: I0 (barred) or Ī0
    /// (unbarred); empty classically (the ratio form covers the diagonal).
    diagonal: BTreeSet<usize>,
    /// Even indices admitting *only* the diagonal shift r = u, with squared
    /// coefficient identically 1: Ī0 (barred) or I0 (unbarred).  In the
    /// cancelled ratio form every factor pairs off ((a_k−b_u)/(a_r−a_k) =
    /// −1 since a_u = b_u there), telescoping to +1; completeness forces the
    /// same value, since r = u is the only parent shift containing the
    /// shifted child.
    unit_diagonal: BTreeSet<usize>,
    classical: bool,
}

impl BranchContext {
    /// Build the context for a valid branching pair.
    pub fn new(parent: HighestWeight, child: HighestWeight) -> Result<Self, Error> {
        if !parent.is_dominant() {
            return Err(Error::invalid_branch(format!("{parent} is not dominant")));
        }
        if !is_valid_branch(&parent, &child) {
            return Err(Error::invalid_branch(format!(
                "{child} is not a branch of {parent}"
            )));
        }
        Self::build(parent, child)
    }

    /// Build without dominance/interlacing validation.  Needed for the
    /// diagonal prescription, whose shifted subalgebra weight may be
    /// non-dominant; the label-difference structure must still be branch-like
    /// for the index sets to exist.
    fn new_formal(parent: HighestWeight, child: HighestWeight) -> Result<Self, Error> {
        Self::build(parent, child)
    }

    fn build(parent: HighestWeight, child: HighestWeight) -> Result<Self, Error> {
        let kind = StepKind::of(parent.shape());
        let expected_child = parent.shape().child().ok_or_else(|| {
            Error::invalid_branch(format!("{} has no subalgebra level", parent.shape()))
        })?;
        if child.shape() != expected_child {
            return Err(Error::invalid_branch(format!(
                "child shape {} does not match {} below {}",
                child.shape(),
                expected_child,
                parent.shape()
            )));
        }
        let sets = match kind {
            StepKind::Super => Some(index_sets(&parent, &child, RootVariant::Barred)?),
            StepKind::Classical => None,
        };
        Ok(BranchContext {
            parent_barred: roots(&parent, RootVariant::Barred),
            parent_unbarred: roots(&parent, RootVariant::Unbarred),
            child_barred: roots(&child, RootVariant::Barred),
            child_unbarred: roots(&child, RootVariant::Unbarred),
            parent,
            child,
            kind,
            sets,
        })
    }

    pub fn parent(&self) -> &HighestWeight {
        &self.parent
    }

    pub fn child(&self) -> &HighestWeight {
        &self.child
    }

    pub fn kind(&self) -> StepKind {
        self.kind
    }

    /// Index sets of a super step (`None` on classical steps).
    pub fn sets(&self) -> Option<&IndexSets> {
        self.sets.as_ref()
    }

    fn family(&self, variant: RootVariant) -> FamilyView<'_> {
        let shape = self.parent.shape();
        let a = shape.levels();
        match (&self.sets, variant) {
            (Some(sets), RootVariant::Barred) => FamilyView {
                shape,
                algebra_roots: &self.parent_barred,
                subalgebra_roots: &self.child_barred,
                outer: sets.i_tilde_prime(),
                inner: sets.i_prime(),
                u_support: sets.i_set(),
                diagonal: sets.i0().clone(),
                unit_diagonal: sets.i0_bar().clone(),
                classical: false,
            },
            (Some(sets), RootVariant::Unbarred) => FamilyView {
                shape,
                algebra_roots: &self.parent_unbarred,
                subalgebra_roots: &self.child_unbarred,
                outer: sets.i_tilde(),
                inner: sets.i_set(),
                u_support: sets.i_prime(),
                diagonal: sets.i0_bar().clone(),
                unit_diagonal: sets.i0().clone(),
                classical: false,
            },
            (None, RootVariant::Barred) => FamilyView {
                shape,
                algebra_roots: &self.parent_barred,
                subalgebra_roots: &self.child_barred,
                outer: (1..=a).collect(),
                inner: (1..a).collect(),
                u_support: (1..a).collect(),
                diagonal: BTreeSet::new(),
                unit_diagonal: BTreeSet::new(),
                classical: true,
            },
            (None, RootVariant::Unbarred) => FamilyView {
                shape,
                algebra_roots: &self.parent_unbarred,
                subalgebra_roots: &self.child_unbarred,
                outer: (1..=a).collect(),
                inner: (1..a).collect(),
                u_support: (1..a).collect(),
                diagonal: BTreeSet::new(),
                unit_diagonal: BTreeSet::new(),
                classical: true,
            },
        }
    }

    /// Squared u-absent covariant coefficient (barred flavour).
    pub fn c_bar(&self, r: usize) -> Result<Rational, Error> {
        self.family(RootVariant::Barred).c(r)
    }

    /// Squared u-absent contravariant coefficient (unbarred flavour).
    pub fn c_unbar(&self, r: usize) -> Result<Rational, Error> {
        self.family(RootVariant::Unbarred).c(r)
    }

    /// Barred reduced matrix element.
    pub fn delta_bar(&self, u: usize) -> Result<Rational, Error> {
        self.family(RootVariant::Barred).delta(u)
    }

    /// Unbarred reduced matrix element.
    pub fn delta_unbar(&self, u: usize) -> Result<Rational, Error> {
        self.family(RootVariant::Unbarred).delta(u)
    }

    /// Squared u-present covariant coefficient.
    pub fn rho_bar(&self, r: usize, u: usize) -> Result<Rational, Error> {
        self.rho(RootVariant::Barred, r, u)
    }

    /// Squared u-present contravariant coefficient.
    pub fn rho_unbar(&self, r: usize, u: usize) -> Result<Rational, Error> {
        self.rho(RootVariant::Unbarred, r, u)
    }

    fn rho(&self, variant: RootVariant, r: usize, u: usize) -> Result<Rational, Error> {
        let view = self.family(variant);
        if view.unit_diagonal.contains(&u) {
            // Only the diagonal shift r = u reaches the shifted child here,
            // and its squared coefficient telescopes to exactly 1.
            return Ok(if r == u {
                Rational::one()
            } else {
                Rational::zero()
            });
        }
        if !view.u_support.contains(&u) {
            return Ok(Rational::zero());
        }
        if view.classical {
            return view.rho_ratio(r, u);
        }
        if view.diagonal.contains(&u) {
            if r == u {
                return self.rho_diagonal(variant, u);
            }
            if view.outer.contains(&r) {
                return view.rho_even_expanded(r, u);
            }
            return Ok(Rational::zero());
        }
        // Odd u (inner odd block): the ratio form covers every admissible r,
        // including r = u.
        if view.outer.contains(&r) {
            return view.rho_ratio(r, u);
        }
        Ok(Rational::zero())
    }

    /// Diagonal prescription `ρ_uu = c_u[shifted] · δ_u[unshifted]` with the
    /// subalgebra weight shifted by ±ε at the child position of `u`.
    fn rho_diagonal(&self, variant: RootVariant, u: usize) -> Result<Rational, Error> {
        let delta = match variant {
            RootVariant::Barred => 1,
            RootVariant::Unbarred => -1,
        };
        let shifted_child = self.child.shifted(u, delta);
        let shifted = BranchContext::new_formal(self.parent.clone(), shifted_child)?;
        let c = match variant {
            RootVariant::Barred => shifted.c_bar(u)?,
            RootVariant::Unbarred => shifted.c_unbar(u)?,
        };
        let d = match variant {
            RootVariant::Barred => self.delta_bar(u)?,
            RootVariant::Unbarred => self.delta_unbar(u)?,
        };
        Ok(c * d)
    }

    /// The phased reduced Wigner coefficient for `key`.
    ///
    /// Sign rules (S(x) = sgn(x), S(0) = +1, odd indices counting as greater
    /// than even ones): covariant `(−1)^{(r)(u)} S(r−u)`; contravariant
    /// `(−1)^{(r)(u)+(r)+(u)} S(r−u)`; the u-absent coefficient is the plain
    /// positive square root.
    pub fn rwc(&self, key: &RWCKey) -> Result<CoefficientValue, Error> {
        let shape = self.parent.shape();
        let levels = shape.levels();
        if !(1..=levels).contains(&key.r) {
            return Ok(CoefficientValue::zero());
        }
        match key.u {
            None => {
                let square = match key.direction {
                    Direction::Covariant => self.c_bar(key.r)?,
                    Direction::Contravariant => self.c_unbar(key.r)?,
                };
                Ok(CoefficientValue::sqrt(square))
            }
            Some(u) => {
                if !(1..levels).contains(&u) {
                    return Ok(CoefficientValue::zero());
                }
                let square = match key.direction {
                    Direction::Covariant => self.rho_bar(key.r, u)?,
                    Direction::Contravariant => self.rho_unbar(key.r, u)?,
                };
                let sign = match key.direction {
                    Direction::Covariant => covariant_phase(shape, key.r, u),
                    Direction::Contravariant => contravariant_phase(shape, key.r, u),
                };
                Ok(CoefficientValue::with_sign(sign, square))
            }
        }
    }
}

impl FamilyView<'_> {
    fn parity(&self, k: usize) -> u8 {
        self.shape.parity(k)
    }

    /// The subtracted grading sign `(−1)^{(k)}`: +1 even, −1 odd.
    fn grading_sign(&self, k: usize) -> i64 {
        if self.parity(k) == 0 {
            1
        } else {
            -1
        }
    }

    fn inverse_of(&self, value: i64, what: impl Fn() -> String) -> Result<Rational, Error> {
        if value == 0 {
            Err(Error::degenerate(what()))
        } else {
            Ok(Rational::new(1, value))
        }
    }

    fn c(&self, r: usize) -> Result<Rational, Error> {
        if !self.outer.contains(&r) {
            return Ok(Rational::zero());
        }
        let a = self.algebra_roots;
        let b = self.subalgebra_roots;
        let mut out = Rational::one();
        for &k in &self.outer {
            if k == r {
                continue;
            }
            out *= self.inverse_of(a[r - 1] - a[k - 1], || {
                format!("algebra roots at positions {r} and {k} coincide")
            })?;
        }
        for &k in &self.inner {
            out *= Rational::from_int(a[r - 1] - b[k - 1] - self.grading_sign(k));
        }
        Ok(out)
    }

    fn delta(&self, u: usize) -> Result<Rational, Error> {
        if !self.u_support.contains(&u) {
            return Ok(Rational::zero());
        }
        let a = self.algebra_roots;
        let b = self.subalgebra_roots;
        let mut out = if self.inner.len() % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        for &k in &self.inner {
            if k == u {
                continue;
            }
            out *= self.inverse_of(b[u - 1] - b[k - 1] - self.grading_sign(k), || {
                format!("subalgebra roots at positions {u} and {k} make a vanishing denominator")
            })?;
        }
        for &k in &self.outer {
            out *= Rational::from_int(a[k - 1] - b[u - 1]);
        }
        Ok(out)
    }

    /// Cancelled ratio form: odd u on super steps, every admissible pair on
    /// classical steps.
    fn rho_ratio(&self, r: usize, u: usize) -> Result<Rational, Error> {
        if !self.outer.contains(&r) || !self.u_support.contains(&u) {
            return Ok(Rational::zero());
        }
        let a = self.algebra_roots;
        let b = self.subalgebra_roots;
        let mut out = if self.inner.len() % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        for &k in &self.outer {
            if k == r {
                continue;
            }
            out *= Rational::from_int(a[k - 1] - b[u - 1]);
            out *= self.inverse_of(a[r - 1] - a[k - 1], || {
                format!("algebra roots at positions {r} and {k} coincide")
            })?;
        }
        for &k in &self.inner {
            if k == u {
                continue;
            }
            out *= Rational::from_int(a[r - 1] - b[k - 1] - self.grading_sign(k));
            out *= self.inverse_of(b[u - 1] - b[k - 1] - self.grading_sign(k), || {
                format!("subalgebra roots at positions {u} and {k} make a vanishing denominator")
            })?;
        }
        Ok(out)
    }

    /// Expanded form for even u with r on the outer set: the factor
    /// `(a_r − b_u)` of the δ-product cancels against the raw denominator,
    /// leaving the single inverse `(a_r − b_u + 1)^{-1}`.
    fn rho_even_expanded(&self, r: usize, u: usize) -> Result<Rational, Error> {
        let a = self.algebra_roots;
        let b = self.subalgebra_roots;
        let mut out = self.inverse_of(a[r - 1] - b[u - 1] + 1, || {
            format!("vanishing denominator (a_{r} − b_{u} + 1)")
        })?;
        for &k in &self.outer {
            if k == r {
                continue;
            }
            out *= self.inverse_of(a[r - 1] - a[k - 1], || {
                format!("algebra roots at positions {r} and {k} coincide")
            })?;
            out *= Rational::from_int(a[k - 1] - b[u - 1]);
        }
        for &k in &self.inner {
            out *= Rational::from_int(a[r - 1] - b[k - 1] - self.grading_sign(k));
        }
        if self.inner.len() % 2 == 1 {
            out = -out;
        }
        for &k in &self.inner {
            if k == u {
                continue;
            }
            out *= self.inverse_of(b[u - 1] - b[k - 1] - self.grading_sign(k), || {
                format!("subalgebra roots at positions {u} and {k} make a vanishing denominator")
            })?;
        }
        Ok(out)
    }
}

/// Sign comparator for the phase rules: cross-parity comparisons count odd
/// indices as greater than even ones; otherwise the numeric sign of `r − u`
/// is taken, with S(0) = +1.
pub fn index_order_sign(shape: Shape, r: usize, u: usize) -> i8 {
    let (pr, pu) = (shape.parity(r), shape.parity(u));
    match (pr, pu) {
        (1, 0) => 1,
        (0, 1) => -1,
        _ => {
            if r >= u {
                1
            } else {
                -1
            }
        }
    }
}

/// Phase of the covariant u-present coefficient: `(−1)^{(r)(u)} S(r−u)`.
pub fn covariant_phase(shape: Shape, r: usize, u: usize) -> i8 {
    let parity_product = shape.parity(r) * shape.parity(u);
    let base = if parity_product % 2 == 0 { 1 } else { -1 };
    base * index_order_sign(shape, r, u)
}

/// Phase of the contravariant u-present coefficient:
/// `(−1)^{(r)(u)+(r)+(u)} S(r−u)`.
pub fn contravariant_phase(shape: Shape, r: usize, u: usize) -> i8 {
    let e = shape.parity(r) as u32 * shape.parity(u) as u32
        + shape.parity(r) as u32
        + shape.parity(u) as u32;
    let base = if e % 2 == 0 { 1 } else { -1 };
    base * index_order_sign(shape, r, u)
}

/// The closed-form product `∏_{k≠u} (α_u − α_k − (−1)^{(k)})/(α_u − α_k)`
/// over all algebra indices, with unbarred roots at `w`'s own shape.  The
/// `k = u` term of the printed product is singular and is excluded.
pub fn eta_squared_product(w: &HighestWeight, u: usize) -> Result<Rational, Error> {
    let shape = w.shape();
    let alpha = roots(w, RootVariant::Unbarred);
    let mut out = Rational::one();
    for k in 1..=shape.levels() {
        if k == u {
            continue;
        }
        let diff = alpha[u - 1] - alpha[k - 1];
        if diff == 0 {
            return Err(Error::degenerate(format!(
                "unbarred roots at positions {u} and {k} coincide"
            )));
        }
        let grading = if shape.parity(k) == 0 { 1 } else { -1 };
        out *= Rational::new(diff - grading, diff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn hw(m: usize, n: usize, labels: &[i64]) -> HighestWeight {
        HighestWeight::from_parts(m, n, labels).unwrap()
    }

    fn ctx(parent: HighestWeight, child: HighestWeight) -> BranchContext {
        BranchContext::new(parent, child).unwrap()
    }

    #[test]
    fn c_bar_gl11_vector() {
        let c = ctx(hw(1, 1, &[1, 0]), hw(1, 0, &[1]));
        assert_eq!(c.c_bar(1).unwrap(), rat(1, 2));
        assert_eq!(c.c_bar(2).unwrap(), rat(1, 2));
        let c = ctx(hw(1, 1, &[1, 0]), hw(1, 0, &[0]));
        assert_eq!(c.c_bar(2).unwrap(), Rational::one());
        // r = 1 is outside Ĩ' = {2} for this branch: exact zero.
        assert_eq!(c.c_bar(1).unwrap(), Rational::zero());
    }

    #[test]
    fn c_unbar_gl11_examples() {
        let c = ctx(hw(1, 1, &[0, -2]), hw(1, 0, &[-1]));
        assert_eq!(c.c_unbar(1).unwrap(), rat(1, 3));
        assert_eq!(c.c_unbar(2).unwrap(), rat(2, 3));
        let c = ctx(hw(1, 1, &[0, -2]), hw(1, 0, &[0]));
        assert_eq!(c.c_unbar(2).unwrap(), Rational::one());
    }

    #[test]
    fn c_unbar_non_unitary_regime() {
        // Negative square with exact sum 1: the closed forms stay valid for
        // every dominant weight, unitarizable or not.
        let c = ctx(hw(1, 1, &[2, 0]), hw(1, 0, &[1]));
        assert_eq!(c.c_unbar(1).unwrap(), rat(-1, 1));
        assert_eq!(c.c_unbar(2).unwrap(), rat(2, 1));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(
            ctx(hw(1, 1, &[1, 0]), hw(1, 0, &[0])).delta_bar(1).unwrap(),
            Rational::one()
        );
        assert_eq!(
            ctx(hw(1, 1, &[2, 0]), hw(1, 0, &[1])).delta_bar(1).unwrap(),
            rat(2, 1)
        );
        assert_eq!(
            ctx(hw(1, 1, &[0, -2]), hw(1, 0, &[0]))
                .delta_unbar(1)
                .unwrap(),
            rat(2, 1)
        );
        // Outside support: δ̄ needs u ∈ I.
        assert_eq!(
            ctx(hw(1, 1, &[1, 0]), hw(1, 0, &[1])).delta_bar(1).unwrap(),
            Rational::zero()
        );
    }

    #[test]
    fn rho_bar_gl11_vector_including_diagonal() {
        let c = ctx(hw(1, 1, &[1, 0]), hw(1, 0, &[0]));
        assert_eq!(c.rho_bar(2, 1).unwrap(), rat(1, 2));
        assert_eq!(c.rho_bar(1, 1).unwrap(), rat(1, 2));
        let total = c.rho_bar(1, 1).unwrap() + c.rho_bar(2, 1).unwrap();
        assert_eq!(total, Rational::one());
    }

    #[test]
    fn rho_unit_diagonal_when_child_label_matches() {
        // Λ=(1|0), λ=(1): u=1 has Λ_1 = λ_1, so the only covariant shift
        // containing λ+ε_1 = (2) is r=1 and the squared coefficient is 1 —
        // the top-pattern coupling of V ⊗ V(1|0) into V(2|0).
        let c = ctx(hw(1, 1, &[1, 0]), hw(1, 0, &[1]));
        assert_eq!(c.rho_bar(1, 1).unwrap(), Rational::one());
        assert_eq!(c.rho_bar(2, 1).unwrap(), Rational::zero());
        // Mirror: unbarred unit diagonal sits on I0.
        let c = ctx(hw(1, 1, &[0, -2]), hw(1, 0, &[-1]));
        assert_eq!(c.rho_unbar(1, 1).unwrap(), Rational::one());
        assert_eq!(c.rho_unbar(2, 1).unwrap(), Rational::zero());
    }

    #[test]
    fn rho_unbar_gl11_including_diagonal() {
        let c = ctx(hw(1, 1, &[0, -2]), hw(1, 0, &[0]));
        assert_eq!(c.rho_unbar(2, 1).unwrap(), rat(1, 3));
        assert_eq!(c.rho_unbar(1, 1).unwrap(), rat(2, 3));
        let total = c.rho_unbar(1, 1).unwrap() + c.rho_unbar(2, 1).unwrap();
        assert_eq!(total, Rational::one());
    }

    #[test]
    fn rho_diagonal_formal_context_restores_sum_rule() {
        // Λ=(1,1|0), λ=(0,0): the shifted subalgebra weight (0,1) for the
        // diagonal u=2 term is non-dominant, yet the formal evaluation gives
        // exactly the missing half of the sum rule.
        let c = ctx(hw(2, 1, &[1, 1, 0]), hw(2, 0, &[0, 0]));
        assert_eq!(c.rho_bar(3, 2).unwrap(), rat(1, 2));
        assert_eq!(c.rho_bar(2, 2).unwrap(), rat(1, 2));
        let sum = c.rho_bar(1, 2).unwrap() + c.rho_bar(2, 2).unwrap() + c.rho_bar(3, 2).unwrap();
        assert_eq!(sum, Rational::one());
    }

    #[test]
    fn classical_rho_handles_its_diagonal() {
        // gl(2), Λ=(1,0), λ=(1): the raw factorized form is 0/0 at the
        // diagonal; the cancelled ratio form gives the true value 1.
        let c = ctx(hw(2, 0, &[1, 0]), hw(1, 0, &[1]));
        assert_eq!(c.rho_bar(1, 1).unwrap(), Rational::one());
        assert_eq!(c.rho_bar(2, 1).unwrap(), Rational::zero());
        assert_eq!(c.c_bar(1).unwrap(), rat(1, 2));
        assert_eq!(c.c_bar(2).unwrap(), rat(1, 2));
    }

    #[test]
    fn sum_rules_hold_on_a_spurious_branch() {
        // The trivial gl(1|1) module admits the spurious candidate (−1); the
        // sum rules are algebraic identities and hold there too.
        let c = ctx(hw(1, 1, &[0, 0]), hw(1, 0, &[-1]));
        let cbar_sum: Rational = (1..=2).map(|r| c.c_bar(r).unwrap()).sum();
        let c_sum: Rational = (1..=2).map(|r| c.c_unbar(r).unwrap()).sum();
        assert_eq!(cbar_sum, Rational::one());
        assert_eq!(c_sum, Rational::one());
    }

    #[test]
    fn degenerate_roots_error() {
        // Λ=(0|−1): barred roots (0, 0) collide, so barred denominators over
        // Ĩ' = {1,2} are undefined; the unbarred flavour is fine.
        let c = ctx(hw(1, 1, &[0, -1]), hw(1, 0, &[0]));
        assert!(matches!(c.c_bar(1), Err(Error::DegenerateRoots { .. })));
        assert!(c.c_unbar(1).is_ok());
    }

    #[test]
    fn rwc_phases_and_values() {
        // Covariant r=2, u=1 on the vector branch: phase +1, square 1/2.
        let c = ctx(hw(1, 1, &[1, 0]), hw(1, 0, &[0]));
        let v = c
            .rwc(&RWCKey {
                direction: Direction::Covariant,
                r: 2,
                u: Some(1),
            })
            .unwrap();
        assert_eq!(v, CoefficientValue::with_sign(1, rat(1, 2)));

        // u-absent: plain positive square root of c̄.
        let c = ctx(hw(1, 1, &[1, 0]), hw(1, 0, &[1]));
        let v = c
            .rwc(&RWCKey {
                direction: Direction::Covariant,
                r: 1,
                u: None,
            })
            .unwrap();
        assert_eq!(v, CoefficientValue::sqrt(rat(1, 2)));

        // Contravariant r=2, u=1: sign (−1)^{(r)(u)+(r)+(u)} S(+) = −1.
        let c = ctx(hw(1, 1, &[0, -2]), hw(1, 0, &[0]));
        let v = c
            .rwc(&RWCKey {
                direction: Direction::Contravariant,
                r: 2,
                u: Some(1),
            })
            .unwrap();
        assert_eq!(v, CoefficientValue::with_sign(-1, rat(1, 3)));

        // Out of support: exact zero, not an error.
        let z = c
            .rwc(&RWCKey {
                direction: Direction::Contravariant,
                r: 5,
                u: None,
            })
            .unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn phase_relation_between_directions() {
        // (−1)^{(r)+(u)} × contravariant phase = covariant phase, for every
        // parity/order combination.
        let shape = Shape::new(2, 2).unwrap();
        for r in 1..=4 {
            for u in 1..=3 {
                let rel = if (shape.parity(r) + shape.parity(u)) % 2 == 0 {
                    1
                } else {
                    -1
                };
                assert_eq!(
                    covariant_phase(shape, r, u),
                    rel * contravariant_phase(shape, r, u),
                    "r={r}, u={u}"
                );
            }
        }
    }

    #[test]
    fn cross_parity_order_beats_numeric_order() {
        // Odd positions always count as greater; here they also are
        // numerically greater, and equal-parity pairs use numeric order.
        let shape = Shape::new(3, 2).unwrap();
        assert_eq!(index_order_sign(shape, 4, 2), 1); // odd vs even
        assert_eq!(index_order_sign(shape, 2, 4), -1); // even vs odd
        assert_eq!(index_order_sign(shape, 2, 3), -1); // both even: numeric
        assert_eq!(index_order_sign(shape, 3, 3), 1); // S(0) = +1
        assert_eq!(index_order_sign(shape, 5, 4), 1); // both odd: numeric
    }

    #[test]
    fn eta_product_examples() {
        assert_eq!(
            eta_squared_product(&hw(1, 1, &[2, 0]), 1).unwrap(),
            rat(2, 1)
        );
        assert_eq!(
            eta_squared_product(&hw(1, 0, &[3]), 1).unwrap(),
            Rational::one()
        );
        assert_eq!(
            eta_squared_product(&hw(2, 0, &[1, 0]), 1).unwrap(),
            rat(1, 2)
        );
        // gl(1|1), Λ=(1,0): unbarred roots (0,0) coincide, so the product
        // is undefined.
        assert!(matches!(
            eta_squared_product(&hw(1, 1, &[1, 0]), 1),
            Err(Error::DegenerateRoots { .. })
        ));
    }

    #[test]
    fn invalid_branch_is_rejected() {
        assert!(matches!(
            BranchContext::new(hw(1, 1, &[1, 0]), hw(1, 0, &[5])),
            Err(Error::InvalidBranch { .. })
        ));
        assert!(matches!(
            BranchContext::new(hw(2, 0, &[0, 1]), hw(1, 0, &[0])),
            Err(Error::InvalidBranch { .. })
        ));
    }
}
