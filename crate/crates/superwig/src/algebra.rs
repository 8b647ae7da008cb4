//! Weights, gradings, characteristic roots and index sets for gl(m|n).
//!
//! Conventions used across the crate:
//!
//! * Generator indices `p` run 1..=m+n.  The grading is `(p) = 0` for
//!   `p ≤ m` (even) and `(p) = 1` for `p > m` (odd).  An "odd index μ"
//!   (1-based within the odd block) sits at position `p = m + μ`; the single
//!   conversion lives in [`Shape::odd_position`].
//! * A highest weight is a list of `m+n` integer labels
//!   `(Λ_1..Λ_m | Λ_{m+1}..Λ_{m+n})`; it is dominant when each block is
//!   separately non-increasing.
//! * Characteristic roots come in a barred and an unbarred flavour and are
//!   always computed *intrinsically*, i.e. from the weight's own shape:
//!     - barred:   `ᾱ_i = i − 1 − Λ_i`,       `ᾱ_μ = Λ_μ + m + 1 − μ`;
//!     - unbarred: `α_i = Λ_i + m − n − i`,   `α_μ = μ − Λ_μ − n`.
//!   Applying these at the subalgebra shape (m, n−1) reproduces the
//!   subalgebra root formulas `α0_i = λ_i + m − n + 1 − i`,
//!   `α0_μ = μ − λ_μ − n + 1`, and at (m−1, 0) the classical-tail roots.
//! * Barred and unbarred algebra-level roots determine each other entrywise:
//!   `ᾱ_i = −α_i + (m − n − 1)` on even entries and
//!   `ᾱ_μ = −α_μ + (m − n + 1)` on odd entries; the conversion is an
//!   involution and [`convert_roots`] implements it.
//!
//! The index sets attached to a branching pair (Λ of shape (m,n), λ of shape
//! (m,n−1)) split the even positions by how the label dropped:
//! `I0 = {i : Λ_i = λ_i + 1}`, `Ī0 = {i : Λ_i = λ_i}`, and collect the inner
//! odd positions `I1 = {m+1..m+n−1}`.  The derived sets are
//! `I = I0 ∪ I1`, `I' = Ī0 ∪ I1`, `Ĩ = I ∪ {m+n}`, `Ĩ' = I' ∪ {m+n}`.
//! They can equivalently be read off root relations in either flavour
//! ([`index_sets`] checks that all definitions agree).

use crate::error::Error;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// The algebra gl(m|n).  `n = 0` denotes the classical levels gl(m).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub m: usize,
    pub n: usize,
}

impl Shape {
    /// Construct; requires `m + n ≥ 1`.
    pub fn new(m: usize, n: usize) -> Result<Self, Error> {
        if m + n == 0 {
            return Err(Error::Inconsistent {
                detail: "shape must satisfy m + n >= 1".into(),
            });
        }
        Ok(Shape { m, n })
    }

    /// Total number of generator indices / weight labels.
    pub fn levels(&self) -> usize {
        self.m + self.n
    }

    /// Grading of index `p` (1-based): 0 for `p ≤ m`, 1 for `p > m`.
    pub fn parity(&self, p: usize) -> u8 {
        debug_assert!((1..=self.levels()).contains(&p));
        u8::from(p > self.m)
    }

    /// Position of the 1-based odd index `μ`: `p = m + μ`.
    pub fn odd_position(&self, mu: usize) -> usize {
        debug_assert!((1..=self.n).contains(&mu));
        self.m + mu
    }

    /// True for purely classical shapes (n = 0).
    pub fn is_classical(&self) -> bool {
        self.n == 0
    }

    /// The next shape down the subalgebra chain
    /// gl(m|n) ⊃ gl(m|n−1) ⊃ … ⊃ gl(m) ⊃ … ⊃ gl(1), or `None` at gl(1)/gl(0|1).
    pub fn child(&self) -> Option<Shape> {
        if self.n > 0 {
            Some(Shape {
                m: self.m,
                n: self.n - 1,
            })
        } else if self.m > 1 {
            Some(Shape {
                m: self.m - 1,
                n: 0,
            })
        } else {
            None
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gl({}|{})", self.m, self.n)
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An integral weight `(Λ_1..Λ_m | Λ_{m+1}..Λ_{m+n})` for a given shape.
///
/// The type also houses subalgebra weights (shape (m, n−1) or (k, 0)) and
/// non-dominant shifted weights that arise transiently; dominance is a
/// property ([`HighestWeight::is_dominant`]), demanded at API boundaries that
/// require it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HighestWeight {
    shape: Shape,
    labels: Vec<i64>,
}

impl HighestWeight {
    pub fn new(shape: Shape, labels: Vec<i64>) -> Result<Self, Error> {
        if labels.len() != shape.levels() {
            return Err(Error::Inconsistent {
                detail: format!(
                    "weight for {} needs {} labels, got {}",
                    shape,
                    shape.levels(),
                    labels.len()
                ),
            });
        }
        Ok(HighestWeight { shape, labels })
    }

    /// Convenience constructor from raw `(m, n, labels)`.
    pub fn from_parts(m: usize, n: usize, labels: &[i64]) -> Result<Self, Error> {
        Self::new(Shape::new(m, n)?, labels.to_vec())
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    /// Label at 1-based position `p`.
    pub fn label(&self, p: usize) -> i64 {
        self.labels[p - 1]
    }

    pub fn even_labels(&self) -> &[i64] {
        &self.labels[..self.shape.m]
    }

    pub fn odd_labels(&self) -> &[i64] {
        &self.labels[self.shape.m..]
    }

    /// Dominance: both blocks separately non-increasing.
    pub fn is_dominant(&self) -> bool {
        let non_increasing = |s: &[i64]| s.windows(2).all(|w| w[0] >= w[1]);
        non_increasing(self.even_labels()) && non_increasing(self.odd_labels())
    }

    /// The weight shifted by `delta · ε_p` (same shape; may be non-dominant).
    pub fn shifted(&self, p: usize, delta: i64) -> HighestWeight {
        let mut labels = self.labels.clone();
        labels[p - 1] += delta;
        HighestWeight {
            shape: self.shape,
            labels,
        }
    }

    /// Sum of all labels (the "level" of the weight).
    pub fn label_sum(&self) -> i64 {
        self.labels.iter().sum()
    }

    /// The zero weight of a shape.
    pub fn zero(shape: Shape) -> HighestWeight {
        HighestWeight {
            shape,
            labels: vec![0; shape.levels()],
        }
    }
}

impl fmt::Display for HighestWeight {
    /// `(Λ_1,..,Λ_m|Λ_{m+1},..,Λ_{m+n})`; the bar is omitted when n = 0.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &[i64]| {
            s.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        if self.shape.n == 0 {
            write!(f, "({})", join(self.even_labels()))
        } else if self.shape.m == 0 {
            write!(f, "(|{})", join(self.odd_labels()))
        } else {
            write!(
                f,
                "({}|{})",
                join(self.even_labels()),
                join(self.odd_labels())
            )
        }
    }
}

impl fmt::Debug for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.shape, self)
    }
}

impl Serialize for HighestWeight {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("HighestWeight", 3)?;
        s.serialize_field("m", &self.shape.m)?;
        s.serialize_field("n", &self.shape.n)?;
        s.serialize_field("labels", &self.labels)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for HighestWeight {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            m: usize,
            n: usize,
            labels: Vec<i64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        HighestWeight::from_parts(raw.m, raw.n, &raw.labels).map_err(serde::de::Error::custom)
    }
}

/// The two flavours of characteristic roots.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootVariant {
    Barred,
    Unbarred,
}

/// Characteristic roots of a weight, computed at its own shape.
///
/// Entries are integers; position `p` holds the root attached to index `p`.
///
/// * barred:   `ᾱ_i = i − 1 − Λ_i` (even), `ᾱ_μ = Λ_μ + m + 1 − μ` (odd);
/// * unbarred: `α_i = Λ_i + m − n − i` (even), `α_μ = μ − Λ_μ − n` (odd).
pub fn roots(w: &HighestWeight, variant: RootVariant) -> Vec<i64> {
    let Shape { m, n } = w.shape();
    let (m_i, n_i) = (m as i64, n as i64);
    let mut out = Vec::with_capacity(m + n);
    for i in 1..=m {
        let i_i = i as i64;
        out.push(match variant {
            RootVariant::Barred => i_i - 1 - w.label(i),
            RootVariant::Unbarred => w.label(i) + m_i - n_i - i_i,
        });
    }
    for mu in 1..=n {
        let mu_i = mu as i64;
        let lab = w.label(w.shape().odd_position(mu));
        out.push(match variant {
            RootVariant::Barred => lab + m_i + 1 - mu_i,
            RootVariant::Unbarred => mu_i - lab - n_i,
        });
    }
    out
}

/// Entrywise conversion between barred and unbarred algebra-level roots at a
/// given shape: even entries `x ↦ −x + (m − n − 1)`, odd entries
/// `x ↦ −x + (m − n + 1)`.  The map is an involution.
pub fn convert_roots(shape: Shape, values: &[i64]) -> Vec<i64> {
    assert_eq!(values.len(), shape.levels());
    let offset_even = shape.m as i64 - shape.n as i64 - 1;
    let offset_odd = shape.m as i64 - shape.n as i64 + 1;
    values
        .iter()
        .enumerate()
        .map(|(idx, &x)| {
            if shape.parity(idx + 1) == 0 {
                -x + offset_even
            } else {
                -x + offset_odd
            }
        })
        .collect()
}

/// The index sets attached to a super branching pair
/// (Λ of shape (m,n), λ of shape (m,n−1)), n ≥ 1.
///
/// Stored: the even split `I0`/`Ī0` and the inner odd block `I1`; the derived
/// sets `I`, `I'`, `Ĩ`, `Ĩ'` are provided by accessors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndexSets {
    i0: BTreeSet<usize>,
    i0_bar: BTreeSet<usize>,
    i1: BTreeSet<usize>,
    top: usize,
}

impl IndexSets {
    /// `I0 = {i ≤ m : Λ_i = λ_i + 1}` (even labels that dropped).
    pub fn i0(&self) -> &BTreeSet<usize> {
        &self.i0
    }

    /// `Ī0 = {i ≤ m : Λ_i = λ_i}` (even labels that stayed).
    pub fn i0_bar(&self) -> &BTreeSet<usize> {
        &self.i0_bar
    }

    /// `I1 = {m+1, .., m+n−1}` (inner odd positions).
    pub fn i1(&self) -> &BTreeSet<usize> {
        &self.i1
    }

    /// The distinguished top position `m + n`.
    pub fn top(&self) -> usize {
        self.top
    }

    /// `I = I0 ∪ I1`.
    pub fn i_set(&self) -> BTreeSet<usize> {
        self.i0.union(&self.i1).copied().collect()
    }

    /// `I' = Ī0 ∪ I1`.
    pub fn i_prime(&self) -> BTreeSet<usize> {
        self.i0_bar.union(&self.i1).copied().collect()
    }

    /// `Ĩ = I ∪ {m+n}`.
    pub fn i_tilde(&self) -> BTreeSet<usize> {
        let mut s = self.i_set();
        s.insert(self.top);
        s
    }

    /// `Ĩ' = I' ∪ {m+n}`.
    pub fn i_tilde_prime(&self) -> BTreeSet<usize> {
        let mut s = self.i_prime();
        s.insert(self.top);
        s
    }
}

/// Compute the index sets of a super branching pair from root relations in
/// the requested flavour, verifying agreement with the label-difference
/// definition.
///
/// * barred relations:  `I0 = {i : ᾱ0_i = 1 + ᾱ_i}`, `Ī0 = {i : ᾱ0_i = ᾱ_i}`;
/// * unbarred relations: `I0 = {i : α0_i = α_i}`, `Ī0 = {i : α0_i = 1 + α_i}`.
///
/// Errors with [`Error::InvalidBranch`] if some even label difference is
/// outside {0, 1} (the two-case rule), which is exactly the condition for the
/// relations above to classify every even index.
pub fn index_sets(
    parent: &HighestWeight,
    child: &HighestWeight,
    convention: RootVariant,
) -> Result<IndexSets, Error> {
    let shape = parent.shape();
    if shape.n == 0 {
        return Err(Error::InvalidBranch {
            detail: format!("index sets are defined for super steps only, got {shape}"),
        });
    }
    let child_shape = Shape::new(shape.m, shape.n - 1)?;
    if child.shape() != child_shape {
        return Err(Error::InvalidBranch {
            detail: format!(
                "child shape {} does not match expected {} under {}",
                child.shape(),
                child_shape,
                shape
            ),
        });
    }
    let mut i0 = BTreeSet::new();
    let mut i0_bar = BTreeSet::new();
    for i in 1..=shape.m {
        match parent.label(i) - child.label(i) {
            1 => {
                i0.insert(i);
            }
            0 => {
                i0_bar.insert(i);
            }
            d => {
                return Err(Error::InvalidBranch {
                    detail: format!(
                        "even label difference at position {i} is {d}, must be 0 or 1"
                    ),
                })
            }
        }
    }
    // Cross-check against the root-relation definition in the requested
    // flavour; the two definitions must agree identically.
    let parent_roots = roots(parent, convention);
    let child_roots = roots(child, convention);
    for i in 1..=shape.m {
        let (a, a0) = (parent_roots[i - 1], child_roots[i - 1]);
        let in_i0 = match convention {
            RootVariant::Barred => a0 == 1 + a,
            RootVariant::Unbarred => a0 == a,
        };
        let in_i0_bar = match convention {
            RootVariant::Barred => a0 == a,
            RootVariant::Unbarred => a0 == 1 + a,
        };
        if in_i0 != i0.contains(&i) || in_i0_bar != i0_bar.contains(&i) {
            return Err(Error::Inconsistent {
                detail: format!(
                    "root-relation and label-difference index sets disagree at position {i}"
                ),
            });
        }
    }
    let i1 = (shape.m + 1..shape.levels()).collect();
    Ok(IndexSets {
        i0,
        i0_bar,
        i1,
        top: shape.levels(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(m: usize, n: usize, labels: &[i64]) -> HighestWeight {
        HighestWeight::from_parts(m, n, labels).unwrap()
    }

    #[test]
    fn parity_and_positions() {
        let s = Shape::new(2, 3).unwrap();
        assert_eq!(s.parity(1), 0);
        assert_eq!(s.parity(2), 0);
        assert_eq!(s.parity(3), 1);
        assert_eq!(s.parity(5), 1);
        assert_eq!(s.odd_position(1), 3);
        assert_eq!(s.odd_position(3), 5);
        assert!(Shape::new(0, 0).is_err());
    }

    #[test]
    fn barred_roots_gl11() {
        // gl(1|1), Λ = (1|0): ᾱ_1 = 1−1−1 = −1, ᾱ_2 = 0+1+1−1 = 1.
        let w = hw(1, 1, &[1, 0]);
        assert_eq!(roots(&w, RootVariant::Barred), vec![-1, 1]);
    }

    #[test]
    fn unbarred_roots_gl11() {
        // gl(1|1), Λ = (0|−2): α_1 = 0+1−1−1 = −1, α_2 = 1−(−2)−1 = 2.
        let w = hw(1, 1, &[0, -2]);
        assert_eq!(roots(&w, RootVariant::Unbarred), vec![-1, 2]);
    }

    #[test]
    fn zero_weight_roots_are_affine_staircase() {
        // Λ = 0: ᾱ_i = i−1, ᾱ_μ = m+1−μ.
        for (m, n) in [(1, 1), (2, 1), (1, 2), (3, 2)] {
            let w = HighestWeight::zero(Shape::new(m, n).unwrap());
            let r = roots(&w, RootVariant::Barred);
            for i in 1..=m {
                assert_eq!(r[i - 1], i as i64 - 1);
            }
            for mu in 1..=n {
                assert_eq!(r[m + mu - 1], (m + 1 - mu) as i64);
            }
        }
    }

    #[test]
    fn gl21_zero_weight_both_flavours() {
        let w = HighestWeight::zero(Shape::new(2, 1).unwrap());
        assert_eq!(roots(&w, RootVariant::Unbarred), vec![0, -1, 0]);
        assert_eq!(roots(&w, RootVariant::Barred), vec![0, 1, 2]);
    }

    #[test]
    fn conversion_is_entrywise_and_involutive() {
        for labels in [[0i64, 0], [1, 0], [0, -2], [3, -1]] {
            let w = hw(1, 1, &labels);
            let alpha = roots(&w, RootVariant::Unbarred);
            let alpha_bar = roots(&w, RootVariant::Barred);
            assert_eq!(convert_roots(w.shape(), &alpha), alpha_bar);
            assert_eq!(convert_roots(w.shape(), &alpha_bar), alpha);
        }
        let w = HighestWeight::zero(Shape::new(2, 1).unwrap());
        let alpha = roots(&w, RootVariant::Unbarred);
        assert_eq!(convert_roots(w.shape(), &alpha), roots(&w, RootVariant::Barred));
    }

    #[test]
    fn subalgebra_roots_match_printed_formulas() {
        // For the super step (m,n) → (m,n−1) the intrinsic roots of the child
        // must equal α0_i = λ_i+m−n+1−i, α0_μ = μ−λ_μ−n+1 (and the barred
        // analogues with the same m).
        let (m, n) = (2usize, 2usize);
        let lam = hw(2, 1, &[3, 1, -2]);
        let unb = roots(&lam, RootVariant::Unbarred);
        let bar = roots(&lam, RootVariant::Barred);
        let (m_i, n_i) = (m as i64, n as i64);
        for i in 1..=m {
            let i_i = i as i64;
            assert_eq!(unb[i - 1], lam.label(i) + m_i - n_i + 1 - i_i);
            assert_eq!(bar[i - 1], i_i - 1 - lam.label(i));
        }
        for mu in 1..=n - 1 {
            let mu_i = mu as i64;
            let lab = lam.label(m + mu);
            assert_eq!(unb[m + mu - 1], mu_i - lab - n_i + 1);
            assert_eq!(bar[m + mu - 1], lab + m_i + 1 - mu_i);
        }
    }

    #[test]
    fn index_sets_examples() {
        // gl(1|1), Λ=(1|0), λ=(1): I0=∅, Ī0={1}, Ĩ'={1,2}, Ĩ={2}.
        let big = hw(1, 1, &[1, 0]);
        let small = hw(1, 0, &[1]);
        let sets = index_sets(&big, &small, RootVariant::Barred).unwrap();
        assert!(sets.i0().is_empty());
        assert_eq!(sets.i0_bar(), &BTreeSet::from([1]));
        assert!(sets.i1().is_empty());
        assert_eq!(sets.i_tilde_prime(), BTreeSet::from([1, 2]));
        assert_eq!(sets.i_tilde(), BTreeSet::from([2]));

        // gl(1|1), Λ=(1|0), λ=(0): I0={1}, Ī0=∅, Ĩ'={2}, Ĩ={1,2}.
        let small = hw(1, 0, &[0]);
        let sets = index_sets(&big, &small, RootVariant::Unbarred).unwrap();
        assert_eq!(sets.i0(), &BTreeSet::from([1]));
        assert!(sets.i0_bar().is_empty());
        assert_eq!(sets.i_tilde_prime(), BTreeSet::from([2]));
        assert_eq!(sets.i_tilde(), BTreeSet::from([1, 2]));
    }

    #[test]
    fn index_sets_trivial_restriction() {
        // gl(2|2), Λ extended trivially by λ = Λ even part: Ī0 = {1,2}, I1={3}.
        let big = hw(2, 2, &[4, 2, 1, 0]);
        let small = hw(2, 1, &[4, 2, 1]);
        for conv in [RootVariant::Barred, RootVariant::Unbarred] {
            let sets = index_sets(&big, &small, conv).unwrap();
            assert!(sets.i0().is_empty());
            assert_eq!(sets.i0_bar(), &BTreeSet::from([1, 2]));
            assert_eq!(sets.i1(), &BTreeSet::from([3]));
            assert_eq!(sets.top(), 4);
        }
    }

    #[test]
    fn index_sets_reject_bad_difference() {
        let big = hw(1, 1, &[2, 0]);
        let small = hw(1, 0, &[0]);
        assert!(matches!(
            index_sets(&big, &small, RootVariant::Barred),
            Err(Error::InvalidBranch { .. })
        ));
    }

    #[test]
    fn dominance_and_shifts() {
        assert!(hw(2, 2, &[3, 1, 0, -2]).is_dominant());
        assert!(!hw(2, 2, &[1, 3, 0, -2]).is_dominant());
        // Mixed-block ordering is unconstrained.
        assert!(hw(2, 2, &[0, 0, 5, 5]).is_dominant());
        let w = hw(1, 1, &[1, 0]);
        assert_eq!(w.shifted(2, 1).labels(), &[1, 1]);
        assert_eq!(w.shifted(1, -1).labels(), &[0, 0]);
    }

    #[test]
    fn weight_serialization_shape() {
        let w = hw(2, 1, &[1, 0, -1]);
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, "{\"m\":2,\"n\":1,\"labels\":[1,0,-1]}");
        let back: HighestWeight = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
        assert!(serde_json::from_str::<HighestWeight>("{\"m\":1,\"n\":1,\"labels\":[1]}").is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(hw(2, 1, &[1, 0, -1]).to_string(), "(1,0|-1)");
        assert_eq!(hw(2, 0, &[1, 0]).to_string(), "(1,0)");
        assert_eq!(hw(0, 2, &[1, 0]).to_string(), "(|1,0)");
    }
}
