//! Full fundamental Wigner coefficients down the subalgebra chain, the form
//! conversion phase, and the symmetry-constant report.
//!
//! A full coefficient ⟨(Λ′)| e_p ⊗ (Λ)⟩ (covariant) or ⟨(Λ′)| ē_p ⊗ (Λ)⟩
//! (contravariant) couples a Gelfand–Tsetlin pattern of Λ to a pattern of
//! Λ′ = Λ ± ε_{r}.  It factorizes into one reduced coefficient per chain
//! level: the u-absent coefficient at level `p` (where the shift chain
//! starts) and u-present coefficients at every level above, the subalgebra
//! index of each factor being the shift index of the level below.  Every
//! factor is evaluated in the *unshifted* source context, so the whole chain
//! is a product of [`crate::rwc`] values — an exact [`CoefficientValue`].
//!
//! # Basis-compatibility signs
//!
//! The phases attached to reduced coefficients by [`crate::rwc`] are
//! per-context conventions.  Multiplying raw reduced coefficients down a
//! chain produces the correct magnitude for every pattern-to-pattern
//! coefficient, but not, in general, signs consistent with one orthonormal
//! Gelfand–Tsetlin basis per module.  [`full_wc`] therefore adapts each
//! level factor with a compatibility sign (a function of the level's
//! branching digits, its level-local roots, and the two shift indices), and
//! attaches to the chain head the graded sign `(−1)^{(p)·ω_{<p}}`, where
//! `ω_{<p}` is the odd part of the source-pattern weight below level `p` —
//! the cost of commuting an odd coupled vector past the odd part of the
//! state it acts above.  With these signs, couplings into each target member
//! form orthonormal rows/columns (exact identity Gram matrices), and on
//! purely even shapes they reproduce the classical pattern-basis matrix
//! elements sign-for-sign.  The signs were calibrated against, and are
//! verified by, the self-contained brute-force construction in
//! [`crate::oracle`], which fixes the basis by lexicographically-first
//! lowering words with positive overlaps.
//!
//! The symmetry constant η relates covariant and contravariant couplings of
//! the same pair of modules.  It is *measured* (by the oracle, as a ratio of
//! couplings) and separately *reported* against closed-form candidates:
//! even-dimension ratios and root-product formulas.  The measurement is the
//! ground truth; the candidates are compared, never assumed.

use crate::algebra::HighestWeight;
use crate::branching::{even_dimension, GTPattern};
use crate::error::Error;
use crate::exact::{CoefficientValue, Rational};
use crate::rwc::{eta_squared_product, BranchContext, Direction, RWCKey};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

/// A fully assembled pattern-to-pattern Wigner coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullWC {
    pub direction: Direction,
    /// Pattern of the source module Λ.
    pub source: GTPattern,
    /// Pattern of the target module Λ′; rows differ from the source by
    /// ±ε_{r_k} for k ≥ `vector_index` and match below.
    pub target: GTPattern,
    /// Index `p` of the coupled vector-module basis vector e_p / ē_p.
    pub vector_index: usize,
    /// The exact coefficient: product of the per-level factors.
    pub value: CoefficientValue,
    /// Reduced coefficients for levels `p..=m+n`, in that order, each with
    /// its basis-compatibility sign folded in (the head factor also carries
    /// the graded sign), so their product is exactly [`FullWC::value`].
    pub level_factors: Vec<CoefficientValue>,
}

impl Serialize for FullWC {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FullWC", 6)?;
        s.serialize_field("direction", &self.direction)?;
        s.serialize_field("vector_index", &self.vector_index)?;
        s.serialize_field("source", &self.source)?;
        s.serialize_field("target", &self.target)?;
        s.serialize_field("value", &self.value)?;
        s.serialize_field("level_factors", &self.level_factors)?;
        s.end()
    }
}

fn shift_delta(direction: Direction) -> i64 {
    match direction {
        Direction::Covariant => 1,
        Direction::Contravariant => -1,
    }
}

/// Compatibility sign adapting one printed reduced coefficient to the
/// orthonormal pattern basis (see the module docs).
///
/// `parent` and `child` are the unshifted source rows at the factor's level
/// and the level below, `r` the shift index at the level, `u` the shift
/// index below it (`None` at the chain head).  On a one-label level there is
/// nothing to adapt.
fn pattern_basis_sign(
    direction: Direction,
    parent: &HighestWeight,
    child: &HighestWeight,
    r: usize,
    u: Option<usize>,
) -> i8 {
    use crate::algebra::{roots, RootVariant};

    let shape = parent.shape();
    let (ml, nl) = (shape.m, shape.n);
    if ml + nl <= 1 {
        return 1;
    }
    let variant = match direction {
        Direction::Covariant => RootVariant::Barred,
        Direction::Contravariant => RootVariant::Unbarred,
    };
    let a = roots(parent, variant);
    let b = roots(child, variant);

    if nl == 0 {
        // Purely even level: the adaptation only compares the shifted level
        // root against the child roots (chain head) or counts the labels the
        // shift pair steps across (upper levels).
        let bit = match u {
            None => b
                .iter()
                .filter(|&&bj| {
                    let v = match direction {
                        Direction::Covariant => bj - a[r - 1] + 1,
                        Direction::Contravariant => a[r - 1] - bj - 1,
                    };
                    v < 0
                })
                .count(),
            Some(u) => {
                let (lo, hi) = if r < u { (r, u) } else { (u, r) };
                hi - lo - usize::from(hi > lo)
            }
        };
        return if bit % 2 == 0 { 1 } else { -1 };
    }

    // Graded level: branching digits θ_i = Λ_i − λ_i on the even block
    // (0 or 1 for every valid graded branching) and the parity ω of the odd
    // part of the child row drive the sign.
    let pl = parent.labels();
    let cl = child.labels();
    let theta: Vec<i64> = (0..ml).map(|i| pl[i] - cl[i]).collect();
    let unshifted = theta.iter().filter(|&&t| t == 0).count();
    let shifted = ml - unshifted;
    let cm = ml;
    let cn = nl - 1;
    let omega = cl[cm..cm + cn]
        .iter()
        .sum::<i64>()
        .rem_euclid(2) as usize;

    let bit = match u {
        None => {
            if r <= ml {
                // Even shift at the chain head: parity of the shifted digits
                // left of r, corrected (covariant only) by the signs of the
                // root gaps across the even block.
                let mut bit = omega + theta[..r - 1].iter().filter(|&&t| t == 1).count();
                if direction == Direction::Covariant {
                    for i in 0..ml {
                        if i + 1 == r {
                            continue;
                        }
                        if a[i] - a[r - 1] + i64::from(theta[i] == 0) < 0 {
                            bit += 1;
                        }
                    }
                }
                bit
            } else {
                // Odd shift at the chain head.
                omega
                    + match direction {
                        Direction::Covariant => unshifted,
                        Direction::Contravariant => shifted,
                    }
            }
        }
        Some(u) => {
            let u_odd = u > ml;
            let r_odd = r > ml;
            let (lo, hi) = if r < u { (r, u) } else { (u, r) };
            let mut bit = (lo + 1..hi)
                .filter(|&k| k <= ml && theta[k - 1] == 0)
                .count();
            if u_odd {
                bit += unshifted;
            }
            if r_odd && u_odd && r != u {
                bit += 1;
            }
            if direction == Direction::Contravariant && !u_odd {
                bit += (r - 1).min(ml);
            }
            bit
        }
    };
    if bit % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The graded chain-head sign `(−1)^{(p)·ω_{<p}}`: −1 exactly when the
/// coupled vector `e_p` / `ē_p` is odd and the odd part of the source weight
/// below level `p` is odd.
fn graded_head_sign(source: &GTPattern, p: usize, m: usize) -> i8 {
    if p <= m || p < 2 {
        return 1;
    }
    let row_sum = |level: usize| -> i64 {
        if level == 0 {
            0
        } else {
            source.row(level).labels().iter().sum()
        }
    };
    // Weight entries telescope: the odd weight below p is S(p−1) − S(m).
    let odd_below = row_sum(p - 1) - row_sum(m);
    if odd_below.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Assemble the full Wigner coefficient for a shift chain.
///
/// `shifts` lists the shifted row positions `r_p, …, r_{m+n}` (one per level
/// from `p` up); row `k` of the target is the source row with label `r_k`
/// moved by +1 (covariant) or −1 (contravariant).  The target rows must all
/// be dominant and pairwise branch-valid, else [`Error::InvalidShift`] — such
/// chains carry coefficient 0 and no pattern exists for them.  Chains whose
/// target is valid but whose reduced factors vanish yield an exact zero.
pub fn full_wc(
    direction: Direction,
    source: &GTPattern,
    p: usize,
    shifts: &[usize],
) -> Result<FullWC, Error> {
    let levels = source.levels();
    if p == 0 || p > levels {
        return Err(Error::invalid_shift(format!(
            "vector index {p} outside 1..={levels}"
        )));
    }
    if shifts.len() != levels - p + 1 {
        return Err(Error::invalid_shift(format!(
            "expected {} shift indices for levels {p}..={levels}, got {}",
            levels - p + 1,
            shifts.len()
        )));
    }
    let delta = shift_delta(direction);

    // Build the target rows (top-first like GTPattern's storage).
    let mut target_rows: Vec<HighestWeight> = Vec::with_capacity(levels);
    for k in (1..=levels).rev() {
        let row = source.row(k);
        if k < p {
            target_rows.push(row.clone());
            continue;
        }
        let r_k = shifts[k - p];
        if r_k == 0 || r_k > k {
            return Err(Error::invalid_shift(format!(
                "shift index {r_k} outside 1..={k} at level {k}"
            )));
        }
        let shifted = row.shifted(r_k, delta);
        if !shifted.is_dominant() {
            return Err(Error::invalid_shift(format!(
                "shifted row {shifted} at level {k} is not dominant"
            )));
        }
        target_rows.push(shifted);
    }
    let target = GTPattern::new(target_rows)
        .map_err(|e| Error::invalid_shift(format!("shifted rows are not a pattern: {e}")))?;

    // One reduced coefficient per level, all in unshifted source contexts,
    // each adapted to the orthonormal pattern basis; the chain head also
    // carries the graded sign (see the module docs).
    let m = source.row(levels).shape().m;
    let mut level_factors = Vec::with_capacity(levels - p + 1);
    for k in p..=levels {
        let factor = if k == 1 {
            // Bottom of the chain: gl(1) has no subalgebra level and the
            // single coefficient is 1.
            CoefficientValue::one()
        } else {
            let ctx = BranchContext::new(source.row(k).clone(), source.row(k - 1).clone())?;
            let u = if k == p { None } else { Some(shifts[k - 1 - p]) };
            let r = shifts[k - p];
            let printed = ctx.rwc(&RWCKey { direction, r, u })?;
            match pattern_basis_sign(direction, source.row(k), source.row(k - 1), r, u) {
                1 => printed,
                _ => printed.negate(),
            }
        };
        let factor = if k == p && graded_head_sign(source, p, m) < 0 {
            factor.negate()
        } else {
            factor
        };
        level_factors.push(factor);
    }
    let value = level_factors.iter().cloned().product();

    Ok(FullWC {
        direction,
        source: source.clone(),
        target,
        vector_index: p,
        value,
        level_factors,
    })
}

/// Every shift chain from `(source, p)` whose target pattern is valid.
///
/// Chains are returned in ascending lexicographic order of the shift list.
/// Together with [`full_wc`] this enumerates all couplings of a fixed
/// `e_p ⊗ (source)` across target modules and patterns.
pub fn shift_chains(direction: Direction, source: &GTPattern, p: usize) -> Vec<Vec<usize>> {
    let levels = source.levels();
    if p == 0 || p > levels {
        return Vec::new();
    }
    let delta = shift_delta(direction);
    let mut chains = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    // Depth-first over levels k = p..=levels; `below` is the already shifted
    // row of level k−1 (or the untouched row below the chain).
    fn descend(
        source: &GTPattern,
        delta: i64,
        p: usize,
        k: usize,
        below: Option<&HighestWeight>,
        current: &mut Vec<usize>,
        chains: &mut Vec<Vec<usize>>,
    ) {
        let levels = source.levels();
        if k > levels {
            chains.push(current.clone());
            return;
        }
        for r_k in 1..=k {
            let shifted = source.row(k).shifted(r_k, delta);
            if !shifted.is_dominant() {
                continue;
            }
            let branch_ok = match below {
                Some(b) => crate::branching::is_valid_branch(&shifted, b),
                None => {
                    if k == 1 {
                        true
                    } else {
                        crate::branching::is_valid_branch(&shifted, source.row(k - 1))
                    }
                }
            };
            if !branch_ok {
                continue;
            }
            current.push(r_k);
            descend(source, delta, p, k + 1, Some(&shifted), current, chains);
            current.pop();
        }
    }
    descend(source, delta, p, p, None, &mut current, &mut chains);
    chains
}

/// The form-conversion phase `(−1)^{(β)}`: matrix elements with respect to
/// the second sesquilinear form equal the canonical (form-1) ones times this
/// sign of the pattern's parity.
pub fn form_convert_phase(pattern: &GTPattern) -> i8 {
    if pattern.parity() == 0 {
        1
    } else {
        -1
    }
}

/// Closed-form candidates for the squared symmetry constant η² of `(Λ, r)`.
///
/// Keys (present only where defined):
/// * `dim_ratio_raise` — D(Λ+ε_r)/D(Λ), even-dimension ratio toward the
///   raised weight;
/// * `dim_ratio_lower` — D(Λ−ε_r)/D(Λ), the other shift convention;
/// * `product_at_base` — [`eta_squared_product`] at Λ with u = r;
/// * `product_at_raised` — the same product at Λ+ε_r;
/// * `delta_ratio` — δ̄_r at (Λ+ε_r ⊃ truncation) over δ_r at
///   (Λ ⊃ truncation), both against the child obtained by dropping the last
///   label (defined for r < m+n only).
pub fn eta_candidates(lambda: &HighestWeight, r: usize) -> BTreeMap<String, Rational> {
    let mut out = BTreeMap::new();
    let shape = lambda.shape();
    let levels = shape.levels();
    if r == 0 || r > levels {
        return out;
    }
    let d_base = even_dimension(lambda);

    let raised = lambda.shifted(r, 1);
    if raised.is_dominant() && !d_base.is_zero() {
        out.insert(
            "dim_ratio_raise".to_string(),
            even_dimension(&raised) / d_base.clone(),
        );
        if let Ok(p) = eta_squared_product(&raised, r) {
            out.insert("product_at_raised".to_string(), p);
        }
    }
    let lowered = lambda.shifted(r, -1);
    if lowered.is_dominant() && !d_base.is_zero() {
        out.insert(
            "dim_ratio_lower".to_string(),
            even_dimension(&lowered) / d_base.clone(),
        );
    }
    if let Ok(p) = eta_squared_product(lambda, r) {
        out.insert("product_at_base".to_string(), p);
    }

    if r < levels && raised.is_dominant() {
        // Child = the weight with the top-level label dropped.
        let truncate = |w: &HighestWeight| {
            let labels = &w.labels()[..levels - 1];
            let (m, n) = (w.shape().m, w.shape().n);
            if n > 0 {
                HighestWeight::from_parts(m, n - 1, labels)
            } else {
                HighestWeight::from_parts(m - 1, 0, labels)
            }
        };
        let ratio = (|| -> Option<Rational> {
            let upper = BranchContext::new(raised.clone(), truncate(&raised).ok()?).ok()?;
            let lower = BranchContext::new(lambda.clone(), truncate(lambda).ok()?).ok()?;
            let num = upper.delta_bar(r).ok()?;
            let den = lower.delta_unbar(r).ok()?;
            if den.is_zero() {
                None
            } else {
                Some(num / den)
            }
        })();
        if let Some(q) = ratio {
            out.insert("delta_ratio".to_string(), q);
        }
    }
    out
}

/// Comparison record for one `(Λ, r)`: the measured η² against every
/// closed-form candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaReport {
    pub lambda: HighestWeight,
    pub r: usize,
    pub eta_sq_measured: Rational,
    pub candidates: BTreeMap<String, Rational>,
    pub matches: Vec<String>,
}

impl EtaReport {
    /// Build a report from a measured η² and the closed-form candidates.
    pub fn new(lambda: HighestWeight, r: usize, eta_sq_measured: Rational) -> Self {
        let candidates = eta_candidates(&lambda, r);
        let matches = candidates
            .iter()
            .filter(|(_, v)| **v == eta_sq_measured)
            .map(|(k, _)| k.clone())
            .collect();
        EtaReport {
            lambda,
            r,
            eta_sq_measured,
            candidates,
            matches,
        }
    }
}

impl Serialize for EtaReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("EtaReport", 5)?;
        s.serialize_field("Lambda", &self.lambda)?;
        s.serialize_field("r", &self.r)?;
        s.serialize_field("eta_sq_measured", &self.eta_sq_measured)?;
        struct AsMap<'a>(&'a BTreeMap<String, Rational>);
        impl Serialize for AsMap<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut m = serializer.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0 {
                    m.serialize_entry(k, v)?;
                }
                m.end()
            }
        }
        s.serialize_field("candidates", &AsMap(&self.candidates))?;
        s.serialize_field("matches", &self.matches)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branching::enumerate_patterns;
    use crate::exact::rat;

    fn hw(m: usize, n: usize, labels: &[i64]) -> HighestWeight {
        HighestWeight::from_parts(m, n, labels).unwrap()
    }

    fn pattern(m: usize, n: usize, rows: &[Vec<i64>]) -> GTPattern {
        GTPattern::from_label_rows(crate::algebra::Shape::new(m, n).unwrap(), rows).unwrap()
    }

    #[test]
    fn single_level_chain_is_u_absent_rwc() {
        // p = m+n: one factor, the u-absent coefficient (+1, c̄_r).
        let source = pattern(1, 1, &[vec![1, 0], vec![0]]);
        let wc = full_wc(Direction::Covariant, &source, 2, &[2]).unwrap();
        assert_eq!(wc.value, CoefficientValue::sqrt(rat(1, 1)));
        assert_eq!(wc.level_factors.len(), 1);
        assert_eq!(wc.target.top(), &hw(1, 1, &[1, 1]));
    }

    #[test]
    fn vector_coupling_square_one_half() {
        // ⟨(2|0),(1)| e_1 ⊗ |(1|0),(0)⟩: level-1 u-absent factor is 1, the
        // level-2 factor is the diagonal ρ̄_{1,1} = 1/2 with phase +1.
        let source = pattern(1, 1, &[vec![1, 0], vec![0]]);
        let wc = full_wc(Direction::Covariant, &source, 1, &[1, 1]).unwrap();
        assert_eq!(wc.value.square(), rat(1, 2));
        assert_eq!(wc.target.top(), &hw(1, 1, &[2, 0]));
        assert_eq!(wc.level_factors[0], CoefficientValue::one());

        // The companion coupling into (1|1) from the same source.
        let wc = full_wc(Direction::Covariant, &source, 1, &[1, 2]).unwrap();
        assert_eq!(wc.value.square(), rat(1, 2));
        assert_eq!(wc.target.top(), &hw(1, 1, &[1, 1]));
    }

    #[test]
    fn invalid_shift_is_an_error() {
        let source = pattern(1, 1, &[vec![1, 0], vec![0]]);
        // Shift index out of range at level 1.
        let err = full_wc(Direction::Covariant, &source, 1, &[3, 1]).unwrap_err();
        assert!(matches!(err, Error::InvalidShift { .. }));
        // Wrong number of shift indices for the chain.
        let err = full_wc(Direction::Contravariant, &source, 2, &[2, 9]).unwrap_err();
        assert!(matches!(err, Error::InvalidShift { .. }));
        // Genuinely broken interlacing: gl(2) source (1,0)/(1); lowering the
        // top row at position 1 gives (0,0), which does not contain (1).
        let source = pattern(2, 0, &[vec![1, 0], vec![1]]);
        let err = full_wc(Direction::Contravariant, &source, 2, &[1]).unwrap_err();
        assert!(matches!(err, Error::InvalidShift { .. }));
    }

    #[test]
    fn orthonormality_row_for_vector_source() {
        // Completeness: summing squared couplings of e_p ⊗ (pattern) over
        // all chains gives exactly 1, for every p and source pattern.
        let top = hw(1, 1, &[1, 0]);
        for source in enumerate_patterns(&top) {
            for p in 1..=2 {
                let mut total = Rational::zero();
                for chain in shift_chains(Direction::Covariant, &source, p) {
                    let wc = full_wc(Direction::Covariant, &source, p, &chain).unwrap();
                    total += wc.value.square();
                }
                assert_eq!(total, Rational::one(), "p={p}, source={source}");
            }
        }
    }

    #[test]
    fn chain_enumeration_is_sorted_and_valid() {
        let source = pattern(1, 1, &[vec![1, 0], vec![0]]);
        let chains = shift_chains(Direction::Covariant, &source, 1);
        assert_eq!(chains, vec![vec![1, 1], vec![1, 2]]);
        // Contravariant from the same source: lowering the odd label gives
        // (1,−1) ⊅ (−1), so only one chain survives.
        let chains = shift_chains(Direction::Contravariant, &source, 1);
        assert_eq!(chains, vec![vec![1, 1]]);
    }

    #[test]
    fn form_phase_follows_pattern_parity() {
        let highest = pattern(1, 1, &[vec![1, 0], vec![1]]);
        assert_eq!(form_convert_phase(&highest), 1);
        let lowered = pattern(1, 1, &[vec![1, 0], vec![0]]);
        assert_eq!(form_convert_phase(&lowered), -1);
    }

    #[test]
    fn eta_candidates_classical_dimension_ratio() {
        // gl(2), Λ=(1,0), r=1: D(Λ+ε_1)/D(Λ) = 3/2.
        let c = eta_candidates(&hw(2, 0, &[1, 0]), 1);
        assert_eq!(c["dim_ratio_raise"], rat(3, 2));
        // Λ−ε_1 = (0,0): D = 1, ratio 1/2.
        assert_eq!(c["dim_ratio_lower"], rat(1, 2));
        assert_eq!(c["product_at_base"], rat(1, 2));
    }

    #[test]
    fn eta_report_serialization_schema() {
        let report = EtaReport::new(hw(2, 0, &[1, 0]), 1, rat(3, 2));
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.starts_with("{\"Lambda\":{\"m\":2,\"n\":0,\"labels\":[1,0]},\"r\":1,"));
        assert!(json.contains("\"eta_sq_measured\":\"3/2\""));
        assert!(json.contains("\"matches\":[\"dim_ratio_raise\"]"));
    }
}
