//! Gelfand–Tsetlin bases built from scratch inside an explicit module.
//!
//! Starting from a highest-weight vector, the basis is grown level by
//! level: at level ℓ the cyclic span under the subalgebra spanned by E_pq
//! (p, q ≤ ℓ) is computed, and for every branching candidate of the current
//! row the unique subalgebra-highest-weight vector in the matching weight
//! sector is solved for exactly.  Candidates whose sector is empty are
//! spurious and simply absent from the module; a sector carrying more than
//! one solution is an inconsistency (the chain would not separate states).
//!
//! # Phase convention
//!
//! Each solved vector is normalized to a primitive integer vector and its
//! overall sign fixed as follows.  Write the weight drop from the parent
//! vector v to the solved vector w as a multiset of simple lowerings
//! F_p = E_{p+1,p} (letter p occurs `Σ_{q≤p}(wt(v)_q − wt(w)_q)` times);
//! among all distinct words in those letters, take the lexicographically
//! first whose image y = F_word·v (rightmost letter acting first) has
//! ⟨y, w⟩ ≠ 0, and require sign⟨y, w⟩·sign⟨w, w⟩ = +1.  The product is
//! insensitive to rescaling the ambient form, so the convention only
//! depends on the module's intrinsic form.  If every word pairs to zero or
//! ⟨w, w⟩ = 0 (possible only in indefinite ambients), the fallback is the
//! primitive-vector normalization itself: first nonzero coordinate
//! positive.  The top-level highest-weight vector always uses the
//! fallback convention.

use crate::algebra::HighestWeight;
use crate::branching::{branch, GTPattern};
use crate::error::Error;
use crate::exact::Rational;
use crate::linalg::{primitive_scaled, Matrix};

use super::RepModule;

/// One Gelfand–Tsetlin basis vector: the pattern labelling it, its ambient
/// coordinates, and its self-pairing under the module form.
#[derive(Clone, Debug)]
pub struct GTVector {
    pub pattern: GTPattern,
    pub vector: Vec<Rational>,
    pub norm_sq: Rational,
}

/// Construct the Gelfand–Tsetlin basis of the irreducible submodule
/// generated by the highest-weight vector `hw` of `module`, in ambient
/// coordinates.  Patterns come out in lexicographic row order (top row
/// first, then descending through the levels).
pub fn gt_basis(module: &RepModule, hw: &[Rational]) -> Result<Vec<GTVector>, Error> {
    let levels = module.shape().levels();
    let v0 = primitive_scaled(hw);
    if v0.iter().all(Rational::is_zero) {
        return Err(Error::inconsistent("zero highest-weight vector".to_string()));
    }
    let top_weight = homogeneous_weight(module, &v0)?;
    for p in 1..levels {
        let image = module.apply(p, p + 1, &v0);
        if image.iter().any(|x| !x.is_zero()) {
            return Err(Error::inconsistent(format!(
                "vector is not highest weight: E_{p}{} does not vanish",
                p + 1
            )));
        }
    }
    let mut rows = vec![top_weight.clone()];
    let mut out = Vec::new();
    descend(module, levels, &v0, &mut rows, &mut out)?;
    let expected = module.cyclic_span(&v0).dim();
    if out.len() != expected {
        return Err(Error::inconsistent(format!(
            "pattern search found {} states but the module has dimension {expected}",
            out.len()
        )));
    }
    Ok(out)
}

/// Weight of a weight-homogeneous vector, else an error.
fn homogeneous_weight(module: &RepModule, v: &[Rational]) -> Result<Vec<i64>, Error> {
    let mut found: Option<Vec<i64>> = None;
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        match &found {
            None => found = Some(module.weight(i).to_vec()),
            Some(w) => {
                if module.weight(i) != &w[..] {
                    return Err(Error::inconsistent(
                        "vector is not weight-homogeneous".to_string(),
                    ));
                }
            }
        }
    }
    found.ok_or_else(|| Error::inconsistent("zero vector has no weight".to_string()))
}

fn descend(
    module: &RepModule,
    level: usize,
    v: &[Rational],
    rows: &mut Vec<Vec<i64>>,
    out: &mut Vec<GTVector>,
) -> Result<(), Error> {
    if level == 1 {
        let pattern = GTPattern::from_label_rows(module.shape(), rows)
            .map_err(|e| Error::inconsistent(format!("solved state escapes the pattern set: {e}")))?;
        let norm_sq = module.pair(v, v);
        out.push(GTVector {
            pattern,
            vector: v.to_vec(),
            norm_sq,
        });
        return Ok(());
    }
    let span = module.cyclic_span_level(v, level);
    let v_weight = homogeneous_weight(module, v)?;
    let row_shape = level_shape(module, level);
    let parent = HighestWeight::from_parts(row_shape.0, row_shape.1, &v_weight[..level])
        .map_err(|e| Error::inconsistent(format!("non-dominant row at level {level}: {e}")))?;
    for child in branch(&parent) {
        let mu = child.labels();
        // Ambient weight of the sought state: the child row, the balance of
        // the level sum, and the untouched tail.
        let mut target = v_weight.clone();
        let level_sum: i64 = v_weight[..level].iter().sum();
        let mu_sum: i64 = mu.iter().sum();
        target[..level - 1].copy_from_slice(mu);
        target[level - 1] = level_sum - mu_sum;
        let sector: Vec<&Vec<Rational>> = span
            .basis()
            .iter()
            .filter(|row| {
                row.iter()
                    .position(|x| !x.is_zero())
                    .is_some_and(|i| module.weight(i) == target)
            })
            .collect();
        if sector.is_empty() {
            continue; // spurious branching candidate
        }
        let solutions = subalgebra_hw_solutions(module, level, &sector);
        match solutions.len() {
            0 => continue, // spurious branching candidate
            1 => {}
            k => {
                return Err(Error::inconsistent(format!(
                    "{k} independent states share one pattern prefix at level {level}"
                )));
            }
        }
        let mut w = vec![Rational::zero(); module.dim()];
        for (c, b) in solutions[0].iter().zip(&sector) {
            if !c.is_zero() {
                w = crate::linalg::axpy(&w, c, b);
            }
        }
        let mut w = primitive_scaled(&w);
        fix_phase(module, level, v, &v_weight, &target, &mut w);
        rows.push(mu.to_vec());
        descend(module, level - 1, &w, rows, out)?;
        rows.pop();
    }
    Ok(())
}

/// The (m', n') split of the subalgebra at `level`.
fn level_shape(module: &RepModule, level: usize) -> (usize, usize) {
    let m = module.shape().m;
    if level > m {
        (m, level - m)
    } else {
        (level, 0)
    }
}

/// Coefficient vectors (relative to `sector`) spanning the kernel of every
/// raising generator of the next level down.
fn subalgebra_hw_solutions(
    module: &RepModule,
    level: usize,
    sector: &[&Vec<Rational>],
) -> Vec<Vec<Rational>> {
    let k = sector.len();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    // Raisings of the subalgebra one level down: E_{p,p+1} with p+1 ≤ level−1.
    for p in 1..level - 1 {
        let images: Vec<Vec<Rational>> = sector.iter().map(|b| module.apply(p, p + 1, b)).collect();
        for coord in 0..module.dim() {
            let row: Vec<Rational> = images.iter().map(|im| im[coord].clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return (0..k)
            .map(|j| {
                let mut e = vec![Rational::zero(); k];
                e[j] = Rational::one();
                e
            })
            .collect();
    }
    Matrix::from_rows(rows).kernel_basis()
}

/// Apply the lowering-word phase convention described in the module docs.
fn fix_phase(
    module: &RepModule,
    level: usize,
    v: &[Rational],
    v_weight: &[i64],
    w_weight: &[i64],
    w: &mut Vec<Rational>,
) {
    let mut counts = Vec::with_capacity(level - 1);
    let mut partial = 0i64;
    for p in 0..level - 1 {
        partial += v_weight[p] - w_weight[p];
        if partial < 0 {
            return; // not reachable by lowerings — keep the fallback sign
        }
        counts.push(partial as usize);
    }
    let mut word: Vec<usize> = Vec::new();
    for (p, &c) in counts.iter().enumerate() {
        word.extend(std::iter::repeat(p + 1).take(c));
    }
    if word.is_empty() {
        // w is proportional to v; align the two directly.
        let overlap = module.pair(v, w);
        let norm = module.pair(w, w);
        flip_if_negative(&overlap, &norm, w);
        return;
    }
    word.sort_unstable();
    loop {
        let mut y = v.to_vec();
        for &p in word.iter().rev() {
            y = module.apply(p + 1, p, &y);
            if y.iter().all(Rational::is_zero) {
                break;
            }
        }
        let overlap = module.pair(&y, w);
        if !overlap.is_zero() {
            let norm = module.pair(w, w);
            flip_if_negative(&overlap, &norm, w);
            return;
        }
        if !next_permutation(&mut word) {
            return; // every word pairs to zero — keep the fallback sign
        }
    }
}

fn flip_if_negative(overlap: &Rational, norm: &Rational, w: &mut [Rational]) {
    if norm.is_zero() {
        return;
    }
    let positive = overlap.is_positive() == norm.is_positive();
    if !positive {
        for x in w.iter_mut() {
            *x = -x.clone();
        }
    }
}

/// Advance `w` to its next lexicographic permutation; `false` at the last.
fn next_permutation(w: &mut [usize]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Shape;
    use crate::branching::enumerate_patterns;
    use crate::exact::rat;
    use crate::linalg::form_dot;

    fn vector_hw(shape: Shape) -> (RepModule, Vec<Rational>) {
        let v = RepModule::vector_module(shape);
        let mut hw = vec![Rational::zero(); v.dim()];
        hw[0] = Rational::one();
        (v, hw)
    }

    #[test]
    fn vector_module_basis_is_the_standard_basis() {
        let (v, hw) = vector_hw(Shape::new(1, 1).unwrap());
        let basis = gt_basis(&v, &hw).unwrap();
        assert_eq!(basis.len(), 2);
        // Children come out ascending: row (0) ↔ e_2 before row (1) ↔ e_1.
        assert_eq!(basis[0].vector, vec![Rational::zero(), Rational::one()]);
        assert_eq!(basis[1].vector, vec![Rational::one(), Rational::zero()]);
        assert_eq!(basis[0].pattern.row(1).labels(), [0]);
        assert_eq!(basis[1].pattern.row(1).labels(), [1]);
        assert_eq!(basis[0].norm_sq, rat(1, 1));
    }

    #[test]
    fn solved_patterns_refine_the_combinatorial_enumeration() {
        // The default branching rule over-counts on atypical top rows (the
        // gl(2|1) vector module admits 8 candidate patterns but only 3
        // states), so the solver must find a subset of the enumeration of
        // exactly the module dimension — and the exact set classically.
        for (m, n) in [(2, 1), (1, 2), (3, 0)] {
            let (v, hw) = vector_hw(Shape::new(m, n).unwrap());
            let basis = gt_basis(&v, &hw).unwrap();
            assert_eq!(basis.len(), v.dim());
            let top = basis[0].pattern.top().clone();
            let combinatorial = enumerate_patterns(&top);
            for state in &basis {
                assert!(
                    combinatorial.contains(&state.pattern),
                    "solved pattern outside the enumeration"
                );
            }
            if n == 0 {
                assert_eq!(basis.len(), combinatorial.len());
            }
        }
    }

    #[test]
    fn constituent_of_tensor_square_gets_a_full_basis() {
        let shape = Shape::new(1, 1).unwrap();
        let v = RepModule::vector_module(shape);
        let t = v.graded_tensor(&v);
        let hw = t.highest_weight_vectors();
        // Weight (2,0): the symmetric-type constituent of dimension 2.
        let (w, vec20) = &hw[1];
        assert_eq!(w, &vec![2, 0]);
        let basis = gt_basis(&t, vec20).unwrap();
        assert_eq!(basis.len(), 2);
        // Top state: e_1⊗e_1, norm 1; lowered state: e_1⊗e_2 + e_2⊗e_1.
        assert_eq!(
            basis[1].vector,
            vec![Rational::one(), Rational::zero(), Rational::zero(), Rational::zero()]
        );
        let lowered = &basis[0];
        assert_eq!(
            lowered.vector,
            vec![Rational::zero(), Rational::one(), Rational::one(), Rational::zero()]
        );
        assert_eq!(lowered.norm_sq, rat(2, 1));
    }

    #[test]
    fn phases_follow_the_lowering_word() {
        // In gl(2) V⊗V, the (1,1) constituent is spanned by e_1⊗e_2−e_2⊗e_1;
        // its lowered state must pair positively with F_1·(hw vector).
        let shape = Shape::new(2, 0).unwrap();
        let v = RepModule::vector_module(shape);
        let t = v.graded_tensor(&v);
        for (weight, hwv) in t.highest_weight_vectors() {
            let basis = gt_basis(&t, &hwv).unwrap();
            for state in &basis {
                if state.vector == hwv {
                    continue;
                }
                // Recompute the convention directly for one-step drops.
                let drop: i64 = weight[0] - state.pattern.row(1).label(1);
                if drop == 1 && state.pattern.row(2).labels() == weight.as_slice() {
                    let y = t.apply(2, 1, &hwv);
                    let overlap = form_dot(t.form(), &y, &state.vector);
                    assert!(overlap.is_positive(), "phase violates the convention");
                }
            }
        }
    }

    #[test]
    fn rejects_non_highest_weight_input() {
        let (v, _) = vector_hw(Shape::new(1, 1).unwrap());
        let not_hw = vec![Rational::zero(), Rational::one()];
        assert!(gt_basis(&v, &not_hw).is_err());
    }
}
