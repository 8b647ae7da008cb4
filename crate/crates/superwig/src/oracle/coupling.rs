//! Direct extraction of fundamental Wigner coefficients from explicit
//! tensor products, and the measured symmetry constant relating the two
//! coupling directions.
//!
//! A fundamental coupling is V⊗W → targets (covariant) or V*⊗W → targets
//! (contravariant) for a standalone irreducible W.  Every coefficient is an
//! overlap of orthogonal Gelfand–Tsetlin states divided by the exact norms,
//! so the oracle value is a signed square root of a rational — directly
//! comparable with the closed-form chain products, but computed by linear
//! algebra alone.
//!
//! The symmetry constant is measured, not assumed: the coefficients of
//! V⊗V(Λ) → V(Λ+ε_r) are divided entry-by-entry by the correspondingly
//! indexed coefficients of V*⊗V(Λ+ε_r) → V(Λ), and the measurement
//! succeeds only if the squared ratio is a single exact rational across
//! every index triple (with matching zero sets, and a constant sign within
//! each vector-factor index).

use crate::algebra::HighestWeight;
use crate::branching::GTPattern;
use crate::error::Error;
use crate::exact::{CoefficientValue, Rational};
use crate::rwc::Direction;
use std::collections::BTreeMap;

use super::gt::{gt_basis, GTVector};
use super::RepModule;

/// One extracted coefficient: the expansion of e_i⊗(source state) in the
/// Gelfand–Tsetlin basis of a target constituent.
#[derive(Clone, Debug)]
pub struct DirectWC {
    pub direction: Direction,
    /// 1-based index into the (dual) vector factor.
    pub vector_index: usize,
    /// Pattern of the source-module state.
    pub source: GTPattern,
    /// Pattern of the target state, in the target's own module.
    pub target: GTPattern,
    pub value: CoefficientValue,
}

/// All nonzero fundamental coupling coefficients out of `source` (a
/// standalone irreducible module with positive-definite form).  The tensor
/// ambient must decompose with certification, and no two targets may share
/// a highest weight (the fundamental couplings are multiplicity-free).
pub fn direct_wc(direction: Direction, source: &RepModule) -> Result<Vec<DirectWC>, Error> {
    let vector = RepModule::vector_module(source.shape());
    let factor = match direction {
        Direction::Covariant => vector,
        Direction::Contravariant => vector.dual_module(),
    };
    let tensor = factor.graded_tensor(source);
    let source_basis = standalone_basis(source)?;
    let parts = tensor.decompose()?;
    for (i, a) in parts.iter().enumerate() {
        for b in parts.iter().skip(i + 1) {
            if a.weight == b.weight {
                return Err(Error::inconsistent(format!(
                    "coupling target {} appears with multiplicity",
                    a.weight
                )));
            }
        }
    }
    let mut out = Vec::new();
    for part in &parts {
        let target_basis = gt_basis(&tensor, &part.vector)?;
        for beta in &target_basis {
            if !beta.norm_sq.is_positive() {
                return Err(Error::inconsistent(
                    "target state with non-positive norm in a definite ambient".to_string(),
                ));
            }
            for (i, alpha) in couplings_onto(&tensor, &factor, &source_basis, beta) {
                out.push(DirectWC {
                    direction,
                    vector_index: i,
                    source: source_basis[alpha].pattern.clone(),
                    target: beta.pattern.clone(),
                    value: coefficient(&tensor, &factor, &source_basis[alpha], i, beta, false)?,
                });
            }
        }
    }
    Ok(out)
}

/// Index pairs (vector index, source-state index) with nonzero overlap
/// against the target state.
fn couplings_onto(
    tensor: &RepModule,
    factor: &RepModule,
    source_basis: &[GTVector],
    beta: &GTVector,
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=factor.dim() {
        for (a, alpha) in source_basis.iter().enumerate() {
            let overlap = tensor_overlap(tensor, factor.dim(), i, alpha, beta);
            if !overlap.is_zero() {
                out.push((i, a));
            }
        }
    }
    out
}

/// ⟨β, e_i⊗α⟩ under the tensor form; `i` is 1-based.
fn tensor_overlap(
    tensor: &RepModule,
    _factor_dim: usize,
    i: usize,
    alpha: &GTVector,
    beta: &GTVector,
) -> Rational {
    let ds = alpha.vector.len();
    let offset = (i - 1) * ds;
    let form = tensor.form();
    let mut sum = Rational::zero();
    for (a, x) in alpha.vector.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let idx = offset + a;
        sum = sum + &form[idx] * &(&beta.vector[idx] * x);
    }
    sum
}

/// The normalized coefficient ⟨β, e_i⊗α⟩ / √(‖β‖²·‖e_i⊗α‖²).  With
/// `absolute_norms` the magnitudes of the norm squares are used, for
/// indefinite ambients where a constituent's form is globally negated.
fn coefficient(
    tensor: &RepModule,
    factor: &RepModule,
    alpha: &GTVector,
    i: usize,
    beta: &GTVector,
    absolute_norms: bool,
) -> Result<CoefficientValue, Error> {
    let overlap = tensor_overlap(tensor, factor.dim(), i, alpha, beta);
    if overlap.is_zero() {
        return Ok(CoefficientValue::zero());
    }
    let mut normsq = &beta.norm_sq * &(&factor.form()[i - 1] * &alpha.norm_sq);
    if absolute_norms {
        normsq = normsq.abs();
    }
    if normsq.is_zero() {
        return Err(Error::inconsistent(
            "state of zero norm in a coupling".to_string(),
        ));
    }
    Ok(CoefficientValue::rational_over_sqrt(overlap, normsq))
}

/// The Gelfand–Tsetlin basis of a standalone irreducible module.
fn standalone_basis(module: &RepModule) -> Result<Vec<GTVector>, Error> {
    let hw = module.highest_weight_vectors();
    if hw.len() != 1 {
        return Err(Error::inconsistent(format!(
            "expected one highest-weight vector, found {}",
            hw.len()
        )));
    }
    gt_basis(module, &hw[0].1)
}

/// The unique highest-weight vector of the given weight, in ambient
/// coordinates.
fn hw_vector_with_weight(module: &RepModule, labels: &[i64]) -> Result<Vec<Rational>, Error> {
    let matches: Vec<Vec<Rational>> = module
        .highest_weight_vectors()
        .into_iter()
        .filter(|(w, _)| w == labels)
        .map(|(_, v)| v)
        .collect();
    match matches.len() {
        0 => Err(Error::not_realizable(format!(
            "no highest-weight vector of weight {labels:?}"
        ))),
        1 => Ok(matches.into_iter().next().unwrap()),
        k => Err(Error::inconsistent(format!(
            "{k} highest-weight vectors of weight {labels:?}"
        ))),
    }
}

/// Measure the symmetry constant relating the raising coupling
/// V⊗V(Λ) → V(Λ+ε_r) to the lowering coupling V*⊗V(Λ+ε_r) → V(Λ).
///
/// `module` must be a standalone irreducible realization of V(Λ) with
/// positive-definite form.  The dual factor of the lowering side carries
/// the invariant form ⟨e*_p, e*_p⟩ = (−1)^{(p)}, so its ambient can be
/// indefinite; target norms there are normalized by absolute value.  The
/// measurement fails with [`Error::Inconsistent`] unless the two sides
/// have identical zero sets and a single signed ratio across **all**
/// coefficient slots (i, α, β) — that constant is returned as a sign
/// together with its square.
pub fn eta_measured(module: &RepModule, r: usize) -> Result<CoefficientValue, Error> {
    let shape = module.shape();
    let top_list = module.highest_weight_vectors();
    if top_list.len() != 1 {
        return Err(Error::inconsistent(
            "symmetry measurement needs a standalone irreducible module".to_string(),
        ));
    }
    let lambda = HighestWeight::from_parts(shape.m, shape.n, &top_list[0].0)?;
    if r < 1 || r > shape.levels() {
        return Err(Error::invalid_shift(format!(
            "index {r} outside 1..={}",
            shape.levels()
        )));
    }
    let up = lambda.shifted(r, 1);
    if !up.is_dominant() {
        return Err(Error::invalid_shift(format!(
            "{up} is not dominant"
        )));
    }

    // Raising side: V ⊗ V(Λ), target V(Λ+ε_r).
    let vector = RepModule::vector_module(shape);
    let t_a = vector.graded_tensor(module);
    let alpha_a = standalone_basis(module)?;
    let hw_up = hw_vector_with_weight(&t_a, up.labels())?;
    let beta_a = gt_basis(&t_a, &hw_up)?;
    let mut side_a: BTreeMap<(usize, GTPattern, GTPattern), CoefficientValue> = BTreeMap::new();
    for beta in &beta_a {
        for i in 1..=vector.dim() {
            for alpha in &alpha_a {
                let v = coefficient(&t_a, &vector, alpha, i, beta, false)?;
                side_a.insert((i, alpha.pattern.clone(), beta.pattern.clone()), v);
            }
        }
    }

    // Standalone V(Λ+ε_r) with positive form, extracted from the raising
    // ambient.
    let (up_module, _) = t_a.cyclic_submodule(&hw_up)?;

    // Lowering side: V* ⊗ V(Λ+ε_r), target V(Λ).
    let dual_form: Vec<Rational> = (1..=shape.levels())
        .map(|p| {
            if shape.parity(p) == 1 {
                -Rational::one()
            } else {
                Rational::one()
            }
        })
        .collect();
    let dual = vector.dual_module().with_form(dual_form);
    let t_b = dual.graded_tensor(&up_module);
    let alpha_b = standalone_basis(&up_module)?;
    let hw_down = hw_vector_with_weight(&t_b, lambda.labels())?;
    let beta_b = gt_basis(&t_b, &hw_down)?;
    // The invariant form restricted to the target constituent is a rational
    // multiple of the canonical positive form.  When that multiple is zero
    // the constituent sits in the form's radical — the indefinite tensor
    // does not split at this weight — and no normalized lowering
    // coefficient exists, so the ratio defining the constant has no
    // denominator anywhere.  That is a structural fact about (Λ, r), not a
    // numerical accident; report it as unrealizable rather than measuring.
    if beta_b.iter().all(|beta| beta.norm_sq.is_zero()) {
        return Err(Error::not_realizable(format!(
            "the lowering-side constituent of weight {lambda} is null in the \
             indefinite ambient; the symmetry ratio is undefined at r={r}"
        )));
    }
    // Keyed with source and target patterns swapped, so the keys align
    // with the raising side: (i, Λ-pattern, Λ+ε_r-pattern).
    let mut side_b: BTreeMap<(usize, GTPattern, GTPattern), CoefficientValue> = BTreeMap::new();
    for beta in &beta_b {
        if beta.norm_sq.is_zero() {
            return Err(Error::inconsistent(
                "zero-norm target state beside states of nonzero norm on the lowering side"
                    .to_string(),
            ));
        }
        for j in 1..=dual.dim() {
            for alpha in &alpha_b {
                let v = coefficient(&t_b, &dual, alpha, j, beta, true)?;
                side_b.insert((j, beta.pattern.clone(), alpha.pattern.clone()), v);
            }
        }
    }

    // Entry-by-entry comparison: one global (sign, squared-ratio) pair.
    let mut eta: Option<(i8, Rational)> = None;
    for (key, a) in &side_a {
        let b = side_b.get(key).cloned().unwrap_or_else(CoefficientValue::zero);
        match (a.is_zero(), b.is_zero()) {
            (true, true) => continue,
            (false, false) => {}
            _ => {
                return Err(Error::inconsistent(format!(
                    "zero sets differ between the two sides at {key:?}"
                )));
            }
        }
        let ratio_sq = a.square() / b.square();
        let ratio_sign = a.sign() * b.sign();
        match &eta {
            None => eta = Some((ratio_sign, ratio_sq)),
            Some((sign, sq)) => {
                if *sq != ratio_sq {
                    return Err(Error::inconsistent(format!(
                        "squared ratio varies: {sq} vs {ratio_sq}"
                    )));
                }
                if *sign != ratio_sign {
                    return Err(Error::inconsistent(format!(
                        "sign ratio varies across coefficient slots at {key:?}"
                    )));
                }
            }
        }
    }
    match eta {
        Some((sign, sq)) => Ok(CoefficientValue::with_sign(sign, sq)),
        None => Err(Error::not_realizable(
            "the two sides share no nonzero coefficient".to_string(),
        )),
    }
}

/// Squared version of [`eta_measured`]; convenience for report emission.
pub fn eta_squared_measured(module: &RepModule, r: usize) -> Result<Rational, Error> {
    Ok(eta_measured(module, r)?.square())
}
