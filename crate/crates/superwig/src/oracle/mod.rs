//! Brute-force matrix oracle: explicit realizations of gl(m|n) modules and
//! everything needed to extract coupling coefficients from them by linear
//! algebra alone.
//!
//! The oracle never touches the closed forms of [`crate::rwc`] or
//! [`crate::wigner`].  It builds the vector module and its dual as explicit
//! matrices, forms graded tensor powers, locates highest-weight vectors by
//! exact kernel computation, carves out irreducible constituents as
//! standalone modules, constructs Gelfand–Tsetlin bases from scratch
//! ([`gt`]), and reads coefficients off projectors ([`projectors`]) and
//! orthogonal expansions ([`coupling`]).  Agreement with the closed forms is
//! therefore a genuine cross-check.
//!
//! Everything is exact rational arithmetic; modules are immutable once
//! built.

pub mod coupling;
pub mod gt;
pub mod projectors;

use crate::algebra::{HighestWeight, Shape};
use crate::error::Error;
use crate::exact::Rational;
use crate::linalg::{form_dot, primitive_scaled, Matrix, RowSpan};
use std::collections::BTreeMap;

pub use coupling::{direct_wc, eta_measured, eta_squared_measured, DirectWC};
pub use gt::{gt_basis, GTVector};
pub use projectors::{projector_c_values, projector_rho_values};

/// An explicit matrix realization of a gl(m|n)-module, together with the
/// diagonal invariant form used for all overlaps.
#[derive(Clone, Debug)]
pub struct RepModule {
    shape: Shape,
    dim: usize,
    /// Parity of each basis vector (0 even, 1 odd).
    parities: Vec<u8>,
    /// Weight of each basis vector, as m+n integers.
    weights: Vec<Vec<i64>>,
    /// Generator matrices, keyed by (p, q) for E_pq, 1-based.
    gens: BTreeMap<(usize, usize), Matrix>,
    /// Diagonal entries of the invariant sesquilinear form.
    form: Vec<Rational>,
}

impl RepModule {
    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.parities[i]
    }

    pub fn parities(&self) -> &[u8] {
        &self.parities
    }

    pub fn weight(&self, i: usize) -> &[i64] {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    /// The matrix of E_pq (1-based indices).
    pub fn gen(&self, p: usize, q: usize) -> &Matrix {
        &self.gens[&(p, q)]
    }

    pub fn form(&self) -> &[Rational] {
        &self.form
    }

    /// Apply E_pq to a coordinate vector.
    pub fn apply(&self, p: usize, q: usize, v: &[Rational]) -> Vec<Rational> {
        self.gen(p, q).mul_vec(v)
    }

    /// Form pairing of two coordinate vectors.
    pub fn pair(&self, a: &[Rational], b: &[Rational]) -> Rational {
        form_dot(&self.form, a, b)
    }

    /// The defining vector module V: E_pq e_s = δ_qs e_p, parities (e_p) = (p).
    pub fn vector_module(shape: Shape) -> RepModule {
        let levels = shape.levels();
        let mut gens = BTreeMap::new();
        for p in 1..=levels {
            for q in 1..=levels {
                let mat = Matrix::from_fn(levels, levels, |t, s| {
                    if t == p - 1 && s == q - 1 {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                });
                gens.insert((p, q), mat);
            }
        }
        let weights = (0..levels)
            .map(|s| {
                let mut w = vec![0i64; levels];
                w[s] = 1;
                w
            })
            .collect();
        RepModule {
            shape,
            dim: levels,
            parities: (1..=levels).map(|p| shape.parity(p)).collect(),
            weights,
            gens,
            form: vec![Rational::one(); levels],
        }
    }

    /// The contragredient module: ⟨π*(x)f, v⟩ = −(−1)^{(x)(f)} ⟨f, π(x)v⟩.
    /// Entrywise, [π*(E_pq)]_{t,s} = −(−1)^{((p)+(q))·(s)} [π(E_pq)]_{s,t}.
    /// Weights are negated; parities are unchanged; the form stays the
    /// coordinate form (the convention for pure dual tensor powers).
    pub fn dual_module(&self) -> RepModule {
        let levels = self.shape.levels();
        let mut gens = BTreeMap::new();
        for p in 1..=levels {
            for q in 1..=levels {
                let src = self.gen(p, q);
                let gen_parity = (self.shape.parity(p) + self.shape.parity(q)) % 2;
                let mat = Matrix::from_fn(self.dim, self.dim, |t, s| {
                    let mut v = src.get(s, t).clone();
                    if gen_parity == 1 && self.parities[s] == 1 {
                        // (−1)^{(x)(f_s)} = −1 here; combined with the
                        // leading minus the entry keeps its sign.
                    } else {
                        v = -v;
                    }
                    v
                });
                gens.insert((p, q), mat);
            }
        }
        RepModule {
            shape: self.shape,
            dim: self.dim,
            parities: self.parities.clone(),
            weights: self
                .weights
                .iter()
                .map(|w| w.iter().map(|x| -x).collect())
                .collect(),
            gens,
            form: self.form.clone(),
        }
    }

    /// Graded tensor product: x ↦ x⊗1 + 1⊗x with
    /// (1⊗x)(a⊗b) = (−1)^{(x)(a)} a⊗(xb).  Composite index a·dim(B)+b.
    pub fn graded_tensor(&self, other: &RepModule) -> RepModule {
        assert_eq!(self.shape, other.shape, "tensor factors must share a shape");
        let levels = self.shape.levels();
        let (da, db) = (self.dim, other.dim);
        let dim = da * db;
        let mut gens = BTreeMap::new();
        for p in 1..=levels {
            for q in 1..=levels {
                let ga = self.gen(p, q);
                let gb = other.gen(p, q);
                let gen_parity = (self.shape.parity(p) + self.shape.parity(q)) % 2;
                let mut mat = Matrix::zeros(dim, dim);
                for a in 0..da {
                    for ap in 0..da {
                        let left = ga.get(ap, a);
                        if !left.is_zero() {
                            for b in 0..db {
                                mat.set(ap * db + b, a * db + b, left.clone());
                            }
                        }
                    }
                    let sign_flip = gen_parity == 1 && self.parities[a] == 1;
                    for b in 0..db {
                        for bp in 0..db {
                            let right = gb.get(bp, b);
                            if !right.is_zero() {
                                let add = if sign_flip {
                                    -right.clone()
                                } else {
                                    right.clone()
                                };
                                let i = a * db + bp;
                                let j = a * db + b;
                                let cur = mat.get(i, j).clone();
                                mat.set(i, j, cur + add);
                            }
                        }
                    }
                }
                gens.insert((p, q), mat);
            }
        }
        let mut parities = Vec::with_capacity(dim);
        let mut weights = Vec::with_capacity(dim);
        let mut form = Vec::with_capacity(dim);
        for a in 0..da {
            for b in 0..db {
                parities.push((self.parities[a] + other.parities[b]) % 2);
                let w = self.weights[a]
                    .iter()
                    .zip(&other.weights[b])
                    .map(|(x, y)| x + y)
                    .collect();
                weights.push(w);
                form.push(self.form[a].clone() * other.form[b].clone());
            }
        }
        RepModule {
            shape: self.shape,
            dim,
            parities,
            weights,
            gens,
            form,
        }
    }

    /// Replace the invariant form (used when a factor carries a non-trivial
    /// form, e.g. the dual factor of a mixed ambient).
    pub fn with_form(mut self, form: Vec<Rational>) -> RepModule {
        assert_eq!(form.len(), self.dim);
        self.form = form;
        self
    }

    /// Exact supercommutation check on all generator pairs:
    /// [E_pq, E_rs] = δ_qr E_ps − (−1)^{((p)+(q))((r)+(s))} δ_sp E_rq.
    /// Quadratic in the number of generators; intended for small modules.
    pub fn check_supercommutation(&self) -> Result<(), Error> {
        let levels = self.shape.levels();
        let par = |p: usize| self.shape.parity(p);
        for p in 1..=levels {
            for q in 1..=levels {
                for r in 1..=levels {
                    for s in 1..=levels {
                        let a = self.gen(p, q);
                        let b = self.gen(r, s);
                        let sign = ((par(p) + par(q)) * (par(r) + par(s))) % 2;
                        let ab = a.mul(b);
                        let ba = b.mul(a);
                        let lhs = if sign == 1 { ab.add(&ba) } else { ab.sub(&ba) };
                        let mut rhs = Matrix::zeros(self.dim, self.dim);
                        if q == r {
                            rhs = rhs.add(self.gen(p, s));
                        }
                        if s == p {
                            let e_rq = self.gen(r, q);
                            rhs = if sign == 1 {
                                rhs.add(e_rq)
                            } else {
                                rhs.sub(e_rq)
                            };
                        }
                        if !lhs.sub(&rhs).is_zero() {
                            return Err(Error::inconsistent(format!(
                                "supercommutator [E_{p}{q}, E_{r}{s}] fails"
                            )));
                        }
                    }
                }
            }
        }
        // Weight consistency: E_pp diagonal with the stored weights.
        for p in 1..=levels {
            let g = self.gen(p, p);
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let expected = if i == j {
                        Rational::from_int(self.weights[i][p - 1])
                    } else {
                        Rational::zero()
                    };
                    if *g.get(i, j) != expected {
                        return Err(Error::inconsistent(format!(
                            "E_{p}{p} is not diagonal with the basis weights"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Basis indices grouped by weight.
    pub fn weight_sectors(&self) -> BTreeMap<Vec<i64>, Vec<usize>> {
        let mut sectors: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for (i, w) in self.weights.iter().enumerate() {
            sectors.entry(w.clone()).or_default().push(i);
        }
        sectors
    }

    /// Exact highest-weight vectors: the kernel of all simple raising
    /// generators E_{p,p+1}, computed sector by sector.  Vectors are
    /// primitive integer vectors with positive leading coordinate, returned
    /// sorted by weight.
    pub fn highest_weight_vectors(&self) -> Vec<(Vec<i64>, Vec<Rational>)> {
        self.subalgebra_highest_weight_vectors(self.shape.levels())
    }

    /// Highest-weight vectors for the depth-`level` member of the
    /// subalgebra chain: the joint kernel of E_{p,p+1} for p+1 ≤ `level`.
    /// With `level` = levels() this is [`Self::highest_weight_vectors`];
    /// with one less it yields the states opening each branching row.
    pub fn subalgebra_highest_weight_vectors(
        &self,
        level: usize,
    ) -> Vec<(Vec<i64>, Vec<Rational>)> {
        let levels = level;
        let mut out = Vec::new();
        for (weight, indices) in self.weight_sectors() {
            let k = indices.len();
            // Stack the images of the sector basis under every raising.
            let mut rows: Vec<Vec<Rational>> = Vec::new();
            for p in 1..levels {
                let g = self.gen(p, p + 1);
                let images: Vec<Vec<Rational>> = indices
                    .iter()
                    .map(|&j| {
                        let mut e = vec![Rational::zero(); self.dim];
                        e[j] = Rational::one();
                        g.mul_vec(&e)
                    })
                    .collect();
                for coord in 0..self.dim {
                    let row: Vec<Rational> = images.iter().map(|im| im[coord].clone()).collect();
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
            let kernel = if rows.is_empty() {
                // No constraints: the whole sector is highest weight.
                (0..k)
                    .map(|j| {
                        let mut e = vec![Rational::zero(); k];
                        e[j] = Rational::one();
                        e
                    })
                    .collect()
            } else {
                Matrix::from_rows(rows).kernel_basis()
            };
            for coeffs in kernel {
                let mut v = vec![Rational::zero(); self.dim];
                for (c, &j) in coeffs.iter().zip(&indices) {
                    v[j] = c.clone();
                }
                out.push((weight.clone(), primitive_scaled(&v)));
            }
        }
        out
    }

    /// The invariant subspace generated by `v`, as a weight-graded row span.
    pub fn cyclic_span(&self, v: &[Rational]) -> RowSpan {
        self.cyclic_span_level(v, self.shape.levels())
    }

    /// Like [`Self::cyclic_span`], but only under the subalgebra of
    /// generators E_pq with p, q ≤ `level`.
    pub fn cyclic_span_level(&self, v: &[Rational], level: usize) -> RowSpan {
        let levels = level;
        let mut span = RowSpan::new(self.dim);
        let mut frontier = vec![v.to_vec()];
        span.insert(v);
        while let Some(x) = frontier.pop() {
            for p in 1..=levels {
                for q in 1..=levels {
                    if p == q {
                        continue;
                    }
                    let y = self.apply(p, q, &x);
                    if y.iter().any(|c| !c.is_zero()) && span.insert(&y) {
                        frontier.push(y);
                    }
                }
            }
        }
        span
    }

    /// Decompose into irreducible constituents with a certificate of
    /// complete reducibility: the cyclic spans of a basis of the
    /// highest-weight sectors must fill the module exactly, else
    /// [`Error::Inconsistent`] (e.g. gl(1|1) V⊗V*, which is reducible but
    /// indecomposable).
    pub fn decompose(&self) -> Result<Vec<Constituent>, Error> {
        let mut constituents = Vec::new();
        let mut total = 0usize;
        for (weight, vector) in self.highest_weight_vectors() {
            let dim = self.cyclic_span(&vector).dim();
            let top = HighestWeight::from_parts(self.shape.m, self.shape.n, &weight)
                .map_err(|e| Error::inconsistent(format!("bad highest weight: {e}")))?;
            constituents.push(Constituent {
                weight: top,
                vector,
                dimension: dim,
            });
            total += dim;
        }
        if total != self.dim {
            return Err(Error::inconsistent(format!(
                "not completely reducible: cyclic spans fill {total} of {} dimensions",
                self.dim
            )));
        }
        Ok(constituents)
    }

    /// Extract the cyclic submodule generated by `v` as a standalone module
    /// plus the embedding whose columns are the new basis in ambient
    /// coordinates.  The basis is form-orthogonalized within each weight
    /// sector; a vector of vanishing self-pairing aborts with
    /// [`Error::Inconsistent`] (cannot happen on definite-form ambients).
    pub fn cyclic_submodule(&self, v: &[Rational]) -> Result<(RepModule, Matrix), Error> {
        let span = self.cyclic_span(v);
        // Regroup the span basis by weight, then orthogonalize each sector.
        let mut sectors: BTreeMap<Vec<i64>, Vec<Vec<Rational>>> = BTreeMap::new();
        for row in span.basis() {
            let support: Vec<usize> = (0..self.dim).filter(|&i| !row[i].is_zero()).collect();
            let w = self.weights[support[0]].clone();
            if support.iter().any(|&i| self.weights[i] != w) {
                return Err(Error::inconsistent(
                    "cyclic span basis vector mixes weights".to_string(),
                ));
            }
            sectors.entry(w).or_default().push(row.clone());
        }
        let mut basis: Vec<Vec<Rational>> = Vec::new();
        let mut weights: Vec<Vec<i64>> = Vec::new();
        for (w, vectors) in sectors {
            let mut ortho: Vec<(Vec<Rational>, Rational)> = Vec::new();
            for x in vectors {
                let mut y = x;
                for (b, nb) in &ortho {
                    let c = self.pair(b, &y) / nb.clone();
                    y = crate::linalg::axpy(&y, &(-c), b);
                }
                let y = primitive_scaled(&y);
                let norm = self.pair(&y, &y);
                if norm.is_zero() {
                    return Err(Error::inconsistent(
                        "degenerate form on cyclic submodule".to_string(),
                    ));
                }
                ortho.push((y, norm));
            }
            for (y, _) in ortho {
                basis.push(y);
                weights.push(w.clone());
            }
        }
        let sub_dim = basis.len();
        let mut embedding = Matrix::zeros(self.dim, sub_dim);
        for (j, b) in basis.iter().enumerate() {
            for i in 0..self.dim {
                embedding.set(i, j, b[i].clone());
            }
        }
        let levels = self.shape.levels();
        let mut gens = BTreeMap::new();
        for p in 1..=levels {
            for q in 1..=levels {
                let mut mat = Matrix::zeros(sub_dim, sub_dim);
                for (j, b) in basis.iter().enumerate() {
                    let image = self.apply(p, q, b);
                    let coords =
                        crate::linalg::coordinates_in_basis(&basis, &image).ok_or_else(|| {
                            Error::inconsistent(format!(
                                "span not invariant under E_{p}{q}"
                            ))
                        })?;
                    for (i, c) in coords.into_iter().enumerate() {
                        mat.set(i, j, c);
                    }
                }
                gens.insert((p, q), mat);
            }
        }
        let parities = weights
            .iter()
            .map(|w| {
                let odd_sum: i64 = w[self.shape.m..].iter().sum();
                (odd_sum.rem_euclid(2)) as u8
            })
            .collect();
        let form = basis.iter().map(|b| self.pair(b, b)).collect();
        Ok((
            RepModule {
                shape: self.shape,
                dim: sub_dim,
                parities,
                weights,
                gens,
                form,
            },
            embedding,
        ))
    }
}

/// One irreducible constituent of a decomposition.
#[derive(Clone, Debug)]
pub struct Constituent {
    /// Highest weight of the constituent.
    pub weight: HighestWeight,
    /// Its highest-weight vector in ambient coordinates (primitive).
    pub vector: Vec<Rational>,
    /// Dimension of the cyclic span.
    pub dimension: usize,
}

/// Largest tensor power [`realize_covariant`] will build.
pub const MAX_REALIZED_POWER: i64 = 4;

/// Build a standalone realization of the covariant module `V(Λ)` by
/// extracting it from the tensor power `V^{⊗|Λ|}` (where `|Λ|` is the label
/// sum).  Fails with [`Error::NotRealizable`] for weights outside the
/// covariant family, label sums beyond [`MAX_REALIZED_POWER`], or weights
/// that do not occur in the power (atypical truncation).
pub fn realize_covariant(top: &HighestWeight) -> Result<RepModule, Error> {
    if !top.is_dominant() || top.labels().iter().any(|&l| l < 0) {
        return Err(Error::not_realizable(format!(
            "{top} is not a covariant (dominant, non-negative) weight"
        )));
    }
    let power_k = top.label_sum();
    if power_k == 0 {
        return Err(Error::not_realizable(
            "the trivial module does not occur in a positive tensor power of V".to_string(),
        ));
    }
    if power_k > MAX_REALIZED_POWER {
        return Err(Error::not_realizable(format!(
            "label sum {power_k} exceeds the realization bound {MAX_REALIZED_POWER}"
        )));
    }
    let vector = RepModule::vector_module(top.shape());
    let mut power = vector.clone();
    for _ in 1..power_k {
        power = vector.graded_tensor(&power);
    }
    for constituent in power.decompose()? {
        if constituent.weight == *top {
            return power.cyclic_submodule(&constituent.vector).map(|(m, _)| m);
        }
    }
    Err(Error::not_realizable(format!(
        "{top} does not occur in V^⊗{power_k}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn shape(m: usize, n: usize) -> Shape {
        Shape::new(m, n).unwrap()
    }

    #[test]
    fn vector_module_satisfies_the_relations() {
        for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 0)] {
            let v = RepModule::vector_module(shape(m, n));
            assert_eq!(v.dim(), m + n);
            v.check_supercommutation().unwrap();
        }
    }

    #[test]
    fn dual_module_negates_weights_and_satisfies_relations() {
        let v = RepModule::vector_module(shape(2, 1));
        let d = v.dual_module();
        d.check_supercommutation().unwrap();
        let neg: Vec<Vec<i64>> = v
            .weights()
            .iter()
            .map(|w| w.iter().map(|x| -x).collect())
            .collect();
        assert_eq!(d.weights(), &neg[..]);
        assert_eq!(d.parities(), v.parities());
    }

    #[test]
    fn double_dual_is_the_grading_twist() {
        // π** equals π with odd generators negated — not π itself.
        let v = RepModule::vector_module(shape(1, 1));
        let dd = v.dual_module().dual_module();
        for p in 1..=2 {
            for q in 1..=2 {
                let par = (v.shape().parity(p) + v.shape().parity(q)) % 2;
                let expected = if par == 1 {
                    v.gen(p, q).scale(&rat(-1, 1))
                } else {
                    v.gen(p, q).clone()
                };
                assert_eq!(dd.gen(p, q).sub(&expected).is_zero(), true, "E_{p}{q}");
            }
        }
    }

    #[test]
    fn tensor_product_adds_weights_and_parities() {
        let v = RepModule::vector_module(shape(1, 1));
        let t = v.graded_tensor(&v);
        assert_eq!(t.dim(), 4);
        t.check_supercommutation().unwrap();
        // Index (a,b) → 2a+b; weights add, parities add mod 2.
        assert_eq!(t.weight(1), &[1, 1]);
        assert_eq!(t.parity(1), 1);
        assert_eq!(t.parity(3), 0);
        assert_eq!(t.form(), &[rat(1, 1), rat(1, 1), rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn tensor_square_highest_weights_gl11() {
        let v = RepModule::vector_module(shape(1, 1));
        let t = v.graded_tensor(&v);
        let hw = t.highest_weight_vectors();
        let weights: Vec<Vec<i64>> = hw.iter().map(|(w, _)| w.clone()).collect();
        assert_eq!(weights, vec![vec![1, 1], vec![2, 0]]);
        // The (1,1) vector is the graded-antisymmetric combination.
        let (_, v11) = &hw[0];
        assert_eq!(v11, &vec![rat(0, 1), rat(1, 1), rat(-1, 1), rat(0, 1)]);
    }

    #[test]
    fn decompose_certifies_complete_reducibility() {
        let v = RepModule::vector_module(shape(1, 1));
        let t = v.graded_tensor(&v);
        let parts = t.decompose().unwrap();
        assert_eq!(parts.len(), 2);
        let dims: Vec<usize> = parts.iter().map(|c| c.dimension).collect();
        assert_eq!(dims, vec![2, 2]);
    }

    #[test]
    fn mixed_tensor_gl11_is_not_completely_reducible() {
        let v = RepModule::vector_module(shape(1, 1));
        let t = v.graded_tensor(&v.dual_module());
        let err = t.decompose().unwrap_err();
        assert!(matches!(err, Error::Inconsistent { .. }));
    }

    #[test]
    fn standalone_submodule_from_tensor_square() {
        let v = RepModule::vector_module(shape(1, 1));
        let t = v.graded_tensor(&v);
        let hw = t.highest_weight_vectors();
        let (w, vec) = &hw[0];
        assert_eq!(w, &vec![1, 1]);
        let (sub, embedding) = t.cyclic_submodule(vec).unwrap();
        assert_eq!(sub.dim(), 2);
        sub.check_supercommutation().unwrap();
        assert_eq!(embedding.ncols(), 2);
        // The embedded basis reproduces the submodule action exactly.
        for p in 1..=2 {
            for q in 1..=2 {
                let via_sub = embedding.mul(sub.gen(p, q));
                let via_ambient = t.gen(p, q).mul(&embedding);
                assert!(via_sub.sub(&via_ambient).is_zero(), "E_{p}{q}");
            }
        }
        // Positive-definite diagonal form on a covariant family member.
        assert!(sub.form().iter().all(|x| x.is_positive()));
    }

    #[test]
    fn classical_tensor_cube_has_multiplicity() {
        // gl(2): V⊗V⊗V = (3)⊕2·(2,1)⊕... — the (2,1) highest-weight sector
        // is two-dimensional, and decompose still certifies the total.
        let v = RepModule::vector_module(shape(2, 0));
        let t = v.graded_tensor(&v).graded_tensor(&v);
        let parts = t.decompose().unwrap();
        let count_21 = parts
            .iter()
            .filter(|c| c.weight.labels() == [2, 1])
            .count();
        assert_eq!(count_21, 2);
        let total: usize = parts.iter().map(|c| c.dimension).sum();
        assert_eq!(total, 8);
    }
}
