//! Characteristic-matrix projectors: reading invariants off explicit
//! modules by spectral decomposition, with no reference to closed forms.
//!
//! For a module (π, W) of gl(m|n) with L = m+n levels, two operators on
//! C^L⊗W are built from the generator matrices:
//!
//! * the barred matrix, block (p,q) = −(−1)^{(p)(q)} π(E_qp),
//! * the unbarred matrix, block (p,q) = (−1)^{(p)} π(E_pq),
//!
//! indices 1-based, block (p,q) mapping slot q to slot p.  On an
//! irreducible module both are semisimple with spectrum inside the barred
//! (resp. unbarred) characteristic roots of the highest weight, so the
//! Lagrange interpolation projectors `P[r] = ∏_{p≠r}(𝒜−α_p)/(α_r−α_p)`
//! resolve the identity.  Invariants are extracted as proportionality
//! scalars:
//!
//! * first-kind coefficients: the (L,L) block of P[r] acts on a
//!   subalgebra-highest-weight vector as multiplication by the
//!   coefficient;
//! * second-kind coefficients: sandwiching the top-left (L−1)² blocks of
//!   P[r] between the subalgebra projector P₀[u] (same construction one
//!   level down, with the child's roots) gives an operator proportional to
//!   P₀[u] on every slot vector e_q⊗w.
//!
//! Projectors are only formed for roots separated from the rest of their
//! list; unseparated roots are skipped.  Applications are evaluated
//! factor-by-factor on vectors, so no big matrix product is ever formed
//! outside the tests.

use crate::algebra::{roots, HighestWeight, RootVariant};
use crate::error::Error;
use crate::exact::Rational;
use crate::linalg::Matrix;
use std::collections::BTreeMap;

use super::RepModule;

/// The characteristic matrix on C^level ⊗ W (size level·dim).
pub fn characteristic_matrix(module: &RepModule, variant: RootVariant, level: usize) -> Matrix {
    let d = module.dim();
    let mut big = Matrix::zeros(level * d, level * d);
    for p in 1..=level {
        for q in 1..=level {
            let (gen, negate) = match variant {
                RootVariant::Barred => (
                    module.gen(q, p),
                    // −(−1)^{(p)(q)}
                    (module.shape().parity(p) * module.shape().parity(q)) % 2 == 0,
                ),
                RootVariant::Unbarred => (
                    module.gen(p, q),
                    // +(−1)^{(p)}
                    module.shape().parity(p) == 1,
                ),
            };
            for i in 0..d {
                for j in 0..d {
                    let v = gen.get(i, j);
                    if v.is_zero() {
                        continue;
                    }
                    let entry = if negate { -v.clone() } else { v.clone() };
                    big.set((p - 1) * d + i, (q - 1) * d + j, entry);
                }
            }
        }
    }
    big
}

/// Is root `r` (1-based) distinct from every other entry of `list`?
pub fn root_separated(list: &[i64], r: usize) -> bool {
    list.iter()
        .enumerate()
        .all(|(k, &x)| k == r - 1 || x != list[r - 1])
}

/// Apply `P[r] = ∏_{p≠r}(𝒜−α_p)/(α_r−α_p)` to a vector, factor by factor.
pub fn apply_projector(big: &Matrix, root_list: &[i64], r: usize, x: &[Rational]) -> Vec<Rational> {
    let mut v = x.to_vec();
    for (p, &alpha) in root_list.iter().enumerate() {
        if p == r - 1 {
            continue;
        }
        let denom = Rational::from_int(root_list[r - 1] - alpha);
        let image = big.mul_vec(&v);
        let alpha = Rational::from_int(alpha);
        v = image
            .iter()
            .zip(&v)
            .map(|(y, x)| &(y - &(&alpha * x)) / &denom)
            .collect();
    }
    v
}

/// Full projector matrix (test and inspection use; quadratic in level·dim).
pub fn projector_matrix(
    module: &RepModule,
    variant: RootVariant,
    level: usize,
    root_list: &[i64],
    r: usize,
) -> Result<Matrix, Error> {
    if !root_separated(root_list, r) {
        return Err(Error::degenerate(format!(
            "root {r} is not separated in {root_list:?}"
        )));
    }
    let big = characteristic_matrix(module, variant, level);
    let d = level * module.dim();
    let mut p_mat = Matrix::identity(d);
    for (p, &alpha) in root_list.iter().enumerate() {
        if p == r - 1 {
            continue;
        }
        let denom = Rational::from_int(root_list[r - 1] - alpha);
        let shifted = big.sub_scalar_diag(&Rational::from_int(alpha));
        p_mat = shifted.mul(&p_mat).scale(&(Rational::one() / denom));
    }
    Ok(p_mat)
}

/// The unique highest weight of a standalone irreducible module.
fn module_top(module: &RepModule) -> Result<HighestWeight, Error> {
    let hw = module.highest_weight_vectors();
    if hw.len() != 1 {
        return Err(Error::inconsistent(format!(
            "expected one highest-weight vector, found {}",
            hw.len()
        )));
    }
    HighestWeight::from_parts(module.shape().m, module.shape().n, &hw[0].0)
}

/// The child row carried by a subalgebra-highest-weight vector.
fn child_of(module: &RepModule, child_hw: &[Rational]) -> Result<HighestWeight, Error> {
    let levels = module.shape().levels();
    let support: Vec<usize> = (0..module.dim())
        .filter(|&i| !child_hw[i].is_zero())
        .collect();
    let Some(&first) = support.first() else {
        return Err(Error::inconsistent("zero subalgebra vector".to_string()));
    };
    let w = module.weight(first).to_vec();
    if support.iter().any(|&i| module.weight(i) != w) {
        return Err(Error::inconsistent(
            "subalgebra vector is not weight-homogeneous".to_string(),
        ));
    }
    let child_shape = module
        .shape()
        .child()
        .ok_or_else(|| Error::inconsistent("module has no subalgebra level".to_string()))?;
    HighestWeight::from_parts(child_shape.m, child_shape.n, &w[..levels - 1])
}

/// `y = c·x` exactly, else an inconsistency error; `x` must be nonzero.
fn proportionality(y: &[Rational], x: &[Rational]) -> Result<Rational, Error> {
    let i0 = x
        .iter()
        .position(|v| !v.is_zero())
        .ok_or_else(|| Error::inconsistent("proportionality against zero".to_string()))?;
    let c = &y[i0] / &x[i0];
    for (yv, xv) in y.iter().zip(x) {
        if *yv != &c * xv {
            return Err(Error::inconsistent(
                "projector image is not proportional".to_string(),
            ));
        }
    }
    Ok(c)
}

/// First-kind coefficients by projector eigenvalue: for each separated root
/// index r, the scalar by which the (L,L) block of P[r] acts on the given
/// subalgebra-highest-weight vector of the standalone module.
pub fn projector_c_values(
    module: &RepModule,
    child_hw: &[Rational],
    variant: RootVariant,
) -> Result<BTreeMap<usize, Rational>, Error> {
    let levels = module.shape().levels();
    let d = module.dim();
    let top = module_top(module)?;
    let root_list = roots(&top, variant);
    let big = characteristic_matrix(module, variant, levels);
    let mut out = BTreeMap::new();
    for r in 1..=levels {
        if !root_separated(&root_list, r) {
            continue;
        }
        // e_L ⊗ w: the slot-L component of the image is the (L,L) block
        // applied to w.
        let mut x = vec![Rational::zero(); levels * d];
        x[(levels - 1) * d..].clone_from_slice(child_hw);
        let y = apply_projector(&big, &root_list, r, &x);
        let c = proportionality(&y[(levels - 1) * d..], child_hw)?;
        out.insert(r, c);
    }
    Ok(out)
}

/// Pairing on C^slots ⊗ W: slot weights all one, module form inside.
/// The characteristic matrices are self-adjoint for it whenever the module
/// form is (plain-adjoint for the barred matrix, graded-adjoint for the
/// unbarred one), which holds on both pure tensor families.
fn slot_pair(module: &RepModule, x: &[Rational], y: &[Rational]) -> Rational {
    let d = module.dim();
    let mut acc = Rational::zero();
    for q in 0..x.len() / d {
        acc = &acc + &module.pair(&x[q * d..(q + 1) * d], &y[q * d..(q + 1) * d]);
    }
    acc
}

/// Second-kind coefficients by the projector sandwich: for separated child
/// root u and separated parent root r, the scalar ρ with
/// P₀[u]·P[r]'·P₀[u] = ρ·P₀[u] on the subalgebra sector of the branch,
/// where P[r]' is the top-left (L−1)² block of P[r].  The scalar is read
/// off as the form ratio ⟨X, P[r]'X⟩ / ⟨X, X⟩ over the sector vectors
/// X = P₀[u](e_q⊗w): the left projector moves onto the bra by
/// self-adjointness, which keeps every operator application inside the
/// subspace where the interpolation polynomial actually projects.  (P[r]'
/// itself leaks into other subalgebra sectors of the module, but those are
/// orthogonal slot-wise, so the pairing never sees them.)  Sectors with
/// P₀[u]·(e_q⊗w) = 0 for all q are unsupported and skipped.
pub fn projector_rho_values(
    module: &RepModule,
    child_hw: &[Rational],
    variant: RootVariant,
) -> Result<BTreeMap<(usize, usize), Rational>, Error> {
    let levels = module.shape().levels();
    let d = module.dim();
    let top = module_top(module)?;
    let child = child_of(module, child_hw)?;
    let parent_roots = roots(&top, variant);
    let child_roots = roots(&child, variant);
    let big = characteristic_matrix(module, variant, levels);
    let small = characteristic_matrix(module, variant, levels - 1);
    let sub = levels - 1;
    let mut out = BTreeMap::new();
    for u in 1..=sub {
        if !root_separated(&child_roots, u) {
            continue;
        }
        let sector: Vec<Vec<Rational>> = (1..=sub)
            .map(|q| {
                let mut x = vec![Rational::zero(); sub * d];
                x[(q - 1) * d..q * d].clone_from_slice(child_hw);
                apply_projector(&small, &child_roots, u, &x)
            })
            .filter(|x| x.iter().any(|v| !v.is_zero()))
            .collect();
        if sector.is_empty() {
            continue; // u-sector unsupported on this branch
        }
        for r in 1..=levels {
            if !root_separated(&parent_roots, r) {
                continue;
            }
            let mut ratio: Option<Rational> = None;
            for x in &sector {
                let norm = slot_pair(module, x, x);
                if norm.is_zero() {
                    continue; // isotropic slot vector: ratio unreadable here
                }
                // Zero-pad to slot L, apply P[r], truncate: exactly the
                // top-left (L−1)² block of P[r] acting on x.
                let mut padded = vec![Rational::zero(); levels * d];
                padded[..sub * d].clone_from_slice(x);
                let y_full = apply_projector(&big, &parent_roots, r, &padded);
                let c = &slot_pair(module, &y_full[..sub * d], x) / &norm;
                match &ratio {
                    None => ratio = Some(c),
                    Some(prev) => {
                        if *prev != c {
                            return Err(Error::inconsistent(format!(
                                "sandwich ratio differs between slots for r={r}, u={u}"
                            )));
                        }
                    }
                }
            }
            let Some(ratio) = ratio else {
                return Err(Error::inconsistent(format!(
                    "every sector vector is isotropic for r={r}, u={u}"
                )));
            };
            out.insert((r, u), ratio);
        }
    }
    Ok(out)
}
