//! Construction of linear representations from recursive definitions.
//!
//! Three constructions are implemented:
//!
//! * [`build_general`] — works for any definition; the vector collects the
//!   subsequences `x(q^j n + d)` over block-dependent shift windows derived
//!   from [`shift_bounds`], and the matrix rows are either unit rows pointing
//!   one block down or shifted copies of the recurrence coefficients.
//! * [`build_special`] — for `M = m + 1`, `l = 0`, `u = q^m - 1`; the vector
//!   shrinks to the plain blocks `x(q^j n + d)`, `0 <= d < q^j`, and the
//!   coefficient rows become the dense blocks `B_r`.
//! * [`correct_offset`] — turns a representation valid from `n0` into one
//!   valid everywhere by adjoining indicator components.
//!
//! [`shift_representation`] and [`build_inhomogeneous`] compose these.

use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::definition::QRecursiveDefinition;
use crate::linalg::{RatMat, Rational};
use crate::minimizer::minimize;
use crate::oracle::{Inhomogeneity, Sequence, SequenceOracle};
use crate::representation::{ComponentLabel, LinearRepresentation, RepresentationError};

#[derive(Debug, Error)]
pub enum BuilderError {
    #[error("coefficient column (m, {target}) outside the window [{lower}, {upper}] — bounds invariant violated")]
    IndexRangeViolation { target: i64, lower: i64, upper: i64 },
    #[error("special case requires M = m + 1, l = 0, u = q^m - 1; got {0}")]
    SpecialCaseViolation(String),
    #[error(transparent)]
    Representation(#[from] RepresentationError),
}

/// Window bounds for the subsequence shifts of the general construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftBounds {
    pub ell_prime: i64,
    pub u_prime: i64,
}

/// The two floor/ceiling formulas fixing the component windows:
/// `l' = floor(((l+1) q^{M-m} - q^M) / (q^{M-m} - 1)) [l < 0]` and
/// `u' = q^m - 1 + ceil(u q^{M-m} / (q^{M-m} - 1)) [u > 0]`.
pub fn shift_bounds(def: &QRecursiveDefinition) -> ShiftBounds {
    let q = def.q() as i64;
    let gap = def.exp_upper() - def.exp_lower();
    let q_gap = q.pow(gap);
    let q_upper = q.pow(def.exp_upper());
    let q_lower = q.pow(def.exp_lower());
    let l = def.shift_lower();
    let u = def.shift_upper();
    let ell_prime = if l < 0 {
        ((l + 1) * q_gap - q_upper).div_floor(&(q_gap - 1))
    } else {
        0
    };
    let u_prime = q_lower - 1 + if u > 0 { (u * q_gap).div_ceil(&(q_gap - 1)) } else { 0 };
    debug_assert!(ell_prime <= 0 && u_prime >= q_lower - 1);
    ShiftBounds { ell_prime, u_prime }
}

/// Component layout shared by the builders: an ordered list of `(level, shift)`
/// descriptors with positional lookup.
struct ComponentIndex {
    order: Vec<(u32, i64)>,
    pos: HashMap<(u32, i64), usize>,
}

impl ComponentIndex {
    fn new(order: Vec<(u32, i64)>) -> Self {
        let pos = order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        ComponentIndex { order, pos }
    }

    fn len(&self) -> usize {
        self.order.len()
    }

    fn get(&self, level: u32, shift: i64) -> Option<usize> {
        self.pos.get(&(level, shift)).copied()
    }

    fn labels(&self) -> Vec<ComponentLabel> {
        self.order
            .iter()
            .map(|&(level, shift)| ComponentLabel::Subsequence { level, shift })
            .collect()
    }
}

fn general_components(def: &QRecursiveDefinition, bounds: ShiftBounds) -> ComponentIndex {
    let q = def.q() as i64;
    let mut order = Vec::new();
    for j in 0..def.exp_lower() {
        for d in 0..q.pow(j) {
            order.push((j, d));
        }
    }
    let q_lower = q.pow(def.exp_lower());
    for j in def.exp_lower()..def.exp_upper() {
        for d in bounds.ell_prime..=(q.pow(j) - q_lower + bounds.u_prime) {
            order.push((j, d));
        }
    }
    ComponentIndex::new(order)
}

/// Expected dimension of [`build_general`]'s output:
/// `(q^M - 1)/(q - 1) + (M - m)(u' - l' - q^m + 1)`.
pub fn general_dimension(def: &QRecursiveDefinition) -> usize {
    let q = def.q() as i64;
    let b = shift_bounds(def);
    let geom = (q.pow(def.exp_upper()) - 1) / (q - 1);
    let window = (def.exp_upper() - def.exp_lower()) as i64
        * (b.u_prime - b.ell_prime - q.pow(def.exp_lower()) + 1);
    (geom + window) as usize
}

/// Builds the general representation. The result is valid from
/// `n1 = n0 - floor(l'/q^M)`; combine with [`correct_offset`] for a
/// representation valid everywhere.
pub fn build_general(def: &QRecursiveDefinition) -> Result<LinearRepresentation, BuilderError> {
    let oracle = SequenceOracle::new(def.clone());
    build_general_with(def, None, &oracle).map(|(rep, _)| rep)
}

/// Shared core of the general and inhomogeneous constructions. Returns the
/// representation and the component index of the plain part.
fn build_general_with(
    def: &QRecursiveDefinition,
    inhom: Option<&Inhomogeneity>,
    oracle: &dyn Sequence,
) -> Result<(LinearRepresentation, usize), BuilderError> {
    let q = def.q() as i64;
    let q_upper = q.pow(def.exp_upper());
    let q_lower = q.pow(def.exp_lower());
    let bounds = shift_bounds(def);
    let index = general_components(def, bounds);
    let base_dim = index.len();

    // Appended blocks for the inhomogeneity terms, one per (residue, shift).
    let shift_lo = bounds.ell_prime.div_floor(&q_upper);
    let shift_hi = (q.pow(def.exp_upper() - 1) - q_lower + bounds.u_prime).div_floor(&q_upper) + 1;
    let mut blocks: Vec<(u64, i64, LinearRepresentation)> = Vec::new();
    let mut block_start: HashMap<(u64, i64), usize> = HashMap::new();
    let mut dim = base_dim;
    if let Some(inhom) = inhom {
        for (s, g) in inhom.terms.iter().enumerate() {
            let Some(g) = g else { continue };
            for d2 in shift_lo..=shift_hi {
                let shifted = shift_representation(g, d2)?;
                block_start.insert((s as u64, d2), dim);
                dim += shifted.dim();
                blocks.push((s as u64, d2, shifted));
            }
        }
    }

    let mut matrices = Vec::with_capacity(def.q() as usize);
    for r in 0..q {
        let mut a = RatMat::zeros(dim, dim);
        for (i, &(j, d)) in index.order.iter().enumerate() {
            if j + 1 < def.exp_upper() {
                let target = (j + 1, q.pow(j) * r + d);
                let col = index.get(target.0, target.1).ok_or(BuilderError::IndexRangeViolation {
                    target: target.1,
                    lower: bounds.ell_prime,
                    upper: q.pow(target.0) - q_lower + bounds.u_prime,
                })?;
                a[(i, col)] = Rational::one();
            } else {
                // Coefficient row: d = d' q^M + r', residue r~ = q^{M-1} r + r'.
                let (d_quot, r_rem) = d.div_mod_floor(&q_upper);
                let r_tilde = q.pow(def.exp_upper() - 1) * r + r_rem;
                let (row_residue, col_base) = if r_tilde < q_upper {
                    (r_tilde, q_lower * d_quot)
                } else {
                    (r_tilde - q_upper, q_lower * d_quot + q_lower)
                };
                for k in def.shift_lower()..=def.shift_upper() {
                    let target = col_base + k;
                    if target < bounds.ell_prime || target > bounds.u_prime {
                        return Err(BuilderError::IndexRangeViolation {
                            target,
                            lower: bounds.ell_prime,
                            upper: bounds.u_prime,
                        });
                    }
                    let col = index.get(def.exp_lower(), target).expect("window component present");
                    let c = def.coeff(row_residue as u64, k);
                    if !c.is_zero() {
                        a[(i, col)] = c.clone();
                    }
                }
                // Coupling into the inhomogeneity block of this residue.
                if let Some(inhom) = inhom {
                    let (term_residue, term_shift) = if r_tilde < q_upper {
                        (r_tilde as u64, d_quot)
                    } else {
                        ((r_tilde - q_upper) as u64, d_quot + 1)
                    };
                    if inhom.terms[term_residue as usize].is_some() {
                        let start = block_start[&(term_residue, term_shift)];
                        let block = blocks
                            .iter()
                            .find(|(s, d2, _)| *s == term_residue && *d2 == term_shift)
                            .map(|(_, _, b)| b)
                            .expect("block registered");
                        for (off, c) in block.selection.iter().enumerate() {
                            if !c.is_zero() {
                                a[(i, start + off)] = c.clone();
                            }
                        }
                    }
                }
            }
        }
        // Inhomogeneity blocks evolve independently.
        for (s, d2, block) in &blocks {
            let start = block_start[&(*s, *d2)];
            a.set_block(start, start, &block.matrices[r as usize]);
        }
        matrices.push(a);
    }

    let mut v0: Vec<Rational> = index
        .order
        .iter()
        .map(|&(_, d)| oracle.eval_signed(d))
        .collect();
    let mut labels = index.labels();
    let mut externals = std::collections::BTreeMap::new();
    for (s, d2, block) in &blocks {
        let name = format!("g{s}_shift{d2}");
        for component in 0..block.dim() {
            labels.push(ComponentLabel::External { name: clone_name(&name), component });
        }
        v0.extend(block.v0.iter().cloned());
        externals.insert(name, block.clone());
    }

    let mut selection = vec![Rational::zero(); dim];
    let x_pos = index.get(0, 0).expect("x is always a component");
    selection[x_pos] = Rational::one();

    let validity = def.offset() as i64 - bounds.ell_prime.div_floor(&q_upper);
    let mut rep = LinearRepresentation::new(
        def.q(),
        matrices,
        v0,
        selection,
        labels,
        validity as u64,
    );
    rep.externals = externals;
    Ok((rep, base_dim))
}

fn clone_name(name: &str) -> String {
    name.to_string()
}

/// Builds the compact special-case representation. Requires `M = m + 1`,
/// `l = 0` and `u = q^m - 1`; the validity offset is inherited from the
/// definition.
pub fn build_special(def: &QRecursiveDefinition) -> Result<LinearRepresentation, BuilderError> {
    if !def.is_special_case() {
        return Err(BuilderError::SpecialCaseViolation(format!(
            "M = {}, m = {}, l = {}, u = {}",
            def.exp_upper(),
            def.exp_lower(),
            def.shift_lower(),
            def.shift_upper()
        )));
    }
    let q = def.q() as i64;
    let m = def.exp_lower();
    let q_lower = q.pow(m);
    let mut order = Vec::new();
    for j in 0..=m {
        for d in 0..q.pow(j) {
            order.push((j, d));
        }
    }
    let index = ComponentIndex::new(order);
    let dim = index.len();
    let oracle = SequenceOracle::new(def.clone());

    let mut matrices = Vec::with_capacity(def.q() as usize);
    for r in 0..q {
        let mut a = RatMat::zeros(dim, dim);
        for (i, &(j, d)) in index.order.iter().enumerate() {
            if j < m {
                let col = index.get(j + 1, q.pow(j) * r + d).expect("next block component");
                a[(i, col)] = Rational::one();
            } else {
                // Row of B_r: x(q^m (qn + r) + d) = sum_k c[r q^m + d][k] x(q^m n + k).
                let s = (r * q_lower + d) as u64;
                for k in 0..q_lower {
                    let c = def.coeff(s, k);
                    if !c.is_zero() {
                        let col = index.get(m, k).expect("base block component");
                        a[(i, col)] = c.clone();
                    }
                }
            }
        }
        matrices.push(a);
    }

    let v0 = index.order.iter().map(|&(_, d)| oracle.eval_signed(d)).collect();
    let mut selection = vec![Rational::zero(); dim];
    selection[index.get(0, 0).unwrap()] = Rational::one();
    Ok(LinearRepresentation::new(
        def.q(),
        matrices,
        v0,
        selection,
        index.labels(),
        def.offset(),
    ))
}

/// The dense coefficient blocks `B_r` of the special case, `B_r[d][k] = c[r q^m + d][k]`.
pub fn special_blocks(def: &QRecursiveDefinition) -> Result<Vec<RatMat>, BuilderError> {
    if !def.is_special_case() {
        return Err(BuilderError::SpecialCaseViolation("not in special shape".into()));
    }
    let q_lower = def.q_pow_lower();
    let mut out = Vec::new();
    for r in 0..def.q() as u64 {
        let mut b = RatMat::zeros(q_lower as usize, q_lower as usize);
        for d in 0..q_lower {
            for k in 0..q_lower {
                b[(d as usize, k as usize)] = def.coeff(r * q_lower + d, k as i64).clone();
            }
        }
        out.push(b);
    }
    Ok(out)
}

/// Removes a positive validity offset by adjoining the indicators
/// `[n = 0], ..., [n = n0 - 1]`. The oracle supplies the vector values below
/// the offset through the component labels.
pub fn correct_offset<S: Sequence + ?Sized>(
    rep: &LinearRepresentation,
    oracle: &S,
) -> Result<LinearRepresentation, RepresentationError> {
    let n0 = rep.validity_offset;
    if n0 == 0 {
        return Ok(rep.clone());
    }
    let d = rep.dim();
    let n0u = n0 as usize;
    let q = rep.q as u64;
    let mut small: Vec<Vec<Rational>> = Vec::new();
    for k in 0..(q * n0) {
        small.push(rep.vector_from_labels(oracle, k)?);
    }
    let mut matrices = Vec::with_capacity(rep.q as usize);
    for r in 0..q {
        let mut a = RatMat::zeros(d + n0u, d + n0u);
        a.set_block(0, 0, &rep.matrices[r as usize]);
        // Correction columns w_{r,k} = v(qk + r) - A_r v(k).
        for k in 0..n0 {
            let want = &small[(q * k + r) as usize];
            let have = rep.matrices[r as usize].mul_vec(&small[k as usize]);
            for i in 0..d {
                a[(i, d + k as usize)] = want[i].clone() - &have[i];
            }
        }
        // Indicator dynamics: delta_k(qn + r) = [qj = k - r] delta_j(n).
        for k in 0..n0 {
            for j in 0..n0 {
                if (j * q) as i64 == k as i64 - r as i64 {
                    a[(d + k as usize, d + j as usize)] = Rational::one();
                }
            }
        }
        matrices.push(a);
    }
    let mut v0 = small[0].clone();
    v0.push(Rational::one());
    v0.extend(std::iter::repeat(Rational::zero()).take(n0u - 1));
    let mut selection = rep.selection.clone();
    selection.extend(std::iter::repeat(Rational::zero()).take(n0u));
    let mut labels = rep.labels.clone();
    labels.extend((0..n0).map(ComponentLabel::Delta));
    let mut out = LinearRepresentation::new(rep.q, matrices, v0, selection, labels, 0);
    out.externals = rep.externals.clone();
    Ok(out)
}

/// Representation of the shifted sequence `n -> x(n + d)` (zero for negative
/// arguments). Built by windowing one step at a time and minimizing after
/// each step, so the dimension never doubles for long.
pub fn shift_representation(
    rep: &LinearRepresentation,
    d: i64,
) -> Result<LinearRepresentation, RepresentationError> {
    if rep.validity_offset > 0 {
        return Err(RepresentationError::RepresentationHasOffset { offset: rep.validity_offset });
    }
    let mut current = rep.clone();
    for _ in 0..d.abs() {
        let stepped = if d > 0 { shift_up(&current) } else { shift_down(&current) };
        current = minimize(&stepped).0;
    }
    if d == 0 {
        current = minimize(&current).0;
    }
    Ok(current)
}

/// One window step for `n -> x(n + 1)` over the pair `(v(n), v(n+1))`.
fn shift_up(rep: &LinearRepresentation) -> LinearRepresentation {
    let q = rep.q as usize;
    let d = rep.dim();
    let mut matrices = Vec::with_capacity(q);
    for r in 0..q {
        let mut a = RatMat::zeros(2 * d, 2 * d);
        a.set_block(0, 0, &rep.matrices[r]);
        if r + 1 < q {
            a.set_block(d, 0, &rep.matrices[r + 1]);
        } else {
            a.set_block(d, d, &rep.matrices[0]);
        }
        matrices.push(a);
    }
    let mut v0 = rep.v0.clone();
    v0.extend(rep.matrices[1 % q].mul_vec(&rep.v0));
    let mut selection = vec![Rational::zero(); 2 * d];
    selection[d..].clone_from_slice(&rep.selection);
    let mut labels: Vec<ComponentLabel> = rep.labels.clone();
    labels.extend(rep.labels.iter().map(|l| bump_label(l, rep.q, 1)));
    let mut out = LinearRepresentation::new(rep.q, matrices, v0, selection, labels, 0);
    out.externals = rep.externals.clone();
    out
}

/// One window step for `n -> x(n - 1)` over the pair `(v(n-1), v(n))`; the
/// `v(-1)` slot is pinned to zero, matching the convention for negative
/// arguments.
fn shift_down(rep: &LinearRepresentation) -> LinearRepresentation {
    let q = rep.q as usize;
    let d = rep.dim();
    let mut matrices = Vec::with_capacity(q);
    for r in 0..q {
        let mut a = RatMat::zeros(2 * d, 2 * d);
        if r == 0 {
            a.set_block(0, 0, &rep.matrices[q - 1]);
            a.set_block(d, d, &rep.matrices[0]);
        } else {
            a.set_block(0, d, &rep.matrices[r - 1]);
            a.set_block(d, d, &rep.matrices[r]);
        }
        matrices.push(a);
    }
    let mut v0 = vec![Rational::zero(); d];
    v0.extend(rep.v0.iter().cloned());
    let mut selection = rep.selection.clone();
    selection.extend(std::iter::repeat(Rational::zero()).take(d));
    // The first-half slots deviate from any subsequence meaning at n = 0.
    let mut labels = vec![ComponentLabel::Derived; d];
    labels.extend(rep.labels.iter().cloned());
    let mut out = LinearRepresentation::new(rep.q, matrices, v0, selection, labels, 0);
    out.externals = rep.externals.clone();
    out
}

fn bump_label(label: &ComponentLabel, q: u32, by: i64) -> ComponentLabel {
    match label {
        ComponentLabel::Subsequence { level, shift } => ComponentLabel::Subsequence {
            level: *level,
            shift: shift + by * (q as i64).pow(*level),
        },
        ComponentLabel::Delta(k) => {
            let moved = *k as i64 - by;
            if moved >= 0 {
                ComponentLabel::Delta(moved as u64)
            } else {
                ComponentLabel::Derived
            }
        }
        _ => ComponentLabel::Derived,
    }
}

/// Builds a representation for a definition with q-regular inhomogeneities
/// `x(q^M n + s) = sum_k c[s][k] x(q^m n + k) + g_s(n)`, then corrects the
/// offset away. Each `g_s` must be an offset-0 representation.
pub fn build_inhomogeneous(
    def: &QRecursiveDefinition,
    inhom: &Inhomogeneity,
) -> Result<LinearRepresentation, BuilderError> {
    assert_eq!(inhom.terms.len() as u64, def.q_pow_upper());
    let oracle = SequenceOracle::with_inhomogeneity(def.clone(), inhom.clone());
    let (rep, _) = build_general_with(def, Some(inhom), &oracle)?;
    Ok(correct_offset(&rep, &oracle)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::rat;
    use crate::representation::rep_check;

    #[test]
    fn shift_bound_examples() {
        let b = shift_bounds(catalog::stern().definition());
        assert_eq!((b.ell_prime, b.u_prime), (0, 2));
        let b = shift_bounds(catalog::artificial_general().definition());
        assert_eq!((b.ell_prime, b.u_prime), (-3, 3));
        let b = shift_bounds(catalog::h_entry().definition());
        assert_eq!((b.ell_prime, b.u_prime), (0, 0));
    }

    #[test]
    fn general_build_matches_stern_matrices() {
        let rep = build_general(catalog::stern().definition()).unwrap();
        assert_eq!(rep.dim(), 3);
        assert_eq!(rep.validity_offset, 0);
        assert_eq!(rep.matrices[0], RatMat::from_i64(3, 3, &[1, 0, 0, 1, 1, 0, 0, 1, 0]));
        assert_eq!(rep.matrices[1], RatMat::from_i64(3, 3, &[1, 1, 0, 0, 1, 0, 0, 1, 1]));
        assert_eq!(rep.v0, vec![rat(0), rat(1), rat(1)]);
    }

    #[test]
    fn general_build_matches_odd_pascal_matrices() {
        let rep = build_general(catalog::odd_pascal().definition()).unwrap();
        assert_eq!(rep.matrices[0], RatMat::from_i64(3, 3, &[3, 0, 0, 2, 1, 0, 0, 3, 0]));
        assert_eq!(rep.matrices[1], RatMat::from_i64(3, 3, &[2, 1, 0, 0, 3, 0, 0, 2, 1]));
    }

    #[test]
    fn special_build_matches_pascal_blocks() {
        let def = catalog::pascal_z();
        let blocks = special_blocks(def.definition()).unwrap();
        let third = crate::linalg::ratio(1, 3);
        assert_eq!(blocks[0], RatMat::from_i64(2, 2, &[5, -1, 4, 1]).scale(&third));
        assert_eq!(blocks[1], RatMat::from_i64(2, 2, &[1, 4, -1, 5]).scale(&third));
        let rep = build_special(def.definition()).unwrap();
        assert_eq!(rep.dim(), 3);
        assert_eq!(rep.matrices[0], RatMat::from_i64(3, 3, &[0, 3, 0, 0, 5, -1, 0, 4, 1]).scale(&third));
        assert_eq!(rep.matrices[1], RatMat::from_i64(3, 3, &[0, 0, 3, 0, 1, 4, 0, -1, 5]).scale(&third));
    }

    #[test]
    fn special_case_shape_rejected() {
        let err = build_special(catalog::stern().definition());
        assert!(matches!(err, Err(BuilderError::SpecialCaseViolation(_))));
    }

    #[test]
    fn dimension_formula_holds_on_catalog() {
        for name in catalog::NAMES {
            let def = catalog::entry(name).unwrap().definition().clone();
            let rep = build_general(&def).unwrap();
            assert_eq!(rep.dim(), general_dimension(&def), "{name}");
        }
    }

    #[test]
    fn corrected_general_rep_matches_oracle() {
        let entry = catalog::h_entry();
        let oracle = entry.oracle();
        let rep = build_general(entry.definition()).unwrap();
        assert_eq!(rep.validity_offset, 1);
        let corrected = correct_offset(&rep, &oracle).unwrap();
        assert_eq!(corrected.validity_offset, 0);
        for n in 0..2000 {
            assert_eq!(corrected.eval(n).unwrap(), oracle.eval(n), "h({n})");
        }
    }

    #[test]
    fn offset_correction_is_identity_at_zero() {
        let rep = catalog::stern_minimal_rep();
        let oracle = catalog::stern().oracle();
        let out = correct_offset(&rep, &oracle).unwrap();
        assert_eq!(out.dim(), rep.dim());
        assert_eq!(out.matrices, rep.matrices);
    }

    #[test]
    fn shifted_stern_values() {
        let rep = catalog::stern_minimal_rep();
        let shifted = shift_representation(&rep, 1).unwrap();
        let expect = [1i64, 1, 2, 1, 3, 2, 3];
        for (n, &v) in expect.iter().enumerate() {
            assert_eq!(shifted.eval(n as u64).unwrap(), rat(v), "d({})", n + 1);
        }
    }

    #[test]
    fn shift_by_zero_is_equivalent() {
        let rep = catalog::pascal_z_minimal_rep();
        let shifted = shift_representation(&rep, 0).unwrap();
        for n in 0..200 {
            assert_eq!(shifted.eval(n).unwrap(), rep.eval(n).unwrap());
        }
    }

    #[test]
    fn shift_pascal_by_three() {
        let rep = catalog::pascal_z_minimal_rep();
        let oracle = catalog::pascal_z().oracle();
        let shifted = shift_representation(&rep, 3).unwrap();
        assert_eq!(shifted.eval(500).unwrap(), oracle.eval(503));
    }

    #[test]
    fn negative_shift_round_trip() {
        let rep = catalog::stern_minimal_rep();
        let oracle = catalog::stern().oracle();
        let shifted = shift_representation(&rep, -2).unwrap();
        for n in 0..200i64 {
            assert_eq!(shifted.eval(n as u64).unwrap(), oracle.eval_signed(n - 2), "n = {n}");
        }
    }

    #[test]
    fn unbordered_pipeline_checks() {
        let entry = catalog::unbordered();
        let oracle = entry.oracle();
        let rep = build_special(entry.definition()).unwrap();
        assert_eq!(rep.dim(), 7);
        assert_eq!(rep.validity_offset, 3);
        let corrected = correct_offset(&rep, &oracle).unwrap();
        assert_eq!(corrected.dim(), 10);
        assert!(rep_check(&corrected, &oracle, 2000).unwrap().is_success());
    }

    #[test]
    fn inhomogeneous_sum_of_digits() {
        // s(2n) = s(n), s(2n+1) = s(n) + 1 with a constant inhomogeneity.
        let mut table = std::collections::BTreeMap::new();
        table.insert((0u64, 0i64), rat(1));
        table.insert((1u64, 0i64), rat(1));
        let def = QRecursiveDefinition::new(2, 1, 0, 0, 0, 0, &table, vec![rat(0), rat(1)]).unwrap();
        let inhom = Inhomogeneity { terms: vec![None, Some(catalog::const_one_rep(2))] };
        let rep = build_inhomogeneous(&def, &inhom).unwrap();
        let intro = catalog::sum_of_digits_intro_rep();
        for n in 0..1024u64 {
            assert_eq!(rep.eval(n).unwrap(), rat(n.count_ones() as i64), "s({n})");
            assert_eq!(rep.eval(n).unwrap(), intro.eval(n).unwrap());
        }
    }

    #[test]
    fn inhomogeneous_with_identity_sequence() {
        // x(2n) = x(n) + n, x(2n+1) = x(n), x(0) = 0.
        let mut table = std::collections::BTreeMap::new();
        table.insert((0u64, 0i64), rat(1));
        table.insert((1u64, 0i64), rat(1));
        let def = QRecursiveDefinition::new(2, 1, 0, 0, 0, 0, &table, vec![rat(0), rat(0)]).unwrap();
        let inhom = Inhomogeneity { terms: vec![Some(catalog::identity_rep(2)), None] };
        let rep = build_inhomogeneous(&def, &inhom).unwrap();
        // Direct recursion oracle.
        let mut table = vec![rat(0); 1025];
        for n in 1..=1024usize {
            table[n] = if n % 2 == 0 {
                table[n / 2].clone() + rat((n / 2) as i64)
            } else {
                table[n / 2].clone()
            };
        }
        for (n, want) in table.iter().enumerate().take(1000) {
            assert_eq!(rep.eval(n as u64).unwrap(), *want, "x({n})");
        }
    }

    #[test]
    fn zero_inhomogeneity_matches_general() {
        let def = catalog::stern().definition().clone();
        let inhom = Inhomogeneity { terms: vec![None, None] };
        let rep = build_inhomogeneous(&def, &inhom).unwrap();
        let general = build_general(&def).unwrap();
        for n in 0..500 {
            assert_eq!(rep.eval(n).unwrap(), general.eval(n).unwrap());
        }
    }
}
