//! Exact dimension reduction of linear representations.
//!
//! Two passes over the rationals: first the row space spanned by
//! `selection * A_w` over all words `w` (observability), then the column
//! space spanned by `A_w * v0` (reachability). Each pass restricts the
//! representation to the computed basis; after both, the dimension equals
//! the rank of the underlying Hankel system, so the result is minimal.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::linalg::{solve, RatMat, Rational, RowSpace};
use crate::representation::{ComponentLabel, LinearRepresentation};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MinimizationReport {
    pub input_dim: usize,
    pub output_dim: usize,
    /// Size of the reachability (column-space) basis.
    pub forward_basis_size: usize,
    /// Size of the observability (row-space) basis.
    pub backward_basis_size: usize,
}

/// Closure of `seed` under `vec -> step(vec, r)` for every digit `r`,
/// in breadth-first (length-lexicographic) order.
fn closure(
    seed: Vec<Rational>,
    q: usize,
    step: impl Fn(&[Rational], usize) -> Vec<Rational>,
) -> Vec<Vec<Rational>> {
    let dim = seed.len();
    let mut space = RowSpace::new(dim);
    let mut basis = Vec::new();
    if space.insert(&seed) {
        basis.push(seed);
    }
    let mut cursor = 0;
    while cursor < basis.len() {
        for r in 0..q {
            let next = step(&basis[cursor], r);
            if space.insert(&next) {
                basis.push(next);
            }
        }
        cursor += 1;
    }
    basis
}

/// Coordinates of `v` in the (independent) list `basis`.
fn coords(basis: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    let dim = v.len();
    let mut m = RatMat::zeros(dim, basis.len());
    for (j, b) in basis.iter().enumerate() {
        for i in 0..dim {
            m[(i, j)] = b[i].clone();
        }
    }
    solve(&m, v).expect("vector lies in the span of the basis")
}

/// Reduces a representation to minimal dimension. Requires validity offset 0.
/// The result is evaluation-equivalent; component labels are dropped because
/// the new components are basis-dependent linear combinations.
pub fn minimize(rep: &LinearRepresentation) -> (LinearRepresentation, MinimizationReport) {
    assert_eq!(rep.validity_offset, 0, "minimize requires an offset-0 representation");
    let q = rep.q as usize;
    let input_dim = rep.dim();

    // Pass 1: row space of selection * A_w, closed by right multiplication.
    let rows = closure(rep.selection.clone(), q, |v, r| rep.matrices[r].vec_mul(v));
    if rows.is_empty() {
        // The selection row is zero: the sequence is identically zero.
        let zero = LinearRepresentation::new(
            rep.q,
            (0..q).map(|_| RatMat::zeros(1, 1)).collect(),
            vec![Rational::zero()],
            vec![Rational::zero()],
            vec![ComponentLabel::Derived],
            0,
        );
        let report = MinimizationReport {
            input_dim,
            output_dim: 1,
            forward_basis_size: 0,
            backward_basis_size: 0,
        };
        return (zero, report);
    }
    let b = rows.len();
    let mut mid_matrices = Vec::with_capacity(q);
    for r in 0..q {
        let mut a = RatMat::zeros(b, b);
        for (i, row) in rows.iter().enumerate() {
            let image = rep.matrices[r].vec_mul(row);
            for (j, c) in coords(&rows, &image).into_iter().enumerate() {
                a[(i, j)] = c;
            }
        }
        mid_matrices.push(a);
    }
    // selection is the first basis row by construction.
    let mut mid_selection = vec![Rational::zero(); b];
    mid_selection[0] = Rational::one();
    let mid_v0: Vec<Rational> = rows
        .iter()
        .map(|row| {
            let mut acc = Rational::zero();
            for (c, x) in row.iter().zip(&rep.v0) {
                if !c.is_zero() {
                    acc += c * x;
                }
            }
            acc
        })
        .collect();

    // Pass 2: column space of A_w * v0, closed by left multiplication.
    let cols = closure(mid_v0.clone(), q, |v, r| mid_matrices[r].mul_vec(v));
    let c = cols.len().max(1);
    let (out_matrices, out_selection, out_v0) = if cols.is_empty() {
        // v0 is zero; the sequence is identically zero.
        (
            (0..q).map(|_| RatMat::zeros(1, 1)).collect::<Vec<_>>(),
            vec![Rational::zero()],
            vec![Rational::zero()],
        )
    } else {
        let mut out_matrices = Vec::with_capacity(q);
        for r in 0..q {
            let mut a = RatMat::zeros(c, c);
            for (j, col) in cols.iter().enumerate() {
                let image = mid_matrices[r].mul_vec(col);
                for (i, x) in coords(&cols, &image).into_iter().enumerate() {
                    a[(i, j)] = x;
                }
            }
            out_matrices.push(a);
        }
        let mut out_v0 = vec![Rational::zero(); c];
        out_v0[0] = Rational::one();
        let out_selection: Vec<Rational> = cols
            .iter()
            .map(|col| {
                let mut acc = Rational::zero();
                for (s, x) in mid_selection.iter().zip(col) {
                    if !s.is_zero() {
                        acc += s * x;
                    }
                }
                acc
            })
            .collect();
        (out_matrices, out_selection, out_v0)
    };

    let out = LinearRepresentation::new(
        rep.q,
        out_matrices,
        out_v0,
        out_selection,
        vec![ComponentLabel::Derived; c],
        0,
    );
    let report = MinimizationReport {
        input_dim,
        output_dim: out.dim(),
        forward_basis_size: cols.len(),
        backward_basis_size: b,
    };
    (out, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn stern_three_dim_minimizes_to_two() {
        let (min, report) = minimize(&catalog::stern_three_dim_rep());
        assert_eq!(report.output_dim, 2);
        assert_eq!(report.input_dim, 3);
        let reference = catalog::stern_minimal_rep();
        for n in 0..2000 {
            assert_eq!(min.eval(n).unwrap(), reference.eval(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn pascal_special_rep_minimizes_to_two() {
        let rep = crate::builder::build_special(catalog::pascal_z().definition()).unwrap();
        let (min, report) = minimize(&rep);
        assert_eq!(report.output_dim, 2);
        let reference = catalog::pascal_z_minimal_rep();
        for n in 0..2000 {
            assert_eq!(min.eval(n).unwrap(), reference.eval(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn minimize_is_idempotent() {
        let (min1, _) = minimize(&catalog::stern_three_dim_rep());
        let (min2, report) = minimize(&min1);
        assert_eq!(report.input_dim, report.output_dim);
        assert_eq!(min1.dim(), min2.dim());
    }

    #[test]
    fn unbordered_corrected_minimizes_to_eight() {
        let entry = catalog::unbordered();
        let oracle = entry.oracle();
        let rep = crate::builder::build_special(entry.definition()).unwrap();
        let corrected = crate::builder::correct_offset(&rep, &oracle).unwrap();
        let (min, report) = minimize(&corrected);
        assert_eq!(report.input_dim, 10);
        assert_eq!(report.output_dim, 8);
        use crate::oracle::Sequence;
        for n in 0..2000 {
            assert_eq!(min.eval(n).unwrap(), oracle.eval(n), "f({n})");
        }
    }
}
