//! q-linear representations.
//!
//! A representation is a tuple `(A_0, ..., A_{q-1}, v)` with
//! `v(qn + r) = A_r v(n)` for all `n >= validity_offset`, together with a
//! selection row extracting the sequence of interest from `v`. Component
//! labels record what each entry of `v` means so that representations with a
//! positive offset can be corrected against an oracle.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{format_rational, RatMat, Rational};
use crate::oracle::Sequence;
use num_traits::{One, Zero};

/// Meaning of one component of the vector sequence `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentLabel {
    /// `x(q^level * n + shift)`, with `x(n) = 0` for negative arguments.
    Subsequence { level: u32, shift: i64 },
    /// The indicator `n == k`.
    Delta(u64),
    /// Component `component` of the registered external representation `name`.
    External { name: String, component: usize },
    /// A linear combination produced by a basis change; not directly evaluable.
    Derived,
}

impl ComponentLabel {
    pub fn describe(&self, q: u32) -> String {
        match self {
            ComponentLabel::Subsequence { level, shift } => {
                let factor = (q as i64).pow(*level);
                if *level == 0 && *shift == 0 {
                    "x(n)".to_string()
                } else if *level == 0 {
                    format!("x(n{shift:+})")
                } else if *shift == 0 {
                    format!("x({factor}n)")
                } else {
                    format!("x({factor}n{shift:+})")
                }
            }
            ComponentLabel::Delta(k) => format!("[n={k}]"),
            ComponentLabel::External { name, component } => format!("{name}[{component}]"),
            ComponentLabel::Derived => "derived".to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum RepresentationError {
    #[error("representation has offset {offset}; digit-product evaluation needs offset 0")]
    RepresentationHasOffset { offset: u64 },
    #[error("component {index} has no evaluable label")]
    UnevaluableLabel { index: usize },
    #[error("unknown external representation `{0}`")]
    UnknownExternal(String),
}

/// A q-linear representation with exact rational matrices.
#[derive(Clone, Debug)]
pub struct LinearRepresentation {
    pub q: u32,
    pub matrices: Vec<RatMat>,
    pub v0: Vec<Rational>,
    pub selection: Vec<Rational>,
    pub labels: Vec<ComponentLabel>,
    pub validity_offset: u64,
    /// Offset-0 representations backing `External` labels.
    pub externals: BTreeMap<String, LinearRepresentation>,
}

impl LinearRepresentation {
    pub fn new(
        q: u32,
        matrices: Vec<RatMat>,
        v0: Vec<Rational>,
        selection: Vec<Rational>,
        labels: Vec<ComponentLabel>,
        validity_offset: u64,
    ) -> Self {
        let dim = v0.len();
        assert_eq!(matrices.len(), q as usize);
        assert!(matrices.iter().all(|m| m.nrows == dim && m.ncols == dim));
        assert_eq!(selection.len(), dim);
        assert_eq!(labels.len(), dim);
        LinearRepresentation {
            q,
            matrices,
            v0,
            selection,
            labels,
            validity_offset,
            externals: BTreeMap::new(),
        }
    }

    /// Representation whose selection row is the first unit vector.
    pub fn selection_is_first_unit(&self) -> bool {
        self.selection.iter().enumerate().all(|(i, c)| {
            if i == 0 {
                c.is_one()
            } else {
                c.is_zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.v0.len()
    }

    /// Sum of the digit matrices, the matrix `C` driving the asymptotics.
    pub fn matrix_sum(&self) -> RatMat {
        RatMat::sum(&self.matrices)
    }

    /// q-ary digits of `n`, most significant first. `0` gives the empty word.
    pub fn digits_msd(&self, n: u64) -> Vec<u32> {
        let mut digits = Vec::new();
        let mut n = n;
        while n > 0 {
            digits.push((n % self.q as u64) as u32);
            n /= self.q as u64;
        }
        digits.reverse();
        digits
    }

    /// `x(n) = selection . A_{d_0} ... A_{d_{L-1}} v(0)` along the digit
    /// expansion of `n`; exactly `L` matrix-vector products.
    pub fn eval(&self, n: u64) -> Result<Rational, RepresentationError> {
        if self.validity_offset > 0 {
            return Err(RepresentationError::RepresentationHasOffset { offset: self.validity_offset });
        }
        let mut w = self.v0.clone();
        for d in self.digits_msd(n) {
            w = self.matrices[d as usize].mul_vec(&w);
        }
        let mut acc = Rational::zero();
        for (c, x) in self.selection.iter().zip(&w) {
            if !c.is_zero() {
                acc += c * x;
            }
        }
        Ok(acc)
    }

    /// Full vector `v(n)` generated from `v0` by the digit recursion.
    /// Valid for representations with offset 0.
    pub fn vector(&self, n: u64) -> Vec<Rational> {
        let mut w = self.v0.clone();
        for d in self.digits_msd(n) {
            w = self.matrices[d as usize].mul_vec(&w);
        }
        w
    }

    /// Evaluates `v(n)` through the component labels and an oracle. This is
    /// the ground-truth vector, meaningful even below the validity offset.
    pub fn vector_from_labels<S: Sequence + ?Sized>(
        &self,
        oracle: &S,
        n: u64,
    ) -> Result<Vec<Rational>, RepresentationError> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, label)| self.label_value(label, oracle, n).ok_or(RepresentationError::UnevaluableLabel { index: i }))
            .collect()
    }

    fn label_value<S: Sequence + ?Sized>(&self, label: &ComponentLabel, oracle: &S, n: u64) -> Option<Rational> {
        match label {
            ComponentLabel::Subsequence { level, shift } => {
                let arg = (self.q as i64).pow(*level) * n as i64 + shift;
                Some(oracle.eval_signed(arg))
            }
            ComponentLabel::Delta(k) => Some(if n == *k { Rational::one() } else { Rational::zero() }),
            ComponentLabel::External { name, component } => {
                let rep = self.externals.get(name)?;
                Some(rep.vector(n)[*component].clone())
            }
            ComponentLabel::Derived => None,
        }
    }

    pub fn render_matrices(&self) -> String {
        let mut out = String::new();
        for (r, m) in self.matrices.iter().enumerate() {
            out.push_str(&format!("A_{r} =\n"));
            out.push_str(&render_matrix(m));
        }
        out.push_str("v(0) = (");
        out.push_str(&self.v0.iter().map(format_rational).collect::<Vec<_>>().join(", "));
        out.push_str(")\nselection = (");
        out.push_str(&self.selection.iter().map(format_rational).collect::<Vec<_>>().join(", "));
        out.push_str(&format!(")\nvalidity offset = {}\n", self.validity_offset));
        out
    }
}

pub fn render_matrix(m: &RatMat) -> String {
    let cells: Vec<Vec<String>> = (0..m.nrows)
        .map(|i| m.row(i).iter().map(format_rational).collect())
        .collect();
    let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    let mut out = String::new();
    for row in &cells {
        out.push_str("  [");
        let padded: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
        out.push_str(&padded.join(" "));
        out.push_str("]\n");
    }
    out
}

/// Outcome of sampling `v(qn + r) = A_r v(n)` against an oracle.
#[derive(Debug, Clone, Serialize)]
pub enum CheckReport {
    Success { checked_from: u64, checked_to: u64 },
    Counterexample { n: u64, digit: u32, component: usize },
}

impl CheckReport {
    pub fn is_success(&self) -> bool {
        matches!(self, CheckReport::Success { .. })
    }
}

/// Verifies the defining relations on `validity_offset <= n <= n_max` by
/// evaluating every component through the labels and the oracle. Reports the
/// first counterexample instead of failing.
pub fn rep_check<S: Sequence + ?Sized>(
    rep: &LinearRepresentation,
    oracle: &S,
    n_max: u64,
) -> Result<CheckReport, RepresentationError> {
    rep_check_from(rep, oracle, rep.validity_offset, n_max)
}

/// Same as [`rep_check`] but with an explicit starting index; checking below
/// the validity offset is how offset witnesses are found.
pub fn rep_check_from<S: Sequence + ?Sized>(
    rep: &LinearRepresentation,
    oracle: &S,
    n_from: u64,
    n_max: u64,
) -> Result<CheckReport, RepresentationError> {
    for n in n_from..=n_max {
        let vn = rep.vector_from_labels(oracle, n)?;
        for r in 0..rep.q {
            let lhs = rep.vector_from_labels(oracle, n * rep.q as u64 + r as u64)?;
            let rhs = rep.matrices[r as usize].mul_vec(&vn);
            if let Some(component) = lhs.iter().zip(&rhs).position(|(a, b)| a != b) {
                return Ok(CheckReport::Counterexample { n, digit: r, component });
            }
        }
    }
    Ok(CheckReport::Success { checked_from: n_from, checked_to: n_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::rat;
    use crate::oracle::Sequence;

    #[test]
    fn stern_minimal_rep_evaluates() {
        let rep = catalog::stern_minimal_rep();
        assert_eq!(rep.eval(5).unwrap(), rat(3));
        assert_eq!(rep.eval(0).unwrap(), rat(0));
    }

    #[test]
    fn eval_at_zero_is_selection_dot_v0() {
        let rep = catalog::pascal_z_minimal_rep();
        assert_eq!(rep.eval(0).unwrap(), rat(1));
    }

    #[test]
    fn offset_rep_refuses_eval() {
        let def = catalog::unbordered().definition().clone();
        let rep = crate::builder::build_special(&def).unwrap();
        assert!(matches!(
            rep.eval(5),
            Err(RepresentationError::RepresentationHasOffset { offset: 3 })
        ));
    }

    #[test]
    fn stern_three_dim_rep_checks_out() {
        let rep = catalog::stern_three_dim_rep();
        let oracle = catalog::stern().oracle();
        let report = rep_check(&rep, &oracle, 2000).unwrap();
        assert!(report.is_success());
    }

    #[test]
    fn pascal_rep_matches_oracle_at_1000() {
        let rep = catalog::pascal_z_minimal_rep();
        let oracle = catalog::pascal_z().oracle();
        assert_eq!(rep.eval(1000).unwrap(), oracle.eval(1000));
    }

    #[test]
    fn unbordered_offset_rep_fails_below_three() {
        let def = catalog::unbordered().definition().clone();
        let rep = crate::builder::build_special(&def).unwrap();
        let oracle = catalog::unbordered().oracle();
        let ok = rep_check(&rep, &oracle, 2000).unwrap();
        assert!(ok.is_success());
        let bad = rep_check_from(&rep, &oracle, 0, 2000).unwrap();
        match bad {
            CheckReport::Counterexample { n, digit, .. } => {
                assert!(n < 3, "witness must sit below the offset");
                assert_eq!((n, digit), (0, 0));
            }
            _ => panic!("expected a counterexample below the offset"),
        }
    }
}
