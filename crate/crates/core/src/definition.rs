//! q-recursive sequence definitions.
//!
//! A definition fixes a base `q`, exponents `M > m >= 0`, index shift bounds
//! `l <= u`, an offset `n0` and a coefficient table `c[s][k]` such that
//!
//! ```text
//! x(q^M n + s) = sum_{l <= k <= u} c[s][k] * x(q^m n + k)     for n >= n0
//! ```
//!
//! together with explicit initial values covering at least one full block
//! `0 <= n < q^M * max(n0, 1)`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::{format_rational, Rational};
use num_traits::{Signed, Zero};

#[derive(Debug, Error)]
pub enum DefinitionError {
    #[error("offset too small: need q^m*n0 + l >= 0, got {qm}*{n0} + {l} < 0")]
    OffsetTooSmall { qm: i64, n0: i64, l: i64 },
    #[error("missing coefficient c[{s}][{k}]")]
    MissingCoefficient { s: u64, k: i64 },
    #[error("inconsistent initial values: x({index}) = {given} but the recurrence yields {computed}")]
    InconsistentInitialValues { index: u64, given: String, computed: String },
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("too few initial values: need at least {required}, got {got}")]
    TooFewInitialValues { required: usize, got: usize },
}

/// A validated q-recursive definition. Construct through [`QRecursiveDefinition::new`],
/// which enforces every structural invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QRecursiveDefinition {
    q: u32,
    exp_m_upper: u32,
    exp_m_lower: u32,
    shift_lower: i64,
    shift_upper: i64,
    offset: u64,
    /// Row `s` holds `c[s][l..=u]` in order.
    coeffs: Vec<Vec<Rational>>,
    /// Values of `x(0), x(1), ...`; length at least `q^M * max(n0, 1)`.
    initial_values: Vec<Rational>,
}

impl QRecursiveDefinition {
    /// Builds and validates a definition.
    ///
    /// `coeffs` maps `(s, k)` to `c[s][k]`; every pair with `0 <= s < q^M`,
    /// `l <= k <= u` must be present. `initial_values` may be longer than the
    /// required block; all supplied values reachable by the recurrence are
    /// cross-checked for consistency.
    pub fn new(
        q: u32,
        exp_upper: u32,
        exp_lower: u32,
        shift_lower: i64,
        shift_upper: i64,
        offset: u64,
        coeffs: &BTreeMap<(u64, i64), Rational>,
        initial_values: Vec<Rational>,
    ) -> Result<Self, DefinitionError> {
        if q < 2 {
            return Err(DefinitionError::BadShape(format!("q must be >= 2, got {q}")));
        }
        if exp_upper <= exp_lower {
            return Err(DefinitionError::BadShape(format!(
                "need M > m >= 0, got M = {exp_upper}, m = {exp_lower}"
            )));
        }
        if shift_lower > shift_upper {
            return Err(DefinitionError::BadShape(format!(
                "need l <= u, got l = {shift_lower}, u = {shift_upper}"
            )));
        }
        let qm = (q as i64).pow(exp_lower);
        if qm.checked_mul(offset as i64).map_or(true, |v| v + shift_lower < 0) {
            return Err(DefinitionError::OffsetTooSmall { qm, n0: offset as i64, l: shift_lower });
        }
        let qmm = (q as u64).pow(exp_upper);
        let mut rows = Vec::with_capacity(qmm as usize);
        for s in 0..qmm {
            let mut row = Vec::with_capacity((shift_upper - shift_lower + 1) as usize);
            for k in shift_lower..=shift_upper {
                match coeffs.get(&(s, k)) {
                    Some(c) => row.push(c.clone()),
                    None => return Err(DefinitionError::MissingCoefficient { s, k }),
                }
            }
            rows.push(row);
        }
        let required = (qmm * offset.max(1)) as usize;
        if initial_values.len() < required {
            return Err(DefinitionError::TooFewInitialValues { required, got: initial_values.len() });
        }
        let def = QRecursiveDefinition {
            q,
            exp_m_upper: exp_upper,
            exp_m_lower: exp_lower,
            shift_lower,
            shift_upper,
            offset,
            coeffs: rows,
            initial_values,
        };
        def.check_initial_consistency()?;
        Ok(def)
    }

    /// Every initial index that the recurrence also covers must agree with it.
    fn check_initial_consistency(&self) -> Result<(), DefinitionError> {
        let qmm = (self.q as u64).pow(self.exp_m_upper);
        let qm = (self.q as u64).pow(self.exp_m_lower);
        for index in (qmm * self.offset)..self.initial_values.len() as u64 {
            let n = index / qmm;
            if n < self.offset {
                continue;
            }
            let s = (index % qmm) as usize;
            let mut acc = Rational::zero();
            for (j, c) in self.coeffs[s].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let arg = qm as i64 * n as i64 + self.shift_lower + j as i64;
                let val = if arg < 0 {
                    Rational::zero()
                } else if (arg as u64) < self.initial_values.len() as u64 {
                    self.initial_values[arg as usize].clone()
                } else {
                    // Right-hand side escapes the supplied table; skip this index,
                    // the oracle defines it recursively.
                    continue;
                };
                acc += c * &val;
            }
            // Only check when the full right-hand side was available.
            let all_available = self.coeffs[s].iter().enumerate().all(|(j, c)| {
                let arg = qm as i64 * n as i64 + self.shift_lower + j as i64;
                c.is_zero() || arg < 0 || (arg as u64) < self.initial_values.len() as u64
            });
            if all_available && acc != self.initial_values[index as usize] {
                return Err(DefinitionError::InconsistentInitialValues {
                    index,
                    given: format_rational(&self.initial_values[index as usize]),
                    computed: format_rational(&acc),
                });
            }
        }
        Ok(())
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// The exponent `M` on the left-hand side.
    pub fn exp_upper(&self) -> u32 {
        self.exp_m_upper
    }

    /// The exponent `m` on the right-hand side.
    pub fn exp_lower(&self) -> u32 {
        self.exp_m_lower
    }

    pub fn shift_lower(&self) -> i64 {
        self.shift_lower
    }

    pub fn shift_upper(&self) -> i64 {
        self.shift_upper
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    /// `c[s][k]`; `k` is the actual shift, not a table index.
    pub fn coeff(&self, s: u64, k: i64) -> &Rational {
        &self.coeffs[s as usize][(k - self.shift_lower) as usize]
    }

    pub fn initial_values(&self) -> &[Rational] {
        &self.initial_values
    }

    pub fn q_pow_upper(&self) -> u64 {
        (self.q as u64).pow(self.exp_m_upper)
    }

    pub fn q_pow_lower(&self) -> u64 {
        (self.q as u64).pow(self.exp_m_lower)
    }

    /// True when the special-case construction applies:
    /// `M = m + 1`, `l = 0`, `u = q^m - 1`.
    pub fn is_special_case(&self) -> bool {
        self.exp_m_upper == self.exp_m_lower + 1
            && self.shift_lower == 0
            && self.shift_upper == self.q_pow_lower() as i64 - 1
    }

    /// Returns a copy with one initial value replaced; used by tests probing
    /// the consistency checker. The copy is *not* revalidated.
    pub fn with_initial_value_unchecked(&self, index: usize, value: Rational) -> Self {
        let mut d = self.clone();
        d.initial_values[index] = value;
        d
    }

    /// Re-runs full validation on the current data.
    pub fn revalidate(&self) -> Result<(), DefinitionError> {
        let qm = (self.q as i64).pow(self.exp_m_lower);
        if qm * self.offset as i64 + self.shift_lower < 0 {
            return Err(DefinitionError::OffsetTooSmall {
                qm,
                n0: self.offset as i64,
                l: self.shift_lower,
            });
        }
        self.check_initial_consistency()
    }

    /// Largest absolute coefficient, as f64; used for crude growth estimates.
    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .flatten()
            .map(|c| crate::linalg::rational_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }
}

/// Validates a definition built elsewhere (the spec-level operation; `new`
/// already performs the same checks).
pub fn validate_definition(def: &QRecursiveDefinition) -> Result<(), DefinitionError> {
    def.revalidate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn stern_coeffs() -> BTreeMap<(u64, i64), Rational> {
        let mut c = BTreeMap::new();
        c.insert((0, 0), rat(1));
        c.insert((0, 1), rat(0));
        c.insert((1, 0), rat(1));
        c.insert((1, 1), rat(1));
        c
    }

    #[test]
    fn stern_accepted() {
        let def = QRecursiveDefinition::new(2, 1, 0, 0, 1, 0, &stern_coeffs(), vec![rat(0), rat(1)]);
        assert!(def.is_ok());
    }

    #[test]
    fn offset_bound_enforced() {
        // l = -1, m = 0 forces n0 >= 1.
        let mut c = BTreeMap::new();
        for s in 0..2u64 {
            for k in -1..=0i64 {
                c.insert((s, k), rat(1));
            }
        }
        let err = QRecursiveDefinition::new(2, 1, 0, -1, 0, 0, &c, vec![rat(0), rat(1)]);
        assert!(matches!(err, Err(DefinitionError::OffsetTooSmall { .. })));
    }

    #[test]
    fn missing_coefficient_detected() {
        let mut c = stern_coeffs();
        c.remove(&(1, 1));
        let err = QRecursiveDefinition::new(2, 1, 0, 0, 1, 0, &c, vec![rat(0), rat(1)]);
        assert!(matches!(err, Err(DefinitionError::MissingCoefficient { s: 1, k: 1 })));
    }

    #[test]
    fn inconsistent_initial_values_detected() {
        // Supply one extra block: x(2) = d(2) = 1, x(3) = d(3) = 2; then break x(2).
        let vals = vec![rat(0), rat(1), rat(5), rat(2)];
        let err = QRecursiveDefinition::new(2, 1, 0, 0, 1, 0, &stern_coeffs(), vals);
        assert!(matches!(err, Err(DefinitionError::InconsistentInitialValues { index: 2, .. })));
    }
}
