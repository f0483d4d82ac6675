//! Solving mixed recurrence systems into q-recursive form.
//!
//! Input identities assert that a rational linear combination of subsequence
//! symbols `x(q^level n + residue)` vanishes from some start index on. The
//! solver lifts every identity through `n -> qn + r` until level `M`, then
//! eliminates all symbols that are neither targets `x(q^M n + s)` nor base
//! symbols `x(q^m n + k)`, leaving one row per target.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::definition::{DefinitionError, QRecursiveDefinition};
use crate::linalg::{rref, RatMat, Rational};

/// A vanishing linear combination of subsequence symbols, valid from `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceIdentity {
    /// `(coefficient, level, residue)` triples; the combination sums to zero.
    pub terms: Vec<(Rational, u32, i64)>,
    pub start: u64,
}

impl RecurrenceIdentity {
    /// Convenience constructor from integer data.
    pub fn from_i64(terms: &[(i64, u32, i64)], start: u64) -> Self {
        RecurrenceIdentity {
            terms: terms.iter().map(|&(c, j, d)| (crate::linalg::rat(c), j, d)).collect(),
            start,
        }
    }

    fn normalized(&self) -> Option<RecurrenceIdentity> {
        let mut map: BTreeMap<(u32, i64), Rational> = BTreeMap::new();
        for (c, j, d) in &self.terms {
            *map.entry((*j, *d)).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return None;
        }
        let lead = map.values().next().unwrap().clone();
        let terms = map
            .into_iter()
            .map(|((j, d), c)| (c / &lead, j, d))
            .collect();
        Some(RecurrenceIdentity { terms, start: self.start })
    }

    fn max_level(&self) -> u32 {
        self.terms.iter().map(|&(_, j, _)| j).max().unwrap_or(0)
    }

    /// Substitutes `n -> qn + r`, raising every term one level.
    fn lift(&self, q: u32, r: u32) -> RecurrenceIdentity {
        let terms = self
            .terms
            .iter()
            .map(|(c, j, d)| (c.clone(), j + 1, (q as i64).pow(*j) * r as i64 + d))
            .collect();
        // Valid when qn + r >= start, i.e. n >= ceil((start - r)/q).
        let start = (self.start as i64 - r as i64).div_ceil(&(q as i64)).max(0) as u64;
        RecurrenceIdentity { terms, start }
    }

    fn key(&self) -> String {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, j, d)| format!("{}*({j},{d})", crate::linalg::format_rational(c)))
            .collect();
        parts.sort();
        parts.join("+")
    }
}

#[derive(Debug, Error)]
pub enum DisentangleError {
    #[error("system does not determine targets {0:?}: not expressible in base symbols")]
    Underdetermined(Vec<u64>),
    #[error("inconsistent identity system: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Definition(#[from] DefinitionError),
}

/// Closure of the identities under substitution, capped at level `exp_upper`.
fn substitution_closure(
    identities: &[RecurrenceIdentity],
    q: u32,
    exp_upper: u32,
) -> Vec<RecurrenceIdentity> {
    let mut seen = BTreeSet::new();
    let mut out: Vec<RecurrenceIdentity> = Vec::new();
    let mut work: Vec<RecurrenceIdentity> =
        identities.iter().filter_map(RecurrenceIdentity::normalized).collect();
    while let Some(id) = work.pop() {
        let Some(id) = id.normalized() else { continue };
        if !seen.insert(id.key()) {
            continue;
        }
        if id.max_level() < exp_upper {
            for r in 0..q {
                work.push(id.lift(q, r));
            }
        }
        out.push(id);
    }
    out
}

/// Solves an identity system into a q-recursive definition with exponents
/// `(exp_upper, exp_lower)`. The caller supplies the initial values; the
/// offset is the largest start index surviving the closure (raised further
/// if the shift window demands it).
pub fn disentangle(
    identities: &[RecurrenceIdentity],
    q: u32,
    exp_upper: u32,
    exp_lower: u32,
    initial_values: Vec<Rational>,
) -> Result<QRecursiveDefinition, DisentangleError> {
    assert!(exp_upper > exp_lower);
    let closure = substitution_closure(identities, q, exp_upper);
    if closure.is_empty() {
        return Err(DisentangleError::Inconsistent("no nontrivial identities supplied".into()));
    }
    let q_upper = (q as u64).pow(exp_upper);

    // Column layout: eliminable symbols, then targets, then base symbols.
    let mut eliminable: BTreeSet<(u32, i64)> = BTreeSet::new();
    let mut base: BTreeSet<i64> = BTreeSet::new();
    for id in &closure {
        for &(_, j, d) in &id.terms {
            if j == exp_lower {
                base.insert(d);
            } else if j != exp_upper {
                eliminable.insert((j, d));
            } else if d < 0 || d >= q_upper as i64 {
                // A level-M symbol outside 0..q^M is not a target; eliminate it.
                eliminable.insert((j, d));
            }
        }
    }
    let elim_cols: Vec<(u32, i64)> = eliminable.into_iter().collect();
    let base_cols: Vec<i64> = base.into_iter().collect();
    let n_elim = elim_cols.len();
    let n_target = q_upper as usize;
    let total = n_elim + n_target + base_cols.len();

    let col_of = |j: u32, d: i64| -> usize {
        if j == exp_upper && (0..q_upper as i64).contains(&d) {
            n_elim + d as usize
        } else if j == exp_lower {
            n_elim + n_target + base_cols.binary_search(&d).unwrap()
        } else {
            elim_cols.binary_search(&(j, d)).unwrap()
        }
    };

    let mut m = RatMat::zeros(closure.len(), total);
    for (row, id) in closure.iter().enumerate() {
        for (c, j, d) in &id.terms {
            let col = if *j == exp_lower { col_of(exp_lower, *d) } else { col_of(*j, *d) };
            m[(row, col)] = m[(row, col)].clone() + c;
        }
    }
    let red = rref(&m);

    // Rows supported on base symbols alone would force relations among them;
    // the coefficient table would not be well-defined.
    for row in 0..red.pivots.len() {
        if red.pivots[row] >= n_elim + n_target {
            return Err(DisentangleError::Inconsistent(
                "identities force a linear relation among the base subsequences".into(),
            ));
        }
    }

    let mut table: BTreeMap<(u64, i64), Rational> = BTreeMap::new();
    let mut unsolved = Vec::new();
    for s in 0..q_upper {
        let col = n_elim + s as usize;
        let Some(row) = red.pivots.iter().position(|&p| p == col) else {
            unsolved.push(s);
            continue;
        };
        // The row reads target + (free columns) + (base columns) = 0; it only
        // yields a clean expression when no free non-base column survives.
        let mut clean = true;
        for c in 0..(n_elim + n_target) {
            if c != col && !red.mat[(row, c)].is_zero() {
                clean = false;
                break;
            }
        }
        if !clean {
            unsolved.push(s);
            continue;
        }
        for (bi, &k) in base_cols.iter().enumerate() {
            let c = -red.mat[(row, n_elim + n_target + bi)].clone();
            table.insert((s, k), c);
        }
    }
    if !unsolved.is_empty() {
        return Err(DisentangleError::Underdetermined(unsolved));
    }

    let (lo, hi) = if base_cols.is_empty() {
        (0, 0)
    } else {
        (*base_cols.first().unwrap(), *base_cols.last().unwrap())
    };
    for s in 0..q_upper {
        for k in lo..=hi {
            table.entry((s, k)).or_insert_with(Rational::zero);
        }
    }
    let q_lower = (q as i64).pow(exp_lower);
    let min_offset = if lo < 0 { (-lo).div_ceil(&q_lower).max(0) as u64 } else { 0 };
    let start_offset = closure.iter().map(|id| id.start).max().unwrap_or(0);
    let offset = start_offset.max(min_offset);

    Ok(QRecursiveDefinition::new(q, exp_upper, exp_lower, lo, hi, offset, &table, initial_values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::{rat, ratio};
    use crate::oracle::{Sequence, SequenceOracle};

    /// z(2n+1) = 3z(n) - z(2n); z(4n) = -z(n) + 2z(2n); z(4n+2) = 4z(n) - z(2n).
    fn pascal_identities() -> Vec<RecurrenceIdentity> {
        vec![
            RecurrenceIdentity::from_i64(&[(1, 1, 1), (-3, 0, 0), (1, 1, 0)], 0),
            RecurrenceIdentity::from_i64(&[(1, 2, 0), (1, 0, 0), (-2, 1, 0)], 0),
            RecurrenceIdentity::from_i64(&[(1, 2, 2), (-4, 0, 0), (1, 1, 0)], 0),
        ]
    }

    #[test]
    fn pascal_disentangles_to_catalog_coefficients() {
        let def = disentangle(
            &pascal_identities(),
            2,
            2,
            1,
            vec![rat(1), rat(2), rat(3), rat(3)],
        )
        .unwrap();
        let reference = catalog::pascal_z();
        assert_eq!(def.coeff(0, 0), &ratio(5, 3));
        assert_eq!(def.coeff(0, 1), &ratio(-1, 3));
        assert_eq!(def.coeff(1, 0), &ratio(4, 3));
        assert_eq!(def.coeff(1, 1), &ratio(1, 3));
        assert_eq!(def.coeff(2, 0), &ratio(1, 3));
        assert_eq!(def.coeff(2, 1), &ratio(4, 3));
        assert_eq!(def.coeff(3, 0), &ratio(-1, 3));
        assert_eq!(def.coeff(3, 1), &ratio(5, 3));
        assert_eq!(def.offset(), 0);
        assert_eq!(&def, reference.definition());
    }

    /// The six published unbordered-factor relations mixing levels 1, 2, 3.
    fn unbordered_identities() -> Vec<RecurrenceIdentity> {
        vec![
            RecurrenceIdentity::from_i64(&[(1, 2, 0), (-2, 1, 0)], 2),
            RecurrenceIdentity::from_i64(&[(1, 2, 1), (-1, 1, 1)], 0),
            RecurrenceIdentity::from_i64(&[(1, 3, 2), (-1, 1, 1), (-1, 2, 3)], 1),
            RecurrenceIdentity::from_i64(&[(1, 3, 3), (1, 1, 1), (-1, 2, 2)], 2),
            RecurrenceIdentity::from_i64(&[(1, 3, 6), (1, 1, 1), (-1, 2, 2), (-1, 2, 3)], 2),
            RecurrenceIdentity::from_i64(&[(1, 3, 7), (-2, 1, 1), (-1, 2, 3)], 3),
        ]
    }

    #[test]
    fn unbordered_disentangles_to_catalog_coefficients() {
        let reference = catalog::unbordered();
        let def = disentangle(
            &unbordered_identities(),
            2,
            3,
            2,
            reference.definition().initial_values().to_vec(),
        )
        .unwrap();
        assert_eq!(&def, reference.definition());
        assert_eq!(def.offset(), 3);
        // Spot-check two solved relations: f(8n) = 2 f(4n), f(8n+4) = 2 f(4n+2).
        assert_eq!(def.coeff(0, 0), &rat(2));
        assert_eq!(def.coeff(4, 2), &rat(2));
    }

    #[test]
    fn already_in_target_form_passes_through() {
        let identities = vec![
            RecurrenceIdentity::from_i64(&[(1, 1, 0), (-1, 0, 0)], 0),
            RecurrenceIdentity::from_i64(&[(1, 1, 1), (-1, 0, 0), (-1, 0, 1)], 0),
        ];
        let def = disentangle(&identities, 2, 1, 0, vec![rat(0), rat(1)]).unwrap();
        assert_eq!(&def, catalog::stern().definition());
    }

    #[test]
    fn underdetermined_reported() {
        // Only one of the four level-2 targets is constrained.
        let identities = vec![RecurrenceIdentity::from_i64(&[(1, 2, 0), (-1, 1, 0)], 0)];
        let err = disentangle(&identities, 2, 2, 1, vec![rat(0); 4]);
        match err {
            Err(DisentangleError::Underdetermined(targets)) => {
                assert!(targets.contains(&1) && targets.contains(&2) && targets.contains(&3));
            }
            other => panic!("expected Underdetermined, got {other:?}"),
        }
    }

    #[test]
    fn disentangled_oracle_round_trip() {
        let def = disentangle(
            &pascal_identities(),
            2,
            2,
            1,
            vec![rat(1), rat(2), rat(3), rat(3)],
        )
        .unwrap();
        let solved = SequenceOracle::new(def);
        let reference = catalog::pascal_z().oracle();
        for n in 0..=5000 {
            assert_eq!(solved.eval(n), reference.eval(n), "z({n})");
        }
    }
}
