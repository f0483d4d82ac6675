//! Exact rational vectors and matrices.
//!
//! Everything in this module computes over `BigRational`, so ranks, kernels,
//! characteristic polynomials and row reductions are exact. Conversions to
//! floating point live at the very end and are only used by the numeric
//! layers (spectral analysis, Dirichlet series evaluation).

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `p/q`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Renders a rational as `p` or `p/q`, never as a decimal.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q`. Decimal notation is rejected on purpose: definition
/// files carry exact data only.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.contains('.') {
        return Err(format!("decimal literal `{s}` not allowed; use p/q"));
    }
    match s.split_once('/') {
        None => s
            .parse::<BigInt>()
            .map(Rational::from_integer)
            .map_err(|e| format!("bad integer `{s}`: {e}")),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().map_err(|e| format!("bad numerator `{p}`: {e}"))?;
            let q = q.trim().parse::<BigInt>().map_err(|e| format!("bad denominator `{q}`: {e}"))?;
            if q.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(Rational::new(p, q))
        }
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    // `to_f64` on huge numerators can overflow to NaN; fall back to a
    // quotient of parts scaled into range.
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Dense rational matrix in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMat {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<Rational>,
}

impl std::fmt::Debug for RatMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RatMat {}x{} [", self.nrows, self.ncols)?;
        for i in 0..self.nrows {
            let row: Vec<String> = (0..self.ncols).map(|j| format_rational(&self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.ncols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.ncols + j]
    }
}

impl RatMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        RatMat { nrows, ncols, data: vec![Rational::zero(); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        RatMat { nrows, ncols, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix of integers, row major. Test and catalog helper.
    pub fn from_i64(nrows: usize, ncols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), nrows * ncols);
        RatMat { nrows, ncols, data: entries.iter().map(|&e| rat(e)).collect() }
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Rational] {
        &mut self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Rational) -> RatMat {
        let mut m = self.clone();
        for x in &mut m.data {
            *x *= c;
        }
        m
    }

    pub fn add(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(&other.data) {
            *x += y;
        }
        m
    }

    pub fn sub(&self, other: &RatMat) -> RatMat {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut m = self.clone();
        for (x, y) in m.data.iter_mut().zip(&other.data) {
            *x -= y;
        }
        m
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch in matrix product");
        let mut m = RatMat::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        m[(i, j)] += prod;
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.ncols, v.len());
        (0..self.nrows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// `v^T * self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.nrows, v.len());
        let mut out = vec![Rational::zero(); self.ncols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..self.ncols {
                let a = &self[(i, j)];
                if !a.is_zero() {
                    out[j] += x * a;
                }
            }
        }
        out
    }

    /// Sum of a nonempty slice of equally sized matrices.
    pub fn sum(mats: &[RatMat]) -> RatMat {
        let mut acc = mats[0].clone();
        for m in &mats[1..] {
            acc = acc.add(m);
        }
        acc
    }

    /// Copies `block` into `self` with its upper-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &RatMat) {
        assert!(r0 + block.nrows <= self.nrows && c0 + block.ncols <= self.ncols);
        for i in 0..block.nrows {
            for j in 0..block.ncols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.nrows, self.ncols, |i, j| rational_to_f64(&self[(i, j)]))
    }

    /// Exact characteristic polynomial coefficients by the Faddeev–LeVerrier
    /// recurrence, returned as `[c_0, ..., c_{n-1}, 1]` for
    /// `x^n + c_{n-1} x^{n-1} + ... + c_0`.
    pub fn char_poly(&self) -> Vec<Rational> {
        assert_eq!(self.nrows, self.ncols, "characteristic polynomial of a non-square matrix");
        let n = self.nrows;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut m = RatMat::identity(n);
        for k in 1..=n {
            let am = self.mul(&m);
            let mut tr = Rational::zero();
            for i in 0..n {
                tr += &am[(i, i)];
            }
            let c = -tr / rat(k as i64);
            m = am;
            for i in 0..n {
                m[(i, i)] += &c;
            }
            coeffs[n - k] = c;
        }
        coeffs
    }
}

/// Result of an exact row reduction.
pub struct Rref {
    pub mat: RatMat,
    /// Column index of the pivot in each nonzero row.
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form with full pivoting on the first nonzero entry
/// per column, exact over the rationals.
pub fn rref(m: &RatMat) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.ncols {
        if r == a.nrows {
            break;
        }
        // Prefer a pivot with small numerator/denominator to keep entries tame.
        let mut pivot_row = None;
        let mut best: Option<usize> = None;
        for i in r..a.nrows {
            if !a[(i, c)].is_zero() {
                let size = a[(i, c)].numer().bits() as usize + a[(i, c)].denom().bits() as usize;
                if best.map_or(true, |b| size < b) {
                    best = Some(size);
                    pivot_row = Some(i);
                }
            }
        }
        let Some(p) = pivot_row else { continue };
        if p != r {
            for j in 0..a.ncols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = a[(r, c)].clone();
        for j in c..a.ncols {
            let v = a[(r, j)].clone() / &inv;
            a[(r, j)] = v;
        }
        for i in 0..a.nrows {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].clone();
                for j in c..a.ncols {
                    let v = a[(i, j)].clone() - &f * &a[(r, j)];
                    a[(i, j)] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { mat: a, pivots }
}

pub fn rank(m: &RatMat) -> usize {
    rref(m).pivots.len()
}

/// Basis of the right kernel `{x : m x = 0}`, one vector per free column.
pub fn kernel_basis(m: &RatMat) -> Vec<Vec<Rational>> {
    let red = rref(m);
    let pivot_cols: Vec<usize> = red.pivots.clone();
    let mut basis = Vec::new();
    for free in 0..m.ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); m.ncols];
        v[free] = Rational::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -red.mat[(row, free)].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `a x = b` exactly. Returns `None` when the system is inconsistent;
/// free variables are set to zero.
pub fn solve(a: &RatMat, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.nrows, b.len());
    let mut aug = RatMat::zeros(a.nrows, a.ncols + 1);
    aug.set_block(0, 0, a);
    for i in 0..a.nrows {
        aug[(i, a.ncols)] = b[i].clone();
    }
    let red = rref(&aug);
    if red.pivots.contains(&a.ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); a.ncols];
    for (row, &pc) in red.pivots.iter().enumerate() {
        x[pc] = red.mat[(row, a.ncols)].clone();
    }
    Some(x)
}

/// Maintains an exact row-space basis incrementally; used by the minimizer
/// and the disentangler.
pub struct RowSpace {
    ncols: usize,
    /// Rows in reduced echelon form.
    echelon: Vec<Vec<Rational>>,
    /// Pivot column of each echelon row.
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(ncols: usize) -> Self {
        RowSpace { ncols, echelon: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.echelon.len()
    }

    /// Reduces `v` against the basis; returns the residual.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut w = v.to_vec();
        for (row, &p) in self.echelon.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for (wi, ri) in w.iter_mut().zip(row) {
                    if !ri.is_zero() {
                        *wi -= &f * ri;
                    }
                }
            }
        }
        w
    }

    /// Inserts `v` if independent of the current basis. Returns true when the
    /// dimension grew.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ncols);
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].clone();
        for x in &mut w {
            let v = x.clone() / &inv;
            *x = v;
        }
        // Back-substitute into existing rows to keep the form reduced.
        for (row, _) in self.echelon.iter_mut().zip(&self.pivots) {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (ri, wi) in row.iter_mut().zip(&w) {
                    if !wi.is_zero() {
                        *ri -= &f * wi;
                    }
                }
            }
        }
        let at = self.pivots.iter().position(|&q| q > p).unwrap_or(self.pivots.len());
        self.pivots.insert(at, p);
        self.echelon.insert(at, w);
        true
    }

    /// Coordinates of `v` in the basis, or `None` if `v` lies outside the span.
    pub fn coordinates(&self, v: &[Rational], original: &[Vec<Rational>]) -> Option<Vec<Rational>> {
        // Solve against the *original* (insertion-order) basis vectors.
        let mut m = RatMat::zeros(self.ncols, original.len());
        for (j, b) in original.iter().enumerate() {
            for i in 0..self.ncols {
                m[(i, j)] = b[i].clone();
            }
        }
        let resid = self.reduce(v);
        if resid.iter().any(|x| !x.is_zero()) {
            return None;
        }
        solve(&m, v)
    }
}

/// Evaluates a polynomial with rational coefficients `[c_0, ..., c_n]` at a
/// complex point via Horner's rule.
pub fn poly_eval_complex(coeffs: &[Rational], z: num_complex::Complex64) -> num_complex::Complex64 {
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + num_complex::Complex64::new(rational_to_f64(c), 0.0);
    }
    acc
}

pub fn abs_rational(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_kernel() {
        // x + y + z = 0, x + 2y + 3z = 0 has kernel spanned by (1, -2, 1).
        let m = RatMat::from_i64(2, 3, &[1, 1, 1, 1, 2, 3]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn char_poly_of_stern_c() {
        let c = RatMat::from_i64(2, 2, &[2, 1, 1, 2]);
        // (x-1)(x-3) = x^2 - 4x + 3
        assert_eq!(c.char_poly(), vec![rat(3), rat(-4), rat(1)]);
    }

    #[test]
    fn solve_exact() {
        let a = RatMat::from_i64(2, 2, &[2, 0, 1, 3]);
        let x = solve(&a, &[rat(4), rat(11)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(3)]);
    }

    #[test]
    fn parse_rejects_decimals() {
        assert!(parse_rational("1.5").is_err());
        assert_eq!(parse_rational("-5/3").unwrap(), ratio(-5, 3));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
    }

    #[test]
    fn rowspace_tracks_rank() {
        let mut rs = RowSpace::new(3);
        assert!(rs.insert(&[rat(1), rat(0), rat(0)]));
        assert!(rs.insert(&[rat(1), rat(1), rat(0)]));
        assert!(!rs.insert(&[rat(3), rat(2), rat(0)]));
        assert_eq!(rs.dim(), 2);
    }
}
