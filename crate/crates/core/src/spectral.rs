//! Eigenvalue reports and joint-spectral-radius bounds.
//!
//! The characteristic polynomial is computed exactly; its square-free
//! factorization (Yun's algorithm over the rationals) separates root
//! multiplicities before any floating point enters. Numeric roots come from
//! the companion matrix of each square-free factor and are polished by
//! Newton steps against the exact coefficients.

use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{poly_eval_complex, rational_to_f64, RatMat, Rational};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("two eigenvalue clusters are only {gap:.3e} apart, closer than 10x the cluster tolerance {tol:.1e}")]
    ClusteringAmbiguous { gap: f64, tol: f64 },
    #[error("rank test ambiguous at eigenvalue {re}+{im}i: singular value {sigma:.3e} sits near the threshold {threshold:.3e}")]
    JordanRankAmbiguous { re: f64, im: f64, sigma: f64, threshold: f64 },
    #[error("matrix set is empty or dimensions differ")]
    DimensionMismatch,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
    pub algebraic_multiplicity: usize,
    /// Size of the largest Jordan block at this eigenvalue.
    pub jordan_size: usize,
}

impl Eigenvalue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn modulus(&self) -> f64 {
        self.value().norm()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    /// Exact characteristic polynomial, low degree first, rendered as strings.
    pub char_poly: Vec<String>,
    #[serde(skip)]
    pub char_poly_exact: Vec<Rational>,
    pub eigenvalues: Vec<Eigenvalue>,
}

impl SpectrumReport {
    pub fn dimension(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.algebraic_multiplicity).sum()
    }

    pub fn find(&self, value: Complex64, tol: f64) -> Option<&Eigenvalue> {
        self.eigenvalues.iter().find(|e| (e.value() - value).norm() <= tol)
    }

    /// Largest Jordan size among eigenvalues with modulus within `tol` of `radius`.
    pub fn max_jordan_on_circle(&self, radius: f64, tol: f64) -> usize {
        self.eigenvalues
            .iter()
            .filter(|e| (e.modulus() - radius).abs() <= tol)
            .map(|e| e.jordan_size)
            .max()
            .unwrap_or(0)
    }
}

// --- exact polynomial helpers -------------------------------------------------

fn poly_trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn poly_deriv(p: &[Rational]) -> Vec<Rational> {
    if p.len() <= 1 {
        return vec![Rational::zero()];
    }
    (1..p.len()).map(|i| &p[i] * crate::linalg::rat(i as i64)).collect()
}

fn poly_is_zero(p: &[Rational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Remainder and quotient of exact polynomial division.
fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    poly_trim(&mut rem);
    let mut bb = b.to_vec();
    poly_trim(&mut bb);
    assert!(!poly_is_zero(&bb), "polynomial division by zero");
    let db = bb.len() - 1;
    if rem.len() - 1 < db || poly_is_zero(&rem) {
        return (vec![Rational::zero()], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    let lead = bb[db].clone();
    for i in (db..rem.len()).rev() {
        let c = rem[i].clone() / &lead;
        if c.is_zero() {
            continue;
        }
        quot[i - db] = c.clone();
        for j in 0..=db {
            let v = rem[i - db + j].clone() - &c * &bb[j];
            rem[i - db + j] = v;
        }
    }
    poly_trim(&mut rem);
    poly_trim(&mut quot);
    (quot, rem)
}

fn poly_monic(p: &[Rational]) -> Vec<Rational> {
    let mut p = p.to_vec();
    poly_trim(&mut p);
    let lead = p.last().unwrap().clone();
    if !lead.is_one() && !lead.is_zero() {
        for c in &mut p {
            let v = c.clone() / &lead;
            *c = v;
        }
    }
    p
}

fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !poly_is_zero(&y) {
        let (_, r) = poly_divmod(&x, &y);
        x = y;
        y = r;
    }
    poly_monic(&x)
}

/// Square-free factorization (Yun): returns `(factor, multiplicity)` pairs
/// with each factor monic and square-free, and `p = prod factor^multiplicity`
/// up to the leading coefficient.
fn square_free_factors(p: &[Rational]) -> Vec<(Vec<Rational>, usize)> {
    let p = poly_monic(p);
    let dp = poly_deriv(&p);
    let g = poly_gcd(&p, &dp);
    if g.len() == 1 {
        return vec![(p, 1)];
    }
    let mut out = Vec::new();
    let (mut w, _) = poly_divmod(&p, &g);
    let (y, _) = poly_divmod(&dp, &g);
    let mut z: Vec<Rational> = sub_poly(&y, &poly_deriv(&w));
    let mut i = 1;
    while w.len() > 1 {
        let gi = poly_gcd(&w, &z);
        if gi.len() > 1 {
            out.push((gi.clone(), i));
        }
        let (w2, _) = poly_divmod(&w, &gi);
        let (y2, _) = poly_divmod(&z, &gi);
        w = w2;
        z = sub_poly(&y2, &poly_deriv(&w));
        i += 1;
    }
    out
}

fn sub_poly(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_trim(&mut out);
    out
}

/// Roots of a square-free monic polynomial: companion-matrix eigenvalues
/// polished by Newton iteration on the exact coefficients.
fn square_free_roots(p: &[Rational]) -> Vec<Complex64> {
    let deg = p.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![Complex64::new(-rational_to_f64(&p[0]), 0.0)];
    }
    let mut companion = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -rational_to_f64(&p[i]);
    }
    let raw = companion.complex_eigenvalues();
    let dp = poly_deriv(p);
    raw.iter()
        .map(|&z0| {
            let mut z = Complex64::new(z0.re, z0.im);
            for _ in 0..40 {
                let f = poly_eval_complex(p, z);
                let df = poly_eval_complex(&dp, z);
                if df.norm() == 0.0 {
                    break;
                }
                let step = f / df;
                z -= step;
                if step.norm() <= 1e-16 * z.norm().max(1.0) {
                    break;
                }
            }
            // Real-axis snap: conjugate-paired rounding noise.
            if z.im.abs() <= 1e-12 * z.norm().max(1.0) {
                z.im = 0.0;
            }
            z
        })
        .collect()
}

/// Exact characteristic polynomial plus clustered numeric eigenvalues with
/// Jordan-size estimates.
pub fn spectrum(c: &RatMat, cluster_tol: f64) -> Result<SpectrumReport, SpectralError> {
    let char_poly = c.char_poly();
    let mut roots: Vec<(Complex64, usize)> = Vec::new();
    for (factor, mult) in square_free_factors(&char_poly) {
        for z in square_free_roots(&factor) {
            roots.push((z, mult));
        }
    }
    // Cluster: roots from distinct factors are distinct algebraic numbers,
    // but numerically close pairs may still appear; merge within tolerance
    // and refuse to guess when the gap is merely near it.
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for (z, mult) in roots {
        if let Some((zc, mc)) = clusters.iter_mut().find(|(zc, _)| (*zc - z).norm() <= cluster_tol) {
            *zc = (*zc + z) / 2.0;
            *mc += mult;
        } else {
            clusters.push((z, mult));
        }
    }
    for i in 0..clusters.len() {
        for j in (i + 1)..clusters.len() {
            let gap = (clusters[i].0 - clusters[j].0).norm();
            if gap <= 10.0 * cluster_tol {
                return Err(SpectralError::ClusteringAmbiguous { gap, tol: cluster_tol });
            }
        }
    }

    let cf = c.to_f64();
    let scale = cf.amax().max(1.0);
    let mut eigenvalues = Vec::new();
    for (z, mult) in clusters {
        let jordan = if mult == 1 { 1 } else { jordan_size(&cf, z, mult, scale)? };
        eigenvalues.push(Eigenvalue { re: z.re, im: z.im, algebraic_multiplicity: mult, jordan_size: jordan });
    }
    eigenvalues.sort_by(|a, b| {
        b.modulus().partial_cmp(&a.modulus()).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(SpectrumReport {
        char_poly: char_poly.iter().map(crate::linalg::format_rational).collect(),
        char_poly_exact: char_poly,
        eigenvalues,
    })
}

/// Numeric nullity with an explicit ambiguity band around the threshold.
fn nullity(m: &DMatrix<Complex64>, threshold: f64, at: Complex64) -> Result<usize, SpectralError> {
    let svd = m.clone().svd(false, false);
    let mut count = 0;
    for &s in svd.singular_values.iter() {
        if s <= threshold {
            count += 1;
        } else if s <= 10.0 * threshold {
            return Err(SpectralError::JordanRankAmbiguous {
                re: at.re,
                im: at.im,
                sigma: s,
                threshold,
            });
        }
    }
    Ok(count)
}

fn jordan_size(cf: &DMatrix<f64>, lambda: Complex64, mult: usize, scale: f64) -> Result<usize, SpectralError> {
    let n = cf.nrows();
    let b = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
        let mut v = Complex::new(cf[(i, j)], 0.0);
        if i == j {
            v -= lambda;
        }
        v
    });
    let base = (b.norm() / (n as f64).sqrt()).max(scale);
    let mut power = b.clone();
    let mut prev = nullity(&power, 1e-8 * base, lambda)?;
    for j in 2..=mult + 1 {
        power = &power * &b;
        let next = nullity(&power, 1e-8 * base.powi(j as i32), lambda)?;
        if next == prev || prev >= mult {
            return Ok(j - 1);
        }
        prev = next;
    }
    Ok(mult)
}

// --- joint spectral radius ----------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NormKind {
    RowSum,
    ColumnSum,
    Spectral,
}

/// Whether products of growing length stay within `O(rho^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GrowthStatus {
    /// Certified by a finiteness witness (or decaying powers).
    Certified,
    /// A growth witness was found: norms of powers outgrow `rho^k`.
    Violated,
    /// Neither certificate nor witness known.
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct JsrBounds {
    pub lower: f64,
    pub upper: f64,
    /// Maximum product length explored.
    pub depth: usize,
    /// Product length at which the reported upper bound was attained.
    pub upper_attained_at: usize,
    pub norm: NormKind,
    /// Diagonal scaling applied to the norm, if any.
    pub scaling: Option<Vec<f64>>,
    /// Word (digit string) whose spectral radius meets the upper bound,
    /// certifying that the bounds bracket the joint spectral radius.
    pub finiteness_certificate: Option<Vec<u32>>,
    pub growth: GrowthStatus,
}

fn scaled(m: &RatMat, scaling: Option<&[Rational]>) -> RatMat {
    match scaling {
        None => m.clone(),
        Some(t) => {
            // T^{-1} M T for diagonal T.
            let mut out = m.clone();
            for i in 0..m.nrows {
                for j in 0..m.ncols {
                    let v = m[(i, j)].clone() * &t[j] / &t[i];
                    out[(i, j)] = v;
                }
            }
            out
        }
    }
}

fn matrix_norm(m: &RatMat, kind: NormKind) -> f64 {
    match kind {
        NormKind::RowSum => (0..m.nrows)
            .map(|i| m.row(i).iter().map(|x| rational_to_f64(&x.abs())).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::ColumnSum => (0..m.ncols)
            .map(|j| (0..m.nrows).map(|i| rational_to_f64(&m[(i, j)].abs())).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::Spectral => {
            let svd = m.to_f64().svd(false, false);
            svd.singular_values[0]
        }
    }
}

fn spectral_radius_f64(m: &DMatrix<f64>) -> f64 {
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Norm-based upper and spectral-radius lower bounds on the joint spectral
/// radius of a matrix set, sweeping all products up to length `k_max`.
pub fn jsr_bounds(
    mats: &[RatMat],
    k_max: usize,
    norm: NormKind,
    scaling: Option<&[Rational]>,
    tol: f64,
) -> Result<JsrBounds, SpectralError> {
    if mats.is_empty() || mats.iter().any(|m| m.nrows != m.ncols || m.nrows != mats[0].nrows) {
        return Err(SpectralError::DimensionMismatch);
    }
    if let Some(t) = scaling {
        if t.len() != mats[0].nrows || t.iter().any(|x| x.is_zero()) {
            return Err(SpectralError::DimensionMismatch);
        }
    }
    let scaling_f64 = scaling.map(|t| t.iter().map(rational_to_f64).collect::<Vec<_>>());

    // A single matrix is its own certificate: the joint spectral radius of a
    // singleton set equals the spectral radius.
    if mats.len() == 1 {
        let rho = spectral_radius_f64(&mats[0].to_f64());
        let growth = single_matrix_growth(&mats[0], rho);
        return Ok(JsrBounds {
            lower: rho,
            upper: rho,
            depth: k_max,
            upper_attained_at: 1,
            norm,
            scaling: scaling_f64,
            finiteness_certificate: Some(vec![0]),
            growth,
        });
    }

    let mut upper = f64::INFINITY;
    let mut upper_at = 1;
    let mut lower: f64 = 0.0;
    let mut best_word: Vec<u32> = Vec::new();
    // Products of the current length, with the words that generate them;
    // duplicates by value are pruned.
    let mut level: Vec<(Vec<u32>, RatMat)> = vec![(Vec::new(), RatMat::identity(mats[0].nrows))];
    for k in 1..=k_max {
        let mut next: Vec<(Vec<u32>, RatMat)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (word, prod) in &level {
            for (r, m) in mats.iter().enumerate() {
                let mut w = word.clone();
                w.push(r as u32);
                let p = prod.mul(m);
                let key = format!("{p:?}");
                if seen.insert(key) {
                    next.push((w, p));
                }
            }
        }
        let mut level_max: f64 = 0.0;
        for (word, prod) in &next {
            let nv = matrix_norm(&scaled(prod, scaling), norm);
            level_max = level_max.max(nv);
            let rho = spectral_radius_f64(&prod.to_f64()).powf(1.0 / k as f64);
            if rho > lower {
                lower = rho;
                best_word = word.clone();
            }
        }
        let candidate = level_max.powf(1.0 / k as f64);
        if candidate < upper {
            upper = candidate;
            upper_at = k;
        }
        level = next;
    }

    let certified = upper - lower <= tol * upper.max(1.0);
    Ok(JsrBounds {
        lower,
        upper,
        depth: k_max,
        upper_attained_at: upper_at,
        norm,
        scaling: scaling_f64,
        finiteness_certificate: if certified { Some(best_word) } else { None },
        growth: if certified { GrowthStatus::Certified } else { GrowthStatus::Unknown },
    })
}

/// Growth check for a singleton set: compares `||A^k|| / rho^k` across
/// doubling powers. Linear growth (a nontrivial Jordan block on the spectral
/// circle) shows up as a steadily increasing ratio.
fn single_matrix_growth(m: &RatMat, rho: f64) -> GrowthStatus {
    if rho == 0.0 {
        return GrowthStatus::Certified;
    }
    let mf = m.to_f64();
    let mut power = mf.clone();
    let mut previty: Option<f64> = None;
    let mut k = 1usize;
    let mut growing = false;
    for _ in 0..6 {
        power = &power * &power;
        k *= 2;
        let ratio = power.norm() / rho.powi(k as i32);
        if let Some(prev) = previty {
            if ratio > prev * 1.5 {
                growing = true;
            }
        }
        previty = Some(ratio);
    }
    if growing {
        GrowthStatus::Violated
    } else {
        GrowthStatus::Certified
    }
}

// --- structural shortcuts -------------------------------------------------------

/// Spectrum of the offset-corrected matrix sum from the inner one:
/// the correction adjoins the eigenvalue 1 (offset 1) or {0, 1} (offset >= 2);
/// Jordan sizes away from {0, 1} carry over.
pub fn spectrum_offset_shortcut(inner: &SpectrumReport, offset: u64) -> SpectrumReport {
    assert!(offset >= 1);
    let mut eigenvalues = inner.eigenvalues.clone();
    let mut bump = |value: Complex64, extra: usize| {
        if let Some(e) = eigenvalues.iter_mut().find(|e| (e.value() - value).norm() <= 1e-12) {
            e.algebraic_multiplicity += extra;
        } else {
            eigenvalues.push(Eigenvalue {
                re: value.re,
                im: value.im,
                algebraic_multiplicity: extra,
                jordan_size: 1,
            });
        }
    };
    bump(Complex64::new(1.0, 0.0), 1);
    if offset >= 2 {
        bump(Complex64::new(0.0, 0.0), offset as usize - 1);
    }
    // char poly gains x^{offset-1} (x - 1).
    let mut poly = inner.char_poly_exact.clone();
    poly = poly_mul(&poly, &[crate::linalg::rat(-1), crate::linalg::rat(1)]);
    for _ in 1..offset {
        poly.insert(0, Rational::zero());
    }
    eigenvalues.sort_by(|a, b| b.modulus().partial_cmp(&a.modulus()).unwrap());
    SpectrumReport {
        char_poly: poly.iter().map(crate::linalg::format_rational).collect(),
        char_poly_exact: poly,
        eigenvalues,
    }
}

/// Spectrum of the special-case matrix sum from the block sum
/// `B_0 + ... + B_{q-1}`: only extra zeros are adjoined.
pub fn spectrum_special_shortcut(block_sum_spectrum: &SpectrumReport, extra_zeros: usize) -> SpectrumReport {
    if extra_zeros == 0 {
        return block_sum_spectrum.clone();
    }
    let mut eigenvalues = block_sum_spectrum.eigenvalues.clone();
    if let Some(e) = eigenvalues.iter_mut().find(|e| e.value().norm() <= 1e-12) {
        e.algebraic_multiplicity += extra_zeros;
    } else {
        eigenvalues.push(Eigenvalue { re: 0.0, im: 0.0, algebraic_multiplicity: extra_zeros, jordan_size: 1 });
    }
    let mut poly = block_sum_spectrum.char_poly_exact.clone();
    for _ in 0..extra_zeros {
        poly.insert(0, Rational::zero());
    }
    eigenvalues.sort_by(|a, b| b.modulus().partial_cmp(&a.modulus()).unwrap());
    SpectrumReport {
        char_poly: poly.iter().map(crate::linalg::format_rational).collect(),
        char_poly_exact: poly,
        eigenvalues,
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// JSR of the offset-corrected matrix set from the inner bounds:
/// `rho(corrected) = max(rho(inner), 1)`.
pub fn jsr_offset_shortcut(inner: &JsrBounds, tol: f64) -> JsrBounds {
    let lower = inner.lower.max(1.0);
    let upper = inner.upper.max(1.0);
    let keeps_certificate = inner.finiteness_certificate.is_some() && inner.lower >= 1.0 - tol;
    JsrBounds {
        lower,
        upper,
        depth: inner.depth,
        upper_attained_at: inner.upper_attained_at,
        norm: inner.norm,
        scaling: inner.scaling.clone(),
        finiteness_certificate: if keeps_certificate {
            inner.finiteness_certificate.clone()
        } else {
            None
        },
        growth: if inner.lower > 1.0 + tol && inner.growth == GrowthStatus::Certified {
            GrowthStatus::Certified
        } else if inner.growth == GrowthStatus::Violated {
            GrowthStatus::Violated
        } else {
            GrowthStatus::Unknown
        },
    }
}

/// JSR of the special-case digit matrices from the block-set bounds:
/// `rho(A) = rho(B)`, with simple growth inherited for `rho(B) > 0`.
pub fn jsr_special_shortcut(inner: &JsrBounds, tol: f64) -> JsrBounds {
    let mut out = inner.clone();
    out.growth = if inner.lower > tol && inner.growth == GrowthStatus::Certified {
        GrowthStatus::Certified
    } else if inner.growth == GrowthStatus::Violated {
        GrowthStatus::Violated
    } else {
        GrowthStatus::Unknown
    };
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::{rat, ratio, RatMat};

    #[test]
    fn stern_spectrum() {
        let c = catalog::stern_minimal_rep().matrix_sum();
        let report = spectrum(&c, 1e-9).unwrap();
        let mut values: Vec<f64> = report.eigenvalues.iter().map(|e| e.re).collect();
        values.sort_by(f64::total_cmp);
        assert!((values[0] - 1.0).abs() < 1e-12 && (values[1] - 3.0).abs() < 1e-12);
        assert!(report.eigenvalues.iter().all(|e| e.jordan_size == 1));
    }

    #[test]
    fn identity_spectrum_has_trivial_jordan() {
        let report = spectrum(&RatMat::identity(3), 1e-9).unwrap();
        assert_eq!(report.eigenvalues.len(), 1);
        assert_eq!(report.eigenvalues[0].algebraic_multiplicity, 3);
        assert_eq!(report.eigenvalues[0].jordan_size, 1);
    }

    #[test]
    fn jordan_block_detected() {
        // [[1,1],[0,1]] has a single Jordan block of size 2 at 1.
        let m = RatMat::from_i64(2, 2, &[1, 1, 0, 1]);
        let report = spectrum(&m, 1e-9).unwrap();
        assert_eq!(report.eigenvalues[0].algebraic_multiplicity, 2);
        assert_eq!(report.eigenvalues[0].jordan_size, 2);
    }

    #[test]
    fn root_fidelity() {
        let c = catalog::unbordered();
        let blocks = crate::builder::special_blocks(c.definition()).unwrap();
        let bsum = RatMat::sum(&blocks);
        let report = spectrum(&bsum, 1e-9).unwrap();
        // Rebuild the polynomial from the numeric roots and compare.
        let mut poly = vec![num_complex::Complex64::new(1.0, 0.0)];
        for e in &report.eigenvalues {
            for _ in 0..e.algebraic_multiplicity {
                let mut next = vec![num_complex::Complex64::new(0.0, 0.0); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * e.value();
                }
                poly = next;
            }
        }
        for (i, c) in report.char_poly_exact.iter().enumerate() {
            let approx = poly[i].re;
            let exact = rational_to_f64(c);
            assert!((approx - exact).abs() <= 1e-8 * exact.abs().max(1.0), "coefficient {i}");
        }
    }

    #[test]
    fn stern_jsr_is_golden_ratio() {
        let rep = catalog::stern_minimal_rep();
        let bounds = jsr_bounds(&rep.matrices, 2, NormKind::Spectral, None, 1e-9).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((bounds.upper - phi).abs() < 1e-9, "upper {}", bounds.upper);
        assert!((bounds.lower - phi).abs() < 1e-9, "lower {}", bounds.lower);
        assert_eq!(bounds.upper_attained_at, 1);
        assert!(bounds.finiteness_certificate.is_some());
        assert_eq!(bounds.growth, GrowthStatus::Certified);
    }

    #[test]
    fn unbordered_jsr_with_diagonal_scaling() {
        let blocks = crate::builder::special_blocks(catalog::unbordered().definition()).unwrap();
        let t = vec![rat(2), ratio(1, 2), rat(1), rat(1)];
        let bounds = jsr_bounds(&blocks, 2, NormKind::RowSum, Some(&t), 1e-9).unwrap();
        assert!((bounds.upper - 2.0).abs() < 1e-12);
        assert!((bounds.lower - 2.0).abs() < 1e-12);
        assert_eq!(bounds.upper_attained_at, 2);
        assert_eq!(bounds.finiteness_certificate.as_deref(), Some(&[0u32, 0][..]));
    }

    #[test]
    fn linear_growth_flagged() {
        let m = RatMat::from_i64(2, 2, &[1, 1, 0, 1]);
        let bounds = jsr_bounds(&[m], 2, NormKind::RowSum, None, 1e-9).unwrap();
        assert!((bounds.lower - 1.0).abs() < 1e-12);
        assert!((bounds.upper - 1.0).abs() < 1e-12);
        assert_eq!(bounds.growth, GrowthStatus::Violated);
    }

    #[test]
    fn offset_shortcut_adds_zero_and_one() {
        let blocks = crate::builder::special_blocks(catalog::unbordered().definition()).unwrap();
        let bsum = RatMat::sum(&blocks);
        let inner = spectrum(&bsum, 1e-9).unwrap();
        let with_zero = spectrum_special_shortcut(&inner, 3);
        let full = spectrum_offset_shortcut(&with_zero, 3);
        let sqrt3 = 3f64.sqrt();
        for target in [1.0 - sqrt3, 0.0, 1.0, 2.0, 1.0 + sqrt3] {
            assert!(
                full.find(num_complex::Complex64::new(target, 0.0), 1e-9).is_some(),
                "missing eigenvalue {target}"
            );
        }
        assert_eq!(full.dimension(), 10);
    }

    #[test]
    fn offset_shortcut_on_scalar() {
        let inner = spectrum(&RatMat::from_i64(1, 1, &[3]), 1e-9).unwrap();
        let out = spectrum_offset_shortcut(&inner, 1);
        assert!(out.find(num_complex::Complex64::new(3.0, 0.0), 1e-12).is_some());
        assert!(out.find(num_complex::Complex64::new(1.0, 0.0), 1e-12).is_some());
    }

    #[test]
    fn jsr_shortcut_clamps_at_one() {
        let inner = JsrBounds {
            lower: 0.5,
            upper: 0.5,
            depth: 1,
            upper_attained_at: 1,
            norm: NormKind::RowSum,
            scaling: None,
            finiteness_certificate: Some(vec![0]),
            growth: GrowthStatus::Certified,
        };
        let out = jsr_offset_shortcut(&inner, 1e-9);
        assert_eq!((out.lower, out.upper), (1.0, 1.0));
        assert!(out.finiteness_certificate.is_none());
    }
}
