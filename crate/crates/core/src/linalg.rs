//! Dense complex linear algebra for small matrices.
//!
//! Everything here is sized for d <= ~16: matrices are stored row-major in a
//! flat `Vec`, products are the textbook triple loop and the Hermitian
//! eigensolver is cyclic Jacobi.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::su_basis::GellMannBasis;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionTooSmall { min: 1, got: 0 });
        }
        if data.len() != dim * dim {
            return Err(Error::Shape { rows: data.len() / dim, dim });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: pos / dim, col: pos % dim });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from separate real and imaginary row arrays.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let dim = re.len();
        if im.len() != dim {
            return Err(Error::Shape { rows: im.len(), dim });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (r, (re_row, im_row)) in re.iter().zip(im).enumerate() {
            if re_row.len() != dim || im_row.len() != dim {
                return Err(Error::Parse(format!(
                    "row {r} has {} real and {} imaginary entries, expected {dim}",
                    re_row.len(),
                    im_row.len()
                )));
            }
            data.extend(re_row.iter().zip(im_row).map(|(&a, &b)| Complex64::new(a, b)));
        }
        Self::new(dim, data)
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |r, c| {
            if r == c {
                Complex64::new(diag[r], 0.0)
            } else {
                ZERO
            }
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn real_part(&self) -> Vec<Vec<f64>> {
        self.rows().map(|row| row.iter().map(|z| z.re).collect()).collect()
    }

    pub fn imag_part(&self) -> Vec<Vec<f64>> {
        self.rows().map(|row| row.iter().map(|z| z.im).collect()).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self.get(k, k)).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on different dimensions");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// max |A_jk - conj(A_kj)| together with the offending position.
    pub fn hermiticity_residual(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for r in 0..self.dim {
            for c in r..self.dim {
                let res = (self.get(r, c) - self.get(c, r).conj()).norm();
                if res > worst.0 {
                    worst = (res, r, c);
                }
            }
        }
        worst
    }

    /// max |(A^dag A - I)_jk|.
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint().matmul(self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul on different dimensions");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out[r * n..(r + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    /// Trace of `self * other` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim, "trace_product on different dimensions");
        let n = self.dim;
        let mut acc = ZERO;
        for r in 0..n {
            for k in 0..n {
                acc += self.data[r * n + k] * other.data[k * n + r];
            }
        }
        acc
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .unwrap_or(col);
            if a[pivot * n + col] == ZERO {
                return ZERO;
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                if factor == ZERO {
                    continue;
                }
                for k in col..n {
                    let v = a[col * n + k];
                    a[r * n + k] -= factor * v;
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.data[row * self.dim + col]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A complex matrix that is Hermitian up to the configured residual.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, Tolerances::default().hermiticity)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let (residual, row, col) = matrix.hermiticity_residual();
        if residual > tol {
            return Err(Error::NotHermitian { row, col, residual });
        }
        Ok(Self(matrix))
    }

    /// Projects onto the Hermitian part, (A + A^dag)/2. The result is exactly
    /// Hermitian: the lower triangle is the conjugate of the upper one.
    pub fn hermitize(matrix: &ComplexMatrix) -> Self {
        let n = matrix.dim();
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            out.set(r, r, Complex64::new(matrix.get(r, r).re, 0.0));
            for c in r + 1..n {
                let v = (matrix.get(r, c) + matrix.get(c, r).conj()) * 0.5;
                out.set(r, c, v);
                out.set(c, r, v.conj());
            }
        }
        Self(out)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_real_diagonal(diag))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0.get(row, col)
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Returns H - (Tr H / d) I and the removed shift Tr H / d.
    pub fn traceless_part(&self) -> (HermitianMatrix, f64) {
        let shift = self.trace() / self.dim() as f64;
        let mut m = self.0.clone();
        for k in 0..self.dim() {
            let v = m.get(k, k) - shift;
            m.set(k, k, Complex64::new(v.re, 0.0));
        }
        (Self(m), shift)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.scale(Complex64::new(factor, 0.0)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }
}

/// A complex matrix with U^dag U = I up to the configured residual.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, Tolerances::default().unitarity)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let residual = matrix.unitarity_residual();
        if residual > tol {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self(matrix))
    }

    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        Self(matrix)
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0.matmul(&other.0))
    }
}

/// Eigen-decomposition H = V diag(eigenvalues) V^dag.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column k belongs to `eigenvalues[k]`.
    pub eigenvectors: UnitaryMatrix,
}

impl EigenSystem {
    /// V f(Λ) V^dag for a scalar function applied to the spectrum.
    pub fn apply(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let v = self.eigenvectors.as_matrix();
        let n = v.dim();
        let values: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |r, c| {
            (0..n).map(|k| v.get(r, k) * values[k] * v.get(c, k).conj()).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|l| Complex64::new(l, 0.0))
    }

    /// Largest |eigenvalue|, i.e. the spectral norm.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, l| m.max(l.abs()))
    }
}

pub fn hermitian_eigensystem(h: &HermitianMatrix) -> Result<EigenSystem> {
    hermitian_eigensystem_with(h, &Tolerances::default())
}

/// Cyclic Jacobi with complex rotations.
///
/// Each rotation first removes the phase of the pivot a_pq and then applies
/// the classical real rotation that annihilates it.
pub fn hermitian_eigensystem_with(h: &HermitianMatrix, tol: &Tolerances) -> Result<EigenSystem> {
    let n = h.dim();
    let mut a = HermitianMatrix::hermitize(h.as_matrix()).into_matrix();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = tol.jacobi_rel * scale;

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    s += a.get(r, c).norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < tol.jacobi_max_sweeps {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let g = a.get(p, q);
                let g_abs = g.norm();
                if g_abs == 0.0 {
                    continue;
                }
                let phase = g / g_abs;
                let alpha = a.get(p, p).re;
                let beta = a.get(q, q).re;
                let theta = (beta - alpha) / (2.0 * g_abs);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J restricted to the (p, q) plane, columns are the new basis vectors.
                let j_pp = Complex64::new(c, 0.0);
                let j_pq = Complex64::new(s, 0.0);
                let j_qp = -phase.conj() * s;
                let j_qq = phase.conj() * c;

                // A <- A J
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * j_pp + akq * j_qp);
                    a.set(k, q, akp * j_pq + akq * j_qq);
                }
                // A <- J^dag A
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, j_pp.conj() * apk + j_qp.conj() * aqk);
                    a.set(q, k, j_pq.conj() * apk + j_qq.conj() * aqk);
                }
                a.set(p, q, ZERO);
                a.set(q, p, ZERO);
                let dp = a.get(p, p).re;
                let dq = a.get(q, q).re;
                a.set(p, p, Complex64::new(dp, 0.0));
                a.set(q, q, Complex64::new(dq, 0.0));
                // V <- V J
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * j_pp + vkq * j_qp);
                    v.set(k, q, vkp * j_pq + vkq * j_qq);
                }
            }
        }
        converged = off_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps, residual: off_norm(&a) });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.get(x, x).re.total_cmp(&a.get(y, y).re));
    let eigenvalues = order.iter().map(|&k| a.get(k, k).re).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v.get(r, order[c]));
    Ok(EigenSystem { eigenvalues, eigenvectors: UnitaryMatrix::new_unchecked(vectors) })
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// i(AB - BA), Hermitian and traceless for Hermitian A, B.
pub fn commutator_i(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dims(a.dim(), b.dim())?;
    let ab = a.as_matrix() * b.as_matrix();
    let ba = b.as_matrix() * a.as_matrix();
    Ok(HermitianMatrix::hermitize(&(&ab - &ba).scale(I)))
}

/// U H U^dag.
pub fn conjugate(u: &UnitaryMatrix, h: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dims(u.dim(), h.dim())?;
    let uh = u.as_matrix() * h.as_matrix();
    Ok(HermitianMatrix::hermitize(&(&uh * &u.as_matrix().adjoint())))
}

/// exp(i sum_k theta_k lambda_k), evaluated through the spectrum of the
/// Hermitian generator.
pub fn unitary_from_generator(theta: &[f64], basis: &GellMannBasis) -> Result<UnitaryMatrix> {
    let generator = basis.combine(theta)?;
    let eig = hermitian_eigensystem(&generator)?;
    Ok(UnitaryMatrix::new_unchecked(eig.apply(|l| Complex64::new(0.0, l).exp())))
}

/// GUE-style traceless Hermitian matrix, deterministic in `seed`.
pub fn random_traceless_hermitian(d: usize, seed: u64) -> Result<HermitianMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_traceless_hermitian_with(d, &mut rng)
}

/// Independent complex Gaussian entries A_jk, Hermitized as (A + A^dag)/2,
/// with Tr/d removed from the diagonal.
pub fn random_traceless_hermitian_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<HermitianMatrix> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: d });
    }
    let mut a = ComplexMatrix::zeros(d);
    for r in 0..d {
        for c in 0..d {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            a.set(r, c, Complex64::new(re, im));
        }
    }
    Ok(HermitianMatrix::hermitize(&a).traceless_part().0)
}

/// `m` independent draws of [`random_traceless_hermitian_with`] from one
/// seeded stream.
pub fn random_gue_set(d: usize, m: usize, seed: u64) -> Result<Vec<HermitianMatrix>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m).map(|_| random_traceless_hermitian_with(d, &mut rng)).collect()
}

/// exp(i theta . lambda) with theta uniform on [-pi, pi]^(d^2-1).
pub fn random_special_unitary<R: Rng + ?Sized>(basis: &GellMannBasis, rng: &mut R) -> Result<UnitaryMatrix> {
    let theta: Vec<f64> = (0..basis.len())
        .map(|_| rng.random_range(-std::f64::consts::PI..=std::f64::consts::PI))
        .collect();
    unitary_from_generator(&theta, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su_basis::build_basis;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli() -> [HermitianMatrix; 3] {
        let b = build_basis(2).unwrap();
        [b.element(0).clone(), b.element(1).clone(), b.element(2).clone()]
    }

    #[test]
    fn diagonal_input_is_already_solved() {
        let h = HermitianMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]);
        let eig = hermitian_eigensystem(&h).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 2.0, 3.0]);
        let v = eig.eigenvectors.as_matrix();
        // every column is a unit coordinate vector
        for col in 0..3 {
            let ones = (0..3).filter(|&r| (v.get(r, col).norm() - 1.0).abs() < 1e-15).count();
            assert_eq!(ones, 1);
        }
        assert!(eig.reconstruct().max_abs_diff(h.as_matrix()) < 1e-15);
    }

    #[test]
    fn pauli_z_spectrum() {
        let [_, _, z] = pauli();
        let eig = hermitian_eigensystem(&z).unwrap();
        assert_eq!(eig.eigenvalues, vec![-1.0, 1.0]);
    }

    #[test]
    fn random_reconstruction_d5() {
        for seed in 0..50 {
            let h = random_traceless_hermitian(5, seed).unwrap();
            let eig = hermitian_eigensystem(&h).unwrap();
            assert!(eig.reconstruct().max_abs_diff(h.as_matrix()) < 1e-9);
            assert!(eig.eigenvectors.as_matrix().unitarity_residual() < 1e-10);
            assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn sweep_cap_is_reported() {
        let h = random_traceless_hermitian(6, 3).unwrap();
        let tol = Tolerances { jacobi_max_sweeps: 1, jacobi_rel: 1e-300, ..Tolerances::default() };
        match hermitian_eigensystem_with(&h, &tol) {
            Err(Error::NoConvergence { sweeps: 1, residual }) => assert!(residual > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_matrix_eigensystem() {
        let eig = hermitian_eigensystem(&HermitianMatrix::zeros(3)).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn pauli_commutators() {
        let [x, y, z] = pauli();
        // [x, y] = 2i z, so i[x, y] = -2 z
        let xy = commutator_i(&x, &y).unwrap();
        assert!(xy.as_matrix().max_abs_diff(z.scale(-2.0).as_matrix()) < 1e-15);
        // [x, z] = -2i y, so i[x, z] = 2 y
        let xz = commutator_i(&x, &z).unwrap();
        assert!(xz.as_matrix().max_abs_diff(y.scale(2.0).as_matrix()) < 1e-15);
        let xx = commutator_i(&x, &x).unwrap();
        assert_eq!(xx.frobenius_norm(), 0.0);
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let a = HermitianMatrix::identity(2);
        let b = HermitianMatrix::identity(3);
        assert!(matches!(commutator_i(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn generator_zero_is_identity() {
        let basis = build_basis(3).unwrap();
        let u = unitary_from_generator(&[0.0; 8], &basis).unwrap();
        assert!(u.as_matrix().max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn generator_quarter_turn_about_x() {
        // exp(i pi/2 sigma_x) = cos(pi/2) I + i sin(pi/2) sigma_x
        let basis = build_basis(2).unwrap();
        let u = unitary_from_generator(&[std::f64::consts::FRAC_PI_2, 0.0, 0.0], &basis).unwrap();
        let half = std::f64::consts::FRAC_PI_2;
        let expected = ComplexMatrix::new(
            2,
            vec![c(half.cos(), 0.0), c(0.0, half.sin()), c(0.0, half.sin()), c(half.cos(), 0.0)],
        )
        .unwrap();
        assert!(u.as_matrix().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn generator_length_mismatch() {
        let basis = build_basis(3).unwrap();
        assert!(matches!(unitary_from_generator(&[0.0; 3], &basis), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn random_unitary_d4_is_special() {
        let basis = build_basis(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let u = random_special_unitary(&basis, &mut rng).unwrap();
            assert!(u.as_matrix().unitarity_residual() < 1e-10);
            let det = u.as_matrix().determinant();
            assert!(close(det.norm(), 1.0, 1e-10));
            assert!((det - ONE).norm() < 1e-8);
        }
    }

    #[test]
    fn conjugation_by_identity_and_of_identity() {
        let basis = build_basis(3).unwrap();
        let h = random_traceless_hermitian(3, 5).unwrap();
        let same = conjugate(&UnitaryMatrix::identity(3), &h).unwrap();
        assert!(same.as_matrix().max_abs_diff(h.as_matrix()) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_special_unitary(&basis, &mut rng).unwrap();
        let id = conjugate(&u, &HermitianMatrix::identity(3)).unwrap();
        assert!(id.as_matrix().max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn random_hermitian_contract() {
        let a = random_traceless_hermitian(4, 42).unwrap();
        let b = random_traceless_hermitian(4, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.trace().abs() <= 1e-12);
        assert!(a.as_matrix().hermiticity_residual().0 <= 1e-15);
        assert!(matches!(random_traceless_hermitian(1, 0), Err(Error::DimensionTooSmall { .. })));
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(matches!(ComplexMatrix::new(2, vec![ZERO; 3]), Err(Error::Shape { .. })));
        assert!(matches!(
            ComplexMatrix::new(1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 0 })
        ));
        let m = ComplexMatrix::new(2, vec![ZERO, ONE, ZERO, ZERO]).unwrap();
        assert!(matches!(HermitianMatrix::new(m.clone()), Err(Error::NotHermitian { row: 0, col: 1, .. })));
        assert!(matches!(UnitaryMatrix::new(m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn determinant_of_permutation() {
        let p = ComplexMatrix::new(2, vec![ZERO, ONE, ONE, ZERO]).unwrap();
        assert_eq!(p.determinant(), -ONE);
    }
}
