//! Bloch vectors, the star product and star closures.

use std::ops::{Add, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;
use crate::su_basis::{GellMannBasis, StructureConstantTable};

/// Real coordinates of a traceless Hermitian matrix in the generalized
/// Gell-Mann basis, ordered by linear index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    dim: usize,
    components: Vec<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, components: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { min: 2, got: dim });
        }
        let expected = dim * dim - 1;
        if components.len() != expected {
            return Err(Error::LengthMismatch { expected, found: components.len() });
        }
        if components.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parse("Bloch vector has non-finite components".into()));
        }
        Ok(Self { dim, components })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, components: vec![0.0; dim * dim - 1] }
    }

    /// Unit vector on 0-based position `pos`.
    pub fn unit(dim: usize, pos: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.components[pos] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn into_components(self) -> Vec<f64> {
        self.components
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.components.iter().zip(&other.components).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, components: self.components.iter().map(|x| x * s).collect() }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.components.len() != other.components.len() {
            return Err(Error::LengthMismatch { expected: self.components.len(), found: other.components.len() });
        }
        Ok(())
    }
}

impl Add for &BlochVector {
    type Output = BlochVector;

    fn add(self, rhs: &BlochVector) -> BlochVector {
        assert_eq!(self.len(), rhs.len());
        BlochVector {
            dim: self.dim,
            components: self.components.iter().zip(&rhs.components).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &BlochVector {
    type Output = BlochVector;

    fn sub(self, rhs: &BlochVector) -> BlochVector {
        assert_eq!(self.len(), rhs.len());
        BlochVector {
            dim: self.dim,
            components: self.components.iter().zip(&rhs.components).map(|(a, b)| a - b).collect(),
        }
    }
}

/// b_i = Tr(H lambda_i) / 2. H must already be traceless.
pub fn to_bloch(h: &HermitianMatrix, basis: &GellMannBasis) -> Result<BlochVector> {
    to_bloch_with(h, basis, Tolerances::default().traceless)
}

pub fn to_bloch_with(h: &HermitianMatrix, basis: &GellMannBasis, traceless_tol: f64) -> Result<BlochVector> {
    if h.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: h.dim() });
    }
    let trace = h.trace();
    if trace.abs() > traceless_tol {
        return Err(Error::NotTraceless { trace: trace.abs() });
    }
    let components = basis
        .elements()
        .iter()
        .map(|l| 0.5 * h.as_matrix().trace_product(l.as_matrix()).re)
        .collect();
    Ok(BlochVector { dim: h.dim(), components })
}

/// Removes the trace and converts. Returns the vector and the removed shift
/// Tr H / d.
pub fn to_bloch_shifted(h: &HermitianMatrix, basis: &GellMannBasis) -> Result<(BlochVector, f64)> {
    let (traceless, shift) = h.traceless_part();
    Ok((to_bloch_with(&traceless, basis, f64::INFINITY)?, shift))
}

/// H = b . lambda.
pub fn from_bloch(b: &BlochVector, basis: &GellMannBasis) -> Result<HermitianMatrix> {
    basis.combine(&b.components)
}

fn check_table(table: &StructureConstantTable, v: &BlochVector) -> Result<()> {
    if v.len() != table.vector_len() {
        return Err(Error::LengthMismatch { expected: table.vector_len(), found: v.len() });
    }
    Ok(())
}

/// (a * b)_k = d_ijk a_i b_j.
///
/// The summation pairs a_i b_j with a_j b_i before scaling, so the result
/// is bitwise symmetric in its arguments.
pub fn star(a: &BlochVector, b: &BlochVector, table: &StructureConstantTable) -> Result<BlochVector> {
    check_table(table, a)?;
    check_table(table, b)?;
    let (x, y) = (&a.components, &b.components);
    let mut out = vec![0.0; x.len()];
    for t in table.star_terms() {
        let pair = if t.i == t.j { x[t.i] * y[t.i] } else { x[t.i] * y[t.j] + x[t.j] * y[t.i] };
        out[t.k] += t.value * pair;
    }
    Ok(BlochVector { dim: a.dim, components: out })
}

/// Left-nested star power: b^{*1} = b, b^{*k} = b^{*(k-1)} * b.
pub fn star_power(b: &BlochVector, k: usize, table: &StructureConstantTable) -> Result<BlochVector> {
    check_table(table, b)?;
    let mut acc = b.clone();
    for _ in 1..k {
        acc = star(&acc, b, table)?;
    }
    Ok(acc)
}

/// Tr[H_a H_b] = 2 a . b.
pub fn pair_invariant(a: &BlochVector, b: &BlochVector) -> Result<f64> {
    a.same_shape(b)?;
    Ok(2.0 * a.dot(b))
}

/// Tr[H_a H_b H_c] = 2 (d_ijk + i f_ijk) a_i b_j c_k.
///
/// The real part is 2 (a * b) . c. The imaginary part needs the
/// antisymmetric constants, so the table must come from the trace oracle.
pub fn triple_invariant(
    a: &BlochVector,
    b: &BlochVector,
    c: &BlochVector,
    table: &StructureConstantTable,
) -> Result<Complex64> {
    check_table(table, a)?;
    check_table(table, b)?;
    check_table(table, c)?;
    if !table.has_antisymmetric() {
        return Err(Error::Config("triple invariant needs a table with antisymmetric constants".into()));
    }
    let re = 2.0 * star(a, b, table)?.dot(c);
    let (x, y, z) = (&a.components, &b.components, &c.components);
    let mut im = 0.0;
    for ([i, j, k], f) in table.antisym_entries() {
        let (i, j, k) = (i - 1, j - 1, k - 1);
        let even = x[i] * y[j] * z[k] + x[j] * y[k] * z[i] + x[k] * y[i] * z[j];
        let odd = x[j] * y[i] * z[k] + x[i] * y[k] * z[j] + x[k] * y[j] * z[i];
        im += f * (even - odd);
    }
    Ok(Complex64::new(re, 2.0 * im))
}

/// Smallest star-closed subspace containing a set of Bloch vectors.
#[derive(Clone, Debug)]
pub struct StarClosure {
    pub dim: usize,
    /// Orthonormal.
    pub spanning_set: Vec<BlochVector>,
    pub rank: usize,
    /// Number of closure rounds executed.
    pub generations: usize,
}

/// Removes the components along an orthonormal list, two Gram-Schmidt passes.
fn project_out(v: &mut [f64], onto: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in onto {
            let c: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            for (x, qi) in v.iter_mut().zip(q) {
                *x -= c * qi;
            }
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Computes span closure under the star product.
///
/// The inputs are orthonormalized with threshold `rel_tol * max |b|`. Each
/// round then stars every pair that involves a vector added in the previous
/// round; a product whose residual off the current span exceeds `rel_tol`
/// becomes a new unit direction. Bilinearity makes pairs of spanning vectors
/// sufficient. Stops when a round adds nothing or the span is full.
///
/// An all-zero input set yields rank 0.
pub fn star_closure(vectors: &[BlochVector], table: &StructureConstantTable, rel_tol: f64) -> Result<StarClosure> {
    let first = vectors.first().ok_or(Error::EmptySet)?;
    for v in vectors {
        check_table(table, v)?;
    }
    let dim = first.dim;
    let full = table.vector_len();
    let max_norm = vectors.iter().map(BlochVector::norm).fold(0.0, f64::max);

    let mut span: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut r = v.components.clone();
        project_out(&mut r, &span);
        let n = norm(&r);
        if n > rel_tol * max_norm && span.len() < full {
            span.push(r.iter().map(|x| x / n).collect());
        }
    }

    let mut generations = 0;
    let mut frontier = 0;
    while !span.is_empty() && span.len() < full {
        let known = span.len();
        let mut added = false;
        'round: for j in frontier..known {
            for i in 0..=j {
                let u = BlochVector { dim, components: span[i].clone() };
                let w = BlochVector { dim, components: span[j].clone() };
                let mut r = star(&u, &w, table)?.components;
                project_out(&mut r, &span);
                let n = norm(&r);
                if n > rel_tol {
                    span.push(r.iter().map(|x| x / n).collect());
                    added = true;
                    if span.len() == full {
                        break 'round;
                    }
                }
            }
        }
        generations += 1;
        frontier = known;
        if !added {
            break;
        }
    }

    let spanning_set: Vec<BlochVector> =
        span.into_iter().map(|components| BlochVector { dim, components }).collect();
    Ok(StarClosure { dim, rank: spanning_set.len(), spanning_set, generations })
}
