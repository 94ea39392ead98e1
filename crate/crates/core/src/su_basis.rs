//! Generalized Gell-Mann basis of su(d) and its structure constants.
//!
//! Basis elements carry a 1-based linear index i in [1, d^2-1] given by
//!
//! ```text
//! X_jk = k^2 + 2(j-k) - 1      symmetric     |j><k| + |k><j|
//! Y_jk = k^2 + 2(j-k)          skew          -i|j><k| + i|k><j|
//! D_j  = j(j+2)                diagonal      sqrt(2/(j(j+1))) diag(1,..,1,-j,0,..)
//! ```
//!
//! with 1 <= j < k <= d. Vectors and element lists are 0-based, so linear
//! index i lives at position i - 1. Other modules go through [`IndexMap`]
//! rather than the formulas.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};

/// Sector coordinates of a basis element (1-based, j < k).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisLabel {
    X { j: usize, k: usize },
    Y { j: usize, k: usize },
    D { j: usize },
}

impl BasisLabel {
    pub fn is_x(&self) -> bool {
        matches!(self, BasisLabel::X { .. })
    }

    pub fn is_y(&self) -> bool {
        matches!(self, BasisLabel::Y { .. })
    }

    pub fn is_d(&self) -> bool {
        matches!(self, BasisLabel::D { .. })
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // a separator only when a coordinate has two digits
        match self {
            BasisLabel::X { j, k } if *j > 9 || *k > 9 => write!(f, "X{j},{k}"),
            BasisLabel::Y { j, k } if *j > 9 || *k > 9 => write!(f, "Y{j},{k}"),
            BasisLabel::X { j, k } => write!(f, "X{j}{k}"),
            BasisLabel::Y { j, k } => write!(f, "Y{j}{k}"),
            BasisLabel::D { j } => write!(f, "D{j}"),
        }
    }
}

/// Bijection between linear indices and sector coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexMap {
    dim: usize,
    labels: Vec<BasisLabel>,
}

pub fn index_maps(d: usize) -> Result<IndexMap> {
    IndexMap::new(d)
}

impl IndexMap {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall { min: 2, got: d });
        }
        let n = d * d - 1;
        let mut slots: Vec<Option<BasisLabel>> = vec![None; n];
        let mut place = |linear: usize, label: BasisLabel| {
            debug_assert!(slots[linear - 1].is_none(), "index collision at {linear}");
            slots[linear - 1] = Some(label);
        };
        for k in 2..=d {
            for j in 1..k {
                place(x_index(j, k), BasisLabel::X { j, k });
                place(y_index(j, k), BasisLabel::Y { j, k });
            }
        }
        for j in 1..d {
            place(d_index(j), BasisLabel::D { j });
        }
        let labels = slots.into_iter().map(|s| s.expect("index map is a bijection")).collect();
        Ok(Self { dim: d, labels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// d^2 - 1.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Sector coordinates of a 1-based linear index.
    pub fn label(&self, linear: usize) -> Result<BasisLabel> {
        if linear == 0 || linear > self.labels.len() {
            return Err(Error::IndexOutOfRange { index: linear, max: self.labels.len() });
        }
        Ok(self.labels[linear - 1])
    }

    /// 1-based linear index of a label.
    pub fn linear(&self, label: BasisLabel) -> Result<usize> {
        let d = self.dim;
        match label {
            BasisLabel::X { j, k } if 1 <= j && j < k && k <= d => Ok(x_index(j, k)),
            BasisLabel::Y { j, k } if 1 <= j && j < k && k <= d => Ok(y_index(j, k)),
            BasisLabel::D { j } if 1 <= j && j < d => Ok(d_index(j)),
            other => Err(Error::InvalidLabel(format!("{other} for d = {d}"))),
        }
    }

    /// 0-based vector position of a label.
    pub fn position(&self, label: BasisLabel) -> Result<usize> {
        self.linear(label).map(|i| i - 1)
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    /// 0-based positions of the X, Y and D sectors.
    pub fn sector_positions(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let mut x = Vec::new();
        let mut y = Vec::new();
        let mut dg = Vec::new();
        for (pos, l) in self.labels.iter().enumerate() {
            match l {
                BasisLabel::X { .. } => x.push(pos),
                BasisLabel::Y { .. } => y.push(pos),
                BasisLabel::D { .. } => dg.push(pos),
            }
        }
        (x, y, dg)
    }
}

fn x_index(j: usize, k: usize) -> usize {
    k * k + 2 * j - 2 * k - 1
}

fn y_index(j: usize, k: usize) -> usize {
    k * k + 2 * j - 2 * k
}

fn d_index(j: usize) -> usize {
    j * (j + 2)
}

type SparseEntries = Vec<(usize, usize, Complex64)>;

/// The d^2 - 1 generalized Gell-Mann matrices, ordered by linear index.
#[derive(Clone, Debug)]
pub struct GellMannBasis {
    dim: usize,
    index: IndexMap,
    elements: Vec<HermitianMatrix>,
    sparse: Vec<SparseEntries>,
}

pub fn build_basis(d: usize) -> Result<GellMannBasis> {
    GellMannBasis::new(d)
}

impl GellMannBasis {
    pub fn new(d: usize) -> Result<Self> {
        let index = IndexMap::new(d)?;
        let mut elements = Vec::with_capacity(index.len());
        let mut sparse = Vec::with_capacity(index.len());
        for &label in index.labels() {
            let entries = element_entries(label);
            let mut m = ComplexMatrix::zeros(d);
            for &(r, c, v) in &entries {
                m.set(r, c, v);
            }
            elements.push(HermitianMatrix::new(m)?);
            sparse.push(entries);
        }
        Ok(Self { dim: d, index, elements, sparse })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// d^2 - 1.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_map(&self) -> &IndexMap {
        &self.index
    }

    /// Element at 0-based position `pos` (linear index `pos + 1`).
    pub fn element(&self, pos: usize) -> &HermitianMatrix {
        &self.elements[pos]
    }

    pub fn elements(&self) -> &[HermitianMatrix] {
        &self.elements
    }

    /// sum_k coeffs[k] lambda_k.
    pub fn combine(&self, coeffs: &[f64]) -> Result<HermitianMatrix> {
        if coeffs.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), found: coeffs.len() });
        }
        let mut m = ComplexMatrix::zeros(self.dim);
        for (entries, &w) in self.sparse.iter().zip(coeffs) {
            if w == 0.0 {
                continue;
            }
            for &(r, c, v) in entries {
                m.set(r, c, m.get(r, c) + v * w);
            }
        }
        Ok(HermitianMatrix::hermitize(&m))
    }

    /// Tr(lambda_a lambda_b lambda_c) on 0-based positions, using sparsity.
    pub fn triple_trace(&self, a: usize, b: usize, c: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(r, s, va) in &self.sparse[a] {
            for &(s2, t, vb) in &self.sparse[b] {
                if s2 != s {
                    continue;
                }
                for &(t2, r2, vc) in &self.sparse[c] {
                    if t2 == t && r2 == r {
                        acc += va * vb * vc;
                    }
                }
            }
        }
        acc
    }
}

fn element_entries(label: BasisLabel) -> SparseEntries {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match label {
        BasisLabel::X { j, k } => vec![(j - 1, k - 1, one), (k - 1, j - 1, one)],
        BasisLabel::Y { j, k } => vec![(j - 1, k - 1, -i), (k - 1, j - 1, i)],
        BasisLabel::D { j } => {
            let norm = (2.0 / (j * (j + 1)) as f64).sqrt();
            let mut v: SparseEntries = (0..j).map(|p| (p, p, Complex64::new(norm, 0.0))).collect();
            v.push((j, j, Complex64::new(-(j as f64) * norm, 0.0)));
            v
        }
    }
}

/// One term of the star product: out[k] += value * sym(a[i] b[j]) with i <= j.
#[derive(Clone, Copy, Debug)]
pub(crate) struct StarTerm {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

/// Sparse structure constants of su(d).
///
/// `d_ijk` is stored once per sorted triple (i <= j <= k), `f_ijk` once per
/// strictly increasing triple; both keyed by 1-based linear indices.
#[derive(Clone, Debug)]
pub struct StructureConstantTable {
    dim: usize,
    sym: BTreeMap<[usize; 3], f64>,
    antisym: Option<BTreeMap<[usize; 3], f64>>,
    star_terms: Vec<StarTerm>,
}

fn sorted3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

/// Sign of the permutation that sorts three distinct values.
fn parity3(t: [usize; 3]) -> f64 {
    let mut inversions = 0;
    if t[0] > t[1] {
        inversions += 1;
    }
    if t[0] > t[2] {
        inversions += 1;
    }
    if t[1] > t[2] {
        inversions += 1;
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl StructureConstantTable {
    fn from_maps(dim: usize, sym: BTreeMap<[usize; 3], f64>, antisym: Option<BTreeMap<[usize; 3], f64>>) -> Self {
        let mut star_terms = Vec::new();
        for (&[a, b, c], &value) in &sym {
            // distinct choices of the output slot; the remaining pair is unordered
            let mut seen: Vec<(usize, usize, usize)> = Vec::with_capacity(3);
            for (k, i, j) in [(c, a, b), (b, a, c), (a, b, c)] {
                let key = (k, i.min(j), i.max(j));
                if !seen.contains(&key) {
                    seen.push(key);
                }
            }
            for (k, i, j) in seen {
                star_terms.push(StarTerm { i: i - 1, j: j - 1, k: k - 1, value });
            }
        }
        Self { dim, sym, antisym, star_terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// d^2 - 1.
    pub fn vector_len(&self) -> usize {
        self.dim * self.dim - 1
    }

    /// d_ijk for 1-based indices in any order; zero when absent.
    pub fn sym(&self, i: usize, j: usize, k: usize) -> f64 {
        self.sym.get(&sorted3([i, j, k])).copied().unwrap_or(0.0)
    }

    /// f_ijk for 1-based indices in any order; zero when absent or when the
    /// table only carries the symmetric part.
    pub fn antisym(&self, i: usize, j: usize, k: usize) -> f64 {
        if i == j || j == k || i == k {
            return 0.0;
        }
        let Some(map) = &self.antisym else { return 0.0 };
        map.get(&sorted3([i, j, k])).map_or(0.0, |v| parity3([i, j, k]) * v)
    }

    pub fn has_antisymmetric(&self) -> bool {
        self.antisym.is_some()
    }

    pub fn sym_entries(&self) -> impl Iterator<Item = ([usize; 3], f64)> + '_ {
        self.sym.iter().map(|(k, v)| (*k, *v))
    }

    pub fn antisym_entries(&self) -> impl Iterator<Item = ([usize; 3], f64)> + '_ {
        self.antisym.iter().flat_map(|m| m.iter().map(|(k, v)| (*k, *v)))
    }

    pub fn sym_count(&self) -> usize {
        self.sym.len()
    }

    pub fn antisym_count(&self) -> usize {
        self.antisym.as_ref().map_or(0, BTreeMap::len)
    }

    pub(crate) fn star_terms(&self) -> &[StarTerm] {
        &self.star_terms
    }

    /// Largest entrywise difference between the symmetric parts of two tables.
    pub fn max_sym_difference(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (key, v) in &self.sym {
            worst = worst.max((v - other.sym.get(key).copied().unwrap_or(0.0)).abs());
        }
        for (key, v) in &other.sym {
            worst = worst.max((v - self.sym.get(key).copied().unwrap_or(0.0)).abs());
        }
        worst
    }
}

/// The closed-form non-zero symmetric constants of the generalized
/// Gell-Mann basis. Carries no antisymmetric part.
pub fn structure_constants_analytic(d: usize) -> Result<StructureConstantTable> {
    let map = IndexMap::new(d)?;
    let x = |j, k| map.linear(BasisLabel::X { j, k }).expect("valid X label");
    let y = |j, k| map.linear(BasisLabel::Y { j, k }).expect("valid Y label");
    let dg = |j| map.linear(BasisLabel::D { j }).expect("valid D label");

    let mut sym: BTreeMap<[usize; 3], f64> = BTreeMap::new();
    let mut put = |t: [usize; 3], v: f64| {
        if v != 0.0 {
            let prev = sym.insert(sorted3(t), v);
            debug_assert!(prev.is_none_or(|p| p == v), "conflicting entries at {t:?}");
        }
    };

    // off-diagonal triples, l < j < k etc. name the three distinct levels
    for k in 1..=d {
        for j in 1..k {
            for l in 1..=d {
                if l < j {
                    put([x(j, k), x(l, j), x(l, k)], 0.5);
                    put([x(j, k), y(l, j), y(l, k)], 0.5);
                }
                if k < l {
                    put([x(j, k), y(k, l), y(j, l)], 0.5);
                }
                if j < l && l < k {
                    put([x(j, k), y(j, l), y(l, k)], -0.5);
                }
            }
        }
    }

    // off-diagonal squared against a diagonal element
    for k in 2..=d {
        for j in 1..k {
            let mut diag_terms: Vec<(usize, f64)> = Vec::new();
            if j >= 2 {
                diag_terms.push((j - 1, -((j - 1) as f64 / (2 * j) as f64).sqrt()));
            }
            for l in j + 1..k {
                diag_terms.push((l - 1, (1.0 / (2 * l * (l - 1)) as f64).sqrt()));
            }
            diag_terms.push((k - 1, (2.0 - k as f64) / ((2 * k * (k - 1)) as f64).sqrt()));
            for l in k + 1..=d {
                diag_terms.push((l - 1, (2.0 / (l * (l - 1)) as f64).sqrt()));
            }
            for (m, v) in diag_terms {
                put([x(j, k), x(j, k), dg(m)], v);
                put([y(j, k), y(j, k), dg(m)], v);
            }
        }
    }

    // purely diagonal triples
    for j in 2..=d {
        let norm = (2.0 / (j * (j - 1)) as f64).sqrt();
        for k in 2..j {
            put([dg(j - 1), dg(k - 1), dg(k - 1)], norm);
        }
        put([dg(j - 1), dg(j - 1), dg(j - 1)], (2.0 - j as f64) * norm);
    }

    Ok(StructureConstantTable::from_maps(d, sym, None))
}

/// Both tables from d_ijk = Re Tr(l_i l_j l_k)/2 and f_ijk = Im Tr(l_i l_j l_k)/2,
/// scanning every ordered triple and checking the permutation symmetries.
pub fn structure_constants_trace(basis: &GellMannBasis) -> Result<StructureConstantTable> {
    structure_constants_trace_with(basis, &Tolerances::default())
}

pub fn structure_constants_trace_with(basis: &GellMannBasis, tol: &Tolerances) -> Result<StructureConstantTable> {
    let n = basis.len();
    let zero = tol.structure_zero;
    let mut sym = BTreeMap::new();
    let mut antisym = BTreeMap::new();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let base = basis.triple_trace(a, b, c) * 0.5;
                for perm in [[a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                    let t = basis.triple_trace(perm[0], perm[1], perm[2]) * 0.5;
                    let sign = if a == b || b == c { 0.0 } else { parity3(perm) };
                    let sym_defect = (t.re - base.re).abs();
                    let anti_defect = if sign == 0.0 { t.im.abs() } else { (t.im - sign * base.im).abs() };
                    if sym_defect > 1e-12 || anti_defect > 1e-12 {
                        return Err(Error::Inconsistent(format!(
                            "triple ({}, {}, {}) breaks permutation symmetry: d defect {sym_defect:e}, f defect {anti_defect:e}",
                            a + 1,
                            b + 1,
                            c + 1
                        )));
                    }
                }
                let key = [a + 1, b + 1, c + 1];
                if base.re.abs() > zero {
                    sym.insert(key, base.re);
                }
                if a < b && b < c && base.im.abs() > zero {
                    antisym.insert(key, base.im);
                }
            }
        }
    }
    Ok(StructureConstantTable::from_maps(basis.dim(), sym, Some(antisym)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn d2_is_pauli() {
        let b = build_basis(2).unwrap();
        let o = c(0.0, 0.0);
        let sx = ComplexMatrix::new(2, vec![o, c(1.0, 0.0), c(1.0, 0.0), o]).unwrap();
        let sy = ComplexMatrix::new(2, vec![o, c(0.0, -1.0), c(0.0, 1.0), o]).unwrap();
        let sz = ComplexMatrix::new(2, vec![c(1.0, 0.0), o, o, c(-1.0, 0.0)]).unwrap();
        assert_eq!(b.element(0).as_matrix(), &sx);
        assert_eq!(b.element(1).as_matrix(), &sy);
        assert_eq!(b.element(2).as_matrix(), &sz);
    }

    #[test]
    fn d3_is_gell_mann() {
        let b = build_basis(3).unwrap();
        let s3 = 1.0 / 3f64.sqrt();
        // lambda_8 = diag(1, 1, -2)/sqrt(3)
        let l8 = b.element(7).as_matrix();
        assert!((l8.get(0, 0).re - s3).abs() < 1e-15);
        assert!((l8.get(2, 2).re + 2.0 * s3).abs() < 1e-15);
        // lambda_5 = -i|1><3| + i|3><1|
        assert_eq!(b.element(4).get(0, 2), c(0.0, -1.0));
        assert_eq!(b.element(4).get(2, 0), c(0.0, 1.0));
        // lambda_6 = |2><3| + |3><2|
        assert_eq!(b.element(5).get(1, 2), c(1.0, 0.0));
    }

    #[test]
    fn orthonormality() {
        for d in 2..=7 {
            let b = build_basis(d).unwrap();
            for (i, a) in b.elements().iter().enumerate() {
                assert!(a.trace().abs() < 1e-14);
                for (j, e) in b.elements().iter().enumerate() {
                    let t = a.as_matrix().trace_product(e.as_matrix());
                    let want = if i == j { 2.0 } else { 0.0 };
                    assert!((t - c(want, 0.0)).norm() < 1e-12, "d={d} ({i},{j}) -> {t}");
                }
            }
        }
    }

    #[test]
    fn index_formulas_d3() {
        let m = index_maps(3).unwrap();
        let lin = |l| m.linear(l).unwrap();
        assert_eq!(lin(BasisLabel::X { j: 1, k: 2 }), 1);
        assert_eq!(lin(BasisLabel::Y { j: 1, k: 2 }), 2);
        assert_eq!(lin(BasisLabel::D { j: 1 }), 3);
        assert_eq!(lin(BasisLabel::X { j: 1, k: 3 }), 4);
        assert_eq!(lin(BasisLabel::Y { j: 1, k: 3 }), 5);
        assert_eq!(lin(BasisLabel::X { j: 2, k: 3 }), 6);
        assert_eq!(lin(BasisLabel::Y { j: 2, k: 3 }), 7);
        assert_eq!(lin(BasisLabel::D { j: 2 }), 8);
    }

    #[test]
    fn index_map_is_bijective() {
        for d in 2..=16 {
            let m = index_maps(d).unwrap();
            let (x, y, dg) = m.sector_positions();
            assert_eq!(x.len(), d * (d - 1) / 2);
            assert_eq!(y.len(), d * (d - 1) / 2);
            assert_eq!(dg.len(), d - 1);
            for linear in 1..=m.len() {
                let label = m.label(linear).unwrap();
                assert_eq!(m.linear(label).unwrap(), linear);
            }
        }
        let m = index_maps(2).unwrap();
        let all: Vec<usize> = m.labels().iter().map(|&l| m.linear(l).unwrap()).collect();
        assert_eq!(all, vec![1, 2, 3]);
    }

    #[test]
    fn index_map_rejects_bad_coordinates() {
        let m = index_maps(3).unwrap();
        assert!(m.linear(BasisLabel::X { j: 2, k: 2 }).is_err());
        assert!(m.linear(BasisLabel::Y { j: 1, k: 4 }).is_err());
        assert!(m.linear(BasisLabel::D { j: 3 }).is_err());
        assert!(m.label(0).is_err());
        assert!(m.label(9).is_err());
        assert!(index_maps(1).is_err());
    }

    #[test]
    fn analytic_spot_values() {
        assert_eq!(structure_constants_analytic(2).unwrap().sym_count(), 0);
        let t = structure_constants_analytic(3).unwrap();
        assert!((t.sym(6, 1, 4) - 0.5).abs() < 1e-15);
        assert!((t.sym(8, 8, 8) + 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((t.sym(1, 1, 8) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((t.sym(1, 8, 1) - t.sym(8, 1, 1)).abs() == 0.0);
    }

    #[test]
    fn trace_oracle_pauli() {
        let t = structure_constants_trace(&build_basis(2).unwrap()).unwrap();
        assert_eq!(t.sym_count(), 0);
        assert!((t.antisym(1, 2, 3) - 1.0).abs() < 1e-15);
        assert!((t.antisym(2, 1, 3) + 1.0).abs() < 1e-15);
        assert!((t.antisym(3, 1, 2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trace_oracle_matches_analytic() {
        for d in 2..=6 {
            let oracle = structure_constants_trace(&build_basis(d).unwrap()).unwrap();
            let analytic = structure_constants_analytic(d).unwrap();
            assert_eq!(oracle.sym_count(), analytic.sym_count(), "count at d={d}");
            assert!(oracle.max_sym_difference(&analytic) < 1e-12, "values at d={d}");
        }
    }

    #[test]
    fn trace_of_sym_over_repeated_index_vanishes() {
        // sum_j lambda_j^2 is a multiple of I, so sum_j d_ijj = 0 for every i
        for d in 2..=6 {
            let n = d * d - 1;
            for table in [
                structure_constants_trace(&build_basis(d).unwrap()).unwrap(),
                structure_constants_analytic(d).unwrap(),
            ] {
                for i in 1..=n {
                    let s: f64 = (1..=n).map(|j| table.sym(i, j, j)).sum();
                    assert!(s.abs() < 1e-12, "d={d} i={i} sum={s}");
                }
            }
        }
    }

    #[test]
    fn permutation_symmetry_of_oracle() {
        let t = structure_constants_trace(&build_basis(4).unwrap()).unwrap();
        let n = 15;
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    let v = t.sym(i, j, k);
                    for p in [(j, i, k), (i, k, j), (k, j, i), (j, k, i), (k, i, j)] {
                        assert_eq!(t.sym(p.0, p.1, p.2), v);
                    }
                    let f = t.antisym(i, j, k);
                    assert_eq!(t.antisym(j, i, k), -f);
                    assert_eq!(t.antisym(i, k, j), -f);
                    assert_eq!(t.antisym(j, k, i), f);
                }
            }
        }
    }

    #[test]
    fn combine_checks_length() {
        let b = build_basis(3).unwrap();
        assert!(b.combine(&[1.0; 7]).is_err());
        let h = b.combine(&[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(h.as_matrix(), b.element(2).as_matrix());
    }
}
