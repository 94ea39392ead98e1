//! Trace-word invariants under simultaneous unitary similarity.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{star_power, BlochVector};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigensystem, ComplexMatrix, HermitianMatrix};
use crate::su_basis::StructureConstantTable;

/// A formal product of set members. Letters are 0-based; `Display` prints
/// them 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    /// Validates against a set of size `m`.
    pub fn new(letters: Vec<usize>, m: usize) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Parse("a word needs at least one letter".into()));
        }
        if let Some(&bad) = letters.iter().find(|&&l| l >= m) {
            return Err(Error::IndexOutOfRange { index: bad + 1, max: m });
        }
        Ok(Self { letters })
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn rotated(&self, by: usize) -> Self {
        let mut letters = self.letters.clone();
        letters.rotate_left(by % self.letters.len());
        Self { letters }
    }

    pub fn reversed(&self) -> Self {
        Self { letters: self.letters.iter().rev().copied().collect() }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| (l + 1).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Trace of the product of `matrices` in letter order.
pub fn word_trace_matrices(matrices: &[ComplexMatrix], word: &Word) -> Result<Complex64> {
    if let Some(&bad) = word.letters.iter().find(|&&l| l >= matrices.len()) {
        return Err(Error::IndexOutOfRange { index: bad + 1, max: matrices.len() });
    }
    let dim = matrices[word.letters[0]].dim();
    for &l in &word.letters {
        if matrices[l].dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: matrices[l].dim() });
        }
    }
    let (last, head) = word.letters.split_last().expect("words are non-empty");
    if head.is_empty() {
        return Ok(matrices[*last].trace());
    }
    let mut product = matrices[head[0]].clone();
    for &l in &head[1..] {
        product = product.matmul(&matrices[l]);
    }
    Ok(product.trace_product(&matrices[*last]))
}

pub fn word_trace(set: &[HermitianMatrix], word: &Word) -> Result<Complex64> {
    let mats: Vec<ComplexMatrix> = set.iter().map(|h| h.as_matrix().clone()).collect();
    word_trace_matrices(&mats, word)
}

/// Traces of many words, evaluated in parallel, returned in input order.
pub fn word_traces(set: &[HermitianMatrix], words: &[Word]) -> Result<Vec<Complex64>> {
    let mats: Vec<ComplexMatrix> = set.iter().map(|h| h.as_matrix().clone()).collect();
    words.par_iter().map(|w| word_trace_matrices(&mats, w)).collect()
}

/// One representative per cyclic class (the lexicographically smallest
/// rotation), for lengths 2..=cap, ordered by length then lexicographically.
pub fn enumerate_words(m: usize, cap: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    for n in 2..=cap {
        let mut a = vec![0usize; n + 1];
        necklaces(1, 1, n, m, &mut a, &mut out);
    }
    out
}

// Fredricksen-Kessler-Maiorana generation; emits necklaces in lex order.
fn necklaces(t: usize, p: usize, n: usize, k: usize, a: &mut [usize], out: &mut Vec<Word>) {
    if t > n {
        if n.is_multiple_of(p) {
            out.push(Word { letters: a[1..=n].to_vec() });
        }
        return;
    }
    a[t] = a[t - p];
    necklaces(t + 1, p, n, k, a, out);
    for letter in a[t - p] + 1..k {
        a[t] = letter;
        necklaces(t + 1, t, n, k, a, out);
    }
}

/// Sufficient word length for simultaneous similarity of `m` matrices of
/// size `d`, via the block encoding of size n = c d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordLengthBound {
    pub m: usize,
    pub d: usize,
    /// Smallest c with (c^2 - 3c + 2)/2 >= m.
    pub c: usize,
    pub n: usize,
    /// ceil((n^2 + 2)/3).
    pub quadratic_branch: usize,
    /// floor(n sqrt(2n^2/(n-1) + 1/4) + n/2 - 2).
    pub three_halves_branch: usize,
    pub l_max: usize,
}

/// Number of free strict-upper blocks above the superdiagonal.
pub fn block_capacity(c: usize) -> usize {
    if c < 3 {
        0
    } else {
        (c - 1) * (c - 2) / 2
    }
}

pub fn min_block_count(m: usize) -> usize {
    let mut c = 3;
    while block_capacity(c) < m {
        c += 1;
    }
    c
}

pub fn max_word_length(m: usize, d: usize) -> WordLengthBound {
    let c = min_block_count(m.max(1));
    let n = c * d;
    let quadratic_branch = (n * n + 2).div_ceil(3);
    let nf = n as f64;
    let three_halves = nf * (2.0 * nf * nf / (nf - 1.0) + 0.25).sqrt() + nf / 2.0 - 2.0;
    let three_halves_branch = three_halves.floor() as usize;
    WordLengthBound {
        m,
        d,
        c,
        n,
        quadratic_branch,
        three_halves_branch,
        l_max: quadratic_branch.min(three_halves_branch),
    }
}

/// Block upper-triangular encoding of a matrix set into one matrix.
#[derive(Clone, Debug)]
pub struct BlockEncoding {
    pub c: usize,
    pub d: usize,
    pub matrix: ComplexMatrix,
}

impl BlockEncoding {
    /// [A, A^dag], the alphabet for single-matrix similarity words.
    pub fn alphabet(&self) -> [ComplexMatrix; 2] {
        [self.matrix.clone(), self.matrix.adjoint()]
    }
}

/// Identity blocks on the superdiagonal; the set fills the remaining strict
/// upper blocks row by row; everything else is zero.
pub fn block_encoding(set: &[HermitianMatrix], c: usize) -> Result<BlockEncoding> {
    let first = set.first().ok_or(Error::EmptySet)?;
    let d = first.dim();
    let capacity = block_capacity(c);
    if capacity < set.len() {
        return Err(Error::BlockCapacity { c, capacity, required: set.len(), min_c: min_block_count(set.len()) });
    }
    for h in set {
        if h.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: h.dim() });
        }
    }
    let mut m = ComplexMatrix::zeros(c * d);
    let one = Complex64::new(1.0, 0.0);
    for r in 0..c.saturating_sub(1) {
        for k in 0..d {
            m.set(r * d + k, (r + 1) * d + k, one);
        }
    }
    let mut members = set.iter();
    'fill: for br in 0..c {
        for bc in br + 2..c {
            let Some(h) = members.next() else { break 'fill };
            for i in 0..d {
                for j in 0..d {
                    m.set(br * d + i, bc * d + j, h.get(i, j));
                }
            }
        }
    }
    Ok(BlockEncoding { c, d, matrix: m })
}

fn power_traces(h: &ComplexMatrix, up_to: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(up_to);
    let mut p = h.clone();
    out.push(p.trace());
    for _ in 1..up_to {
        out.push(p.trace_product(h));
        p = p.matmul(h);
    }
    out
}

/// Unitary similarity of two Hermitian matrices from Tr[H^k], k = 1..=d.
///
/// Accepts when |Tr H^k - Tr H'^k| <= tol d max(1, |H|^k) for every k, with
/// |H| the larger Frobenius norm of the two.
pub fn pair_similarity_trace(h: &HermitianMatrix, other: &HermitianMatrix, tol: f64) -> Result<bool> {
    let d = h.dim();
    if other.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: other.dim() });
    }
    let scale = h.frobenius_norm().max(other.frobenius_norm());
    let a = power_traces(h.as_matrix(), d);
    let b = power_traces(other.as_matrix(), d);
    Ok(a.iter().zip(&b).enumerate().all(|(k, (x, y))| {
        let bound = tol * d as f64 * scale.powi(k as i32 + 1).max(1.0);
        (x - y).norm() <= bound
    }))
}

/// Same question on Bloch vectors: a^{*k} . a against b^{*k} . b for
/// k = 1..=d-1.
pub fn pair_similarity_bloch(
    a: &BlochVector,
    b: &BlochVector,
    table: &StructureConstantTable,
    tol: f64,
) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), found: b.len() });
    }
    let d = table.dim();
    let scale = a.norm().max(b.norm());
    for k in 1..d {
        let x = star_power(a, k, table)?.dot(a);
        let y = star_power(b, k, table)?.dot(b);
        let bound = tol * d as f64 * scale.powi(k as i32 + 1).max(1.0);
        if (x - y).abs() > bound {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sorted spectra agree within `tol`; the reference for the two tests above.
pub fn spectra_match(h: &HermitianMatrix, other: &HermitianMatrix, tol: f64) -> Result<bool> {
    let a = hermitian_eigensystem(h)?.eigenvalues;
    let b = hermitian_eigensystem(other)?.eigenvalues;
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    Ok(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol))
}

/// Violations of the polynomial system for a candidate transformed set.
///
/// Concatenates, in order: |Tr w(S) - Tr w(S')| over canonical words of
/// length 2..=cap; max(0, Re H'_jk) over the strict upper triangle of every
/// member; |Im H'_jk| over the same entries. All zero iff S' is stoquastic
/// and matches every checked invariant of S.
pub fn invariant_residual(set: &[HermitianMatrix], candidate: &[HermitianMatrix], cap: usize) -> Result<Vec<f64>> {
    if set.len() != candidate.len() {
        return Err(Error::LengthMismatch { expected: set.len(), found: candidate.len() });
    }
    if cap < 2 {
        return Err(Error::Config(format!("word cap must be at least 2, got {cap}")));
    }
    let d = set.first().ok_or(Error::EmptySet)?.dim();
    for h in set.iter().chain(candidate) {
        if h.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: h.dim() });
        }
    }
    let words = enumerate_words(set.len(), cap);
    let lhs = word_traces(set, &words)?;
    let rhs = word_traces(candidate, &words)?;
    let mut out: Vec<f64> = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).collect();
    let mut imag = Vec::new();
    for h in candidate {
        for r in 0..d {
            for c in r + 1..d {
                let z = h.get(r, c);
                out.push(z.re.max(0.0));
                imag.push(z.im.abs());
            }
        }
    }
    out.extend(imag);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_traceless_hermitian;
    use crate::su_basis::build_basis;

    fn paulis() -> Vec<HermitianMatrix> {
        build_basis(2).unwrap().elements().to_vec()
    }

    fn w(letters: &[usize]) -> Word {
        Word { letters: letters.iter().map(|l| l - 1).collect() }
    }

    #[test]
    fn small_word_traces() {
        let p = paulis();
        assert_eq!(word_trace(&p, &w(&[1])).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(word_trace(&p[..2], &w(&[1, 2])).unwrap(), Complex64::new(0.0, 0.0));
        let xx = vec![p[0].clone(), p[0].clone()];
        assert_eq!(word_trace(&xx, &w(&[1, 2])).unwrap(), Complex64::new(2.0, 0.0));
        let xyz = word_trace(&p, &w(&[1, 2, 3])).unwrap();
        assert!((xyz - Complex64::new(0.0, 2.0)).norm() < 1e-15);
        assert!(matches!(word_trace(&p, &w(&[4])), Err(Error::IndexOutOfRange { index: 4, max: 3 })));
    }

    #[test]
    fn word_lists() {
        let show = |ws: Vec<Word>| ws.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert_eq!(show(enumerate_words(1, 3)), vec!["(1,1)", "(1,1,1)"]);
        assert_eq!(show(enumerate_words(2, 2)), vec!["(1,1)", "(1,2)", "(2,2)"]);
        let len3: Vec<_> = enumerate_words(2, 3).into_iter().filter(|x| x.len() == 3).collect();
        assert_eq!(show(len3), vec!["(1,1,1)", "(1,1,2)", "(1,2,2)", "(2,2,2)"]);
    }

    #[test]
    fn necklace_counts_match_brute_force() {
        // brute force: keep a sequence iff it is its own smallest rotation
        for m in 1usize..=3 {
            for n in 2..=6 {
                let total = m.pow(n as u32);
                let mut count = 0;
                for code in 0..total {
                    let mut seq = Vec::with_capacity(n);
                    let mut c = code;
                    for _ in 0..n {
                        seq.push(c % m);
                        c /= m;
                    }
                    let minimal = (0..n).all(|r| {
                        let mut rot = seq.clone();
                        rot.rotate_left(r);
                        seq <= rot
                    });
                    if minimal {
                        count += 1;
                    }
                }
                let got = enumerate_words(m, n).iter().filter(|x| x.len() == n).count();
                assert_eq!(got, count, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn word_bound_examples() {
        assert_eq!(max_word_length(2, 2).c, 4);
        let b = max_word_length(2, 2);
        assert_eq!((b.n, b.quadratic_branch, b.three_halves_branch, b.l_max), (8, 22, 36, 22));
        assert_eq!(max_word_length(3, 2).c, 4);
        assert_eq!(max_word_length(1, 2).c, 3);
        assert_eq!(max_word_length(4, 2).c, 5);
    }

    #[test]
    fn scalar_block_encoding() {
        let s = HermitianMatrix::new(ComplexMatrix::new(1, vec![Complex64::new(0.7, 0.0)]).unwrap()).unwrap();
        let enc = block_encoding(&[s], 3).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let s = Complex64::new(0.7, 0.0);
        let want = ComplexMatrix::new(3, vec![zero, one, s, zero, zero, one, zero, zero, zero]).unwrap();
        assert_eq!(enc.matrix, want);
    }

    #[test]
    fn block_encoding_capacity() {
        let p = paulis();
        match block_encoding(&p[..2], 3) {
            Err(Error::BlockCapacity { min_c: 4, capacity: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let enc = block_encoding(&p[..2], 4).unwrap();
        // blocks (0,2) and (0,3) hold the set, (1,3) is zero
        assert_eq!(enc.matrix.get(0, 5), Complex64::new(1.0, 0.0));
        assert_eq!(enc.matrix.get(0, 7), Complex64::new(0.0, -1.0));
        assert_eq!(enc.matrix.get(2, 7), Complex64::new(0.0, 0.0));
        assert_eq!(enc.matrix.get(2, 4), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn pair_similarity_examples() {
        let z = paulis()[2].clone();
        assert!(!pair_similarity_trace(&z, &z.scale(2.0), 1e-8).unwrap());
        assert!(pair_similarity_trace(&z, &paulis()[0], 1e-8).unwrap());
        let a = random_traceless_hermitian(4, 1).unwrap();
        let b = random_traceless_hermitian(3, 1).unwrap();
        assert!(pair_similarity_trace(&a, &b, 1e-8).is_err());
    }

    #[test]
    fn residual_layout() {
        let p = paulis();
        let set = vec![p[0].scale(-1.0), p[2].clone()];
        let r = invariant_residual(&set, &set, 3).unwrap();
        assert!(r.iter().all(|&x| x == 0.0));
        // words (11),(12),(22),(111),(112),(122),(222) then 2 hinge then 2 imaginary
        assert_eq!(r.len(), 7 + 2 + 2);
        assert!(invariant_residual(&set, &set, 1).is_err());
        assert!(invariant_residual(&set, &set[..1], 3).is_err());
    }
}
