//! Necessary-condition checks and verdict aggregation.

use serde::{Deserialize, Serialize};

use crate::bloch::{star_closure, to_bloch_with};
use crate::config::Tolerances;
use crate::curing::{cure_search, CuringConfig, CuringResult};
use crate::error::{Error, Result};
use crate::linalg::{commutator_i, hermitian_eigensystem_with, HermitianMatrix};
use crate::su_basis::{GellMannBasis, StructureConstantTable};

/// Off-diagonal entries real and non-positive, up to `tol`.
pub fn is_stoquastic(h: &HermitianMatrix, tol: f64) -> bool {
    let n = h.dim();
    (0..n).all(|r| {
        (0..n).all(|c| {
            let z = h.get(r, c);
            r == c || (z.re <= tol && z.im.abs() <= tol)
        })
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// An off-diagonal entry that is positive or complex.
    OffDiagonal { member: usize, row: usize, col: usize, re: f64, im: f64 },
    /// Spectrum of i[H_a, H_b] that is not symmetric under negation.
    UnpairedSpectrum { pair: (usize, usize), spectrum: Vec<f64>, defect: f64, allowed: f64 },
    /// Star-closure rank against the X+D subspace dimension.
    SpanRank { rank: usize, bound: usize, stated_bound: f64 },
    /// Star-closure rank against d - 1, with the commutator oracle.
    Diagonalizability {
        rank: usize,
        bound: usize,
        rank_passed: bool,
        commuting: bool,
        max_commutator: f64,
        first_noncommuting: Option<(usize, usize)>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    NotStoquasticizable,
    Inconclusive,
    StoquasticBasisFound,
}

impl Verdict {
    /// 0 found, 1 ruled out, 2 undecided.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::StoquasticBasisFound => 0,
            Verdict::NotStoquasticizable => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

fn same_dimension(set: &[HermitianMatrix]) -> Result<usize> {
    let d = set.first().ok_or(Error::EmptySet)?.dim();
    if let Some(h) = set.iter().find(|h| h.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: h.dim() });
    }
    Ok(d)
}

/// Every i[H_a, H_b] must have a spectrum symmetric under negation.
///
/// After sorting, lambda_k is matched against -lambda_{d-1-k}; the allowed
/// defect is `rel_tol` times the commutator's spectral norm. Reports the
/// first failing pair.
pub fn paired_eigenvalue_check(set: &[HermitianMatrix], rel_tol: f64) -> Result<CheckResult> {
    paired_eigenvalue_check_with(set, rel_tol, &Tolerances::default())
}

pub fn paired_eigenvalue_check_with(set: &[HermitianMatrix], rel_tol: f64, tol: &Tolerances) -> Result<CheckResult> {
    same_dimension(set)?;
    for a in 0..set.len() {
        for b in a + 1..set.len() {
            let c = commutator_i(&set[a], &set[b])?;
            let eig = hermitian_eigensystem_with(&c, tol)?;
            let spec = &eig.eigenvalues;
            let allowed = rel_tol * eig.spectral_norm();
            let defect = (0..spec.len()).map(|k| (spec[k] + spec[spec.len() - 1 - k]).abs()).fold(0.0, f64::max);
            if defect > allowed {
                return Ok(CheckResult {
                    name: "paired_eigenvalues".into(),
                    passed: false,
                    witness: Some(Witness::UnpairedSpectrum { pair: (a, b), spectrum: spec.clone(), defect, allowed }),
                });
            }
        }
    }
    Ok(CheckResult { name: "paired_eigenvalues".into(), passed: true, witness: None })
}

fn closure_rank(
    set: &[HermitianMatrix],
    basis: &GellMannBasis,
    table: &StructureConstantTable,
    tol: &Tolerances,
) -> Result<usize> {
    let vectors = set
        .iter()
        .map(|h| to_bloch_with(h, basis, tol.traceless))
        .collect::<Result<Vec<_>>>()?;
    Ok(star_closure(&vectors, table, tol.closure_rel)?.rank)
}

/// Star-closure rank at most (d^2 + d - 2)/2, the dimension of the X+D
/// subspace. The stated bound (d^2 + d - 1)/2 is never an integer, so both
/// comparisons agree; the witness records both numbers.
pub fn span_nogo_check(
    set: &[HermitianMatrix],
    basis: &GellMannBasis,
    table: &StructureConstantTable,
    tol: &Tolerances,
) -> Result<CheckResult> {
    let d = same_dimension(set)?;
    let rank = closure_rank(set, basis, table, tol)?;
    let bound = (d * d + d - 2) / 2;
    Ok(CheckResult {
        name: "span_rank".into(),
        passed: rank <= bound,
        witness: Some(Witness::SpanRank { rank, bound, stated_bound: (d * d + d) as f64 / 2.0 - 0.5 }),
    })
}

/// Simultaneous diagonalizability. The verdict is the commutator oracle
/// (all pairwise commutators vanish); the rank <= d - 1 condition is
/// reported beside it.
pub fn diag_nogo_check(
    set: &[HermitianMatrix],
    basis: &GellMannBasis,
    table: &StructureConstantTable,
    tol: &Tolerances,
) -> Result<CheckResult> {
    let d = same_dimension(set)?;
    let rank = closure_rank(set, basis, table, tol)?;
    let bound = d - 1;
    let mut max_commutator: f64 = 0.0;
    let mut first_noncommuting = None;
    for a in 0..set.len() {
        for b in a + 1..set.len() {
            let c = commutator_i(&set[a], &set[b])?.frobenius_norm();
            let scale = set[a].frobenius_norm() * set[b].frobenius_norm();
            max_commutator = max_commutator.max(c);
            if c > tol.commutator_rel * scale && first_noncommuting.is_none() {
                first_noncommuting = Some((a, b));
            }
        }
    }
    let commuting = first_noncommuting.is_none();
    Ok(CheckResult {
        name: "diagonalizability".into(),
        passed: commuting,
        witness: Some(Witness::Diagonalizability {
            rank,
            bound,
            rank_passed: rank <= bound,
            commuting,
            max_commutator,
            first_noncommuting,
        }),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub tolerances: Tolerances,
    pub curing: CuringConfig,
    pub run_curing: bool,
    /// Keep searching even after a necessary condition failed.
    pub cure_after_nogo: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self { tolerances: Tolerances::default(), curing: CuringConfig::default(), run_curing: true, cure_after_nogo: false }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    /// Membership of the (trace-shifted) input in the given basis.
    pub given_basis: CheckResult,
    /// Necessary conditions only.
    pub checks: Vec<CheckResult>,
    pub curing: Option<CuringResult>,
    pub tolerances: Tolerances,
    /// Tr H / d removed from each member before analysis.
    pub trace_shifts: Vec<f64>,
}

fn first_violation(set: &[HermitianMatrix], tol: f64) -> Option<Witness> {
    for (member, h) in set.iter().enumerate() {
        let n = h.dim();
        for row in 0..n {
            for col in 0..n {
                let z = h.get(row, col);
                if row != col && (z.re > tol || z.im.abs() > tol) {
                    return Some(Witness::OffDiagonal { member, row, col, re: z.re, im: z.im });
                }
            }
        }
    }
    None
}

/// Runs the membership test, the two no-go checks and optionally the
/// curing search, in that order.
pub fn analyze(
    set: &[HermitianMatrix],
    basis: &GellMannBasis,
    table: &StructureConstantTable,
    config: &AnalysisConfig,
) -> Result<Certificate> {
    let d = same_dimension(set)?;
    if d != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: d });
    }
    let tol = &config.tolerances;
    let (traceless, trace_shifts): (Vec<HermitianMatrix>, Vec<f64>) =
        set.iter().map(HermitianMatrix::traceless_part).unzip();

    let membership = match first_violation(&traceless, tol.stoquastic) {
        None => CheckResult { name: "stoquastic_as_given".into(), passed: true, witness: None },
        Some(w) => CheckResult { name: "stoquastic_as_given".into(), passed: false, witness: Some(w) },
    };
    if membership.passed {
        return Ok(Certificate {
            verdict: Verdict::StoquasticBasisFound,
            given_basis: membership,
            checks: Vec::new(),
            curing: Some(CuringResult::identity(&traceless, basis.len())),
            tolerances: *tol,
            trace_shifts,
        });
    }

    let mut checks = Vec::new();
    if traceless.len() >= 2 {
        checks.push(paired_eigenvalue_check_with(&traceless, tol.pairing_rel, tol)?);
    }
    checks.push(span_nogo_check(&traceless, basis, table, tol)?);
    let ruled_out = checks.iter().any(|c| !c.passed);

    let curing = if config.run_curing && (!ruled_out || config.cure_after_nogo) {
        Some(cure_search(&traceless, &config.curing, basis)?)
    } else {
        None
    };
    let verdict = if ruled_out {
        Verdict::NotStoquasticizable
    } else if curing.as_ref().is_some_and(|c| c.found) {
        Verdict::StoquasticBasisFound
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate { verdict, given_basis: membership, checks, curing, tolerances: *tol, trace_shifts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_gue_set;
    use crate::su_basis::{build_basis, structure_constants_analytic};

    fn setup(d: usize) -> (GellMannBasis, StructureConstantTable) {
        (build_basis(d).unwrap(), structure_constants_analytic(d).unwrap())
    }

    #[test]
    fn membership_examples() {
        let (b, _) = setup(2);
        assert!(is_stoquastic(&b.element(0).scale(-1.0), 0.0));
        assert!(!is_stoquastic(b.element(0), 0.0));
        assert!(!is_stoquastic(b.element(1), 0.0));
        assert!(is_stoquastic(&HermitianMatrix::from_real_diagonal(&[5.0, -1.0, 2.0]), 0.0));
    }

    #[test]
    fn real_pairs_are_paired() {
        let set = crate::curing::random_stoquastic_set(4, 3, 2).unwrap();
        assert!(paired_eigenvalue_check(&set, 1e-8).unwrap().passed);
        let qubits = random_gue_set(2, 3, 1).unwrap();
        assert!(paired_eigenvalue_check(&qubits, 1e-8).unwrap().passed);
    }

    #[test]
    fn generic_qutrit_pair_is_unpaired() {
        let set = random_gue_set(3, 2, 8).unwrap();
        let r = paired_eigenvalue_check(&set, 1e-8).unwrap();
        assert!(!r.passed);
        assert!(matches!(r.witness, Some(Witness::UnpairedSpectrum { pair: (0, 1), .. })));
    }

    #[test]
    fn span_check_examples() {
        let (b, t) = setup(3);
        let tol = Tolerances::default();
        let stoq = crate::curing::random_stoquastic_set(3, 3, 4).unwrap();
        assert!(span_nogo_check(&stoq, &b, &t, &tol).unwrap().passed);
        let gue = random_gue_set(3, 2, 4).unwrap();
        let r = span_nogo_check(&gue, &b, &t, &tol).unwrap();
        assert!(!r.passed);
        assert_eq!(r.witness, Some(Witness::SpanRank { rank: 8, bound: 5, stated_bound: 5.5 }));
        let (b2, t2) = setup(2);
        let r = span_nogo_check(&random_gue_set(2, 2, 1).unwrap(), &b2, &t2, &tol).unwrap();
        assert!(r.passed);
        assert!(matches!(r.witness, Some(Witness::SpanRank { rank: 2, bound: 2, .. })));
    }

    #[test]
    fn diag_check_examples() {
        let (b, t) = setup(2);
        let tol = Tolerances::default();
        let r = diag_nogo_check(&[b.element(0).clone(), b.element(2).clone()], &b, &t, &tol).unwrap();
        assert!(!r.passed);
        assert!(matches!(r.witness, Some(Witness::Diagonalizability { rank: 2, rank_passed: false, .. })));
        let (b3, t3) = setup(3);
        let diag = vec![
            HermitianMatrix::from_real_diagonal(&[1.0, 0.0, -1.0]),
            HermitianMatrix::from_real_diagonal(&[0.5, -1.5, 1.0]),
        ];
        let r = diag_nogo_check(&diag, &b3, &t3, &tol).unwrap();
        assert!(r.passed);
        assert!(matches!(r.witness, Some(Witness::Diagonalizability { rank: 2, rank_passed: true, .. })));
    }

    #[test]
    fn analyze_stoquastic_pair() {
        let (b, t) = setup(2);
        let set = vec![b.element(0).scale(-1.0), b.element(2).clone()];
        let cert = analyze(&set, &b, &t, &AnalysisConfig::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::StoquasticBasisFound);
        let cure = cert.curing.unwrap();
        assert_eq!(cure.unitary().as_matrix(), &crate::linalg::ComplexMatrix::identity(2));
    }

    #[test]
    fn analyze_generic_qutrits() {
        let (b, t) = setup(3);
        let cert = analyze(&random_gue_set(3, 2, 3).unwrap(), &b, &t, &AnalysisConfig::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::NotStoquasticizable);
        assert!(cert.curing.is_none());
        assert!(cert.checks.iter().any(|c| !c.passed && c.witness.is_some()));
    }

    #[test]
    fn analyze_rejects_bad_sets() {
        let (b, t) = setup(2);
        assert!(matches!(analyze(&[], &b, &t, &AnalysisConfig::default()), Err(Error::EmptySet)));
        let mixed = vec![HermitianMatrix::zeros(2), HermitianMatrix::zeros(3)];
        assert!(matches!(analyze(&mixed, &b, &t, &AnalysisConfig::default()), Err(Error::DimensionMismatch { .. })));
    }
}
