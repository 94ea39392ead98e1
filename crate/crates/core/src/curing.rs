//! Numerical search for a unitary that makes every member of a set stoquastic.
//!
//! The search minimizes the squared-hinge penalty of U(theta) H U(theta)^dag
//! over theta in R^(d^2-1), with U(theta) = exp(i theta . lambda). Gradients
//! are central finite differences and steps come from a backtracking line
//! search. Restarts draw theta uniformly from [-pi, pi]^(d^2-1); restart 0
//! always starts at theta = 0.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{conjugate, unitary_from_generator, ComplexMatrix, HermitianMatrix, UnitaryMatrix};
use crate::su_basis::GellMannBasis;

/// Restarts run in fixed-size batches so the number of restarts consumed
/// does not depend on the thread count.
const RESTART_BATCH: usize = 8;
const GRADIENT_FLOOR: f64 = 1e-12;
const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-18;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuringConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// A restart succeeds once the penalty is below this and no entry
    /// violates stoquasticity by more than ten times this.
    pub success_tol: f64,
    pub fd_step: f64,
    pub seed: u64,
    pub shrink: f64,
    pub initial_step: f64,
}

impl Default for CuringConfig {
    fn default() -> Self {
        Self { restarts: 50, max_iters: 2000, success_tol: 1e-10, fd_step: 1e-6, seed: 0, shrink: 0.5, initial_step: 0.1 }
    }
}

impl CuringConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.restarts == 0 || self.max_iters == 0 {
            return bad("restarts and max_iters must be positive");
        }
        if !(self.success_tol > 0.0 && self.success_tol < 1e-4) {
            return bad("success_tol must lie in (0, 1e-4)");
        }
        if !(self.fd_step > 0.0 && self.initial_step > 0.0) {
            return bad("fd_step and initial_step must be positive");
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return bad("shrink must lie in (0, 1)");
        }
        Ok(())
    }

    /// Slack used when re-checking a reported success with `is_stoquastic`.
    pub fn violation_tol(&self) -> f64 {
        10.0 * self.success_tol
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CuringResult {
    pub found: bool,
    pub theta: Vec<f64>,
    #[serde(skip)]
    pub unitary: Option<UnitaryMatrix>,
    #[serde(skip)]
    pub transformed: Vec<HermitianMatrix>,
    pub penalty: f64,
    pub max_violation: f64,
    pub restarts_used: usize,
    pub iterations_total: usize,
    /// Index of the restart the result came from.
    pub best_restart: usize,
    pub note: String,
}

impl CuringResult {
    pub fn unitary(&self) -> &UnitaryMatrix {
        self.unitary.as_ref().expect("curing result carries its unitary")
    }

    /// Wraps an input that is already stoquastic.
    pub fn identity(set: &[HermitianMatrix], basis_len: usize) -> Self {
        let d = set.first().map_or(1, HermitianMatrix::dim);
        Self {
            found: true,
            theta: vec![0.0; basis_len],
            unitary: Some(UnitaryMatrix::identity(d)),
            transformed: set.to_vec(),
            penalty: stoq_penalty(set),
            max_violation: max_violation(set),
            restarts_used: 0,
            iterations_total: 0,
            best_restart: 0,
            note: "input already stoquastic".into(),
        }
    }
}

const NOT_A_PROOF: &str = "no curing unitary found; this is not a proof that none exists";

/// sum over members and off-diagonal (j, k) of max(0, Re H_jk)^2 + (Im H_jk)^2.
pub fn stoq_penalty(set: &[HermitianMatrix]) -> f64 {
    let mut total = 0.0;
    for h in set {
        let n = h.dim();
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    let z = h.get(r, c);
                    let hinge = z.re.max(0.0);
                    total += hinge * hinge + z.im * z.im;
                }
            }
        }
    }
    total
}

/// Largest single off-diagonal violation, max(Re H_jk, |Im H_jk|, 0).
pub fn max_violation(set: &[HermitianMatrix]) -> f64 {
    let mut worst: f64 = 0.0;
    for h in set {
        let n = h.dim();
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    let z = h.get(r, c);
                    worst = worst.max(z.re).max(z.im.abs());
                }
            }
        }
    }
    worst
}

struct Objective<'a> {
    set: &'a [HermitianMatrix],
    basis: &'a GellMannBasis,
}

impl Objective<'_> {
    fn transform(&self, theta: &[f64]) -> Result<(UnitaryMatrix, Vec<HermitianMatrix>)> {
        let u = unitary_from_generator(theta, self.basis)?;
        let out = self.set.iter().map(|h| conjugate(&u, h)).collect::<Result<Vec<_>>>()?;
        Ok((u, out))
    }

    fn value(&self, theta: &[f64]) -> Result<f64> {
        Ok(stoq_penalty(&self.transform(theta)?.1))
    }

    fn gradient(&self, theta: &[f64], h: f64) -> Result<Vec<f64>> {
        let mut probe = theta.to_vec();
        let mut g = Vec::with_capacity(theta.len());
        for k in 0..theta.len() {
            probe[k] = theta[k] + h;
            let up = self.value(&probe)?;
            probe[k] = theta[k] - h;
            let down = self.value(&probe)?;
            probe[k] = theta[k];
            g.push((up - down) / (2.0 * h));
        }
        Ok(g)
    }
}

/// Central-difference gradient of theta -> stoq_penalty(U(theta) S U(theta)^dag).
pub fn penalty_gradient(set: &[HermitianMatrix], basis: &GellMannBasis, theta: &[f64], step: f64) -> Result<Vec<f64>> {
    Objective { set, basis }.gradient(theta, step)
}

/// theta -> stoq_penalty(U(theta) S U(theta)^dag).
pub fn penalty_at(set: &[HermitianMatrix], basis: &GellMannBasis, theta: &[f64]) -> Result<f64> {
    Objective { set, basis }.value(theta)
}

struct RestartOutcome {
    theta: Vec<f64>,
    penalty: f64,
    violation: f64,
    iterations: usize,
    success: bool,
}

fn descend(obj: &Objective<'_>, mut theta: Vec<f64>, cfg: &CuringConfig) -> Result<RestartOutcome> {
    let done = |penalty: f64, violation: f64| penalty < cfg.success_tol && violation <= cfg.violation_tol();
    let (_, transformed) = obj.transform(&theta)?;
    let mut f = stoq_penalty(&transformed);
    let mut violation = max_violation(&transformed);
    let mut step = cfg.initial_step;
    let mut iterations = 0;
    let mut previous: Option<(Vec<f64>, Vec<f64>)> = None;
    while iterations < cfg.max_iters && !done(f, violation) {
        iterations += 1;
        let g = obj.gradient(&theta, cfg.fd_step)?;
        let g2: f64 = g.iter().map(|x| x * x).sum();
        if g2.sqrt() < GRADIENT_FLOOR {
            break;
        }
        // Barzilai-Borwein guess for the first trial step
        if let Some((s, g_old)) = &previous {
            let sy: f64 = s.iter().zip(g.iter().zip(g_old)).map(|(si, (a, b))| si * (a - b)).sum();
            let ss: f64 = s.iter().map(|x| x * x).sum();
            if sy > 0.0 {
                step = ss / sy;
            }
        }
        let mut t = step;
        let accepted = loop {
            let candidate: Vec<f64> = theta.iter().zip(&g).map(|(x, gi)| x - t * gi).collect();
            let (_, moved) = obj.transform(&candidate)?;
            let fc = stoq_penalty(&moved);
            if fc <= f - ARMIJO * t * g2 {
                break Some((candidate, fc, max_violation(&moved)));
            }
            t *= cfg.shrink;
            if t < MIN_STEP {
                break None;
            }
        };
        let Some((next, fc, vc)) = accepted else { break };
        let s: Vec<f64> = next.iter().zip(&theta).map(|(a, b)| a - b).collect();
        previous = Some((s, g));
        theta = next;
        f = fc;
        violation = vc;
        step = 2.0 * t;
    }
    Ok(RestartOutcome { theta, penalty: f, violation, iterations, success: done(f, violation) })
}

fn start_point(restart: usize, n: usize, seed: u64) -> Vec<f64> {
    if restart == 0 {
        return vec![0.0; n];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    (0..n).map(|_| rng.random_range(-std::f64::consts::PI..=std::f64::consts::PI)).collect()
}

/// Multi-start minimization of the stoquasticity penalty over SU(d).
///
/// Restart 0 starts from the identity and runs alone, later restarts run in
/// parallel batches of fixed size. The search stops after the first batch
/// that contains a success. Among finished restarts the result prefers
/// successes, then the smallest penalty, then the lowest restart index, so it
/// is the same regardless of scheduling.
pub fn cure_search(set: &[HermitianMatrix], config: &CuringConfig, basis: &GellMannBasis) -> Result<CuringResult> {
    config.validate()?;
    let d = set.first().ok_or(Error::EmptySet)?.dim();
    if d != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: d });
    }
    for h in set {
        if h.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: h.dim() });
        }
    }
    let obj = Objective { set, basis };
    let n = basis.len();

    let mut outcomes: Vec<(usize, RestartOutcome)> = vec![(0, descend(&obj, start_point(0, n, config.seed), config)?)];
    let mut next = 1;
    while !outcomes.iter().any(|(_, o)| o.success) && next < config.restarts {
        let end = (next + RESTART_BATCH).min(config.restarts);
        let batch = (next..end)
            .into_par_iter()
            .map(|r| descend(&obj, start_point(r, n, config.seed), config).map(|o| (r, o)))
            .collect::<Result<Vec<_>>>()?;
        outcomes.extend(batch);
        next = end;
    }

    let iterations_total = outcomes.iter().map(|(_, o)| o.iterations).sum();
    let restarts_used = outcomes.len();
    let (best_restart, best) = outcomes
        .into_iter()
        .min_by(|(ia, a), (ib, b)| {
            b.success.cmp(&a.success).then(a.penalty.total_cmp(&b.penalty)).then(ia.cmp(ib))
        })
        .expect("at least one restart ran");
    let (unitary, transformed) = obj.transform(&best.theta)?;
    Ok(CuringResult {
        found: best.success,
        theta: best.theta,
        unitary: Some(unitary),
        transformed,
        penalty: best.penalty,
        max_violation: best.violation,
        restarts_used,
        iterations_total,
        best_restart,
        note: if best.success { "curing unitary found".into() } else { NOT_A_PROOF.into() },
    })
}

/// Random traceless stoquastic matrix: symmetric off-diagonals -|N(0,1)|,
/// Gaussian diagonal with the mean removed.
pub fn random_stoquastic_with<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<HermitianMatrix> {
    if d < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: d });
    }
    let mut m = ComplexMatrix::zeros(d);
    for r in 0..d {
        let diag: f64 = rng.sample(StandardNormal);
        m.set(r, r, diag.into());
        for c in r + 1..d {
            let g: f64 = rng.sample(StandardNormal);
            m.set(r, c, (-g.abs()).into());
            m.set(c, r, (-g.abs()).into());
        }
    }
    Ok(HermitianMatrix::hermitize(&m).traceless_part().0)
}

pub fn random_stoquastic_set(d: usize, m: usize, seed: u64) -> Result<Vec<HermitianMatrix>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m).map(|_| random_stoquastic_with(d, &mut rng)).collect()
}

/// A scrambled stoquastic set with its known curing generator.
#[derive(Clone, Debug)]
pub struct PlantedInstance {
    /// V H V^dag for each stoquastic H.
    pub hamiltonians: Vec<HermitianMatrix>,
    /// Generator of V.
    pub theta_star: Vec<f64>,
    /// The stoquastic set before scrambling.
    pub stoquastic: Vec<HermitianMatrix>,
}

impl PlantedInstance {
    /// The scrambling unitary V.
    pub fn scrambler(&self, basis: &GellMannBasis) -> Result<UnitaryMatrix> {
        unitary_from_generator(&self.theta_star, basis)
    }
}

pub fn plant_instance(d: usize, m: usize, seed: u64, basis: &GellMannBasis) -> Result<PlantedInstance> {
    if m == 0 {
        return Err(Error::EmptySet);
    }
    if basis.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: basis.dim() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stoquastic = (0..m).map(|_| random_stoquastic_with(d, &mut rng)).collect::<Result<Vec<_>>>()?;
    let theta_star: Vec<f64> =
        (0..basis.len()).map(|_| rng.random_range(-std::f64::consts::PI..=std::f64::consts::PI)).collect();
    let v = unitary_from_generator(&theta_star, basis)?;
    let hamiltonians = stoquastic.iter().map(|h| conjugate(&v, h)).collect::<Result<Vec<_>>>()?;
    Ok(PlantedInstance { hamiltonians, theta_star, stoquastic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_gue_set;
    use crate::su_basis::build_basis;

    #[test]
    fn penalty_examples() {
        let b = build_basis(2).unwrap();
        let x = b.element(0).clone();
        assert_eq!(stoq_penalty(std::slice::from_ref(&x)), 2.0);
        assert_eq!(stoq_penalty(&[x.scale(-1.0)]), 0.0);
        assert_eq!(stoq_penalty(&random_stoquastic_set(4, 3, 1).unwrap()), 0.0);
        // sigma_y: imaginary off-diagonals of modulus one
        assert_eq!(stoq_penalty(&[b.element(1).clone()]), 2.0);
    }

    #[test]
    fn penalty_is_permutation_invariant() {
        let set = random_gue_set(3, 3, 4).unwrap();
        let mut rev = set.clone();
        rev.reverse();
        assert!((stoq_penalty(&set) - stoq_penalty(&rev)).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(CuringConfig::default().validate().is_ok());
        assert!(CuringConfig { success_tol: 1e-3, ..Default::default() }.validate().is_err());
        assert!(CuringConfig { restarts: 0, ..Default::default() }.validate().is_err());
        assert!(CuringConfig { shrink: 1.0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn stoquastic_input_is_found_immediately() {
        let basis = build_basis(3).unwrap();
        let set = random_stoquastic_set(3, 2, 9).unwrap();
        let r = cure_search(&set, &CuringConfig::default(), &basis).unwrap();
        assert!(r.found);
        assert_eq!(r.restarts_used, 1);
        assert_eq!(r.iterations_total, 0);
        assert_eq!(r.penalty, 0.0);
        assert!(r.unitary().as_matrix().max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn planted_set_unscrambles() {
        let basis = build_basis(3).unwrap();
        let p = plant_instance(3, 2, 5, &basis).unwrap();
        assert_eq!(stoq_penalty(&p.stoquastic), 0.0);
        let v = p.scrambler(&basis).unwrap();
        let back: Vec<_> = p.hamiltonians.iter().map(|h| conjugate(&v.adjoint(), h).unwrap()).collect();
        assert!(stoq_penalty(&back) < 1e-24);
        assert!(max_violation(&back) < 1e-12);
        assert!(stoq_penalty(&p.hamiltonians) > 0.0);
    }

    #[test]
    fn gradient_is_self_consistent() {
        let basis = build_basis(3).unwrap();
        let set = random_gue_set(3, 2, 21).unwrap();
        let theta: Vec<f64> = (0..8).map(|k| 0.1 * k as f64 - 0.3).collect();
        let g1 = penalty_gradient(&set, &basis, &theta, 1e-6).unwrap();
        let g2 = penalty_gradient(&set, &basis, &theta, 5e-7).unwrap();
        let n: f64 = g1.iter().map(|x| x * x).sum::<f64>().sqrt();
        let diff: f64 = g1.iter().zip(&g2).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        assert!(diff <= 1e-3 * n, "diff {diff} norm {n}");
    }
}
