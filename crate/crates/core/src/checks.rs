//! Seeded property suites for the numeric core, runnable outside the test harness.
//!
//! Every suite is a pure function of its seed, so two runs with the same seed print identical
//! reports.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::cohomology::{
    boundary2, boundary3, builtin_hopf_data, coboundary, cocycle_identity_defect, hopf_to_bar, is_cycle, kronecker,
    random_chain3, random_element, random_gamma, Chain2, Cocycle2,
};
use crate::error::{Error, Result};
use crate::groups::GroupModel;
use crate::linalg::random::{random_invertible, random_near_identity, random_projection, random_unitary, rng, split_seed};
use crate::linalg::{expm, log_near_identity, op_norm, unitary_log, TraceKind};
use crate::predeterminant::{l_tau, path_predeterminant, projection_loop, PathOfInvertibles};
use crate::scalar::Complex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Predet,
    Chains,
    Logs,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "predet" => Ok(Suite::Predet),
            "chains" => Ok(Suite::Chains),
            "logs" => Ok(Suite::Logs),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!("unknown suite {other:?} (expected predet, chains, logs or all)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub name: &'static str,
    pub samples: usize,
    /// Largest observed violation measure.
    pub worst: f64,
    pub tolerance: f64,
    /// First error raised by the code under test, if any.
    pub error: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.worst <= self.tolerance
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}/{}: {} samples, worst {:.3e} (tol {:.0e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.samples,
            self.worst,
            self.tolerance
        )?;
        if let Some(e) = &self.error {
            write!(f, ", error: {e}")?;
        }
        Ok(())
    }
}

struct Tracker {
    outcome: CheckOutcome,
}

impl Tracker {
    fn new(suite: &'static str, name: &'static str, tolerance: f64) -> Self {
        Self { outcome: CheckOutcome { suite, name, samples: 0, worst: 0.0, tolerance, error: None } }
    }

    fn record(&mut self, gap: Result<f64>) {
        self.outcome.samples += 1;
        match gap {
            Ok(g) if g.is_nan() => self.outcome.worst = f64::INFINITY,
            Ok(g) => self.outcome.worst = self.outcome.worst.max(g),
            Err(e) => {
                if self.outcome.error.is_none() {
                    self.outcome.error = Some(e.to_string());
                }
            }
        }
    }

    fn finish(self) -> CheckOutcome {
        self.outcome
    }
}

fn stream(seed: u64, property: u64, sample: u64) -> u64 {
    split_seed(split_seed(seed, property), sample)
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckOutcome> {
    match suite {
        Suite::Predet => predet_suite(seed),
        Suite::Chains => chains_suite(seed),
        Suite::Logs => logs_suite(seed),
        Suite::All => [predet_suite(seed), chains_suite(seed), logs_suite(seed)].concat(),
    }
}

fn gap(a: Complex<f64>, b: Complex<f64>) -> f64 {
    (a - b).norm()
}

pub fn predet_suite(seed: u64) -> Vec<CheckOutcome> {
    const S: &str = "predet";
    let kinds = [TraceKind::Normalized, TraceKind::Unnormalized];

    let mut additivity = Tracker::new(S, "additivity", 1e-9);
    for i in 0..500 {
        let mut r = rng(stream(seed, 0, i));
        let dim = r.random_range(1..=8);
        let (r1, r2) = (r.random_range(0.0..0.25), r.random_range(0.0..0.25));
        let u1 = random_near_identity::<f64>(dim, r1, r.random());
        let u2 = random_near_identity::<f64>(dim, r2, r.random());
        let kind = kinds[i as usize % 2];
        additivity.record((|| Ok(gap(l_tau(&(&u1 * &u2), kind)?, l_tau(&u1, kind)? + l_tau(&u2, kind)?)))());
    }

    // ‖u − 1‖ < 0.95/cond(v) keeps vuv⁻¹ inside the domain of L_τ
    let mut conjugation = Tracker::new(S, "conjugation_invariance", 1e-8);
    let mut inverse = Tracker::new(S, "inverse_antisymmetry", 1e-9);
    for i in 0..500 {
        let mut r = rng(stream(seed, 1, i));
        let dim = r.random_range(1..=8);
        let cond = if dim == 1 { 1.0 } else { r.random_range(1.0..=100.0) };
        let radius = 0.95 * r.random_range(0.0..1.0) / cond;
        let u = random_near_identity::<f64>(dim, radius, r.random());
        let v = random_invertible::<f64>(dim, cond, r.random());
        let kind = kinds[i as usize % 2];
        conjugation.record((|| {
            let conj = &(&v * &u) * &v.inverse()?;
            Ok(gap(l_tau(&conj, kind)?, l_tau(&u, kind)?))
        })());
        let w = random_near_identity::<f64>(dim, r.random_range(0.0..0.45), r.random());
        inverse.record((|| Ok(gap(l_tau(&w.inverse()?, kind)?, -l_tau(&w, kind)?)))());
    }

    let mut projection = Tracker::new(S, "projection_loop", 1e-8);
    for i in 0..50 {
        let mut r = rng(stream(seed, 2, i));
        let dim = r.random_range(1..=10);
        let rank = r.random_range(0..=dim);
        projection.record((|| {
            let p = random_projection::<f64>(dim, rank, r.random())?;
            let value = path_predeterminant(&projection_loop(&p, 64)?, TraceKind::Unnormalized)?;
            Ok(gap(value, Complex::new(rank as f64, 0.0)))
        })());
    }

    let mut product = Tracker::new(S, "path_product", 1e-8);
    let mut refinement = Tracker::new(S, "refinement_stability", 1e-9);
    for i in 0..50 {
        let mut r = rng(stream(seed, 3, i));
        let dim = r.random_range(1..=6);
        let a = random_near_identity::<f64>(dim, 1.5, r.random()).minus_identity();
        let b = random_near_identity::<f64>(dim, 1.5, r.random()).minus_identity();
        let kind = kinds[i as usize % 2];
        product.record((|| {
            let xi = PathOfInvertibles::from_fn(48, |t| expm(&a.scale_real(t)))?;
            let eta = PathOfInvertibles::from_fn(48, |t| expm(&b.scale_real(t)))?;
            let both = xi.pointwise_product(&eta)?;
            Ok(gap(
                path_predeterminant(&both, kind)?,
                path_predeterminant(&xi, kind)? + path_predeterminant(&eta, kind)?,
            ))
        })());
        let (u0, u1) = (random_near_identity::<f64>(dim, 0.4, r.random()), random_near_identity::<f64>(dim, 0.4, r.random()));
        let line = |t: f64| &u0.scale_real(1.0 - t) + &u1.scale_real(t);
        refinement.record((|| {
            let coarse = PathOfInvertibles::from_fn(9, line)?;
            let fine = PathOfInvertibles::from_fn(17, line)?;
            Ok(gap(path_predeterminant(&coarse, kind)?, path_predeterminant(&fine, kind)?))
        })());
    }

    [additivity, conjugation, inverse, projection, product, refinement].into_iter().map(Tracker::finish).collect()
}

pub fn chains_suite(seed: u64) -> Vec<CheckOutcome> {
    const S: &str = "chains";
    let models = [GroupModel::Zd(2), GroupModel::Heisenberg, GroupModel::Zd(3), GroupModel::Free(2)];

    let mut dd = Tracker::new(S, "boundary_squared_zero", 0.0);
    for i in 0..1000 {
        let mut r = rng(stream(seed, 10, i));
        let model = models[i as usize % models.len()];
        dd.record((|| {
            let c = random_chain3(model, r.random_range(1..=4), 3, &mut r)?;
            Ok(boundary2(&boundary3(&c)?)?.len() as f64)
        })());
    }

    let mut cob = Tracker::new(S, "coboundary_pairing_zero", 1e-12);
    let hopf_cycles: Vec<Chain2> = builtin_hopf_data()
        .map(|d| d.into_iter().filter_map(|(_, pairs)| hopf_to_bar(&pairs).ok()).collect())
        .unwrap_or_default();
    for i in 0..100 {
        let mut r = rng(stream(seed, 11, i));
        let model = [GroupModel::Zd(2), GroupModel::Heisenberg][i as usize % 2];
        cob.record((|| {
            let sigma = coboundary(model, random_gamma(r.random()))?;
            let mut worst: f64 = 0.0;
            for _ in 0..5 {
                let c = boundary3(&random_chain3(model, r.random_range(1..=4), 3, &mut r)?)?;
                worst = worst.max(kronecker(&sigma, &c)?.abs());
            }
            for c in hopf_cycles.iter().filter(|c| c.model() == Some(model)) {
                worst = worst.max(kronecker(&sigma, c)?.abs());
            }
            Ok(worst)
        })());
    }

    let mut cocycle = Tracker::new(S, "standard_cocycle_identity", 0.0);
    let sigma = Cocycle2::<i64>::standard_z2();
    for i in 0..1000 {
        let mut r = rng(stream(seed, 12, i));
        cocycle.record((|| {
            let [a, b, c] = [(); 3].map(|_| random_element(GroupModel::Zd(2), 5, &mut r));
            let (a, b, c) = (a?, b?, c?);
            let e = GroupModel::Zd(2).identity()?;
            let degenerate = sigma.eval(&a, &e)?.abs() + sigma.eval(&e, &a)?.abs();
            Ok((cocycle_identity_defect(&sigma, &a, &b, &c)?.abs() + degenerate) as f64)
        })());
    }

    let mut hopf = Tracker::new(S, "hopf_to_bar_cycles", 0.0);
    match builtin_hopf_data() {
        Ok(data) => {
            for (_, pairs) in data {
                hopf.record((|| Ok(if is_cycle(&hopf_to_bar(&pairs)?)? { 0.0 } else { 1.0 }))());
            }
        }
        Err(e) => hopf.record(Err(e)),
    }

    [dd, cob, cocycle, hopf].into_iter().map(Tracker::finish).collect()
}

pub fn logs_suite(seed: u64) -> Vec<CheckOutcome> {
    const S: &str = "logs";

    let mut near = Tracker::new(S, "exp_log_near_identity", 1e-10);
    let mut bound = Tracker::new(S, "log_norm_bound", 0.0);
    for i in 0..1000 {
        let mut r = rng(stream(seed, 20, i));
        let dim = r.random_range(1..=8);
        let radius = r.random_range(0.0..0.9);
        let u = random_near_identity::<f64>(dim, radius, r.random());
        near.record((|| op_norm(&(&expm(&log_near_identity(&u)?) - &u)))());
        if radius < 0.5 {
            bound.record((|| {
                let excess = op_norm(&log_near_identity(&u)?)? - 2.0 * op_norm(&u.minus_identity())?;
                Ok(excess.max(0.0))
            })());
        }
    }

    let mut unitary = Tracker::new(S, "exp_log_unitary", 1e-8);
    let mut skew = Tracker::new(S, "unitary_log_skew_hermitian", 1e-8);
    for i in 0..1000 {
        let mut r = rng(stream(seed, 21, i));
        let dim = r.random_range(1..=8);
        let u = random_unitary::<f64>(dim, r.random());
        match unitary_log(&u) {
            Ok(l) => {
                unitary.record(op_norm(&(&expm(&l) - &u)));
                skew.record(op_norm(&(&l + &l.adjoint())));
            }
            Err(e) => {
                unitary.record(Err(e.clone()));
                skew.record(Err(e));
            }
        }
    }

    [near, bound, unitary, skew].into_iter().map(Tracker::finish).collect()
}

/// Convenience for callers that only need the verdict.
pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(CheckOutcome::passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_are_deterministic() {
        let first = run_suite(Suite::Chains, 5);
        assert!(all_passed(&first), "{first:#?}");
        assert_eq!(first, run_suite(Suite::Chains, 5));
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("predet".parse::<Suite>().unwrap(), Suite::Predet);
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn outcome_formatting() {
        let mut t = Tracker::new("x", "y", 1e-9);
        t.record(Ok(1e-12));
        let ok = t.finish();
        assert!(ok.passed());
        assert!(ok.to_string().starts_with("[PASS] x/y: 1 samples"));
        let mut t = Tracker::new("x", "y", 1e-9);
        t.record(Err(Error::NotACycle));
        assert!(!t.finish().passed());
    }
}
