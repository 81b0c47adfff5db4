//! The defect cocycle `ω`, its pairing with 2-cycles by the bar and Hopf routes, integrality
//! checks and sweeps over the family index.

use std::fmt;

use nalgebra::ComplexField;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::almostrep::{amplify, defect_report, generator_window, perturb, AlmostRep, Family};
use crate::cohomology::{is_cycle, standard_z2_cycle, Chain2, ChainTerm};
use crate::error::{Error, Result};
use crate::groups::{GroupElement, GroupModel, Word};
use crate::linalg::random::split_seed;
use crate::linalg::{log_near_identity, op_norm, unitary_log, ComplexMatrix, TraceKind};
use crate::predeterminant::{l_tau, Lattice};
use crate::scalar::{inv_two_pi_i, Complex, Real};

/// Residual below which a pairing counts as a lattice point.
pub const INTEGRALITY_TOL: f64 = 1e-6;
/// Allowed gap between the bar and Hopf routes, and between the termwise and product forms.
pub const ROUTE_TOL: f64 = 1e-8;

fn into_defect_error(e: Error) -> Error {
    match e {
        Error::OutsideLogDomain { distance } => Error::DefectTooLarge { distance },
        other => other,
    }
}

/// `ω(s,t) = L_τ(ρ(s)ρ(t)ρ(st)⁻¹)`.
pub fn omega<T: Real>(rep: &AlmostRep<T>, s: &GroupElement, t: &GroupElement) -> Result<Complex<T>> {
    l_tau(&rep.defect(s, t)?, rep.trace_kind()).map_err(into_defect_error)
}

/// `⟨[ρ], [c]⟩ = Σ k_j ω(a_j, b_j)` for a 2-cycle `c = Σ k_j [a_j|b_j]`.
///
/// Each defect must satisfy `‖d_j − 1‖ < 1`. When every defect is within `1/4` and
/// `Σ |k_j|·(−ln(1 − ‖d_j − 1‖)) < ln 2`, the path `t ↦ ∏ exp(t·k_j log d_j)` stays in the log
/// domain, so `L_τ(∏ d_j^{k_j})` must equal the termwise sum exactly; it is then computed as a
/// cross-check and a gap above `1e-8` is an error.
pub fn pairing_bar<T: Real>(rep: &AlmostRep<T>, c: &Chain2) -> Result<Complex<T>> {
    if !is_cycle(c)? {
        return Err(Error::NotACycle);
    }
    let kind = rep.trace_kind();
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut product = ComplexMatrix::identity(rep.dim());
    let mut all_close = true;
    let mut budget = 0.0;
    for ((a, b), k) in c.terms() {
        let d = rep.defect(a, b)?;
        let gap = op_norm(&d.minus_identity())?.as_f64();
        if gap >= 1.0 {
            return Err(Error::DefectTooLarge { distance: gap });
        }
        let log = log_near_identity(&d).map_err(into_defect_error)?;
        sum += log.trace(kind) * inv_two_pi_i::<T>() * T::from_i64(k).expect("coefficient fits");
        all_close &= gap < 0.25;
        budget += k.unsigned_abs() as f64 * -(1.0 - gap).ln();
        if all_close && budget < std::f64::consts::LN_2 {
            product = &product * &d.pow(k)?;
        }
    }
    if all_close && budget < std::f64::consts::LN_2 {
        let whole = l_tau(&product, kind).map_err(into_defect_error)?;
        let gap = (whole - sum).modulus().as_f64();
        if gap > T::tol(ROUTE_TOL).as_f64() {
            return Err(Error::CrossCheckFailed { termwise: format!("{sum}"), product: format!("{whole}"), gap });
        }
    }
    Ok(sum)
}

/// `L_τ(∏ [ρ(a_i), ρ(b_i)])` through the principal unitary logarithm, so the commutator product
/// may lie far from the identity.
pub fn pairing_hopf<T: Real>(rep: &AlmostRep<T>, pairs: &[(Word, Word)]) -> Result<Complex<T>> {
    let mut product = ComplexMatrix::identity(rep.dim());
    for (a, b) in pairs {
        let (ra, rb) = (rep.evaluate_word(a)?, rep.evaluate_word(b)?);
        let (ra_inv, rb_inv) = (rep.evaluate_word_inverse(a)?, rep.evaluate_word_inverse(b)?);
        product = &product * &(&(&ra * &rb) * &(&ra_inv * &rb_inv));
    }
    let log = unitary_log(&product).map_err(|e| match e {
        Error::BranchCut { distance } => Error::AmbiguousBranch { distance },
        other => other,
    })?;
    Ok(log.trace(rep.trace_kind()) * inv_two_pi_i::<T>())
}

/// Nearest lattice index and distance; the index is dropped when the distance reaches
/// [`INTEGRALITY_TOL`].
pub fn winding<T: Real>(pairing: Complex<T>, lat: Lattice<T>) -> (Option<i64>, T) {
    let (k, residual) = lat.nearest_complex(pairing);
    (if residual < T::tol(INTEGRALITY_TOL) { Some(k) } else { None }, residual)
}

/// `|pairing_bar(ρ ⊗ 1_m, c) − pairing_bar(ρ, c)| < 1e-9`.
pub fn invariance_check<T: Real>(rep: &AlmostRep<T>, c: &Chain2, m: usize) -> Result<bool> {
    let base = pairing_bar(rep, c)?;
    let amplified = pairing_bar(&amplify(rep, m)?, c)?;
    Ok((amplified - base).modulus() < T::tol(1e-9))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Bar,
    Hopf,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Bar => "bar",
            Route::Hopf => "hopf",
        })
    }
}

/// One pairing at one family index. Numeric failures leave the value fields empty and set
/// `error`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub n: usize,
    pub dim: usize,
    pub theta: f64,
    pub route: Route,
    pub pairing_re: Option<f64>,
    pub pairing_im: Option<f64>,
    pub winding: Option<i64>,
    pub lattice_residual: Option<f64>,
    pub defect_sup: Option<f64>,
    pub defect_p2: Option<f64>,
    pub error: Option<String>,
}

impl PairingReport {
    pub fn pairing(&self) -> Option<Complex<f64>> {
        Some(Complex::new(self.pairing_re?, self.pairing_im?))
    }

    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            n: self.n,
            dim: self.dim,
            theta: self.theta,
            route: self.route,
            pairing_re: self.pairing_re,
            pairing_im: self.pairing_im,
            winding: self.winding,
            lattice_residual: self.lattice_residual,
            defect_op: self.defect_sup,
            defect_p2: self.defect_p2,
        }
    }
}

/// The CSV layout of a [`PairingReport`]; empty cells stand for missing values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub n: usize,
    pub dim: usize,
    pub theta: f64,
    pub route: Route,
    pub pairing_re: Option<f64>,
    pub pairing_im: Option<f64>,
    pub winding: Option<i64>,
    pub lattice_residual: Option<f64>,
    pub defect_op: Option<f64>,
    pub defect_p2: Option<f64>,
}

pub fn reports_to_csv(reports: &[PairingReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(r.csv_row()).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn csv_to_rows(text: &str) -> Result<Vec<CsvRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

/// Which cycle a sweep pairs against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleSpec {
    /// The family's commutator relator, by both routes where a bar cycle exists.
    Hopf,
    /// `[x|y] − [y|x]` in `ℤ²`, by both routes.
    Standard,
    /// An explicit chain, by the bar route only.
    Terms(Vec<ChainTerm>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(flatten)]
    pub family: Family,
    pub cycle: CycleSpec,
    pub n_grid: Vec<usize>,
    pub ps: Vec<f64>,
    pub trace: TraceKind,
    pub eps_perturb: f64,
    pub seed: u64,
    /// Smallest index whose winding enters the verdict.
    pub n0: usize,
    /// The op defect at the largest index must fall below this.
    pub defect_threshold: f64,
}

impl SweepConfig {
    pub fn new(family: Family, cycle: CycleSpec, n_grid: Vec<usize>) -> Self {
        Self {
            family,
            cycle,
            n_grid,
            ps: vec![2.0, f64::INFINITY],
            trace: TraceKind::Unnormalized,
            eps_perturb: 0.0,
            seed: 0,
            n0: 8,
            defect_threshold: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(Error::InvalidInput("n_grid is empty".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("n_grid must be strictly ascending".into()));
        }
        if self.n_grid[0] < 2 {
            return Err(Error::InvalidInput("family indices start at 2".into()));
        }
        if let Some(&p) = self.ps.iter().find(|&&p| p.is_nan() || p <= 1.0) {
            return Err(Error::UnsupportedExponent(p));
        }
        if !(0.0..0.1).contains(&self.eps_perturb) {
            return Err(Error::InvalidInput(format!("eps_perturb must lie in [0, 0.1), got {}", self.eps_perturb)));
        }
        if self.defect_threshold.is_nan() || self.defect_threshold <= 0.0 {
            return Err(Error::InvalidInput("defect_threshold must be positive".into()));
        }
        match (&self.cycle, self.family.model()) {
            (CycleSpec::Standard, m) if m != GroupModel::Zd(2) => {
                Err(Error::InvalidInput(format!("the standard cycle lives on Z^2, not {m}")))
            }
            (CycleSpec::Terms(_), m) if !m.has_normal_form() => Err(Error::NoNormalForm(m.to_string())),
            (CycleSpec::Terms(terms), m) => {
                if is_cycle(&Chain2::from_chain_terms(m, terms)?)? {
                    Ok(())
                } else {
                    Err(Error::NotACycle)
                }
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepVerdict {
    pub reports: Vec<PairingReport>,
    pub obstruction_present: bool,
    pub reason: String,
}

/// Runs the configured family over `n_grid`, in parallel across indices. Per-index failures are
/// recorded in the reports; only an invalid configuration is an error.
pub fn sweep(config: &SweepConfig) -> Result<SweepVerdict> {
    config.validate()?;
    let per_n: Vec<Vec<PairingReport>> = config.n_grid.par_iter().map(|&n| sweep_point::<f64>(config, n)).collect();
    let reports: Vec<PairingReport> = per_n.into_iter().flatten().collect();
    let (obstruction_present, reason) = verdict(&reports, config);
    Ok(SweepVerdict { reports, obstruction_present, reason })
}

struct Routes {
    bar: Option<Chain2>,
    hopf: Option<Vec<(Word, Word)>>,
}

fn routes<T: Real>(config: &SweepConfig, rep: &AlmostRep<T>) -> Result<Routes> {
    Ok(match &config.cycle {
        CycleSpec::Hopf => Routes { bar: rep.default_cycle()?, hopf: Some(rep.hopf_pairs()?) },
        CycleSpec::Standard => Routes { bar: Some(standard_z2_cycle()), hopf: Some(rep.hopf_pairs()?) },
        CycleSpec::Terms(terms) => Routes { bar: Some(Chain2::from_chain_terms(rep.model(), terms)?), hopf: None },
    })
}

/// Builds the rep for index `n`, perturbed from the per-index stream of the config seed.
pub fn sweep_rep<T: Real>(config: &SweepConfig, n: usize) -> Result<AlmostRep<T>> {
    let rep = config.family.build::<T>(n)?.with_trace_kind(config.trace);
    if config.eps_perturb > 0.0 {
        perturb(&rep, config.eps_perturb, split_seed(config.seed, n as u64))
    } else {
        Ok(rep)
    }
}

fn sweep_point<T: Real>(config: &SweepConfig, n: usize) -> Vec<PairingReport> {
    let blank = |route: Route, dim: usize, error: String| PairingReport {
        n,
        dim,
        theta: config.family.theta(n),
        route,
        pairing_re: None,
        pairing_im: None,
        winding: None,
        lattice_residual: None,
        defect_sup: None,
        defect_p2: None,
        error: Some(error),
    };
    let fallback_route = if matches!(config.cycle, CycleSpec::Terms(_)) { Route::Bar } else { Route::Hopf };
    let rep = match sweep_rep::<T>(config, n) {
        Ok(r) => r,
        Err(e) => return vec![blank(fallback_route, 0, e.to_string())],
    };
    let dim = rep.dim();
    let (routes, defects) = match routes(config, &rep).and_then(|r| {
        let mut ps = config.ps.clone();
        if !ps.contains(&2.0) {
            ps.push(2.0);
        }
        Ok((r, defect_report(&rep, &generator_window(rep.model()), &ps)?))
    }) {
        Ok(x) => x,
        Err(e) => return vec![blank(fallback_route, dim, e.to_string())],
    };
    let lat = Lattice::<T>::for_trace(config.trace, dim);
    let mut out = Vec::new();
    let mut values = Vec::new();
    let attempts = [
        (Route::Bar, routes.bar.as_ref().map(|c| pairing_bar(&rep, c))),
        (Route::Hopf, routes.hopf.as_ref().map(|p| pairing_hopf(&rep, p))),
    ];
    for (route, attempt) in attempts {
        let Some(result) = attempt else { continue };
        match result {
            Ok(z) => {
                values.push(z);
                let (w, residual) = winding(z, lat);
                out.push(PairingReport {
                    n,
                    dim,
                    theta: config.family.theta(n),
                    route,
                    pairing_re: Some(z.re.as_f64()),
                    pairing_im: Some(z.im.as_f64()),
                    winding: w,
                    lattice_residual: Some(residual.as_f64()),
                    defect_sup: Some(defects.sup_op()),
                    defect_p2: defects.sup_schatten(2.0),
                    error: None,
                });
            }
            Err(e) => out.push(blank(route, dim, e.to_string())),
        }
    }
    if let [a, b] = values[..] {
        let gap = (a - b).modulus().as_f64();
        if gap >= T::tol(ROUTE_TOL).as_f64() {
            for r in &mut out {
                r.error = Some(format!("bar and hopf routes disagree by {gap:e}"));
            }
        }
    }
    out
}

fn verdict(reports: &[PairingReport], config: &SweepConfig) -> (bool, String) {
    let considered: Vec<&PairingReport> = reports.iter().filter(|r| r.n >= config.n0).collect();
    if considered.is_empty() {
        return (false, format!("no grid point with n >= {}", config.n0));
    }
    if let Some(bad) = considered.iter().find(|r| r.error.is_some()) {
        return (false, format!("n = {} ({} route) failed: {}", bad.n, bad.route, bad.error.as_deref().unwrap_or("")));
    }
    if let Some(r) = considered.iter().find(|r| r.winding.unwrap_or(0) == 0) {
        let what = match r.winding {
            Some(_) => "is zero".to_string(),
            None => format!("is not a lattice point (residual {:e})", r.lattice_residual.unwrap_or(f64::NAN)),
        };
        return (false, format!("pairing at n = {} ({} route) {what}", r.n, r.route));
    }
    let windings: Vec<i64> = considered.iter().filter_map(|r| r.winding).collect();
    let largest = considered.iter().map(|r| r.n).max().expect("nonempty");
    let final_defect = considered
        .iter()
        .filter(|r| r.n == largest)
        .filter_map(|r| r.defect_sup)
        .fold(0.0, f64::max);
    if final_defect >= config.defect_threshold {
        return (
            false,
            format!("op defect {final_defect:e} at n = {largest} is not below the threshold {}", config.defect_threshold),
        );
    }
    let constant = windings.windows(2).all(|w| w[0] == w[1]);
    let windings_text = if constant { format!("constant winding {}", windings[0]) } else { format!("windings {windings:?}") };
    (
        true,
        format!(
            "{windings_text} for all n >= {} while the op defect falls to {final_defect:e} at n = {largest}",
            config.n0
        ),
    )
}
