//! Almost representations: finite-dimensional maps from a discrete group into invertible
//! matrices whose multiplicativity defect is small but nonzero.
//!
//! A rep stores one image per generator. Group elements are evaluated through a fixed section,
//! the canonical word for groups with a normal form and a lift along `Γ_g → ℤ²` for surface
//! groups, so no word problem is ever solved.

use serde::{Deserialize, Serialize};

use crate::cohomology::{hopf_to_bar, standard_z2_cycle, Chain2};
use crate::error::{Error, Result};
use crate::groups::{hom_to_z2, surface_relator, GroupElement, GroupHom, GroupModel, Word};
use crate::linalg::random::{random_skew_hermitian, split_seed};
use crate::linalg::{expm, op_norm, schatten_norm, unitarity_defect, ComplexMatrix, TraceKind};
use crate::scalar::{unit_phase, Complex, Real};

/// Built-in families, indexed by the matrix size `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `ρ(s) = u^{s₁} v^{s₂}` on `ℤ²`.
    Z2Projective,
    /// The exact representation `a ↦ u`, `b ↦ v`, `z ↦ λ_n` of `H₃`.
    Heisenberg,
    /// `a₁ ↦ u`, `b₁ ↦ v`, other generators `↦ 1`, evaluated through `Γ_g → ℤ²`.
    SurfacePullback { genus: usize },
    /// As `Z2Projective` with the clock matrix raised to the power `twist`, so `θ_n = twist/n`.
    Z2Twisted { twist: i64 },
}

impl Family {
    pub fn model(&self) -> GroupModel {
        match *self {
            Family::Z2Projective | Family::Z2Twisted { .. } => GroupModel::Zd(2),
            Family::Heisenberg => GroupModel::Heisenberg,
            Family::SurfacePullback { genus } => GroupModel::Surface(genus),
        }
    }

    pub fn theta(&self, n: usize) -> f64 {
        match *self {
            Family::Z2Twisted { twist } => twist as f64 / n as f64,
            _ => 1.0 / n as f64,
        }
    }

    pub fn build<T: Real>(&self, n: usize) -> Result<AlmostRep<T>> {
        match *self {
            Family::Z2Projective => z2_projective_rep(n),
            Family::Heisenberg => heisenberg_rep(n),
            Family::SurfacePullback { genus } => surface_pullback(genus, n),
            Family::Z2Twisted { twist } => z2_twisted_rep(n, twist),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Family::Z2Projective => "z2_projective".into(),
            Family::Heisenberg => "heisenberg".into(),
            Family::SurfacePullback { genus } => format!("surface_pullback(g={genus})"),
            Family::Z2Twisted { twist } => format!("z2_twisted(q={twist})"),
        }
    }
}

/// Post-construction step recorded in a descriptor, replayed in order by [`RepDescriptor::build`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum RepOp {
    Perturb { eps: f64, seed: u64 },
    Amplify { m: usize },
}

/// JSON form of a rep. Matrices are never stored; `build` regenerates them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepDescriptor {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    pub theta: f64,
    pub dim: usize,
    pub trace: TraceKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ops: Vec<RepOp>,
}

impl RepDescriptor {
    pub fn build<T: Real>(&self) -> Result<AlmostRep<T>> {
        let mut rep = self.family.build::<T>(self.n)?.with_trace_kind(self.trace);
        for op in &self.ops {
            rep = match *op {
                RepOp::Perturb { eps, seed } => perturb(&rep, eps, seed)?,
                RepOp::Amplify { m } => amplify(&rep, m)?,
            };
        }
        if rep.dim() != self.dim || (rep.theta() - self.theta).abs() > 1e-15 {
            return Err(Error::InvalidInput(format!(
                "descriptor says dim {} theta {}, rebuilt rep has dim {} theta {}",
                self.dim,
                self.theta,
                rep.dim(),
                rep.theta()
            )));
        }
        Ok(rep)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serializes")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }
}

/// How words in the rep's group are turned into words in its generator images.
#[derive(Clone, Debug, PartialEq)]
enum Section {
    /// Expand the normal form.
    Canonical,
    /// Push to a normal-form group, then lift its canonical word generator by generator.
    Pullback { hom: GroupHom, lift: Vec<usize> },
}

#[derive(Clone, Debug)]
pub struct AlmostRep<T: Real> {
    model: GroupModel,
    gen_images: Vec<ComplexMatrix<T>>,
    gen_inverses: Vec<ComplexMatrix<T>>,
    trace_kind: TraceKind,
    section: Section,
    descriptor: RepDescriptor,
    unitary: bool,
}

impl<T: Real> AlmostRep<T> {
    fn new(family: Family, n: usize, gen_images: Vec<ComplexMatrix<T>>, section: Section) -> Result<Self> {
        let model = family.model();
        if gen_images.len() != model.rank() {
            return Err(Error::InvalidInput(format!("{} images for {model}", gen_images.len())));
        }
        let dim = gen_images[0].dim();
        let gen_inverses = gen_images.iter().map(|g| g.inverse()).collect::<Result<Vec<_>>>()?;
        let tol = T::tol(1e-10);
        let unitary = gen_images.iter().all(|g| unitarity_defect(g).is_ok_and(|d| d < tol));
        let descriptor =
            RepDescriptor { family, n, theta: family.theta(n), dim, trace: TraceKind::Normalized, ops: Vec::new() };
        Ok(Self { model, gen_images, gen_inverses, trace_kind: TraceKind::Normalized, section, descriptor, unitary })
    }

    pub fn with_trace_kind(mut self, kind: TraceKind) -> Self {
        self.trace_kind = kind;
        self.descriptor.trace = kind;
        self
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn dim(&self) -> usize {
        self.gen_images[0].dim()
    }

    pub fn gen_images(&self) -> &[ComplexMatrix<T>] {
        &self.gen_images
    }

    pub fn trace_kind(&self) -> TraceKind {
        self.trace_kind
    }

    pub fn family(&self) -> Family {
        self.descriptor.family
    }

    /// The family index `n`.
    pub fn n_param(&self) -> usize {
        self.descriptor.n
    }

    /// The deformation parameter `θ_n`.
    pub fn theta(&self) -> f64 {
        self.descriptor.theta
    }

    pub fn descriptor(&self) -> &RepDescriptor {
        &self.descriptor
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// Commutator pairs used by the Hopf route. For `ℤ²` and surface groups these are the
    /// defining relators; for `H₃` it is `[a,b][b,a]`, which is trivial in the group.
    pub fn hopf_pairs(&self) -> Result<Vec<(Word, Word)>> {
        Ok(match self.model {
            GroupModel::Surface(g) => surface_relator(g)?,
            GroupModel::Heisenberg => {
                let (a, b) = (Word::generator(0), Word::generator(1));
                vec![(a.clone(), b.clone()), (b, a)]
            }
            _ => vec![(Word::generator(0), Word::generator(1))],
        })
    }

    /// Bar cycle matching [`AlmostRep::hopf_pairs`], when the group has a normal form.
    pub fn default_cycle(&self) -> Result<Option<Chain2>> {
        match self.model {
            GroupModel::Zd(2) => Ok(Some(standard_z2_cycle())),
            m if m.has_normal_form() => {
                let pairs = self
                    .hopf_pairs()?
                    .iter()
                    .map(|(a, b)| Ok((m.normal_form(a)?, m.normal_form(b)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Some(hopf_to_bar(&pairs)?))
            }
            _ => Ok(None),
        }
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(g) if g >= self.model.rank() => Err(Error::InvalidGenerator { index: g, model: self.model.to_string() }),
            _ => Ok(()),
        }
    }

    /// Product of generator images along a word, read as a free-group word.
    pub fn evaluate_free(&self, w: &Word) -> Result<ComplexMatrix<T>> {
        self.check_word(w)?;
        let mut acc = ComplexMatrix::identity(self.dim());
        for &(g, e) in w.letters() {
            let base = if e < 0 { &self.gen_inverses[g] } else { &self.gen_images[g] };
            acc = &acc * &base.pow_unsigned(e.unsigned_abs());
        }
        Ok(acc)
    }

    /// Inverse of [`AlmostRep::evaluate_free`], assembled from cached generator inverses.
    fn evaluate_free_inverse(&self, w: &Word) -> Result<ComplexMatrix<T>> {
        self.evaluate_free(&w.inverse())
    }

    /// The word in the generators that the section assigns to the element `w` represents.
    fn section_word(&self, w: &Word) -> Result<Word> {
        match &self.section {
            Section::Canonical => Ok(self.model.normal_form(w)?.canonical_word()),
            Section::Pullback { hom, lift } => {
                self.check_word(w)?;
                let image = hom.apply(w)?.canonical_word();
                Ok(Word::new(image.letters().iter().map(|&(g, e)| (lift[g], e)).collect()))
            }
        }
    }

    /// `ρ(s)` for a group element with a normal form.
    pub fn evaluate(&self, s: &GroupElement) -> Result<ComplexMatrix<T>> {
        if s.model() != self.model {
            return Err(Error::ModelMismatch(s.model().to_string(), self.model.to_string()));
        }
        if !matches!(self.section, Section::Canonical) {
            return Err(Error::NoNormalForm(self.model.to_string()));
        }
        self.evaluate_free(&s.canonical_word())
    }

    /// `ρ` of the element a word represents, through the section.
    pub fn evaluate_word(&self, w: &Word) -> Result<ComplexMatrix<T>> {
        self.evaluate_free(&self.section_word(w)?)
    }

    /// `ρ(w)⁻¹`, assembled from cached generator inverses rather than a dense inversion.
    pub fn evaluate_word_inverse(&self, w: &Word) -> Result<ComplexMatrix<T>> {
        self.evaluate_free_inverse(&self.section_word(w)?)
    }

    /// `ρ(s)ρ(t)ρ(st)⁻¹`.
    pub fn defect(&self, s: &GroupElement, t: &GroupElement) -> Result<ComplexMatrix<T>> {
        let st = s.multiply(t)?;
        Ok(&(&self.evaluate(s)? * &self.evaluate(t)?) * &self.evaluate_free_inverse(&st.canonical_word())?)
    }

    /// [`AlmostRep::defect`] for elements given as words, valid for every model.
    pub fn defect_words(&self, s: &Word, t: &Word) -> Result<ComplexMatrix<T>> {
        let st = self.section_word(&s.concat(t))?;
        Ok(&(&self.evaluate_word(s)? * &self.evaluate_word(t)?) * &self.evaluate_free_inverse(&st)?)
    }

    /// `ρ(s)ρ(t) − ρ(st)`, the additive defect.
    pub fn additive_defect(&self, s: &Word, t: &Word) -> Result<ComplexMatrix<T>> {
        Ok(&(&self.evaluate_word(s)? * &self.evaluate_word(t)?) - &self.evaluate_word(&s.concat(t))?)
    }
}

/// All pairs drawn from the generators and their inverses.
pub fn generator_window(model: GroupModel) -> Vec<(Word, Word)> {
    let letters: Vec<Word> =
        [1, -1].iter().flat_map(|&e| (0..model.rank()).map(move |g| Word::letter(g, e))).collect();
    letters.iter().flat_map(|s| letters.iter().map(move |t| (s.clone(), t.clone()))).collect()
}

/// Cyclic shift `e_j ↦ e_{j+1}` and clock `diag(λ^q, λ^{2q}, …, λ^{nq})`, `λ = e^{2πi/n}`.
fn shift_and_clock<T: Real>(n: usize, q: i64) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("family index must be at least 2, got {n}")));
    }
    let u = ComplexMatrix::from_fn(n, |i, j| {
        if i == (j + 1) % n {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })?;
    let nn = n as i64;
    // reduce the exponent before converting to an angle so λ^n is exactly 1
    let phases: Vec<Complex<T>> =
        (1..=nn).map(|j| unit_phase((q * j).rem_euclid(nn) as f64 / n as f64)).collect();
    Ok((u, ComplexMatrix::diagonal(&phases)?))
}

/// The shift/clock pair `(u, v)` with `vu = λ_n·uv`.
pub fn voiculescu_pair<T: Real>(n: usize) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    shift_and_clock(n, 1)
}

pub fn heisenberg_rep<T: Real>(n: usize) -> Result<AlmostRep<T>> {
    let (u, v) = voiculescu_pair::<T>(n)?;
    let z = ComplexMatrix::scalar(n, unit_phase(1.0 / n as f64));
    AlmostRep::new(Family::Heisenberg, n, vec![u, v, z], Section::Canonical)
}

pub fn z2_projective_rep<T: Real>(n: usize) -> Result<AlmostRep<T>> {
    let (u, v) = voiculescu_pair::<T>(n)?;
    AlmostRep::new(Family::Z2Projective, n, vec![u, v], Section::Canonical)
}

pub fn z2_twisted_rep<T: Real>(n: usize, twist: i64) -> Result<AlmostRep<T>> {
    let (u, v) = shift_and_clock::<T>(n, twist)?;
    AlmostRep::new(Family::Z2Twisted { twist }, n, vec![u, v], Section::Canonical)
}

pub fn surface_pullback<T: Real>(genus: usize, n: usize) -> Result<AlmostRep<T>> {
    let hom = hom_to_z2(genus)?;
    let (u, v) = voiculescu_pair::<T>(n)?;
    let mut images = vec![u, v];
    images.resize(2 * genus, ComplexMatrix::identity(n));
    AlmostRep::new(Family::SurfacePullback { genus }, n, images, Section::Pullback { hom, lift: vec![0, 1] })
}

/// Defects of one window pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectEntry {
    pub s: String,
    pub t: String,
    pub op_defect: f64,
    /// `(p, ‖ρ(s)ρ(t) − ρ(st)‖_p)` in the order the exponents were requested.
    pub schatten: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DefectReport {
    pub pairs: Vec<DefectEntry>,
}

impl DefectReport {
    pub fn sup_op(&self) -> f64 {
        self.pairs.iter().map(|e| e.op_defect).fold(0.0, f64::max)
    }

    /// Largest Schatten-`p` defect; `None` when `p` was not measured.
    pub fn sup_schatten(&self, p: f64) -> Option<f64> {
        let mut values = self.pairs.iter().flat_map(|e| e.schatten.iter().filter(|(q, _)| *q == p).map(|(_, v)| *v));
        let first = values.next()?;
        Some(values.fold(first, f64::max))
    }
}

/// Operator and Schatten norms of `ρ(s)ρ(t) − ρ(st)` over a window of word pairs.
pub fn defect_report<T: Real>(rep: &AlmostRep<T>, window: &[(Word, Word)], ps: &[f64]) -> Result<DefectReport> {
    let mut pairs = Vec::with_capacity(window.len());
    for (s, t) in window {
        let d = rep.additive_defect(s, t)?;
        let op_defect = op_norm(&d)?.as_f64();
        let schatten = ps
            .iter()
            .map(|&p| Ok((p, if p == f64::INFINITY { op_defect } else { schatten_norm(&d, p)?.as_f64() })))
            .collect::<Result<Vec<_>>>()?;
        pairs.push(DefectEntry { s: rep.model.word_text(s), t: rep.model.word_text(t), op_defect, schatten });
    }
    Ok(DefectReport { pairs })
}

/// Multiplies every generator image by `exp(W)` with `W` skew-Hermitian of norm `eps`, drawn from
/// a per-generator stream of `seed`.
pub fn perturb<T: Real>(rep: &AlmostRep<T>, eps: f64, seed: u64) -> Result<AlmostRep<T>> {
    if !(0.0..0.1).contains(&eps) {
        return Err(Error::InvalidInput(format!("perturbation size must lie in [0, 0.1), got {eps}")));
    }
    let mut out = rep.clone();
    out.descriptor.ops.push(RepOp::Perturb { eps, seed });
    if eps == 0.0 {
        return Ok(out);
    }
    for (g, image) in out.gen_images.iter_mut().enumerate() {
        let w = random_skew_hermitian::<T>(rep.dim(), eps, split_seed(seed, g as u64));
        *image = &expm(&w) * image;
    }
    out.gen_inverses = out.gen_images.iter().map(|g| g.inverse()).collect::<Result<_>>()?;
    Ok(out)
}

/// Replaces every image `g` by `g ⊗ 1_m`. Only the normalized trace is preserved by this.
pub fn amplify<T: Real>(rep: &AlmostRep<T>, m: usize) -> Result<AlmostRep<T>> {
    if m == 0 {
        return Err(Error::InvalidInput("amplification factor must be at least 1".into()));
    }
    if rep.trace_kind == TraceKind::Unnormalized {
        return Err(Error::TraceNotPreserved);
    }
    let mut out = rep.clone();
    out.descriptor.ops.push(RepOp::Amplify { m });
    if m == 1 {
        return Ok(out);
    }
    out.gen_images = rep.gen_images.iter().map(|g| g.kron_identity(m)).collect();
    out.gen_inverses = rep.gen_inverses.iter().map(|g| g.kron_identity(m)).collect();
    out.descriptor.dim = out.dim();
    Ok(out)
}
