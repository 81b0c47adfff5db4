//! Concrete discrete groups: `ℤᵈ`, free groups, the discrete Heisenberg group and surface groups.
//!
//! `ℤᵈ`, `F_k` and `H₃` carry a normal form and hence an equality test. Surface groups only
//! provide free-word data and their distinguished relator; nothing here solves their word problem.

mod surface;
mod word;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use surface::{hom_to_z2, surface_relator, surface_relator_word, GroupHom};
pub use word::Word;

/// Heisenberg generator indices.
pub const HEIS_A: usize = 0;
pub const HEIS_B: usize = 1;
pub const HEIS_Z: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupModel {
    /// Free abelian group of the given rank.
    Zd(usize),
    /// Free group of the given rank.
    Free(usize),
    /// `⟨a, b, z | ba = abz, z central⟩`.
    Heisenberg,
    /// Fundamental group of the closed orientable surface of the given genus.
    Surface(usize),
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupModel::Zd(d) => write!(f, "Z^{d}"),
            GroupModel::Free(k) => write!(f, "F_{k}"),
            GroupModel::Heisenberg => f.write_str("H3"),
            GroupModel::Surface(g) => write!(f, "Surface(g={g})"),
        }
    }
}

fn xyz_names(rank: usize) -> Vec<String> {
    if rank <= 3 {
        ["x", "y", "z"][..rank].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=rank).map(|i| format!("x{i}")).collect()
    }
}

impl GroupModel {
    pub fn rank(&self) -> usize {
        match *self {
            GroupModel::Zd(d) => d,
            GroupModel::Free(k) => k,
            GroupModel::Heisenberg => 3,
            GroupModel::Surface(g) => 2 * g,
        }
    }

    pub fn generator_names(&self) -> Vec<String> {
        match *self {
            GroupModel::Zd(d) => xyz_names(d),
            GroupModel::Free(k) => xyz_names(k),
            GroupModel::Heisenberg => vec!["a".into(), "b".into(), "z".into()],
            GroupModel::Surface(g) => (1..=g).flat_map(|i| [format!("a{i}"), format!("b{i}")]).collect(),
        }
    }

    pub fn has_normal_form(&self) -> bool {
        !matches!(self, GroupModel::Surface(_))
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let w = Word::parse(text, &self.generator_names())?;
        self.check_word(&w)?;
        Ok(w)
    }

    pub fn word_text(&self, w: &Word) -> String {
        w.to_text(&self.generator_names())
    }

    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        self.normal_form(&self.parse_word(text)?)
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        match w.max_generator() {
            Some(g) if g >= self.rank() => Err(Error::InvalidGenerator { index: g, model: self.to_string() }),
            _ => Ok(()),
        }
    }

    /// The element a word represents, in canonical form.
    pub fn normal_form(&self, w: &Word) -> Result<GroupElement> {
        self.check_word(w)?;
        let repr = match *self {
            GroupModel::Zd(d) => {
                let mut v = vec![0i64; d];
                for &(g, e) in w.letters() {
                    v[g] += e;
                }
                Repr::Abelian(v)
            }
            GroupModel::Heisenberg => {
                let mut acc = [0i64; 3];
                for &(g, e) in w.letters() {
                    let mut letter = [0i64; 3];
                    letter[g] = e;
                    acc = heisenberg_mul(acc, letter);
                }
                Repr::Heisenberg(acc)
            }
            GroupModel::Free(_) => Repr::Free(w.reduced()),
            GroupModel::Surface(_) => return Err(Error::NoNormalForm(self.to_string())),
        };
        Ok(GroupElement { model: *self, repr })
    }

    pub fn identity(&self) -> Result<GroupElement> {
        self.normal_form(&Word::identity())
    }

    pub fn generator(&self, index: usize) -> Result<GroupElement> {
        self.normal_form(&Word::generator(index))
    }

    /// Generators followed by their inverses.
    pub fn generators_and_inverses(&self) -> Result<Vec<GroupElement>> {
        let mut out = Vec::with_capacity(2 * self.rank());
        for e in [1, -1] {
            for g in 0..self.rank() {
                out.push(self.normal_form(&Word::letter(g, e))?);
            }
        }
        Ok(out)
    }
}

/// `(a^i b^j z^k)(a^i' b^j' z^k') = a^{i+i'} b^{j+j'} z^{k+k'+j·i'}`, from `b^j a^{i'} = a^{i'} b^j z^{j·i'}`.
fn heisenberg_mul(x: [i64; 3], y: [i64; 3]) -> [i64; 3] {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[1] * y[0]]
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    /// Exponent vector.
    Abelian(Vec<i64>),
    /// `(i, j, k)` for `a^i b^j z^k`.
    Heisenberg([i64; 3]),
    /// Freely reduced word.
    Free(Word),
}

/// An element of a group with a normal form. Equality is equality of canonical forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    model: GroupModel,
    repr: Repr,
}

impl GroupElement {
    pub fn model(&self) -> GroupModel {
        self.model
    }

    /// `ℤᵈ` exponent vector.
    pub fn exponents(&self) -> Option<&[i64]> {
        match &self.repr {
            Repr::Abelian(v) => Some(v),
            _ => None,
        }
    }

    /// `(i, j, k)` with the element equal to `a^i b^j z^k`.
    pub fn heisenberg_coords(&self) -> Option<(i64, i64, i64)> {
        match self.repr {
            Repr::Heisenberg([i, j, k]) => Some((i, j, k)),
            _ => None,
        }
    }

    /// The canonical word: `x₁^{e₁}…x_d^{e_d}`, `a^i b^j z^k`, or the reduced free word.
    pub fn canonical_word(&self) -> Word {
        match &self.repr {
            Repr::Abelian(v) => Word::new(v.iter().enumerate().filter(|(_, &e)| e != 0).map(|(g, &e)| (g, e)).collect()),
            Repr::Heisenberg(c) => Word::new((0..3).filter(|&g| c[g] != 0).map(|g| (g, c[g])).collect()),
            Repr::Free(w) => w.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        match &self.repr {
            Repr::Abelian(v) => v.iter().all(|&e| e == 0),
            Repr::Heisenberg(c) => *c == [0, 0, 0],
            Repr::Free(w) => w.letters().is_empty(),
        }
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.model != other.model {
            return Err(Error::ModelMismatch(self.model.to_string(), other.model.to_string()));
        }
        let repr = match (&self.repr, &other.repr) {
            (Repr::Abelian(a), Repr::Abelian(b)) => Repr::Abelian(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            (Repr::Heisenberg(a), Repr::Heisenberg(b)) => Repr::Heisenberg(heisenberg_mul(*a, *b)),
            (Repr::Free(a), Repr::Free(b)) => Repr::Free(a.concat(b).reduced()),
            _ => unreachable!("representation is determined by the model"),
        };
        Ok(GroupElement { model: self.model, repr })
    }

    pub fn inverse(&self) -> GroupElement {
        let repr = match &self.repr {
            Repr::Abelian(v) => Repr::Abelian(v.iter().map(|e| -e).collect()),
            Repr::Heisenberg([i, j, k]) => Repr::Heisenberg([-i, -j, i * j - k]),
            Repr::Free(w) => Repr::Free(w.inverse()),
        };
        GroupElement { model: self.model, repr }
    }

    pub fn pow(&self, k: i64) -> GroupElement {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = self.model.identity().expect("model has a normal form");
        let mut n = k.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.multiply(&base).expect("same model");
            }
            n >>= 1;
            if n > 0 {
                base = base.multiply(&base).expect("same model");
            }
        }
        acc
    }

    /// `[x, y] = x y x⁻¹ y⁻¹`.
    pub fn commutator(&self, other: &GroupElement) -> Result<GroupElement> {
        self.multiply(other)?.multiply(&self.inverse())?.multiply(&other.inverse())
    }

    pub fn to_text(&self) -> String {
        self.model.word_text(&self.canonical_word())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Group law on elements of the same model.
pub fn multiply(x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
    x.multiply(y)
}

/// Normal form `a^i b^j z^k` of a word in `{0: a, 1: b, 2: z}`.
pub fn heisenberg_normal_form(w: &Word) -> Result<GroupElement> {
    GroupModel::Heisenberg.normal_form(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    use crate::linalg::random::rng;

    /// Faithful integer representation of `H₃` by upper unitriangular 3x3 matrices.
    fn unitriangular(w: &Word) -> [[i64; 3]; 3] {
        type M = [[i64; 3]; 3];
        fn mul(x: &M, y: &M) -> M {
            let mut out = [[0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
                }
            }
            out
        }
        let id: M = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        // a = 1 + E12, b = 1 + E23, z = (ab)^{-1} ba = 1 - E13 so that ba = abz
        let gens: [(M, M); 3] = [
            ([[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[1, -1, 0], [0, 1, 0], [0, 0, 1]]),
            ([[1, 0, 0], [0, 1, 1], [0, 0, 1]], [[1, 0, 0], [0, 1, -1], [0, 0, 1]]),
            ([[1, 0, -1], [0, 1, 0], [0, 0, 1]], [[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
        ];
        let mut acc = id;
        for &(g, e) in w.letters() {
            let m = if e > 0 { &gens[g].0 } else { &gens[g].1 };
            for _ in 0..e.unsigned_abs() {
                acc = mul(&acc, m);
            }
        }
        acc
    }

    fn heis(text: &str) -> GroupElement {
        GroupModel::Heisenberg.parse_element(text).unwrap()
    }

    #[test]
    fn oracle_matches_defining_relation() {
        let ba = Word::parse("b a", &["a", "b", "z"]).unwrap();
        let abz = Word::parse("a b z", &["a", "b", "z"]).unwrap();
        assert_eq!(unitriangular(&ba), unitriangular(&abz));
    }

    #[test]
    fn heisenberg_examples() {
        assert_eq!(heis("b a").heisenberg_coords(), Some((1, 1, 1)));
        assert_eq!(heis("a b").heisenberg_coords(), Some((1, 1, 0)));
        // b a b⁻¹ a⁻¹ = abz b⁻¹ a⁻¹ = z
        let c = heis("b a b^-1 a^-1");
        assert_eq!(c.heisenberg_coords(), Some((0, 0, 1)));
        assert_eq!(unitriangular(&c.canonical_word()), unitriangular(&GroupModel::Heisenberg.parse_word("b a b^-1 a^-1").unwrap()));
        let b = heis("b");
        let a = heis("a");
        assert_eq!(b.multiply(&a).unwrap().to_text(), "a b z");
    }

    #[test]
    fn abelian_and_free_examples() {
        let z2 = GroupModel::Zd(2);
        let x = z2.generator(0).unwrap();
        let y = z2.generator(1).unwrap();
        assert_eq!(x.multiply(&y).unwrap().exponents(), Some(&[1, 1][..]));
        let f2 = GroupModel::Free(2);
        let p = f2.parse_element("x y").unwrap();
        let q = f2.parse_element("y^-1 x").unwrap();
        assert_eq!(multiply(&p, &q).unwrap(), f2.parse_element("x^2").unwrap());
    }

    #[test]
    fn surface_has_no_normal_form() {
        let s = GroupModel::Surface(2);
        assert!(matches!(s.identity(), Err(Error::NoNormalForm(_))));
        assert_eq!(s.generator_names(), ["a1", "b1", "a2", "b2"]);
        assert!(s.parse_word("a1 b2^-1").is_ok());
    }

    #[test]
    fn model_checks() {
        let z2 = GroupModel::Zd(2);
        let h = GroupModel::Heisenberg;
        assert!(matches!(z2.generator(2), Err(Error::InvalidGenerator { .. })));
        let err = z2.identity().unwrap().multiply(&h.identity().unwrap());
        assert!(matches!(err, Err(Error::ModelMismatch(_, _))));
    }

    fn random_word(model: GroupModel, r: &mut impl Rng) -> Word {
        let len = r.random_range(0..6);
        Word::new((0..len).map(|_| (r.random_range(0..model.rank()), r.random_range(-3..=3))).collect())
    }

    #[test]
    fn group_axioms_on_seeded_triples() {
        for model in [GroupModel::Zd(2), GroupModel::Zd(3), GroupModel::Free(2), GroupModel::Heisenberg] {
            let mut r = rng(17);
            let e = model.identity().unwrap();
            for _ in 0..1000 {
                let a = model.normal_form(&random_word(model, &mut r)).unwrap();
                let b = model.normal_form(&random_word(model, &mut r)).unwrap();
                let c = model.normal_form(&random_word(model, &mut r)).unwrap();
                let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
                let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
                assert_eq!(left, right, "{model}");
                assert_eq!(a.multiply(&e).unwrap(), a);
                assert_eq!(e.multiply(&a).unwrap(), a);
                assert!(a.multiply(&a.inverse()).unwrap().is_identity());
            }
        }
    }

    #[test]
    fn heisenberg_center() {
        let z = heis("z");
        let mut r = rng(3);
        for _ in 0..1000 {
            let w = GroupModel::Heisenberg.normal_form(&random_word(GroupModel::Heisenberg, &mut r)).unwrap();
            assert_eq!(z.multiply(&w).unwrap(), w.multiply(&z).unwrap());
        }
    }

    #[test]
    fn pow_matches_repeated_product() {
        let g = heis("a^2 b z^-1");
        let mut acc = GroupModel::Heisenberg.identity().unwrap();
        for _ in 0..5 {
            acc = acc.multiply(&g).unwrap();
        }
        assert_eq!(g.pow(5), acc);
        assert_eq!(g.pow(-5), acc.inverse());
    }

    proptest! {
        #[test]
        fn heisenberg_normal_form_matches_faithful_oracle(letters in prop::collection::vec((0usize..3, -3i64..=3), 0..10)) {
            let w = Word::new(letters);
            let nf = heisenberg_normal_form(&w).unwrap();
            prop_assert_eq!(unitriangular(&nf.canonical_word()), unitriangular(&w));
        }

        #[test]
        fn normal_form_is_idempotent(letters in prop::collection::vec((0usize..2, -3i64..=3), 0..10)) {
            let w = Word::new(letters);
            for model in [GroupModel::Zd(2), GroupModel::Free(2), GroupModel::Heisenberg] {
                let nf = model.normal_form(&w).unwrap();
                prop_assert_eq!(model.normal_form(&nf.canonical_word()).unwrap(), nf);
            }
        }
    }
}
