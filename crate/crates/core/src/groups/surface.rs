use super::{GroupElement, GroupModel, Word};
use crate::error::{Error, Result};

/// Generator pairs `(a_i, b_i)` of the genus-`g` surface group; the relator is `∏ [a_i, b_i]`.
///
/// `a_i` has index `2i − 2` and `b_i` index `2i − 1`.
pub fn surface_relator(genus: usize) -> Result<Vec<(Word, Word)>> {
    if genus < 2 {
        return Err(Error::InvalidGenus(genus));
    }
    Ok((0..genus).map(|i| (Word::generator(2 * i), Word::generator(2 * i + 1))).collect())
}

/// `[a₁, b₁]⋯[a_g, b_g]` as a single free word.
pub fn surface_relator_word(genus: usize) -> Result<Word> {
    Ok(surface_relator(genus)?
        .iter()
        .fold(Word::identity(), |acc, (a, b)| acc.concat(&Word::commutator(a, b))))
}

/// A homomorphism out of a finitely generated group, given by generator images in a model with a
/// normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: GroupModel,
    target: GroupModel,
    images: Vec<GroupElement>,
}

impl GroupHom {
    pub fn new(source: GroupModel, target: GroupModel, images: Vec<GroupElement>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::InvalidInput(format!(
                "{} generator images given for {source}",
                images.len()
            )));
        }
        if let Some(bad) = images.iter().find(|g| g.model() != target) {
            return Err(Error::ModelMismatch(bad.model().to_string(), target.to_string()));
        }
        Ok(Self { source, target, images })
    }

    pub fn source(&self) -> GroupModel {
        self.source
    }

    pub fn target(&self) -> GroupModel {
        self.target
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    /// Image of a free word in the source generators.
    pub fn apply(&self, w: &Word) -> Result<GroupElement> {
        let mut acc = self.target.identity()?;
        for &(g, e) in w.letters() {
            let image = self.images.get(g).ok_or_else(|| Error::InvalidGenerator {
                index: g,
                model: self.source.to_string(),
            })?;
            acc = acc.multiply(&image.pow(e))?;
        }
        Ok(acc)
    }
}

/// `Γ_g → ℤ²` sending `a₁ ↦ (1,0)`, `b₁ ↦ (0,1)` and every other generator to `0`.
///
/// The relator is checked to land on `0`, which is what makes the map well defined on `Γ_g`.
pub fn hom_to_z2(genus: usize) -> Result<GroupHom> {
    let source = GroupModel::Surface(genus);
    let target = GroupModel::Zd(2);
    let relator = surface_relator_word(genus)?;
    let images = (0..source.rank())
        .map(|g| match g {
            0 => target.generator(0),
            1 => target.generator(1),
            _ => target.identity(),
        })
        .collect::<Result<Vec<_>>>()?;
    let hom = GroupHom::new(source, target, images)?;
    if !hom.apply(&relator)?.is_identity() {
        return Err(Error::NotARelator);
    }
    Ok(hom)
}
