use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A word in generators and their inverses, stored as `(generator index, exponent)` syllables.
///
/// Words are kept exactly as built; [`Word::reduced`] gives the freely reduced form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<(usize, i64)>,
}

impl Word {
    pub fn new(letters: Vec<(usize, i64)>) -> Self {
        Self { letters }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(index: usize) -> Self {
        Self::letter(index, 1)
    }

    pub fn letter(index: usize, exponent: i64) -> Self {
        Self { letters: vec![(index, exponent)] }
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.iter().all(|&(_, e)| e == 0)
    }

    /// Number of generator occurrences, `Σ |exponent|`.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    /// Adjacent syllables on the same generator merged, zero exponents dropped.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<(usize, i64)> = Vec::with_capacity(self.letters.len());
        for &(g, e) in &self.letters {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((last, acc)) if *last == g => {
                    *acc += e;
                    if *acc == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word { letters: out }
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&(g, _)| g).max()
    }

    /// Parses `"a^2 b^-1 z^3"`-style text. Whitespace between syllables is optional; generator
    /// names are matched longest-first and case-sensitively. `""`, `"e"` and `"1"` denote the
    /// identity.
    pub fn parse<S: AsRef<str>>(text: &str, names: &[S]) -> Result<Word> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "e" || trimmed == "1" {
            return Ok(Word::identity());
        }
        let mut order: Vec<(usize, &str)> = names.iter().map(|s| s.as_ref()).enumerate().collect();
        order.sort_by_key(|(_, n)| std::cmp::Reverse(n.len()));

        let mut letters = Vec::new();
        let mut rest = trimmed;
        while !rest.is_empty() {
            rest = rest.trim_start();
            let (index, name) = order
                .iter()
                .find(|(_, n)| !n.is_empty() && rest.starts_with(*n))
                .ok_or_else(|| Error::Parse(format!("unknown generator at {rest:?} in {text:?}")))?;
            rest = &rest[name.len()..];
            let mut exponent = 1i64;
            if let Some(after) = rest.strip_prefix('^') {
                let digits_end = after
                    .char_indices()
                    .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+'))))
                    .map_or(after.len(), |(i, _)| i);
                exponent = after[..digits_end]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {text:?}")))?;
                rest = &after[digits_end..];
            }
            letters.push((*index, exponent));
            rest = rest.trim_start();
        }
        Ok(Word { letters })
    }

    /// Inverse of [`Word::parse`]; the empty word prints as `"e"`.
    pub fn to_text<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.letters.is_empty() {
            return "e".to_string();
        }
        let mut out = String::new();
        for (i, &(g, e)) in self.letters.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let name = names.get(g).map(|s| s.as_ref().to_string()).unwrap_or_else(|| format!("g{g}"));
            out.push_str(&name);
            if e != 1 {
                let _ = write!(out, "^{e}");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const XY: [&str; 2] = ["x", "y"];

    #[test]
    fn free_reduction_cancels_and_merges() {
        let w = Word::new(vec![(0, 1), (1, 1), (1, -1), (0, 1)]);
        assert_eq!(w.reduced(), Word::letter(0, 2));
        let cancel = Word::new(vec![(0, 2), (0, -2)]);
        assert!(cancel.reduced().letters().is_empty());
    }

    #[test]
    fn parse_and_print() {
        let names = ["a", "b", "z"];
        let w = Word::parse("a^2 b^-1 z^3", &names).unwrap();
        assert_eq!(w.letters(), &[(0, 2), (1, -1), (2, 3)]);
        assert_eq!(w.to_text(&names), "a^2 b^-1 z^3");
        assert_eq!(Word::parse("ba", &names).unwrap().letters(), &[(1, 1), (0, 1)]);
        assert_eq!(Word::parse("e", &names).unwrap(), Word::identity());
        assert_eq!(Word::identity().to_text(&names), "e");
        assert!(Word::parse("A", &names).is_err());
        assert!(Word::parse("a^x", &names).is_err());
    }

    #[test]
    fn parse_prefers_longest_name() {
        let names = ["a1", "b1", "a11"];
        assert_eq!(Word::parse("a11 a1^-2", &names).unwrap().letters(), &[(2, 1), (0, -2)]);
    }

    #[test]
    fn commutator_layout() {
        let c = Word::commutator(&Word::generator(0), &Word::generator(1));
        assert_eq!(c.to_text(&XY), "x y x^-1 y^-1");
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..3, -3i64..=3), 0..12).prop_map(Word::new)
    }

    proptest! {
        #[test]
        fn reduction_never_lengthens(w in word_strategy()) {
            prop_assert!(w.reduced().length() <= w.length());
            prop_assert_eq!(w.reduced().reduced(), w.reduced());
        }

        #[test]
        fn inverse_cancels(w in word_strategy()) {
            prop_assert!(w.concat(&w.inverse()).reduced().letters().is_empty());
        }

        #[test]
        fn text_round_trip(w in word_strategy()) {
            let names = ["a", "b", "z"];
            let r = w.reduced();
            prop_assert_eq!(Word::parse(&r.to_text(&names), &names).unwrap(), r);
        }
    }
}
