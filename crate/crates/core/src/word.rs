//! Words in the two parabolic generators.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    /// Vertical parabolic, `[[1, 0], [α, 1]]`.
    A,
    /// Horizontal parabolic, `[[1, β], [0, 1]]`.
    B,
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gen::A => "A",
            Gen::B => "B",
        })
    }
}

/// A signed generator power `gen^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: Gen,
    pub exp: i64,
}

impl Letter {
    pub const fn new(gen: Gen, exp: i64) -> Self {
        Letter { gen, exp }
    }

    pub const fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            exp: -self.exp,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.gen, self.exp)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordParseError(pub String);

impl fmt::Display for WordParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse generator word: {}", self.0)
    }
}

impl core::error::Error for WordParseError {}

impl FromStr for Letter {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || WordParseError(alloc::format!("bad letter {s:?}"));
        let (g, e) = s.split_once('^').unwrap_or((s, "1"));
        let gen = match g {
            "A" => Gen::A,
            "B" => Gen::B,
            _ => return Err(err()),
        };
        let exp = e.parse::<i64>().map_err(|_| err())?;
        Ok(Letter::new(gen, exp))
    }
}

/// A word in `A` and `B`, written in composition order: the last letter acts
/// first, so `A^-1 B^-1 A^1` applied to `P` means `A⁻¹(B⁻¹(A(P)))`.
///
/// The word is kept in normal form: no zero exponents and no two adjacent
/// letters with the same generator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorWord {
    letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn new() -> Self {
        GeneratorWord::default()
    }

    /// Builds a word from letters in composition order, merging as needed.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = GeneratorWord::new();
        for l in letters {
            w.push_right(l);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Appends on the right, i.e. the new letter acts before the current word.
    pub fn push_right(&mut self, l: Letter) {
        if l.exp == 0 {
            return;
        }
        match self.letters.last_mut() {
            Some(last) if last.gen == l.gen => {
                last.exp += l.exp;
                if last.exp == 0 {
                    self.letters.pop();
                }
            }
            _ => self.letters.push(l),
        }
    }

    /// Prepends on the left, i.e. the new letter acts after the current word.
    pub fn push_left(&mut self, l: Letter) {
        if l.exp == 0 {
            return;
        }
        match self.letters.first_mut() {
            Some(first) if first.gen == l.gen => {
                first.exp += l.exp;
                if first.exp == 0 {
                    self.letters.remove(0);
                }
            }
            _ => self.letters.insert(0, l),
        }
    }

    /// `other ∘ self`: `other` acts after `self`.
    pub fn prepend(&mut self, other: &GeneratorWord) {
        for l in other.letters.iter().rev() {
            self.push_left(*l);
        }
    }

    pub fn inverse(&self) -> GeneratorWord {
        GeneratorWord::from_letters(self.letters.iter().rev().map(|l| l.inverse()))
    }

    /// Letters in the order in which they act on a point.
    pub fn application_order(&self) -> impl Iterator<Item = Letter> + '_ {
        self.letters.iter().rev().copied()
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, l) in self.letters.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for GeneratorWord {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace()
            .map(Letter::from_str)
            .collect::<Result<Vec<_>, _>>()
            .map(GeneratorWord::from_letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merging_and_cancellation() {
        let w = GeneratorWord::from_letters([
            Letter::new(Gen::A, 2),
            Letter::new(Gen::A, -2),
            Letter::new(Gen::B, 1),
            Letter::new(Gen::B, 3),
        ]);
        assert_eq!(w.letters(), &[Letter::new(Gen::B, 4)]);
        let w = GeneratorWord::from_letters([Letter::new(Gen::A, 1), Letter::new(Gen::A, -1)]);
        assert!(w.is_empty());
    }

    #[test]
    fn prepend_collapses_across_the_seam() {
        let mut w: GeneratorWord = "A^-1 B^-1 A^1".parse().unwrap();
        let step: GeneratorWord = "A^-1 B^-1 A^1".parse().unwrap();
        w.prepend(&step);
        assert_eq!(w.to_string(), "A^-1 B^-2 A^1");
    }

    #[test]
    fn display_and_parse_round_trip() {
        let w: GeneratorWord = "A^-1 B^-1 A^1 B^12".parse().unwrap();
        assert_eq!(w.to_string(), "A^-1 B^-1 A^1 B^12");
        assert_eq!(w.to_string().parse::<GeneratorWord>().unwrap(), w);
        assert!("C^1".parse::<GeneratorWord>().is_err());
    }

    #[test]
    fn inverse_reverses_and_negates() {
        let w: GeneratorWord = "A^2 B^-3".parse().unwrap();
        assert_eq!(w.inverse().to_string(), "B^3 A^-2");
        let order: Vec<_> = w.application_order().collect();
        assert_eq!(order, [Letter::new(Gen::B, -3), Letter::new(Gen::A, 2)]);
    }
}
