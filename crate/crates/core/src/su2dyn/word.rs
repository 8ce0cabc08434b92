use super::{RepTuple, SU2};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unexpected `{found}` at byte {at}")]
    Unexpected { found: char, at: usize },
    #[error("generator index must be 1, 2 or 3, got {0}")]
    Generator(u64),
    #[error("bad exponent at byte {0}")]
    Exponent(usize),
}

/// One letter `F_g^e` with `g` in `1..=3` and `e = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: u8, inverse: bool) -> Letter {
        assert!((1..=3).contains(&generator), "generator {generator} out of range");
        Letter { generator, inverse }
    }

    pub fn exponent(&self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Letter {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

/// A freely reduced word in `F1, F2, F3`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn generator(g: u8) -> Word {
        Word(vec![Letter::new(g, false)])
    }

    /// Builds from signed indices, `-2` standing for `F2^-1`.
    pub fn from_signed(letters: &[i8]) -> Word {
        Word::from_letters(letters.iter().map(|&x| Letter::new(x.unsigned_abs(), x < 0)))
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(it: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in it {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn signed(&self) -> Vec<i8> {
        self.0.iter().map(|l| l.exponent() * l.generator as i8).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, o: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(&o.0).copied())
    }

    /// Replaces each `F_i` by `images[i - 1]`.
    pub fn substitute(&self, images: &[Word; 3]) -> Word {
        Word::from_letters(self.0.iter().flat_map(|l| {
            let w = &images[l.generator as usize - 1];
            if l.inverse {
                w.inverse().0
            } else {
                w.0.clone()
            }
        }))
    }

    pub fn eval(&self, r: &RepTuple) -> SU2 {
        let mut acc = SU2::IDENTITY;
        for l in &self.0 {
            let g = r.0[l.generator as usize - 1];
            acc = acc * if l.inverse { g.inverse() } else { g };
        }
        acc.normalized()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "F{}", l.generator)?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Accepts `F1 F2^-1`, `F1*F2^-1`, `F1F2^-1` and integer powers such as
/// `F3^2`; `1` or an empty string is the identity.
impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        let b = s.as_bytes();
        let mut i = 0;
        let mut letters = Vec::new();
        let number = |i: &mut usize| -> Option<u64> {
            let start = *i;
            while *i < b.len() && b[*i].is_ascii_digit() {
                *i += 1;
            }
            s[start..*i].parse().ok()
        };
        if s.trim() == "1" {
            return Ok(Word::identity());
        }
        while i < b.len() {
            match b[i] {
                b' ' | b'\t' | b'*' | b'.' => i += 1,
                b'F' | b'f' => {
                    i += 1;
                    let g = number(&mut i).ok_or(WordError::Exponent(i))?;
                    if !(1..=3).contains(&g) {
                        return Err(WordError::Generator(g));
                    }
                    let mut e: i64 = 1;
                    if i < b.len() && b[i] == b'^' {
                        i += 1;
                        let neg = i < b.len() && b[i] == b'-';
                        if neg {
                            i += 1;
                        }
                        let at = i;
                        let n = number(&mut i).filter(|&n| n <= 64).ok_or(WordError::Exponent(at))?;
                        e = if neg { -(n as i64) } else { n as i64 };
                    }
                    for _ in 0..e.unsigned_abs() {
                        letters.push(Letter::new(g as u8, e < 0));
                    }
                }
                _ => {
                    let found = s[i..].chars().next().unwrap_or('?');
                    return Err(WordError::Unexpected { found, at: i });
                }
            }
        }
        Ok(Word::from_letters(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
