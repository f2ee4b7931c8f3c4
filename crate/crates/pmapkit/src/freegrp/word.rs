use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A generator `a_i` or its inverse. Indices may be negative (two-ended
/// loop families are indexed by the integers).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: i32,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: i32) -> Self {
        Letter { gen, inv: false }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.inv { 'A' } else { 'a' };
        write!(f, "{c}{}", self.gen)
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn gen(i: i32) -> Self {
        Word(vec![Letter::new(i)])
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    /// Builds a word from signed indices: `k` is `a_k`, and `-k` (written via
    /// `(k, true)`) its inverse.
    pub fn from_pairs(pairs: &[(i32, bool)]) -> Self {
        Word::from_letters(pairs.iter().map(|&(gen, inv)| Letter { gen, inv }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, rhs: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &rhs.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Splits `self = p · q · p⁻¹` with `q` cyclically reduced.
    pub fn cyclic_split(&self) -> (Word, Word) {
        let l = &self.0;
        let mut k = 0;
        while 2 * k + 1 < l.len() && l[k].cancels(l[l.len() - 1 - k]) {
            k += 1;
        }
        (Word(l[..k].to_vec()), Word(l[k..l.len() - k].to_vec()))
    }

    /// `self⁻¹ · x · self`.
    pub fn conjugate(&self, x: &Word) -> Word {
        self.inverse().mul(x).mul(self)
    }

    /// Applies the endomorphism determined by the image of each generator.
    pub fn substitute(&self, image: impl Fn(i32) -> Word) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in &self.0 {
            let w = image(l.gen);
            if l.inv {
                for &x in w.0.iter().rev() {
                    push_reduced(&mut out, x.inverse());
                }
            } else {
                for &x in &w.0 {
                    push_reduced(&mut out, x);
                }
            }
        }
        Word(out)
    }

    /// Relabels generators letter by letter.
    pub fn map_gens(&self, f: impl Fn(i32) -> i32) -> Word {
        Word::from_letters(self.0.iter().map(|l| Letter { gen: f(l.gen), inv: l.inv }))
    }

    pub fn gens(&self) -> BTreeSet<i32> {
        self.0.iter().map(|l| l.gen).collect()
    }

    pub fn max_gen(&self) -> Option<i32> {
        self.0.iter().map(|l| l.gen).max()
    }

    pub fn min_gen(&self) -> Option<i32> {
        self.0.iter().map(|l| l.gen).min()
    }

    /// Whether every letter lies in `allowed`.
    pub fn is_over(&self, allowed: impl Fn(i32) -> bool) -> bool {
        self.0.iter().all(|l| allowed(l.gen))
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    match out.last() {
        Some(&last) if last.cancels(l) => {
            out.pop();
        }
        _ => out.push(l),
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
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts `a1 A1 a2`, `a1A1a2`, `a-3`, and `1` or the empty string for
    /// the identity. Capital letters denote inverses.
    fn from_str(s: &str) -> Result<Word> {
        let chars: Vec<char> = s.chars().collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '1' && letters.is_empty() && chars[i + 1..].iter().all(|c| c.is_whitespace()) {
                return Ok(Word::identity());
            }
            let inv = match c {
                'a' => false,
                'A' => true,
                _ => return Err(Error::Parse(format!("unexpected '{c}' in word '{s}'"))),
            };
            i += 1;
            let start = i;
            if i < chars.len() && chars[i] == '-' {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let gen: i32 = digits
                .parse()
                .map_err(|_| Error::Parse(format!("missing generator index in word '{s}'")))?;
            letters.push(Letter { gen, inv });
        }
        Ok(Word::from_letters(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
