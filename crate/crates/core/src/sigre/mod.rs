//! Signature regular expressions: letters, words, the expression AST and
//! its automaton.
//!
//! The alphabet is fixed to the three comparison letters `<`, `=`, `>`,
//! ordered `<` before `=` before `>`. That order, applied after length, is
//! the *canonical* word order used everywhere a witness has to be chosen.

mod ast;
mod automaton;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use ast::{parse, ParseError, ParseErrorKind, Regex};
pub use automaton::{bounded_height_automaton, compile, intersect, Automaton, Dfa};

/// One letter of a signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Lt,
    Eq,
    Gt,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::Lt, Letter::Eq, Letter::Gt];

    pub fn as_char(self) -> char {
        match self {
            Letter::Lt => '<',
            Letter::Eq => '=',
            Letter::Gt => '>',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            '<' => Some(Letter::Lt),
            '=' => Some(Letter::Eq),
            '>' => Some(Letter::Gt),
            _ => None,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A finite word over the signature alphabet.
///
/// `Ord` is the canonical order: shorter words first, then lexicographic
/// with `<` < `=` < `>`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// 1-based letter access.
    pub fn at(&self, i: usize) -> Letter {
        self.0[i - 1]
    }

    /// The factor `w[i..=j]`, 1-based and inclusive.
    pub fn factor(&self, i: usize, j: usize) -> Word {
        Word(self.0[i - 1..j].to_vec())
    }

    pub fn contains(&self, l: Letter) -> bool {
        self.0.contains(&l)
    }

    pub fn count(&self, l: Letter) -> usize {
        self.0.iter().filter(|&&x| x == l).count()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn with(&self, l: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(l);
        Word(v)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.0.ends_with(&self.0)
    }

    /// Is `self` a factor (contiguous subword) of `other`?
    pub fn is_factor_of(&self, other: &Word) -> bool {
        self.is_empty() || other.0.windows(self.len()).any(|x| x == self.0.as_slice())
    }

    /// All words of length `k`, canonical order.
    pub fn all_of_length(k: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..k {
            let mut next = Vec::with_capacity(out.len() * 3);
            for w in &out {
                for l in Letter::ALL {
                    next.push(w.with(l));
                }
            }
            out = next;
        }
        out
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid signature letter {found:?} at position {position}")]
pub struct WordParseError {
    pub position: usize,
    pub found: char,
}

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(i, c)| {
                Letter::from_char(c).ok_or(WordParseError {
                    position: i + 1,
                    found: c,
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Language-level failure of [`dc_decompose`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SigreError {
    #[error("branch {0} is not disjunction-capsuled")]
    NotDisjunctionCapsuled(usize),
}

/// Split the top-level union of `ast` into its branches and check that
/// each one is a concatenation whose factors are letters or nullable.
///
/// Branch indices in errors are 1-based.
pub fn dc_decompose(ast: &Regex) -> Result<Vec<Regex>, SigreError> {
    let branches: Vec<Regex> = match ast {
        Regex::Union(bs) => bs.clone(),
        other => vec![other.clone()],
    };
    for (k, b) in branches.iter().enumerate() {
        let ok = match b {
            Regex::Empty => false,
            Regex::Concat(fs) => fs.iter().all(|f| matches!(f, Regex::Letter(_)) || f.nullable()),
            Regex::Letter(_) => true,
            other => other.nullable(),
        };
        if !ok {
            return Err(SigreError::NotDisjunctionCapsuled(k + 1));
        }
    }
    Ok(branches)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_order() {
        let mut v = [w(">"), w("<<"), w(""), w("="), w("<"), w("><")];
        v.sort();
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["", "<", "=", ">", "<<", "><"]);
    }

    #[test]
    fn factor_and_affixes() {
        assert!(w("=<").is_factor_of(&w(">=<")));
        assert!(w("").is_factor_of(&w("")));
        assert!(!w("<>").is_factor_of(&w("><")));
        assert!(w(">=").is_prefix_of(&w(">=>")));
        assert!(w("=>").is_suffix_of(&w(">=>")));
        assert_eq!(w(">=>=>").factor(3, 5), w(">=>"));
    }

    #[test]
    fn bad_letter() {
        let e = "<a".parse::<Word>().unwrap_err();
        assert_eq!(e.position, 2);
    }

    #[test]
    fn dc_examples() {
        let infl = parse("<(<|=)*>|>(>|=)*<").unwrap();
        assert_eq!(dc_decompose(&infl).unwrap().len(), 2);
        let gorge = parse("(>(>|=)*)*><((<|=)*<)*").unwrap();
        assert_eq!(dc_decompose(&gorge).unwrap(), vec![gorge.clone()]);
        let bad = parse("(>|>(>|=)*>)(<|<(<|=)*<)").unwrap();
        assert_eq!(dc_decompose(&bad), Err(SigreError::NotDisjunctionCapsuled(1)));
        assert!(dc_decompose(&parse(">=+>").unwrap()).is_ok());
    }
}
