//! Words in the free group on `x_0 .. x_{n-1}`, cyclic presentations and the
//! shift automorphism `x_i -> x_{i+1}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(u32),
    #[error("parameter {name}={value} out of range for n={n}")]
    OutOfRange { name: &'static str, value: u32, n: u32 },
    #[error("cannot parse token `{0}` (expected xI or XI)")]
    BadToken(String),
    #[error("generator x{gen} does not exist in rank {n}")]
    GeneratorOutOfRange { gen: u32, n: u32 },
    #[error("relator is not cyclically reduced")]
    NotCyclicallyReduced,
}

/// A generator or its inverse. `gen` is always normalized into `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: u32, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn pos(gen: u32) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn neg(gen: u32) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    /// +1 or -1.
    pub fn sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn shifted(self, j: i64, n: u32) -> Self {
        let g = (self.gen as i64 + j).rem_euclid(n as i64) as u32;
        Letter { gen: g, inverse: self.inverse }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "X{}", self.gen)
        } else {
            write!(f, "x{}", self.gen)
        }
    }
}

/// A word over `x_0 .. x_{n-1}` stored as an explicit letter sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    n: u32,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(n: u32, letters: Vec<Letter>) -> Result<Self, WordError> {
        if n < 2 {
            return Err(WordError::RankTooSmall(n));
        }
        if let Some(l) = letters.iter().find(|l| l.gen >= n) {
            return Err(WordError::GeneratorOutOfRange { gen: l.gen, n });
        }
        Ok(Word { n, letters })
    }

    /// Builds a word from signed generator indices, normalizing them mod `n`.
    pub fn from_signed(n: u32, letters: &[(i64, bool)]) -> Result<Self, WordError> {
        if n < 2 {
            return Err(WordError::RankTooSmall(n));
        }
        let letters = letters
            .iter()
            .map(|&(g, inv)| Letter::new(g.rem_euclid(n as i64) as u32, inv))
            .collect();
        Ok(Word { n, letters })
    }

    pub fn empty(n: u32) -> Self {
        Word { n, letters: Vec::new() }
    }

    /// Parses whitespace-separated tokens `xI` / `XI` (capital is the inverse).
    pub fn parse(n: u32, text: &str) -> Result<Self, WordError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (inverse, digits) = match tok.as_bytes().first() {
                Some(b'x') => (false, &tok[1..]),
                Some(b'X') => (true, &tok[1..]),
                _ => return Err(WordError::BadToken(tok.to_string())),
            };
            let gen = u32::from_str(digits).map_err(|_| WordError::BadToken(tok.to_string()))?;
            letters.push(Letter { gen, inverse });
        }
        Word::new(n, letters)
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { n: self.n, letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Concatenation; both words must live in the same rank.
    pub fn concat(&self, other: &Word) -> Word {
        debug_assert_eq!(self.n, other.n);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { n: self.n, letters }
    }

    /// Cyclic rotation starting at position `start`.
    pub fn rotate(&self, start: usize) -> Word {
        if self.letters.is_empty() {
            return self.clone();
        }
        let s = start % self.letters.len();
        let mut letters = self.letters[s..].to_vec();
        letters.extend_from_slice(&self.letters[..s]);
        Word { n: self.n, letters }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inv())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_freely_reduced()
            && (self.letters.len() < 2
                || self.letters[0] != self.letters[self.letters.len() - 1].inv())
    }

    /// True when `other` is a cyclic rotation of `self`.
    pub fn is_rotation_of(&self, other: &Word) -> bool {
        if self.n != other.n || self.len() != other.len() {
            return false;
        }
        if self.is_empty() {
            return true;
        }
        (0..self.len()).any(|s| self.rotate(s).letters == other.letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", l)?;
        }
        Ok(())
    }
}

/// `x_0 x_m x_k^{-1}`, the defining word of `G_n(m,k)`.
pub fn fib_word(n: u32, m: u32, k: u32) -> Result<Word, WordError> {
    if n < 2 {
        return Err(WordError::RankTooSmall(n));
    }
    if m >= n {
        return Err(WordError::OutOfRange { name: "m", value: m, n });
    }
    if k >= n {
        return Err(WordError::OutOfRange { name: "k", value: k, n });
    }
    Word::new(n, vec![Letter::pos(0), Letter::pos(m), Letter::neg(k)])
}

/// Applies `theta^j`: every generator index moves by `j` mod `n`.
pub fn shift(word: &Word, j: i64) -> Word {
    Word { n: word.n, letters: word.letters.iter().map(|l| l.shifted(j, word.n)).collect() }
}

/// Free reduction, optionally followed by cyclic reduction.
pub fn reduce(word: &Word, cyclic: bool) -> Word {
    let mut stack: Vec<Letter> = Vec::with_capacity(word.letters.len());
    for &l in &word.letters {
        if stack.last() == Some(&l.inv()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    if cyclic {
        let mut lo = 0;
        let mut hi = stack.len();
        while hi - lo >= 2 && stack[lo] == stack[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        stack = stack[lo..hi].to_vec();
    }
    Word { n: word.n, letters: stack }
}

/// The cyclic presentation `P_n(w)` with relators `w, theta(w), ..., theta^{n-1}(w)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicPresentation {
    n: u32,
    w: Word,
}

impl CyclicPresentation {
    pub fn new(w: Word) -> Result<Self, WordError> {
        if !w.is_cyclically_reduced() {
            return Err(WordError::NotCyclicallyReduced);
        }
        Ok(CyclicPresentation { n: w.rank(), w })
    }

    /// `P_n(m,k)`. The word need not be cyclically reduced when `k = 0` or
    /// `k = m`; those degenerate presentations are still admitted here.
    pub fn fibonacci_type(n: u32, m: u32, k: u32) -> Result<Self, WordError> {
        let w = fib_word(n, m, k)?;
        Ok(CyclicPresentation { n, w })
    }

    pub fn rank(&self) -> u32 {
        self.n
    }

    pub fn word(&self) -> &Word {
        &self.w
    }
}

/// Relator `i` is `shift(w, i)`, in index order.
pub fn relators(p: &CyclicPresentation) -> Vec<Word> {
    (0..p.n).map(|i| shift(&p.w, i as i64)).collect()
}
