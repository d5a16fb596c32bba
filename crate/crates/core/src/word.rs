//! Reduced words in the free group of rank `n` on `a1, ..., an`.
//!
//! Text grammar: for rank at most 26 the lowercase letters `a`..`z` are the
//! generators and the uppercase letters their inverses (`"aabbA"`). Any rank
//! also accepts the token form `x3` / `X3`. Printing uses letters up to rank
//! 26 and tokens above it; the identity prints as the empty string.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A generator `a_i` or its inverse, stored as `+i` / `-i`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Letter(i32);

impl Letter {
    /// `generator` is 1-based.
    pub fn new(generator: usize, inverse: bool) -> Letter {
        assert!(generator >= 1, "generator indices start at 1");
        let g = generator as i32;
        Letter(if inverse { -g } else { g })
    }

    pub fn gen(generator: usize) -> Letter {
        Letter::new(generator, false)
    }

    pub fn gen_inv(generator: usize) -> Letter {
        Letter::new(generator, true)
    }

    pub fn from_raw(raw: i32) -> Letter {
        assert!(raw != 0);
        Letter(raw)
    }

    pub fn raw(self) -> i32 {
        self.0
    }

    pub fn generator(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Position in the total order `a1 < A1 < a2 < A2 < ...`.
    pub fn index(self) -> usize {
        2 * (self.generator() - 1) + usize::from(self.is_inverse())
    }

    pub fn from_index(index: usize) -> Letter {
        Letter::new(index / 2 + 1, index % 2 == 1)
    }

    /// Name used in DOT output and the token grammar: `a3` / `A3`.
    pub fn token(self) -> String {
        if self.is_inverse() {
            format!("A{}", self.generator())
        } else {
            format!("a{}", self.generator())
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index().cmp(&other.index())
    }
}

/// A freely reduced word. The rank travels with the word so that mixing
/// words from different free groups is caught.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

fn check_rank(rank: usize) -> Result<()> {
    if rank < 2 {
        return Err(Error::invalid(format!("rank must be at least 2, got {rank}")));
    }
    Ok(())
}

fn push_reduced(buf: &mut Vec<Letter>, l: Letter) {
    if buf.last() == Some(&l.inverse()) {
        buf.pop();
    } else {
        buf.push(l);
    }
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        assert!(rank >= 2, "rank must be at least 2");
        Word { rank, letters: Vec::new() }
    }

    pub fn generator(rank: usize, generator: usize) -> Word {
        assert!(generator >= 1 && generator <= rank);
        Word { rank, letters: vec![Letter::gen(generator)] }
    }

    /// Freely reduce an arbitrary letter sequence.
    pub fn reduce(rank: usize, raw: impl IntoIterator<Item = Letter>) -> Result<Word> {
        check_rank(rank)?;
        let mut letters = Vec::new();
        for l in raw {
            if l.generator() > rank {
                return Err(Error::invalid(format!(
                    "letter {} out of range for rank {rank}",
                    l.token()
                )));
            }
            push_reduced(&mut letters, l);
        }
        Ok(Word { rank, letters })
    }

    /// Reduce letters already known to be in range.
    pub(crate) fn from_letters_unchecked(rank: usize, raw: impl IntoIterator<Item = Letter>) -> Word {
        let mut letters = Vec::new();
        for l in raw {
            debug_assert!(l.generator() <= rank);
            push_reduced(&mut letters, l);
        }
        Word { rank, letters }
    }

    pub fn from_raw(rank: usize, raw: &[i32]) -> Result<Word> {
        if raw.contains(&0) {
            return Err(Error::invalid("0 is not a letter"));
        }
        Word::reduce(rank, raw.iter().map(|&r| Letter::from_raw(r)))
    }

    pub fn parse(text: &str, rank: usize) -> Result<Word> {
        let letters = parse_letters(text)?;
        Word::reduce(rank, letters).map_err(|e| Error::Parse {
            text: text.to_string(),
            reason: e.to_string(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
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

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// The same letters viewed in a free group of another rank.
    pub fn with_rank(&self, rank: usize) -> Result<Word> {
        Word::reduce(rank, self.letters.iter().copied())
    }

    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.generator()).max().unwrap_or(0)
    }

    pub fn uses_generator(&self, generator: usize) -> bool {
        self.letters.iter().any(|l| l.generator() == generator)
    }

    fn same_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.same_rank(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.reserve(other.len());
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Word { rank: self.rank, letters }
    }

    pub fn invert(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `k u k^-1`.
    pub fn conjugate(&self, k: &Word) -> Result<Word> {
        self.same_rank(k)?;
        Ok(k.mul_unchecked(self).mul_unchecked(&k.invert()))
    }

    pub fn power(&self, r: i64) -> Word {
        let base = if r < 0 { self.invert() } else { self.clone() };
        let (conj, core) = base.cyclic_reduce_raw();
        if core.is_empty() || r == 0 {
            return Word::identity(self.rank);
        }
        // core^|r| has no internal cancellation because core is cyclically reduced
        let mut letters = Vec::with_capacity(2 * conj.len() + core.len() * r.unsigned_abs() as usize);
        letters.extend_from_slice(&conj);
        for _ in 0..r.unsigned_abs() {
            letters.extend_from_slice(&core);
        }
        letters.extend(conj.iter().rev().map(|l| l.inverse()));
        Word { rank: self.rank, letters }
    }

    /// Split as `conj . core . conj^-1` with `core` cyclically reduced.
    fn cyclic_reduce_raw(&self) -> (Vec<Letter>, Vec<Letter>) {
        let l = &self.letters;
        let n = l.len();
        let mut i = 0;
        while 2 * i + 1 < n && l[i] == l[n - 1 - i].inverse() {
            i += 1;
        }
        (l[..i].to_vec(), l[i..n - i].to_vec())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) => self.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Returns `(conjugator, core)` with `self = conjugator . core . conjugator^-1`.
    pub fn cyclic_reduce(&self) -> (Word, CyclicWord) {
        let (conj, core) = self.cyclic_reduce_raw();
        (
            Word { rank: self.rank, letters: conj },
            CyclicWord::from_cyclically_reduced(self.rank, core),
        )
    }

    /// The cyclically reduced core as a plain word, without rotating it.
    pub fn cyclic_core(&self) -> Word {
        let (_, core) = self.cyclic_reduce_raw();
        Word { rank: self.rank, letters: core }
    }

    pub fn canonical_conjugacy_rep(&self) -> CyclicWord {
        self.cyclic_reduce().1
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word { rank: self.rank, letters: self.letters[..len].to_vec() }
    }

    /// Subword on the half-open letter range, which is automatically reduced.
    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word { rank: self.rank, letters: self.letters[start..end].to_vec() }
    }
}

impl std::ops::Mul for &Word {
    type Output = Word;

    /// Panics on rank mismatch; use [`Word::multiply`] for a checked product.
    fn mul(self, rhs: &Word) -> Word {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in word product");
        self.mul_unchecked(rhs)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, self.rank, &self.letters)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, rank: usize, letters: &[Letter]) -> fmt::Result {
    for &l in letters {
        if rank <= 26 {
            let c = (b'a' + (l.generator() - 1) as u8) as char;
            let c = if l.is_inverse() { c.to_ascii_uppercase() } else { c };
            write!(f, "{c}")?;
        } else if l.is_inverse() {
            write!(f, "X{}", l.generator())?;
        } else {
            write!(f, "x{}", l.generator())?;
        }
    }
    Ok(())
}

/// Parse the letters of `text` without reducing. `""` and `"1"` are the identity.
pub fn parse_letters(text: &str) -> Result<Vec<Letter>> {
    let text = text.trim();
    let err = |reason: String| Error::Parse { text: text.to_string(), reason };
    if text == "1" {
        return Ok(Vec::new());
    }
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if !c.is_ascii_alphabetic() {
            return Err(err(format!("unexpected character {c:?}")));
        }
        let digits: String = chars[i + 1..].iter().take_while(|d| d.is_ascii_digit()).collect();
        if (c == 'x' || c == 'X') && !digits.is_empty() {
            let g: usize = digits.parse().map_err(|_| err(format!("bad index {digits}")))?;
            if g == 0 {
                return Err(err("generator index 0".into()));
            }
            out.push(Letter::new(g, c == 'X'));
            i += 1 + digits.len();
        } else {
            if !digits.is_empty() {
                return Err(err(format!("digits after {c:?} (use x3 / X3 tokens)")));
            }
            let g = (c.to_ascii_lowercase() as u8 - b'a') as usize + 1;
            out.push(Letter::new(g, c.is_ascii_uppercase()));
            i += 1;
        }
    }
    Ok(out)
}

/// Smallest rank (at least 2) in which `text` parses.
pub fn infer_rank(text: &str) -> Result<usize> {
    let letters = parse_letters(text)?;
    Ok(letters.iter().map(|l| l.generator()).max().unwrap_or(0).max(2))
}

/// Start index of the lexicographically least rotation.
fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        match a.cmp(&b) {
            Ordering::Equal => k += 1,
            ord => {
                if ord == Ordering::Greater {
                    i += k + 1;
                } else {
                    j += k + 1;
                }
                if i == j {
                    j += 1;
                }
                k = 0;
            }
        }
    }
    i.min(j)
}

/// A cyclically reduced word stored in its least rotation; equal values
/// are exactly conjugate elements.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct CyclicWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl CyclicWord {
    pub(crate) fn from_cyclically_reduced(rank: usize, mut letters: Vec<Letter>) -> CyclicWord {
        debug_assert!(
            letters.len() <= 1 || letters[0] != letters[letters.len() - 1].inverse(),
            "not cyclically reduced"
        );
        if !letters.is_empty() {
            let start = least_rotation(&letters);
            letters.rotate_left(start);
        }
        CyclicWord { rank, letters }
    }

    pub fn rank(&self) -> usize {
        self.rank
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

    pub fn to_word(&self) -> Word {
        Word { rank: self.rank, letters: self.letters.clone() }
    }

    /// Generators that appear in neither sign.
    pub fn missing_generators(&self) -> Vec<usize> {
        let mut seen = vec![false; self.rank + 1];
        for l in &self.letters {
            seen[l.generator()] = true;
        }
        (1..=self.rank).filter(|&g| !seen[g]).collect()
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, self.rank, &self.letters)
    }
}

impl Serialize for CyclicWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Uniform random reduced word of exactly `len` letters.
pub fn random_reduced_word<R: Rng + ?Sized>(rng: &mut R, rank: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::from_index(rng.gen_range(0..2 * rank));
        if letters.last() != Some(&l.inverse()) {
            letters.push(l);
        }
    }
    Word { rank, letters }
}

/// Random reduced word whose letters avoid generator `rank` (a word in the
/// free factor on the first `rank - 1` generators, still carrying `rank`).
pub fn random_word_avoiding_last<R: Rng + ?Sized>(rng: &mut R, rank: usize, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::from_index(rng.gen_range(0..2 * (rank - 1)));
        if letters.last() != Some(&l.inverse()) {
            letters.push(l);
        }
    }
    Word { rank, letters }
}

/// All reduced words of exactly `len` letters, in lexicographic letter order.
pub fn reduced_words(rank: usize, len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(rank: usize, len: usize, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if cur.len() == len {
            out.push(Word { rank, letters: cur.clone() });
            return;
        }
        for idx in 0..2 * rank {
            let l = Letter::from_index(idx);
            if cur.last() == Some(&l.inverse()) {
                continue;
            }
            cur.push(l);
            rec(rank, len, cur, out);
            cur.pop();
        }
    }
    rec(rank, len, &mut cur, &mut out);
    out
}

/// All reduced words of length at most `max_len`, shortest first.
pub fn reduced_words_up_to(rank: usize, max_len: usize) -> Vec<Word> {
    (0..=max_len).flat_map(|l| reduced_words(rank, l)).collect()
}

/// All cyclically reduced words of exactly `len` letters (not up to rotation).
pub fn cyclically_reduced_words(rank: usize, len: usize) -> Vec<Word> {
    reduced_words(rank, len)
        .into_iter()
        .filter(|w| w.is_cyclically_reduced())
        .collect()
}
