use serde::Serialize;

use super::SplittingTHw;
use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// A letter of the basis `a_1, ..., a_(n-1), b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Sym {
    H(Letter),
    B(bool),
}

impl Sym {
    fn inverse(self) -> Sym {
        match self {
            Sym::H(l) => Sym::H(l.inverse()),
            Sym::B(inv) => Sym::B(!inv),
        }
    }
}

fn push(buf: &mut Vec<Sym>, s: Sym) {
    if buf.last() == Some(&s.inverse()) {
        buf.pop();
    } else {
        buf.push(s);
    }
}

/// `g` rewritten in the basis `a_1, ..., a_(n-1), b` using `a_n = w^-1 b`,
/// freely reduced.
pub(crate) fn symbols(g: &Word, t: &SplittingTHw) -> Result<Vec<Sym>> {
    if g.rank() != t.rank() {
        return Err(Error::RankMismatch { left: t.rank(), right: g.rank() });
    }
    let mut out = Vec::with_capacity(g.len());
    for &l in g.letters() {
        if t.is_h_letter(l) {
            push(&mut out, Sym::H(l));
        } else if !l.is_inverse() {
            for &x in t.w().invert().letters() {
                push(&mut out, Sym::H(x));
            }
            push(&mut out, Sym::B(false));
        } else {
            push(&mut out, Sym::B(true));
            for &x in t.w().letters() {
                push(&mut out, Sym::H(x));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Syllable {
    pub b_power: i64,
    pub h: Word,
}

/// `g = head b^(e_1) h_1 b^(e_2) h_2 ... b^(e_k) h_k` with every `h_i` in `H`,
/// every `e_i` nonzero, and `h_1, ..., h_(k-1)` nontrivial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyllableForm {
    pub head: Word,
    pub syllables: Vec<Syllable>,
}

impl SyllableForm {
    pub(crate) fn from_symbols(rank: usize, syms: &[Sym]) -> SyllableForm {
        let mut head = Vec::new();
        let mut syllables: Vec<Syllable> = Vec::new();
        let mut h_run: Vec<Letter> = Vec::new();
        let flush = |h_run: &mut Vec<Letter>, syllables: &mut Vec<Syllable>, head: &mut Vec<Letter>| {
            let h = Word::from_letters_unchecked(rank, h_run.drain(..));
            match syllables.last_mut() {
                Some(last) => last.h = h,
                None => *head = h.letters().to_vec(),
            }
        };
        let mut i = 0;
        while i < syms.len() {
            match syms[i] {
                Sym::H(l) => {
                    h_run.push(l);
                    i += 1;
                }
                Sym::B(inv) => {
                    flush(&mut h_run, &mut syllables, &mut head);
                    let mut e = 0i64;
                    while i < syms.len() && syms[i] == Sym::B(inv) {
                        e += 1;
                        i += 1;
                    }
                    let b_power = if inv { -e } else { e };
                    syllables.push(Syllable { b_power, h: Word::identity(rank) });
                }
            }
        }
        flush(&mut h_run, &mut syllables, &mut head);
        SyllableForm { head: Word::from_letters_unchecked(rank, head), syllables }
    }

    pub fn b_syllable_count(&self) -> usize {
        self.syllables.len()
    }

    pub fn in_h(&self) -> bool {
        self.syllables.is_empty()
    }

    /// The element lies in `<b>`.
    pub fn in_b(&self) -> bool {
        self.head.is_identity() && self.syllables.len() <= 1 && self.syllables.iter().all(|s| s.h.is_identity())
    }

    pub fn reassemble(&self, t: &SplittingTHw) -> Word {
        self.syllables
            .iter()
            .fold(self.head.clone(), |acc, s| &(&acc * &t.b_power(s.b_power)) * &s.h)
    }
}

pub fn basis_rewrite(g: &Word, t: &SplittingTHw) -> Result<SyllableForm> {
    Ok(SyllableForm::from_symbols(t.rank(), &symbols(g, t)?))
}
