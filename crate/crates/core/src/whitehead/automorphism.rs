use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// An elementary Whitehead automorphism.
///
/// Type II convention, for a multiplier `x` and a letter set `A` with
/// `x in A` and `X not in A`: `x` is fixed and every other letter `l` maps to
/// `[X if inverse(l) in A] . l . [x if l in A]`. On a generator `y` this is
/// `y`, `yx`, `Xy` or `Xyx` according to which of `y`, `Y` lie in `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WhiteheadAutomorphism {
    /// `a_i` maps to the letter `images[i - 1]`.
    Permutation {
        rank: usize,
        #[serde(serialize_with = "ser_letters")]
        images: Vec<Letter>,
    },
    Multiplier {
        rank: usize,
        #[serde(serialize_with = "ser_letter")]
        multiplier: Letter,
        #[serde(serialize_with = "ser_letters")]
        set: Vec<Letter>,
    },
}

fn ser_letter<S: serde::Serializer>(l: &Letter, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&l.token())
}

fn ser_letters<S: serde::Serializer>(ls: &[Letter], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ls.iter().map(|l| l.token()))
}

impl WhiteheadAutomorphism {
    pub fn permutation(rank: usize, images: Vec<Letter>) -> Result<Self> {
        if images.len() != rank {
            return Err(Error::invalid("permutation needs one image per generator"));
        }
        let mut seen = vec![false; rank + 1];
        for l in &images {
            if l.generator() > rank || std::mem::replace(&mut seen[l.generator()], true) {
                return Err(Error::invalid("permutation images must use each generator once"));
            }
        }
        Ok(WhiteheadAutomorphism::Permutation { rank, images })
    }

    pub fn multiplier(rank: usize, multiplier: Letter, set: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut set: Vec<Letter> = set.into_iter().collect();
        set.sort();
        set.dedup();
        if multiplier.generator() > rank || set.iter().any(|l| l.generator() > rank) {
            return Err(Error::invalid("letter out of range"));
        }
        if !set.contains(&multiplier) {
            return Err(Error::invalid("multiplier must belong to the letter set"));
        }
        if set.contains(&multiplier.inverse()) {
            return Err(Error::invalid("inverse of the multiplier must not belong to the letter set"));
        }
        Ok(WhiteheadAutomorphism::Multiplier { rank, multiplier, set })
    }

    pub fn identity(rank: usize) -> Self {
        WhiteheadAutomorphism::Permutation { rank, images: (1..=rank).map(Letter::gen).collect() }
    }

    pub fn rank(&self) -> usize {
        match self {
            WhiteheadAutomorphism::Permutation { rank, .. } | WhiteheadAutomorphism::Multiplier { rank, .. } => *rank,
        }
    }

    pub fn is_permutation(&self) -> bool {
        matches!(self, WhiteheadAutomorphism::Permutation { .. })
    }

    /// Image of a single letter as a reduced letter sequence.
    pub fn image(&self, l: Letter) -> Vec<Letter> {
        match self {
            WhiteheadAutomorphism::Permutation { images, .. } => {
                let img = images[l.generator() - 1];
                vec![if l.is_inverse() { img.inverse() } else { img }]
            }
            WhiteheadAutomorphism::Multiplier { multiplier, set, .. } => {
                let x = *multiplier;
                if l.generator() == x.generator() {
                    return vec![l];
                }
                let mut out = Vec::with_capacity(3);
                if set.contains(&l.inverse()) {
                    out.push(x.inverse());
                }
                out.push(l);
                if set.contains(&l) {
                    out.push(x);
                }
                out
            }
        }
    }

    pub fn letter_table(&self) -> LetterTable {
        let rank = self.rank();
        LetterTable {
            rank,
            images: (0..2 * rank).map(|i| self.image(Letter::from_index(i))).collect(),
        }
    }

    /// Reduced image of `w`.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.rank() != self.rank() {
            return Err(Error::RankMismatch { left: self.rank(), right: w.rank() });
        }
        Ok(self.letter_table().apply(w))
    }

    pub fn inverse(&self) -> Self {
        match self {
            WhiteheadAutomorphism::Permutation { rank, images } => {
                let mut inv = vec![Letter::gen(1); *rank];
                for (i, img) in images.iter().enumerate() {
                    inv[img.generator() - 1] = Letter::new(i + 1, img.is_inverse());
                }
                WhiteheadAutomorphism::Permutation { rank: *rank, images: inv }
            }
            WhiteheadAutomorphism::Multiplier { rank, multiplier, set } => {
                let x = *multiplier;
                let set = set
                    .iter()
                    .map(|&l| if l == x { x.inverse() } else { l })
                    .collect::<Vec<_>>();
                WhiteheadAutomorphism::multiplier(*rank, x.inverse(), set).expect("inverse of a valid multiplier move")
            }
        }
    }

    /// Images of the generators, as an endomorphism.
    pub fn to_endomorphism(&self) -> Endomorphism {
        let rank = self.rank();
        let images = (1..=rank)
            .map(|g| Word::from_letters_unchecked(rank, self.image(Letter::gen(g))))
            .collect();
        Endomorphism { rank, images }
    }
}

/// Precomputed letter images for fast repeated application.
#[derive(Clone, Debug)]
pub struct LetterTable {
    rank: usize,
    images: Vec<Vec<Letter>>,
}

impl LetterTable {
    pub fn apply(&self, w: &Word) -> Word {
        self.apply_letters(w.letters())
    }

    pub fn apply_letters(&self, letters: &[Letter]) -> Word {
        Word::from_letters_unchecked(
            self.rank,
            letters.iter().flat_map(|l| self.images[l.index()].iter().copied()),
        )
    }
}

/// All type II moves of the given rank, excluding the identity, in a fixed
/// order: multiplier in letter order, then the choice for each other
/// generator (`neither`, `y`, `Y`, `both`) as base-4 digits.
pub fn multiplier_moves(rank: usize) -> Vec<WhiteheadAutomorphism> {
    let mut out = Vec::new();
    for xi in 0..2 * rank {
        let x = Letter::from_index(xi);
        let others: Vec<usize> = (1..=rank).filter(|&g| g != x.generator()).collect();
        let combos = 4usize.pow(others.len() as u32);
        for code in 1..combos {
            let mut set = vec![x];
            let mut c = code;
            for &g in &others {
                match c % 4 {
                    1 => set.push(Letter::gen(g)),
                    2 => set.push(Letter::gen_inv(g)),
                    3 => {
                        set.push(Letter::gen(g));
                        set.push(Letter::gen_inv(g));
                    }
                    _ => {}
                }
                c /= 4;
            }
            out.push(WhiteheadAutomorphism::multiplier(rank, x, set).expect("well formed by construction"));
        }
    }
    out
}

/// All `n! 2^n` type I moves (including the identity).
pub fn permutation_moves(rank: usize) -> Vec<WhiteheadAutomorphism> {
    fn perms(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            perms(items, k + 1, out);
            items.swap(k, i);
        }
    }
    let mut all = Vec::new();
    perms(&mut (1..=rank).collect(), 0, &mut all);
    let mut out = Vec::new();
    for p in all {
        for signs in 0..(1u32 << rank) {
            let images = p
                .iter()
                .enumerate()
                .map(|(i, &g)| Letter::new(g, signs >> i & 1 == 1))
                .collect();
            out.push(WhiteheadAutomorphism::Permutation { rank, images });
        }
    }
    out
}

/// An endomorphism of the free group given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Endomorphism {
    rank: usize,
    images: Vec<Word>,
}

impl Endomorphism {
    pub fn identity(rank: usize) -> Endomorphism {
        Endomorphism { rank, images: (1..=rank).map(|g| Word::generator(rank, g)).collect() }
    }

    pub fn from_images(rank: usize, images: Vec<Word>) -> Result<Endomorphism> {
        if images.len() != rank || images.iter().any(|w| w.rank() != rank) {
            return Err(Error::invalid("endomorphism needs one image of matching rank per generator"));
        }
        Ok(Endomorphism { rank, images })
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Word {
        let inverses: Vec<Word> = self.images.iter().map(Word::invert).collect();
        let mut out = Word::identity(self.rank);
        for l in w.letters() {
            let img = if l.is_inverse() { &inverses[l.generator() - 1] } else { &self.images[l.generator() - 1] };
            out = out.mul_unchecked(img);
        }
        out
    }

    /// `self` after `first`: `x -> self(first(x))`.
    pub fn after(&self, first: &Endomorphism) -> Endomorphism {
        Endomorphism { rank: self.rank, images: first.images.iter().map(|w| self.apply(w)).collect() }
    }
}

/// Composite of a chain applied in order (`chain[0]` first).
pub fn compose_chain(rank: usize, chain: &[WhiteheadAutomorphism]) -> Endomorphism {
    chain
        .iter()
        .fold(Endomorphism::identity(rank), |acc, phi| phi.to_endomorphism().after(&acc))
}

/// Inverse of the composite of `chain`.
pub fn invert_chain(rank: usize, chain: &[WhiteheadAutomorphism]) -> Endomorphism {
    let inverses: Vec<WhiteheadAutomorphism> = chain.iter().rev().map(WhiteheadAutomorphism::inverse).collect();
    compose_chain(rank, &inverses)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn swap_relabels() {
        let swap = WhiteheadAutomorphism::permutation(2, vec![Letter::gen(2), Letter::gen(1)]).unwrap();
        assert_eq!(swap.apply(&w("aab")).unwrap(), w("bba"));
    }

    #[test]
    fn multiplier_example() {
        let phi = WhiteheadAutomorphism::multiplier(2, Letter::gen(1), [Letter::gen(1), Letter::gen(2)]).unwrap();
        assert_eq!(phi.apply(&w("b")).unwrap(), w("ba"));
        assert_eq!(phi.apply(&w("a")).unwrap(), w("a"));
        assert_eq!(phi.inverse().apply(&w("ba")).unwrap(), w("b"));
    }

    #[test]
    fn identity_move() {
        let id = WhiteheadAutomorphism::identity(2);
        assert_eq!(id.apply(&w("abAB")).unwrap(), w("abAB"));
    }

    #[test]
    fn malformed_multiplier_rejected() {
        assert!(WhiteheadAutomorphism::multiplier(2, Letter::gen(1), [Letter::gen(2)]).is_err());
        assert!(WhiteheadAutomorphism::multiplier(2, Letter::gen(1), [Letter::gen(1), Letter::gen_inv(1)]).is_err());
        assert!(WhiteheadAutomorphism::multiplier(2, Letter::gen(3), [Letter::gen(3)]).is_err());
        assert!(WhiteheadAutomorphism::permutation(2, vec![Letter::gen(1), Letter::gen(1)]).is_err());
    }

    #[test]
    fn move_counts() {
        assert_eq!(multiplier_moves(2).len(), 4 * 3);
        assert_eq!(multiplier_moves(3).len(), 6 * 15);
        assert_eq!(permutation_moves(3).len(), 6 * 8);
    }

    #[test]
    fn every_move_is_inverted() {
        for rank in 2..=3 {
            let words: Vec<Word> = crate::word::reduced_words_up_to(rank, 3);
            for phi in multiplier_moves(rank).into_iter().chain(permutation_moves(rank)) {
                let inv = phi.inverse();
                for x in &words {
                    assert_eq!(&inv.apply(&phi.apply(x).unwrap()).unwrap(), x, "{phi:?}");
                }
            }
        }
    }

    #[test]
    fn chain_composition_and_inverse() {
        let moves = multiplier_moves(2);
        let chain = vec![moves[3].clone(), moves[7].clone(), moves[1].clone()];
        let fwd = compose_chain(2, &chain);
        let back = invert_chain(2, &chain);
        for x in crate::word::reduced_words_up_to(2, 4) {
            let stepwise = chain.iter().fold(x.clone(), |acc, phi| phi.apply(&acc).unwrap());
            assert_eq!(fwd.apply(&x), stepwise);
            assert_eq!(back.apply(&stepwise), x);
        }
    }
}
