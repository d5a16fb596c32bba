use serde::Serialize;

use super::norm::{lower_from_values, pk_values, sep_norm_upper_cached, KValue, QuasimorphismLower, SeparabilityCache};
use crate::error::{Error, Result};
use crate::quasimorphism::DefectBound;
use crate::word::{reduced_words_up_to, Word};

fn same_rank(g: &Word, h: &Word) -> Result<()> {
    if g.rank() != h.rank() {
        return Err(Error::RankMismatch { left: g.rank(), right: h.rank() });
    }
    Ok(())
}

/// Lower bound for the distance between the conjugacy classes `[g]` and
/// `[h]`: `max_k ceil(|q~_k(g) - q~_k(h)| / D)`. The homogenizations are
/// conjugation invariant, so this bounds every `|g (k h k^-1)^-1|` at once.
pub fn quotient_dist_lower(g: &Word, h: &Word, ks: &[usize], defect: &DefectBound) -> Result<QuasimorphismLower> {
    same_rank(g, h)?;
    let values = pk_values(g, ks)?
        .into_iter()
        .zip(pk_values(h, ks)?)
        .map(|(a, b)| KValue { k: a.k, value: a.value - b.value })
        .collect();
    lower_from_values(values, defect)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientUpper {
    pub distance: u64,
    pub conjugator: Word,
    pub factorization: Vec<Word>,
}

/// `min |g (k h k^-1)^-1|` over conjugators `k` of length at most `conj_len`,
/// with the separable norm bounded by [`super::sep_norm_upper`].
pub fn quotient_dist_upper(g: &Word, h: &Word, conj_len: usize) -> Result<QuotientUpper> {
    same_rank(g, h)?;
    let mut cache = SeparabilityCache::default();
    let mut best: Option<QuotientUpper> = None;
    for k in reduced_words_up_to(g.rank(), conj_len) {
        let x = g * &h.conjugate(&k)?.invert();
        let f = sep_norm_upper_cached(&x, &mut cache);
        if best.as_ref().map_or(true, |b| (f.length as u64) < b.distance) {
            best = Some(QuotientUpper { distance: f.length as u64, conjugator: k, factorization: f.factors });
            if f.length == 0 {
                break;
            }
        }
    }
    Ok(best.expect("the identity conjugator is always tried"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasimorphism::{make_pk, Rational};

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    #[test]
    fn lower_examples() {
        let d = DefectBound::fixed(Rational::from_integer(3));
        let p1 = make_pk(2, 1).unwrap();
        for r in 1..=12 {
            let lo = quotient_dist_lower(&p1.power(r), &w(""), &[1, 2], &d).unwrap();
            assert_eq!(lo.value, (r as u64).div_ceil(3));
        }
        let g = w("aabbab");
        assert_eq!(quotient_dist_lower(&g, &g.conjugate(&w("bA")).unwrap(), &[1, 2], &d).unwrap().value, 0);
        assert_eq!(quotient_dist_lower(&w("abab"), &w(""), &[1, 2, 3], &d).unwrap().value, 0);
    }

    #[test]
    fn upper_examples() {
        let g = w("aabbab");
        assert_eq!(quotient_dist_upper(&g, &g, 0).unwrap().distance, 0);
        let up = quotient_dist_upper(&w("baB"), &w("a"), 1).unwrap();
        assert_eq!(up.distance, 0);
        assert_eq!(up.conjugator, w("b"));
        assert_eq!(quotient_dist_upper(&w("aabba"), &w(""), 2).unwrap().distance, 2);
    }
}
