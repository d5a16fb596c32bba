use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quasimorphism::{
    quasimorphism_length_bound, serialize_rational, CountingQuasimorphism, DefectBound, Rational,
};
use crate::whitehead::{in_cut, is_separable};
use crate::word::{CyclicWord, Word};

/// Longest segment handed to the full separability decision while building
/// a factorization; longer segments are accepted only if they omit a
/// generator.
pub const SEPARABILITY_WINDOW: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SepFactorization {
    pub length: usize,
    pub factors: Vec<Word>,
}

impl SepFactorization {
    pub fn product(&self, rank: usize) -> Word {
        self.factors.iter().fold(Word::identity(rank), |acc, f| &acc * f)
    }
}

fn omits_generator(w: &Word) -> bool {
    (1..=w.rank()).any(|g| !w.uses_generator(g))
}

/// Separability of short segments, memoized per conjugacy class.
#[derive(Default)]
pub(crate) struct SeparabilityCache(HashMap<CyclicWord, bool>);

impl SeparabilityCache {
    pub(crate) fn check(&mut self, w: &Word) -> bool {
        if w.is_identity() {
            return false;
        }
        if omits_generator(w) {
            return true;
        }
        let key = w.canonical_conjugacy_rep();
        if omits_generator(&key.to_word()) {
            return true;
        }
        *self
            .0
            .entry(key)
            .or_insert_with(|| matches!(is_separable(w), Ok((true, _))))
    }
}

/// Shortest factorization of `g` into separable subwords, over segments
/// that omit a generator or are short enough for the exact test.
///
/// Single letters are always available, so the result never exceeds `|g|`.
pub fn sep_norm_upper(g: &Word) -> SepFactorization {
    sep_norm_upper_cached(g, &mut SeparabilityCache::default())
}

pub(crate) fn sep_norm_upper_cached(g: &Word, cache: &mut SeparabilityCache) -> SepFactorization {
    let n = g.len();
    let rank = g.rank();
    let letters = g.letters();
    let mut best = vec![usize::MAX; n + 1];
    let mut cut = vec![0usize; n + 1];
    best[0] = 0;
    for end in 1..=n {
        let mut seen = vec![false; rank + 1];
        let mut distinct = 0;
        for start in (0..end).rev() {
            let gen = letters[start].generator();
            if !seen[gen] {
                seen[gen] = true;
                distinct += 1;
            }
            let span = end - start;
            if distinct == rank && span > SEPARABILITY_WINDOW {
                break;
            }
            if best[start] == usize::MAX || best[start] + 1 >= best[end] {
                continue;
            }
            let ok = distinct < rank || cache.check(&g.subword(start, end));
            if ok {
                best[end] = best[start] + 1;
                cut[end] = start;
            }
        }
    }
    let mut factors = Vec::with_capacity(best[n]);
    let mut end = n;
    while end > 0 {
        factors.push(g.subword(cut[end], end));
        end = cut[end];
    }
    factors.reverse();
    SepFactorization { length: factors.len(), factors }
}

/// One homogenized value `q~_{p_k}(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KValue {
    pub k: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub value: Rational,
}

/// `max_k ceil(|v_k| / D)` for quasimorphism values `v_k` that vanish on
/// the generating set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasimorphismLower {
    pub value: u64,
    pub witness_k: Option<usize>,
    pub values: Vec<KValue>,
    pub defect_used: DefectBound,
}

pub(crate) fn lower_from_values(values: Vec<KValue>, defect: &DefectBound) -> Result<QuasimorphismLower> {
    let mut value = 0;
    let mut witness_k = None;
    for kv in &values {
        let b = quasimorphism_length_bound(kv.value, defect)?;
        if b > value {
            value = b;
            witness_k = Some(kv.k);
        }
    }
    Ok(QuasimorphismLower { value, witness_k, values, defect_used: defect.clone() })
}

pub(crate) fn pk_values(g: &Word, ks: &[usize]) -> Result<Vec<KValue>> {
    ks.iter()
        .map(|&k| {
            let q = CountingQuasimorphism::pk(g.rank(), k)?;
            Ok(KValue { k, value: q.homogenized(g)?.value() })
        })
        .collect()
}

/// Lower bound on the separable norm of `g` from the homogenized `q_{p_k}`,
/// which vanish on separable elements. `defect` must bound the defect of the
/// homogenizations.
pub fn sep_norm_lower(g: &Word, ks: &[usize], defect: &DefectBound) -> Result<QuasimorphismLower> {
    lower_from_values(pk_values(g, ks)?, defect)
}

#[derive(Clone, Debug, Serialize)]
pub struct SepNormBounds {
    pub lower: u64,
    pub upper: u64,
    pub factorization: Vec<Word>,
    pub witness_k: Option<usize>,
    pub defect_used: DefectBound,
    pub quasimorphism_lower: u64,
    /// The input is separable, as decided exactly, or known not to be.
    pub separable: Option<bool>,
    pub exact: bool,
}

/// Combines the factorization with the quasimorphism bound and two trivial
/// bounds: a nontrivial element needs one factor, a nonseparable one two.
pub fn norm_bounds(g: &Word, ks: &[usize], defect: &DefectBound) -> Result<SepNormBounds> {
    let qm = sep_norm_lower(g, ks, defect)?;
    let fact = sep_norm_upper(g);
    let separable = if g.is_identity() {
        None
    } else if !in_cut(g) {
        Some(false)
    } else {
        match is_separable(g) {
            Ok((s, _)) => Some(s),
            Err(Error::Undecided { .. }) => None,
            Err(e) => return Err(e),
        }
    };
    let trivial = match (g.is_identity(), separable) {
        (true, _) => 0,
        (false, Some(false)) => 2,
        (false, _) => 1,
    };
    let lower = qm.value.max(trivial);
    let witness_k = if qm.value >= trivial { qm.witness_k } else { None };
    let upper = fact.length as u64;
    Ok(SepNormBounds {
        lower,
        upper,
        factorization: fact.factors,
        witness_k,
        defect_used: qm.defect_used,
        quasimorphism_lower: qm.value,
        separable,
        exact: lower == upper,
    })
}
