//! Brooks counting quasimorphisms and their exact homogenization.

use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::word::{random_reduced_word, reduced_words_up_to, Letter, Word};

pub type Rational = Ratio<i64>;

/// Default cap on the length of `s^r` built by the limit estimate.
pub const DEFAULT_POWER_CAP: usize = 1_000_000;
/// Default cap on the number of `(x, y)` pairs an exhaustive defect search visits.
pub const DEFAULT_PAIR_BUDGET: usize = 50_000_000;

pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Overlapping occurrences of `pattern` in `text` (Knuth-Morris-Pratt).
fn count_matches(pattern: &[Letter], text: impl IntoIterator<Item = Letter>) -> usize {
    if pattern.is_empty() {
        return 0;
    }
    let mut fail = vec![0usize; pattern.len()];
    let mut k = 0;
    for i in 1..pattern.len() {
        while k > 0 && pattern[i] != pattern[k] {
            k = fail[k - 1];
        }
        if pattern[i] == pattern[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut count = 0;
    let mut k = 0;
    for c in text {
        while k > 0 && c != pattern[k] {
            k = fail[k - 1];
        }
        if c == pattern[k] {
            k += 1;
        }
        if k == pattern.len() {
            count += 1;
            k = fail[k - 1];
        }
    }
    count
}

pub fn count_occurrences(pattern: &Word, text: &Word) -> Result<usize> {
    if pattern.rank() != text.rank() {
        return Err(Error::RankMismatch { left: pattern.rank(), right: text.rank() });
    }
    if pattern.is_identity() {
        return Err(Error::invalid("pattern must be nonempty"));
    }
    Ok(count_matches(pattern.letters(), text.letters().iter().copied()))
}

/// Occurrences of `pattern` starting at one of the `|c|` positions of the
/// bi-infinite periodic word `...ccc...`.
fn cyclic_matches(pattern: &[Letter], core: &[Letter]) -> usize {
    if core.is_empty() {
        return 0;
    }
    let window = core.len() + pattern.len() - 1;
    count_matches(pattern, core.iter().copied().cycle().take(window))
}

/// `p_k = a_1^(k+1) a_2^(k+1) ... a_n^(k+1) a_1`.
pub fn make_pk(n: usize, k: usize) -> Result<Word> {
    if n < 2 {
        return Err(Error::invalid(format!("rank must be at least 2, got {n}")));
    }
    if k < 1 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let mut letters = Vec::with_capacity(n * (k + 1) + 1);
    for g in 1..=n {
        letters.extend(std::iter::repeat(Letter::gen(g)).take(k + 1));
    }
    letters.push(Letter::gen(1));
    Word::reduce(n, letters)
}

/// The counting quasimorphism `q_w(x) = C_w(x) - C_{w^-1}(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingQuasimorphism {
    pattern: Word,
    inverse: Word,
}

/// Exact value of the homogenization on one element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HomogenizedValue(pub Rational);

impl HomogenizedValue {
    pub fn value(self) -> Rational {
        self.0
    }

    /// The value as an integer; always exact for counting quasimorphisms.
    pub fn to_integer(self) -> i64 {
        debug_assert!(self.0.is_integer());
        self.0.to_integer()
    }
}

impl fmt::Display for HomogenizedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for HomogenizedValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_rational(&self.0, s)
    }
}

impl CountingQuasimorphism {
    pub fn new(pattern: Word) -> Result<Self> {
        if pattern.is_identity() {
            return Err(Error::invalid("pattern must be nonempty"));
        }
        let inverse = pattern.invert();
        Ok(CountingQuasimorphism { pattern, inverse })
    }

    /// `q_{p_k}` on the free group of rank `n`.
    pub fn pk(n: usize, k: usize) -> Result<Self> {
        CountingQuasimorphism::new(make_pk(n, k)?)
    }

    pub fn pattern(&self) -> &Word {
        &self.pattern
    }

    pub fn rank(&self) -> usize {
        self.pattern.rank()
    }

    fn check(&self, x: &Word) -> Result<()> {
        if x.rank() != self.rank() {
            return Err(Error::RankMismatch { left: self.rank(), right: x.rank() });
        }
        Ok(())
    }

    pub fn eval(&self, x: &Word) -> Result<i64> {
        self.check(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Word) -> i64 {
        let text = x.letters();
        count_matches(self.pattern.letters(), text.iter().copied()) as i64
            - count_matches(self.inverse.letters(), text.iter().copied()) as i64
    }

    /// `lim q(s^r) / r`, computed as the per-period count on the cyclic core.
    pub fn homogenized(&self, s: &Word) -> Result<HomogenizedValue> {
        self.check(s)?;
        Ok(self.homogenized_unchecked(s))
    }

    pub(crate) fn homogenized_unchecked(&self, s: &Word) -> HomogenizedValue {
        let core = s.cyclic_core();
        let fwd = cyclic_matches(self.pattern.letters(), core.letters()) as i64;
        let back = cyclic_matches(self.inverse.letters(), core.letters()) as i64;
        HomogenizedValue(Rational::from_integer(fwd - back))
    }

    /// `q(s^r) / r`, the finite-`r` approximation of the homogenization.
    pub fn limit_estimate(&self, s: &Word, r: u64) -> Result<Rational> {
        self.limit_estimate_capped(s, r, DEFAULT_POWER_CAP)
    }

    pub fn limit_estimate_capped(&self, s: &Word, r: u64, cap: usize) -> Result<Rational> {
        self.check(s)?;
        if r == 0 {
            return Err(Error::invalid("r must be at least 1"));
        }
        let (conj, core) = s.cyclic_reduce();
        let total = (r as u128) * core.len() as u128 + 2 * conj.len() as u128;
        if total > cap as u128 {
            return Err(Error::Budget(format!("s^{r} would have {total} letters, cap is {cap}")));
        }
        let power = s.power(r as i64);
        Ok(Rational::new(self.eval_unchecked(&power), r as i64))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefectMethod {
    ExhaustiveToLength,
    Sampled,
    Supplied,
}

/// An observed lower estimate of the defect `sup |q(xy) - q(x) - q(y)|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectBound {
    #[serde(serialize_with = "serialize_rational")]
    pub bound: Rational,
    pub method: DefectMethod,
    /// Maximum word length for exhaustive searches, sample count otherwise.
    pub l_or_samples: usize,
    /// The bound has been doubled to cover the homogenization's defect.
    pub homogenized: bool,
}

impl DefectBound {
    /// Bound for the homogenization: `D(q~) <= 2 D(q)`.
    pub fn for_homogenization(&self) -> DefectBound {
        DefectBound {
            bound: if self.homogenized { self.bound } else { self.bound * 2 },
            homogenized: true,
            ..self.clone()
        }
    }

    /// A user-supplied bound, tagged as such.
    pub fn fixed(bound: Rational) -> DefectBound {
        DefectBound { bound, method: DefectMethod::Supplied, l_or_samples: 0, homogenized: true }
    }

    pub fn is_zero(&self) -> bool {
        self.bound.is_zero()
    }
}

fn pair_defect(q: &CountingQuasimorphism, x: &Word, qx: i64, y: &Word, qy: i64) -> i64 {
    (q.eval_unchecked(&(x * y)) - qx - qy).abs()
}

/// Maximum defect over all pairs of reduced words of length at most `max_len`.
pub fn defect_search(q: &CountingQuasimorphism, max_len: usize) -> Result<DefectBound> {
    defect_search_budgeted(q, max_len, DEFAULT_PAIR_BUDGET)
}

pub fn defect_search_budgeted(q: &CountingQuasimorphism, max_len: usize, budget: usize) -> Result<DefectBound> {
    if max_len < 1 {
        return Err(Error::invalid("length must be at least 1"));
    }
    let rank = q.rank() as u128;
    // 1 + 2n((2n-1)^L - 1)/(2n-2) words of length <= L
    let mut count: u128 = 1;
    let mut layer: u128 = 2 * rank;
    for _ in 0..max_len {
        count += layer;
        layer = layer.saturating_mul(2 * rank - 1);
    }
    if count.saturating_mul(count) > budget as u128 {
        return Err(Error::Budget(format!(
            "{count} words of length <= {max_len} give more than {budget} pairs"
        )));
    }
    let words = reduced_words_up_to(q.rank(), max_len);
    let values: Vec<i64> = words.iter().map(|w| q.eval_unchecked(w)).collect();
    let best = words
        .par_iter()
        .zip(values.par_iter())
        .map(|(x, &qx)| {
            words
                .iter()
                .zip(&values)
                .map(|(y, &qy)| pair_defect(q, x, qx, y, qy))
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    Ok(DefectBound {
        bound: Rational::from_integer(best),
        method: DefectMethod::ExhaustiveToLength,
        l_or_samples: max_len,
        homogenized: false,
    })
}

/// Maximum defect over `samples` seeded random pairs of length at most `max_len`.
pub fn defect_sample(q: &CountingQuasimorphism, max_len: usize, samples: usize, seed: u64) -> DefectBound {
    let best = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let lx = rng.gen_range(0..=max_len);
            let ly = rng.gen_range(0..=max_len);
            let x = random_reduced_word(&mut rng, q.rank(), lx);
            let y = random_reduced_word(&mut rng, q.rank(), ly);
            pair_defect(q, &x, q.eval_unchecked(&x), &y, q.eval_unchecked(&y))
        })
        .max()
        .unwrap_or(0);
    DefectBound {
        bound: Rational::from_integer(best),
        method: DefectMethod::Sampled,
        l_or_samples: samples,
        homogenized: false,
    }
}

/// `ceil(|value| / bound)`, the number of elements of a generating set on
/// which the homogenization vanishes needed to reach `value`.
pub fn quasimorphism_length_bound(value: Rational, defect: &DefectBound) -> Result<u64> {
    if value.is_zero() {
        return Ok(0);
    }
    if defect.is_zero() {
        return Err(Error::invalid("defect bound is zero but the quasimorphism does not vanish"));
    }
    Ok((value.abs() / defect.bound).ceil().to_integer() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn naive_count(p: &Word, t: &Word) -> usize {
        let (p, t) = (p.letters(), t.letters());
        if p.len() > t.len() {
            return 0;
        }
        (0..=t.len() - p.len()).filter(|&i| &t[i..i + p.len()] == p).count()
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_occurrences(&w("aa"), &w("aaa")).unwrap(), 2);
        assert_eq!(count_occurrences(&w("ab"), &w("")).unwrap(), 0);
        assert_eq!(count_occurrences(&w("aabba"), &w("aabbaaabba")).unwrap(), 2);
        assert!(count_occurrences(&w(""), &w("a")).is_err());
    }

    #[test]
    fn kmp_matches_naive_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let (lp, lt) = (rng.gen_range(1..4), rng.gen_range(0..30));
            let p = random_reduced_word(&mut rng, 2, lp);
            let t = random_reduced_word(&mut rng, 2, lt);
            assert_eq!(count_occurrences(&p, &t).unwrap(), naive_count(&p, &t));
        }
    }

    #[test]
    fn pk_words() {
        assert_eq!(make_pk(2, 1).unwrap(), w("aabba"));
        assert_eq!(make_pk(2, 2).unwrap(), w("aaabbba"));
        assert_eq!(make_pk(3, 1).unwrap(), Word::parse("aabbcca", 3).unwrap());
        assert!(make_pk(1, 1).is_err());
        assert!(make_pk(2, 0).is_err());
        for n in 2..=4 {
            for k in 1..=4 {
                let p = make_pk(n, k).unwrap();
                assert_eq!(p.len(), n * (k + 1) + 1);
                assert!(p.is_cyclically_reduced());
                assert!(!crate::whitehead::in_cut(&p));
            }
        }
    }

    #[test]
    fn brooks_examples() {
        let q1 = CountingQuasimorphism::pk(2, 1).unwrap();
        let p1 = make_pk(2, 1).unwrap();
        let p2 = make_pk(2, 2).unwrap();
        for r in 1..=50 {
            assert_eq!(q1.eval(&p1.power(r)).unwrap(), r);
            assert_eq!(q1.eval(&p2.power(r)).unwrap(), 0);
        }
        assert_eq!(q1.eval(&w("")).unwrap(), 0);
    }

    #[test]
    fn homogenized_examples() {
        let q1 = CountingQuasimorphism::pk(2, 1).unwrap();
        assert_eq!(q1.homogenized(&make_pk(2, 1).unwrap()).unwrap().to_integer(), 1);
        assert_eq!(q1.homogenized(&make_pk(2, 2).unwrap()).unwrap().to_integer(), 0);
        for k in 1..=4 {
            let q = CountingQuasimorphism::pk(2, k).unwrap();
            assert_eq!(q.homogenized(&w("abab")).unwrap().to_integer(), 0);
        }
        assert_eq!(q1.homogenized(&w("")).unwrap().to_integer(), 0);
    }

    #[test]
    fn homogeneity_on_powers() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let (lq, ls) = (rng.gen_range(1..5), rng.gen_range(1..10));
            let q = CountingQuasimorphism::new(random_reduced_word(&mut rng, 2, lq)).unwrap();
            let s = random_reduced_word(&mut rng, 2, ls);
            let base = q.homogenized(&s).unwrap().value();
            for m in 1..=5 {
                assert_eq!(q.homogenized(&s.power(m)).unwrap().value(), base * m);
            }
        }
    }

    #[test]
    fn limit_estimate_examples() {
        let q1 = CountingQuasimorphism::pk(2, 1).unwrap();
        assert_eq!(q1.limit_estimate(&make_pk(2, 1).unwrap(), 50).unwrap(), Rational::from_integer(1));
        assert_eq!(q1.limit_estimate(&w("baB"), 100).unwrap(), Rational::from_integer(0));
        assert_eq!(q1.limit_estimate(&w(""), 7).unwrap(), Rational::from_integer(0));
        assert!(matches!(q1.limit_estimate_capped(&w("ab"), 1000, 100), Err(Error::Budget(_))));
        assert!(q1.limit_estimate(&w("ab"), 0).is_err());
    }

    #[test]
    fn defect_examples() {
        let qaa = CountingQuasimorphism::new(w("aa")).unwrap();
        let single = (qaa.eval(&w("aa")).unwrap() - 2 * qaa.eval(&w("a")).unwrap()).abs();
        assert_eq!(single, 1);
        let d = defect_search(&qaa, 3).unwrap();
        assert!(d.bound >= Rational::from_integer(single));
        assert_eq!(d.method, DefectMethod::ExhaustiveToLength);
        let mut prev = Rational::zero();
        for l in 1..=4 {
            let d = defect_search(&qaa, l).unwrap();
            assert!(d.bound >= prev);
            prev = d.bound;
        }
        assert!(matches!(defect_search_budgeted(&qaa, 10, 1000), Err(Error::Budget(_))));
        let s = defect_sample(&qaa, 4, 500, 9);
        assert!(s.bound <= prev);
        assert_eq!(s, defect_sample(&qaa, 4, 500, 9));
    }

    #[test]
    fn length_bound() {
        let d = DefectBound::fixed(Rational::from_integer(4));
        assert_eq!(quasimorphism_length_bound(Rational::from_integer(10), &d).unwrap(), 3);
        assert_eq!(quasimorphism_length_bound(Rational::from_integer(-8), &d).unwrap(), 2);
        assert_eq!(quasimorphism_length_bound(Rational::zero(), &DefectBound::fixed(Rational::zero())).unwrap(), 0);
        assert!(quasimorphism_length_bound(Rational::from_integer(1), &DefectBound::fixed(Rational::zero())).is_err());
    }
}
