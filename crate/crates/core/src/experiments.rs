//! The reproducibility suite: one function per checked claim, each returning
//! a pass/fail report with the measurements behind it.

use std::time::{Duration, Instant};

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::{
    flat_certificate_with_defect, norm_bounds, quotient_dist_lower, standard_defect, BfsOracle,
    FlatSpec,
};
use crate::quasimorphism::{make_pk, CountingQuasimorphism, Rational};
use crate::splitting::{project_r, verify_section, SplittingTHw};
use crate::whitehead::{in_cut, is_separable, omega};
use crate::word::{cyclically_reduced_words, random_reduced_word, reduced_words_up_to, Word};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub time_limit_ms: u128,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {} ({} ms, limit {} ms)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed_ms,
            self.time_limit_ms
        )
    }
}

fn timed(
    id: u8,
    name: &'static str,
    limit: Duration,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> Result<CriterionReport> {
    let start = Instant::now();
    let (ok, detail) = body()?;
    let elapsed = start.elapsed();
    Ok(CriterionReport {
        id,
        name,
        passed: ok && elapsed <= limit,
        detail,
        elapsed_ms: elapsed.as_millis(),
        time_limit_ms: limit.as_millis(),
    })
}

/// Every nonempty cyclically reduced word of length at most `max_len`.
pub fn cyclic_enumeration(rank: usize, max_len: usize) -> Vec<Word> {
    (1..=max_len).flat_map(|l| cyclically_reduced_words(rank, l)).collect()
}

/// `q_{p_k}(p_j^r) = r delta_{kj}` for the Brooks quasimorphisms themselves.
pub fn criterion_1() -> Result<CriterionReport> {
    timed(1, "delta identity", Duration::from_secs(10), || {
        let mut checked = 0;
        let mut failures = Vec::new();
        for n in [2, 3] {
            for k in 1..=5 {
                let q = CountingQuasimorphism::pk(n, k)?;
                for j in 1..=5 {
                    let p = make_pk(n, j)?;
                    for r in 1..=50i64 {
                        let expected = if k == j { r } else { 0 };
                        let got = q.eval(&p.power(r))?;
                        checked += 1;
                        if got != expected {
                            failures.push(format!("n={n} k={k} j={j} r={r}: {got}"));
                        }
                    }
                }
            }
        }
        Ok((failures.is_empty(), format!("{checked} evaluations, {} mismatches {:?}", failures.len(), first(&failures))))
    })
}

fn first(v: &[String]) -> Vec<&String> {
    v.iter().take(3).collect()
}

/// Separable cyclic words have a cut vertex in their Whitehead graph.
pub fn criterion_2() -> Result<CriterionReport> {
    timed(2, "separable implies cut vertex", Duration::from_secs(120), || {
        let words = cyclic_enumeration(2, 10);
        let results: Vec<(bool, bool)> = words
            .par_iter()
            .map(|w| Ok((is_separable(w)?.0, in_cut(w))))
            .collect::<Result<_>>()?;
        let separable = results.iter().filter(|r| r.0).count();
        let exceptions: Vec<String> = words
            .iter()
            .zip(&results)
            .filter(|(_, r)| r.0 && !r.1)
            .map(|(w, _)| w.to_string())
            .collect();
        Ok((
            exceptions.is_empty(),
            format!(
                "{} words, {separable} separable, {} exceptions {:?}",
                words.len(),
                exceptions.len(),
                first(&exceptions)
            ),
        ))
    })
}

/// The homogenized `q_{p_k}`, `k <= 4`, vanish on words with a cut vertex.
pub fn criterion_3() -> Result<CriterionReport> {
    timed(3, "homogenizations vanish on cut words", Duration::from_secs(120), || {
        let words: Vec<Word> = cyclic_enumeration(2, 10).into_iter().filter(in_cut).collect();
        let qs = (1..=4).map(|k| CountingQuasimorphism::pk(2, k)).collect::<Result<Vec<_>>>()?;
        let bad: Vec<String> = words
            .par_iter()
            .flat_map_iter(|w| {
                qs.iter().enumerate().filter_map(move |(i, q)| {
                    let v = q.homogenized(w).ok()?.value();
                    (v != Rational::from_integer(0)).then(|| format!("k={} {w}: {v}", i + 1))
                })
            })
            .collect();
        Ok((bad.is_empty(), format!("{} cut words x 4 quasimorphisms, {} nonzero {:?}", words.len(), bad.len(), first(&bad))))
    })
}

/// Seed shared by the flat sampling runs.
pub const FLAT_SEED: u64 = 20_240_601;

/// Quasi-flat sandwich for `m = 3`, `n = 2`.
///
/// Checks the literal upper bound `upper = l1(i - i')` with separable
/// factors, and that the additive error does not grow from range 25 to 50.
pub fn criterion_4() -> Result<CriterionReport> {
    timed(4, "quasi-flat sandwich", Duration::from_secs(60), || {
        let spec = FlatSpec::standard(2, 3)?;
        let defect = standard_defect(2, &[1, 2, 3])?;
        let small = flat_certificate_with_defect(&spec, 25, 1000, FLAT_SEED, &defect)?;
        let large = flat_certificate_with_defect(&spec, 50, 1000, FLAT_SEED, &defect)?;
        let literal_upper = |c: &crate::geometry::FlatCertificate| {
            c.report_rows.iter().filter(|r| r.upper != r.l1 || !r.factorization_verified).count()
        };
        let blocks_ok = |c: &crate::geometry::FlatCertificate| c.report_rows.iter().all(|r| r.blocks == r.l1);
        let upper_misses = literal_upper(&small) + literal_upper(&large);
        let error_stable = large.max_additive_error_homogenized <= small.max_additive_error_homogenized;
        let detail = format!(
            "rows with upper != l1: {upper_misses}/2000 (factorizations verified: {}, basepoint conjugates = l1: {}, \
             separable factors per conjugate: {}); error range 25: {} (brooks {}), range 50: {} (brooks {}); \
             sandwich lower <= upper: {}; defect {}",
            small.lipschitz_upper_verified && large.lipschitz_upper_verified,
            blocks_ok(&small) && blocks_ok(&large),
            small.lipschitz_constant,
            small.max_additive_error_homogenized,
            small.max_additive_error,
            large.max_additive_error_homogenized,
            large.max_additive_error,
            small.sandwich_holds && large.sandwich_holds,
            defect.bound
        );
        Ok((upper_misses == 0 && error_stable, detail))
    })
}

/// `r(T_{H,w}) = w` for random `w`.
pub fn criterion_5() -> Result<CriterionReport> {
    timed(5, "section identity", Duration::from_secs(30), || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut failures = Vec::new();
        for _ in 0..500 {
            let n = rng.gen_range(3..=4);
            let len = rng.gen_range(0..=12);
            let w = random_reduced_word(&mut rng, n - 1, len).with_rank(n)?;
            let r = project_r(&SplittingTHw::new(n, &w)?)?;
            if r.to_string() != w.to_string() || !verify_section(&w, n)? {
                failures.push(format!("n={n} w={w} r={r}"));
            }
        }
        Ok((failures.is_empty(), format!("500 splittings, {} mismatches {:?}", failures.len(), first(&failures))))
    })
}

/// The closed form against `q(s^200) / 200`.
pub fn criterion_6() -> Result<CriterionReport> {
    timed(6, "homogenization closed form vs limit", Duration::from_secs(30), || {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut worst = Rational::from_integer(0);
        let mut failures = Vec::new();
        for _ in 0..200 {
            let rank = rng.gen_range(2..=3);
            let (pl, sl) = (rng.gen_range(1..=6), rng.gen_range(1..=12));
            let pattern = random_reduced_word(&mut rng, rank, pl);
            let s = random_reduced_word(&mut rng, rank, sl);
            let q = CountingQuasimorphism::new(pattern.clone())?;
            let exact = q.homogenized(&s)?.value();
            let limit = q.limit_estimate(&s, 200)?;
            let (conj, _) = s.cyclic_reduce();
            let bound = Rational::new(2 * (pattern.len() as i64 - 1) + 2 * conj.len() as i64, 200);
            let gap = (exact - limit).abs();
            worst = worst.max(gap);
            if gap > bound {
                failures.push(format!("{pattern} {s}: {exact} vs {limit}"));
            }
        }
        Ok((failures.is_empty(), format!("200 pairs, worst gap {worst}, {} over bound {:?}", failures.len(), first(&failures))))
    })
}

/// `lower <= bfs <= upper` on all words of length at most 6 in `F_2`.
pub fn criterion_7() -> Result<CriterionReport> {
    timed(7, "norm sandwich", Duration::from_secs(300), || {
        let ks = [1, 2, 3, 4];
        let defect = standard_defect(2, &ks)?;
        let oracle = BfsOracle::new(2, 5, 4)?;
        let words = reduced_words_up_to(2, 6);
        let rows: Vec<(Word, u64, Option<u32>, u64)> = words
            .par_iter()
            .map(|w| {
                let b = norm_bounds(w, &ks, &defect)?;
                Ok((w.clone(), b.lower, oracle.distance(w)?.distance, b.upper))
            })
            .collect::<Result<_>>()?;
        let found = rows.iter().filter(|r| r.2.is_some()).count();
        let lower_bad: Vec<String> = rows
            .iter()
            .filter(|r| r.2.is_some_and(|d| u64::from(d) < r.1))
            .map(|r| format!("{}: lower {} bfs {:?}", r.0, r.1, r.2))
            .collect();
        let upper_bad: Vec<String> = rows
            .iter()
            .filter(|r| r.2.is_some_and(|d| u64::from(d) > r.3))
            .map(|r| format!("{}: bfs {:?} upper {}", r.0, r.2, r.3))
            .collect();
        let p1 = make_pk(2, 1)?;
        let b = norm_bounds(&p1, &ks, &defect)?;
        let bfs_p1 = oracle.distance(&p1)?.distance;
        let example_ok = b.lower == 2 && b.upper == 2 && bfs_p1 == Some(2);
        let detail = format!(
            "{} words, bfs found {found}; lower > bfs: {} {:?}; bfs > upper: {} {:?}; p1: lower {} upper {} bfs {:?}",
            words.len(),
            lower_bad.len(),
            first(&lower_bad),
            upper_bad.len(),
            first(&upper_bad),
            b.lower,
            b.upper,
            bfs_p1
        );
        Ok((lower_bad.is_empty() && upper_bad.is_empty() && example_ok, detail))
    })
}

/// Conjugation invariance of the homogenization, and linear growth of the
/// quotient lower bound along powers of `p_1`.
pub fn criterion_8() -> Result<CriterionReport> {
    timed(8, "conjugation invariance", Duration::from_secs(30), || {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut mismatches = 0;
        for _ in 0..1000 {
            let rank = rng.gen_range(2..=3);
            let (pl, sl, kl) = (rng.gen_range(1..=6), rng.gen_range(0..=12), rng.gen_range(0..=12));
            let q = CountingQuasimorphism::new(random_reduced_word(&mut rng, rank, pl))?;
            let s = random_reduced_word(&mut rng, rank, sl);
            let k = random_reduced_word(&mut rng, rank, kl);
            if q.homogenized(&s.conjugate(&k)?)? != q.homogenized(&s)? {
                mismatches += 1;
            }
        }
        let defect = standard_defect(2, &[1])?;
        let p1 = make_pk(2, 1)?;
        let id = Word::identity(2);
        let mut off_line = 0;
        let mut values = Vec::new();
        for r in 1..=60i64 {
            let v = quotient_dist_lower(&p1.power(r), &id, &[1], &defect)?.value;
            let expected = (Rational::from_integer(r) / defect.bound).ceil().to_integer() as u64;
            if v != expected {
                off_line += 1;
            }
            values.push(v);
        }
        let slope = Rational::new(values[59] as i64 - values[0] as i64, 59);
        Ok((
            mismatches == 0 && off_line == 0,
            format!(
                "1000 triples, {mismatches} mismatches; quotient lower = ceil(r/{}) off at {off_line} of 60 powers, \
                 slope over r=1..60 {slope}",
                defect.bound
            ),
        ))
    })
}

/// DOT renderings of the Whitehead graphs of `p_k`.
pub fn pk_dot_graphs() -> Result<Vec<(usize, usize, String)>> {
    let mut out = Vec::new();
    for n in [2, 3, 4] {
        for k in [1, 2] {
            out.push((n, k, omega(&make_pk(n, k)?).to_dot(&format!("p{k}_rank{n}"))));
        }
    }
    Ok(out)
}

pub fn criterion_9() -> Result<CriterionReport> {
    timed(9, "Whitehead graphs of p_k", Duration::from_secs(1), || {
        let mut bad = Vec::new();
        for n in [2, 3, 4] {
            for k in [1, 2] {
                let g = omega(&make_pk(n, k)?);
                if !g.is_connected() || g.has_cut_vertex() {
                    bad.push(format!("n={n} k={k}"));
                }
            }
        }
        Ok((bad.is_empty(), format!("6 graphs, {} with a cut vertex {:?}", bad.len(), bad)))
    })
}

pub fn run_criterion(id: u8) -> Result<CriterionReport> {
    match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        _ => Err(crate::Error::invalid(format!("no criterion {id}"))),
    }
}

pub const CRITERIA: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

/// Suite names accepted by the command line, one per criterion.
pub const SUITES: [(&str, u8); 9] = [
    ("delta-identity", 1),
    ("cut-vertex-lemma", 2),
    ("qm-vanishing", 3),
    ("quasi-flat", 4),
    ("section-identity", 5),
    ("homogenization-limit", 6),
    ("norm-sandwich", 7),
    ("conjugation-invariance", 8),
    ("pk-whitehead-figure", 9),
];

/// Criteria selected by a suite name, or all of them for `all`.
pub fn suite_criteria(name: &str) -> Option<Vec<u8>> {
    if name == "all" {
        return Some(CRITERIA.to_vec());
    }
    SUITES.iter().find(|(n, _)| *n == name).map(|&(_, id)| vec![id])
}
