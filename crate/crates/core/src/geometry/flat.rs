use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::norm::{sep_norm_upper, SeparabilityCache};
use super::standard_defect;
use crate::error::{Error, Result};
use crate::quasimorphism::{
    quasimorphism_length_bound, serialize_rational, CountingQuasimorphism, DefectBound, Rational,
};
use crate::whitehead::in_cut;
use crate::word::Word;

/// The map `Z^m -> F_n`, `(i_1, ..., i_m) -> b_1^(i_1) ... b_m^(i_m)`, with
/// the quasimorphisms `q_{p_1}, ..., q_{p_m}` used to read coordinates back.
#[derive(Clone, Debug)]
pub struct FlatSpec {
    m: usize,
    rank: usize,
    basepoints: Vec<Word>,
    quasimorphisms: Vec<CountingQuasimorphism>,
    /// `matrix[k][j]` is the homogenized `q_{p_(k+1)}` on basepoint `j`.
    matrix: Vec<Vec<Rational>>,
    inverse: Vec<Vec<Rational>>,
    basepoint_factors: Vec<Vec<Word>>,
}

fn invert_matrix(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| Rational::from_integer(i64::from(i == j))));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| aug[r][col] != Rational::from_integer(0))?;
        aug.swap(col, pivot);
        let p = aug[col][col];
        for x in aug[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col {
                let f = aug[r][col];
                if f != Rational::from_integer(0) {
                    for c in 0..2 * n {
                        let v = aug[col][c];
                        aug[r][c] -= f * v;
                    }
                }
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl FlatSpec {
    /// Basepoints `p_1, ..., p_m`, on which the quasimorphism matrix is the
    /// identity.
    pub fn standard(rank: usize, m: usize) -> Result<FlatSpec> {
        if m < 1 {
            return Err(Error::invalid("m must be at least 1"));
        }
        let basepoints = (1..=m).map(|k| crate::quasimorphism::make_pk(rank, k)).collect::<Result<Vec<_>>>()?;
        let spec = FlatSpec::with_basepoints(rank, basepoints)?;
        for (k, row) in spec.matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if *v != Rational::from_integer(i64::from(j == k)) {
                    return Err(Error::invalid(format!("q_{} on p_{} is {v}", k + 1, j + 1)));
                }
            }
        }
        Ok(spec)
    }

    /// Arbitrary basepoints; the matrix of the homogenized `q_{p_k}` on them
    /// must be invertible.
    pub fn with_basepoints(rank: usize, basepoints: Vec<Word>) -> Result<FlatSpec> {
        let m = basepoints.len();
        if m < 1 {
            return Err(Error::invalid("at least one basepoint is required"));
        }
        if let Some(b) = basepoints.iter().find(|b| b.rank() != rank) {
            return Err(Error::RankMismatch { left: rank, right: b.rank() });
        }
        let quasimorphisms = (1..=m).map(|k| CountingQuasimorphism::pk(rank, k)).collect::<Result<Vec<_>>>()?;
        let matrix: Vec<Vec<Rational>> = quasimorphisms
            .iter()
            .map(|q| basepoints.iter().map(|b| q.homogenized_unchecked(b).value()).collect())
            .collect();
        let inverse = invert_matrix(&matrix)
            .ok_or_else(|| Error::invalid("the quasimorphism matrix on the basepoints is singular"))?;
        let basepoint_factors = basepoints.iter().map(|b| sep_norm_upper(b).factors).collect();
        Ok(FlatSpec { m, rank, basepoints, quasimorphisms, matrix, inverse, basepoint_factors })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basepoints(&self) -> &[Word] {
        &self.basepoints
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    /// Separable factors of each basepoint used in flat factorizations.
    pub fn basepoint_factors(&self) -> &[Vec<Word>] {
        &self.basepoint_factors
    }

    /// Coordinates read back through the inverse matrix.
    fn coordinates(&self, raw: &[Rational]) -> Vec<Rational> {
        self.inverse
            .iter()
            .map(|row| row.iter().zip(raw).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn check_exponents(&self, exponents: &[i64]) -> Result<()> {
        if exponents.len() != self.m {
            return Err(Error::invalid(format!("expected {} exponents, got {}", self.m, exponents.len())));
        }
        Ok(())
    }
}

pub fn flat_point(spec: &FlatSpec, exponents: &[i64]) -> Result<Word> {
    spec.check_exponents(exponents)?;
    Ok(spec
        .basepoints
        .iter()
        .zip(exponents)
        .fold(Word::identity(spec.rank), |acc, (b, &e)| &acc * &b.power(e)))
}

/// A conjugate `c b^sign c^-1` of a basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatBlock {
    pub conjugator: Word,
    pub basepoint: usize,
    pub sign: i8,
}

/// `f(i) f(i')^-1` as `l1(i - i')` conjugates of basepoints, refined into
/// separable factors by splitting each basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatFactorization {
    pub blocks: Vec<FlatBlock>,
    pub factors: Vec<Word>,
}

/// Uses `T_k = b_k^(i_k) T_(k+1) b_k^(-i'_k) = (b_k^(i_k) T_(k+1) b_k^(-i_k)) b_k^(i_k - i'_k)`,
/// so that `f(i) f(i')^-1` is the product over `k = m, ..., 1` of
/// `C_k b_k^(i_k - i'_k) C_k^-1` with `C_k = b_1^(i_1) ... b_(k-1)^(i_(k-1))`.
pub fn flat_factorization(spec: &FlatSpec, i: &[i64], i_prime: &[i64]) -> Result<FlatFactorization> {
    spec.check_exponents(i)?;
    spec.check_exponents(i_prime)?;
    let mut prefixes = vec![Word::identity(spec.rank)];
    for (b, &e) in spec.basepoints.iter().zip(i).take(spec.m - 1) {
        let next = prefixes.last().expect("nonempty") * &b.power(e);
        prefixes.push(next);
    }
    let mut blocks = Vec::new();
    let mut factors = Vec::new();
    for k in (0..spec.m).rev() {
        let delta = i[k] - i_prime[k];
        let c = &prefixes[k];
        let c_inv = c.invert();
        let sign: i8 = if delta < 0 { -1 } else { 1 };
        let pieces: Vec<Word> = if sign > 0 {
            spec.basepoint_factors[k].clone()
        } else {
            spec.basepoint_factors[k].iter().rev().map(Word::invert).collect()
        };
        let conjugated: Vec<Word> = pieces.iter().map(|s| &(c * s) * &c_inv).collect();
        for _ in 0..delta.unsigned_abs() {
            blocks.push(FlatBlock { conjugator: c.clone(), basepoint: k + 1, sign });
            factors.extend(conjugated.iter().cloned());
        }
    }
    Ok(FlatFactorization { blocks, factors })
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatRow {
    pub index: usize,
    pub i: Vec<i64>,
    pub i_prime: Vec<i64>,
    pub l1: u64,
    pub blocks: u64,
    pub upper: u64,
    pub lower: u64,
    /// `max_k |q~_k(f(i) f(i')^-1) - (i_k - i'_k)|` after the matrix correction.
    #[serde(serialize_with = "serialize_rational")]
    pub error: Rational,
    /// The same with the Brooks quasimorphisms themselves.
    #[serde(serialize_with = "serialize_rational")]
    pub error_brooks: Rational,
    /// Factors all separable, blocks counted `l1` times, product reconstructs.
    pub factorization_verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatCertificate {
    pub m: usize,
    pub rank: usize,
    pub range: i64,
    pub seed: u64,
    pub sample_count: usize,
    pub basepoints: Vec<Word>,
    pub defect_used: DefectBound,
    /// Observed `max |q_k(f(i) f(i')^-1) - (i_k - i'_k)|` for Brooks `q_k`.
    #[serde(serialize_with = "serialize_rational")]
    pub max_additive_error: Rational,
    /// The same for the homogenizations.
    #[serde(serialize_with = "serialize_rational")]
    pub max_additive_error_homogenized: Rational,
    /// Every sampled factorization checked.
    pub lipschitz_upper_verified: bool,
    /// Separable factors per basepoint conjugate, so that `upper <= this * l1`.
    pub lipschitz_constant: usize,
    /// `lower >= lower_slope * l1 - lower_intercept` on every row.
    #[serde(serialize_with = "serialize_rational")]
    pub lower_slope: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub lower_intercept: Rational,
    pub sandwich_holds: bool,
    pub report_rows: Vec<FlatRow>,
}

impl FlatCertificate {
    pub fn to_csv(&self) -> String {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(";");
        let mut out = String::from("index,i,i_prime,l1,blocks,upper,lower,error,error_brooks\n");
        for r in &self.report_rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.index,
                join(&r.i),
                join(&r.i_prime),
                r.l1,
                r.blocks,
                r.upper,
                r.lower,
                r.error,
                r.error_brooks
            ));
        }
        out
    }
}

fn max_error(coords: &[Rational], i: &[i64], i_prime: &[i64]) -> Rational {
    coords
        .iter()
        .zip(i.iter().zip(i_prime))
        .map(|(v, (a, b))| (v - Rational::from_integer(a - b)).abs())
        .max()
        .unwrap_or_default()
}

fn flat_row(
    spec: &FlatSpec,
    index: usize,
    i: Vec<i64>,
    i_prime: Vec<i64>,
    defect: &DefectBound,
    cache: &mut SeparabilityCache,
) -> Result<FlatRow> {
    let g = &flat_point(spec, &i)? * &flat_point(spec, &i_prime)?.invert();
    let l1: u64 = i.iter().zip(&i_prime).map(|(a, b)| (a - b).unsigned_abs()).sum();

    let homogenized: Vec<Rational> = spec.quasimorphisms.iter().map(|q| q.homogenized_unchecked(&g).value()).collect();
    let brooks: Vec<Rational> =
        spec.quasimorphisms.iter().map(|q| Rational::from_integer(q.eval_unchecked(&g))).collect();
    let error = max_error(&spec.coordinates(&homogenized), &i, &i_prime);
    let error_brooks = max_error(&spec.coordinates(&brooks), &i, &i_prime);

    let fact = flat_factorization(spec, &i, &i_prime)?;
    let product = fact.factors.iter().fold(Word::identity(spec.rank), |acc, f| &acc * f);
    let factorization_verified =
        fact.blocks.len() as u64 == l1 && product == g && fact.factors.iter().all(|f| cache.check(f));

    let mut lower = match (g.is_identity(), in_cut(&g)) {
        (true, _) => 0,
        (false, true) => 1,
        (false, false) => 2,
    };
    for v in &homogenized {
        lower = lower.max(quasimorphism_length_bound(*v, defect)?);
    }
    Ok(FlatRow {
        index,
        i,
        i_prime,
        l1,
        blocks: fact.blocks.len() as u64,
        upper: fact.factors.len() as u64,
        lower,
        error,
        error_brooks,
        factorization_verified,
    })
}

pub fn flat_certificate(spec: &FlatSpec, range: i64, samples: usize, seed: u64) -> Result<FlatCertificate> {
    let ks: Vec<usize> = (1..=spec.m).collect();
    flat_certificate_with_defect(spec, range, samples, seed, &standard_defect(spec.rank, &ks)?)
}

/// Samples `samples` pairs in `[-range, range]^m`, each from its own seeded
/// stream so that the result does not depend on scheduling.
pub fn flat_certificate_with_defect(
    spec: &FlatSpec,
    range: i64,
    samples: usize,
    seed: u64,
    defect: &DefectBound,
) -> Result<FlatCertificate> {
    if range < 1 || samples < 1 {
        return Err(Error::invalid("range and samples must be at least 1"));
    }
    let rows = (0..samples)
        .into_par_iter()
        .map_init(SeparabilityCache::default, |cache, index| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index as u64);
            let i: Vec<i64> = (0..spec.m).map(|_| rng.gen_range(-range..=range)).collect();
            let i_prime: Vec<i64> = (0..spec.m).map(|_| rng.gen_range(-range..=range)).collect();
            flat_row(spec, index, i, i_prime, defect, cache)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(certificate_from_rows(spec, range, seed, defect, rows))
}

fn certificate_from_rows(
    spec: &FlatSpec,
    range: i64,
    seed: u64,
    defect: &DefectBound,
    rows: Vec<FlatRow>,
) -> FlatCertificate {
    let zero = Rational::from_integer(0);
    let lower_slope = if defect.is_zero() {
        zero
    } else {
        Rational::from_integer(1) / (Rational::from_integer(spec.m as i64) * defect.bound)
    };
    let lower_intercept = rows
        .iter()
        .map(|r| lower_slope * Rational::from_integer(r.l1 as i64) - Rational::from_integer(r.lower as i64))
        .max()
        .unwrap_or(zero)
        .max(zero);
    FlatCertificate {
        m: spec.m,
        rank: spec.rank,
        range,
        seed,
        sample_count: rows.len(),
        basepoints: spec.basepoints.clone(),
        defect_used: defect.clone(),
        max_additive_error: rows.iter().map(|r| r.error_brooks).max().unwrap_or(zero),
        max_additive_error_homogenized: rows.iter().map(|r| r.error).max().unwrap_or(zero),
        lipschitz_upper_verified: rows.iter().all(|r| r.factorization_verified),
        lipschitz_constant: spec.basepoint_factors.iter().map(Vec::len).max().unwrap_or(0),
        lower_slope,
        lower_intercept,
        sandwich_holds: rows.iter().all(|r| r.lower <= r.upper),
        report_rows: rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn defect() -> DefectBound {
        DefectBound::fixed(Rational::from_integer(4))
    }

    #[test]
    fn flat_point_examples() {
        let spec = FlatSpec::standard(2, 2).unwrap();
        assert_eq!(flat_point(&spec, &[0, 0]).unwrap(), w(""));
        assert_eq!(flat_point(&spec, &[1, 1]).unwrap(), w("aabbaaaabbba"));
        assert!(flat_point(&spec, &[1]).is_err());
        let one = FlatSpec::standard(2, 1).unwrap();
        let p = flat_point(&one, &[7]).unwrap();
        assert_eq!(CountingQuasimorphism::pk(2, 1).unwrap().eval(&p).unwrap(), 7);
    }

    #[test]
    fn one_dimensional_error_is_zero() {
        let spec = FlatSpec::standard(2, 1).unwrap();
        let mut cache = SeparabilityCache::default();
        for r in -6..=6 {
            let row = flat_row(&spec, 0, vec![r], vec![0], &defect(), &mut cache).unwrap();
            assert_eq!(row.error, Rational::from_integer(0));
            assert_eq!(row.error_brooks, Rational::from_integer(0));
            assert!(row.factorization_verified);
        }
    }

    #[test]
    fn equal_points_have_zero_bounds() {
        let spec = FlatSpec::standard(2, 3).unwrap();
        let row = flat_row(&spec, 0, vec![3, -2, 5], vec![3, -2, 5], &defect(), &mut SeparabilityCache::default()).unwrap();
        assert_eq!((row.lower, row.upper), (0, 0));
    }

    #[test]
    fn factorization_reconstructs() {
        let spec = FlatSpec::standard(2, 3).unwrap();
        let (i, ip) = ([2, -3, 1], [-1, 4, 1]);
        let fact = flat_factorization(&spec, &i, &ip).unwrap();
        assert_eq!(fact.blocks.len(), 3 + 7);
        let g = &flat_point(&spec, &i).unwrap() * &flat_point(&spec, &ip).unwrap().invert();
        let blocks = fact.blocks.iter().fold(Word::identity(2), |acc, b| {
            let p = spec.basepoints()[b.basepoint - 1].power(i64::from(b.sign));
            &acc * &p.conjugate(&b.conjugator).unwrap()
        });
        assert_eq!(blocks, g);
    }

    #[test]
    fn custom_basepoints_are_corrected_by_the_matrix() {
        let p1 = make(1);
        let p2 = make(2);
        let spec = FlatSpec::with_basepoints(2, vec![&p1 * &p2, p2.clone()]).unwrap();
        assert_eq!(spec.matrix()[0][0], Rational::from_integer(1));
        assert_eq!(spec.matrix()[1][0], Rational::from_integer(1));
        let cert = flat_certificate_with_defect(&spec, 5, 40, 3, &defect()).unwrap();
        assert!(cert.lipschitz_upper_verified);
        assert!(cert.max_additive_error_homogenized <= Rational::from_integer(4));
        assert!(FlatSpec::with_basepoints(2, vec![p1.clone(), p1]).is_err());
    }

    fn make(k: usize) -> Word {
        crate::quasimorphism::make_pk(2, k).unwrap()
    }

    #[test]
    fn certificate_is_deterministic() {
        let spec = FlatSpec::standard(2, 2).unwrap();
        let a = flat_certificate_with_defect(&spec, 6, 30, 11, &defect()).unwrap();
        let b = flat_certificate_with_defect(&spec, 6, 30, 11, &defect()).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.sandwich_holds);
        assert!(a.lipschitz_upper_verified);
        assert_eq!(a.lipschitz_constant, 2);
    }

    #[test]
    fn matrix_inverse() {
        let r = |x: i64| Rational::from_integer(x);
        let a = vec![vec![r(2), r(1)], vec![r(1), r(1)]];
        let inv = invert_matrix(&a).unwrap();
        assert_eq!(inv, vec![vec![r(1), r(-1)], vec![r(-1), r(2)]]);
        assert!(invert_matrix(&[vec![r(1), r(2)], vec![r(2), r(4)]]).is_none());
    }
}
