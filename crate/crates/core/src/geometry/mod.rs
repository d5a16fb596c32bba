//! The word metric on the free group with respect to the separable elements,
//! and on its quotient by inner automorphisms.

mod bfs;
mod flat;
mod norm;
mod quotient;

pub use bfs::{sep_norm_bfs, BfsOracle, BfsOutcome, DEFAULT_BALL_CAP};
pub use flat::{
    flat_certificate, flat_certificate_with_defect, flat_factorization, flat_point, FlatCertificate, FlatFactorization,
    FlatRow, FlatSpec,
};
pub use norm::{
    norm_bounds, sep_norm_lower, sep_norm_upper, QuasimorphismLower, SepFactorization, SepNormBounds,
    SEPARABILITY_WINDOW,
};
pub use quotient::{quotient_dist_lower, quotient_dist_upper, QuotientUpper};

use crate::error::Result;
use crate::quasimorphism::{defect_search, CountingQuasimorphism, DefectBound};

/// Exhaustive search length used by [`standard_defect`]: the longest length
/// whose pair count stays in the low millions.
pub fn standard_defect_length(rank: usize) -> usize {
    match rank {
        2 => 4,
        3 => 3,
        _ => 2,
    }
}

/// A defect bound valid for the homogenizations of all `q_{p_k}`, `k` in
/// `ks`: the largest exhaustive defect, doubled.
pub fn standard_defect(rank: usize, ks: &[usize]) -> Result<DefectBound> {
    let len = standard_defect_length(rank);
    let mut best: Option<DefectBound> = None;
    for &k in ks {
        let d = defect_search(&CountingQuasimorphism::pk(rank, k)?, len)?;
        if best.as_ref().map_or(true, |b| d.bound > b.bound) {
            best = Some(d);
        }
    }
    let d = best.ok_or_else(|| crate::Error::invalid("no quasimorphism indices given"))?;
    Ok(d.for_homogenization())
}
