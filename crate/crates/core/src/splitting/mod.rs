//! One-edge free splittings `F_n = H * <w a_n>` with `H = <a_1, ..., a_(n-1)>`,
//! navigated through free-product normal forms rather than materialized trees.

mod es;
mod normal_form;
mod tree;

pub use es::{es_common_neighbor, es_vertex, splitting_of, verify_section, EsEdge, EsNeighbor, EsVertex};
pub use normal_form::{basis_rewrite, Syllable, SyllableForm};
pub use tree::{
    axis_entry_exit, axis_window, coset_path, project_r, translation_length, AxisAtBase, Side, TreeEdge, TreeVertex,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stallings::is_basis;
use crate::word::{Letter, Word};

/// The splitting of `F_n` as `H * <b>`, `b = w a_n`, for `w` in `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingTHw {
    rank: usize,
    w: Word,
    b: Word,
}

/// `w` viewed in rank `rank`, provided it avoids `a_rank`.
pub(crate) fn lift_to_h(w: &Word, rank: usize) -> Result<Word> {
    if rank < 3 {
        return Err(Error::invalid(format!("rank must be at least 3, got {rank}")));
    }
    if w.max_generator() >= rank {
        return Err(Error::invalid(format!("{w} is not in the subgroup generated by a1..a{}", rank - 1)));
    }
    w.with_rank(rank)
}

impl SplittingTHw {
    pub fn new(rank: usize, w: &Word) -> Result<SplittingTHw> {
        let w = lift_to_h(w, rank)?;
        let b = &w * &Word::generator(rank, rank);
        let mut basis: Vec<Word> = (1..rank).map(|g| Word::generator(rank, g)).collect();
        basis.push(b.clone());
        if !is_basis(rank, &basis)? {
            return Err(Error::invalid(format!("H and {b} do not form a free splitting")));
        }
        Ok(SplittingTHw { rank, w, b })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn w(&self) -> &Word {
        &self.w
    }

    /// The generator `w a_n` of the second vertex group.
    pub fn b(&self) -> &Word {
        &self.b
    }

    pub fn b_power(&self, e: i64) -> Word {
        self.b.power(e)
    }

    pub(crate) fn is_h_letter(&self, l: Letter) -> bool {
        l.generator() < self.rank
    }

    pub fn a_n(&self) -> Word {
        Word::generator(self.rank, self.rank)
    }
}
