use serde::Serialize;

use super::tree::project_r;
use super::{lift_to_h, SplittingTHw};
use crate::error::{Error, Result};
use crate::stallings::{is_basis, same_subgroup};
use crate::whitehead::free_factor_basis;
use crate::word::Word;

/// A vertex `(A, B)` of the edge-splitting graph, `F_n = A * B`, stored by
/// bases of the two factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EsVertex {
    pub a_basis: Vec<Word>,
    pub b_basis: Vec<Word>,
}

impl EsVertex {
    pub fn new(rank: usize, a_basis: Vec<Word>, b_basis: Vec<Word>) -> Result<EsVertex> {
        if a_basis.is_empty() || b_basis.is_empty() {
            return Err(Error::invalid("both free factors must be nontrivial"));
        }
        let all: Vec<Word> = a_basis.iter().chain(&b_basis).cloned().collect();
        if !is_basis(rank, &all)? {
            return Err(Error::invalid("the two bases do not concatenate to a basis"));
        }
        Ok(EsVertex { a_basis, b_basis })
    }

    pub fn rank(&self) -> usize {
        self.a_basis[0].rank()
    }
}

fn h_basis(rank: usize) -> Vec<Word> {
    (1..rank).map(|g| Word::generator(rank, g)).collect()
}

/// `i(w) = (H, <w a_n>)`.
pub fn es_vertex(w: &Word, rank: usize) -> Result<EsVertex> {
    let w = lift_to_h(w, rank)?;
    EsVertex::new(rank, h_basis(rank), vec![&w * &Word::generator(rank, rank)])
}

/// Recovers the splitting `T_{H,w}` from a vertex of the form `(H, <w a_n>)`.
pub fn splitting_of(v: &EsVertex) -> Result<SplittingTHw> {
    let rank = v.rank();
    let [b] = v.b_basis.as_slice() else {
        return Err(Error::invalid("the second factor is not cyclic"));
    };
    if !same_subgroup(rank, &v.a_basis, &h_basis(rank))? {
        return Err(Error::invalid("the first factor is not H"));
    }
    // <b> = <b^-1>, so either generator may end in a_n
    let a_n = Word::generator(rank, rank);
    let w = [b * &a_n.invert(), &b.invert() * &a_n.invert()]
        .into_iter()
        .find(|w| w.max_generator() < rank)
        .ok_or_else(|| Error::invalid(format!("{b} is not of the form w a_n")))?;
    SplittingTHw::new(rank, &w)
}

/// An edge of the edge-splitting graph from `(A * B, C)` to `(A, B * C)`,
/// each factor given by a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EsEdge {
    pub a: Vec<Word>,
    pub b: Vec<Word>,
    pub c: Vec<Word>,
}

impl EsEdge {
    fn concat(x: &[Word], y: &[Word]) -> Vec<Word> {
        x.iter().chain(y).cloned().collect()
    }

    /// `from` is `(A * B, C)` and `to` is `(A, B * C)` as subgroups, and
    /// `A, B, C` together form a basis.
    pub fn joins(&self, from: &EsVertex, to: &EsVertex) -> Result<bool> {
        let rank = from.rank();
        let abc: Vec<Word> = self.a.iter().chain(&self.b).chain(&self.c).cloned().collect();
        Ok(!self.a.is_empty()
            && !self.b.is_empty()
            && !self.c.is_empty()
            && is_basis(rank, &abc)?
            && same_subgroup(rank, &EsEdge::concat(&self.a, &self.b), &from.a_basis)?
            && same_subgroup(rank, &self.c, &from.b_basis)?
            && same_subgroup(rank, &self.a, &to.a_basis)?
            && same_subgroup(rank, &EsEdge::concat(&self.b, &self.c), &to.b_basis)?)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EsNeighbor {
    pub vertex: EsVertex,
    /// `H = H_1 * H_2` with `u` in `H_2`.
    pub h1: Vec<Word>,
    pub h2: Vec<Word>,
    pub edge_from_w: EsEdge,
    pub edge_from_uw: EsEdge,
}

/// The vertex `(H_1, H_2 * <w a_n>)` adjacent to both `i(w)` and `i(uw)`,
/// where `H = H_1 * H_2` is a splitting of `H` with `u` in `H_2`.
pub fn es_common_neighbor(w: &Word, u: &Word, rank: usize) -> Result<EsNeighbor> {
    let w = lift_to_h(w, rank)?;
    let u = lift_to_h(u, rank)?;
    if u.is_identity() {
        return Err(Error::precondition("u must be a nontrivial separable element of H"));
    }
    let in_h = u.with_rank(rank - 1)?;
    let basis = free_factor_basis(&in_h).map_err(|e| match e {
        Error::Precondition(_) => Error::precondition(format!("{u} is not separable in H")),
        other => other,
    })?;
    let lift = |x: &Word| x.with_rank(rank);
    let h1 = vec![lift(&basis.complement)?];
    let h2 = basis.factor.iter().map(lift).collect::<Result<Vec<_>>>()?;

    let a_n = Word::generator(rank, rank);
    let wa = &w * &a_n;
    let uwa = &(&u * &w) * &a_n;
    let vertex = EsVertex::new(rank, h1.clone(), EsEdge::concat(&h2, &[wa.clone()]))?;
    let edge_from_w = EsEdge { a: h1.clone(), b: h2.clone(), c: vec![wa] };
    let edge_from_uw = EsEdge { a: h1.clone(), b: h2.clone(), c: vec![uwa] };
    if !edge_from_w.joins(&es_vertex(&w, rank)?, &vertex)? {
        return Err(Error::invalid("common neighbor is not adjacent to i(w)"));
    }
    if !edge_from_uw.joins(&es_vertex(&(&u * &w), rank)?, &vertex)? {
        return Err(Error::invalid("common neighbor is not adjacent to i(uw)"));
    }
    Ok(EsNeighbor { vertex, h1, h2, edge_from_w, edge_from_uw })
}

/// `r` applied to the splitting of `i(w)` returns `w`.
pub fn verify_section(w: &Word, rank: usize) -> Result<bool> {
    let lifted = lift_to_h(w, rank)?;
    let t = splitting_of(&es_vertex(w, rank)?)?;
    Ok(project_r(&t)? == lifted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w3(s: &str) -> Word {
        Word::parse(s, 3).unwrap()
    }

    #[test]
    fn vertex_examples() {
        let v = es_vertex(&w3(""), 3).unwrap();
        assert_eq!(v.a_basis, vec![w3("a"), w3("b")]);
        assert_eq!(v.b_basis, vec![w3("c")]);
        assert_eq!(es_vertex(&w3("b"), 3).unwrap().b_basis, vec![w3("bc")]);
        assert_eq!(es_vertex(&w3("ab"), 3).unwrap().b_basis, vec![w3("abc")]);
        assert!(matches!(es_vertex(&w3("ac"), 3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn neighbor_examples() {
        let nb = es_common_neighbor(&w3("b"), &w3("a"), 3).unwrap();
        assert!(same_subgroup(3, &nb.vertex.a_basis, &[w3("b")]).unwrap());
        assert!(same_subgroup(3, &nb.vertex.b_basis, &[w3("a"), w3("bc")]).unwrap());

        let nb = es_common_neighbor(&w3(""), &w3("aa"), 3).unwrap();
        assert!(same_subgroup(3, &nb.vertex.a_basis, &[w3("b")]).unwrap());
        assert!(same_subgroup(3, &nb.vertex.b_basis, &[w3("a"), w3("c")]).unwrap());

        assert!(matches!(es_common_neighbor(&w3("a"), &w3(""), 3), Err(Error::Precondition(_))));
        assert!(matches!(es_common_neighbor(&w3("a"), &w3("aabba"), 3), Err(Error::Precondition(_))));
    }

    #[test]
    fn section_examples() {
        assert!(verify_section(&w3(""), 3).unwrap());
        assert!(verify_section(&w3("ab"), 3).unwrap());
        assert!(verify_section(&Word::parse("cAbbA", 4).unwrap(), 4).unwrap());
    }

    #[test]
    fn splitting_from_vertex() {
        let v = EsVertex::new(3, vec![w3("ab"), w3("b")], vec![w3("CBA")]).unwrap();
        assert_eq!(splitting_of(&v).unwrap().w(), &w3("ab"));
    }
}
