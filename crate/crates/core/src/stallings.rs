//! Folded subgroup graphs for finitely generated subgroups of a free group.
//!
//! Used to check that a tuple of words is a basis, to test subgroup
//! membership, and to compare subgroups given by generating sets.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::word::Word;

/// A folded labeled graph with a base vertex; reading a reduced word from the
/// base and returning to it is exactly membership in the subgroup.
#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    rank: usize,
    /// `edges[v]` maps a signed generator to the target vertex.
    edges: Vec<HashMap<i32, usize>>,
    base: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
}

impl SubgroupGraph {
    pub fn from_generators(rank: usize, generators: &[Word]) -> Result<SubgroupGraph> {
        if let Some(g) = generators.iter().find(|g| g.rank() != rank) {
            return Err(Error::RankMismatch { left: rank, right: g.rank() });
        }
        // one petal per generator, glued at vertex 0
        let mut raw: Vec<(usize, i32, usize)> = Vec::new();
        let mut vertex_count = 1;
        for g in generators.iter().filter(|g| !g.is_identity()) {
            let letters = g.letters();
            let mut prev = 0;
            for (i, l) in letters.iter().enumerate() {
                let next = if i + 1 == letters.len() {
                    0
                } else {
                    vertex_count += 1;
                    vertex_count - 1
                };
                raw.push((prev, l.raw(), next));
                prev = next;
            }
        }

        let mut uf = UnionFind((0..vertex_count).collect());
        loop {
            let mut seen: HashMap<(usize, i32), usize> = HashMap::new();
            let mut merged = false;
            for &(u, l, v) in &raw {
                let (ru, rv) = (uf.find(u), uf.find(v));
                for (from, label, to) in [(ru, l, rv), (rv, -l, ru)] {
                    match seen.get(&(from, label)) {
                        Some(&t) => {
                            let (rt, rto) = (uf.find(t), uf.find(to));
                            if rt != rto {
                                uf.0[rto] = rt;
                                merged = true;
                            }
                        }
                        None => {
                            seen.insert((from, label), to);
                        }
                    }
                }
            }
            if !merged {
                break;
            }
        }

        let mut index: HashMap<usize, usize> = HashMap::new();
        let base_rep = uf.find(0);
        index.insert(base_rep, 0);
        for v in 0..vertex_count {
            let r = uf.find(v);
            let next = index.len();
            index.entry(r).or_insert(next);
        }
        let mut edges = vec![HashMap::new(); index.len()];
        for &(u, l, v) in &raw {
            let (iu, iv) = (index[&uf.find(u)], index[&uf.find(v)]);
            edges[iu].insert(l, iv);
            edges[iv].insert(-l, iu);
        }
        Ok(SubgroupGraph { rank, edges, base: 0 })
    }

    pub fn vertex_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, w: &Word) -> bool {
        let mut v = self.base;
        for l in w.letters() {
            match self.edges[v].get(&l.raw()) {
                Some(&t) => v = t,
                None => return false,
            }
        }
        v == self.base
    }

    /// The subgroup is the whole free group.
    pub fn is_whole_group(&self) -> bool {
        self.edges.len() == 1 && (1..=self.rank as i32).all(|g| self.edges[0].contains_key(&g))
    }

    /// Rank of the subgroup: edges minus vertices plus one.
    pub fn subgroup_rank(&self) -> usize {
        let edge_count: usize = self.edges.iter().map(HashMap::len).sum::<usize>() / 2;
        edge_count + 1 - self.edges.len()
    }
}

/// `words` is a free basis of the free group of rank `rank`: it generates,
/// and it has `rank` elements (free groups are Hopfian).
pub fn is_basis(rank: usize, words: &[Word]) -> Result<bool> {
    if words.len() != rank {
        return Ok(false);
    }
    Ok(SubgroupGraph::from_generators(rank, words)?.is_whole_group())
}

/// `words` freely generate the subgroup they span.
pub fn is_free_basis_of_span(rank: usize, words: &[Word]) -> Result<bool> {
    let g = SubgroupGraph::from_generators(rank, words)?;
    Ok(words.iter().all(|w| !w.is_identity()) && g.subgroup_rank() == words.len())
}

pub fn same_subgroup(rank: usize, left: &[Word], right: &[Word]) -> Result<bool> {
    let gl = SubgroupGraph::from_generators(rank, left)?;
    let gr = SubgroupGraph::from_generators(rank, right)?;
    Ok(right.iter().all(|w| gl.contains(w)) && left.iter().all(|w| gr.contains(w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::whitehead::automorphism::{multiplier_moves, permutation_moves};

    fn ws(rank: usize, s: &[&str]) -> Vec<Word> {
        s.iter().map(|x| Word::parse(x, rank).unwrap()).collect()
    }

    #[test]
    fn standard_and_twisted_bases() {
        assert!(is_basis(2, &ws(2, &["a", "b"])).unwrap());
        assert!(is_basis(2, &ws(2, &["ab", "b"])).unwrap());
        assert!(is_basis(3, &ws(3, &["a", "b", "abc"])).unwrap());
        assert!(!is_basis(2, &ws(2, &["aa", "b"])).unwrap());
        assert!(!is_basis(2, &ws(2, &["ab", "ba"])).unwrap());
        assert!(!is_basis(2, &ws(2, &["a"])).unwrap());
    }

    #[test]
    fn membership() {
        let g = SubgroupGraph::from_generators(2, &ws(2, &["aa", "bab"])).unwrap();
        assert!(g.contains(&Word::parse("aaaa", 2).unwrap()));
        assert!(g.contains(&Word::parse("babAA", 2).unwrap()));
        assert!(!g.contains(&Word::parse("a", 2).unwrap()));
        assert_eq!(g.subgroup_rank(), 2);
    }

    #[test]
    fn subgroup_equality() {
        assert!(same_subgroup(3, &ws(3, &["a", "bc"]), &ws(3, &["abc", "a"])).unwrap());
        assert!(!same_subgroup(3, &ws(3, &["a", "bc"]), &ws(3, &["a", "b"])).unwrap());
    }

    #[test]
    fn whitehead_moves_send_bases_to_bases() {
        for rank in 2..=3 {
            for phi in multiplier_moves(rank).into_iter().chain(permutation_moves(rank)) {
                let images = phi.to_endomorphism().images().to_vec();
                assert!(is_basis(rank, &images).unwrap(), "{phi:?}");
            }
        }
    }

    #[test]
    fn free_basis_of_span() {
        assert!(is_free_basis_of_span(2, &ws(2, &["aa", "bab"])).unwrap());
        assert!(!is_free_basis_of_span(2, &ws(2, &["a", "aa"])).unwrap());
    }
}
