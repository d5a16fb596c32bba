use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::word::{Letter, Word};

/// The Whitehead graph of a word: one vertex per letter `a_i` / `A_i`, and
/// an edge `l -- inverse(m)` for every adjacent pair `l m`.
///
/// All `2n` vertices are present even when isolated. Vertices are indexed by
/// [`Letter::index`], so iteration order is `a1, A1, a2, A2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadGraph {
    rank: usize,
    adjacency: Vec<BTreeSet<usize>>,
}

impl WhiteheadGraph {
    pub fn edgeless(rank: usize) -> WhiteheadGraph {
        WhiteheadGraph { rank, adjacency: vec![BTreeSet::new(); 2 * rank] }
    }

    fn add_pair(&mut self, left: Letter, right: Letter) {
        let u = left.index();
        let v = right.inverse().index();
        // a reduced pair never produces a loop
        debug_assert_ne!(u, v);
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn has_edge(&self, u: Letter, v: Letter) -> bool {
        self.adjacency[u.index()].contains(&v.index())
    }

    /// Edges as `(smaller, larger)` letter pairs in the letter order.
    pub fn edges(&self) -> Vec<(Letter, Letter)> {
        let mut out = Vec::new();
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs.range(u + 1..) {
                out.push((Letter::from_index(u), Letter::from_index(v)));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: Letter) -> usize {
        self.adjacency[v.index()].len()
    }

    /// Every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &WhiteheadGraph) -> bool {
        self.rank == other.rank
            && self
                .adjacency
                .iter()
                .zip(&other.adjacency)
                .all(|(mine, theirs)| mine.is_subset(theirs))
    }

    /// Connectivity of the graph with vertex `removed` (if any) deleted.
    fn connected_without(&self, removed: Option<usize>) -> bool {
        let n = self.adjacency.len();
        let Some(start) = (0..n).find(|&v| Some(v) != removed) else {
            return true;
        };
        let mut seen = vec![false; n];
        if let Some(r) = removed {
            seen[r] = true;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1 + usize::from(removed.is_some());
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    pub fn is_connected(&self) -> bool {
        self.connected_without(None)
    }

    /// Vertices whose removal disconnects the remaining vertices.
    pub fn cut_vertices(&self) -> Vec<Letter> {
        (0..self.adjacency.len())
            .filter(|&v| !self.connected_without(Some(v)))
            .map(Letter::from_index)
            .collect()
    }

    /// A disconnected graph counts as having a cut vertex: with at least four
    /// vertices, removing any vertex leaves it disconnected.
    pub fn has_cut_vertex(&self) -> bool {
        if !self.is_connected() {
            return true;
        }
        (0..self.adjacency.len()).any(|v| !self.connected_without(Some(v)))
    }

    /// Byte-stable DOT rendering: vertices in letter order, then edges in
    /// lexicographic order of their endpoint pairs.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        writeln!(out, "graph {name} {{").unwrap();
        for v in 0..self.adjacency.len() {
            writeln!(out, "    \"{}\";", Letter::from_index(v).token()).unwrap();
        }
        for (u, v) in self.edges() {
            writeln!(out, "    \"{}\" -- \"{}\";", u.token(), v.token()).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Whitehead graph of the cyclic reduction of `w`, including the wrap-around
/// edge. The identity gives the edgeless graph.
pub fn omega(w: &Word) -> WhiteheadGraph {
    let core = w.cyclic_core();
    let letters = core.letters();
    let mut g = WhiteheadGraph::edgeless(w.rank());
    for pair in letters.windows(2) {
        g.add_pair(pair[0], pair[1]);
    }
    if let (Some(&first), Some(&last)) = (letters.first(), letters.last()) {
        g.add_pair(last, first);
    }
    g
}

/// Whitehead graph of `w` as written: no cyclic reduction, no wrap-around edge.
pub fn omega_prime(w: &Word) -> WhiteheadGraph {
    let mut g = WhiteheadGraph::edgeless(w.rank());
    for pair in w.letters().windows(2) {
        g.add_pair(pair[0], pair[1]);
    }
    g
}

pub fn in_cut(w: &Word) -> bool {
    omega(w).has_cut_vertex()
}

pub fn in_cut_prime(w: &Word) -> bool {
    omega_prime(w).has_cut_vertex()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 2).unwrap()
    }

    fn l(s: &str) -> Letter {
        crate::word::parse_letters(s).unwrap()[0]
    }

    fn edge_set(g: &WhiteheadGraph) -> Vec<(String, String)> {
        g.edges().into_iter().map(|(u, v)| (u.token(), v.token())).collect()
    }

    #[test]
    fn omega_of_p1_is_a_four_cycle() {
        let g = omega(&w("aabba"));
        assert_eq!(g.edge_count(), 4);
        for (u, v) in [("a", "A"), ("a", "B"), ("b", "B"), ("b", "A")] {
            assert!(g.has_edge(l(u), l(v)), "{u}-{v}");
        }
        assert!(g.is_connected());
        assert!(!g.has_cut_vertex());
    }

    #[test]
    fn omega_of_single_letter() {
        let g = omega(&w("a"));
        assert_eq!(edge_set(&g), vec![("a1".into(), "A1".into())]);
        assert_eq!(g.degree(l("b")), 0);
        assert_eq!(g.vertex_count(), 4);
        assert!(g.has_cut_vertex());
    }

    #[test]
    fn omega_of_commutator() {
        // pairs ab, bA, AB and wrap Ba give a-B, b-a, A-b, B-A
        let g = omega(&w("abAB"));
        let expected: Vec<(String, String)> = vec![
            ("a1".into(), "a2".into()),
            ("a1".into(), "A2".into()),
            ("A1".into(), "a2".into()),
            ("A1".into(), "A2".into()),
        ];
        assert_eq!(edge_set(&g), expected);
        assert!(!g.has_cut_vertex());
    }

    #[test]
    fn omega_identity_is_edgeless() {
        let g = omega(&w(""));
        assert_eq!(g.edge_count(), 0);
        assert!(in_cut(&w("")));
    }

    #[test]
    fn omega_prime_examples() {
        assert_eq!(omega_prime(&w("aabba")), omega(&w("aabba")));
        assert_eq!(edge_set(&omega_prime(&w("ab"))), vec![("a1".into(), "A2".into())]);
        // pairs (b,a) -> b-A, (a,B) -> a-b
        let g = omega_prime(&w("baB"));
        assert_eq!(edge_set(&g), vec![("a1".into(), "a2".into()), ("A1".into(), "a2".into())]);
    }

    #[test]
    fn omega_uses_cyclic_reduction() {
        assert_eq!(omega(&w("baB")), omega(&w("a")));
    }

    #[test]
    fn cut_vertex_examples() {
        assert!(!in_cut(&w("aabba")));
        assert!(in_cut(&w("abab")));
        let g = omega(&w("abab"));
        assert_eq!(g.edge_count(), 2);
        assert!(!g.is_connected());
    }

    #[test]
    fn cut_vertex_matches_brute_force_oracle() {
        // path a1 - A1 - a2 - A2: A1 and a2 are cut vertices
        let mut g = WhiteheadGraph::edgeless(2);
        for (u, v) in [(0, 1), (1, 2), (2, 3)] {
            g.adjacency[u].insert(v);
            g.adjacency[v].insert(u);
        }
        assert_eq!(g.cut_vertices(), vec![Letter::from_index(1), Letter::from_index(2)]);
        assert!(g.has_cut_vertex());
    }

    #[test]
    fn dot_is_stable() {
        let dot = omega(&w("aabba")).to_dot("omega");
        let expected = "graph omega {\n    \"a1\";\n    \"A1\";\n    \"a2\";\n    \"A2\";\n    \
                        \"a1\" -- \"A1\";\n    \"a1\" -- \"A2\";\n    \"A1\" -- \"a2\";\n    \
                        \"a2\" -- \"A2\";\n}\n";
        assert_eq!(dot, expected);
    }
}
