use serde::Serialize;

use super::normal_form::{basis_rewrite, symbols, Sym};
use super::SplittingTHw;
use crate::error::{Error, Result};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    H,
    B,
}

/// A vertex `gH` or `gB` of the Bass-Serre tree, stored by its shortest
/// coset representative (ties broken by the letter order).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TreeVertex {
    pub side: Side,
    pub coset_rep: Word,
}

fn shortlex_key(w: &Word) -> (usize, &[crate::word::Letter]) {
    (w.len(), w.letters())
}

impl TreeVertex {
    pub fn new(side: Side, g: &Word, t: &SplittingTHw) -> TreeVertex {
        let coset_rep = match side {
            // no letter of H cancels against a trailing a_n, so dropping the
            // trailing H-letters gives the unique shortest element of gH
            Side::H => {
                let keep = g.letters().iter().rposition(|&l| !t.is_h_letter(l)).map_or(0, |i| i + 1);
                g.prefix(keep)
            }
            // |g b^k| >= |k| |b| - |g| because b is cyclically reduced
            Side::B => {
                let span = (2 * g.len() / t.b().len() + 1) as i64;
                (-span..=span)
                    .map(|k| g * &t.b_power(k))
                    .min_by(|x, y| shortlex_key(x).cmp(&shortlex_key(y)))
                    .expect("nonempty range")
            }
        };
        TreeVertex { side, coset_rep }
    }

    /// Equality through the normal form: `rep^-1 rep'` lies in the vertex group.
    pub fn same_as(&self, other: &TreeVertex, t: &SplittingTHw) -> Result<bool> {
        if self.side != other.side {
            return Ok(false);
        }
        let f = basis_rewrite(&(&self.coset_rep.invert() * &other.coset_rep), t)?;
        Ok(match self.side {
            Side::H => f.in_h(),
            Side::B => f.in_b(),
        })
    }
}

/// The edge `gE`, where `E` joins `H` and `B`. Edge stabilizers are trivial,
/// so `g` is determined by the edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TreeEdge {
    pub translate: Word,
}

impl TreeEdge {
    pub fn new(translate: Word) -> TreeEdge {
        TreeEdge { translate }
    }

    pub fn h_end(&self, t: &SplittingTHw) -> TreeVertex {
        TreeVertex::new(Side::H, &self.translate, t)
    }

    pub fn b_end(&self, t: &SplittingTHw) -> TreeVertex {
        TreeVertex::new(Side::B, &self.translate, t)
    }

    /// The image `x gE`.
    pub fn translated_by(&self, x: &Word) -> TreeEdge {
        TreeEdge { translate: x * &self.translate }
    }
}

/// Edges of the geodesic from the vertex `H` to `gH`: every `b`-syllable
/// crosses one `B`-vertex, two edges.
pub fn coset_path(g: &Word, t: &SplittingTHw) -> Result<Vec<TreeEdge>> {
    let form = basis_rewrite(g, t)?;
    let mut prefix = form.head.clone();
    let mut path = Vec::with_capacity(2 * form.syllables.len());
    for s in &form.syllables {
        path.push(TreeEdge::new(prefix.clone()));
        prefix = &prefix * &t.b_power(s.b_power);
        path.push(TreeEdge::new(prefix.clone()));
        prefix = &prefix * &s.h;
    }
    Ok(path)
}

/// Translation length of `g` on the tree: zero for elliptic elements,
/// otherwise twice the number of `b`-syllables of a cyclically reduced form.
pub fn translation_length(g: &Word, t: &SplittingTHw) -> Result<usize> {
    let mut syms = symbols(g, t)?;
    while syms.len() >= 2 && syms[0] == inverse(syms[syms.len() - 1]) {
        syms.pop();
        syms.remove(0);
    }
    let has_h = syms.iter().any(|s| matches!(s, Sym::H(_)));
    if !has_h {
        return Ok(0);
    }
    let runs = (0..syms.len())
        .filter(|&i| matches!(syms[i], Sym::B(_)) && !matches!(syms[(i + syms.len() - 1) % syms.len()], Sym::B(_)))
        .count();
    Ok(2 * runs)
}

fn inverse(s: Sym) -> Sym {
    match s {
        Sym::H(l) => Sym::H(l.inverse()),
        Sym::B(inv) => Sym::B(!inv),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AxisAtBase {
    /// `a_n` fixes a vertex.
    Elliptic,
    /// The axis of `a_n` passes through the vertex `H`, arriving along
    /// `entry` and leaving along `exit`.
    Axis { entry: TreeEdge, exit: TreeEdge, translation_length: usize },
}

/// Where the axis of `a_n` meets the vertex `H`.
///
/// The geodesic from `H` to `a_n H` starts with the exit edge; translating
/// the geodesic from `a_n^-1 H` to `H` shows the entry edge is `a_n^-1`
/// times its last edge.
pub fn axis_entry_exit(t: &SplittingTHw) -> Result<AxisAtBase> {
    let a_n = t.a_n();
    let tl = translation_length(&a_n, t)?;
    if tl == 0 {
        return Ok(AxisAtBase::Elliptic);
    }
    let path = coset_path(&a_n, t)?;
    if path.len() != tl {
        return Err(Error::invalid(format!(
            "the base vertex is not on the axis: distance {} to its translate, translation length {tl}",
            path.len()
        )));
    }
    let exit = path[0].clone();
    let entry = path[path.len() - 1].translated_by(&a_n.invert());
    Ok(AxisAtBase::Axis { entry, exit, translation_length: tl })
}

/// `count` consecutive edges of the axis of `a_n`, starting `count / 2`
/// fundamental domains before the base vertex.
pub fn axis_window(t: &SplittingTHw, count: usize) -> Result<Vec<TreeEdge>> {
    let a_n = t.a_n();
    let path = coset_path(&a_n, t)?;
    if translation_length(&a_n, t)? == 0 || path.is_empty() {
        return Err(Error::precondition("a_n is elliptic and has no axis"));
    }
    let periods = count.div_ceil(path.len()) as i64 + 1;
    let mut edges = Vec::new();
    for j in -periods..=periods {
        let shift = a_n.power(j);
        edges.extend(path.iter().map(|e| e.translated_by(&shift)));
    }
    let start = edges.len() / 2 - count / 2;
    Ok(edges[start..start + count].to_vec())
}

/// The unique `h` in `H` with `h . exit = entry`, or the identity when
/// `a_n` is elliptic.
pub fn project_r(t: &SplittingTHw) -> Result<Word> {
    match axis_entry_exit(t)? {
        AxisAtBase::Elliptic => Ok(Word::identity(t.rank())),
        AxisAtBase::Axis { entry, exit, .. } => {
            let h = &entry.translate * &exit.translate.invert();
            if !basis_rewrite(&h, t)?.in_h() || exit.translated_by(&h) != entry {
                return Err(Error::invalid("entry and exit edges are not in one H-orbit"));
            }
            Ok(h)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::random_reduced_word;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w3(s: &str) -> Word {
        Word::parse(s, 3).unwrap()
    }

    fn edges(ws: &[&str]) -> Vec<TreeEdge> {
        ws.iter().map(|s| TreeEdge::new(w3(s))).collect()
    }

    #[test]
    fn paths() {
        let t = SplittingTHw::new(3, &w3("ab")).unwrap();
        assert!(coset_path(&w3("abAAB"), &t).unwrap().is_empty());
        let b = t.b().clone();
        assert_eq!(coset_path(&b, &t).unwrap(), vec![TreeEdge::new(w3("")), TreeEdge::new(b.clone())]);
        assert_eq!(coset_path(&t.b_power(3), &t).unwrap().len(), 2);
        let p = coset_path(&w3("c"), &t).unwrap();
        assert_eq!(p, edges(&["BA", "c"]));
    }

    #[test]
    fn consecutive_path_edges_share_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let wl = rng.gen_range(0..4);
            let gl = rng.gen_range(0..12);
            let w = random_reduced_word(&mut rng, 2, wl);
            let t = SplittingTHw::new(3, &w).unwrap();
            let g = random_reduced_word(&mut rng, 3, gl);
            let path = coset_path(&g, &t).unwrap();
            if let Some(first) = path.first() {
                assert_eq!(first.h_end(&t), TreeVertex::new(Side::H, &Word::identity(3), &t));
                assert_eq!(path.last().unwrap().h_end(&t), TreeVertex::new(Side::H, &g, &t));
            }
            for pair in path.chunks(2) {
                assert_eq!(pair[0].b_end(&t), pair[1].b_end(&t));
            }
            for pair in path.iter().skip(1).collect::<Vec<_>>().chunks(2).filter(|p| p.len() == 2) {
                assert_eq!(pair[0].h_end(&t), pair[1].h_end(&t));
            }
            assert_eq!(path.is_empty(), basis_rewrite(&g, &t).unwrap().in_h());
        }
    }

    #[test]
    fn coset_equality_matches_normal_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = SplittingTHw::new(3, &w3("aB")).unwrap();
        for _ in 0..500 {
            let (l1, l2) = (rng.gen_range(0..8), rng.gen_range(0..4));
            let g = random_reduced_word(&mut rng, 3, l1);
            let h = random_reduced_word(&mut rng, 2, l2).with_rank(3).unwrap();
            let e = rng.gen_range(-3..=3);
            for (side, g2) in [(Side::H, &g * &h), (Side::B, &g * &t.b_power(e))] {
                let x = TreeVertex::new(side, &g, &t);
                let y = TreeVertex::new(side, &g2, &t);
                assert_eq!(x, y, "{g} {g2}");
                assert!(x.same_as(&y, &t).unwrap());
            }
            let other = random_reduced_word(&mut rng, 3, l1);
            let x = TreeVertex::new(Side::H, &g, &t);
            let y = TreeVertex::new(Side::H, &other, &t);
            assert_eq!(x == y, basis_rewrite(&(&g.invert() * &other), &t).unwrap().in_h());
            assert_eq!(x == y, x.same_as(&y, &t).unwrap());
        }
    }

    #[test]
    fn axis_examples() {
        let t = SplittingTHw::new(3, &w3("")).unwrap();
        assert_eq!(axis_entry_exit(&t).unwrap(), AxisAtBase::Elliptic);
        assert_eq!(project_r(&t).unwrap(), w3(""));
        for w in ["a", "ab", "aBBa"] {
            let t = SplittingTHw::new(3, &w3(w)).unwrap();
            let AxisAtBase::Axis { entry, exit, translation_length } = axis_entry_exit(&t).unwrap() else {
                panic!("{w} should be hyperbolic");
            };
            assert_eq!(translation_length, 2);
            assert_eq!(entry, TreeEdge::new(w3("")));
            assert_eq!(exit, TreeEdge::new(w3(w).invert()));
            let base = TreeVertex::new(Side::H, &w3(""), &t);
            assert_eq!(entry.h_end(&t), base);
            assert_eq!(exit.h_end(&t), base);
            assert_eq!(project_r(&t).unwrap(), w3(w));
        }
    }

    #[test]
    fn axis_translation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let wl = rng.gen_range(1..6);
            let w = random_reduced_word(&mut rng, 3, wl);
            let t = SplittingTHw::new(4, &w).unwrap();
            let tl = translation_length(&t.a_n(), &t).unwrap();
            let window = axis_window(&t, 10 + tl).unwrap();
            for i in 0..10 {
                assert_eq!(window[i].translated_by(&t.a_n()), window[i + tl]);
            }
            for pair in window.windows(2) {
                let shared_b = pair[0].b_end(&t) == pair[1].b_end(&t);
                let shared_h = pair[0].h_end(&t) == pair[1].h_end(&t);
                assert!(shared_b ^ shared_h);
            }
        }
    }

    #[test]
    fn translation_lengths() {
        let t = SplittingTHw::new(3, &w3("a")).unwrap();
        assert_eq!(translation_length(&w3("ab"), &t).unwrap(), 0);
        assert_eq!(translation_length(t.b(), &t).unwrap(), 0);
        assert_eq!(translation_length(&t.b().conjugate(&w3("bc")).unwrap(), &t).unwrap(), 0);
        assert_eq!(translation_length(&w3("c"), &t).unwrap(), 2);
        assert_eq!(translation_length(&w3("cbc"), &t).unwrap(), 4);
    }
}
