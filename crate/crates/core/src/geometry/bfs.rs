use std::collections::HashMap;

use serde::Serialize;

use super::norm::SeparabilityCache;
use crate::error::{Error, Result};
use crate::word::{reduced_words_up_to, Word};

/// Largest ball the oracle builds before giving up.
pub const DEFAULT_BALL_CAP: usize = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BfsOutcome {
    pub distance: Option<u32>,
    /// Size of the last ball layer built.
    pub frontier: usize,
    /// The ball was cut short by the node cap, so a distance found is only
    /// an upper bound within the truncated graph.
    pub truncated: bool,
}

/// Exact distances in the Cayley graph of the free group with respect to
/// the separable elements of length at most `gen_len`, out to `radius`.
///
/// Builds the ball of radius `ceil(radius / 2)` once and answers each query
/// by meeting in the middle.
pub struct BfsOracle {
    rank: usize,
    radius: u32,
    generators: Vec<Word>,
    /// Distance from the identity for every element of the ball.
    ball: HashMap<Word, u32>,
    layers: Vec<Vec<Word>>,
    truncated: bool,
}

impl BfsOracle {
    pub fn new(rank: usize, gen_len: usize, radius: u32) -> Result<BfsOracle> {
        BfsOracle::with_cap(rank, gen_len, radius, DEFAULT_BALL_CAP)
    }

    pub fn with_cap(rank: usize, gen_len: usize, radius: u32, cap: usize) -> Result<BfsOracle> {
        if gen_len < 1 || radius < 1 {
            return Err(Error::invalid("generator length and radius must be at least 1"));
        }
        let mut cache = SeparabilityCache::default();
        let generators: Vec<Word> = reduced_words_up_to(rank, gen_len)
            .into_iter()
            .filter(|x| cache.check(x))
            .collect();
        let half = radius.div_ceil(2);
        let id = Word::identity(rank);
        let mut ball = HashMap::from([(id.clone(), 0)]);
        let mut layers = vec![vec![id]];
        let mut truncated = false;
        'grow: for d in 1..=half {
            let mut next = Vec::new();
            for x in &layers[d as usize - 1] {
                for s in &generators {
                    let y = x * s;
                    if let std::collections::hash_map::Entry::Vacant(e) = ball.entry(y) {
                        next.push(e.key().clone());
                        e.insert(d);
                        if ball.len() >= cap {
                            truncated = true;
                            layers.push(next);
                            break 'grow;
                        }
                    }
                }
            }
            layers.push(next);
        }
        Ok(BfsOracle { rank, radius, generators, ball, layers, truncated })
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn ball_size(&self) -> usize {
        self.ball.len()
    }

    pub fn distance(&self, g: &Word) -> Result<BfsOutcome> {
        if g.rank() != self.rank {
            return Err(Error::RankMismatch { left: self.rank, right: g.rank() });
        }
        let built = (self.layers.len() - 1) as u32;
        let within = |x: &Word, r: u32| self.ball.get(x).is_some_and(|&d| d <= r);
        let found = (0..=self.radius).find(|&d| {
            let right = d.min(built);
            let left = d - right;
            if left > built {
                return false;
            }
            if left == 0 {
                return within(g, right);
            }
            self.layers[..=left as usize]
                .iter()
                .flatten()
                .any(|x| within(&(&x.invert() * g), right))
        });
        Ok(BfsOutcome {
            distance: found,
            frontier: self.layers.last().map_or(0, Vec::len),
            truncated: self.truncated,
        })
    }
}

pub fn sep_norm_bfs(g: &Word, gen_len: usize, radius: u32) -> Result<BfsOutcome> {
    BfsOracle::new(g.rank(), gen_len, radius)?.distance(g)
}
