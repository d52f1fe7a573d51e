//! Choosing ball centers to maximize the number of surviving items.
//!
//! An item is a tuple of `m` words (one per layer); it survives a tuple of
//! centers `c` when `d(c_r, item_r) <= s_r` for every layer `r`. Averaged
//! over all center tuples the survivor count is exactly
//! `#items * prod_r ball(N, s_r, a) / a^(mN)`, so the best tuple is at least
//! that large.
//!
//! Randomized strategies draw from ChaCha8 seeded with a single `u64`
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`), symbols via `random_range`.

use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{hamming_distance, Word};
use crate::error::{Error, Result};

/// Exhaustive search refuses more than this many center tuples.
pub const MAX_EXHAUSTIVE_CANDIDATES: u64 = 1 << 24;

/// Upper limit on greedy sweeps; each sweep either improves or stops.
const MAX_GREEDY_SWEEPS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    /// Every center tuple; ties broken toward the lexicographically least.
    Exhaustive,
    /// The anchor tuple plus `trials - 1` uniformly random tuples.
    Random { seed: u64, trials: u64 },
    /// Heuristic coordinate ascent from the anchor tuple, visiting
    /// coordinates in a seeded random order.
    Greedy { seed: u64 },
}

impl Strategy {
    pub fn label(&self) -> &'static str {
        match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Random { .. } => "random",
            Strategy::Greedy { .. } => "greedy (heuristic)",
        }
    }
}

/// `sum_{i=0}^{s} C(N, i) (a-1)^i`.
pub fn ball_size(n: usize, s: usize, a: u64) -> BigUint {
    let s = s.min(n);
    let mut total = BigUint::zero();
    let mut binom = BigUint::one();
    let mut power = BigUint::one();
    for i in 0..=s {
        if i > 0 {
            binom = binom * BigUint::from(n - i + 1) / BigUint::from(i);
            power *= BigUint::from(a - 1);
        }
        total += &binom * &power;
    }
    total
}

#[derive(Clone, Debug)]
pub struct SearchProblem<'a> {
    pub alphabet: u32,
    pub n: usize,
    pub radii: &'a [usize],
    /// `items[i][r]` is the layer-`r` word of item `i`.
    pub items: &'a [Vec<Word>],
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub centers: Vec<Word>,
    /// Indices of surviving items, ascending.
    pub survivors: Vec<usize>,
    /// Exact mean survivor count over all center tuples.
    pub average: BigRational,
    pub candidates_evaluated: u64,
}

impl<'a> SearchProblem<'a> {
    pub fn layers(&self) -> usize {
        self.radii.len()
    }

    pub fn survives(&self, item: &[Word], centers: &[Word]) -> bool {
        item.iter()
            .zip(centers)
            .zip(self.radii)
            .all(|((w, c), &s)| hamming_distance(w, c) <= s)
    }

    pub fn survivors(&self, centers: &[Word]) -> Vec<usize> {
        (0..self.items.len())
            .filter(|&i| self.survives(&self.items[i], centers))
            .collect()
    }

    pub fn count(&self, centers: &[Word]) -> usize {
        self.items.iter().filter(|it| self.survives(it, centers)).count()
    }

    pub fn candidate_count(&self) -> Option<u64> {
        (self.alphabet as u64).checked_pow((self.layers() * self.n) as u32)
    }

    pub fn exact_average(&self) -> BigRational {
        let mut num = BigUint::from(self.items.len());
        for &s in self.radii {
            num *= ball_size(self.n, s, self.alphabet as u64);
        }
        let den = BigUint::from(self.alphabet).pow((self.layers() * self.n) as u32);
        BigRational::new(num.into(), den.into())
    }

    fn check(&self) -> Result<()> {
        if self.items.is_empty() {
            return Err(Error::precondition("center search over an empty item set"));
        }
        if self.radii.iter().any(|&s| s > self.n) {
            return Err(Error::precondition("radius exceeds the word length"));
        }
        for it in self.items {
            if it.len() != self.layers() || it.iter().any(|w| w.len() != self.n) {
                return Err(Error::precondition("item shape does not match the search layers"));
            }
        }
        Ok(())
    }

    pub fn search(&self, strategy: Strategy) -> Result<SearchOutcome> {
        self.check()?;
        let (centers, evaluated) = match strategy {
            Strategy::Exhaustive => self.exhaustive()?,
            Strategy::Random { seed, trials } => self.random(seed, trials.max(1)),
            Strategy::Greedy { seed } => self.greedy(seed),
        };
        let survivors = self.survivors(&centers);
        Ok(SearchOutcome {
            centers,
            survivors,
            average: self.exact_average(),
            candidates_evaluated: evaluated,
        })
    }

    /// The layer words of item 0, a tuple with at least one survivor.
    fn anchor(&self) -> Vec<Word> {
        self.items[0].clone()
    }

    fn decode_index(&self, mut index: u64) -> Vec<Word> {
        let len = self.layers() * self.n;
        let mut flat = vec![0u32; len];
        for k in (0..len).rev() {
            flat[k] = (index % self.alphabet as u64) as u32;
            index /= self.alphabet as u64;
        }
        flat.chunks(self.n.max(1))
            .map(|c| c.to_vec())
            .take(self.layers())
            .collect()
    }

    /// Per-candidate survivor counts, filled by walking each item's product
    /// of balls. Candidate index reads the flattened tuple as a base-`a`
    /// number, first symbol most significant.
    pub fn survivor_counts(&self) -> Result<Vec<u32>> {
        let total = self
            .candidate_count()
            .filter(|&c| c <= MAX_EXHAUSTIVE_CANDIDATES)
            .ok_or_else(|| {
                Error::guard(
                    "exhaustive center candidates",
                    format!("{}^{}", self.alphabet, self.layers() * self.n),
                    MAX_EXHAUSTIVE_CANDIDATES,
                )
            })?;
        let counts: Vec<AtomicU32> = (0..total).map(|_| AtomicU32::new(0)).collect();
        let len = self.layers() * self.n;
        let weights: Vec<u64> = (0..len)
            .map(|k| (self.alphabet as u64).pow((len - 1 - k) as u32))
            .collect();
        self.items.par_iter().for_each(|item| {
            let flat: Vec<u32> = item.iter().flatten().copied().collect();
            let mut budget: Vec<usize> = self.radii.to_vec();
            self.walk_balls(&flat, &weights, 0, 0, &mut budget, &counts);
        });
        Ok(counts.into_iter().map(AtomicU32::into_inner).collect())
    }

    fn walk_balls(
        &self,
        flat: &[u32],
        weights: &[u64],
        k: usize,
        index: u64,
        budget: &mut [usize],
        counts: &[AtomicU32],
    ) {
        if k == flat.len() {
            counts[index as usize].fetch_add(1, Ordering::Relaxed);
            return;
        }
        let layer = k / self.n;
        self.walk_balls(
            flat,
            weights,
            k + 1,
            index + flat[k] as u64 * weights[k],
            budget,
            counts,
        );
        if budget[layer] > 0 {
            budget[layer] -= 1;
            for s in (0..self.alphabet).filter(|&s| s != flat[k]) {
                self.walk_balls(flat, weights, k + 1, index + s as u64 * weights[k], budget, counts);
            }
            budget[layer] += 1;
        }
    }

    fn exhaustive(&self) -> Result<(Vec<Word>, u64)> {
        let counts = self.survivor_counts()?;
        let best = counts.iter().copied().max().unwrap_or(0);
        let index = counts.iter().position(|&c| c == best).unwrap_or(0);
        Ok((self.decode_index(index as u64), counts.len() as u64))
    }

    fn random(&self, seed: u64, trials: u64) -> (Vec<Word>, u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut candidates = vec![self.anchor()];
        for _ in 1..trials {
            candidates.push(
                (0..self.layers())
                    .map(|_| (0..self.n).map(|_| rng.random_range(0..self.alphabet)).collect())
                    .collect(),
            );
        }
        let counts: Vec<usize> = candidates.par_iter().map(|c| self.count(c)).collect();
        // strict improvement: the earliest candidate wins ties
        let mut best = 0;
        for (i, &c) in counts.iter().enumerate() {
            if c > counts[best] {
                best = i;
            }
        }
        (candidates.swap_remove(best), trials)
    }

    fn greedy(&self, seed: u64) -> (Vec<Word>, u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..self.layers() * self.n).collect();
        order.shuffle(&mut rng);
        let mut centers = self.anchor();
        let mut current = self.count(&centers);
        let mut evaluated = 1u64;
        for _ in 0..MAX_GREEDY_SWEEPS {
            let mut improved = false;
            for &k in &order {
                let (layer, j) = (k / self.n, k % self.n);
                let original = centers[layer][j];
                let mut best = (current, original);
                for s in (0..self.alphabet).filter(|&s| s != original) {
                    centers[layer][j] = s;
                    let c = self.count(&centers);
                    evaluated += 1;
                    if c > best.0 {
                        best = (c, s);
                    }
                }
                centers[layer][j] = best.1;
                if best.0 > current {
                    current = best.0;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        (centers, evaluated)
    }
}

/// Sum over every center tuple of the survivor count, by scanning each
/// tuple directly. Independent of the ball walk used by exhaustive search.
pub fn direct_survivor_total(problem: &SearchProblem) -> Result<BigUint> {
    let total = problem
        .candidate_count()
        .filter(|&c| c <= MAX_EXHAUSTIVE_CANDIDATES)
        .ok_or_else(|| Error::guard("averaging enumeration", problem.alphabet, MAX_EXHAUSTIVE_CANDIDATES))?;
    let sum: u64 = (0..total)
        .into_par_iter()
        .map(|i| problem.count(&problem.decode_index(i)) as u64)
        .sum();
    Ok(BigUint::from(sum))
}

/// `#items * prod_r ball(N, s_r, a)`, the value [`direct_survivor_total`] must match.
pub fn predicted_survivor_total(problem: &SearchProblem) -> BigUint {
    let mut t = BigUint::from(problem.items.len());
    for &s in problem.radii {
        t *= ball_size(problem.n, s, problem.alphabet as u64);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_ball(n: usize, s: usize, a: u32) -> u64 {
        let total = (a as u64).pow(n as u32);
        (0..total)
            .filter(|&i| {
                let mut x = i;
                let mut wt = 0;
                for _ in 0..n {
                    if x % a as u64 != 0 {
                        wt += 1;
                    }
                    x /= a as u64;
                }
                wt <= s
            })
            .count() as u64
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(ball_size(3, 1, 2), BigUint::from(4u32));
        assert_eq!(ball_size(5, 0, 4), BigUint::from(1u32));
        assert_eq!(ball_size(5, 2, 3), BigUint::from(51u32));
        for (n, s, a) in [(5, 2, 3), (4, 3, 5), (6, 6, 2)] {
            assert_eq!(ball_size(n, s, a as u64), BigUint::from(count_ball(n, s, a)));
        }
    }

    fn toy_items() -> Vec<Vec<Word>> {
        vec![
            vec![vec![0, 0, 0]],
            vec![vec![1, 1, 0]],
            vec![vec![0, 1, 1]],
            vec![vec![1, 0, 1]],
        ]
    }

    #[test]
    fn exhaustive_finds_lexicographically_least_maximum() {
        let items = toy_items();
        let p = SearchProblem {
            alphabet: 2,
            n: 3,
            radii: &[1],
            items: &items,
        };
        let out = p.search(Strategy::Exhaustive).unwrap();
        // odd-weight centers are within distance 1 of three even-weight words
        assert_eq!(out.centers, vec![vec![0, 0, 1]]);
        assert_eq!(out.survivors, vec![0, 2, 3]);
        assert_eq!(out.candidates_evaluated, 8);
    }

    #[test]
    fn averaging_identity_small() {
        let items = toy_items();
        for s in 0..=3 {
            let radii = [s];
            let p = SearchProblem {
                alphabet: 2,
                n: 3,
                radii: &radii,
                items: &items,
            };
            assert_eq!(direct_survivor_total(&p).unwrap(), predicted_survivor_total(&p));
            let sum: u64 = p.survivor_counts().unwrap().iter().map(|&c| c as u64).sum();
            assert_eq!(BigUint::from(sum), predicted_survivor_total(&p));
        }
    }

    #[test]
    fn seeded_strategies_are_reproducible() {
        let items = toy_items();
        let p = SearchProblem {
            alphabet: 2,
            n: 3,
            radii: &[1],
            items: &items,
        };
        for st in [Strategy::Random { seed: 7, trials: 20 }, Strategy::Greedy { seed: 7 }] {
            let a = p.search(st).unwrap();
            let b = p.search(st).unwrap();
            assert_eq!(a, b);
            assert!(!a.survivors.is_empty());
        }
    }
}
