//! Seeded random instances on rational grids.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::Rational;
use crate::sequence::{DiscountSequence, PrizeSequence, WeightSequence};

use super::TrialConfig;

/// Name recorded in every report so a run can be reproduced elsewhere.
pub const PRNG_NAME: &str = "ChaCha8 (rand_chacha seed_from_u64, stream = trial index)";

/// Grid-valued instance source. Values are `k / grid` for integer `k`.
#[derive(Debug, Clone)]
pub struct InstanceGenerator {
    rng: ChaCha8Rng,
    grid: u32,
}

impl InstanceGenerator {
    /// Generator for stream `stream` of `config.seed`. Distinct streams are
    /// independent, so trials can run in any order.
    pub fn new(config: &TrialConfig, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(stream);
        InstanceGenerator {
            rng,
            grid: config.grid_denominator.max(1),
        }
    }

    pub fn grid(&self) -> u32 {
        self.grid
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn grid_value(&self, k: i64) -> Rational {
        Rational::frac(k, self.grid as i64)
    }

    pub fn horizon(&mut self, max: usize) -> usize {
        self.rng.random_range(1..=max.max(1))
    }

    /// Nonnegative, weakly decreasing, entries in `{0, 1/g, ..., 1}`.
    /// Zero tails and ties come up with positive probability.
    pub fn weight_sequence(&mut self, horizon: usize) -> WeightSequence {
        let g = self.grid as i64;
        let mut ks: Vec<i64> = (0..horizon).map(|_| self.rng.random_range(0..=g)).collect();
        ks.sort_unstable_by(|a, b| b.cmp(a));
        WeightSequence::new(ks.into_iter().map(|k| self.grid_value(k)).collect())
            .expect("sorted nonnegative")
    }

    /// Strictly positive, weakly decreasing, entries in `{1/g, ..., 1}`.
    pub fn discount_sequence(&mut self, horizon: usize) -> DiscountSequence {
        let g = self.grid as i64;
        let mut ks: Vec<i64> = (0..horizon).map(|_| self.rng.random_range(1..=g)).collect();
        ks.sort_unstable_by(|a, b| b.cmp(a));
        DiscountSequence::new(ks.into_iter().map(|k| self.grid_value(k)).collect())
            .expect("sorted positive")
    }

    /// Grid numerators of a positive sequence; about a third of entries are zero.
    fn positive_numerators(&mut self, horizon: usize, max: i64) -> Vec<i64> {
        (0..horizon)
            .map(|_| {
                if self.rng.random_ratio(1, 3) {
                    0
                } else {
                    self.rng.random_range(0..=max)
                }
            })
            .collect()
    }

    /// Positive grid-valued sequence with entries up to 2.
    pub fn positive_sequence(&mut self, horizon: usize) -> PrizeSequence {
        let max = 2 * self.grid as i64;
        let ks = self.positive_numerators(horizon, max);
        PrizeSequence::new(ks.into_iter().map(|k| self.grid_value(k)).collect()).expect("non-empty")
    }

    /// Signed grid-valued sequence with entries in `[-2, 2]`.
    pub fn signed_sequence(&mut self, horizon: usize) -> PrizeSequence {
        let max = 2 * self.grid as i64;
        let values = (0..horizon)
            .map(|_| {
                let k = self.rng.random_range(-max..=max);
                self.grid_value(k)
            })
            .collect();
        PrizeSequence::new(values).expect("non-empty")
    }

    /// Grid numerators `(x, y)` with `x ⊵ y`, equal totals, both positive.
    ///
    /// Samples `y`, then moves mass from later to earlier periods a random
    /// number of times (possibly zero). Each move is an inverse binary
    /// deterioration, so dominance holds by construction.
    pub fn dominating_numerators(&mut self, horizon: usize) -> (Vec<i64>, Vec<i64>) {
        let max = 2 * self.grid as i64;
        let y = self.positive_numerators(horizon, max);
        let mut x = y.clone();
        if horizon >= 2 {
            let moves = self.rng.random_range(0..=2 * horizon);
            for _ in 0..moves {
                let k = self.rng.random_range(0..horizon - 1);
                let s = self.rng.random_range(k + 1..horizon);
                if x[s] == 0 {
                    continue;
                }
                let eta = self.rng.random_range(1..=x[s]);
                x[s] -= eta;
                x[k] += eta;
            }
        }
        (x, y)
    }

    /// Signed variant: mass moves freely, so entries may go negative.
    pub fn signed_dominating_numerators(&mut self, horizon: usize) -> (Vec<i64>, Vec<i64>) {
        let max = 2 * self.grid as i64;
        let y: Vec<i64> = (0..horizon)
            .map(|_| self.rng.random_range(-max..=max))
            .collect();
        let mut x = y.clone();
        if horizon >= 2 {
            let moves = self.rng.random_range(0..=2 * horizon);
            for _ in 0..moves {
                let k = self.rng.random_range(0..horizon - 1);
                let s = self.rng.random_range(k + 1..horizon);
                let eta = self.rng.random_range(1..=max);
                x[s] -= eta;
                x[k] += eta;
            }
        }
        (x, y)
    }

    pub fn dominating_pair(&mut self, horizon: usize) -> (PrizeSequence, PrizeSequence) {
        let (x, y) = self.dominating_numerators(horizon);
        (self.to_sequence(&x), self.to_sequence(&y))
    }

    pub fn to_sequence(&self, numerators: &[i64]) -> PrizeSequence {
        PrizeSequence::new(numerators.iter().map(|&k| self.grid_value(k)).collect())
            .expect("non-empty")
    }

    /// A pair of discounters of one horizon, mixing independent draws,
    /// draws with a shared first weight, and pairs built to satisfy the gap
    /// condition (some on its boundary).
    pub fn discount_pair(&mut self, horizon: usize) -> (DiscountSequence, DiscountSequence) {
        let mode = [0u8, 1, 2].choose(&mut self.rng).copied().unwrap_or(0);
        match mode {
            0 => (
                self.discount_sequence(horizon),
                self.discount_sequence(horizon),
            ),
            1 => {
                let a = self.discount_sequence(horizon);
                let b = self.discount_sequence(horizon);
                let top = a.first().clone();
                let scale = &top / b.first();
                let b = DiscountSequence::new(b.values().iter().map(|v| v * &scale).collect())
                    .expect("positive scaling");
                if self.rng.random_bool(0.5) {
                    (a, b)
                } else {
                    (b, a)
                }
            }
            _ => {
                let beta = self.discount_sequence(horizon);
                let g = self.grid as i64;
                let k = self.rng.random_range(1..=g);
                let alpha_first = self.grid_value(k);
                let scale = &alpha_first / beta.first();
                let mut values = vec![alpha_first];
                for t in 1..horizon {
                    let k = self.rng.random_range(0..=g);
                    let u = self.grid_value(k);
                    let drop = beta.gap(t) * &scale * u;
                    let next = values.last().expect("non-empty") - drop;
                    values.push(next);
                }
                let alpha = DiscountSequence::new(values).expect("gaps bounded by beta");
                (alpha, beta)
            }
        }
    }
}

/// Independent generator per call: the same config always yields the same sequence.
pub fn random_weight_sequence(horizon: usize, config: &TrialConfig) -> WeightSequence {
    InstanceGenerator::new(config, 0).weight_sequence(horizon)
}

pub fn random_dominating_pair(
    horizon: usize,
    config: &TrialConfig,
) -> (PrizeSequence, PrizeSequence) {
    InstanceGenerator::new(config, 0).dominating_pair(horizon)
}
