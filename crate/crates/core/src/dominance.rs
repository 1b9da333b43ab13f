//! Dominance between prize sequences: pointwise, partial-sum, and superiority
//! over every nonnegative decreasing weight sequence.
//!
//! Superiority quantifies over infinitely many weight sequences, but every
//! such sequence is a nonnegative combination of step sequences
//! `(1, ..., 1, 0, ..., 0)`, so checking the `T` steps decides it and a
//! failing step is an exact witness.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sequence::{same_horizon, weighted_sum, PrizeSequence, WeightSequence};

/// Outcome of a dominance or superiority check.
///
/// When `holds` is false, `failure_index` is the least `p` with
/// `x_1 + ... + x_p < y_1 + ... + y_p` and `witness_weights` is the step
/// sequence with `p` ones, which strictly prefers `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceVerdict {
    pub holds: bool,
    pub failure_index: Option<usize>,
    pub witness_weights: Option<WeightSequence>,
}

impl DominanceVerdict {
    fn holds() -> Self {
        DominanceVerdict {
            holds: true,
            failure_index: None,
            witness_weights: None,
        }
    }

    fn fails_at(horizon: usize, p: usize) -> Result<Self> {
        Ok(DominanceVerdict {
            holds: false,
            failure_index: Some(p),
            witness_weights: Some(WeightSequence::step(horizon, p)?),
        })
    }
}

/// `x_t >= y_t` for every period.
pub fn pointwise_dominates(x: &PrizeSequence, y: &PrizeSequence) -> Result<bool> {
    same_horizon(x.horizon(), y.horizon())?;
    Ok(x.values().iter().zip(y.values()).all(|(a, b)| a >= b))
}

/// Partial-sum dominance `x ⊵ y`. Ties count as dominance.
pub fn dominates(x: &PrizeSequence, y: &PrizeSequence) -> Result<DominanceVerdict> {
    same_horizon(x.horizon(), y.horizon())?;
    let mut slack = Rational::zero();
    for (p, (a, b)) in x.values().iter().zip(y.values()).enumerate() {
        slack += a;
        slack -= b;
        if slack.is_negative() {
            return DominanceVerdict::fails_at(x.horizon(), p + 1);
        }
    }
    Ok(DominanceVerdict::holds())
}

/// Superiority: `sum b_t x_t >= sum b_t y_t` for every weight sequence `b`.
///
/// Decided by evaluating the step sequences, the generators of the weight
/// cone. The verdict always coincides with [`dominates`].
pub fn is_superior(x: &PrizeSequence, y: &PrizeSequence) -> Result<DominanceVerdict> {
    same_horizon(x.horizon(), y.horizon())?;
    let horizon = x.horizon();
    for p in 1..=horizon {
        let step = WeightSequence::step(horizon, p)?;
        if weighted_sum(&step, x)? < weighted_sum(&step, y)? {
            return DominanceVerdict::fails_at(horizon, p);
        }
    }
    Ok(DominanceVerdict::holds())
}

/// Summation by parts:
/// `sum_{t<T} A_t (b_t - b_{t+1}) + A_T b_T` with `A_k = a_1 + ... + a_k`.
///
/// Equals `sum a_t b_t` exactly.
pub fn abel_sum(a: &PrizeSequence, b: &PrizeSequence) -> Result<Rational> {
    same_horizon(a.horizon(), b.horizon())?;
    let partial = a.partial_sums();
    let b = b.values();
    let horizon = b.len();
    let mut total: Rational = partial[..horizon - 1]
        .iter()
        .zip(b.windows(2))
        .map(|(acc, w)| acc * (&w[0] - &w[1]))
        .sum();
    total += &partial[horizon - 1] * &b[horizon - 1];
    Ok(total)
}

/// Removes the excess of a dominating `x` so the totals match while partial-sum
/// dominance is kept.
///
/// With `S_k = sum_{i<=k} (x_i - y_i)`, `s_t = min_{t<=k<=T} S_k` and `s_0 = 0`,
/// returns `x_t - (s_t - s_{t-1})`. The result lies pointwise below `x`, has the
/// same total as `y`, and still dominates `y`.
pub fn tighten(x: &PrizeSequence, y: &PrizeSequence) -> Result<PrizeSequence> {
    let verdict = dominates(x, y)?;
    if let Some(index) = verdict.failure_index {
        return Err(Error::NotDominating { index });
    }
    let slack: Vec<Rational> = x
        .values()
        .iter()
        .zip(y.values())
        .scan(Rational::zero(), |acc, (a, b)| {
            *acc += a;
            *acc -= b;
            Some(acc.clone())
        })
        .collect();

    // suffix minima of the running slack
    let mut suffix_min = slack.clone();
    for t in (0..suffix_min.len().saturating_sub(1)).rev() {
        if suffix_min[t + 1] < suffix_min[t] {
            suffix_min[t] = suffix_min[t + 1].clone();
        }
    }

    let mut prev = Rational::zero();
    let values = x
        .values()
        .iter()
        .zip(&suffix_min)
        .map(|(xt, s)| {
            let removed = s - &prev;
            prev = s.clone();
            xt - removed
        })
        .collect();
    PrizeSequence::new(values)
}
