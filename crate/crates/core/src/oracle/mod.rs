//! Brute-force oracles that test each characterization against its definition.
//!
//! The oracles never call the characterizations they check. They evaluate
//! the defining inequalities directly on integer images of the inputs:
//! weights are multiplied by the lcm of their denominators and each prize
//! pair by a common positive factor. Every comparison involved is invariant
//! under those scalings, so the integer verdict is the exact rational
//! verdict. Arithmetic runs in `i128` and falls back to `BigInt` on overflow.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::patience::Witness;
use crate::rational::Rational;
use crate::sequence::{same_horizon, DiscountSequence, PrizeSequence, WeightSequence};

mod generate;
mod relation;
mod verify;

pub use generate::{random_dominating_pair, random_weight_sequence, InstanceGenerator, PRNG_NAME};
pub use relation::{exhaustive_relation_check, relation_property_suite, RelationReport};
pub use verify::{verify, CheckReport, Suite, SuiteReport, VerifyReport};

/// Seed and sizes for a randomized run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: usize,
    pub horizon_max: usize,
    pub grid_denominator: u32,
}

impl TrialConfig {
    pub fn new(seed: u64, trials: usize, horizon_max: usize, grid_denominator: u32) -> Self {
        TrialConfig {
            seed,
            trials: trials.max(1),
            horizon_max: horizon_max.max(1),
            grid_denominator: grid_denominator.max(1),
        }
    }
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig::new(42, 1000, 6, 6)
    }
}

/// Integer vector with an `i128` fast path.
#[derive(Debug, Clone)]
struct IntVec {
    small: Option<Vec<i128>>,
    big: Vec<BigInt>,
}

impl IntVec {
    fn from_big(big: Vec<BigInt>) -> Self {
        let small = big.iter().map(|v| v.to_i128()).collect();
        IntVec { small, big }
    }

    fn len(&self) -> usize {
        self.big.len()
    }
}

/// Multiplies every value by the lcm of all denominators.
fn scale_jointly(groups: &[&[Rational]]) -> Vec<IntVec> {
    let lcm = groups
        .iter()
        .flat_map(|g| g.iter())
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    groups
        .iter()
        .map(|g| IntVec::from_big(g.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()))
        .collect()
}

fn dot_small(a: &[i128], b: &[i128]) -> Option<i128> {
    a.iter()
        .zip(b)
        .try_fold(0i128, |acc, (p, q)| acc.checked_add(p.checked_mul(*q)?))
}

fn dot_big(a: &[BigInt], b: &[i128]) -> BigInt {
    a.iter().zip(b).map(|(p, q)| p * BigInt::from(*q)).sum()
}

/// Exact dot product; `BigInt` only when `i128` overflows.
#[derive(Debug, Clone)]
enum Dot {
    Small(i128),
    Big(BigInt),
}

impl Dot {
    fn of(w: &IntVec, x: &[i128]) -> Dot {
        if let Some(v) = w.small.as_deref().and_then(|s| dot_small(s, x)) {
            return Dot::Small(v);
        }
        Dot::Big(dot_big(&w.big, x))
    }

    fn big(&self) -> BigInt {
        match self {
            Dot::Small(v) => BigInt::from(*v),
            Dot::Big(v) => v.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Dot::Small(v) => *v == 0,
            Dot::Big(v) => v.is_zero(),
        }
    }

    fn cmp(&self, other: &Dot) -> Ordering {
        match (self, other) {
            (Dot::Small(a), Dot::Small(b)) => a.cmp(b),
            _ => self.big().cmp(&other.big()),
        }
    }
}

/// Compares `p*q` with `r*s`.
fn cmp_products(p: &Dot, q: &Dot, r: &Dot, s: &Dot) -> Ordering {
    if let (Dot::Small(p), Dot::Small(q), Dot::Small(r), Dot::Small(s)) = (p, q, r, s) {
        if let (Some(a), Some(b)) = (p.checked_mul(*q), r.checked_mul(*s)) {
            return a.cmp(&b);
        }
    }
    (p.big() * q.big()).cmp(&(r.big() * s.big()))
}

/// Integer prize pair; the common denominator is irrelevant to every check here.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Pair {
    x: Vec<i128>,
    y: Vec<i128>,
}

impl Pair {
    fn new(x: Vec<i128>, y: Vec<i128>) -> Self {
        Pair { x, y }
    }

    fn from_i64(x: &[i64], y: &[i64]) -> Self {
        Pair::new(
            x.iter().map(|&v| v as i128).collect(),
            y.iter().map(|&v| v as i128).collect(),
        )
    }

    /// Partial sums of `x` never fall below those of `y`.
    fn dominates(&self) -> bool {
        let mut slack = 0i128;
        for (a, b) in self.x.iter().zip(&self.y) {
            slack += a - b;
            if slack < 0 {
                return false;
            }
        }
        true
    }

    fn equal_totals(&self) -> bool {
        self.x.iter().sum::<i128>() == self.y.iter().sum::<i128>()
    }

    fn positive(&self) -> bool {
        self.x.iter().chain(&self.y).all(|&v| v >= 0)
    }

    fn to_witness(&self, denom: i64) -> Witness {
        let conv = |v: &[i128]| {
            PrizeSequence::new(
                v.iter()
                    .map(|&n| Rational::new(BigInt::from(n), denom).expect("nonzero"))
                    .collect(),
            )
            .expect("non-empty")
        };
        Witness {
            x: conv(&self.x),
            y: conv(&self.y),
        }
    }
}

fn unit_pair(horizon: usize, k: usize, s: usize) -> Pair {
    let mut x = vec![0i128; horizon];
    let mut y = vec![0i128; horizon];
    x[k] = 1;
    y[s] = 1;
    Pair::new(x, y)
}

/// Scaled prize pair from arbitrary rationals.
fn scale_pair(x: &PrizeSequence, y: &PrizeSequence) -> (IntVec, IntVec) {
    let mut v = scale_jointly(&[x.values(), y.values()]);
    let y = v.pop().expect("two groups");
    let x = v.pop().expect("two groups");
    (x, y)
}

/// Outcome of an exhaustive-or-sampled search for a definitional violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleOutcome {
    /// Admissible instances evaluated.
    pub instances: u64,
    pub violation: Option<Witness>,
}

impl OracleOutcome {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Number of random weight sequences drawn per pair by [`superiority_oracle`]
/// when called from the verification suites.
pub const WEIGHT_DRAWS: usize = 200;

/// Searches for a weight sequence that strictly prefers `y` to `x`.
///
/// Tries the `T` step sequences first, then `config.trials` random grid
/// weight sequences.
pub fn superiority_search(
    x: &PrizeSequence,
    y: &PrizeSequence,
    config: &TrialConfig,
) -> Result<Option<WeightSequence>> {
    superiority_search_stream(x, y, config, 0)
}

pub(crate) fn superiority_search_stream(
    x: &PrizeSequence,
    y: &PrizeSequence,
    config: &TrialConfig,
    stream: u64,
) -> Result<Option<WeightSequence>> {
    same_horizon(x.horizon(), y.horizon())?;
    let horizon = x.horizon();
    let (sx, sy) = scale_pair(x, y);

    let prefers_y = |w: &[i128]| {
        let (wx, wy) = (Dot::of(&sx, w), Dot::of(&sy, w));
        wx.cmp(&wy) == Ordering::Less
    };

    for p in 1..=horizon {
        let w: Vec<i128> = (0..horizon).map(|i| i128::from(i < p)).collect();
        if prefers_y(&w) {
            return Ok(Some(WeightSequence::step(horizon, p)?));
        }
    }
    let mut generator = InstanceGenerator::new(config, stream);
    let g = generator.grid() as i64;
    for _ in 0..config.trials {
        let w = generator.weight_sequence(horizon);
        let ints: Vec<i128> = w
            .values()
            .iter()
            .map(|v| {
                (v * Rational::from(g))
                    .numer()
                    .to_i128()
                    .expect("grid value")
            })
            .collect();
        if prefers_y(&ints) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// True when no tried weight sequence strictly prefers `y` to `x`.
pub fn superiority_oracle(
    x: &PrizeSequence,
    y: &PrizeSequence,
    config: &TrialConfig,
) -> Result<bool> {
    superiority_search(x, y, config).map(|w| w.is_none())
}

/// Geometric amounts `2^-m` reach arbitrarily thin admissible intervals.
const GEOMETRIC_STEPS: u32 = 48;

/// Searches for a pair violating the patience inequality.
///
/// Instance families, in order:
/// * (c) structured: unit prize at `k` vs at `s` for all `k < s`; and
///   `e_j + eta e_k` vs `e_j + eta e_{k+1}` for all `j < k` with `eta` over
///   `2^-m` (m up to 48) and the grid values up to 2;
/// * (b) every single binary deterioration, on the grid, of four random
///   positive grid sequences;
/// * (a) random dominating pairs until at least `config.trials` instances
///   have been evaluated.
///
/// Stops at the first violation.
pub fn patience_search(
    alpha: &DiscountSequence,
    beta: &DiscountSequence,
    config: &TrialConfig,
    stream: u64,
) -> Result<OracleOutcome> {
    same_horizon(alpha.horizon(), beta.horizon())?;
    let horizon = alpha.horizon();
    let mut scaled = scale_jointly(&[alpha.values()]);
    let a = scaled.pop().expect("one group");
    let mut scaled = scale_jointly(&[beta.values()]);
    let b = scaled.pop().expect("one group");
    debug_assert_eq!(a.len(), horizon);

    let mut count = 0u64;
    // Some(true) for an admissible violating pair, None when inadmissible.
    let violates = |pair: &Pair| -> Option<bool> {
        if !(pair.positive() && pair.equal_totals() && pair.dominates()) {
            return None;
        }
        let (ay, by) = (Dot::of(&a, &pair.y), Dot::of(&b, &pair.y));
        if ay.is_zero() || by.is_zero() {
            return None;
        }
        let (ax, bx) = (Dot::of(&a, &pair.x), Dot::of(&b, &pair.x));
        // alpha.x/alpha.y > beta.x/beta.y with positive denominators
        Some(cmp_products(&ax, &by, &bx, &ay) == Ordering::Greater)
    };
    let check = |pair: &Pair, count: &mut u64| match violates(pair) {
        None => false,
        Some(v) => {
            *count += 1;
            v
        }
    };

    let g = config.grid_denominator.max(1) as i128;

    // (c) structured
    for k in 0..horizon {
        for s in k + 1..horizon {
            let pair = unit_pair(horizon, k, s);
            if check(&pair, &mut count) {
                return Ok(found(count, &pair, 1));
            }
        }
    }
    let mut etas: Vec<(i128, i128)> = (0..=GEOMETRIC_STEPS).map(|m| (1, 1i128 << m)).collect();
    etas.extend((1..=2 * g).map(|n| (n, g)));
    for k in 1..horizon.saturating_sub(1) {
        for j in 0..k {
            for &(num, den) in &etas {
                let mut x = vec![0i128; horizon];
                x[j] = den;
                let mut y = x.clone();
                x[k] += num;
                y[k + 1] += num;
                let pair = Pair::new(x, y);
                if check(&pair, &mut count) {
                    return Ok(found_scaled(count, &pair, den));
                }
            }
        }
    }

    // (b) single binary deteriorations of random positive grid sequences
    let mut generator = InstanceGenerator::new(config, stream);
    for _ in 0..4 {
        let x: Vec<i128> = generator
            .positive_sequence(horizon)
            .values()
            .iter()
            .map(|v| {
                (v * Rational::from(g as i64))
                    .numer()
                    .to_i128()
                    .expect("grid")
            })
            .collect();
        for k in 0..horizon {
            for s in k + 1..horizon {
                for eta in 1..=x[k] {
                    let mut z = x.clone();
                    z[k] -= eta;
                    z[s] += eta;
                    let pair = Pair::new(x.clone(), z);
                    if check(&pair, &mut count) {
                        return Ok(found_scaled(count, &pair, g));
                    }
                }
            }
        }
    }

    // (a) random dominating pairs
    let mut attempts = 0usize;
    while (count as usize) < config.trials && attempts < 4 * config.trials {
        attempts += 1;
        let (x, y) = generator.dominating_numerators(horizon);
        let pair = Pair::from_i64(&x, &y);
        if check(&pair, &mut count) {
            return Ok(found_scaled(count, &pair, g));
        }
    }

    Ok(OracleOutcome {
        instances: count,
        violation: None,
    })
}

fn found(count: u64, pair: &Pair, denom: i64) -> OracleOutcome {
    OracleOutcome {
        instances: count,
        violation: Some(pair.to_witness(denom)),
    }
}

fn found_scaled(count: u64, pair: &Pair, denom: i128) -> OracleOutcome {
    let denom = i64::try_from(denom).expect("denominator fits");
    found(count, pair, denom)
}

/// True when no instance violates the patience inequality.
pub fn patience_oracle(
    alpha: &DiscountSequence,
    beta: &DiscountSequence,
    config: &TrialConfig,
) -> Result<bool> {
    patience_search(alpha, beta, config, 0).map(|o| o.holds())
}

/// Searches for a pair violating the serenity inequality
/// `alpha.x - alpha.y <= beta.x - beta.y`.
///
/// With `equal_totals` the pairs satisfy `x ⊵ y` and `sum x = sum y`, as the
/// definition requires. Without it, pairs only need `x ⊵ y` and the search
/// adds `x = 0, y = -e_k` and random pairs with mass removed from `y`.
/// Prizes may be signed either way.
pub fn serenity_search(
    alpha: &DiscountSequence,
    beta: &DiscountSequence,
    config: &TrialConfig,
    stream: u64,
    equal_totals: bool,
) -> Result<OracleOutcome> {
    same_horizon(alpha.horizon(), beta.horizon())?;
    let horizon = alpha.horizon();
    let mut scaled = scale_jointly(&[alpha.values(), beta.values()]);
    let b = scaled.pop().expect("two groups");
    let a = scaled.pop().expect("two groups");

    let mut count = 0u64;
    let check = |pair: &Pair, count: &mut u64| -> bool {
        if !pair.dominates() || (equal_totals && !pair.equal_totals()) {
            return false;
        }
        *count += 1;
        let (ax, ay) = (Dot::of(&a, &pair.x), Dot::of(&a, &pair.y));
        let (bx, by) = (Dot::of(&b, &pair.x), Dot::of(&b, &pair.y));
        // alpha.x - alpha.y > beta.x - beta.y  <=>  alpha.x + beta.y > beta.x + alpha.y
        ax.big() + by.big() > bx.big() + ay.big()
    };

    for k in 0..horizon {
        for s in k + 1..horizon {
            let pair = unit_pair(horizon, k, s);
            if check(&pair, &mut count) {
                return Ok(found(count, &pair, 1));
            }
        }
    }
    if !equal_totals {
        for k in 0..horizon {
            let mut y = vec![0i128; horizon];
            y[k] = -1;
            let pair = Pair::new(vec![0; horizon], y);
            if check(&pair, &mut count) {
                return Ok(found(count, &pair, 1));
            }
        }
    }

    let g = config.grid_denominator.max(1) as i128;
    let mut generator = InstanceGenerator::new(config, stream);
    let mut attempts = 0usize;
    while (count as usize) < config.trials && attempts < 4 * config.trials {
        attempts += 1;
        let (x, mut y) = generator.signed_dominating_numerators(horizon);
        if !equal_totals && generator.rng().random_bool(0.5) {
            let t = generator.rng().random_range(0..horizon);
            y[t] -= generator.rng().random_range(1..=2 * g as i64);
        }
        let pair = Pair::from_i64(&x, &y);
        if check(&pair, &mut count) {
            return Ok(found_scaled(count, &pair, g));
        }
    }
    Ok(OracleOutcome {
        instances: count,
        violation: None,
    })
}

/// True when no equal-total dominating pair violates the serenity inequality.
pub fn serenity_oracle(
    alpha: &DiscountSequence,
    beta: &DiscountSequence,
    config: &TrialConfig,
) -> Result<bool> {
    serenity_search(alpha, beta, config, 0, true).map(|o| o.holds())
}
