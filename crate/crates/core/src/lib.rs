//! Exact dominance and comparative-patience orders on prize and discount
//! sequences.
//!
//! * [`dominance`]: pointwise and partial-sum dominance, superiority over
//!   decreasing weights, summation by parts, tightening.
//! * [`deterioration`]: binary deteriorations and greedy chains between
//!   dominating sequences.
//! * [`patience`]: serenity and patience characterizations with verified
//!   counterexamples, plus results for exponential and quasi-hyperbolic families.
//! * [`oracle`]: seeded instance generators and brute-force checks of every
//!   characterization against its definition.
//!
//! All verdicts are computed on [`Rational`]; nothing rounds.

pub mod cli;
pub mod deterioration;
pub mod dominance;
pub mod error;
pub mod family;
pub mod oracle;
pub mod patience;
pub mod rational;
pub mod sequence;

pub use error::{Error, Operand, Result};
pub use family::{DiscountFamily, Horizon};
pub use rational::Rational;
pub use sequence::{
    weighted_sum, DiscountSequence, PrizeSequence, SequenceJson, WeightSequence, Weights,
};
