//! Finite-horizon sequences and discounted sums.
//!
//! Periods are numbered from 1 in every public index (failure indices,
//! deterioration steps, counterexample positions); the backing `Vec` is
//! 0-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Operand, Result};
use crate::rational::Rational;

/// Wire form shared by every sequence type: `{"T": 3, "values": ["1/2", ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceJson {
    #[serde(rename = "T")]
    pub horizon: usize,
    pub values: Vec<Rational>,
}

impl SequenceJson {
    fn into_values(self) -> Result<Vec<Rational>> {
        if self.values.len() != self.horizon {
            return Err(Error::LengthMismatch {
                declared: self.horizon,
                actual: self.values.len(),
            });
        }
        Ok(self.values)
    }
}

/// Anything that can weight a prize sequence in a discounted sum.
pub trait Weights {
    fn weights(&self) -> &[Rational];

    fn horizon(&self) -> usize {
        self.weights().len()
    }
}

macro_rules! sequence_common {
    ($ty:ident) => {
        impl $ty {
            pub fn values(&self) -> &[Rational] {
                &self.values
            }

            pub fn horizon(&self) -> usize {
                self.values.len()
            }

            /// Value at 1-based period `t`.
            pub fn at(&self, t: usize) -> &Rational {
                &self.values[t - 1]
            }

            pub fn into_values(self) -> Vec<Rational> {
                self.values
            }

            pub fn from_strs(values: &[&str]) -> Result<Self> {
                let parsed = values
                    .iter()
                    .map(|s| s.parse::<Rational>())
                    .collect::<Result<Vec<_>>>()?;
                Self::new(parsed)
            }
        }

        impl TryFrom<SequenceJson> for $ty {
            type Error = Error;
            fn try_from(json: SequenceJson) -> Result<Self> {
                Self::new(json.into_values()?)
            }
        }

        impl From<$ty> for SequenceJson {
            fn from(seq: $ty) -> SequenceJson {
                SequenceJson {
                    horizon: seq.values.len(),
                    values: seq.values,
                }
            }
        }

        impl std::fmt::Display for $ty {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str("(")?;
                for (i, v) in self.values.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str(")")
            }
        }
    };
}

/// A stream of per-period prizes in utils. Entries may be signed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SequenceJson", into = "SequenceJson")]
pub struct PrizeSequence {
    values: Vec<Rational>,
}

sequence_common!(PrizeSequence);

impl PrizeSequence {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(PrizeSequence { values })
    }

    pub fn zeros(horizon: usize) -> Result<Self> {
        Self::new(vec![Rational::zero(); horizon])
    }

    /// `amount` at period `t`, zero elsewhere.
    pub fn unit(horizon: usize, t: usize, amount: Rational) -> Result<Self> {
        if t == 0 || t > horizon {
            return Err(Error::IndexOutOfRange { index: t, horizon });
        }
        let mut values = vec![Rational::zero(); horizon];
        values[t - 1] = amount;
        Self::new(values)
    }

    pub fn total(&self) -> Rational {
        self.values.iter().sum()
    }

    /// Running sums `x_1, x_1 + x_2, ...`.
    pub fn partial_sums(&self) -> Vec<Rational> {
        self.values
            .iter()
            .scan(Rational::zero(), |acc, v| {
                *acc += v;
                Some(acc.clone())
            })
            .collect()
    }

    /// Every entry is `>= 0`.
    pub fn is_positive(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub(crate) fn first_negative(&self) -> Option<usize> {
        self.values
            .iter()
            .position(Rational::is_negative)
            .map(|i| i + 1)
    }

    pub(crate) fn require_positive(&self, operand: Operand) -> Result<()> {
        match self.first_negative() {
            Some(index) => Err(Error::Negative { operand, index }),
            None => Ok(()),
        }
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Rational] {
        &mut self.values
    }
}

/// An agent's realized discount weights: strictly positive and weakly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SequenceJson", into = "SequenceJson")]
pub struct DiscountSequence {
    values: Vec<Rational>,
}

sequence_common!(DiscountSequence);

impl DiscountSequence {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some(i) = values.iter().position(|v| !v.is_positive()) {
            return Err(Error::NotStrictlyPositive { index: i + 1 });
        }
        check_decreasing(&values)?;
        Ok(DiscountSequence { values })
    }

    pub fn first(&self) -> &Rational {
        &self.values[0]
    }

    /// Adjacent drop `d_t - d_{t+1}` for 1-based `t < T`.
    pub fn gap(&self, t: usize) -> Rational {
        &self.values[t - 1] - &self.values[t]
    }

    pub fn to_weights(&self) -> WeightSequence {
        WeightSequence {
            values: self.values.clone(),
        }
    }
}

/// A nonnegative, weakly decreasing weight sequence; zeros are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SequenceJson", into = "SequenceJson")]
pub struct WeightSequence {
    values: Vec<Rational>,
}

sequence_common!(WeightSequence);

impl WeightSequence {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        if let Some(i) = values.iter().position(Rational::is_negative) {
            return Err(Error::Negative {
                operand: Operand::Weights,
                index: i + 1,
            });
        }
        check_decreasing(&values)?;
        Ok(WeightSequence { values })
    }

    /// `p` ones followed by zeros.
    pub fn step(horizon: usize, p: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::EmptySequence);
        }
        if p > horizon {
            return Err(Error::IndexOutOfRange { index: p, horizon });
        }
        let values = (0..horizon)
            .map(|i| {
                if i < p {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Ok(WeightSequence { values })
    }
}

fn check_decreasing(values: &[Rational]) -> Result<()> {
    match values.windows(2).position(|w| w[0] < w[1]) {
        Some(i) => Err(Error::NotDecreasing { index: i + 1 }),
        None => Ok(()),
    }
}

impl Weights for WeightSequence {
    fn weights(&self) -> &[Rational] {
        &self.values
    }
}

impl Weights for DiscountSequence {
    fn weights(&self) -> &[Rational] {
        &self.values
    }
}

pub(crate) fn same_horizon(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::HorizonMismatch { left, right })
    }
}

/// Exact `sum_t w_t x_t`.
pub fn weighted_sum<W: Weights + ?Sized>(w: &W, x: &PrizeSequence) -> Result<Rational> {
    same_horizon(w.horizon(), x.horizon())?;
    Ok(dot(w.weights(), x.values()))
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}
