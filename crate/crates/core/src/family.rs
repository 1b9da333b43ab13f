//! Parametric discounters and their finite realizations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sequence::DiscountSequence;

/// A horizon: a finite number of periods or the infinite marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Horizon {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horizon::Finite(t) => write!(f, "{t}"),
            Horizon::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Horizon {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "inf" | "infinite" | "∞" => Ok(Horizon::Infinite),
            t => match t.parse::<usize>() {
                Ok(0) => Err("horizon must be at least 1".into()),
                Ok(n) => Ok(Horizon::Finite(n)),
                Err(_) => Err(format!("expected a positive integer or `inf`, got {t:?}")),
            },
        }
    }
}

/// A discounter family: exponential `a^{t-1}`, quasi-hyperbolic
/// `(1, b d, b d^2, ...)`, or an explicit finite sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", try_from = "RawFamily")]
pub enum DiscountFamily {
    Exponential { a: Rational },
    QuasiHyperbolic { b: Rational, d: Rational },
    Explicit(DiscountSequence),
}

#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
enum RawFamily {
    Exponential { a: Rational },
    QuasiHyperbolic { b: Rational, d: Rational },
    Explicit(DiscountSequence),
}

impl TryFrom<RawFamily> for DiscountFamily {
    type Error = Error;

    fn try_from(raw: RawFamily) -> Result<Self> {
        match raw {
            RawFamily::Exponential { a } => DiscountFamily::exponential(a),
            RawFamily::QuasiHyperbolic { b, d } => DiscountFamily::quasi_hyperbolic(b, d),
            RawFamily::Explicit(seq) => Ok(DiscountFamily::Explicit(seq)),
        }
    }
}

fn open_unit(name: &'static str, v: &Rational) -> Result<()> {
    if v.is_positive() && *v < Rational::one() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value: v.clone(),
            range: "(0, 1)",
        })
    }
}

impl DiscountFamily {
    pub fn exponential(a: Rational) -> Result<Self> {
        open_unit("a", &a)?;
        Ok(DiscountFamily::Exponential { a })
    }

    pub fn quasi_hyperbolic(b: Rational, d: Rational) -> Result<Self> {
        if !b.is_positive() || b > Rational::one() {
            return Err(Error::ParameterOutOfRange {
                name: "b",
                value: b,
                range: "(0, 1]",
            });
        }
        open_unit("d", &d)?;
        Ok(DiscountFamily::QuasiHyperbolic { b, d })
    }

    pub fn is_parametric(&self) -> bool {
        !matches!(self, DiscountFamily::Explicit(_))
    }

    /// Weight on 1-based period `t` for the parametric variants.
    pub(crate) fn weight(&self, t: usize) -> Option<Rational> {
        let exp = u32::try_from(t - 1).ok()?;
        match self {
            DiscountFamily::Exponential { a } => Some(a.pow(exp)),
            DiscountFamily::QuasiHyperbolic { b, d } => Some(if t == 1 {
                Rational::one()
            } else {
                b * d.pow(exp)
            }),
            DiscountFamily::Explicit(seq) => seq.values().get(t - 1).cloned(),
        }
    }

    /// First `horizon` weights as a [`DiscountSequence`].
    pub fn realize(&self, horizon: usize) -> Result<DiscountSequence> {
        if horizon == 0 {
            return Err(Error::EmptySequence);
        }
        match self {
            DiscountFamily::Explicit(seq) => {
                if seq.horizon() == horizon {
                    Ok(seq.clone())
                } else {
                    Err(Error::ExplicitHorizon {
                        stored: seq.horizon(),
                        requested: horizon,
                    })
                }
            }
            DiscountFamily::Exponential { a } => {
                open_unit("a", a)?;
                self.realize_parametric(horizon)
            }
            DiscountFamily::QuasiHyperbolic { b, d } => {
                Self::quasi_hyperbolic(b.clone(), d.clone())?;
                self.realize_parametric(horizon)
            }
        }
    }

    fn realize_parametric(&self, horizon: usize) -> Result<DiscountSequence> {
        let values = (1..=horizon)
            .map(|t| {
                self.weight(t)
                    .ok_or(Error::Unsupported(format!("horizon {horizon} is too long")))
            })
            .collect::<Result<Vec<_>>>()?;
        DiscountSequence::new(values)
    }
}
