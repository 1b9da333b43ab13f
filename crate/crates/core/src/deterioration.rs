//! Binary deteriorations and the greedy chain from a dominating sequence down
//! to a dominated one with the same total.

use serde::{Deserialize, Serialize};

use crate::dominance::dominates;
use crate::error::{Error, Operand, Result};
use crate::rational::Rational;
use crate::sequence::{dot, same_horizon, DiscountSequence, PrizeSequence};

/// Move `amount` from period `from` to the later period `to` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeteriorationStep {
    pub from: usize,
    pub to: usize,
    pub amount: Rational,
}

impl DeteriorationStep {
    pub fn new(from: usize, to: usize, amount: Rational) -> Self {
        DeteriorationStep { from, to, amount }
    }
}

/// A start sequence and the steps that carry it to its end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeteriorationChain {
    pub start: PrizeSequence,
    pub steps: Vec<DeteriorationStep>,
}

impl DeteriorationChain {
    /// The start followed by the sequence after each step.
    pub fn sequences(&self) -> Result<Vec<PrizeSequence>> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(self.start.clone());
        for step in &self.steps {
            let next = apply_step(out.last().expect("non-empty"), step)?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn end(&self) -> Result<PrizeSequence> {
        self.steps
            .iter()
            .try_fold(self.start.clone(), |acc, step| apply_step(&acc, step))
    }
}

/// Applies one binary deterioration to a positive sequence.
///
/// Positivity is enforced: `x` must have no negative entry and the moved
/// amount may not exceed `x_from`.
pub fn apply_step(x: &PrizeSequence, step: &DeteriorationStep) -> Result<PrizeSequence> {
    let horizon = x.horizon();
    for index in [step.from, step.to] {
        if index == 0 || index > horizon {
            return Err(Error::IndexOutOfRange { index, horizon });
        }
    }
    if step.from >= step.to {
        return Err(Error::StepOrder {
            from: step.from,
            to: step.to,
        });
    }
    if !step.amount.is_positive() {
        return Err(Error::NonPositiveAmount(step.amount.clone()));
    }
    x.require_positive(Operand::X)?;
    let available = x.at(step.from);
    if step.amount > *available {
        return Err(Error::AmountExceedsBalance {
            index: step.from,
            amount: Box::new(step.amount.clone()),
            available: Box::new(available.clone()),
        });
    }
    let mut z = x.clone();
    let values = z.values_mut();
    values[step.from - 1] -= &step.amount;
    values[step.to - 1] += &step.amount;
    Ok(z)
}

/// Builds the chain of binary deteriorations from `x` to `y`.
///
/// Each step takes `t1` = first period where the current sequence differs
/// from `y`, `t1'` = first period where it falls short of `y`, and moves the
/// smaller of the two gaps from `t1` to `t1'`. Every step closes at least one
/// gap, so the chain is no longer than the number of differing periods.
pub fn decompose(x: &PrizeSequence, y: &PrizeSequence) -> Result<DeteriorationChain> {
    same_horizon(x.horizon(), y.horizon())?;
    x.require_positive(Operand::X)?;
    y.require_positive(Operand::Y)?;
    let (sx, sy) = (x.total(), y.total());
    if sx != sy {
        return Err(Error::UnequalSums {
            x: Box::new(sx),
            y: Box::new(sy),
        });
    }
    if let Some(index) = dominates(x, y)?.failure_index {
        return Err(Error::NotDominating { index });
    }

    let target = y.values();
    let mut current = x.clone();
    let mut steps = Vec::new();
    loop {
        let values = current.values();
        let Some(t1) = values.iter().zip(target).position(|(a, b)| a != b) else {
            break;
        };
        let t1_short = values
            .iter()
            .zip(target)
            .position(|(a, b)| a < b)
            .expect("equal totals with a difference imply a shortfall");
        // dominance forces the first difference to be a surplus, before any shortfall
        debug_assert!(values[t1] > target[t1] && t1_short > t1);
        let surplus = &values[t1] - &target[t1];
        let shortfall = &target[t1_short] - &values[t1_short];
        let amount = if surplus >= shortfall {
            shortfall
        } else {
            surplus
        };
        let step = DeteriorationStep::new(t1 + 1, t1_short + 1, amount);
        current = apply_step(&current, &step)?;
        steps.push(step);
    }
    Ok(DeteriorationChain {
        start: x.clone(),
        steps,
    })
}

/// `beta.z / alpha.z` for every sequence `z` along the chain, start first.
///
/// Fails with [`Error::ZeroDiscountedSum`] if any denominator vanishes.
pub fn ratio_trace(
    alpha: &DiscountSequence,
    beta: &DiscountSequence,
    chain: &DeteriorationChain,
) -> Result<Vec<Rational>> {
    same_horizon(alpha.horizon(), beta.horizon())?;
    same_horizon(alpha.horizon(), chain.start.horizon())?;
    chain
        .sequences()?
        .iter()
        .map(|z| {
            let a = dot(alpha.values(), z.values());
            if a.is_zero() {
                return Err(Error::ZeroDiscountedSum {
                    operand: Operand::X,
                    weights: Operand::Alpha,
                });
            }
            Ok(dot(beta.values(), z.values()) / a)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[&str]) -> PrizeSequence {
        PrizeSequence::from_strs(v).unwrap()
    }

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn apply_step_examples() {
        let z = apply_step(
            &seq(&["3", "1", "0"]),
            &DeteriorationStep::new(1, 3, r("2")),
        )
        .unwrap();
        assert_eq!(z, seq(&["1", "1", "2"]));
        let z = apply_step(&seq(&["1", "0"]), &DeteriorationStep::new(1, 2, r("1"))).unwrap();
        assert_eq!(z, seq(&["0", "1"]));
        assert!(matches!(
            apply_step(&seq(&["1", "0"]), &DeteriorationStep::new(1, 2, r("2"))),
            Err(Error::AmountExceedsBalance { index: 1, .. })
        ));
    }

    #[test]
    fn apply_step_errors() {
        let x = seq(&["1", "1"]);
        assert!(matches!(
            apply_step(&x, &DeteriorationStep::new(1, 3, r("1"))),
            Err(Error::IndexOutOfRange {
                index: 3,
                horizon: 2
            })
        ));
        assert!(matches!(
            apply_step(&x, &DeteriorationStep::new(2, 1, r("1"))),
            Err(Error::StepOrder { .. })
        ));
        assert!(matches!(
            apply_step(&x, &DeteriorationStep::new(1, 2, r("0"))),
            Err(Error::NonPositiveAmount(_))
        ));
        assert!(matches!(
            apply_step(&seq(&["1", "-1"]), &DeteriorationStep::new(1, 2, r("1"))),
            Err(Error::Negative { index: 2, .. })
        ));
    }

    #[test]
    fn decompose_examples() {
        let chain = decompose(&seq(&["3", "1", "0"]), &seq(&["1", "1", "2"])).unwrap();
        assert_eq!(chain.steps, vec![DeteriorationStep::new(1, 3, r("2"))]);

        let x = seq(&["1/2", "1/3", "0"]);
        assert!(decompose(&x, &x).unwrap().steps.is_empty());

        let chain = decompose(&seq(&["2", "0", "0"]), &seq(&["0", "1", "1"])).unwrap();
        assert_eq!(
            chain.steps,
            vec![
                DeteriorationStep::new(1, 2, r("1")),
                DeteriorationStep::new(1, 3, r("1")),
            ]
        );
        assert_eq!(chain.end().unwrap(), seq(&["0", "1", "1"]));
    }

    #[test]
    fn decompose_preconditions() {
        assert!(matches!(
            decompose(&seq(&["1", "1"]), &seq(&["1", "0"])),
            Err(Error::UnequalSums { .. })
        ));
        assert_eq!(
            decompose(&seq(&["0", "1"]), &seq(&["1", "0"])),
            Err(Error::NotDominating { index: 1 })
        );
        assert!(matches!(
            decompose(&seq(&["2", "-1"]), &seq(&["1", "0"])),
            Err(Error::Negative {
                operand: Operand::X,
                index: 2
            })
        ));
    }

    #[test]
    fn ratio_trace_examples() {
        let alpha = DiscountSequence::from_strs(&["1/2", "12/25", "91/250"]).unwrap();
        let beta = DiscountSequence::from_strs(&["1", "2/3", "1/2"]).unwrap();

        let x = seq(&["1", "3/2", "1"]);
        let empty = decompose(&x, &x).unwrap();
        assert_eq!(
            ratio_trace(&alpha, &beta, &empty).unwrap(),
            vec![r("625/396")]
        );

        // values frozen from an independent fractions evaluation
        let chain = decompose(&x, &seq(&["1", "1", "3/2"])).unwrap();
        assert_eq!(chain.steps, vec![DeteriorationStep::new(2, 3, r("1/2"))]);
        assert_eq!(
            ratio_trace(&alpha, &beta, &chain).unwrap(),
            vec![r("625/396"), r("3625/2289")]
        );

        let chain = decompose(&seq(&["2", "1", "0"]), &seq(&["0", "1", "2"])).unwrap();
        let trace = ratio_trace(&alpha, &alpha, &chain).unwrap();
        assert!(trace.iter().all(|v| *v == Rational::one()));

        let zero = decompose(&seq(&["0", "0", "0"]), &seq(&["0", "0", "0"])).unwrap();
        assert!(matches!(
            ratio_trace(&alpha, &beta, &zero),
            Err(Error::ZeroDiscountedSum { .. })
        ));
    }
}
