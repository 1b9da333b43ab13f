//! Serenity: the unnormalized comparison
//! `alpha.x - alpha.y <= beta.x - beta.y` over dominating pairs.

use crate::dominance::dominates;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sequence::{dot, same_horizon, DiscountSequence, PrizeSequence};

use super::{Diagnostics, PatienceVerdict, Witness};

/// Characterizes serenity by `beta - alpha` weakly decreasing with
/// `beta_t >= alpha_t` everywhere.
///
/// Witnesses:
/// * decreasing fails at `k`: unit prize at `k` versus unit prize at `k+1`;
///   diagnostics are `alpha_k - alpha_{k+1}` and `beta_k - beta_{k+1}`.
/// * sign fails at `k`: `x = 0`, `y = -e_k`; diagnostics are `alpha_k` and `beta_k`.
///
/// The sign witness has unequal totals, so it refutes the inequality only for
/// the comparison over dominating pairs without the equal-total restriction;
/// [`definitional_serenity_holds`] rejects it.
pub fn is_more_serene(
    alpha: &DiscountSequence,
    beta: &DiscountSequence,
) -> Result<PatienceVerdict> {
    same_horizon(alpha.horizon(), beta.horizon())?;
    let horizon = alpha.horizon();
    let diff: Vec<Rational> = beta
        .values()
        .iter()
        .zip(alpha.values())
        .map(|(b, a)| b - a)
        .collect();

    if let Some(i) = diff.windows(2).position(|w| w[0] < w[1]) {
        let k = i + 1;
        return Ok(PatienceVerdict {
            holds: false,
            failing_index: Some(k),
            witness: Some(Witness {
                x: PrizeSequence::unit(horizon, k, Rational::one())?,
                y: PrizeSequence::unit(horizon, k + 1, Rational::one())?,
            }),
            diagnostics: Some(Diagnostics {
                alpha: alpha.gap(k),
                beta: beta.gap(k),
            }),
        });
    }

    if let Some(i) = diff.iter().position(Rational::is_negative) {
        let k = i + 1;
        return Ok(PatienceVerdict {
            holds: false,
            failing_index: Some(k),
            witness: Some(Witness {
                x: PrizeSequence::zeros(horizon)?,
                y: PrizeSequence::unit(horizon, k, -Rational::one())?,
            }),
            diagnostics: Some(Diagnostics {
                alpha: alpha.at(k).clone(),
                beta: beta.at(k).clone(),
            }),
        });
    }

    Ok(PatienceVerdict::holds())
}

/// `alpha.x - alpha.y <= beta.x - beta.y` for a pair with `x ⊵ y` and equal
/// totals. Prizes may be signed.
pub fn definitional_serenity_holds(
    alpha: &DiscountSequence,
    beta: &DiscountSequence,
    x: &PrizeSequence,
    y: &PrizeSequence,
) -> Result<bool> {
    same_horizon(alpha.horizon(), beta.horizon())?;
    same_horizon(alpha.horizon(), x.horizon())?;
    same_horizon(x.horizon(), y.horizon())?;
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
    let alpha_diff = dot(alpha.values(), x.values()) - dot(alpha.values(), y.values());
    let beta_diff = dot(beta.values(), x.values()) - dot(beta.values(), y.values());
    Ok(alpha_diff <= beta_diff)
}
