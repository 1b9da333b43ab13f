//! Comparative patience between two discounters `alpha` (Alice) and `beta` (Bob).
//!
//! Alice is more patient than Bob when, for every pair of positive prize
//! sequences with equal totals and `x ⊵ y`,
//! `(alpha.x)/(alpha.y) <= (beta.x)/(beta.y)`. This holds exactly when every
//! adjacent gap satisfies `alpha_1 (beta_t - beta_{t+1}) >= beta_1 (alpha_t - alpha_{t+1})`.
//! All comparisons here use that cross-multiplied form, so zero gaps never
//! divide.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::dominance::dominates;
use crate::error::{Error, Operand, Result};
use crate::rational::Rational;
use crate::sequence::{dot, same_horizon, DiscountSequence, PrizeSequence};

mod families;
mod serenity;

pub use families::{
    exponential_infinite_collapse, exponential_patience_threshold, infinite_family_patience,
};
pub use serenity::{definitional_serenity_holds, is_more_serene};

/// A pair of prize sequences that refutes a comparative statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub x: PrizeSequence,
    pub y: PrizeSequence,
}

/// Exact values of both sides at a witness. For patience these are
/// `alpha.x/alpha.y` and `beta.x/beta.y`; for serenity they are the unnormalized
/// differences `alpha.x - alpha.y` and `beta.x - beta.y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub alpha: Rational,
    pub beta: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatienceVerdict {
    pub holds: bool,
    /// Least index at which the characterizing condition fails.
    pub failing_index: Option<usize>,
    pub witness: Option<Witness>,
    pub diagnostics: Option<Diagnostics>,
}

impl PatienceVerdict {
    pub(crate) fn holds() -> Self {
        PatienceVerdict {
            holds: true,
            failing_index: None,
            witness: None,
            diagnostics: None,
        }
    }
}

/// Both sides of the patience inequality for one concrete pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitionalComparison {
    /// `alpha.x / alpha.y`
    pub alpha_ratio: Rational,
    /// `beta.x / beta.y`
    pub beta_ratio: Rational,
    /// `beta.y / alpha.y`, the normalized value of `y`
    pub normalized_y: Rational,
    /// `beta.x / alpha.x`, the normalized value of `x`
    pub normalized_x: Rational,
    pub holds: bool,
}

impl DefinitionalComparison {
    /// `alpha_ratio - beta_ratio`; positive exactly when the pair is a counterexample.
    pub fn gap(&self) -> Rational {
        &self.alpha_ratio - &self.beta_ratio
    }
}

/// Evaluates the patience inequality on `(x, y)` after checking every premise.
pub fn compare_definitional(
    alpha: &DiscountSequence,
    beta: &DiscountSequence,
    x: &PrizeSequence,
    y: &PrizeSequence,
) -> Result<DefinitionalComparison> {
    same_horizon(alpha.horizon(), beta.horizon())?;
    same_horizon(alpha.horizon(), x.horizon())?;
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
    let alpha_y = dot(alpha.values(), y.values());
    if alpha_y.is_zero() {
        return Err(Error::ZeroDiscountedSum {
            operand: Operand::Y,
            weights: Operand::Alpha,
        });
    }
    let beta_y = dot(beta.values(), y.values());
    if beta_y.is_zero() {
        return Err(Error::ZeroDiscountedSum {
            operand: Operand::Y,
            weights: Operand::Beta,
        });
    }
    // x ⊵ y and positive weights give alpha.x >= alpha.y > 0
    let alpha_x = dot(alpha.values(), x.values());
    let beta_x = dot(beta.values(), x.values());
    let alpha_ratio = &alpha_x / &alpha_y;
    let beta_ratio = &beta_x / &beta_y;
    let holds = alpha_ratio <= beta_ratio;
    Ok(DefinitionalComparison {
        normalized_y: beta_y / alpha_y,
        normalized_x: beta_x / alpha_x,
        alpha_ratio,
        beta_ratio,
        holds,
    })
}

/// `(alpha.x)/(alpha.y) <= (beta.x)/(beta.y)` for one admissible pair.
pub fn definitional_patience_holds(
    alpha: &DiscountSequence,
    beta: &DiscountSequence,
    x: &PrizeSequence,
    y: &PrizeSequence,
) -> Result<bool> {
    compare_definitional(alpha, beta, x, y).map(|c| c.holds)
}

/// Cross-multiplied adjacent-gap condition at 1-based `t < T`.
fn gap_condition(
    alpha: &DiscountSequence,
    beta: &DiscountSequence,
    t: usize,
) -> (Rational, Rational) {
    (alpha.first() * beta.gap(t), beta.first() * alpha.gap(t))
}

fn first_gap_failure(alpha: &DiscountSequence, beta: &DiscountSequence) -> Option<usize> {
    (1..alpha.horizon()).find(|&t| {
        let (lhs, rhs) = gap_condition(alpha, beta, t);
        lhs < rhs
    })
}

/// Decides whether `alpha` is more patient than `beta`.
///
/// With `T = 1` there are no adjacent gaps and the relation holds vacuously.
/// On failure the verdict carries a verified counterexample from
/// [`patience_counterexample`].
pub fn is_more_patient(
    alpha: &DiscountSequence,
    beta: &DiscountSequence,
) -> Result<PatienceVerdict> {
    same_horizon(alpha.horizon(), beta.horizon())?;
    let Some(k) = first_gap_failure(alpha, beta) else {
        return Ok(PatienceVerdict::holds());
    };
    let witness = patience_counterexample(alpha, beta)?;
    let cmp = compare_definitional(alpha, beta, &witness.x, &witness.y)?;
    Ok(PatienceVerdict {
        holds: false,
        failing_index: Some(k),
        witness: Some(witness),
        diagnostics: Some(Diagnostics {
            alpha: cmp.alpha_ratio,
            beta: cmp.beta_ratio,
        }),
    })
}

/// Builds a pair `(x, y)` on which `alpha` is strictly less patient than `beta`.
///
/// 1. If some adjacent pair has `alpha_t beta_{t+1} > alpha_{t+1} beta_t`, the unit
///    prize at `t` versus the unit prize at `t+1` works.
/// 2. Otherwise, at the least failing gap `k`, take `x = e_1 + eta e_k`,
///    `y = e_1 + eta e_{k+1}`. The violation holds for every `eta` in
///    `(0, D/E)` with `D = beta_1 (alpha_k - alpha_{k+1}) - alpha_1 (beta_k - beta_{k+1})`
///    and `E = alpha_{k+1} beta_k - alpha_k beta_{k+1}`; we use half the bound, or
///    `eta = 1` when `E = 0`.
///
/// The pair is re-checked against the definition before it is returned.
pub fn patience_counterexample(
    alpha: &DiscountSequence,
    beta: &DiscountSequence,
) -> Result<Witness> {
    same_horizon(alpha.horizon(), beta.horizon())?;
    let horizon = alpha.horizon();
    let Some(k) = first_gap_failure(alpha, beta) else {
        return Err(Error::PatienceHolds);
    };

    let swap = (1..horizon).find(|&t| alpha.at(t) * beta.at(t + 1) > alpha.at(t + 1) * beta.at(t));
    let witness = match swap {
        Some(t) => Witness {
            x: PrizeSequence::unit(horizon, t, Rational::one())?,
            y: PrizeSequence::unit(horizon, t + 1, Rational::one())?,
        },
        None => {
            // k = 1 failing means alpha_1 beta_2 > alpha_2 beta_1, caught above
            debug_assert!(k >= 2);
            let (lhs, rhs) = gap_condition(alpha, beta, k);
            let slack = rhs - lhs;
            let cross = alpha.at(k + 1) * beta.at(k) - alpha.at(k) * beta.at(k + 1);
            let eta = if cross.is_zero() {
                Rational::one()
            } else {
                slack / cross / Rational::from(2)
            };
            let mut x = PrizeSequence::unit(horizon, 1, Rational::one())?;
            let mut y = x.clone();
            x.values_mut()[k - 1] += &eta;
            y.values_mut()[k] += &eta;
            Witness { x, y }
        }
    };

    let cmp = compare_definitional(alpha, beta, &witness.x, &witness.y)
        .map_err(|e| Error::WitnessVerification(e.to_string()))?;
    if cmp.holds {
        return Err(Error::WitnessVerification(format!(
            "pair x={} y={} satisfies the patience inequality ({} <= {})",
            witness.x, witness.y, cmp.alpha_ratio, cmp.beta_ratio
        )));
    }
    Ok(witness)
}

/// Two-period test: `alpha_1/beta_1 <= alpha_2/beta_2`, cross-multiplied.
pub fn two_period_check(alpha: &DiscountSequence, beta: &DiscountSequence) -> Result<bool> {
    for h in [alpha.horizon(), beta.horizon()] {
        if h != 2 {
            return Err(Error::HorizonNotExactly {
                expected: 2,
                actual: h,
            });
        }
    }
    Ok(alpha.at(1) * beta.at(2) <= alpha.at(2) * beta.at(1))
}

/// `alpha_t / beta_t` weakly increasing in `t`.
pub fn monotone_ratio_check(alpha: &DiscountSequence, beta: &DiscountSequence) -> Result<bool> {
    same_horizon(alpha.horizon(), beta.horizon())?;
    Ok((1..alpha.horizon()).all(|t| alpha.at(t) * beta.at(t + 1) <= alpha.at(t + 1) * beta.at(t)))
}

/// A gap ratio `(beta_k - beta_s)/(alpha_k - alpha_s)`, or `+inf` when the
/// alpha gap is zero (such indices never bind the condition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapRatio {
    Finite(Rational),
    Infinite,
}

impl GapRatio {
    fn of(beta_gap: Rational, alpha_gap: &Rational) -> Self {
        if alpha_gap.is_zero() {
            GapRatio::Infinite
        } else {
            GapRatio::Finite(beta_gap / alpha_gap)
        }
    }
}

impl PartialOrd for GapRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GapRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GapRatio::Finite(a), GapRatio::Finite(b)) => a.cmp(b),
            (GapRatio::Finite(_), GapRatio::Infinite) => Ordering::Less,
            (GapRatio::Infinite, GapRatio::Finite(_)) => Ordering::Greater,
            (GapRatio::Infinite, GapRatio::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for GapRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapRatio::Finite(r) => write!(f, "{r}"),
            GapRatio::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for GapRatio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Gap ratio between any two 1-based indices `k < s`.
pub fn pair_gap_ratio(
    alpha: &DiscountSequence,
    beta: &DiscountSequence,
    k: usize,
    s: usize,
) -> GapRatio {
    GapRatio::of(beta.at(k) - beta.at(s), &(alpha.at(k) - alpha.at(s)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapComparison {
    pub t: usize,
    pub alpha_gap: Rational,
    pub beta_gap: Rational,
    pub ratio: GapRatio,
    /// `alpha_1 (beta_t - beta_{t+1})`
    pub lhs: Rational,
    /// `beta_1 (alpha_t - alpha_{t+1})`
    pub rhs: Rational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapRatioReport {
    /// Infimum of the adjacent gap ratios over `t = 1..T-1`.
    pub adjacent_inf: GapRatio,
    /// Where the infimum is attained; absent when every alpha gap is zero.
    pub inf_index: Option<usize>,
    /// Supremum of `beta_t / alpha_t` over `t = 1..T-1`.
    pub ratio_sup: Rational,
    pub sup_index: usize,
    /// `beta_1 / alpha_1`
    pub threshold: Rational,
    pub per_index: Vec<GapComparison>,
    pub condition_holds: bool,
}

pub fn gap_ratio_report(
    alpha: &DiscountSequence,
    beta: &DiscountSequence,
) -> Result<GapRatioReport> {
    same_horizon(alpha.horizon(), beta.horizon())?;
    let horizon = alpha.horizon();
    if horizon < 2 {
        return Err(Error::HorizonTooShort {
            min: 2,
            actual: horizon,
        });
    }
    let per_index: Vec<GapComparison> = (1..horizon)
        .map(|t| {
            let (lhs, rhs) = gap_condition(alpha, beta, t);
            let alpha_gap = alpha.gap(t);
            let beta_gap = beta.gap(t);
            GapComparison {
                t,
                ratio: GapRatio::of(beta_gap.clone(), &alpha_gap),
                holds: lhs >= rhs,
                alpha_gap,
                beta_gap,
                lhs,
                rhs,
            }
        })
        .collect();

    let (adjacent_inf, inf_index) = per_index
        .iter()
        .filter(|c| matches!(c.ratio, GapRatio::Finite(_)))
        .min_by(|a, b| a.ratio.cmp(&b.ratio).then(a.t.cmp(&b.t)))
        .map(|c| (c.ratio.clone(), Some(c.t)))
        .unwrap_or((GapRatio::Infinite, None));

    let (sup_index, ratio_sup) = (1..horizon)
        .map(|t| (t, beta.at(t) / alpha.at(t)))
        .fold(None, |best: Option<(usize, Rational)>, (t, v)| match best {
            Some((_, ref b)) if *b >= v => best,
            _ => Some((t, v)),
        })
        .expect("horizon >= 2");

    Ok(GapRatioReport {
        condition_holds: per_index.iter().all(|c| c.holds),
        adjacent_inf,
        inf_index,
        ratio_sup,
        sup_index,
        threshold: beta.first() / alpha.first(),
        per_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(v: &[&str]) -> DiscountSequence {
        DiscountSequence::from_strs(v).unwrap()
    }

    fn seq(v: &[&str]) -> PrizeSequence {
        PrizeSequence::from_strs(v).unwrap()
    }

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn reference_pair() -> (DiscountSequence, DiscountSequence) {
        (
            disc(&["1/2", "12/25", "91/250"]),
            disc(&["1", "2/3", "1/2"]),
        )
    }

    #[test]
    fn three_period_example_fails() {
        let (alpha, beta) = reference_pair();
        let v = is_more_patient(&alpha, &beta).unwrap();
        assert!(!v.holds);
        assert_eq!(v.failing_index, Some(2));
        let w = v.witness.unwrap();
        let cmp = compare_definitional(&alpha, &beta, &w.x, &w.y).unwrap();
        assert!(!cmp.holds);
        let d = v.diagnostics.unwrap();
        assert!(d.alpha > d.beta);
    }

    #[test]
    fn reflexive_and_trivial_horizon() {
        let (alpha, _) = reference_pair();
        assert!(is_more_patient(&alpha, &alpha).unwrap().holds);
        let one = disc(&["3"]);
        assert!(is_more_patient(&one, &disc(&["1/7"])).unwrap().holds);
    }

    #[test]
    fn exponential_two_fifths_vs_three_tenths() {
        let alpha = disc(&["1", "2/5", "4/25"]);
        let beta = disc(&["1", "3/10", "9/100"]);
        let v = is_more_patient(&alpha, &beta).unwrap();
        assert!(!v.holds);
        assert_eq!(v.failing_index, Some(2));
        let report = gap_ratio_report(&alpha, &beta).unwrap();
        assert_eq!(report.per_index[1].lhs, r("21/100"));
        assert_eq!(report.per_index[1].rhs, r("24/100"));
    }

    #[test]
    fn definitional_examples() {
        let (alpha, beta) = reference_pair();
        let cmp = compare_definitional(
            &alpha,
            &beta,
            &seq(&["1", "3/2", "1"]),
            &seq(&["1", "1", "3/2"]),
        )
        .unwrap();
        assert_eq!(cmp.alpha_ratio, r("792/763"));
        assert_eq!(cmp.beta_ratio, r("30/29"));
        assert_eq!(cmp.gap(), r("78/22127"));
        assert!(!cmp.holds);
        assert!(cmp.normalized_y > cmp.normalized_x);

        let x = seq(&["1", "1", "1"]);
        let cmp = compare_definitional(&alpha, &beta, &x, &x).unwrap();
        assert!(cmp.holds);
        assert_eq!(cmp.alpha_ratio, Rational::one());

        let a2 = disc(&["1", "1/2"]);
        let b2 = disc(&["1", "1/4"]);
        let cmp = compare_definitional(&a2, &b2, &seq(&["1", "0"]), &seq(&["0", "1"])).unwrap();
        assert_eq!(cmp.alpha_ratio, r("2"));
        assert_eq!(cmp.beta_ratio, r("4"));
        assert!(cmp.holds);
    }

    #[test]
    fn definitional_preconditions() {
        let (alpha, beta) = reference_pair();
        let check = |x: &[&str], y: &[&str]| compare_definitional(&alpha, &beta, &seq(x), &seq(y));
        assert!(matches!(
            check(&["2", "-1", "0"], &["1", "0", "0"]),
            Err(Error::Negative { .. })
        ));
        assert!(matches!(
            check(&["1", "1", "0"], &["1", "0", "0"]),
            Err(Error::UnequalSums { .. })
        ));
        assert_eq!(
            check(&["0", "0", "1"], &["1", "0", "0"]),
            Err(Error::NotDominating { index: 1 })
        );
        assert!(matches!(
            check(&["0", "0", "0"], &["0", "0", "0"]),
            Err(Error::ZeroDiscountedSum {
                operand: Operand::Y,
                weights: Operand::Alpha
            })
        ));
    }

    #[test]
    fn two_period_examples() {
        let a = disc(&["1", "1/2"]);
        let b = disc(&["1", "1/4"]);
        assert!(two_period_check(&a, &b).unwrap());
        assert!(two_period_check(&a, &a).unwrap());
        assert!(!two_period_check(&b, &a).unwrap());
        assert!(matches!(
            two_period_check(&disc(&["1"]), &disc(&["1"])),
            Err(Error::HorizonNotExactly {
                expected: 2,
                actual: 1
            })
        ));
    }

    #[test]
    fn monotone_ratio_examples() {
        let (alpha, beta) = reference_pair();
        assert!(monotone_ratio_check(&alpha, &beta).unwrap());
        assert!(monotone_ratio_check(&alpha, &alpha).unwrap());
        assert!(!monotone_ratio_check(&disc(&["1", "1/4"]), &disc(&["1", "1/2"])).unwrap());
    }

    #[test]
    fn gap_report_examples() {
        let (alpha, beta) = reference_pair();
        let rep = gap_ratio_report(&alpha, &beta).unwrap();
        assert_eq!(rep.per_index[0].ratio, GapRatio::Finite(r("50/3")));
        assert_eq!(rep.per_index[1].ratio, GapRatio::Finite(r("125/87")));
        assert_eq!(rep.threshold, r("2"));
        assert_eq!(rep.adjacent_inf, GapRatio::Finite(r("125/87")));
        assert_eq!(rep.inf_index, Some(2));
        assert!(!rep.condition_holds);

        let rep = gap_ratio_report(&alpha, &alpha).unwrap();
        assert!(rep
            .per_index
            .iter()
            .all(|c| c.ratio == GapRatio::Finite(Rational::one())));
        assert_eq!(rep.ratio_sup, Rational::one());
        assert_eq!(rep.threshold, Rational::one());

        let flat = disc(&["1", "1", "1"]);
        let rep = gap_ratio_report(&flat, &disc(&["1", "1/2", "1/3"])).unwrap();
        assert_eq!(rep.adjacent_inf, GapRatio::Infinite);
        assert_eq!(rep.inf_index, None);
        assert!(rep.condition_holds);

        assert!(matches!(
            gap_ratio_report(&disc(&["1"]), &disc(&["1"])),
            Err(Error::HorizonTooShort { .. })
        ));
    }

    #[test]
    fn counterexample_examples() {
        let (alpha, beta) = reference_pair();
        let w = patience_counterexample(&alpha, &beta).unwrap();
        assert!(!definitional_patience_holds(&alpha, &beta, &w.x, &w.y).unwrap());
        assert!(!definitional_patience_holds(
            &alpha,
            &beta,
            &seq(&["1", "3/2", "1"]),
            &seq(&["1", "1", "3/2"])
        )
        .unwrap());

        let w = patience_counterexample(&disc(&["1", "1/4"]), &disc(&["1", "1/2"])).unwrap();
        assert_eq!(w.x, seq(&["1", "0"]));
        assert_eq!(w.y, seq(&["0", "1"]));

        // eta = half of (3/100)/(3/250), frozen from an independent fractions evaluation
        let alpha = disc(&["1", "2/5", "4/25"]);
        let beta = disc(&["1", "3/10", "9/100"]);
        let w = patience_counterexample(&alpha, &beta).unwrap();
        assert_eq!(w.x, seq(&["1", "5/4", "0"]));
        assert_eq!(w.y, seq(&["1", "0", "5/4"]));
        let cmp = compare_definitional(&alpha, &beta, &w.x, &w.y).unwrap();
        assert_eq!(cmp.gap(), r("5/356"));

        assert_eq!(
            patience_counterexample(&alpha, &alpha),
            Err(Error::PatienceHolds)
        );
    }
}
