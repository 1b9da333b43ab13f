//! Patience between parametric families: exponential thresholds and the
//! infinite-horizon classification.

use crate::error::{Error, Result};
use crate::family::DiscountFamily;
use crate::rational::Rational;

use super::{compare_definitional, patience_counterexample, Diagnostics, PatienceVerdict};

fn open_unit(name: &'static str, v: &Rational) -> Result<()> {
    DiscountFamily::exponential(v.clone())
        .map(|_| ())
        .map_err(|_| Error::ParameterOutOfRange {
            name,
            value: v.clone(),
            range: "(0, 1)",
        })
}

/// Adjacent gap `a^{t-1}(1 - a)` of the exponential sequence.
fn exp_gap(a: &Rational, t: usize) -> Rational {
    a.pow((t - 1) as u32) * (Rational::one() - a)
}

/// A factor `a_bar` in `(0, 1)` such that every exponential discounter with
/// `a` in `[a_bar, 1)` is more patient than the one with factor `b` at horizon `T`.
///
/// Search starts at `max((T-2)/(T-1), b)`. From `(T-2)/(T-1)` upward each gap
/// `a^{t-1}(1-a)` with `t <= T-1` is decreasing in `a`, so once the conditions
/// hold at `a_bar` they hold on all of `[a_bar, 1)`. If they fail at the start,
/// dyadic bisection toward 1 finds a passing point. The result is sound but not
/// necessarily the least such factor.
pub fn exponential_patience_threshold(b: &Rational, horizon: usize) -> Result<Rational> {
    open_unit("b", b)?;
    if horizon < 2 {
        return Err(Error::HorizonTooShort {
            min: 2,
            actual: horizon,
        });
    }
    let one = Rational::one();
    let holds = |a: &Rational| (1..horizon).all(|t| exp_gap(b, t) >= exp_gap(a, t));

    let region = Rational::frac(horizon as i64 - 2, horizon as i64 - 1);
    let start = if region > *b { region } else { b.clone() };
    if holds(&start) {
        return Ok(start);
    }

    let two = Rational::from(2);
    let (mut lo, mut hi) = (start, one.clone());
    for _ in 0..256 {
        let mid = (&lo + &hi) / &two;
        if holds(&mid) {
            hi = mid;
            if (&hi - &lo) * Rational::integer(1u64 << 20) < one {
                break;
            }
        } else {
            lo = mid;
        }
    }
    if hi == one {
        return Err(Error::Unsupported(format!(
            "no threshold found for b = {b}, T = {horizon}"
        )));
    }
    Ok(hi)
}

/// Least `n >= 0` with `q^n < c`, for `0 < q < 1` and `c > 0`.
///
/// A floating-point logarithm only seeds the search; the answer is confirmed
/// with exact powers on both sides.
fn least_power_below(q: &Rational, c: &Rational) -> usize {
    let guess = (c.approx().ln() / q.approx().ln()).ceil();
    let mut n = if guess.is_finite() && guess > 0.0 {
        guess as usize
    } else {
        0
    };
    while n > 0 && q.pow((n - 1) as u32) < *c {
        n -= 1;
    }
    while q.pow(n as u32) >= *c {
        n += 1;
    }
    n
}

/// For exponential factors `a` (Alice) and `b` (Bob) at infinite horizon,
/// the least `t` at which `(b/a)^{t-1} (1-b)/(1-a) < 1`, i.e. where the gap
/// condition breaks. Absent exactly when `a = b`.
pub fn exponential_infinite_collapse(a: &Rational, b: &Rational) -> Result<Option<usize>> {
    open_unit("a", a)?;
    open_unit("b", b)?;
    if a == b {
        return Ok(None);
    }
    if a < b {
        return Ok(Some(1));
    }
    let one = Rational::one();
    let q = b / a;
    let c = (&one - a) / (&one - b);
    Ok(Some(least_power_below(&q, &c) + 1))
}

fn qh_gap(b: &Rational, d: &Rational, t: usize) -> Rational {
    if t == 1 {
        Rational::one() - b * d
    } else {
        b * d.pow((t - 1) as u32) * (Rational::one() - d)
    }
}

/// Least failing gap index for two quasi-hyperbolic discounters at infinite horizon.
///
/// Both sequences start at 1, so the condition reads `gap_B(t) >= gap_A(t)`.
/// `t = 1` needs `b_B d_B <= b_A d_A`. For `t >= 2` it needs
/// `(d_B/d_A)^{t-1} >= b_A (1-d_A) / (b_B (1-d_B))`: with `d_B < d_A` this must
/// eventually fail, and with `d_B >= d_A` the `t = 1` and `t = 2` conditions
/// together force identical parameters.
fn quasi_hyperbolic_failure(
    (ba, da): (&Rational, &Rational),
    (bb, db): (&Rational, &Rational),
) -> Result<Option<usize>> {
    if ba == bb && da == db {
        return Ok(None);
    }
    let holds_at = |t: usize| qh_gap(bb, db, t) >= qh_gap(ba, da, t);
    if !holds_at(1) {
        return Ok(Some(1));
    }
    if !holds_at(2) {
        return Ok(Some(2));
    }
    if db >= da {
        return Err(Error::Unsupported(
            "quasi-hyperbolic classification reached an impossible case".into(),
        ));
    }
    let one = Rational::one();
    let q = db / da;
    let c = (ba * (&one - da)) / (bb * (&one - db));
    let t = least_power_below(&q, &c).max(1) + 1;
    debug_assert!(!holds_at(t) && holds_at(t - 1));
    Ok(Some(t))
}

/// Patience between two parametric families on the infinite horizon.
///
/// Exponential pairs hold only for equal factors. The quasi-hyperbolic rule
/// is derived here from the gap condition (it holds only for identical
/// parameters) and is cross-checked in tests against finite truncations.
/// On failure, the witness comes from the truncation at `T = t + 1`, where `t`
/// is the failing index; its support is finite, so it refutes the infinite
/// statement as well.
pub fn infinite_family_patience(
    alice: &DiscountFamily,
    bob: &DiscountFamily,
) -> Result<PatienceVerdict> {
    let failing = match (alice, bob) {
        (DiscountFamily::Exponential { a }, DiscountFamily::Exponential { a: b }) => {
            exponential_infinite_collapse(a, b)?
        }
        (
            DiscountFamily::QuasiHyperbolic { b: ba, d: da },
            DiscountFamily::QuasiHyperbolic { b: bb, d: db },
        ) => {
            DiscountFamily::quasi_hyperbolic(ba.clone(), da.clone())?;
            DiscountFamily::quasi_hyperbolic(bb.clone(), db.clone())?;
            quasi_hyperbolic_failure((ba, da), (bb, db))?
        }
        (DiscountFamily::Explicit(_), _) | (_, DiscountFamily::Explicit(_)) => {
            return Err(Error::Unsupported(
                "explicit sequences have a finite horizon; realize them instead".into(),
            ))
        }
        _ => {
            return Err(Error::Unsupported(
                "mixed exponential / quasi-hyperbolic pairs at infinite horizon".into(),
            ))
        }
    };

    let Some(t) = failing else {
        return Ok(PatienceVerdict::holds());
    };
    let alpha = alice.realize(t + 1)?;
    let beta = bob.realize(t + 1)?;
    let witness = patience_counterexample(&alpha, &beta)?;
    let cmp = compare_definitional(&alpha, &beta, &witness.x, &witness.y)?;
    Ok(PatienceVerdict {
        holds: false,
        failing_index: Some(t),
        witness: Some(witness),
        diagnostics: Some(Diagnostics {
            alpha: cmp.alpha_ratio,
            beta: cmp.beta_ratio,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patience::is_more_patient;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn exp(a: &str) -> DiscountFamily {
        DiscountFamily::exponential(r(a)).unwrap()
    }

    fn qh(b: &str, d: &str) -> DiscountFamily {
        DiscountFamily::quasi_hyperbolic(r(b), r(d)).unwrap()
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(
            exponential_patience_threshold(&r("1/2"), 3).unwrap(),
            r("1/2")
        );
        assert_eq!(
            exponential_patience_threshold(&r("3/10"), 2).unwrap(),
            r("3/10")
        );

        let a_bar = exponential_patience_threshold(&r("3/10"), 3).unwrap();
        assert!(a_bar > r("2/5"));
        // grid scan: the least passing a >= 1/2 on a 1/1000 grid is 7/10
        assert!(a_bar >= r("7/10") && a_bar < Rational::one());

        assert!(matches!(
            exponential_patience_threshold(&r("1"), 3),
            Err(Error::ParameterOutOfRange { .. })
        ));
        assert!(matches!(
            exponential_patience_threshold(&r("1/2"), 1),
            Err(Error::HorizonTooShort { .. })
        ));
    }

    #[test]
    fn collapse_examples() {
        assert_eq!(
            exponential_infinite_collapse(&r("1/2"), &r("1/2")).unwrap(),
            None
        );
        assert_eq!(
            exponential_infinite_collapse(&r("9/10"), &r("1/2")).unwrap(),
            Some(4)
        );
        assert_eq!(
            exponential_infinite_collapse(&r("1/2"), &r("9/10")).unwrap(),
            Some(1)
        );
        assert!(exponential_infinite_collapse(&r("0"), &r("1/2")).is_err());
    }

    #[test]
    fn collapse_matches_direct_scan() {
        for (a, b) in [
            ("99/100", "1/2"),
            ("999/1000", "998/1000"),
            ("3/4", "1/10"),
            ("2/3", "13/20"),
        ] {
            let (a, b) = (r(a), r(b));
            let t = exponential_infinite_collapse(&a, &b).unwrap().unwrap();
            let one = Rational::one();
            let q = &b / &a;
            let lhs = |t: usize| q.pow((t - 1) as u32) * (&one - &b);
            assert!(lhs(t) < &one - &a);
            assert!((1..t).all(|s| lhs(s) >= &one - &a));
        }
    }

    #[test]
    fn infinite_family_examples() {
        assert!(
            infinite_family_patience(&exp("1/2"), &exp("1/2"))
                .unwrap()
                .holds
        );
        let v = infinite_family_patience(&exp("9/10"), &exp("1/2")).unwrap();
        assert!(!v.holds);
        assert_eq!(v.failing_index, Some(4));
        let d = v.diagnostics.unwrap();
        assert!(d.alpha > d.beta);
        assert!(
            infinite_family_patience(&qh("1/2", "1/2"), &qh("1/2", "1/2"))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn infinite_family_rejections() {
        let explicit =
            DiscountFamily::Explicit(crate::DiscountSequence::from_strs(&["1"]).unwrap());
        assert!(matches!(
            infinite_family_patience(&explicit, &exp("1/2")),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            infinite_family_patience(&exp("1/2"), &qh("1/2", "1/2")),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn quasi_hyperbolic_agrees_with_truncations() {
        let grid = ["1/5", "1/2", "7/10", "9/10", "1"];
        let ds = ["1/5", "1/2", "4/5", "9/10"];
        for ba in grid {
            for bb in grid {
                for da in ds {
                    for db in ds {
                        let (fa, fb) = (qh(ba, da), qh(bb, db));
                        let v = infinite_family_patience(&fa, &fb).unwrap();
                        match v.failing_index {
                            None => {
                                for t in [2, 5, 12] {
                                    let p = is_more_patient(
                                        &fa.realize(t).unwrap(),
                                        &fb.realize(t).unwrap(),
                                    );
                                    assert!(p.unwrap().holds);
                                }
                            }
                            Some(t) => {
                                let short = is_more_patient(
                                    &fa.realize(t).unwrap(),
                                    &fb.realize(t).unwrap(),
                                );
                                let long = is_more_patient(
                                    &fa.realize(t + 1).unwrap(),
                                    &fb.realize(t + 1).unwrap(),
                                )
                                .unwrap();
                                if t > 1 {
                                    assert!(short.unwrap().holds, "{fa:?} {fb:?} t={t}");
                                }
                                assert!(!long.holds);
                                assert_eq!(long.failing_index, Some(t));
                            }
                        }
                    }
                }
            }
        }
    }
}
