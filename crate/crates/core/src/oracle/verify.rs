//! Seeded verification suites and their JSON report.
//!
//! Each trial draws from its own PRNG stream and returns its findings; the
//! report folds them in trial order, so parallel execution cannot change it.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::deterioration::{decompose, ratio_trace};
use crate::dominance::{abel_sum, dominates, is_superior, pointwise_dominates, tighten};
use crate::error::Result;
use crate::patience::{
    compare_definitional, definitional_patience_holds, gap_ratio_report, is_more_patient,
    is_more_serene, monotone_ratio_check, pair_gap_ratio, patience_counterexample,
    two_period_check, GapRatio,
};
use crate::rational::Rational;
use crate::sequence::{dot, weighted_sum, DiscountSequence};

use super::{
    patience_search, relation_property_suite, serenity_search, superiority_search_stream,
    InstanceGenerator, RelationReport, TrialConfig, PRNG_NAME, WEIGHT_DRAWS,
};

/// Random weight sequences per pair in the sandwich check.
const SANDWICH_DRAWS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Dominance,
    Serenity,
    Patience,
    Relation,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Dominance => "dominance",
            Suite::Serenity => "serenity",
            Suite::Patience => "patience",
            Suite::Relation => "relation",
            Suite::All => "all",
        }
    }

    /// Disjoint PRNG stream ranges per suite.
    fn stream(self, trial: usize) -> u64 {
        let base: u64 = match self {
            Suite::Dominance => 1,
            Suite::Serenity => 2,
            Suite::Patience => 3,
            Suite::Relation | Suite::All => 4,
        };
        (base << 32) | trial as u64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub cases: u64,
    pub violations: u64,
    pub first_violation: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    /// Definitional instances evaluated across all pairs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instances: Option<u64>,
    /// Smallest per-pair count among pairs where the search found no violation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_instances_without_violation: Option<u64>,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub prng: String,
    pub seed: u64,
    pub trials: usize,
    pub horizon_max: usize,
    pub grid_denominator: u32,
    pub instances_per_pair: usize,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn suite(&self, suite: Suite) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.suite == suite.name())
    }
}

/// Findings of one trial: `(check, None)` passed, `(check, Some(detail))` failed.
#[derive(Default)]
struct Findings {
    checks: Vec<(&'static str, Option<Value>)>,
    /// Definitional instances evaluated, and whether the search found none violating.
    search: Option<(u64, bool)>,
}

fn pass(f: &mut Findings, name: &'static str, ok: bool, detail: impl FnOnce() -> Value) {
    f.checks
        .push((name, if ok { None } else { Some(detail()) }));
}

fn assemble(suite: Suite, per_trial: Vec<Result<Findings>>) -> Result<SuiteReport> {
    let mut checks: Vec<CheckReport> = Vec::new();
    let mut instances = None::<u64>;
    let mut min_clean = None::<u64>;
    for (trial, findings) in per_trial.into_iter().enumerate() {
        let findings = findings?;
        if let Some((n, clean)) = findings.search {
            instances = Some(instances.unwrap_or(0) + n);
            if clean {
                min_clean = Some(min_clean.map_or(n, |m| m.min(n)));
            }
        }
        for (name, violation) in findings.checks {
            let idx = match checks.iter().position(|c| c.name == name) {
                Some(i) => i,
                None => {
                    checks.push(CheckReport {
                        name: name.to_owned(),
                        cases: 0,
                        violations: 0,
                        first_violation: None,
                    });
                    checks.len() - 1
                }
            };
            let check = &mut checks[idx];
            check.cases += 1;
            if let Some(detail) = violation {
                check.violations += 1;
                if check.first_violation.is_none() {
                    check.first_violation = Some(json!({ "trial": trial, "instance": detail }));
                }
            }
        }
    }
    Ok(SuiteReport {
        suite: suite.name().to_owned(),
        passed: checks.iter().all(|c| c.violations == 0),
        instances,
        min_instances_without_violation: min_clean,
        checks,
    })
}

fn run_trials(
    suite: Suite,
    config: &TrialConfig,
    f: impl Fn(u64) -> Result<Findings> + Sync,
) -> Result<SuiteReport> {
    let per_trial: Vec<Result<Findings>> = (0..config.trials)
        .into_par_iter()
        .map(|i| f(suite.stream(i)))
        .collect();
    assemble(suite, per_trial)
}

fn dominance_trial(config: &TrialConfig, stream: u64) -> Result<Findings> {
    let mut generator = InstanceGenerator::new(config, stream);
    let horizon = generator.horizon(config.horizon_max);
    let mode = generator.rng().random_range(0..3u8);
    let (x, y) = match mode {
        0 => generator.dominating_pair(horizon),
        1 => {
            let (x, y) = generator.signed_dominating_numerators(horizon);
            (generator.to_sequence(&x), generator.to_sequence(&y))
        }
        _ => (
            generator.signed_sequence(horizon),
            generator.signed_sequence(horizon),
        ),
    };
    let pair = || json!({ "x": &x, "y": &y });
    let mut f = Findings::default();

    let verdict = dominates(&x, &y)?;
    let weights_config = TrialConfig {
        trials: WEIGHT_DRAWS,
        ..*config
    };
    let oracle = superiority_search_stream(&x, &y, &weights_config, stream)?;
    pass(
        &mut f,
        "superiority_matches_dominance",
        oracle.is_none() == verdict.holds,
        || json!({ "x": &x, "y": &y, "dominates": verdict.holds, "oracle_weights": &oracle }),
    );
    if let Some(w) = &verdict.witness_weights {
        let strict = weighted_sum(w, &x)? < weighted_sum(w, &y)?;
        let p = verdict.failure_index.expect("failure index with witness");
        let ps = (x.partial_sums(), y.partial_sums());
        let least = (0..p - 1).all(|i| ps.0[i] >= ps.1[i]);
        pass(
            &mut f,
            "step_witness_strict_and_least",
            strict && least,
            pair,
        );
    }
    pass(
        &mut f,
        "superior_matches_dominates",
        is_superior(&x, &y)? == verdict,
        pair,
    );
    if pointwise_dominates(&x, &y)? {
        pass(&mut f, "pointwise_implies_dominance", verdict.holds, pair);
    }
    pass(
        &mut f,
        "abel_identity",
        abel_sum(&x, &y)? == dot(x.values(), y.values()),
        pair,
    );

    if verdict.holds {
        let z = tighten(&x, &y)?;
        let below = x.values().iter().zip(z.values()).all(|(a, b)| b <= a);
        let total = z.total() == y.total();
        let still = dominates(&z, &y)?.holds;
        pass(
            &mut f,
            "tighten_postconditions",
            below && total && still,
            || json!({ "x": &x, "y": &y, "tightened": &z }),
        );
        let mut sandwich = true;
        for _ in 0..SANDWICH_DRAWS {
            let w = generator.weight_sequence(horizon);
            let (wx, wz, wy) = (
                weighted_sum(&w, &x)?,
                weighted_sum(&w, &z)?,
                weighted_sum(&w, &y)?,
            );
            sandwich &= wx >= wz && wz >= wy;
        }
        pass(
            &mut f,
            "tighten_sandwich",
            sandwich,
            || json!({ "x": &x, "y": &y, "tightened": &z }),
        );
    }

    if mode == 0 {
        let chain = decompose(&x, &y)?;
        let seqs = chain.sequences()?;
        let ends = seqs.last() == Some(&y);
        let mut monotone = true;
        for w in seqs.windows(2) {
            monotone &= dominates(&w[0], &w[1])?.holds && dominates(&w[1], &y)?.holds;
        }
        let differing = x
            .values()
            .iter()
            .zip(y.values())
            .filter(|(a, b)| a != b)
            .count();
        let short = chain.steps.len() <= differing;
        pass(
            &mut f,
            "decompose_folds_back",
            ends && monotone && short,
            || json!({ "x": &x, "y": &y, "steps": &chain.steps }),
        );
    }
    Ok(f)
}

/// Patient-by-construction and sign-shifted pairs on top of the generic ones.
fn serenity_pair(
    generator: &mut InstanceGenerator,
    horizon: usize,
) -> (DiscountSequence, DiscountSequence) {
    match generator.rng().random_range(0..3u8) {
        0 => generator.discount_pair(horizon),
        mode => {
            let alpha = generator.discount_sequence(horizon);
            let w = generator.weight_sequence(horizon);
            let mut beta: Vec<Rational> = alpha
                .values()
                .iter()
                .zip(w.values())
                .map(|(a, b)| a + b)
                .collect();
            if mode == 2 {
                // shift down by a fraction of the last weight: differences stay decreasing
                let g = generator.grid() as i64;
                let u = Rational::frac(generator.rng().random_range(1..g.max(2)), g.max(2));
                let shift = beta.last().expect("non-empty") * u;
                beta.iter_mut().for_each(|b| *b -= &shift);
            }
            (
                alpha,
                DiscountSequence::new(beta).expect("positive and decreasing"),
            )
        }
    }
}

fn serenity_trial(config: &TrialConfig, instances: usize, stream: u64) -> Result<Findings> {
    let mut generator = InstanceGenerator::new(config, stream);
    let horizon = generator.horizon(config.horizon_max);
    let (alpha, beta) = serenity_pair(&mut generator, horizon);
    let pair = || json!({ "alpha": &alpha, "beta": &beta });
    let mut f = Findings::default();

    let verdict = is_more_serene(&alpha, &beta)?;
    let search_config = TrialConfig {
        trials: instances,
        ..*config
    };
    let equal = serenity_search(&alpha, &beta, &search_config, stream, true)?;
    f.search = Some((equal.instances, equal.holds()));
    pass(
        &mut f,
        "characterization_matches_definition",
        verdict.holds == equal.holds(),
        || json!({ "alpha": &alpha, "beta": &beta, "characterization": &verdict, "oracle": &equal }),
    );
    let free = serenity_search(&alpha, &beta, &search_config, stream, false)?;
    pass(
        &mut f,
        "characterization_matches_definition_without_equal_totals",
        verdict.holds == free.holds(),
        || json!({ "alpha": &alpha, "beta": &beta, "characterization": &verdict, "oracle": &free }),
    );
    let decreasing =
        (1..horizon).all(|t| beta.at(t) - alpha.at(t) >= beta.at(t + 1) - alpha.at(t + 1));
    pass(
        &mut f,
        "decreasing_difference_matches_definition",
        decreasing == equal.holds(),
        pair,
    );

    if let Some(w) = &verdict.witness {
        let lhs = dot(alpha.values(), w.x.values()) - dot(alpha.values(), w.y.values());
        let rhs = dot(beta.values(), w.x.values()) - dot(beta.values(), w.y.values());
        let refutes = dominates(&w.x, &w.y)?.holds && lhs > rhs;
        pass(
            &mut f,
            "witness_refutes",
            refutes,
            || json!({ "alpha": &alpha, "beta": &beta, "witness": w }),
        );
    }
    if alpha.first() == beta.first() && verdict.holds {
        pass(&mut f, "equal_first_collapse", alpha == beta, pair);
    }
    Ok(f)
}

fn patience_trial(config: &TrialConfig, instances: usize, stream: u64) -> Result<Findings> {
    let mut generator = InstanceGenerator::new(config, stream);
    let horizon = generator.horizon(config.horizon_max);
    let (alpha, beta) = generator.discount_pair(horizon);
    let pair = || json!({ "alpha": &alpha, "beta": &beta });
    let mut f = Findings::default();

    let verdict = is_more_patient(&alpha, &beta)?;
    let search_config = TrialConfig {
        trials: instances,
        ..*config
    };
    let oracle = patience_search(&alpha, &beta, &search_config, stream)?;
    f.search = Some((oracle.instances, oracle.holds()));
    pass(
        &mut f,
        "characterization_matches_definition",
        verdict.holds == oracle.holds(),
        || json!({ "alpha": &alpha, "beta": &beta, "characterization": &verdict, "oracle": &oracle }),
    );
    if let Some(w) = &oracle.violation {
        let refutes = !definitional_patience_holds(&alpha, &beta, &w.x, &w.y)?;
        pass(
            &mut f,
            "oracle_violation_confirmed",
            refutes,
            || json!({ "alpha": &alpha, "beta": &beta, "witness": w }),
        );
    }
    if !verdict.holds {
        let ok = match patience_counterexample(&alpha, &beta) {
            Ok(w) => !compare_definitional(&alpha, &beta, &w.x, &w.y)?.holds,
            Err(_) => false,
        };
        pass(&mut f, "counterexample_verified", ok, pair);
    }
    if verdict.holds {
        pass(
            &mut f,
            "monotone_ratio_rule",
            monotone_ratio_check(&alpha, &beta)?,
            pair,
        );
    }
    if alpha.first() == beta.first() {
        let gaps = (1..horizon).all(|t| beta.gap(t) >= alpha.gap(t));
        pass(&mut f, "equal_first_gap_rule", gaps == verdict.holds, pair);
    }
    if horizon == 2 {
        pass(
            &mut f,
            "two_period_equivalence",
            two_period_check(&alpha, &beta)? == verdict.holds,
            pair,
        );
    }
    if horizon >= 2 {
        let report = gap_ratio_report(&alpha, &beta)?;
        let mut mediant = true;
        for k in 1..horizon {
            for s in k + 1..=horizon {
                let ratio = pair_gap_ratio(&alpha, &beta, k, s);
                let adjacent: Vec<GapRatio> = (k..s)
                    .map(|t| pair_gap_ratio(&alpha, &beta, t, t + 1))
                    .collect();
                let lo = adjacent.iter().min().expect("k < s");
                let hi = adjacent.iter().max().expect("k < s");
                mediant &= *lo <= ratio && ratio <= *hi;
            }
        }
        pass(&mut f, "pair_ratio_within_adjacent_range", mediant, pair);
        if report.condition_holds {
            let threshold = GapRatio::Finite(report.threshold.clone());
            pass(
                &mut f,
                "adjacent_ratios_above_threshold",
                report.adjacent_inf >= threshold,
                pair,
            );
        }
    }

    let (x, y) = generator.dominating_pair(horizon);
    if !y.values().iter().all(Rational::is_zero) {
        let chain = decompose(&x, &y)?;
        let trace = ratio_trace(&alpha, &beta, &chain)?;
        let decreasing = trace.windows(2).all(|w| w[0] >= w[1]);
        if verdict.holds {
            pass(
                &mut f,
                "ratio_trace_decreasing_when_patient",
                decreasing,
                || json!({ "alpha": &alpha, "beta": &beta, "x": &x, "y": &y, "trace": &trace }),
            );
        }
        let end_to_end = definitional_patience_holds(&alpha, &beta, &x, &y)?;
        let ends = trace.first() >= trace.last();
        pass(
            &mut f,
            "ratio_trace_endpoints_match_definition",
            end_to_end == ends,
            || json!({ "alpha": &alpha, "beta": &beta, "x": &x, "y": &y, "trace": &trace }),
        );
    }
    Ok(f)
}

fn relation_suite(config: &TrialConfig) -> Result<SuiteReport> {
    let reports = relation_property_suite(config)?;
    let tally = |name: &str, f: fn(&RelationReport) -> (u64, u64)| {
        let (cases, violations) = reports
            .iter()
            .map(f)
            .fold((0, 0), |acc, (c, v)| (acc.0 + c, acc.1 + v));
        let first_violation = reports
            .iter()
            .filter_map(|r| r.first_violation.as_ref())
            .find(|v| name.starts_with(v.property.as_str()))
            .map(|v| json!(v));
        CheckReport {
            name: name.to_owned(),
            cases,
            violations,
            first_violation,
        }
    };
    let checks = vec![
        tally("reflexivity", |r| {
            (r.reflexivity_checks, r.reflexivity_violations)
        }),
        tally("transitivity", |r| {
            (r.transitivity_checks, r.transitivity_violations)
        }),
        tally("antisymmetry_equal_first", |r| {
            (r.antisymmetry_checks, r.antisymmetry_violations)
        }),
    ];
    Ok(SuiteReport {
        suite: Suite::Relation.name().to_owned(),
        passed: reports.iter().all(|r| r.passed()),
        instances: None,
        min_instances_without_violation: None,
        checks,
    })
}

/// Runs one suite, or all of them in a fixed order.
///
/// `instances_per_pair` bounds the definitional search for each discounter pair
/// in the serenity and patience suites; the search stops at the first violation.
pub fn verify(
    suite: Suite,
    config: &TrialConfig,
    instances_per_pair: usize,
) -> Result<VerifyReport> {
    let suites = match suite {
        Suite::All => vec![
            Suite::Dominance,
            Suite::Serenity,
            Suite::Patience,
            Suite::Relation,
        ],
        one => vec![one],
    };
    let mut reports = Vec::new();
    for s in suites {
        reports.push(match s {
            Suite::Dominance => run_trials(s, config, |stream| dominance_trial(config, stream))?,
            Suite::Serenity => run_trials(s, config, |stream| {
                serenity_trial(config, instances_per_pair, stream)
            })?,
            Suite::Patience => run_trials(s, config, |stream| {
                patience_trial(config, instances_per_pair, stream)
            })?,
            Suite::Relation | Suite::All => relation_suite(config)?,
        });
    }
    Ok(VerifyReport {
        prng: PRNG_NAME.to_owned(),
        seed: config.seed,
        trials: config.trials,
        horizon_max: config.horizon_max,
        grid_denominator: config.grid_denominator,
        instances_per_pair,
        passed: reports.iter().all(|r| r.passed),
        suites: reports,
    })
}
