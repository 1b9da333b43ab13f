//! Order properties of the patience relation over agent grids.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::patience::is_more_patient;
use crate::rational::Rational;
use crate::sequence::DiscountSequence;

use super::{InstanceGenerator, TrialConfig};

/// Largest grid for which all triples are enumerated in [`relation_property_suite`].
const EXHAUSTIVE_AGENTS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationViolation {
    pub property: String,
    pub agents: Vec<DiscountSequence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub horizon: usize,
    pub grid: u32,
    pub exhaustive: bool,
    pub agents: usize,
    pub reflexivity_checks: u64,
    pub reflexivity_violations: u64,
    /// Triples with `A >= B` and `B >= C`.
    pub transitivity_checks: u64,
    pub transitivity_violations: u64,
    /// Pairs with equal first weights related both ways.
    pub antisymmetry_checks: u64,
    pub antisymmetry_violations: u64,
    pub first_violation: Option<RelationViolation>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.reflexivity_violations == 0
            && self.transitivity_violations == 0
            && self.antisymmetry_violations == 0
    }

    pub fn violations(&self) -> u64 {
        self.reflexivity_violations + self.transitivity_violations + self.antisymmetry_violations
    }
}

/// All weakly decreasing sequences of length `horizon` with entries in `{1/g, ..., 1}`.
fn grid_agents(horizon: usize, grid: u32) -> Vec<DiscountSequence> {
    fn extend(prefix: &mut Vec<i64>, left: usize, grid: i64, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        let top = prefix.last().copied().unwrap_or(grid);
        for k in (1..=top).rev() {
            prefix.push(k);
            extend(prefix, left - 1, grid, out);
            prefix.pop();
        }
    }
    let mut numerators = Vec::new();
    extend(&mut Vec::new(), horizon, grid as i64, &mut numerators);
    numerators
        .into_iter()
        .map(|ks| {
            DiscountSequence::new(
                ks.into_iter()
                    .map(|k| Rational::frac(k, grid as i64))
                    .collect(),
            )
            .expect("decreasing by construction")
        })
        .collect()
}

fn check_agents(
    agents: &[DiscountSequence],
    horizon: usize,
    grid: u32,
    exhaustive: bool,
) -> Result<RelationReport> {
    let n = agents.len();
    let mut related = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            related[i * n + j] = is_more_patient(&agents[i], &agents[j])?.holds;
        }
    }
    let rel = |i: usize, j: usize| related[i * n + j];

    let mut report = RelationReport {
        horizon,
        grid,
        exhaustive,
        agents: n,
        reflexivity_checks: 0,
        reflexivity_violations: 0,
        transitivity_checks: 0,
        transitivity_violations: 0,
        antisymmetry_checks: 0,
        antisymmetry_violations: 0,
        first_violation: None,
    };
    let record = |report: &mut RelationReport, property: &str, idx: &[usize]| {
        if report.first_violation.is_none() {
            report.first_violation = Some(RelationViolation {
                property: property.to_owned(),
                agents: idx.iter().map(|&i| agents[i].clone()).collect(),
            });
        }
    };

    for i in 0..n {
        report.reflexivity_checks += 1;
        if !rel(i, i) {
            report.reflexivity_violations += 1;
            record(&mut report, "reflexivity", &[i]);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if agents[i].first() != agents[j].first() {
                continue;
            }
            report.antisymmetry_checks += 1;
            if rel(i, j) && rel(j, i) && agents[i] != agents[j] {
                report.antisymmetry_violations += 1;
                record(&mut report, "antisymmetry", &[i, j]);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !rel(i, j) {
                continue;
            }
            for k in 0..n {
                if rel(j, k) {
                    report.transitivity_checks += 1;
                    if !rel(i, k) {
                        report.transitivity_violations += 1;
                        record(&mut report, "transitivity", &[i, j, k]);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Every triple of agents on the grid `{1/g, ..., 1}` at horizon `T`.
pub fn exhaustive_relation_check(horizon: usize, grid: u32) -> Result<RelationReport> {
    if horizon == 0 {
        return Err(Error::EmptySequence);
    }
    if grid == 0 {
        return Err(Error::DivisionByZero);
    }
    check_agents(&grid_agents(horizon, grid), horizon, grid, true)
}

/// One report per horizon `1..=horizon_max`. Small grids are enumerated;
/// larger ones use a seeded sample of agents plus, for each sampled agent, a
/// copy rescaled to first weight 1, so equal-first-weight pairs are common.
pub fn relation_property_suite(config: &TrialConfig) -> Result<Vec<RelationReport>> {
    let grid = config.grid_denominator;
    let mut reports = Vec::new();
    for horizon in 1..=config.horizon_max {
        let all = grid_agents(horizon, grid);
        if all.len() <= EXHAUSTIVE_AGENTS {
            reports.push(check_agents(&all, horizon, grid, true)?);
            continue;
        }
        let mut generator = InstanceGenerator::new(config, (1 << 40) | horizon as u64);
        let mut agents = Vec::new();
        while agents.len() < EXHAUSTIVE_AGENTS {
            let a = generator.discount_sequence(horizon);
            let scale = a.first().recip()?;
            let b = DiscountSequence::new(a.values().iter().map(|v| v * &scale).collect())?;
            agents.push(a);
            agents.push(b);
        }
        reports.push(check_agents(&agents, horizon, grid, false)?);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        // C(g + T - 1, T)
        assert_eq!(grid_agents(2, 4).len(), 10);
        assert_eq!(grid_agents(3, 3).len(), 10);
        assert_eq!(grid_agents(3, 6).len(), 56);
    }

    #[test]
    fn small_exhaustive_grids() {
        for (t, g) in [(2, 4), (3, 3), (1, 5)] {
            let report = exhaustive_relation_check(t, g).unwrap();
            assert!(report.passed(), "{report:?}");
            assert!(report.transitivity_checks > 0);
        }
    }

    #[test]
    fn single_agent() {
        let report = exhaustive_relation_check(2, 1).unwrap();
        assert_eq!(report.agents, 1);
        assert_eq!(
            (report.reflexivity_checks, report.transitivity_checks),
            (1, 1)
        );
        assert!(report.passed());
    }
}
