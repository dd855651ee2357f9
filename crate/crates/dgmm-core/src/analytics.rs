//! Profile and gap analytics over scored responses: per-dimension and
//! per-activity average ratings (the data behind radar charts) and the
//! applicable-count shortfall blocking a target level.

use crate::ingest::ResponseSet;
use crate::model::{MaturityModel, StatementKey};
use crate::numeric::Ratio;
use crate::rating::{
    count_applicable, passing_threshold, statement_scores, AggregationPolicy, ScoreError,
};
use serde::{Deserialize, Serialize};

/// Average aggregated rating per dimension at one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionProfile {
    pub level: u8,
    pub policy: AggregationPolicy,
    pub entries: Vec<DimensionAverage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionAverage {
    pub dimension_id: u8,
    pub dimension: String,
    pub average: Ratio,
}

/// Average aggregated rating per (activity, level) for one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityProfile {
    pub dimension_id: u8,
    pub dimension: String,
    pub policy: AggregationPolicy,
    pub rows: Vec<ActivityLevelAverage>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityLevelAverage {
    pub aid: u8,
    pub abbreviation: String,
    pub level: u8,
    pub average: Ratio,
}

/// Statements blocking a target level and the applicable-count shortfall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub target_level: u8,
    pub policy: AggregationPolicy,
    pub total_statements: u32,
    pub applicable_count: u32,
    pub passing_threshold: u32,
    /// `max(0, threshold - applicable)`; 0 when the level already passes.
    pub shortfall: u32,
    /// Non-applicable statements, weakest aggregate first.
    pub failing_statements: Vec<FailingStatement>,
    pub per_activity_failures: Vec<ActivityFailureCount>,
    pub per_dimension_failures: Vec<DimensionFailureCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailingStatement {
    pub id: String,
    pub aggregate: Ratio,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivityFailureCount {
    pub aid: u8,
    pub abbreviation: String,
    pub failures: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionFailureCount {
    pub dimension_id: u8,
    pub dimension: String,
    pub failures: u32,
}

fn cell_average(aggregates: &[Ratio]) -> Ratio {
    Ratio::mean(aggregates).unwrap_or(Ratio::ZERO)
}

/// Per-dimension mean of the aggregated statement ratings at one level.
pub fn dimension_profile(
    level: u8,
    responses: &ResponseSet,
    model: &MaturityModel,
    policy: AggregationPolicy,
) -> Result<DimensionProfile, ScoreError> {
    let scores = statement_scores(level, responses, model, policy)?;
    let mut entries = Vec::new();
    for dimension in &model.dimensions {
        let aids: Vec<u8> = model.activities_in(dimension.id).map(|a| a.aid).collect();
        let aggregates: Vec<Ratio> = scores
            .iter()
            .filter(|s| {
                let key: StatementKey = s.id.parse().expect("scores carry canonical ids");
                aids.contains(&key.aid)
            })
            .map(|s| s.aggregate)
            .collect();
        entries.push(DimensionAverage {
            dimension_id: dimension.id,
            dimension: dimension.name.clone(),
            average: cell_average(&aggregates),
        });
    }
    Ok(DimensionProfile {
        level,
        policy,
        entries,
    })
}

/// Per-activity, per-level averages for one dimension, across every
/// assessed level.
pub fn activity_profile(
    dimension_id: u8,
    responses: &ResponseSet,
    model: &MaturityModel,
    policy: AggregationPolicy,
) -> Result<ActivityProfile, ScoreError> {
    let dimension = model
        .dimension(dimension_id)
        .ok_or(ScoreError::UnknownDimension(dimension_id))?;
    let mut rows = Vec::new();
    for level in 1..=responses.max_level() {
        let scores = statement_scores(level, responses, model, policy)?;
        for activity in model.activities_in(dimension_id) {
            let aggregates: Vec<Ratio> = scores
                .iter()
                .filter(|s| {
                    let key: StatementKey = s.id.parse().expect("scores carry canonical ids");
                    key.aid == activity.aid
                })
                .map(|s| s.aggregate)
                .collect();
            rows.push(ActivityLevelAverage {
                aid: activity.aid,
                abbreviation: activity.abbreviation.clone(),
                level,
                average: cell_average(&aggregates),
            });
        }
    }
    rows.sort_by_key(|r| (r.aid, r.level));
    Ok(ActivityProfile {
        dimension_id,
        dimension: dimension.name.clone(),
        policy,
        rows,
    })
}

/// Gap analysis toward one level: which statements fall below the cutoff
/// and how many more applicable statements the threshold demands.
pub fn gap_to_level(
    target_level: u8,
    responses: &ResponseSet,
    model: &MaturityModel,
    policy: AggregationPolicy,
) -> Result<GapReport, ScoreError> {
    let scores = statement_scores(target_level, responses, model, policy)?;
    let total_statements = model.total_at_level(target_level);
    let applicable_count = count_applicable(&scores);
    let threshold = passing_threshold(total_statements, model.threshold_ratio);
    let shortfall = threshold.saturating_sub(applicable_count);

    let mut failing: Vec<(StatementKey, Ratio)> = scores
        .iter()
        .filter(|s| !s.applicable)
        .map(|s| {
            let key: StatementKey = s.id.parse().expect("scores carry canonical ids");
            (key, s.aggregate)
        })
        .collect();
    failing.sort_by(|(ka, aa), (kb, ab)| aa.cmp(ab).then(ka.cmp(kb)));

    let mut per_activity = Vec::new();
    for activity in &model.activities {
        let failures = failing.iter().filter(|(k, _)| k.aid == activity.aid).count() as u32;
        if failures > 0 {
            per_activity.push(ActivityFailureCount {
                aid: activity.aid,
                abbreviation: activity.abbreviation.clone(),
                failures,
            });
        }
    }
    let mut per_dimension = Vec::new();
    for dimension in &model.dimensions {
        let aids: Vec<u8> = model.activities_in(dimension.id).map(|a| a.aid).collect();
        let failures = failing
            .iter()
            .filter(|(k, _)| aids.contains(&k.aid))
            .count() as u32;
        if failures > 0 {
            per_dimension.push(DimensionFailureCount {
                dimension_id: dimension.id,
                dimension: dimension.name.clone(),
                failures,
            });
        }
    }

    Ok(GapReport {
        target_level,
        policy,
        total_statements,
        applicable_count,
        passing_threshold: threshold,
        shortfall,
        failing_statements: failing
            .into_iter()
            .map(|(key, aggregate)| FailingStatement {
                id: key.to_string(),
                aggregate,
            })
            .collect(),
        per_activity_failures: per_activity,
        per_dimension_failures: per_dimension,
    })
}
