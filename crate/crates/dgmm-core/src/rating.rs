//! Scoring engine: performance-scale mapping, multi-respondent aggregation,
//! applicability counting, passing thresholds, and maturity-level
//! determination.
//!
//! All operations are pure functions of immutable inputs; levels may be
//! evaluated concurrently and results do not depend on evaluation order.

use crate::ingest::ResponseSet;
use crate::model::MaturityModel;
use crate::numeric::Ratio;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// An ordinal performance rating: 0 is the explicit "not applicable" mark
/// (never a missing-data placeholder), 1..=4 express increasing extent of
/// applicability.
#[derive(Debug, Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Rating(u8);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rating out of range: {0} (expected 0..=4)")]
pub struct InvalidRating(pub i64);

impl Rating {
    pub const NOT_APPLICABLE: Rating = Rating(0);
    pub const MAX: Rating = Rating(4);

    pub fn new(value: u8) -> Result<Rating, InvalidRating> {
        if value <= 4 {
            Ok(Rating(value))
        } else {
            Err(InvalidRating(value as i64))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn is_not_applicable(self) -> bool {
        self.0 == 0
    }
}

impl TryFrom<u8> for Rating {
    type Error = InvalidRating;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Rating::new(value)
    }
}

impl From<Rating> for u8 {
    fn from(r: Rating) -> u8 {
        r.0
    }
}

/// How a panel of ratings for one statement collapses to a single value.
///
/// `MedianLow` is the default: ordinal data, conservative on ties (an evenly
/// split panel does not certify applicability). `Mean` reproduces
/// response-average figures.
#[derive(Debug, Copy, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum AggregationPolicy {
    #[default]
    MedianLow,
    Mean,
}

impl fmt::Display for AggregationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AggregationPolicy::MedianLow => write!(f, "median-low"),
            AggregationPolicy::Mean => write!(f, "mean"),
        }
    }
}

impl FromStr for AggregationPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "median-low" => Ok(AggregationPolicy::MedianLow),
            "mean" => Ok(AggregationPolicy::Mean),
            other => Err(format!(
                "unknown aggregation policy {other:?} (expected median-low or mean)"
            )),
        }
    }
}

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("cannot aggregate an empty rating list")]
    EmptyRatings,
    #[error("extent of applicability {0} outside 0..=100")]
    PercentOutOfRange(f64),
    #[error("unknown level {0}")]
    UnknownLevel(u8),
    #[error("unknown dimension {0}")]
    UnknownDimension(u8),
    #[error("level {level} not assessed (responses cover levels 1..={bound})")]
    LevelNotAssessed { level: u8, bound: u8 },
    #[error("coverage gap at level {level}: missing {}", .missing.join(", "))]
    Coverage { level: u8, missing: Vec<String> },
}

/// Maps an extent of applicability to a rating. `None` is the explicit
/// not-applicable mark. The percentage bands are half-open:
/// `[80, 100] -> 4`, `[66.7, 80) -> 3`, `[33.3, 66.7) -> 2`, `[0, 33.3) -> 1`.
pub fn percentage_to_rating(extent: Option<f64>) -> Result<Rating, ScoreError> {
    let Some(percent) = extent else {
        return Ok(Rating::NOT_APPLICABLE);
    };
    if !(0.0..=100.0).contains(&percent) {
        return Err(ScoreError::PercentOutOfRange(percent));
    }
    let value = if percent >= 80.0 {
        4
    } else if percent >= 66.7 {
        3
    } else if percent >= 33.3 {
        2
    } else {
        1
    };
    Ok(Rating(value))
}

/// Collapses one statement's panel of ratings into an exact aggregate.
pub fn aggregate_ratings(ratings: &[Rating], policy: AggregationPolicy) -> Result<Ratio, ScoreError> {
    if ratings.is_empty() {
        return Err(ScoreError::EmptyRatings);
    }
    match policy {
        AggregationPolicy::MedianLow => {
            let mut sorted: Vec<u8> = ratings.iter().map(|r| r.value()).collect();
            sorted.sort_unstable();
            // lower median: exact median for odd counts, the smaller of the
            // two central elements for even counts
            Ok(Ratio::from_int(sorted[(sorted.len() - 1) / 2] as i64))
        }
        AggregationPolicy::Mean => {
            let sum: i64 = ratings.iter().map(|r| r.value() as i64).sum();
            Ok(Ratio::new(sum, ratings.len() as i64))
        }
    }
}

/// Passing threshold for a level: `total * ratio` rounded half-up to the
/// nearest integer.
pub fn passing_threshold(total_statements: u32, threshold_ratio: f64) -> u32 {
    (total_statements as f64 * threshold_ratio + 0.5).floor() as u32
}

/// Scoring result for one statement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatementScore {
    pub id: String,
    /// Panel ratings in sorted-respondent order.
    pub ratings: Vec<Rating>,
    pub aggregate: Ratio,
    pub applicable: bool,
}

/// Scoring result for one maturity level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelScore {
    pub level: u8,
    pub total_statements: u32,
    pub applicable_count: u32,
    pub passing_threshold: u32,
    pub passed: bool,
    pub statement_scores: Vec<StatementScore>,
}

/// Outcome of a full maturity determination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaturityResult {
    /// Highest assessed level whose applicable count met its threshold;
    /// 0 when no level passed.
    pub gml: u8,
    /// Highest level the responses cover.
    pub determination_bound: u8,
    pub warnings: Vec<String>,
    pub level_scores: Vec<LevelScore>,
}

/// Aggregates every statement of a level, in canonical statement order.
pub fn statement_scores(
    level: u8,
    responses: &ResponseSet,
    model: &MaturityModel,
    policy: AggregationPolicy,
) -> Result<Vec<StatementScore>, ScoreError> {
    if model.level_name(level).is_none() {
        return Err(ScoreError::UnknownLevel(level));
    }
    if level > responses.max_level() {
        return Err(ScoreError::LevelNotAssessed {
            level,
            bound: responses.max_level(),
        });
    }
    let cutoff = model.applicability_cutoff as i64;
    let mut scores = Vec::new();
    let mut missing = Vec::new();
    for statement in model.statements_at(level) {
        match responses.ratings_for(statement.key()) {
            Some(ratings) => {
                let aggregate = aggregate_ratings(ratings, policy)?;
                scores.push(StatementScore {
                    id: statement.id(),
                    ratings: ratings.to_vec(),
                    applicable: aggregate >= cutoff,
                    aggregate,
                });
            }
            None => missing.push(statement.id()),
        }
    }
    if !missing.is_empty() {
        return Err(ScoreError::Coverage { level, missing });
    }
    Ok(scores)
}

/// Number of applicable statements among the scores.
pub fn count_applicable(scores: &[StatementScore]) -> u32 {
    scores.iter().filter(|s| s.applicable).count() as u32
}

/// Scores one level end to end.
pub fn evaluate_level(
    level: u8,
    responses: &ResponseSet,
    model: &MaturityModel,
    policy: AggregationPolicy,
) -> Result<LevelScore, ScoreError> {
    let scores = statement_scores(level, responses, model, policy)?;
    let total_statements = model.total_at_level(level);
    let applicable_count = count_applicable(&scores);
    let threshold = passing_threshold(total_statements, model.threshold_ratio);
    Ok(LevelScore {
        level,
        total_statements,
        applicable_count,
        passing_threshold: threshold,
        passed: applicable_count >= threshold,
        statement_scores: scores,
    })
}

/// Determines the maturity level over every assessed level.
///
/// The achieved level is the highest assessed level whose applicable count
/// met its threshold, with no contiguity requirement; a warning is emitted
/// whenever a level below the achieved one failed, since a bottom-up reading
/// would assume contiguous passes.
pub fn determine_maturity(
    responses: &ResponseSet,
    model: &MaturityModel,
    policy: AggregationPolicy,
) -> Result<MaturityResult, ScoreError> {
    let bound = responses.max_level().min(model.max_level());
    let mut level_scores = Vec::new();
    for level in 1..=bound {
        level_scores.push(evaluate_level(level, responses, model, policy)?);
    }
    let gml = level_scores
        .iter()
        .filter(|s| s.passed)
        .map(|s| s.level)
        .max()
        .unwrap_or(0);

    let mut warnings = Vec::new();
    if gml == 0 {
        warnings.push("no level passed".to_string());
    } else {
        let failed_below: Vec<u8> = level_scores
            .iter()
            .filter(|s| s.level < gml && !s.passed)
            .map(|s| s.level)
            .collect();
        if !failed_below.is_empty() {
            let list = failed_below
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            warnings.push(format!(
                "non-contiguous pass profile: level(s) {list} failed below achieved level {gml}"
            ));
        }
    }
    if bound < model.max_level() {
        warnings.push(format!("determination truncated at level {bound}"));
    }

    Ok(MaturityResult {
        gml,
        determination_bound: bound,
        warnings,
        level_scores,
    })
}
