//! Maturity-model catalog: the schema for assessable models, structural
//! validation, and the bundled Digital Game Maturity Model (DGMM) instance.
//!
//! A model is data, not code: levels, dimensions, activities, statements,
//! and the threshold policy all live in a JSON document (see
//! `data/dgmm.json` for the bundled instance). Models are immutable after
//! successful validation and safe to share across threads.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use thiserror::Error;

/// One maturity level; ordinals are contiguous from 1 in ascending maturity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub ordinal: u8,
    pub name: String,
}

/// A grouping of process activities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimension {
    pub id: u8,
    pub name: String,
}

/// A process activity, owned by exactly one dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Activity {
    pub aid: u8,
    pub abbreviation: String,
    pub full_name: String,
    pub dimension_id: u8,
}

/// One assessable questionnaire statement, addressed positionally by
/// (level, activity, ordinal).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statement {
    pub level: u8,
    pub aid: u8,
    pub ordinal: u16,
    pub text: String,
}

impl Statement {
    pub fn key(&self) -> StatementKey {
        StatementKey {
            level: self.level,
            aid: self.aid,
            ordinal: self.ordinal,
        }
    }

    /// Canonical identifier, e.g. `S.3.9.5`.
    pub fn id(&self) -> String {
        self.key().to_string()
    }
}

/// Positional statement address. Canonical identifiers are always generated
/// from the position, never parsed from a source document's printed labels.
#[derive(Debug, Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StatementKey {
    pub level: u8,
    pub aid: u8,
    pub ordinal: u16,
}

impl fmt::Display for StatementKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S.{}.{}.{}", self.level, self.aid, self.ordinal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid statement id {0:?} (expected S.<level>.<activity>.<ordinal>)")]
pub struct InvalidStatementId(pub String);

impl FromStr for StatementKey {
    type Err = InvalidStatementId;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || InvalidStatementId(s.to_string());
        let mut parts = s.split('.');
        if parts.next() != Some("S") {
            return Err(bad());
        }
        let level = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let aid = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let ordinal = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(StatementKey {
            level,
            aid,
            ordinal,
        })
    }
}

fn default_threshold_ratio() -> f64 {
    0.8
}

fn default_applicability_cutoff() -> u8 {
    3
}

/// An assessable maturity model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaturityModel {
    pub name: String,
    /// Fraction of a level's statements that must be applicable for the
    /// level to pass; in (0, 1].
    #[serde(default = "default_threshold_ratio")]
    pub threshold_ratio: f64,
    /// Minimum aggregated rating for a statement to count as applicable.
    #[serde(default = "default_applicability_cutoff")]
    pub applicability_cutoff: u8,
    /// When set, validation additionally checks the statement-count matrix
    /// against the reference DGMM framework cell by cell.
    #[serde(default)]
    pub strict_dgmm: bool,
    pub levels: Vec<Level>,
    pub dimensions: Vec<Dimension>,
    pub activities: Vec<Activity>,
    pub statements: Vec<Statement>,
}

/// Reference statement-count matrix of the DGMM framework, row per level
/// (Ad-Hoc..Optimized), column per activity (aid 1..18).
pub const DGMM_COUNT_MATRIX: [[u8; 18]; 5] = [
    [2, 1, 3, 1, 1, 2, 1, 2, 2, 1, 2, 2, 2, 2, 3, 2, 1, 1],
    [5, 2, 4, 2, 2, 3, 4, 3, 3, 2, 3, 3, 3, 3, 3, 2, 3, 1],
    [4, 3, 4, 2, 3, 4, 3, 3, 5, 2, 2, 3, 4, 2, 3, 3, 3, 1],
    [4, 4, 3, 4, 3, 4, 2, 3, 4, 2, 4, 3, 4, 2, 2, 3, 2, 1],
    [4, 4, 3, 4, 3, 4, 2, 3, 4, 2, 4, 3, 4, 2, 2, 3, 1, 1],
];

/// Per-level statement totals of the DGMM framework.
pub const DGMM_LEVEL_TOTALS: [u32; 5] = [31, 51, 54, 54, 53];

static BUILTIN: OnceLock<MaturityModel> = OnceLock::new();

/// Error raised by model loading.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid model: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// One structural-invariant violation. Violations are data: validation
/// collects all of them instead of stopping at the first.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoLevels,
    NonContiguousLevels { found: Vec<u8> },
    DuplicateLevelName(String),
    NoDimensions,
    DuplicateDimensionId(u8),
    NoActivities,
    DuplicateActivityId(u8),
    UnknownDimension { aid: u8, dimension_id: u8 },
    UnknownActivity { statement: String, aid: u8 },
    UnknownLevel { statement: String, level: u8 },
    DuplicateStatementId(String),
    NonContiguousOrdinals { level: u8, aid: u8 },
    ThresholdOutOfRange(f64),
    CutoffOutOfRange(u8),
    StrictShape(String),
    CountMismatch {
        level_name: String,
        activity: String,
        expected: u8,
        found: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoLevels => write!(f, "no levels"),
            Violation::NonContiguousLevels { found } => {
                write!(f, "level ordinals must be contiguous from 1, found {found:?}")
            }
            Violation::DuplicateLevelName(name) => write!(f, "duplicate level name {name:?}"),
            Violation::NoDimensions => write!(f, "no dimensions"),
            Violation::DuplicateDimensionId(id) => write!(f, "duplicate dimension id {id}"),
            Violation::NoActivities => write!(f, "no activities"),
            Violation::DuplicateActivityId(aid) => write!(f, "duplicate activity id {aid}"),
            Violation::UnknownDimension { aid, dimension_id } => {
                write!(f, "activity {aid} references unknown dimension {dimension_id}")
            }
            Violation::UnknownActivity { statement, aid } => {
                write!(f, "statement {statement} references unknown activity {aid}")
            }
            Violation::UnknownLevel { statement, level } => {
                write!(f, "statement {statement} references unknown level {level}")
            }
            Violation::DuplicateStatementId(id) => write!(f, "duplicate statement id {id}"),
            Violation::NonContiguousOrdinals { level, aid } => write!(
                f,
                "statement ordinals at (level {level}, activity {aid}) must be contiguous from 1"
            ),
            Violation::ThresholdOutOfRange(ratio) => {
                write!(f, "threshold_ratio {ratio} outside (0, 1]")
            }
            Violation::CutoffOutOfRange(cutoff) => {
                write!(f, "applicability_cutoff {cutoff} outside 1..=4")
            }
            Violation::StrictShape(msg) => write!(f, "strict model shape: {msg}"),
            Violation::CountMismatch {
                level_name,
                activity,
                expected,
                found,
            } => write!(
                f,
                "count mismatch at ({level_name}, {activity}): expected {expected}, found {found}"
            ),
        }
    }
}

impl MaturityModel {
    /// The bundled DGMM: five levels, four dimensions, eighteen activities,
    /// 243 statements.
    pub fn builtin() -> &'static MaturityModel {
        BUILTIN.get_or_init(|| {
            let model: MaturityModel = serde_json::from_str(include_str!("../data/dgmm.json"))
                .expect("bundled model parses");
            let violations = model.validate();
            assert!(violations.is_empty(), "bundled model is valid: {violations:?}");
            model
        })
    }

    /// Parses and validates a model document.
    pub fn from_json_str(data: &str) -> Result<MaturityModel, ModelError> {
        let model: MaturityModel =
            serde_json::from_str(data).map_err(|e| ModelError::Parse(e.to_string()))?;
        let violations = model.validate();
        if violations.is_empty() {
            Ok(model)
        } else {
            Err(ModelError::Invalid(violations))
        }
    }

    pub fn from_json_reader(reader: impl std::io::Read) -> Result<MaturityModel, ModelError> {
        let model: MaturityModel =
            serde_json::from_reader(reader).map_err(|e| ModelError::Parse(e.to_string()))?;
        let violations = model.validate();
        if violations.is_empty() {
            Ok(model)
        } else {
            Err(ModelError::Invalid(violations))
        }
    }

    /// Canonical serialization; loading it back yields an equal model.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("model serializes");
        out.push('\n');
        out
    }

    /// Checks every structural invariant; an empty list means the model is
    /// valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();

        if self.levels.is_empty() {
            violations.push(Violation::NoLevels);
        } else {
            let found: Vec<u8> = self.levels.iter().map(|l| l.ordinal).collect();
            let expected: Vec<u8> = (1..=self.levels.len() as u8).collect();
            if found != expected {
                violations.push(Violation::NonContiguousLevels { found });
            }
            let mut names = BTreeSet::new();
            for level in &self.levels {
                if !names.insert(level.name.as_str()) {
                    violations.push(Violation::DuplicateLevelName(level.name.clone()));
                }
            }
        }

        if self.dimensions.is_empty() {
            violations.push(Violation::NoDimensions);
        }
        let mut dimension_ids = BTreeSet::new();
        for dim in &self.dimensions {
            if !dimension_ids.insert(dim.id) {
                violations.push(Violation::DuplicateDimensionId(dim.id));
            }
        }

        if self.activities.is_empty() {
            violations.push(Violation::NoActivities);
        }
        let mut activity_ids = BTreeSet::new();
        for activity in &self.activities {
            if !activity_ids.insert(activity.aid) {
                violations.push(Violation::DuplicateActivityId(activity.aid));
            }
            if !dimension_ids.contains(&activity.dimension_id) {
                violations.push(Violation::UnknownDimension {
                    aid: activity.aid,
                    dimension_id: activity.dimension_id,
                });
            }
        }

        let level_ordinals: BTreeSet<u8> = self.levels.iter().map(|l| l.ordinal).collect();
        let mut seen = BTreeSet::new();
        let mut cells: BTreeMap<(u8, u8), Vec<u16>> = BTreeMap::new();
        for statement in &self.statements {
            let key = statement.key();
            if !seen.insert(key) {
                violations.push(Violation::DuplicateStatementId(key.to_string()));
            }
            if !activity_ids.contains(&statement.aid) {
                violations.push(Violation::UnknownActivity {
                    statement: key.to_string(),
                    aid: statement.aid,
                });
            }
            if !level_ordinals.contains(&statement.level) {
                violations.push(Violation::UnknownLevel {
                    statement: key.to_string(),
                    level: statement.level,
                });
            }
            cells
                .entry((statement.level, statement.aid))
                .or_default()
                .push(statement.ordinal);
        }
        for ((level, aid), mut ordinals) in cells {
            ordinals.sort_unstable();
            let contiguous = ordinals
                .iter()
                .enumerate()
                .all(|(i, &o)| o == i as u16 + 1);
            if !contiguous {
                violations.push(Violation::NonContiguousOrdinals { level, aid });
            }
        }

        if !(self.threshold_ratio > 0.0 && self.threshold_ratio <= 1.0) {
            violations.push(Violation::ThresholdOutOfRange(self.threshold_ratio));
        }
        if !(1..=4).contains(&self.applicability_cutoff) {
            violations.push(Violation::CutoffOutOfRange(self.applicability_cutoff));
        }

        if self.strict_dgmm {
            self.check_dgmm_counts(&mut violations);
        }

        violations
    }

    fn check_dgmm_counts(&self, violations: &mut Vec<Violation>) {
        if self.levels.len() != 5 {
            violations.push(Violation::StrictShape(format!(
                "expected 5 levels, found {}",
                self.levels.len()
            )));
            return;
        }
        let aids: BTreeSet<u8> = self.activities.iter().map(|a| a.aid).collect();
        if aids != (1..=18).collect() {
            violations.push(Violation::StrictShape(
                "expected activity ids 1..=18".to_string(),
            ));
            return;
        }
        for level in &self.levels {
            for activity in &self.activities {
                let expected = DGMM_COUNT_MATRIX[level.ordinal as usize - 1]
                    [activity.aid as usize - 1];
                let found = self
                    .statements
                    .iter()
                    .filter(|s| s.level == level.ordinal && s.aid == activity.aid)
                    .count();
                if found != expected as usize {
                    violations.push(Violation::CountMismatch {
                        level_name: level.name.clone(),
                        activity: activity.abbreviation.clone(),
                        expected,
                        found,
                    });
                }
            }
        }
    }

    /// Highest level ordinal.
    pub fn max_level(&self) -> u8 {
        self.levels.iter().map(|l| l.ordinal).max().unwrap_or(0)
    }

    pub fn level_name(&self, ordinal: u8) -> Option<&str> {
        self.levels
            .iter()
            .find(|l| l.ordinal == ordinal)
            .map(|l| l.name.as_str())
    }

    pub fn activity(&self, aid: u8) -> Option<&Activity> {
        self.activities.iter().find(|a| a.aid == aid)
    }

    pub fn dimension(&self, id: u8) -> Option<&Dimension> {
        self.dimensions.iter().find(|d| d.id == id)
    }

    pub fn activities_in(&self, dimension_id: u8) -> impl Iterator<Item = &Activity> {
        self.activities
            .iter()
            .filter(move |a| a.dimension_id == dimension_id)
    }

    /// Statements of one level in canonical (activity, ordinal) order.
    pub fn statements_at(&self, level: u8) -> Vec<&Statement> {
        let mut out: Vec<&Statement> = self
            .statements
            .iter()
            .filter(|s| s.level == level)
            .collect();
        out.sort_by_key(|s| s.key());
        out
    }

    pub fn total_at_level(&self, level: u8) -> u32 {
        self.statements.iter().filter(|s| s.level == level).count() as u32
    }

    pub fn statement_keys(&self) -> BTreeSet<StatementKey> {
        self.statements.iter().map(|s| s.key()).collect()
    }
}
