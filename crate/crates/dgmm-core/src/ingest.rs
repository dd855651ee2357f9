//! Response-file ingestion: parses and validates multi-respondent rating
//! files into a coverage-checked [`ResponseSet`].
//!
//! Two encodings are accepted. The tabular form is CSV with header
//! `respondent,statement_id,rating[,percent]`, one row per respondent and
//! statement, exactly one of `rating`/`percent` non-empty per row (`percent`
//! also accepts `na` as the explicit not-applicable mark). The structured
//! form is JSON: `{organization, model_name, max_level?, metadata?,
//! responses: {respondent: {statement_id: rating}}}`.
//!
//! Validation is total: blanks are never coerced to 0, every malformed input
//! names the offending record, and missing cells are reported in full.

use crate::model::{MaturityModel, StatementKey};
use crate::rating::{percentage_to_rating, Rating};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("row {row}: unknown statement id {statement:?}")]
    UnknownStatement { row: u64, statement: String },
    #[error("row {row}: statement {statement} is above declared max level {max_level}")]
    StatementAboveMaxLevel {
        row: u64,
        statement: String,
        max_level: u8,
    },
    #[error("row {row}: rating out of range: {value} (expected 0..=4)")]
    RatingOutOfRange { row: u64, value: i64 },
    #[error("row {row}: extent of applicability {value} outside 0..=100")]
    PercentOutOfRange { row: u64, value: f64 },
    #[error("row {row}: exactly one of rating and percent must be present")]
    RatingPercentConflict { row: u64 },
    #[error("row {row}: empty respondent id")]
    EmptyRespondent { row: u64 },
    #[error("duplicate entry for ({respondent}, {statement})")]
    DuplicateEntry {
        respondent: String,
        statement: String,
    },
    #[error("coverage gap: missing {}", format_cells(.missing))]
    CoverageGap { missing: Vec<(String, String)> },
    #[error("no respondents")]
    NoRespondents,
    #[error("respondent collision: {0}")]
    RespondentCollision(String),
    #[error("model mismatch: responses are for {found:?}, loaded model is {expected:?}")]
    ModelMismatch { expected: String, found: String },
    #[error("organization mismatch: {a:?} vs {b:?}")]
    OrganizationMismatch { a: String, b: String },
    #[error("max_level {given} outside 1..={max}")]
    MaxLevelOutOfRange { given: u8, max: u8 },
}

fn format_cells(cells: &[(String, String)]) -> String {
    cells
        .iter()
        .map(|(respondent, statement)| format!("({respondent}, {statement})"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Per-respondent, per-statement ratings for one organization's assessment.
///
/// Respondents are held in sorted order and ratings in a dense per-statement
/// layout, so any input row order produces the same set. Immutable after
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseSet {
    organization: String,
    model_name: String,
    max_level: u8,
    respondents: Vec<String>,
    ratings: BTreeMap<StatementKey, Vec<Rating>>,
    metadata: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct StructuredFile {
    organization: String,
    model_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_level: Option<u8>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    metadata: BTreeMap<String, String>,
    responses: BTreeMap<String, BTreeMap<String, u8>>,
}

impl ResponseSet {
    /// Builds a set from loose (respondent, statement) cells, enforcing
    /// every invariant: known statements, full coverage of levels
    /// 1..=`max_level`, at least one respondent.
    pub fn from_cells(
        organization: String,
        model_name: String,
        max_level: u8,
        cells: BTreeMap<(String, StatementKey), Rating>,
        model: &MaturityModel,
    ) -> Result<ResponseSet, IngestError> {
        if model_name != model.name {
            return Err(IngestError::ModelMismatch {
                expected: model.name.clone(),
                found: model_name,
            });
        }
        if max_level == 0 || max_level > model.max_level() {
            return Err(IngestError::MaxLevelOutOfRange {
                given: max_level,
                max: model.max_level(),
            });
        }
        let respondents: Vec<String> = cells
            .keys()
            .map(|(respondent, _)| respondent.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if respondents.is_empty() {
            return Err(IngestError::NoRespondents);
        }

        let known = model.statement_keys();
        for (_, key) in cells.keys() {
            if !known.contains(key) {
                return Err(IngestError::UnknownStatement {
                    row: 0,
                    statement: key.to_string(),
                });
            }
            if key.level > max_level {
                return Err(IngestError::StatementAboveMaxLevel {
                    row: 0,
                    statement: key.to_string(),
                    max_level,
                });
            }
        }

        let mut missing = Vec::new();
        let mut ratings: BTreeMap<StatementKey, Vec<Rating>> = BTreeMap::new();
        for level in 1..=max_level {
            for statement in model.statements_at(level) {
                let key = statement.key();
                let mut row = Vec::with_capacity(respondents.len());
                for respondent in &respondents {
                    match cells.get(&(respondent.clone(), key)) {
                        Some(&rating) => row.push(rating),
                        None => missing.push((respondent.clone(), key.to_string())),
                    }
                }
                if row.len() == respondents.len() {
                    ratings.insert(key, row);
                }
            }
        }
        if !missing.is_empty() {
            return Err(IngestError::CoverageGap { missing });
        }

        Ok(ResponseSet {
            organization,
            model_name: model.name.clone(),
            max_level,
            respondents,
            ratings,
            metadata: BTreeMap::new(),
        })
    }

    /// Parses the tabular CSV form. The organization label and optional
    /// level bound come from the caller (the CSV schema carries neither).
    pub fn parse_csv(
        data: &str,
        model: &MaturityModel,
        organization: &str,
        max_level: Option<u8>,
    ) -> Result<ResponseSet, IngestError> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(false)
            .from_reader(data.as_bytes());

        let headers = reader
            .headers()
            .map_err(|e| IngestError::Parse(e.to_string()))?
            .clone();
        let column = |name: &str| headers.iter().position(|h| h == name);
        let respondent_col = column("respondent")
            .ok_or_else(|| IngestError::Parse("missing column: respondent".to_string()))?;
        let statement_col = column("statement_id")
            .ok_or_else(|| IngestError::Parse("missing column: statement_id".to_string()))?;
        let rating_col = column("rating")
            .ok_or_else(|| IngestError::Parse("missing column: rating".to_string()))?;
        let percent_col = column("percent");

        let known = model.statement_keys();
        let bound = max_level.unwrap_or_else(|| model.max_level());
        let mut cells: BTreeMap<(String, StatementKey), Rating> = BTreeMap::new();
        for record in reader.records() {
            let record = record.map_err(|e| IngestError::Parse(e.to_string()))?;
            let row = record
                .position()
                .map(|p| p.line())
                .unwrap_or_default();

            let respondent = record.get(respondent_col).unwrap_or_default();
            if respondent.is_empty() {
                return Err(IngestError::EmptyRespondent { row });
            }
            let statement = record.get(statement_col).unwrap_or_default();
            let key: StatementKey = statement.parse().map_err(|_| {
                IngestError::UnknownStatement {
                    row,
                    statement: statement.to_string(),
                }
            })?;
            if !known.contains(&key) {
                return Err(IngestError::UnknownStatement {
                    row,
                    statement: statement.to_string(),
                });
            }
            if key.level > bound {
                return Err(IngestError::StatementAboveMaxLevel {
                    row,
                    statement: key.to_string(),
                    max_level: bound,
                });
            }

            let rating_field = record.get(rating_col).unwrap_or_default();
            let percent_field = percent_col
                .and_then(|c| record.get(c))
                .unwrap_or_default();

            let rating = match (rating_field.is_empty(), percent_field.is_empty()) {
                (false, true) => {
                    let value: i64 = rating_field
                        .parse()
                        .map_err(|_| IngestError::Parse(format!(
                            "row {row}: rating {rating_field:?} is not an integer"
                        )))?;
                    let byte = u8::try_from(value)
                        .map_err(|_| IngestError::RatingOutOfRange { row, value })?;
                    Rating::new(byte).map_err(|_| IngestError::RatingOutOfRange { row, value })?
                }
                (true, false) => {
                    if percent_field.eq_ignore_ascii_case("na") {
                        Rating::NOT_APPLICABLE
                    } else {
                        let value: f64 = percent_field.parse().map_err(|_| {
                            IngestError::Parse(format!(
                                "row {row}: percent {percent_field:?} is not a number"
                            ))
                        })?;
                        percentage_to_rating(Some(value))
                            .map_err(|_| IngestError::PercentOutOfRange { row, value })?
                    }
                }
                _ => return Err(IngestError::RatingPercentConflict { row }),
            };

            if cells
                .insert((respondent.to_string(), key), rating)
                .is_some()
            {
                return Err(IngestError::DuplicateEntry {
                    respondent: respondent.to_string(),
                    statement: key.to_string(),
                });
            }
        }

        ResponseSet::from_cells(
            organization.to_string(),
            model.name.clone(),
            bound,
            cells,
            model,
        )
    }

    /// Parses the structured JSON form.
    pub fn parse_json(data: &str, model: &MaturityModel) -> Result<ResponseSet, IngestError> {
        let file: StructuredFile =
            serde_json::from_str(data).map_err(|e| IngestError::Parse(e.to_string()))?;
        if file.model_name != model.name {
            return Err(IngestError::ModelMismatch {
                expected: model.name.clone(),
                found: file.model_name,
            });
        }
        let mut cells: BTreeMap<(String, StatementKey), Rating> = BTreeMap::new();
        for (respondent, ratings) in &file.responses {
            if respondent.is_empty() {
                return Err(IngestError::EmptyRespondent { row: 0 });
            }
            for (statement, &value) in ratings {
                let key: StatementKey = statement.parse().map_err(|_| {
                    IngestError::UnknownStatement {
                        row: 0,
                        statement: statement.clone(),
                    }
                })?;
                let rating = Rating::new(value).map_err(|_| IngestError::RatingOutOfRange {
                    row: 0,
                    value: value as i64,
                })?;
                // BTreeMap keys are unique per respondent, so duplicates
                // cannot occur in this form
                cells.insert((respondent.clone(), key), rating);
            }
        }
        let bound = file.max_level.unwrap_or_else(|| model.max_level());
        let mut set =
            ResponseSet::from_cells(file.organization, model.name.clone(), bound, cells, model)?;
        set.metadata = file.metadata;
        Ok(set)
    }

    /// Serializes to the structured JSON form; parsing it back yields an
    /// equal set.
    pub fn to_json(&self) -> String {
        let mut responses: BTreeMap<String, BTreeMap<String, u8>> = BTreeMap::new();
        for (key, row) in &self.ratings {
            for (respondent, rating) in self.respondents.iter().zip(row) {
                responses
                    .entry(respondent.clone())
                    .or_default()
                    .insert(key.to_string(), rating.value());
            }
        }
        let file = StructuredFile {
            organization: self.organization.clone(),
            model_name: self.model_name.clone(),
            max_level: Some(self.max_level),
            metadata: self.metadata.clone(),
            responses,
        };
        let mut out = serde_json::to_string_pretty(&file).expect("response set serializes");
        out.push('\n');
        out
    }

    /// Union of two sets over the same organization and model with disjoint
    /// respondent panels. The merged level bound is the lower of the two;
    /// metadata is the key union, left side winning on conflicts.
    pub fn merge(&self, other: &ResponseSet) -> Result<ResponseSet, IngestError> {
        if self.model_name != other.model_name {
            return Err(IngestError::ModelMismatch {
                expected: self.model_name.clone(),
                found: other.model_name.clone(),
            });
        }
        if self.organization != other.organization {
            return Err(IngestError::OrganizationMismatch {
                a: self.organization.clone(),
                b: other.organization.clone(),
            });
        }
        if let Some(shared) = self
            .respondents
            .iter()
            .find(|r| other.respondents.binary_search(r).is_ok())
        {
            return Err(IngestError::RespondentCollision(shared.clone()));
        }

        let max_level = self.max_level.min(other.max_level);
        let mut respondents: Vec<String> = self
            .respondents
            .iter()
            .chain(&other.respondents)
            .cloned()
            .collect();
        respondents.sort();

        let mut ratings: BTreeMap<StatementKey, Vec<Rating>> = BTreeMap::new();
        for (key, _) in self.ratings.iter().filter(|(k, _)| k.level <= max_level) {
            let mut row = Vec::with_capacity(respondents.len());
            for respondent in &respondents {
                let rating = self
                    .rating_of(respondent, *key)
                    .or_else(|| other.rating_of(respondent, *key))
                    .expect("merged coverage");
                row.push(rating);
            }
            ratings.insert(*key, row);
        }

        let mut metadata = other.metadata.clone();
        metadata.extend(self.metadata.clone());

        Ok(ResponseSet {
            organization: self.organization.clone(),
            model_name: self.model_name.clone(),
            max_level,
            respondents,
            ratings,
            metadata,
        })
    }

    fn rating_of(&self, respondent: &str, key: StatementKey) -> Option<Rating> {
        let idx = self.respondents.binary_search_by(|r| r.as_str().cmp(respondent)).ok()?;
        self.ratings.get(&key).map(|row| row[idx])
    }

    pub fn organization(&self) -> &str {
        &self.organization
    }

    pub fn model_name(&self) -> &str {
        &self.model_name
    }

    /// Highest level this set covers.
    pub fn max_level(&self) -> u8 {
        self.max_level
    }

    /// Respondent ids in sorted order.
    pub fn respondents(&self) -> &[String] {
        &self.respondents
    }

    /// Panel ratings for one statement, index-aligned with `respondents()`.
    pub fn ratings_for(&self, key: StatementKey) -> Option<&[Rating]> {
        self.ratings.get(&key).map(|row| row.as_slice())
    }

    /// Free-form key/value annotations carried by the structured format.
    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn entry_count(&self) -> usize {
        self.ratings.values().map(|row| row.len()).sum()
    }
}
