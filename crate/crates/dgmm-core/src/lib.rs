//! Maturity assessment engine for game development processes.
//!
//! The engine is model-as-data: a maturity-model catalog (levels,
//! dimensions, process activities, questionnaire statements, threshold
//! policy) is loaded from JSON — the Digital Game Maturity Model ships
//! bundled — and multi-respondent questionnaire responses are scored
//! through an ordinal performance scale to determine the organization's
//! maturity level. On top of the scoring core sit inter-rater agreement
//! statistics (Kendall's W, Fleiss' and Cohen's kappa), dimension and
//! activity profiles for radar charts, and gap analysis toward the next
//! level.

pub mod agreement;
pub mod analytics;
pub mod error;
pub mod ingest;
pub mod model;
pub mod numeric;
pub mod rating;
pub mod report;
pub mod svg;

pub use error::Error;
pub use ingest::ResponseSet;
pub use model::MaturityModel;
pub use rating::AggregationPolicy;
