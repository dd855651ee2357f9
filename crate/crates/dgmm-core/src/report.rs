//! Assessment bundle assembly and rendering.
//!
//! A bundle gathers everything one assessment run produced — maturity
//! result, profiles, gap, agreement — plus the tool version and policy
//! settings, so a report is auditable on its own. Identical inputs and
//! flags render to byte-identical JSON, markdown, and SVG.

use crate::agreement::{agreement_by_level, AgreementError, AgreementReport};
use crate::analytics::{
    activity_profile, dimension_profile, gap_to_level, ActivityProfile, DimensionProfile,
    GapReport,
};
use crate::error::Error;
use crate::ingest::ResponseSet;
use crate::model::{Level, MaturityModel};
use crate::rating::{determine_maturity, AggregationPolicy, MaturityResult};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub name: String,
    pub levels: Vec<Level>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySettings {
    /// Aggregation used for level determination and the gap report.
    pub scoring_aggregation: AggregationPolicy,
    /// Aggregation used for dimension and activity profiles.
    pub profile_aggregation: AggregationPolicy,
}

/// Everything one assessment run produced, self-contained and
/// round-trippable through JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessmentBundle {
    pub tool: ToolInfo,
    pub model: ModelSummary,
    pub organization: String,
    pub policy: PolicySettings,
    pub maturity: MaturityResult,
    pub dimension_profiles: Vec<DimensionProfile>,
    pub activity_profiles: Vec<ActivityProfile>,
    /// Gap toward the lowest assessed level that did not pass, when any.
    pub gap: Option<GapReport>,
    /// Per-level agreement; empty (with a warning) for a single respondent.
    pub agreement: Vec<AgreementReport>,
}

fn tool_info() -> ToolInfo {
    ToolInfo {
        name: "dgmm".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

/// Runs the full assessment pipeline over one response set.
///
/// Profiles are computed with mean aggregation (the response-average
/// convention of radar figures) regardless of the scoring policy; both
/// policies are recorded in the bundle.
pub fn assemble(
    responses: &ResponseSet,
    model: &MaturityModel,
    scoring: AggregationPolicy,
) -> Result<AssessmentBundle, Error> {
    let profile_policy = AggregationPolicy::Mean;
    let mut maturity = determine_maturity(responses, model, scoring)?;

    let bound = maturity.determination_bound;
    let mut dimension_profiles = Vec::new();
    for level in 1..=bound {
        dimension_profiles.push(dimension_profile(level, responses, model, profile_policy)?);
    }
    let mut activity_profiles = Vec::new();
    for dimension in &model.dimensions {
        activity_profiles.push(activity_profile(
            dimension.id,
            responses,
            model,
            profile_policy,
        )?);
    }

    let next_unachieved = maturity
        .level_scores
        .iter()
        .find(|s| !s.passed)
        .map(|s| s.level);
    let gap = match next_unachieved {
        Some(level) => Some(gap_to_level(level, responses, model, scoring)?),
        None => None,
    };

    let agreement = match agreement_by_level(responses, model) {
        Ok(reports) => reports,
        Err(AgreementError::TooFewRaters(n)) => {
            maturity
                .warnings
                .push(format!("agreement undefined: single respondent (n = {n})"));
            Vec::new()
        }
        Err(other) => return Err(other.into()),
    };

    Ok(AssessmentBundle {
        tool: tool_info(),
        model: ModelSummary {
            name: model.name.clone(),
            levels: model.levels.clone(),
        },
        organization: responses.organization().to_string(),
        policy: PolicySettings {
            scoring_aggregation: scoring,
            profile_aggregation: profile_policy,
        },
        maturity,
        dimension_profiles,
        activity_profiles,
        gap,
        agreement,
    })
}

/// Serializes a bundle with stable key order; parses back to an equal value.
pub fn render_json(bundle: &AssessmentBundle) -> String {
    let mut out = serde_json::to_string_pretty(bundle).expect("bundle serializes");
    out.push('\n');
    out
}

pub fn parse_bundle(data: &str) -> Result<AssessmentBundle, Error> {
    serde_json::from_str(data)
        .map_err(|e| Error::Model(crate::model::ModelError::Parse(e.to_string())))
}

pub fn render_agreement_json(reports: &[AgreementReport]) -> String {
    let mut out = serde_json::to_string_pretty(reports).expect("reports serialize");
    out.push('\n');
    out
}

pub fn render_gap_json(gap: &GapReport) -> String {
    let mut out = serde_json::to_string_pretty(gap).expect("gap serializes");
    out.push('\n');
    out
}

fn level_name(bundle: &AssessmentBundle, ordinal: u8) -> String {
    bundle
        .model
        .levels
        .iter()
        .find(|l| l.ordinal == ordinal)
        .map(|l| l.name.clone())
        .unwrap_or_else(|| format!("level {ordinal}"))
}

/// Human-readable name for an achieved maturity level; 0 reads as below the
/// first level.
pub fn maturity_label(bundle: &AssessmentBundle) -> String {
    if bundle.maturity.gml == 0 {
        let first = bundle
            .model
            .levels
            .first()
            .map(|l| l.name.clone())
            .unwrap_or_else(|| "level 1".to_string());
        format!("0 (Below {first})")
    } else {
        format!(
            "{} ({})",
            bundle.maturity.gml,
            level_name(bundle, bundle.maturity.gml)
        )
    }
}

/// Significance stars: `*` at p < 0.01, `**` at p < 0.05.
pub fn significance_stars(p: f64) -> &'static str {
    if p < 0.01 {
        "*"
    } else if p < 0.05 {
        "**"
    } else {
        ""
    }
}

/// Per-level agreement table (one row per level: W, χ² with df, Fleiss κ,
/// Z, band), with the significance footnote and any degenerate-level notes.
pub fn render_agreement_table(
    reports: &[AgreementReport],
    level_name: impl Fn(u8) -> String,
) -> String {
    let mut out = String::new();
    out.push_str("| Level | Kendall's W | χ² (df) | Fleiss κ | Z | Band |\n");
    out.push_str("|---|---|---|---|---|---|\n");
    for report in reports {
        let w = report
            .kendall_w
            .map(|w| format!("{w:.4}"))
            .unwrap_or_else(|| "—".to_string());
        let chi = match (report.chi_square, report.chi_square_p) {
            (Some(x), Some(p)) => {
                format!("{x:.2}{} ({})", significance_stars(p), report.chi_square_df)
            }
            _ => format!("— ({})", report.chi_square_df),
        };
        let z = format!(
            "{:.2}{}",
            report.fleiss_z,
            significance_stars(report.fleiss_z_p)
        );
        let _ = writeln!(
            out,
            "| Level {} ({}) | {} | {} | {:.4} | {} | {} |",
            report.level,
            level_name(report.level),
            w,
            chi,
            report.fleiss_kappa,
            z,
            report.band
        );
    }
    out.push_str("\nSignificant at p < 0.01*; significant at p < 0.05**.\n");
    for report in reports {
        for note in &report.notes {
            let _ = writeln!(out, "Note (level {}): {}", report.level, note);
        }
    }
    out
}

/// Renders the human-readable summary: maturity verdict, per-level summary
/// table, warnings, agreement table, and the gap list.
pub fn render_markdown(bundle: &AssessmentBundle) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Maturity assessment: {}", bundle.organization);
    out.push('\n');
    let _ = writeln!(out, "Model: {}", bundle.model.name);
    let _ = writeln!(
        out,
        "Tool: {} {} | scoring aggregation: {} | profile aggregation: {}",
        bundle.tool.name,
        bundle.tool.version,
        bundle.policy.scoring_aggregation,
        bundle.policy.profile_aggregation
    );
    out.push('\n');
    let _ = writeln!(out, "**Maturity level: {}**", maturity_label(bundle));
    out.push('\n');

    out.push_str("## Level summary\n\n");
    out.push_str("| Maturity level | Total statements | Passing threshold | Applicable | Result |\n");
    out.push_str("|---|---|---|---|---|\n");
    for score in &bundle.maturity.level_scores {
        let _ = writeln!(
            out,
            "| Level {} ({}) | {} | {} | {} | {} |",
            score.level,
            level_name(bundle, score.level),
            score.total_statements,
            score.passing_threshold,
            score.applicable_count,
            if score.passed { "passed" } else { "failed" }
        );
    }
    out.push('\n');

    if !bundle.maturity.warnings.is_empty() {
        out.push_str("## Warnings\n\n");
        for warning in &bundle.maturity.warnings {
            let _ = writeln!(out, "- {warning}");
        }
        out.push('\n');
    }

    if !bundle.agreement.is_empty() {
        out.push_str("## Inter-rater agreement\n\n");
        out.push_str(&render_agreement_table(&bundle.agreement, |ordinal| {
            level_name(bundle, ordinal)
        }));
        out.push('\n');
    }

    if let Some(gap) = &bundle.gap {
        let _ = writeln!(
            out,
            "## Gap to level {} ({})",
            gap.target_level,
            level_name(bundle, gap.target_level)
        );
        out.push('\n');
        let _ = writeln!(
            out,
            "Applicable {} of {}, threshold {}, shortfall {}.",
            gap.applicable_count, gap.total_statements, gap.passing_threshold, gap.shortfall
        );
        out.push('\n');
        if !gap.failing_statements.is_empty() {
            out.push_str("| Statement | Aggregate rating |\n|---|---|\n");
            for failing in &gap.failing_statements {
                let _ = writeln!(
                    out,
                    "| {} | {:.2} |",
                    failing.id,
                    failing.aggregate.to_f64()
                );
            }
            out.push('\n');
            if !gap.per_dimension_failures.is_empty() {
                out.push_str("Failures by dimension: ");
                let parts: Vec<String> = gap
                    .per_dimension_failures
                    .iter()
                    .map(|d| format!("{} {}", d.dimension, d.failures))
                    .collect();
                out.push_str(&parts.join(", "));
                out.push_str(".\n");
            }
        }
    }

    out
}
