//! Inter-rater agreement statistics computed per maturity level: Kendall's
//! coefficient of concordance W with its chi-square statistic, Fleiss' kappa
//! with a large-sample Z, pairwise Cohen's kappa, and qualitative band
//! classification.
//!
//! Likert panels are tie-heavy, so W uses mid-ranks with the standard tie
//! correction. Both kappas run over the fixed rating categories 0..=4 and
//! may be negative; values are reported as computed, never clamped.

use crate::ingest::ResponseSet;
use crate::model::MaturityModel;
use crate::numeric::{chi_square_tail, normal_tail};
use crate::rating::Rating;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Number of rating categories (0..=4).
const CATEGORIES: usize = 5;

#[derive(Debug, Error)]
pub enum AgreementError {
    #[error("agreement undefined: need at least 2 raters, got {0}")]
    TooFewRaters(usize),
    #[error("agreement undefined: need at least 2 items, got {0}")]
    TooFewItems(usize),
    #[error("rater {rater} rated {found} items, expected {expected}")]
    IncompleteMatrix {
        rater: String,
        expected: usize,
        found: usize,
    },
    #[error("no variance: every rater assigned one identical rating to all items")]
    NoVariance,
    #[error("rating vectors differ in length: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },
    #[error("rating vectors are empty")]
    Empty,
}

/// A complete raters-by-items matrix of ratings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatingMatrix {
    raters: Vec<String>,
    items: Vec<String>,
    cells: Vec<Vec<u8>>,
}

impl RatingMatrix {
    pub fn new(
        raters: Vec<String>,
        items: Vec<String>,
        cells: Vec<Vec<u8>>,
    ) -> Result<RatingMatrix, AgreementError> {
        if raters.len() < 2 {
            return Err(AgreementError::TooFewRaters(raters.len()));
        }
        if items.len() < 2 {
            return Err(AgreementError::TooFewItems(items.len()));
        }
        for (rater, row) in raters.iter().zip(&cells) {
            if row.len() != items.len() {
                return Err(AgreementError::IncompleteMatrix {
                    rater: rater.clone(),
                    expected: items.len(),
                    found: row.len(),
                });
            }
            debug_assert!(row.iter().all(|&r| r < CATEGORIES as u8));
        }
        Ok(RatingMatrix {
            raters,
            items,
            cells,
        })
    }

    /// One matrix per assessed level: raters are the set's respondents and
    /// items the level's statements in canonical order.
    pub fn per_level(
        responses: &ResponseSet,
        model: &MaturityModel,
    ) -> Result<Vec<(u8, RatingMatrix)>, AgreementError> {
        let raters: Vec<String> = responses.respondents().to_vec();
        if raters.len() < 2 {
            return Err(AgreementError::TooFewRaters(raters.len()));
        }
        let mut out = Vec::new();
        for level in 1..=responses.max_level() {
            let statements = model.statements_at(level);
            let items: Vec<String> = statements.iter().map(|s| s.id()).collect();
            let mut cells = vec![Vec::with_capacity(items.len()); raters.len()];
            for statement in &statements {
                let panel: &[Rating] = responses
                    .ratings_for(statement.key())
                    .expect("response set covers its levels");
                for (row, rating) in cells.iter_mut().zip(panel) {
                    row.push(rating.value());
                }
            }
            out.push((level, RatingMatrix::new(raters.clone(), items, cells)?));
        }
        Ok(out)
    }

    pub fn rater_count(&self) -> usize {
        self.raters.len()
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn raters(&self) -> &[String] {
        &self.raters
    }

    pub fn row(&self, rater: usize) -> &[u8] {
        &self.cells[rater]
    }
}

/// Kendall's W with its chi-square statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KendallW {
    pub w: f64,
    pub chi_square: f64,
    pub df: u32,
}

/// Mid-ranks of one rater's ratings over the items, plus the rater's tie
/// term sum(t^3 - t) over tied groups.
fn midranks(row: &[u8]) -> (Vec<f64>, f64) {
    let n = row.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| row[i]);
    let mut ranks = vec![0.0; n];
    let mut tie_term = 0.0;
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && row[order[end + 1]] == row[order[start]] {
            end += 1;
        }
        let group = (end - start + 1) as f64;
        // average of ranks start+1 ..= end+1
        let rank = (start + end) as f64 / 2.0 + 1.0;
        for &idx in &order[start..=end] {
            ranks[idx] = rank;
        }
        tie_term += group * group * group - group;
        start = end + 1;
    }
    (ranks, tie_term)
}

/// Kendall's coefficient of concordance over the matrix, with mid-ranks and
/// the standard tie correction. `chi_square = m (n - 1) W` with `df = n - 1`.
///
/// Errors with [`AgreementError::NoVariance`] when every rater ties all
/// items (the statistic is 0/0 there).
pub fn kendalls_w(matrix: &RatingMatrix) -> Result<KendallW, AgreementError> {
    let m = matrix.rater_count() as f64;
    let n = matrix.item_count() as f64;

    let mut rank_sums = vec![0.0; matrix.item_count()];
    let mut tie_total = 0.0;
    for rater in 0..matrix.rater_count() {
        let (ranks, tie_term) = midranks(matrix.row(rater));
        for (sum, rank) in rank_sums.iter_mut().zip(&ranks) {
            *sum += rank;
        }
        tie_total += tie_term;
    }

    let mean = m * (n + 1.0) / 2.0;
    let s: f64 = rank_sums.iter().map(|&r| (r - mean) * (r - mean)).sum();
    let denominator = m * m * (n * n * n - n) - m * tie_total;
    if denominator <= 0.0 {
        return Err(AgreementError::NoVariance);
    }
    let w = 12.0 * s / denominator;
    let df = matrix.item_count() as u32 - 1;
    Ok(KendallW {
        w,
        chi_square: m * (n - 1.0) * w,
        df,
    })
}

/// Fleiss' kappa with its large-sample Z statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FleissKappa {
    pub kappa: f64,
    pub z: f64,
    /// Set when every rating across the whole matrix fell in one category;
    /// kappa is then 1 by convention (agreement is also perfect) and z is 0.
    pub degenerate: bool,
}

/// Fleiss' kappa over the fixed categories 0..=4, items as subjects and
/// raters as the fixed-size panel. Z uses the large-sample null variance
/// `Var = 2 [Pe - (2m-3)Pe^2 + 2(m-2) sum(p_j^3)] / (n m (m-1) (1-Pe)^2)`.
pub fn fleiss_kappa(matrix: &RatingMatrix) -> FleissKappa {
    let m = matrix.rater_count() as f64;
    let n = matrix.item_count() as f64;

    let mut category_totals = [0.0f64; CATEGORIES];
    let mut p_sum = 0.0;
    for item in 0..matrix.item_count() {
        let mut counts = [0.0f64; CATEGORIES];
        for rater in 0..matrix.rater_count() {
            let v = matrix.row(rater)[item] as usize;
            counts[v] += 1.0;
            category_totals[v] += 1.0;
        }
        let agreement: f64 = counts.iter().map(|&c| c * (c - 1.0)).sum();
        p_sum += agreement / (m * (m - 1.0));
    }
    let p_bar = p_sum / n;
    let p: Vec<f64> = category_totals.iter().map(|&c| c / (n * m)).collect();
    let p_e: f64 = p.iter().map(|&pj| pj * pj).sum();

    if 1.0 - p_e < 1e-12 {
        // all ratings in one category: perfect yet chance-saturated
        return FleissKappa {
            kappa: 1.0,
            z: 0.0,
            degenerate: true,
        };
    }

    let kappa = (p_bar - p_e) / (1.0 - p_e);
    let p3: f64 = p.iter().map(|&pj| pj * pj * pj).sum();
    let variance =
        2.0 * (p_e - (2.0 * m - 3.0) * p_e * p_e + 2.0 * (m - 2.0) * p3)
            / (n * m * (m - 1.0) * (1.0 - p_e) * (1.0 - p_e));
    let z = kappa / variance.sqrt();
    FleissKappa {
        kappa,
        z,
        degenerate: false,
    }
}

/// Cohen's kappa between two raters over the fixed categories 0..=4.
/// Identical vectors give 1, including the chance-saturated case where both
/// raters used a single category.
pub fn cohens_kappa(rater_a: &[u8], rater_b: &[u8]) -> Result<f64, AgreementError> {
    if rater_a.len() != rater_b.len() {
        return Err(AgreementError::LengthMismatch {
            a: rater_a.len(),
            b: rater_b.len(),
        });
    }
    if rater_a.is_empty() {
        return Err(AgreementError::Empty);
    }
    let n = rater_a.len() as f64;
    let observed = rater_a
        .iter()
        .zip(rater_b)
        .filter(|(a, b)| a == b)
        .count() as f64
        / n;
    let mut marginal_a = [0.0f64; CATEGORIES];
    let mut marginal_b = [0.0f64; CATEGORIES];
    for (&a, &b) in rater_a.iter().zip(rater_b) {
        marginal_a[a as usize] += 1.0;
        marginal_b[b as usize] += 1.0;
    }
    let expected: f64 = marginal_a
        .iter()
        .zip(&marginal_b)
        .map(|(&a, &b)| (a / n) * (b / n))
        .sum();
    if 1.0 - expected < 1e-12 {
        // both raters used one category throughout; observed is forced to 1
        return Ok(1.0);
    }
    Ok((observed - expected) / (1.0 - expected))
}

/// Qualitative agreement band from kappa cut points 0.44 / 0.62 / 0.78,
/// closed on the left.
#[derive(Debug, Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgreementBand {
    Poor,
    Moderate,
    Substantial,
    Excellent,
}

impl fmt::Display for AgreementBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            AgreementBand::Poor => "poor",
            AgreementBand::Moderate => "moderate",
            AgreementBand::Substantial => "substantial",
            AgreementBand::Excellent => "excellent",
        };
        write!(f, "{label}")
    }
}

pub fn classify_agreement(kappa: f64) -> AgreementBand {
    if kappa < 0.44 {
        AgreementBand::Poor
    } else if kappa < 0.62 {
        AgreementBand::Moderate
    } else if kappa < 0.78 {
        AgreementBand::Substantial
    } else {
        AgreementBand::Excellent
    }
}

/// Cohen's kappa for one rater pair, by rater id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseKappa {
    pub rater_a: String,
    pub rater_b: String,
    pub kappa: f64,
}

/// Agreement measures for one maturity level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub level: u8,
    pub raters: usize,
    pub items: usize,
    /// `None` when the level's matrix had no rank variance.
    pub kendall_w: Option<f64>,
    pub chi_square: Option<f64>,
    pub chi_square_df: u32,
    /// Upper-tail p-value of the chi-square statistic.
    pub chi_square_p: Option<f64>,
    pub fleiss_kappa: f64,
    pub fleiss_z: f64,
    /// Upper-tail p-value of the Z statistic.
    pub fleiss_z_p: f64,
    pub pairwise_cohen: Vec<PairwiseKappa>,
    pub band: AgreementBand,
    pub notes: Vec<String>,
}

/// Computes every agreement measure per assessed level, mirroring a
/// per-level summary table. Item count per level is the level's full
/// statement count.
pub fn agreement_by_level(
    responses: &ResponseSet,
    model: &MaturityModel,
) -> Result<Vec<AgreementReport>, AgreementError> {
    let matrices = RatingMatrix::per_level(responses, model)?;
    let mut reports = Vec::with_capacity(matrices.len());
    for (level, matrix) in matrices {
        let mut notes = Vec::new();

        let kendall = match kendalls_w(&matrix) {
            Ok(k) => Some(k),
            Err(AgreementError::NoVariance) => {
                notes.push("degenerate: no rank variance, W undefined".to_string());
                None
            }
            Err(other) => return Err(other),
        };

        let fleiss = fleiss_kappa(&matrix);
        if fleiss.degenerate {
            notes.push("degenerate: uniform ratings, kappa 1 by convention".to_string());
        }

        let mut pairwise = Vec::new();
        for a in 0..matrix.rater_count() {
            for b in a + 1..matrix.rater_count() {
                pairwise.push(PairwiseKappa {
                    rater_a: matrix.raters()[a].clone(),
                    rater_b: matrix.raters()[b].clone(),
                    kappa: cohens_kappa(matrix.row(a), matrix.row(b))?,
                });
            }
        }

        let df = matrix.item_count() as u32 - 1;
        reports.push(AgreementReport {
            level,
            raters: matrix.rater_count(),
            items: matrix.item_count(),
            kendall_w: kendall.map(|k| k.w),
            chi_square: kendall.map(|k| k.chi_square),
            chi_square_df: df,
            chi_square_p: kendall.map(|k| chi_square_tail(k.chi_square, k.df)),
            fleiss_kappa: fleiss.kappa,
            fleiss_z: fleiss.z,
            fleiss_z_p: if fleiss.degenerate {
                1.0
            } else {
                normal_tail(fleiss.z)
            },
            pairwise_cohen: pairwise,
            band: classify_agreement(fleiss.kappa),
            notes,
        });
    }
    Ok(reports)
}
