//! Verification campaigns and their deterministic reports.
//!
//! A campaign runs a fixed battery of exact checks and produces a
//! [`CampaignReport`]: one record per check, sorted by check id, with a
//! canonical JSON form (no timestamps in the body) so runs can be diffed.
//!
//! - [`verify_catalog`] — identity, kernel-closure, `φ`-closure, block
//!   invariance, kernel-inclusion and homogeneity-table checks over the
//!   whole catalog;
//! - [`replay_conjugations`] — every explicit conjugation claim of the
//!   classification, replayed as an exact operator equality;
//! - [`orbit_report`] — pairwise orbit separation of the 36 `M₃` entries.

mod orbit;
mod replay;
mod verify;

pub use orbit::{orbit_report, OrbitInvariants, OrbitProfile};
pub use replay::replay_conjugations;
pub use verify::verify_catalog;

use std::time::Duration;

use serde::Serialize;

use crate::algebra;
use crate::morphism::coordinate_permutation;
use crate::operator::OperatorMatrix;

/// Outcome of a single check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
    /// Used by bounded searches: exhausted without a hit. Not a failure.
    NotFound,
}

/// One check: a stable id, its status, and a witness/detail string.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub status: CheckStatus,
    pub detail: String,
}

/// Aggregated counts of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
    pub not_found: usize,
}

/// A deterministic campaign report. Records are sorted by id; the
/// wall-clock duration is excluded from the canonical JSON body.
#[derive(Debug, Clone, Serialize)]
pub struct CampaignReport {
    pub campaign: String,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
    #[serde(skip)]
    pub duration: Duration,
}

impl CampaignReport {
    pub fn new(campaign: impl Into<String>, mut records: Vec<CheckRecord>, duration: Duration) -> Self {
        records.sort_by(|a, b| a.id.cmp(&b.id));
        let summary = Summary {
            total: records.len(),
            pass: records.iter().filter(|r| r.status == CheckStatus::Pass).count(),
            fail: records.iter().filter(|r| r.status == CheckStatus::Fail).count(),
            not_applicable: records
                .iter()
                .filter(|r| r.status == CheckStatus::NotApplicable)
                .count(),
            not_found: records
                .iter()
                .filter(|r| r.status == CheckStatus::NotFound)
                .count(),
        };
        CampaignReport {
            campaign: campaign.into(),
            records,
            summary,
            duration,
        }
    }

    /// Green iff no check failed.
    pub fn is_green(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == CheckStatus::Fail)
    }

    /// Canonical machine form: stable field order, sorted records, no
    /// timestamps or durations.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable form (includes the wall-clock duration).
    pub fn to_text(&self) -> String {
        let mut out = format!("campaign: {}\n", self.campaign);
        for r in &self.records {
            let status = match r.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::NotApplicable => "N/A ",
                CheckStatus::NotFound => "NOTFOUND",
            };
            out.push_str(&format!("  [{status}] {}", r.id));
            if !r.detail.is_empty() {
                out.push_str(&format!("  ({})", r.detail));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "summary: {} checks, {} pass, {} fail, {} n/a, {} not-found ({} green) in {:.3}s\n",
            self.summary.total,
            self.summary.pass,
            self.summary.fail,
            self.summary.not_applicable,
            self.summary.not_found,
            if self.is_green() { "campaign" } else { "NOT" },
            self.duration.as_secs_f64(),
        ));
        out
    }
}

pub(crate) fn record(id: impl Into<String>, ok: bool, detail: impl Into<String>) -> CheckRecord {
    CheckRecord {
        id: id.into(),
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: detail.into(),
    }
}

/// Identify the diagonal case (1–9, up to coordinate permutation) of an
/// `M₃` operator whose diagonal subalgebra is invariant. Returns the case
/// number and the permutation that conjugates the stock case onto the
/// diagonal action.
pub fn m3_diag_case(op: &OperatorMatrix) -> Option<(usize, [usize; 3])> {
    let ctx = op.context();
    let m3 = algebra::m3();
    if !crate::algebra::same_context(ctx, &m3) {
        return None;
    }
    let diag_idx = [0usize, 4, 8];
    // Extract the 3×3 diagonal action; bail out if the diagonal is not
    // invariant.
    let mut action = [[0i64; 3]; 3];
    for (c, &i) in diag_idx.iter().enumerate() {
        let img = op.image_of_basis(i);
        for (t, entry) in img.iter().enumerate() {
            if entry.is_zero() {
                continue;
            }
            let Some(pos) = diag_idx.iter().position(|&d| d == t) else {
                return None;
            };
            action[pos][c] = entry.to_i64()?;
        }
    }
    let f3 = algebra::f3();
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    for case in 1..=9usize {
        let stock = crate::catalog::f3_case(case).expect("valid case");
        for perm in perms {
            let sigma = coordinate_permutation(&f3, &perm).expect("permutation automorphism");
            let conj = stock.conjugate_by(&sigma).expect("same context");
            let matches = (0..3).all(|i| {
                (0..3).all(|j| conj.matrix().get(i, j).to_i64() == Some(action[i][j]))
            });
            if matches {
                return Some((case, perm));
            }
        }
    }
    None
}
