//! The catalog verification campaign.
//!
//! For every catalog entry (and every documented family sample):
//! identity check, kernel-subalgebra closure, `φ`-closure, minimal
//! polynomial divisibility, block invariance where `R(1)` is diagonal,
//! the kernel inclusions `e_ii·Im(R+1) ⊆ ker R` where applicable, and the
//! homogeneity table of the nine diagonal cases.

use std::time::Instant;

use crate::algebra;
use crate::catalog::{self, Catalog, Tag, Variant};
use crate::linalg::{Poly, Scalar};
use crate::operator::Lemma1Report;

use super::{m3_diag_case, record, CampaignReport, CheckRecord, CheckStatus};

/// Per-case homogeneity of `ker R` and `ker R'` for diagonal cases 1–9:
/// `true` = guaranteed homogeneous.
const HOMOGENEITY_TABLE: [(bool, bool); 9] = [
    (true, true),   // 1
    (false, true),  // 2
    (false, true),  // 3
    (false, true),  // 4
    (true, false),  // 5
    (true, false),  // 6
    (true, true),   // 7
    (true, false),  // 8
    (false, true),  // 9
];

pub fn verify_catalog(cat: &Catalog) -> CampaignReport {
    let start = Instant::now();
    let mut records: Vec<CheckRecord> = Vec::new();
    // x³(x+1)³ bounds every weight-1 minimal polynomial in the catalog.
    let bound = &Poly::x().pow(3) * &Poly::linear_root(&Scalar::from_int(-1)).pow(3);

    for entry in cat.entries() {
        for (label, op) in entry.instances() {
            let ctx = op.context();
            records.push(record(
                format!("rb/{label}"),
                op.rb_check().is_pass(),
                op.rb_check().describe(ctx),
            ));
            let phi = op.phi();
            records.push(record(
                format!("phi-rb/{label}"),
                phi.rb_check().is_pass(),
                "rb-identity of the φ-image",
            ));
            // Both kernels are subalgebras.
            let (_, ker_closed) = ctx.subalgebra_closure(&op.kernel());
            let (_, ker_phi_closed) = ctx.subalgebra_closure(&phi.kernel());
            records.push(record(
                format!("ker-subalgebra/{label}"),
                ker_closed && ker_phi_closed,
                format!(
                    "dim ker R = {}, dim ker R' = {}",
                    op.kernel().dim(),
                    phi.kernel().dim()
                ),
            ));
            let mp = op.matrix().minimal_polynomial();
            records.push(record(
                format!("minpoly-bound/{label}"),
                mp.divides(&bound),
                format!("min poly {mp} divides x^3*(x+1)^3"),
            ));
        }
    }

    // φ of each F3 case equals the displayed companion, entry for entry.
    for k in 1..=9usize {
        let plain = cat.get(&format!("F3.case{k}")).unwrap().representative();
        let primed = cat.get(&format!("F3.case{k}p")).unwrap().representative();
        records.push(record(
            format!("phi-companion/F3.case{k}"),
            plain.phi() == primed && primed.phi() == plain,
            "φ(case) equals the displayed companion",
        ));
    }

    // M3-specific checks.
    for entry in cat.m3_entries() {
        let op = entry.representative();
        let label = &entry.id;
        records.push(record(
            format!("not-inner-splitting/{label}"),
            !op.is_inner_splitting().unwrap(),
            "R(1) is not a scalar multiple of the unit",
        ));
        records.push(record(
            format!("not-splitting/{label}"),
            !op.is_splitting(),
            "R(R+1) is nonzero",
        ));
        records.push(record(
            format!("commutator-screen/{label}"),
            op.check_commutator_identity().unwrap().is_pass(),
            "[R(1),R(x)] = R([R(1),x]) on the basis",
        ));
        // Block extensions carry the corner frame.
        if entry.tags.contains(&Tag::BlockExtension) {
            let ctx = op.context();
            let ker = op.kernel();
            let ker_phi = op.phi().kernel();
            let in_ker = |l: &str| ker.contains(&ctx.basis_vector(ctx.label_index(l).unwrap()));
            let in_phi = |l: &str| ker_phi.contains(&ctx.basis_vector(ctx.label_index(l).unwrap()));
            records.push(record(
                format!("block-frame/{label}"),
                in_phi("e12") && in_phi("e13") && in_ker("e21") && in_ker("e31"),
                "e12, e13 ∈ ker(R+1) and e21, e31 ∈ ker R",
            ));
        }
        // Block invariance from the diagonal of R(1).
        let l1 = op.check_block_invariance();
        let (status, detail) = match &l1 {
            Lemma1Report::NotApplicable { reason } => {
                (CheckStatus::NotApplicable, reason.clone())
            }
            Lemma1Report::Checked {
                ladder,
                blocks_invariant,
                extremal_splitting,
                failing_block,
                ..
            } => {
                let ok = *blocks_invariant && (ladder.is_none() || *extremal_splitting);
                let detail = match (ladder, failing_block) {
                    (Some((f, g)), None) => {
                        format!("ladder (-{f}..{g}); blocks invariant; extremal splitting")
                    }
                    (None, None) => "diagonal R(1), no ladder; blocks invariant".to_string(),
                    (_, Some(w)) => format!("block invariance fails at {w}"),
                };
                (
                    if ok { CheckStatus::Pass } else { CheckStatus::Fail },
                    detail,
                )
            }
        };
        records.push(CheckRecord {
            id: format!("block-invariance/{label}"),
            status,
            detail,
        });
        // Kernel inclusions for R and its φ-image.
        for (suffix, candidate) in [("", op.clone()), ("-phi", op.phi())] {
            let rep = candidate.check_kernel_inclusions();
            let status = if rep.applicable_indices.is_empty() {
                CheckStatus::NotApplicable
            } else if rep.ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            };
            records.push(CheckRecord {
                id: format!("kernel-inclusions{suffix}/{label}"),
                status,
                detail: if rep.ok {
                    format!("applicable at {:?}", rep.applicable_indices)
                } else {
                    rep.failures.join("; ")
                },
            });
        }
    }

    records.extend(homogeneity_table_records(cat));

    CampaignReport::new("verify-catalog", records, start.elapsed())
}

/// Reproduce the homogeneity table: for every diagonal case 1–9, all
/// catalog entries with that diagonal action (plus the stock primitive
/// extension, so cases 8 and 9 are exercised too) must have homogeneous
/// `ker R` / `ker R'` wherever the table guarantees it.
fn homogeneity_table_records(cat: &Catalog) -> Vec<CheckRecord> {
    let m3 = algebra::m3();
    let mut per_case: Vec<Vec<(String, crate::operator::OperatorMatrix)>> =
        (0..9).map(|_| Vec::new()).collect();
    for entry in cat.m3_entries() {
        let op = entry.representative();
        match m3_diag_case(&op) {
            Some((case, _)) => per_case[case - 1].push((entry.id.clone(), op)),
            None => per_case[0].push((format!("{}?", entry.id), op)), // flagged below
        }
    }
    for case in 1..=9usize {
        if let Ok(prim) = catalog::primitive_operator(case, Variant::A) {
            per_case[case - 1].push((format!("primitive-{case}a"), prim));
        }
    }
    let mut records = Vec::new();
    for case in 1..=9usize {
        let (ker_hom, ker_phi_hom) = HOMOGENEITY_TABLE[case - 1];
        let members = &per_case[case - 1];
        let mut ok = true;
        let mut details: Vec<String> = Vec::new();
        for (label, op) in members {
            if label.ends_with('?') {
                ok = false;
                details.push(format!("{label}: diagonal case not identified"));
                continue;
            }
            let h_ker = m3.is_homogeneous(&op.kernel());
            let h_phi = m3.is_homogeneous(&op.phi().kernel());
            if (ker_hom && !h_ker) || (ker_phi_hom && !h_phi) {
                ok = false;
                details.push(format!("{label}: ker {h_ker}, ker' {h_phi}"));
            }
        }
        let cell = |b: bool| if b { "+" } else { " " };
        records.push(record(
            format!("homogeneity-table/case{case}"),
            ok,
            if ok {
                format!(
                    "row ({}, {}) verified on {} operators",
                    cell(ker_hom),
                    cell(ker_phi_hom),
                    members.len()
                )
            } else {
                details.join("; ")
            },
        ));
    }
    records
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_catalog_is_green() {
        let cat = Catalog::build().unwrap();
        let report = verify_catalog(&cat);
        for r in report.failures() {
            eprintln!("FAIL {}: {}", r.id, r.detail);
        }
        assert!(report.is_green());
        // Every M3 entry yields a block-invariance record that applied.
        assert_eq!(
            report
                .records
                .iter()
                .filter(|r| r.id.starts_with("block-invariance/")
                    && r.status == CheckStatus::NotApplicable)
                .count(),
            0
        );
    }

    #[test]
    fn diag_case_detection() {
        let cat = Catalog::build().unwrap();
        let expect = [
            ("M3.1a", 1),
            ("M3.2b", 2),
            ("M3.7c", 7),
            ("M3.1-I", 1),
            ("M3.2-I", 2),
            ("M3.3-II", 3),
            ("M3.4-I", 4),
            ("M3.5-I", 5),
            ("M3.6-IV", 6),
            ("M3.6-VI", 6),
            ("M3.8-I", 8),
        ];
        for (id, case) in expect {
            let op = cat.get(id).unwrap().representative();
            let (found, _) = m3_diag_case(&op).unwrap();
            assert_eq!(found, case, "{id}");
        }
    }

    #[test]
    fn report_is_deterministic() {
        let cat = Catalog::build().unwrap();
        let a = verify_catalog(&cat).to_canonical_json();
        let b = verify_catalog(&cat).to_canonical_json();
        assert_eq!(a, b);
    }
}
