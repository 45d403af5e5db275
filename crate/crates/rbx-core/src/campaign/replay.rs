//! The conjugation replay campaign.
//!
//! Every fully explicit conjugation claim in the derivation of the
//! catalog is replayed as an exact operator-matrix equality: the source
//! operator (often an intermediate form that is not itself a catalog
//! entry) is rebuilt from its displayed images, the named map is built
//! from its displayed formulas, and both sides are compared entry for
//! entry.
//!
//! Composition order and conjugation direction are resolved empirically:
//! each claim is tried as stated, with the inverse map, with the sides
//! swapped, and (for composites) with the composition reversed. The
//! resolved variant is recorded in the report, so a claim that only
//! verifies under a non-obvious reading is visible rather than guessed.

use std::sync::Arc;
use std::time::Instant;

use crate::algebra::{self, AlgebraContext};
use crate::catalog::{self, Catalog};
use crate::linalg::Scalar;
use crate::morphism::{
    find_conjugator, named, ConjugatorOutcome, ConjugatorSearch, Morphism, NamedMorphism,
};
use crate::operator::OperatorMatrix;

use super::{record, CampaignReport, CheckRecord};

type Images<'a> = Vec<(&'a str, Vec<(Scalar, &'a str)>)>;

fn s(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::new(n, d)
}

fn op3(images: Images<'_>) -> OperatorMatrix {
    OperatorMatrix::from_scalar_images(&algebra::m3(), &images, Scalar::one())
        .expect("valid image list")
}

/// The 5-frame shared by the case-2/case-5 intermediates:
/// `R(e11) = e22 + e33`, other diagonal unities to zero, upper corner row
/// to `-id`, lower corner column to zero.
fn frame5(extra: Images<'_>) -> OperatorMatrix {
    let mut images: Images = vec![
        ("e11", vec![(s(1), "e22"), (s(1), "e33")]),
        ("e12", vec![(s(-1), "e12")]),
        ("e13", vec![(s(-1), "e13")]),
    ];
    images.extend(extra);
    op3(images)
}

/// Build a composite morphism from atoms listed in functional order
/// (`[f, g, h]` = `f ∘ g ∘ h`, `h` applied first). An empty list is the
/// identity, used for claims that two displayed forms coincide.
fn composite(ctx: &Arc<AlgebraContext>, atoms: &[NamedMorphism]) -> Morphism {
    let mut result = Morphism::identity(ctx);
    for a in atoms {
        let m = named(ctx, a.clone()).expect("atom builds");
        result = result.compose(&m).expect("same context");
    }
    result
}

/// One conjugation claim.
struct Claim {
    id: String,
    lhs: OperatorMatrix,
    rhs: OperatorMatrix,
    atoms: Vec<NamedMorphism>,
}

/// Try a claim in all supported readings; returns the resolved reading.
fn resolve(claim: &Claim) -> Result<String, String> {
    let ctx = claim.lhs.context();
    if !claim.lhs.rb_check().is_pass() {
        return Err("source operator fails rb_check".to_string());
    }
    if !claim.rhs.rb_check().is_pass() {
        return Err("target operator fails rb_check".to_string());
    }
    let orders: Vec<(&str, Morphism)> = if claim.atoms.len() >= 2 {
        let mut rev = claim.atoms.clone();
        rev.reverse();
        vec![
            ("", composite(ctx, &claim.atoms)),
            (", composition reversed", composite(ctx, &rev)),
        ]
    } else {
        vec![("", composite(ctx, &claim.atoms))]
    };
    for (order_note, psi) in &orders {
        let variants: [(&str, &OperatorMatrix, &OperatorMatrix, Morphism); 4] = [
            ("as stated", &claim.lhs, &claim.rhs, psi.clone()),
            ("inverse map", &claim.lhs, &claim.rhs, psi.inverse()),
            ("sides swapped", &claim.rhs, &claim.lhs, psi.clone()),
            ("sides swapped, inverse map", &claim.rhs, &claim.lhs, psi.inverse()),
        ];
        for (note, from, to, m) in variants {
            let conj = from.conjugate_by(&m).expect("same context");
            if &conj == to {
                if !conj.rb_check().is_pass() {
                    return Err("conjugated operator fails rb_check".to_string());
                }
                return Ok(format!("{note}{order_note}"));
            }
        }
    }
    Err("no reading of the claim holds".to_string())
}

pub fn replay_conjugations(cat: &Catalog) -> CampaignReport {
    let start = Instant::now();
    let mut records: Vec<CheckRecord> = Vec::new();
    let m3 = algebra::m3();

    let get = |id: &str| cat.get(id).unwrap_or_else(|| panic!("{id}")).representative();

    let mut claims: Vec<Claim> = Vec::new();

    // ---- M2: the four named maps against the parametric families ----
    for alpha in [1i64, 2, 3] {
        claims.push(Claim {
            id: format!("m2-family-c-via-psi[alpha={alpha}]"),
            lhs: get("M2.M3"),
            rhs: catalog::m2_family_c(&s(alpha), &s(-alpha)).unwrap(),
            atoms: vec![NamedMorphism::Psi(s(alpha))],
        });
    }
    for (alpha, gamma) in [(1i64, 1i64), (2, -1)] {
        claims.push(Claim {
            id: format!("m2-family-c-via-chi[alpha={alpha},gamma={gamma}]"),
            lhs: get("M2.M4"),
            rhs: catalog::m2_family_c(&s(alpha), &s(gamma)).unwrap(),
            atoms: vec![NamedMorphism::Chi(s(alpha), s(gamma))],
        });
    }
    for alpha in [2i64, 3] {
        claims.push(Claim {
            id: format!("m2-family-d-via-xi[alpha={alpha}]"),
            lhs: get("M2.M5"),
            rhs: catalog::m2_family_d(&s(alpha)).unwrap(),
            atoms: vec![NamedMorphism::Xi(s(alpha))],
        });
    }
    for beta in [2i64, 4] {
        claims.push(Claim {
            id: format!("m2-family-e-via-psi[beta={beta}]"),
            lhs: get("M2.M6"),
            rhs: catalog::m2_family_e(&s(beta)).unwrap(),
            atoms: vec![NamedMorphism::Psi(q(beta, 2))],
        });
    }

    // ---- Case 1: the one-parameter deformation reaches 1-I ----
    for a in [2i64, 3] {
        let pre = op3(vec![
            ("e11", vec![(s(1), "e22"), (s(1), "e33")]),
            ("e22", vec![(s(1), "e33")]),
            ("e12", vec![(s(-1), "e12")]),
            ("e13", vec![(s(-1), "e13")]),
            ("e21", vec![(s(-a), "e32")]),
            ("e23", vec![(s(a), "e12"), (s(-1), "e23")]),
        ]);
        claims.push(Claim {
            id: format!("m3-case1-deformation-to-1-I[a={a}]"),
            lhs: pre,
            rhs: get("M3.1-I"),
            atoms: vec![NamedMorphism::Upsilon(s(a))],
        });
    }

    // ---- Case 2 / case 5 intermediates ----
    let proof2a = frame5(vec![("e32", vec![(s(1), "e33"), (s(-1), "e32")])]);
    let proof2b = frame5(vec![("e23", vec![(s(1), "e22"), (s(-1), "e23")])]);
    let proof2c = frame5(vec![
        ("e23", vec![(s(1), "e22"), (s(-1), "e23")]),
        ("e32", vec![(s(1), "e33"), (s(-1), "e32")]),
    ]);
    let proof2d = frame5(vec![
        ("e23", vec![(s(1), "e33"), (s(-1), "e23")]),
        ("e32", vec![(s(1), "e22"), (s(-1), "e32")]),
    ]);
    claims.push(Claim {
        id: "m3-case2-M4p-form-equals-5-II".to_string(),
        lhs: proof2a.clone(),
        rhs: get("M3.5-II"),
        atoms: vec![],
    });
    claims.push(Claim {
        id: "m3-case2-M4T-form-to-5-II".to_string(),
        lhs: proof2b.clone(),
        rhs: get("M3.5-II"),
        atoms: vec![NamedMorphism::Phi23],
    });
    // The same operators arise in the case-5 analysis under the names
    // 5-III/5-IV/5-V; both claim sets are replayed.
    claims.push(Claim {
        id: "m3-case5-M4T-form-to-5-II".to_string(),
        lhs: proof2b.clone(),
        rhs: get("M3.5-II"),
        atoms: vec![NamedMorphism::Phi23],
    });
    for b in [1i64, 2] {
        let rho = NamedMorphism::Rho(q(1, b), s(b), q(1, b));
        claims.push(Claim {
            id: format!("m3-case2-M5-form-to-2-I[b={b}]"),
            lhs: proof2c.clone(),
            rhs: get("M3.2-I"),
            atoms: vec![NamedMorphism::Phi23, rho.clone(), NamedMorphism::Phi23],
        });
        claims.push(Claim {
            id: format!("m3-case5-M5-form-to-2-I[b={b}]"),
            lhs: proof2c.clone(),
            rhs: get("M3.2-I"),
            atoms: vec![NamedMorphism::Phi23, rho.clone(), NamedMorphism::Phi23],
        });
        // The mirrored claim verifies under the transpose-mirrored map.
        claims.push(Claim {
            id: format!("m3-case2-M5T-form-to-2-II[b={b}]"),
            lhs: proof2d.clone(),
            rhs: get("M3.2-II"),
            atoms: vec![
                NamedMorphism::Transpose,
                NamedMorphism::Phi23,
                rho.clone(),
                NamedMorphism::Phi23,
                NamedMorphism::Transpose,
            ],
        });
        claims.push(Claim {
            id: format!("m3-2-II-to-case5-M5T-form[b={b}]"),
            lhs: get("M3.2-II"),
            rhs: proof2d.clone(),
            atoms: vec![rho],
        });
    }

    // ---- Case 3 intermediates ----
    let frame3 = |e12: Vec<(Scalar, &'static str)>, e21: Vec<(Scalar, &'static str)>| {
        op3(vec![
            ("e33", vec![(s(-1), "e33")]),
            ("e13", vec![(s(-1), "e13")]),
            ("e23", vec![(s(-1), "e23")]),
            ("e12", e12),
            ("e21", e21),
        ])
    };
    let proof3a = frame3(vec![], vec![(s(1), "e22"), (s(-1), "e21"), (s(1), "e33")]);
    let proof3b = frame3(vec![(s(1), "e11"), (s(-1), "e12"), (s(1), "e33")], vec![]);
    let proof3c = frame3(
        vec![(s(1), "e11"), (s(-1), "e12"), (s(1), "e33")],
        vec![(s(1), "e22"), (s(-1), "e21"), (s(1), "e33")],
    );
    let proof3d = frame3(
        vec![(s(1), "e22"), (s(-1), "e12"), (s(1), "e33")],
        vec![(s(1), "e11"), (s(-1), "e21"), (s(1), "e33")],
    );
    claims.push(Claim {
        id: "m3-case3-M4p-form-to-8-I".to_string(),
        lhs: proof3a.clone(),
        rhs: get("M3.8-I"),
        atoms: vec![NamedMorphism::Phi13, NamedMorphism::Transpose],
    });
    claims.push(Claim {
        id: "m3-case3-M4T-form-to-M4p-form".to_string(),
        lhs: proof3b,
        rhs: proof3a,
        atoms: vec![NamedMorphism::Phi12],
    });
    // The two endpoint labels are exchanged relative to the source text:
    // the M5-form lands on 3-I and the M5ᵀ-form on 3-II (the grid search
    // exhibits a conjugator one way and exhausts the other, and 3-I, 3-II
    // are in different orbits, so the printed assignment cannot hold).
    for b in [1i64, 2] {
        claims.push(Claim {
            id: format!("m3-case3-M5-form-to-3-I[b={b}]"),
            lhs: proof3c.clone(),
            rhs: get("M3.3-I"),
            atoms: vec![
                NamedMorphism::Phi13,
                NamedMorphism::Transpose,
                NamedMorphism::Phi23,
                NamedMorphism::Rho(q(1, b), s(b), q(1, b)),
                NamedMorphism::Phi23,
            ],
        });
        claims.push(Claim {
            id: format!("m3-case3-M5T-form-to-3-II[b={b}]"),
            lhs: proof3d.clone(),
            rhs: get("M3.3-II"),
            atoms: vec![
                NamedMorphism::Phi13,
                NamedMorphism::Transpose,
                NamedMorphism::Rho(q(1, b), s(b), q(1, b)),
            ],
        });
    }

    // ---- Case 4 intermediates ----
    let proof4a = |first: &'static str, second: &'static str, a: i64| {
        op3(vec![
            ("e11", vec![(s(1), "e22"), (s(1), "e33")]),
            ("e22", vec![(s(-1), "e22")]),
            (first, vec![(s(a), "e22")]),
            (second, vec![(q(-1, a), "e22"), (q(-1, a), "e33")]),
            ("e13", vec![(s(-1), "e13")]),
            ("e23", vec![(s(-1), "e23")]),
        ])
    };
    let p4mid = |e23: Vec<(Scalar, &'static str)>, e32: Vec<(Scalar, &'static str)>| {
        op3(vec![
            ("e22", vec![(s(-1), "e22")]),
            ("e12", vec![(s(-1), "e12")]),
            ("e13", vec![(s(-1), "e13")]),
            ("e23", e23),
            ("e32", e32),
            ("e33", vec![(s(1), "e11"), (s(1), "e22")]),
        ])
    };
    let p4mid1 = p4mid(
        vec![(s(1), "e22")],
        vec![(s(-1), "e11"), (s(-1), "e22")],
    );
    let p4mid2 = p4mid(
        vec![(s(-1), "e11"), (s(-1), "e22")],
        vec![(s(1), "e22")],
    );
    for a in [2i64] {
        claims.push(Claim {
            id: format!("m3-case4-a1-normalization[a={a}]"),
            lhs: proof4a("e12", "e21", a),
            rhs: p4mid1.clone(),
            atoms: vec![
                NamedMorphism::Phi13,
                NamedMorphism::Transpose,
                NamedMorphism::Upsilon(q(1, a)),
            ],
        });
        claims.push(Claim {
            id: format!("m3-case4-a2-normalization[a={a}]"),
            lhs: proof4a("e21", "e12", a),
            rhs: p4mid2.clone(),
            atoms: vec![
                NamedMorphism::Phi13,
                NamedMorphism::Transpose,
                NamedMorphism::Upsilon(s(a)),
            ],
        });
    }
    for b in [1i64, 2] {
        claims.push(Claim {
            id: format!("m3-case4-a1-endpoint-6-V[b={b}]"),
            lhs: p4mid1.clone(),
            rhs: get("M3.6-V"),
            atoms: vec![
                NamedMorphism::Phi23,
                NamedMorphism::Rho(q(-1, b), s(b), q(-1, b)),
                NamedMorphism::Phi23,
            ],
        });
        claims.push(Claim {
            id: format!("m3-case4-a2-endpoint-6-IV[b={b}]"),
            lhs: p4mid2.clone(),
            rhs: get("M3.6-IV"),
            atoms: vec![NamedMorphism::Rho(q(-1, b), s(b), q(1, b))],
        });
    }
    let r4b1 = op3(vec![
        ("e22", vec![(s(1), "e33")]),
        ("e12", vec![(s(1), "e11"), (s(-1), "e12")]),
        ("e21", vec![(s(1), "e22"), (s(-1), "e21"), (s(1), "e33")]),
        ("e13", vec![(s(-1), "e13")]),
        ("e23", vec![(s(-1), "e23")]),
    ]);
    let r4b2 = op3(vec![
        ("e11", vec![(s(1), "e33")]),
        ("e12", vec![(s(1), "e11"), (s(-1), "e12"), (s(1), "e33")]),
        ("e21", vec![(s(1), "e22"), (s(-1), "e21")]),
        ("e13", vec![(s(-1), "e13")]),
        ("e23", vec![(s(-1), "e23")]),
    ]);
    claims.push(Claim {
        id: "m3-case4-b1-alpha-swap".to_string(),
        lhs: r4b2,
        rhs: r4b1.clone(),
        atoms: vec![NamedMorphism::Phi12],
    });
    for b in [1i64, 2] {
        claims.push(Claim {
            id: format!("m3-case4-b1-endpoint-4-I[b={b}]"),
            lhs: r4b1.clone(),
            rhs: get("M3.4-I"),
            atoms: vec![
                NamedMorphism::Phi13,
                NamedMorphism::Transpose,
                NamedMorphism::Rho(q(1, b), s(b), q(-1, b)),
            ],
        });
    }

    // ---- Case 6 ----
    let r6a5 = op3(vec![
        ("e11", vec![(s(1), "e22")]),
        ("e12", vec![(s(-1), "e12")]),
        ("e13", vec![(s(1), "e11"), (s(1), "e22"), (s(-1), "e13")]),
        ("e31", vec![(s(-1), "e31"), (s(1), "e33")]),
        ("e32", vec![(s(-1), "e32")]),
    ]);
    claims.push(Claim {
        id: "m3-case6-M5-form-to-4-I".to_string(),
        lhs: r6a5,
        rhs: get("M3.4-I"),
        atoms: vec![NamedMorphism::Transpose, NamedMorphism::Case6Xi],
    });
    let r6a4 = op3(vec![
        ("e11", vec![(s(1), "e22")]),
        ("e12", vec![(s(-1), "e12")]),
        ("e31", vec![(s(1), "e11"), (s(1), "e22"), (s(-1), "e31")]),
        ("e32", vec![(s(-1), "e32")]),
    ]);
    claims.push(Claim {
        id: "m3-case6-M4-form-to-6-IV".to_string(),
        lhs: r6a4,
        rhs: get("M3.6-IV"),
        atoms: vec![NamedMorphism::Phi12, NamedMorphism::Transpose],
    });

    // ---- Case 8 ----
    let frame8 = |rest: Images<'static>| {
        let mut images: Images = vec![
            ("e11", vec![(s(-1), "e11")]),
            ("e12", vec![(s(-1), "e12")]),
            ("e13", vec![(s(-1), "e13")]),
        ];
        images.extend(rest);
        op3(images)
    };
    claims.push(Claim {
        id: "m3-case8-b-to-8-I".to_string(),
        lhs: frame8(vec![(
            "e23",
            vec![(s(1), "e11"), (s(1), "e33"), (s(-1), "e23")],
        )]),
        rhs: get("M3.8-I"),
        atoms: vec![NamedMorphism::Phi23],
    });
    for b in [1i64, 2] {
        claims.push(Claim {
            id: format!("m3-case8-c1-to-3-II[b={b}]"),
            lhs: frame8(vec![
                ("e23", vec![(s(1), "e11"), (s(1), "e22"), (s(-1), "e23")]),
                ("e32", vec![(s(1), "e11"), (s(1), "e33"), (s(-1), "e32")]),
            ]),
            rhs: get("M3.3-II"),
            atoms: vec![NamedMorphism::Rho(q(1, b), s(b), q(1, b))],
        });
        claims.push(Claim {
            id: format!("m3-case8-c2-to-3-I[b={b}]"),
            lhs: frame8(vec![
                ("e32", vec![(s(1), "e11"), (s(1), "e22"), (s(-1), "e32")]),
                ("e23", vec![(s(1), "e11"), (s(1), "e33"), (s(-1), "e23")]),
            ]),
            rhs: get("M3.3-I"),
            atoms: vec![
                NamedMorphism::Phi23,
                NamedMorphism::Rho(q(1, b), s(b), q(1, b)),
                NamedMorphism::Phi23,
            ],
        });
    }

    for claim in &claims {
        match resolve(claim) {
            Ok(note) => records.push(record(
                format!("replay/{}", claim.id),
                true,
                format!("verified ({note})"),
            )),
            Err(why) => {
                let detail = format!(
                    "{why}; lhs:\n{}\nrhs:\n{}",
                    claim.lhs.to_text("lhs"),
                    claim.rhs.to_text("rhs")
                );
                records.push(record(format!("replay/{}", claim.id), false, detail));
            }
        }
    }

    records.push(case6_psi_normalization(cat, &m3));
    records.extend(case2_second_variant(&m3));
    records.push(m4_prime_conjugator(cat));

    CampaignReport::new("replay-conjugations", records, start.elapsed())
}

/// The case-6 block normalization: conjugating `6-II` backwards through
/// the shear must produce the pinned intermediate form
/// (`e11 ↦ e22`, `e22, e33, e13 ↦ 0`, `e31 ↦ e33 - e31`).
fn case6_psi_normalization(cat: &Catalog, m3: &Arc<AlgebraContext>) -> CheckRecord {
    let psi = named(m3, NamedMorphism::Case6Psi).expect("case6psi builds");
    let q2 = cat.get("M3.6-II").unwrap().representative();
    let expect = |opv: &OperatorMatrix| -> bool {
        let img = |l: &str| opv.image_of_basis(m3.label_index(l).unwrap());
        let e = |l: &str| m3.basis_vector(m3.label_index(l).unwrap());
        let zero = |v: &[Scalar]| v.iter().all(Scalar::is_zero);
        img("e11") == e("e22")
            && zero(&img("e22"))
            && zero(&img("e33"))
            && zero(&img("e13"))
            && img("e31")
                == e("e33")
                    .iter()
                    .zip(&e("e31"))
                    .map(|(a, b)| a - b)
                    .collect::<Vec<_>>()
    };
    for (note, m) in [("as stated", psi.inverse()), ("inverse map", psi.clone())] {
        let q1 = q2.conjugate_by(&m).expect("same context");
        if q1.rb_check().is_pass() && expect(&q1) {
            let back = q1.conjugate_by(&m.inverse()).expect("same context");
            if back == q2 {
                return record(
                    "replay/m3-case6-psi-normalization",
                    true,
                    format!("verified ({note})"),
                );
            }
        }
    }
    record(
        "replay/m3-case6-psi-normalization",
        false,
        "neither orientation reproduces the pinned intermediate form",
    )
}

/// The case-2 second variant: the parametric deformation, its transport
/// to the three-subalgebra extension, and the final conjugation to a
/// primitive operator.
fn case2_second_variant(m3: &Arc<AlgebraContext>) -> Vec<CheckRecord> {
    let mut records = Vec::new();
    let d3 = m3.span_of_labels(&["e11", "e22", "e33"]).unwrap();
    let upper = m3.span_of_labels(&["e12", "e13", "e23"]).unwrap();
    let a_plus = {
        let e = |l: &str| m3.basis_vector(m3.label_index(l).unwrap());
        let combo = |terms: &[(i64, &str)]| {
            let mut v = vec![Scalar::zero(); 9];
            for (c, l) in terms {
                for (vk, ek) in v.iter_mut().zip(e(l)) {
                    *vk += &(&s(*c) * &ek);
                }
            }
            v
        };
        crate::linalg::Subspace::from_vectors(
            9,
            vec![
                combo(&[(1, "e21"), (-1, "e23")]),
                combo(&[(1, "e32"), (1, "e12")]),
                combo(&[(1, "e11"), (-1, "e33"), (1, "e31"), (-1, "e13")]),
            ],
        )
    };
    let sub = crate::algebra::SubalgebraContext::new(m3, &d3, "D3").unwrap();
    let p0 = OperatorMatrix::from_scalar_images(
        &sub.ctx,
        &[
            ("e11", vec![(s(-1), "e11"), (s(-1), "e33")]),
            ("e22", vec![(s(-1), "e11"), (s(-1), "e22"), (s(-1), "e33")]),
        ],
        Scalar::one(),
    )
    .unwrap();
    let extension = match catalog::example3_extend(m3, &upper, &d3, &a_plus, &p0) {
        Ok(op) => op,
        Err(e) => {
            records.push(record(
                "replay/m3-case2-second-variant-extension",
                false,
                format!("three-part extension failed to build: {e}"),
            ));
            return records;
        }
    };
    records.push(record(
        "replay/m3-case2-second-variant-extension",
        extension.rb_check().is_pass(),
        "three-part extension passes rb_check",
    ));

    for a in [1i64, 2] {
        let r2nd = op3(vec![
            ("e11", vec![(s(1), "e22"), (s(1), "e33")]),
            ("e22", vec![(s(1), "e33")]),
            ("e33", vec![(s(-1), "e33")]),
            ("e21", vec![(s(-1), "e21")]),
            ("e13", vec![(s(-1), "e13")]),
            ("e23", vec![(s(-1), "e23")]),
            ("e12", vec![(s(-a), "e13")]),
            ("e31", vec![(s(a), "e21")]),
            ("e32", vec![(s(-a * a), "e23"), (s(-2 * a), "e33")]),
        ]);
        if !r2nd.rb_check().is_pass() {
            records.push(record(
                format!("replay/m3-case2-second-variant[a={a}]"),
                false,
                "deformation fails rb_check",
            ));
            continue;
        }
        let phi12 = named(m3, NamedMorphism::Phi12).unwrap();
        let upsilon = named(m3, NamedMorphism::Upsilon(q(1, a))).unwrap();
        let mut verified = None;
        for (note, psi) in [
            ("as stated", phi12.compose(&upsilon).unwrap()),
            ("inverse map", phi12.compose(&upsilon).unwrap().inverse()),
            (
                "composition reversed",
                upsilon.compose(&phi12).unwrap(),
            ),
        ] {
            let p = r2nd.conjugate_by(&psi).unwrap().phi();
            if p == extension {
                verified = Some(note);
                break;
            }
        }
        records.push(record(
            format!("replay/m3-case2-second-variant[a={a}]"),
            verified.is_some(),
            match verified {
                Some(note) => format!("φ of the conjugate equals the extension ({note})"),
                None => "no reading matches the extension".to_string(),
            },
        ));
    }

    // Final step: the extension is conjugate to a primitive operator, in
    // the up-to-(φ, transpose) sense the classification works in.
    let rho = named(m3, NamedMorphism::Rho(s(1), s(1), s(1))).unwrap();
    let phi12 = named(m3, NamedMorphism::Phi12).unwrap();
    let transpose = named(m3, NamedMorphism::Transpose).unwrap();
    let chain = phi12.compose(&rho).unwrap().compose(&phi12).unwrap();
    let mut endpoint = None;
    'outer: for (note, psi) in [("as stated", chain.clone()), ("inverse map", chain.inverse())] {
        let q_op = extension.conjugate_by(&psi).unwrap();
        for case in 1..=9usize {
            for variant in [catalog::Variant::A, catalog::Variant::B, catalog::Variant::C] {
                let Ok(prim) = catalog::primitive_operator(case, variant) else {
                    continue;
                };
                let prim_t = prim.conjugate_by(&transpose).unwrap();
                let candidates = [
                    (prim.clone(), ""),
                    (prim.phi(), "φ of "),
                    (prim_t.clone(), "transpose-conjugate of "),
                    (prim_t.phi(), "φ of transpose-conjugate of "),
                ];
                for (cand, kind) in candidates {
                    if q_op == cand {
                        endpoint =
                            Some(format!("{kind}primitive {case}{variant:?} ({note})"));
                        break 'outer;
                    }
                }
            }
        }
    }
    records.push(record(
        "replay/m3-case2-second-variant-endpoint",
        endpoint.is_some(),
        endpoint.unwrap_or_else(|| "conjugate is not a primitive operator".to_string()),
    ));
    records
}

/// The `(M4) ~ (M4')` conjugacy, recovered by the bounded search.
fn m4_prime_conjugator(cat: &Catalog) -> CheckRecord {
    let m4 = cat.get("M2.M4").unwrap().representative();
    let m4p = cat.get("M2.M4p").unwrap().representative();
    match find_conjugator(&m4, &m4p, &ConjugatorSearch::default()) {
        Ok(ConjugatorOutcome::Found(m)) => record(
            "replay/m2-M4-to-M4p-conjugator",
            true,
            format!("found {}", m.name()),
        ),
        Ok(ConjugatorOutcome::NotFoundWithinBound { candidates }) => record(
            "replay/m2-M4-to-M4p-conjugator",
            false,
            format!("no conjugator within default grid ({candidates} candidates)"),
        ),
        Err(e) => record("replay/m2-M4-to-M4p-conjugator", false, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_campaign_is_green_and_large_enough() {
        let cat = Catalog::build().unwrap();
        let report = replay_conjugations(&cat);
        for r in report.failures() {
            eprintln!("FAIL {}: {}", r.id, r.detail);
        }
        assert!(report.is_green());
        assert!(report.summary.total >= 15, "got {}", report.summary.total);
    }
}
