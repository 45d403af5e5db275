//! The machine-readable catalog of Rota-Baxter operators of weight 1 on
//! `M₂(Q)`, `M₃(Q)` and `Q³`, plus the general splitting constructors.
//!
//! Contents:
//!
//! - `F3.case1` … `F3.case9` — the nine non-inner-splitting operators on
//!   `Q³` (up to coordinate permutation and `φ`), and `…p` for their
//!   `φ`-images;
//! - `M2.M1` … `M2.M6`, `M2.M4p` — the fixed `M₂` orbit representatives,
//!   plus the three parametric families `M2.family-c/d/e`;
//! - 36 `M₃` entries: 20 primitive operators `Xa/Xb/Xc` (triangular
//!   extension of a diagonal case: strictly upper ↦ 0, strictly lower ↦
//!   −id), 4 exceptional cases (`1-I`, `6-I`, `6-II`, `6-III`) and 12
//!   block extensions of `F ⊕ M₂` (`2-I` … `8-I`, tag `block-extension`).
//!
//! Every fixed entry and every family sample is `rb_check`-verified at
//! build time; a failure aborts the build with the witness pair, since it
//! can only mean a transcription bug.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::{self, AlgebraContext, SubalgebraContext};
use crate::linalg::{Mat, Poly, Scalar, Subspace};
use crate::operator::{OperatorError, OperatorMatrix, RbOutcome};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("summands do not form a direct-sum decomposition of the algebra")]
    NotDirectSum,
    #[error("summand `{0}` is not product-closed")]
    SummandNotClosed(String),
    #[error("`{0}` is not a module over the middle subalgebra")]
    NotModule(String),
    #[error("the middle operator is not Rota-Baxter on its subalgebra: {0}")]
    MiddleNotRb(String),
    #[error("side condition violated: {0}")]
    SideCondition(String),
    #[error("constructed operator fails the Rota-Baxter identity: {0}")]
    RbFailed(String),
    #[error("no such case: {0}")]
    BadCase(String),
    #[error("catalog entry `{id}` fails rb_check: {witness}")]
    EntryFailed { id: String, witness: String },
    #[error("operator error: {0}")]
    Operator(#[from] OperatorError),
}

// ---------------------------------------------------------------------------
// Splitting constructors
// ---------------------------------------------------------------------------

/// The splitting operator of a direct-sum decomposition into two
/// subalgebras: `P(a₁ + a₂) = -λ·a₂`.
pub fn split_operator(
    ctx: &Arc<AlgebraContext>,
    a1: &Subspace,
    a2: &Subspace,
    weight: &Scalar,
) -> Result<OperatorMatrix, CatalogError> {
    for (s, name) in [(a1, "A1"), (a2, "A2")] {
        if !ctx.is_product_closed(s) {
            return Err(CatalogError::SummandNotClosed(name.to_string()));
        }
    }
    if !a1.is_direct_sum_with(a2) || a1.dim() + a2.dim() != ctx.dim() {
        return Err(CatalogError::NotDirectSum);
    }
    let decompose = DirectSum::new(ctx.dim(), &[a1, a2]);
    let d = ctx.dim();
    let mut m = Mat::zero(d, d);
    for i in 0..d {
        let parts = decompose.split(&ctx.basis_vector(i));
        let img: Vec<Scalar> = parts[1].iter().map(|x| -&(weight * x)).collect();
        m.set_col(i, &img);
    }
    let op = OperatorMatrix::new(Arc::clone(ctx), m, weight.clone())?;
    ensure_rb(ctx, op)
}

/// The triangular extension `P(a₋ + a₀ + a₊) = R₀(a₀) - λ·a₊` of an
/// operator `R₀` on the middle subalgebra, where `A₋`, `A₊` are
/// subalgebras and `A₀`-bimodules.
pub fn triangular_split(
    ctx: &Arc<AlgebraContext>,
    a_minus: &Subspace,
    a_zero: &Subspace,
    a_plus: &Subspace,
    r_zero: &OperatorMatrix,
    weight: &Scalar,
) -> Result<OperatorMatrix, CatalogError> {
    for (s, name) in [(a_minus, "A-"), (a_zero, "A0"), (a_plus, "A+")] {
        if !ctx.is_product_closed(s) {
            return Err(CatalogError::SummandNotClosed(name.to_string()));
        }
    }
    // Module condition: A0·side and side·A0 must stay in side.
    for (side, name) in [(a_minus, "A-"), (a_plus, "A+")] {
        let left = ctx.product_span(a_zero, side);
        let right = ctx.product_span(side, a_zero);
        if !side.contains_subspace(&left) || !side.contains_subspace(&right) {
            return Err(CatalogError::NotModule(name.to_string()));
        }
    }
    build_three_part(ctx, a_minus, a_zero, a_plus, r_zero, weight)
}

/// The weight-1 extension `R(a₋ + a₀ + a₊) = P₀(a₀) - a₊` over three
/// subalgebras, gated by the side condition
/// `R(A₀)·A₋ ⊆ A₋` and `A₋·R(A₀) ⊆ A₋` (diagnosed failure otherwise)
/// and by a final Rota-Baxter verification.
pub fn example3_extend(
    ctx: &Arc<AlgebraContext>,
    a_minus: &Subspace,
    a_zero: &Subspace,
    a_plus: &Subspace,
    p_zero: &OperatorMatrix,
) -> Result<OperatorMatrix, CatalogError> {
    for (s, name) in [(a_minus, "A-"), (a_zero, "A0"), (a_plus, "A+")] {
        if !ctx.is_product_closed(s) {
            return Err(CatalogError::SummandNotClosed(name.to_string()));
        }
    }
    let one = Scalar::one();
    let op = build_three_part(ctx, a_minus, a_zero, a_plus, p_zero, &one)?;
    // Side condition on the image of the middle part.
    let r_a0 = {
        let images: Vec<Vec<Scalar>> = a_zero.basis().iter().map(|b| op.apply(b)).collect();
        Subspace::from_vectors(ctx.dim(), images)
    };
    let left = ctx.product_span(&r_a0, a_minus);
    let right = ctx.product_span(a_minus, &r_a0);
    if !a_minus.contains_subspace(&left) || !a_minus.contains_subspace(&right) {
        return Err(CatalogError::SideCondition(
            "R(A0)·A- or A-·R(A0) leaves A-".to_string(),
        ));
    }
    ensure_rb(ctx, op)
}

/// Shared assembly for the three-part constructions. `r_zero` lives on the
/// subalgebra context of `a_zero` (basis order = canonical basis of the
/// subspace) and must be Rota-Baxter there.
fn build_three_part(
    ctx: &Arc<AlgebraContext>,
    a_minus: &Subspace,
    a_zero: &Subspace,
    a_plus: &Subspace,
    r_zero: &OperatorMatrix,
    weight: &Scalar,
) -> Result<OperatorMatrix, CatalogError> {
    let total = a_minus.sum(a_zero).sum(a_plus);
    if total.dim() != ctx.dim()
        || a_minus.dim() + a_zero.dim() + a_plus.dim() != ctx.dim()
    {
        return Err(CatalogError::NotDirectSum);
    }
    if r_zero.matrix().rows() != a_zero.dim() {
        return Err(CatalogError::MiddleNotRb(format!(
            "operator dimension {} does not match A0 dimension {}",
            r_zero.matrix().rows(),
            a_zero.dim()
        )));
    }
    if r_zero.weight() != weight {
        return Err(CatalogError::MiddleNotRb(format!(
            "middle operator weight {} does not match {}",
            r_zero.weight(),
            weight
        )));
    }
    if let RbOutcome::Fail(w) = r_zero.rb_check() {
        return Err(CatalogError::MiddleNotRb(
            RbOutcome::Fail(w).describe(r_zero.context()),
        ));
    }
    let sub = SubalgebraContext::new(ctx, a_zero, "A0")
        .map_err(|_| CatalogError::SummandNotClosed("A0".to_string()))?;
    let decompose = DirectSum::new(ctx.dim(), &[a_minus, a_zero, a_plus]);
    let d = ctx.dim();
    let mut m = Mat::zero(d, d);
    for i in 0..d {
        let parts = decompose.split(&ctx.basis_vector(i));
        // parts[1] is in ambient coordinates; convert to A0 coordinates.
        let zero_coords = a_zero
            .coords_of(&parts[1])
            .expect("middle part lies in A0");
        let r0_img = sub.embed(&r_zero.apply(&zero_coords));
        let img: Vec<Scalar> = r0_img
            .iter()
            .zip(&parts[2])
            .map(|(r, p)| r - &(weight * p))
            .collect();
        m.set_col(i, &img);
    }
    Ok(OperatorMatrix::new(Arc::clone(ctx), m, weight.clone())?)
}

fn ensure_rb(
    ctx: &Arc<AlgebraContext>,
    op: OperatorMatrix,
) -> Result<OperatorMatrix, CatalogError> {
    match op.rb_check() {
        RbOutcome::Pass => Ok(op),
        fail => Err(CatalogError::RbFailed(fail.describe(ctx))),
    }
}

/// Splits vectors along a direct-sum decomposition given by subspace bases.
struct DirectSum {
    widths: Vec<usize>,
    /// Columns: all basis vectors of all parts, stacked.
    solver: Mat,
}

impl DirectSum {
    fn new(_ambient: usize, parts: &[&Subspace]) -> Self {
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        let mut widths = Vec::new();
        for p in parts {
            widths.push(p.dim());
            cols.extend(p.basis().iter().cloned());
        }
        let solver = Mat::from_rows(cols).transpose();
        DirectSum {
            widths,
            solver,
        }
    }

    /// Ambient components of `v` in each part.
    fn split(&self, v: &[Scalar]) -> Vec<Vec<Scalar>> {
        let coords = self
            .solver
            .solve(v)
            .expect("vector lies in the direct sum");
        let mut out = Vec::with_capacity(self.widths.len());
        let mut offset = 0;
        for &w in &self.widths {
            let mut part = vec![Scalar::zero(); v.len()];
            for k in 0..w {
                let c = &coords[offset + k];
                if c.is_zero() {
                    continue;
                }
                for (p, b) in part.iter_mut().zip(0..v.len()) {
                    *p += &(c * self.solver.get(b, offset + k));
                }
            }
            offset += w;
            out.push(part);
        }
        out
    }
}

// ---------------------------------------------------------------------------
// F³ cases
// ---------------------------------------------------------------------------

/// The nine non-inner-splitting diagonal cases on `Q³` (weight 1).
pub fn f3_case(k: usize) -> Result<OperatorMatrix, CatalogError> {
    let images: &[(&str, &[(i64, &str)])] = match k {
        1 => &[("f1", &[(1, "f2"), (1, "f3")]), ("f2", &[(1, "f3")])],
        2 => &[
            ("f1", &[(1, "f2"), (1, "f3")]),
            ("f2", &[(1, "f3")]),
            ("f3", &[(-1, "f3")]),
        ],
        3 => &[
            ("f1", &[(1, "f2"), (1, "f3")]),
            ("f2", &[(-1, "f2"), (-1, "f3")]),
            ("f3", &[(-1, "f3")]),
        ],
        4 => &[
            ("f1", &[(1, "f2"), (1, "f3")]),
            ("f2", &[(-1, "f2")]),
        ],
        5 => &[("f1", &[(1, "f2"), (1, "f3")])],
        6 => &[("f1", &[(1, "f2")])],
        7 => &[("f1", &[(1, "f2")]), ("f3", &[(-1, "f3")])],
        8 => &[("f1", &[(-1, "f1")])],
        9 => &[
            ("f1", &[(1, "f2")]),
            ("f2", &[(-1, "f2")]),
            ("f3", &[(-1, "f3")]),
        ],
        _ => return Err(CatalogError::BadCase(format!("F3 case {k}"))),
    };
    Ok(OperatorMatrix::from_images(&algebra::f3(), images, Scalar::one())?)
}

/// The `φ`-companions of the nine cases, as displayed in the source
/// classification (asserted equal to `φ(f3_case(k))` by the verification
/// campaign).
pub fn f3_case_primed(k: usize) -> Result<OperatorMatrix, CatalogError> {
    let images: &[(&str, &[(i64, &str)])] = match k {
        1 => &[
            ("f1", &[(-1, "f1"), (-1, "f2"), (-1, "f3")]),
            ("f2", &[(-1, "f2"), (-1, "f3")]),
            ("f3", &[(-1, "f3")]),
        ],
        2 => &[
            ("f1", &[(-1, "f1"), (-1, "f2"), (-1, "f3")]),
            ("f2", &[(-1, "f2"), (-1, "f3")]),
        ],
        3 => &[
            ("f1", &[(-1, "f1"), (-1, "f2"), (-1, "f3")]),
            ("f2", &[(1, "f3")]),
        ],
        4 => &[
            ("f1", &[(-1, "f1"), (-1, "f2"), (-1, "f3")]),
            ("f3", &[(-1, "f3")]),
        ],
        5 => &[
            ("f1", &[(-1, "f1"), (-1, "f2"), (-1, "f3")]),
            ("f2", &[(-1, "f2")]),
            ("f3", &[(-1, "f3")]),
        ],
        6 => &[
            ("f1", &[(-1, "f1"), (-1, "f2")]),
            ("f2", &[(-1, "f2")]),
            ("f3", &[(-1, "f3")]),
        ],
        7 => &[
            ("f1", &[(-1, "f1"), (-1, "f2")]),
            ("f2", &[(-1, "f2")]),
        ],
        8 => &[("f2", &[(-1, "f2")]), ("f3", &[(-1, "f3")])],
        9 => &[("f1", &[(-1, "f1"), (-1, "f2")])],
        _ => return Err(CatalogError::BadCase(format!("F3 primed case {k}"))),
    };
    Ok(OperatorMatrix::from_images(&algebra::f3(), images, Scalar::one())?)
}

// ---------------------------------------------------------------------------
// M₂ cases
// ---------------------------------------------------------------------------

/// The fixed `M₂` orbit representatives `M1 … M6` and the `M4'` variant.
pub fn m2_case(name: &str) -> Result<OperatorMatrix, CatalogError> {
    let images: &[(&str, &[(i64, &str)])] = match name {
        "M1" => &[("e11", &[(1, "e22")]), ("e12", &[(-1, "e12")])],
        "M2" => &[("e11", &[(-1, "e11")]), ("e12", &[(-1, "e12")])],
        "M3" => &[("e21", &[(-1, "e21")])],
        "M4" => &[("e21", &[(1, "e11"), (-1, "e21")])],
        "M4p" => &[("e21", &[(-1, "e21"), (1, "e22")])],
        "M5" => &[
            ("e12", &[(1, "e11"), (-1, "e12")]),
            ("e21", &[(-1, "e21"), (1, "e22")]),
        ],
        "M6" => &[
            ("e11", &[(-1, "e11")]),
            ("e22", &[(1, "e11")]),
            ("e12", &[(-1, "e12")]),
        ],
        _ => return Err(CatalogError::BadCase(format!("M2 case {name}"))),
    };
    Ok(OperatorMatrix::from_images(&algebra::m2(), images, Scalar::one())?)
}

/// Family (c): `R(x) = -x21·(α, αγ; 1, γ)`.
pub fn m2_family_c(alpha: &Scalar, gamma: &Scalar) -> Result<OperatorMatrix, CatalogError> {
    let m2 = algebra::m2();
    let mut m = Mat::zero(4, 4);
    let col = m2.label_index("e21").unwrap();
    let img = [
        -alpha,                    // e11
        -&(alpha * gamma),         // e12
        Scalar::from_int(-1),      // e21
        -gamma,                    // e22
    ];
    for (row, v) in img.into_iter().enumerate() {
        m.set(row, col, v);
    }
    Ok(OperatorMatrix::new(m2, m, Scalar::one())?)
}

/// Family (d): `R(x) = (α·x12, -x12; -x21, x21/α)`, `α ≠ 0`.
pub fn m2_family_d(alpha: &Scalar) -> Result<OperatorMatrix, CatalogError> {
    let inv = alpha
        .recip()
        .ok_or_else(|| CatalogError::BadCase("family (d) needs α ≠ 0".to_string()))?;
    let m2 = algebra::m2();
    let mut m = Mat::zero(4, 4);
    let e12 = m2.label_index("e12").unwrap();
    let e21 = m2.label_index("e21").unwrap();
    m.set(0, e12, alpha.clone()); // e11 component
    m.set(1, e12, Scalar::from_int(-1)); // e12 component
    m.set(2, e21, Scalar::from_int(-1)); // e21 component
    m.set(3, e21, inv); // e22 component
    Ok(OperatorMatrix::new(m2, m, Scalar::one())?)
}

/// Family (e): `R(x) = (x22 - x11 + β·x21, -β²/4·x21 - x12; 0, 0)`.
pub fn m2_family_e(beta: &Scalar) -> Result<OperatorMatrix, CatalogError> {
    let m2 = algebra::m2();
    let mut m = Mat::zero(4, 4);
    let e11 = m2.label_index("e11").unwrap();
    let e12 = m2.label_index("e12").unwrap();
    let e21 = m2.label_index("e21").unwrap();
    let e22 = m2.label_index("e22").unwrap();
    m.set(0, e11, Scalar::from_int(-1));
    m.set(0, e22, Scalar::one());
    m.set(1, e12, Scalar::from_int(-1));
    m.set(0, e21, beta.clone());
    let quarter = Scalar::new(-1, 4);
    m.set(1, e21, &(beta * beta) * &quarter);
    Ok(OperatorMatrix::new(m2, m, Scalar::one())?)
}

// ---------------------------------------------------------------------------
// M₃ cases
// ---------------------------------------------------------------------------

/// Variant of a primitive operator: which coordinate transposition is
/// applied to the diagonal case before the triangular extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    A,
    B,
    C,
}

impl Variant {
    fn perm(self) -> [usize; 3] {
        match self {
            Variant::A => [0, 1, 2],
            Variant::B => [1, 0, 2], // swap first two diagonal slots
            Variant::C => [0, 2, 1], // swap last two diagonal slots
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            Variant::A => "a",
            Variant::B => "b",
            Variant::C => "c",
        }
    }
}

/// The primitive operator `case Xv`: strictly upper ↦ 0, strictly lower
/// ↦ -id, diagonal action = case `X` conjugated by the variant's
/// coordinate transposition. `(5, C)` is rejected: it coincides with
/// `(5, B)`.
pub fn primitive_operator(case: usize, variant: Variant) -> Result<OperatorMatrix, CatalogError> {
    if case == 5 && variant == Variant::C {
        return Err(CatalogError::BadCase(
            "subcase 5c coincides with subcase 5b".to_string(),
        ));
    }
    if !(1..=9).contains(&case) {
        return Err(CatalogError::BadCase(format!("diagonal case {case}")));
    }
    let m3 = algebra::m3();
    let f3 = algebra::f3();
    let diag = f3_case(case)?;
    let sigma = crate::morphism::coordinate_permutation(&f3, &variant.perm())
        .expect("coordinate permutations are automorphisms");
    let diag = diag
        .conjugate_by(&sigma)
        .expect("same context");
    let d3 = m3.span_of_labels(&["e11", "e22", "e33"]).unwrap();
    let sub = SubalgebraContext::new(&m3, &d3, "D3").expect("D3 is a subalgebra");
    let r0 = OperatorMatrix::new(Arc::clone(&sub.ctx), diag.matrix().clone(), Scalar::one())?;
    let upper = m3.span_of_labels(&["e12", "e13", "e23"]).unwrap();
    let lower = m3.span_of_labels(&["e21", "e31", "e32"]).unwrap();
    triangular_split(&m3, &upper, &d3, &lower, &r0, &Scalar::one())
}

/// The 16 non-primitive `M₃` cases, by label (`1-I`, `6-I` … `6-VI`,
/// `2-I` … `5-II`, `8-I`).
pub fn m3_case(label: &str) -> Result<OperatorMatrix, CatalogError> {
    // The 12 block extensions share the frame e12, e13 ∈ ker(R+id) and
    // e21, e31 ∈ ker R.
    const FRAME: [(&str, &[(i64, &str)]); 2] =
        [("e12", &[(-1, "e12")]), ("e13", &[(-1, "e13")])];
    let body: &[(&str, &[(i64, &str)])] = match label {
        "1-I" => &[
            ("e11", &[(1, "e22"), (1, "e33")]),
            ("e22", &[(1, "e33")]),
            ("e12", &[(-1, "e12")]),
            ("e13", &[(-1, "e13")]),
            ("e21", &[(-1, "e32")]),
            ("e23", &[(1, "e12"), (-1, "e23")]),
        ],
        "6-I" => &[
            ("e11", &[(1, "e22")]),
            ("e12", &[(-1, "e12"), (-1, "e32")]),
            ("e21", &[(-1, "e21"), (1, "e23")]),
            ("e13", &[(1, "e11"), (1, "e22"), (-1, "e13")]),
            ("e31", &[(-1, "e31"), (1, "e33")]),
        ],
        "6-II" => &[
            ("e11", &[(1, "e22")]),
            ("e21", &[(-1, "e21")]),
            ("e31", &[(-1, "e31"), (1, "e11"), (1, "e22")]),
        ],
        "6-III" => &[
            ("e11", &[(1, "e22")]),
            ("e21", &[(-1, "e21"), (-1, "e23")]),
            ("e31", &[(-1, "e31"), (1, "e11"), (1, "e22")]),
        ],
        "2-I" => &[
            ("e11", &[(1, "e22"), (1, "e33")]),
            ("e22", &[(1, "e33")]),
            ("e23", &[(-1, "e23")]),
            ("e33", &[(-1, "e33")]),
            ("e32", &[(1, "e33")]),
        ],
        "2-II" => &[
            ("e11", &[(1, "e22"), (1, "e33")]),
            ("e22", &[(1, "e33")]),
            ("e32", &[(-1, "e32")]),
            ("e33", &[(-1, "e33")]),
            ("e23", &[(1, "e33")]),
        ],
        "3-I" => &[
            ("e11", &[(-1, "e11")]),
            ("e23", &[(-1, "e23")]),
            ("e22", &[(-1, "e11"), (-1, "e22")]),
            ("e33", &[(1, "e11"), (1, "e22")]),
            ("e32", &[(1, "e11"), (1, "e22")]),
        ],
        "3-II" => &[
            ("e11", &[(-1, "e11")]),
            ("e32", &[(-1, "e32")]),
            ("e22", &[(-1, "e11"), (-1, "e22")]),
            ("e33", &[(1, "e11"), (1, "e22")]),
            ("e23", &[(1, "e11"), (1, "e22")]),
        ],
        "4-I" => &[
            ("e22", &[(1, "e11"), (1, "e33")]),
            ("e33", &[(-1, "e33")]),
            ("e32", &[(-1, "e32")]),
            ("e23", &[(1, "e33")]),
        ],
        "4-II" => &[
            ("e22", &[(1, "e11"), (1, "e33")]),
            ("e33", &[(-1, "e33")]),
            ("e23", &[(-1, "e23")]),
            ("e32", &[(1, "e33")]),
        ],
        "5-I" => &[("e11", &[(1, "e22"), (1, "e33")])],
        "5-II" => &[
            ("e11", &[(1, "e22"), (1, "e33")]),
            ("e32", &[(1, "e33"), (-1, "e32")]),
        ],
        "6-IV" => &[
            ("e22", &[(1, "e11")]),
            ("e23", &[(-1, "e23"), (1, "e11"), (1, "e22")]),
        ],
        "6-V" => &[
            ("e22", &[(1, "e11")]),
            ("e32", &[(-1, "e32"), (1, "e11"), (1, "e22")]),
        ],
        "6-VI" => &[("e11", &[(1, "e22")])],
        "8-I" => &[
            ("e11", &[(-1, "e11")]),
            ("e32", &[(1, "e11"), (1, "e22"), (-1, "e32")]),
        ],
        _ => return Err(CatalogError::BadCase(format!("M3 case {label}"))),
    };
    let exceptional = matches!(label, "1-I" | "6-I" | "6-II" | "6-III");
    let mut images: Vec<(&str, &[(i64, &str)])> = Vec::new();
    if !exceptional {
        images.extend_from_slice(&FRAME);
    }
    images.extend_from_slice(body);
    Ok(OperatorMatrix::from_images(
        &algebra::m3(),
        &images,
        Scalar::one(),
    )?)
}

// ---------------------------------------------------------------------------
// Catalog assembly
// ---------------------------------------------------------------------------

/// Construction family of a catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub enum Tag {
    /// Triangular extension of a diagonal case (strict upper ↦ 0,
    /// strict lower ↦ -id).
    Primitive,
    /// One of the four cases outside both constructions.
    Exceptional,
    /// Extension of an operator on `F ⊕ M₂` embedded block-diagonally
    /// (`e12, e13 ∈ ker(R+id)`, `e21, e31 ∈ ker R`).
    BlockExtension,
    /// Splitting operator (constructor outputs only; no catalog entry).
    Splitting,
}

/// Invariant values pinned by the source classification; all optional,
/// asserted by the acceptance suite where present.
#[derive(Debug, Clone, Default)]
pub struct ExpectedInvariants {
    /// `(dim ker R, dim ker R², dim ker R', dim ker R'², rank R(1), rank R'(1))`.
    pub six_tuple: Option<[usize; 6]>,
    pub min_poly: Option<Poly>,
    /// `(rank R(1), rank R'(1))` when pinned alone.
    pub rank_pair: Option<(usize, usize)>,
    pub ker_dim: Option<usize>,
    pub ker2_dim: Option<usize>,
    pub trace_r1: Option<Scalar>,
    /// `(dim Ann_l, dim Ann_r)` of `ker R`, in that order.
    pub ker_ann_dims: Option<(usize, usize)>,
}

/// One catalog entry: a fixed operator or a parametric family.
pub struct CatalogEntry {
    pub id: String,
    /// Where the entry sits in the classification (human-readable).
    pub case_label: String,
    pub kind: EntryKind,
    pub tags: BTreeSet<Tag>,
    pub expected: ExpectedInvariants,
}

pub enum EntryKind {
    Fixed(OperatorMatrix),
    Family(OperatorFamily),
}

/// A parametric family with its documented sample set.
pub struct OperatorFamily {
    pub param_names: Vec<&'static str>,
    pub samples: Vec<Vec<Scalar>>,
    pub build: fn(&[Scalar]) -> Result<OperatorMatrix, CatalogError>,
}

impl CatalogEntry {
    /// All concrete operators of the entry: the fixed one, or one per
    /// documented parameter sample.
    pub fn instances(&self) -> Vec<(String, OperatorMatrix)> {
        match &self.kind {
            EntryKind::Fixed(op) => vec![(self.id.clone(), op.clone())],
            EntryKind::Family(f) => f
                .samples
                .iter()
                .map(|s| {
                    let label = format!(
                        "{}[{}]",
                        self.id,
                        f.param_names
                            .iter()
                            .zip(s)
                            .map(|(n, v)| format!("{n}={v}"))
                            .collect::<Vec<_>>()
                            .join(",")
                    );
                    let op = (f.build)(s).expect("family samples are in-domain");
                    (label, op)
                })
                .collect(),
        }
    }

    /// The fixed operator, or the first family sample.
    pub fn representative(&self) -> OperatorMatrix {
        self.instances().remove(0).1
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self.kind, EntryKind::Fixed(_))
    }
}

/// The assembled catalog.
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// Build and verify the whole catalog. Any entry failing the
    /// Rota-Baxter check aborts with the witness pair.
    pub fn build() -> Result<Catalog, CatalogError> {
        let mut entries = Vec::new();
        build_m3_entries(&mut entries)?;
        build_m2_entries(&mut entries)?;
        build_f3_entries(&mut entries)?;
        for e in &entries {
            for (label, op) in e.instances() {
                if let RbOutcome::Fail(w) = op.rb_check() {
                    return Err(CatalogError::EntryFailed {
                        id: label,
                        witness: RbOutcome::Fail(w).describe(op.context()),
                    });
                }
            }
        }
        Ok(Catalog { entries })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn ids(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.id.as_str()).collect()
    }

    /// The 36 fixed `M₃` entries.
    pub fn m3_entries(&self) -> Vec<&CatalogEntry> {
        self.entries
            .iter()
            .filter(|e| e.id.starts_with("M3."))
            .collect()
    }

    pub fn m2_fixed_entries(&self) -> Vec<&CatalogEntry> {
        self.entries
            .iter()
            .filter(|e| e.id.starts_with("M2.M"))
            .collect()
    }

    pub fn m2_families(&self) -> Vec<&CatalogEntry> {
        self.entries
            .iter()
            .filter(|e| e.id.starts_with("M2.family"))
            .collect()
    }

    pub fn f3_entries(&self) -> Vec<&CatalogEntry> {
        self.entries
            .iter()
            .filter(|e| e.id.starts_with("F3."))
            .collect()
    }
}

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}

fn build_m3_entries(entries: &mut Vec<CatalogEntry>) -> Result<(), CatalogError> {
    let poly_x3_xp1 = |k: usize| {
        &Poly::x().pow(3) * &Poly::linear_root(&Scalar::from_int(-1)).pow(k)
    };
    // Six-tuples per group; primitives of cases 2..6 all appear here.
    let group_tuple = |case: usize| -> Option<[usize; 6]> {
        match case {
            2 => Some([4, 5, 4, 4, 2, 3]),
            3 => Some([4, 4, 4, 5, 1, 2]),
            4 => Some([4, 5, 4, 4, 1, 3]),
            5 => Some([5, 6, 3, 3, 2, 3]),
            6 => Some([5, 6, 3, 3, 1, 3]),
            _ => None,
        }
    };
    for case in 1..=7usize {
        for variant in [Variant::A, Variant::B, Variant::C] {
            if case == 5 && variant == Variant::C {
                continue;
            }
            let id = format!("M3.{case}{}", variant.suffix());
            let op = primitive_operator(case, variant)?;
            let mut expected = ExpectedInvariants {
                six_tuple: group_tuple(case),
                ..Default::default()
            };
            if case == 1 {
                expected.min_poly = Some(poly_x3_xp1(1));
            }
            if case == 7 {
                expected.rank_pair = Some((2, 2));
            }
            if case == 6 {
                expected.trace_r1 = Some(Scalar::one());
            }
            entries.push(CatalogEntry {
                id: id.clone(),
                case_label: format!("primitive case {case}{}", variant.suffix()),
                kind: EntryKind::Fixed(op),
                tags: BTreeSet::from([Tag::Primitive]),
                expected,
            });
        }
    }

    let block = [
        "2-I", "2-II", "3-I", "3-II", "4-I", "4-II", "5-I", "5-II", "6-IV", "6-V", "6-VI",
        "8-I",
    ];
    let exceptional = ["1-I", "6-I", "6-II", "6-III"];
    for label in exceptional.iter().chain(block.iter()) {
        let op = m3_case(label)?;
        let tag = if exceptional.contains(label) {
            Tag::Exceptional
        } else {
            Tag::BlockExtension
        };
        let mut expected = ExpectedInvariants::default();
        match *label {
            "1-I" => expected.min_poly = Some(poly_x3_xp1(2)),
            "2-I" | "2-II" => expected.six_tuple = Some([4, 5, 4, 4, 2, 3]),
            "3-I" | "3-II" => expected.six_tuple = Some([4, 4, 4, 5, 1, 2]),
            "4-I" | "4-II" => expected.six_tuple = Some([4, 5, 4, 4, 1, 3]),
            "6-I" => expected.six_tuple = Some([4, 5, 4, 4, 1, 3]),
            "6-II" | "6-III" | "6-VI" => expected.six_tuple = Some([6, 7, 2, 2, 1, 3]),
            "5-II" => expected.six_tuple = Some([5, 6, 3, 3, 2, 3]),
            "6-IV" | "6-V" => expected.six_tuple = Some([5, 6, 3, 3, 1, 3]),
            "5-I" => {
                expected.ker_dim = Some(6);
                expected.rank_pair = Some((2, 3));
            }
            "8-I" => {
                expected.ker_dim = Some(5);
                expected.ker2_dim = Some(5);
            }
            _ => {}
        }
        if label.starts_with("6-") {
            expected.trace_r1 = Some(Scalar::one());
        }
        match *label {
            "6-IV" => expected.ker_ann_dims = Some((0, 0)),
            "6-V" => expected.ker_ann_dims = Some((0, 2)),
            _ => {}
        }
        entries.push(CatalogEntry {
            id: format!("M3.{label}"),
            case_label: match tag {
                Tag::Exceptional => format!("exceptional case {label}"),
                _ => format!("block-extension case {label}"),
            },
            kind: EntryKind::Fixed(op),
            tags: BTreeSet::from([tag]),
            expected,
        });
    }
    Ok(())
}

fn build_m2_entries(entries: &mut Vec<CatalogEntry>) -> Result<(), CatalogError> {
    for name in ["M1", "M2", "M3", "M4", "M4p", "M5", "M6"] {
        entries.push(CatalogEntry {
            id: format!("M2.{name}"),
            case_label: format!("M2 classification case ({name})"),
            kind: EntryKind::Fixed(m2_case(name)?),
            tags: BTreeSet::new(),
            expected: ExpectedInvariants::default(),
        });
    }
    // Documented sample set {-2, -1, 1, 2, 3}; pairs for family (c) cover
    // both the α+γ = 0 and α+γ ≠ 0 regimes.
    let c_samples: Vec<Vec<Scalar>> = vec![
        ints(&[-2, -1]),
        ints(&[-1, 1]),
        ints(&[1, 2]),
        ints(&[2, -2]),
        ints(&[3, 1]),
    ];
    let scalar_samples: Vec<Vec<Scalar>> =
        [-2i64, -1, 1, 2, 3].iter().map(|&x| ints(&[x])).collect();
    entries.push(CatalogEntry {
        id: "M2.family-c".to_string(),
        case_label: "M2 parametric family (c)".to_string(),
        kind: EntryKind::Family(OperatorFamily {
            param_names: vec!["alpha", "gamma"],
            samples: c_samples,
            build: |p| m2_family_c(&p[0], &p[1]),
        }),
        tags: BTreeSet::new(),
        expected: ExpectedInvariants::default(),
    });
    entries.push(CatalogEntry {
        id: "M2.family-d".to_string(),
        case_label: "M2 parametric family (d)".to_string(),
        kind: EntryKind::Family(OperatorFamily {
            param_names: vec!["alpha"],
            samples: scalar_samples.clone(),
            build: |p| m2_family_d(&p[0]),
        }),
        tags: BTreeSet::new(),
        expected: ExpectedInvariants::default(),
    });
    entries.push(CatalogEntry {
        id: "M2.family-e".to_string(),
        case_label: "M2 parametric family (e)".to_string(),
        kind: EntryKind::Family(OperatorFamily {
            param_names: vec!["beta"],
            samples: scalar_samples,
            build: |p| m2_family_e(&p[0]),
        }),
        tags: BTreeSet::new(),
        expected: ExpectedInvariants::default(),
    });
    Ok(())
}

fn build_f3_entries(entries: &mut Vec<CatalogEntry>) -> Result<(), CatalogError> {
    for k in 1..=9usize {
        entries.push(CatalogEntry {
            id: format!("F3.case{k}"),
            case_label: format!("F3 diagonal case {k}"),
            kind: EntryKind::Fixed(f3_case(k)?),
            tags: BTreeSet::new(),
            expected: ExpectedInvariants::default(),
        });
    }
    for k in 1..=9usize {
        entries.push(CatalogEntry {
            id: format!("F3.case{k}p"),
            case_label: format!("F3 diagonal case {k}, φ-companion"),
            kind: EntryKind::Fixed(f3_case_primed(k)?),
            tags: BTreeSet::new(),
            expected: ExpectedInvariants::default(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{f3, m3};

    #[test]
    fn catalog_builds_and_counts() {
        let cat = Catalog::build().unwrap();
        assert_eq!(cat.m3_entries().len(), 36);
        assert_eq!(cat.m2_fixed_entries().len(), 7);
        assert_eq!(cat.m2_families().len(), 3);
        assert_eq!(cat.f3_entries().len(), 18);
        assert_eq!(cat.entries().len(), 64);
    }

    #[test]
    fn primitive_1a_images() {
        let op = primitive_operator(1, Variant::A).unwrap();
        let m3 = m3();
        let img = |label: &str| {
            m3.format_coords(&op.image_of_basis(m3.label_index(label).unwrap()))
        };
        assert_eq!(img("e11"), "e22 + e33");
        assert_eq!(img("e22"), "e33");
        assert_eq!(img("e33"), "0");
        for upper in ["e12", "e13", "e23"] {
            assert_eq!(img(upper), "0");
        }
        for lower in ["e21", "e31", "e32"] {
            assert_eq!(img(lower), format!("-{lower}"));
        }
    }

    #[test]
    fn primitive_7b_diagonal_action() {
        let op = primitive_operator(7, Variant::B).unwrap();
        let m3 = m3();
        let img = |label: &str| {
            m3.format_coords(&op.image_of_basis(m3.label_index(label).unwrap()))
        };
        assert_eq!(img("e22"), "e11");
        assert_eq!(img("e11"), "0");
        assert_eq!(img("e33"), "-e33");
    }

    #[test]
    fn primitive_rejects_5c() {
        assert!(matches!(
            primitive_operator(5, Variant::C),
            Err(CatalogError::BadCase(_))
        ));
        // 5b exists and is fine.
        assert!(primitive_operator(5, Variant::B).is_ok());
    }

    #[test]
    fn m3_case_1_i_images_match_listing() {
        let op = m3_case("1-I").unwrap();
        let m3 = m3();
        let img = |label: &str| {
            m3.format_coords(&op.image_of_basis(m3.label_index(label).unwrap()))
        };
        assert_eq!(img("e21"), "-e32");
        assert_eq!(img("e23"), "e12 - e23");
        assert_eq!(img("e11"), "e22 + e33");
        assert_eq!(img("e22"), "e33");
        assert_eq!(img("e31"), "0");
        assert_eq!(img("e33"), "0");
        assert_eq!(img("e12"), "-e12");
    }

    #[test]
    fn f3_case9_images() {
        let op = f3_case(9).unwrap();
        let f3 = f3();
        let img =
            |label: &str| f3.format_coords(&op.image_of_basis(f3.label_index(label).unwrap()));
        assert_eq!(img("f1"), "f2");
        assert_eq!(img("f2"), "-f2");
        assert_eq!(img("f3"), "-f3");
    }

    #[test]
    fn m2_m6_formula() {
        let op = m2_case("M6").unwrap();
        let m2 = crate::algebra::m2();
        // R(x) = (x22 - x11, -x12; 0, 0).
        let x = vec![
            Scalar::from_int(3),
            Scalar::from_int(5),
            Scalar::from_int(7),
            Scalar::from_int(11),
        ];
        let rx = op.apply(&x);
        assert_eq!(rx, vec![
            Scalar::from_int(8),
            Scalar::from_int(-5),
            Scalar::zero(),
            Scalar::zero(),
        ]);
        assert!(op.rb_check().is_pass());
        let _ = m2;
    }

    #[test]
    fn split_operator_upper_lower() {
        let m3 = m3();
        let a1 = m3
            .span_of_labels(&["e11", "e22", "e33", "e12", "e13", "e23"])
            .unwrap();
        let a2 = m3.span_of_labels(&["e21", "e31", "e32"]).unwrap();
        let op = split_operator(&m3, &a1, &a2, &Scalar::one()).unwrap();
        assert!(op.rb_check().is_pass());
        // R(1) = 0: inner-splitting.
        assert!(op.is_inner_splitting().unwrap());
        assert!(op.is_splitting());
    }

    #[test]
    fn split_operator_f3_skew_decomposition() {
        let f3 = f3();
        let one = Scalar::one();
        let a1 = Subspace::from_vectors(
            3,
            vec![
                vec![one.clone(), one.clone(), Scalar::zero()],
                vec![Scalar::zero(), Scalar::zero(), one.clone()],
            ],
        );
        let a2 = Subspace::span_of(3, vec![Scalar::zero(), one.clone(), Scalar::zero()]);
        let op = split_operator(&f3, &a1, &a2, &one).unwrap();
        assert!(op.rb_check().is_pass());
        // R(f1) = f2, R(f2) = -f2, R(f3) = 0.
        assert_eq!(
            f3.format_coords(&op.image_of_basis(0)),
            "f2"
        );
        assert_eq!(
            f3.format_coords(&op.image_of_basis(1)),
            "-f2"
        );
    }

    #[test]
    fn split_operator_rejects_non_subalgebra() {
        let m3 = m3();
        let a1 = m3
            .span_of_labels(&["e11", "e22", "e33", "e12", "e13", "e21"])
            .unwrap(); // e12·e21 = e11 fine, e21·e12 = e22 fine, but e13·? -- e21·e13 = e23 missing
        let a2 = m3.span_of_labels(&["e23", "e31", "e32"]).unwrap();
        assert!(matches!(
            split_operator(&m3, &a1, &a2, &Scalar::one()),
            Err(CatalogError::SummandNotClosed(_))
        ));
    }

    #[test]
    fn triangular_split_zero_middle_reduces_to_split() {
        let m3 = m3();
        let upper = m3
            .span_of_labels(&["e11", "e22", "e33", "e12", "e13", "e23"])
            .unwrap();
        let lower = m3.span_of_labels(&["e21", "e31", "e32"]).unwrap();
        let zero = Subspace::zero(9);
        let sub = SubalgebraContext::new(&m3, &zero, "0").unwrap();
        let r0 = OperatorMatrix::zero(&sub.ctx, Scalar::one());
        let tri = triangular_split(&m3, &upper, &zero, &lower, &r0, &Scalar::one()).unwrap();
        let split = split_operator(&m3, &upper, &lower, &Scalar::one()).unwrap();
        assert_eq!(tri, split);
    }

    #[test]
    fn example3_degenerate_matches_triangular_split() {
        let m3 = m3();
        let upper = m3.span_of_labels(&["e12", "e13", "e23"]).unwrap();
        let lower = m3.span_of_labels(&["e21", "e31", "e32"]).unwrap();
        let d3 = m3.span_of_labels(&["e11", "e22", "e33"]).unwrap();
        let sub = SubalgebraContext::new(&m3, &d3, "D3").unwrap();
        let diag = f3_case(1).unwrap();
        let r0 =
            OperatorMatrix::new(Arc::clone(&sub.ctx), diag.matrix().clone(), Scalar::one())
                .unwrap();
        let via_e3 = example3_extend(&m3, &upper, &d3, &lower, &r0).unwrap();
        let via_tri = triangular_split(&m3, &upper, &d3, &lower, &r0, &Scalar::one()).unwrap();
        assert_eq!(via_e3, via_tri);
        assert_eq!(via_e3, primitive_operator(1, Variant::A).unwrap());
    }

    #[test]
    fn family_samples_all_pass_rb() {
        let cat = Catalog::build().unwrap();
        for fam in cat.m2_families() {
            let instances = fam.instances();
            assert_eq!(instances.len(), 5, "{} sample count", fam.id);
            for (label, op) in instances {
                assert!(op.rb_check().is_pass(), "{label}");
            }
        }
    }
}
