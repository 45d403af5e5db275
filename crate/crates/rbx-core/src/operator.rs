//! Linear operators on an algebra and the Rota-Baxter identity machinery.
//!
//! An [`OperatorMatrix`] stores a linear map `R` on an [`AlgebraContext`]
//! as a `d×d` matrix (column `i` = coordinates of `R(basis_i)`) together
//! with a weight `λ`. The weight is recorded metadata: [`OperatorMatrix::rb_check`]
//! is the authority on whether the pair actually satisfies
//!
//! ```text
//! R(eᵢ)·R(eⱼ) = R( R(eᵢ)·eⱼ + eᵢ·R(eⱼ) + λ·eᵢ·eⱼ )
//! ```
//!
//! on all basis pairs, which suffices by bilinearity.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{self, AlgebraContext, AlgebraError, SubalgebraContext};
use crate::linalg::{Mat, Poly, Scalar, Subspace};

/// Errors from operator construction and transforms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OperatorError {
    #[error("operator matrix must be {dim}x{dim} for this context, got {rows}x{cols}")]
    BadShape { dim: usize, rows: usize, cols: usize },
    #[error("operators belong to different algebra contexts")]
    ContextMismatch,
    #[error("weight must be nonzero")]
    ZeroWeight,
    #[error("context has no unit")]
    NonUnital,
    #[error("context does not support an element rank (not a matrix algebra or sum of fields)")]
    NoElementRank,
    #[error("algebra error: {0}")]
    Algebra(#[from] AlgebraError),
    #[error("projection error: {0}")]
    Projection(String),
    #[error("operator parse error: {0}")]
    Parse(String),
}

/// A linear operator with an attached Rota-Baxter weight.
#[derive(Clone, PartialEq, Eq)]
pub struct OperatorMatrix {
    ctx: Arc<AlgebraContext>,
    matrix: Mat,
    weight: Scalar,
}

/// Outcome of the Rota-Baxter identity check, carrying the first failing
/// basis pair as a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RbOutcome {
    Pass,
    Fail(RbWitness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RbWitness {
    pub i: usize,
    pub j: usize,
    pub lhs: Vec<Scalar>,
    pub rhs: Vec<Scalar>,
}

impl RbOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, RbOutcome::Pass)
    }

    pub fn describe(&self, ctx: &AlgebraContext) -> String {
        match self {
            RbOutcome::Pass => "rb-identity holds on all basis pairs".to_string(),
            RbOutcome::Fail(w) => format!(
                "rb-identity fails on ({}, {}): lhs = {}, rhs = {}",
                ctx.label(w.i),
                ctx.label(w.j),
                ctx.format_coords(&w.lhs),
                ctx.format_coords(&w.rhs)
            ),
        }
    }
}

impl OperatorMatrix {
    pub fn new(
        ctx: Arc<AlgebraContext>,
        matrix: Mat,
        weight: Scalar,
    ) -> Result<Self, OperatorError> {
        let d = ctx.dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(OperatorError::BadShape {
                dim: d,
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        Ok(OperatorMatrix { ctx, matrix, weight })
    }

    /// The zero operator of the given weight.
    pub fn zero(ctx: &Arc<AlgebraContext>, weight: Scalar) -> Self {
        OperatorMatrix {
            ctx: Arc::clone(ctx),
            matrix: Mat::zero(ctx.dim(), ctx.dim()),
            weight,
        }
    }

    /// `c · id` of the given weight.
    pub fn scalar_multiple_of_identity(
        ctx: &Arc<AlgebraContext>,
        c: &Scalar,
        weight: Scalar,
    ) -> Self {
        OperatorMatrix {
            ctx: Arc::clone(ctx),
            matrix: Mat::identity(ctx.dim()).scale(c),
            weight,
        }
    }

    /// Build from a list of images `R(label) = Σ coeff·label`, weight 1
    /// unless stated. Labels omitted from the list map to zero.
    pub fn from_images(
        ctx: &Arc<AlgebraContext>,
        images: &[(&str, &[(i64, &str)])],
        weight: Scalar,
    ) -> Result<Self, OperatorError> {
        let d = ctx.dim();
        let mut m = Mat::zero(d, d);
        for (src, terms) in images {
            let col = ctx.label_index(src)?;
            let mut v = vec![Scalar::zero(); d];
            for (c, label) in *terms {
                let row = ctx.label_index(label)?;
                v[row] += &Scalar::from_int(*c);
            }
            m.set_col(col, &v);
        }
        OperatorMatrix::new(Arc::clone(ctx), m, weight)
    }

    /// Like [`OperatorMatrix::from_images`] but with rational coefficients.
    pub fn from_scalar_images(
        ctx: &Arc<AlgebraContext>,
        images: &[(&str, Vec<(Scalar, &str)>)],
        weight: Scalar,
    ) -> Result<Self, OperatorError> {
        let d = ctx.dim();
        let mut m = Mat::zero(d, d);
        for (src, terms) in images {
            let col = ctx.label_index(src)?;
            let mut v = vec![Scalar::zero(); d];
            for (c, label) in terms {
                let row = ctx.label_index(label)?;
                v[row] += c;
            }
            m.set_col(col, &v);
        }
        OperatorMatrix::new(Arc::clone(ctx), m, weight)
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn weight(&self) -> &Scalar {
        &self.weight
    }

    pub fn apply(&self, coords: &[Scalar]) -> Vec<Scalar> {
        self.matrix.apply(coords)
    }

    /// Image of a single basis element.
    pub fn image_of_basis(&self, i: usize) -> Vec<Scalar> {
        self.matrix.col(i)
    }

    /// `R(1)`, for unital contexts.
    pub fn r_of_one(&self) -> Result<Vec<Scalar>, OperatorError> {
        let unit = self.ctx.unit().ok_or(OperatorError::NonUnital)?;
        Ok(self.apply(unit))
    }

    // -----------------------------------------------------------------
    // The Rota-Baxter identity
    // -----------------------------------------------------------------

    /// Check `R(x)R(y) = R(R(x)y + xR(y) + λxy)` on all `d²` basis pairs.
    /// Both sides are bilinear in `(x, y)`, so basis pairs suffice.
    pub fn rb_check(&self) -> RbOutcome {
        let d = self.ctx.dim();
        for i in 0..d {
            let ri = self.image_of_basis(i);
            let ei = self.ctx.basis_vector(i);
            for j in 0..d {
                let rj = self.image_of_basis(j);
                let ej = self.ctx.basis_vector(j);
                let lhs = self.ctx.mul_coords(&ri, &rj);
                let mut arg = self.ctx.mul_coords(&ri, &ej);
                for (a, b) in arg.iter_mut().zip(self.ctx.mul_coords(&ei, &rj)) {
                    *a += &b;
                }
                for (a, b) in arg.iter_mut().zip(self.ctx.mul_basis(i, j)) {
                    *a += &(&self.weight * b);
                }
                let rhs = self.apply(&arg);
                if lhs != rhs {
                    return RbOutcome::Fail(RbWitness { i, j, lhs, rhs });
                }
            }
        }
        RbOutcome::Pass
    }

    /// Rota-Baxter identity on two explicit elements; an independent route
    /// used to cross-check the basis-pair checker.
    pub fn rb_identity_on_pair(&self, x: &[Scalar], y: &[Scalar]) -> bool {
        let rx = self.apply(x);
        let ry = self.apply(y);
        let lhs = self.ctx.mul_coords(&rx, &ry);
        let mut arg = self.ctx.mul_coords(&rx, y);
        for (a, b) in arg.iter_mut().zip(self.ctx.mul_coords(x, &ry)) {
            *a += &b;
        }
        for (a, b) in arg.iter_mut().zip(self.ctx.mul_coords(x, y)) {
            *a += &(&self.weight * &b);
        }
        lhs == self.apply(&arg)
    }

    // -----------------------------------------------------------------
    // Transforms
    // -----------------------------------------------------------------

    /// The involution `φ(R) = -R - λ·id`, same weight.
    pub fn phi(&self) -> OperatorMatrix {
        let d = self.ctx.dim();
        let m = &(-&self.matrix) - &Mat::identity(d).scale(&self.weight);
        OperatorMatrix {
            ctx: Arc::clone(&self.ctx),
            matrix: m,
            weight: self.weight.clone(),
        }
    }

    /// `λ⁻¹·R` of weight 1 (weight normalization).
    pub fn normalize_weight(&self) -> Result<OperatorMatrix, OperatorError> {
        let inv = self.weight.recip().ok_or(OperatorError::ZeroWeight)?;
        Ok(OperatorMatrix {
            ctx: Arc::clone(&self.ctx),
            matrix: self.matrix.scale(&inv),
            weight: Scalar::one(),
        })
    }

    /// Rescale `R ↦ c·R` with weight multiplied accordingly
    /// (`c·R` has weight `c·λ` when `R` has weight `λ`).
    pub fn scale(&self, c: &Scalar) -> OperatorMatrix {
        OperatorMatrix {
            ctx: Arc::clone(&self.ctx),
            matrix: self.matrix.scale(c),
            weight: &self.weight * c,
        }
    }

    // -----------------------------------------------------------------
    // Kernels, images, fingerprints
    // -----------------------------------------------------------------

    pub fn kernel(&self) -> Subspace {
        self.matrix.kernel()
    }

    pub fn image(&self) -> Subspace {
        self.matrix.column_space()
    }

    /// `[dim ker R, dim ker R², …]` up to `depth ≥ 1`.
    pub fn kernel_filtration(&self, depth: usize) -> Vec<usize> {
        assert!(depth >= 1);
        let mut out = Vec::with_capacity(depth);
        let mut power = self.matrix.clone();
        for _ in 0..depth {
            out.push(power.kernel().dim());
            power = power.mul(&self.matrix);
        }
        out
    }

    /// `R(R + λ·id) = 0`, the splitting criterion.
    pub fn is_splitting(&self) -> bool {
        let d = self.ctx.dim();
        let shifted = &self.matrix + &Mat::identity(d).scale(&self.weight);
        self.matrix.mul(&shifted).is_zero()
    }

    /// `R(1) ∈ Q·1`.
    pub fn is_inner_splitting(&self) -> Result<bool, OperatorError> {
        let unit = self.ctx.unit().ok_or(OperatorError::NonUnital)?;
        let r1 = self.apply(unit);
        if r1.iter().all(Scalar::is_zero) {
            return Ok(true);
        }
        // r1 = c·unit for some c: take c from the first nonzero slot.
        let k = r1.iter().position(|x| !x.is_zero()).unwrap();
        if unit[k].is_zero() {
            return Ok(false);
        }
        let c = &r1[k] / &unit[k];
        Ok(r1 == unit.iter().map(|u| &c * u).collect::<Vec<_>>())
    }

    /// Rank of `R(1)` as an algebra element (matrix rank on `Mₙ`, nonzero
    /// coordinate count on a sum of fields).
    pub fn rank_of_r1(&self) -> Result<usize, OperatorError> {
        let r1 = self.r_of_one()?;
        element_rank(&self.ctx, &r1).ok_or(OperatorError::NoElementRank)
    }

    /// Assemble the orbit-invariant fingerprint.
    pub fn fingerprint(&self) -> Result<InvariantFingerprint, OperatorError> {
        let phi = self.phi();
        let kf = self.kernel_filtration(2);
        let kf_phi = phi.kernel_filtration(2);
        let r1 = self.r_of_one()?;
        let six_tuple = [
            kf[0],
            kf[1],
            kf_phi[0],
            kf_phi[1],
            self.rank_of_r1()?,
            phi.rank_of_r1()?,
        ];
        Ok(InvariantFingerprint {
            six_tuple,
            min_poly: self.matrix.minimal_polynomial(),
            ker_profile: self.ctx.profile(&self.kernel()),
            ker_phi_profile: self.ctx.profile(&phi.kernel()),
            trace_r1: self.ctx.trace_of(&r1),
        })
    }

    // -----------------------------------------------------------------
    // Projection onto an ideal (compression)
    // -----------------------------------------------------------------

    /// Compression `Pr ∘ R` restricted to `ideal`, inside the decomposition
    /// `ideal ⊕ complement`. Requires the sum to be direct, the ideal to be
    /// product-closed, and `R(ideal) ⊆ ideal ⊕ complement`.
    pub fn project_onto(
        &self,
        ideal: &Subspace,
        complement: &Subspace,
    ) -> Result<ProjectedOperator, OperatorError> {
        if !ideal.is_direct_sum_with(complement) {
            return Err(OperatorError::Projection(
                "ideal and complement do not form a direct sum".to_string(),
            ));
        }
        let ambient = ideal.sum(complement);
        for b in ideal.basis() {
            if !ambient.contains(&self.apply(b)) {
                return Err(OperatorError::Projection(format!(
                    "R({}) leaves ideal ⊕ complement",
                    self.ctx.format_coords(b)
                )));
            }
        }
        let sub = SubalgebraContext::new(&self.ctx, ideal, format!("{}|sub", self.ctx.name()))?;
        let k = ideal.dim();
        let mut m = Mat::zero(k, k);
        // Solve R(b_i) = (ideal part) + (complement part) and keep the
        // ideal part, in ideal coordinates.
        let mut stacked_rows: Vec<Vec<Scalar>> = Vec::with_capacity(k + complement.dim());
        stacked_rows.extend(ideal.basis().iter().cloned());
        stacked_rows.extend(complement.basis().iter().cloned());
        let stacked = Mat::from_rows(stacked_rows).transpose();
        for (i, b) in ideal.basis().iter().enumerate() {
            let rb = self.apply(b);
            let coords = stacked
                .solve(&rb)
                .expect("membership verified above");
            for r in 0..k {
                m.set(r, i, coords[r].clone());
            }
        }
        let op = OperatorMatrix::new(Arc::clone(&sub.ctx), m, self.weight.clone())?;
        Ok(ProjectedOperator { op, sub })
    }

    // -----------------------------------------------------------------
    // Structure-lemma checkers
    // -----------------------------------------------------------------

    /// Verify the commutator identity `[R(1), R(x)] = R([R(1), x])` on all
    /// basis elements. A consequence of the Rota-Baxter identity on unital
    /// algebras, so it is a necessary (not sufficient) screen.
    pub fn check_commutator_identity(&self) -> Result<RbOutcome, OperatorError> {
        let unit = self.ctx.unit().ok_or(OperatorError::NonUnital)?;
        let r1 = self.apply(unit);
        let commutator = |a: &[Scalar], b: &[Scalar]| -> Vec<Scalar> {
            let ab = self.ctx.mul_coords(a, b);
            let ba = self.ctx.mul_coords(b, a);
            ab.iter().zip(&ba).map(|(x, y)| x - y).collect()
        };
        for i in 0..self.ctx.dim() {
            let ei = self.ctx.basis_vector(i);
            let lhs = commutator(&r1, &self.apply(&ei));
            let rhs = self.apply(&commutator(&r1, &ei));
            if lhs != rhs {
                return Ok(RbOutcome::Fail(RbWitness { i, j: i, lhs, rhs }));
            }
        }
        Ok(RbOutcome::Pass)
    }

    /// Block-invariance report for diagonal `R(1)` (see [`Lemma1Report`]).
    pub fn check_block_invariance(&self) -> Lemma1Report {
        let Some(shape) = matrix_shape(&self.ctx) else {
            return Lemma1Report::NotApplicable {
                reason: "context is not a matrix-unity algebra".to_string(),
            };
        };
        let unit = match self.ctx.unit() {
            Some(u) => u,
            None => {
                return Lemma1Report::NotApplicable {
                    reason: "context has no unit".to_string(),
                }
            }
        };
        let r1 = self.apply(unit);
        // R(1) must be a diagonal matrix.
        let n = shape;
        for i in 0..n {
            for j in 0..n {
                if i != j && !r1[algebra::unity_index(n, i + 1, j + 1)].is_zero() {
                    return Lemma1Report::NotApplicable {
                        reason: "R(1) is not diagonal".to_string(),
                    };
                }
            }
        }
        let diag: Vec<Scalar> = (0..n)
            .map(|i| r1[algebra::unity_index(n, i + 1, i + 1)].clone())
            .collect();

        // Ladder hypothesis: the distinct diagonal values, sorted, are the
        // consecutive integers -f..g with f, g ≥ 0.
        let mut distinct: Vec<Scalar> = diag.clone();
        distinct.sort();
        distinct.dedup();
        let ladder = ladder_bounds(&distinct);

        // Group matrix unities by the difference of their diagonal values;
        // each class is an invariance candidate by the commutator identity.
        let mut classes: Vec<(Scalar, Vec<usize>)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let key = &diag[i] - &diag[j];
                let idx = algebra::unity_index(n, i + 1, j + 1);
                match classes.iter_mut().find(|(k, _)| *k == key) {
                    Some((_, v)) => v.push(idx),
                    None => classes.push((key, vec![idx])),
                }
            }
        }
        let mut failing_class = None;
        for (key, members) in &classes {
            let span = Subspace::from_vectors(
                self.ctx.dim(),
                members.iter().map(|&m| self.ctx.basis_vector(m)).collect(),
            );
            for &m in members {
                if !span.contains(&self.apply(&self.ctx.basis_vector(m))) {
                    failing_class = Some((key.clone(), self.ctx.label(m).to_string()));
                    break;
                }
            }
            if failing_class.is_some() {
                break;
            }
        }

        // Splitting on the extremal classes: R(R + λ) = 0 there.
        let max_key = classes
            .iter()
            .map(|(k, _)| k.clone())
            .max()
            .expect("nonempty");
        let mut extremal_ok = true;
        for (key, members) in &classes {
            if *key != max_key && *key != -&max_key {
                continue;
            }
            for &m in members {
                let rm = self.apply(&self.ctx.basis_vector(m));
                let mut shifted = self.apply(&rm);
                for (s, r) in shifted.iter_mut().zip(&rm) {
                    *s += &(&self.weight * r);
                }
                if shifted.iter().any(|x| !x.is_zero()) {
                    extremal_ok = false;
                }
            }
        }

        Lemma1Report::Checked {
            diagonal: diag,
            ladder,
            blocks_invariant: failing_class.is_none(),
            failing_block: failing_class.map(|(k, l)| format!("class {k} at {l}")),
            extremal_splitting: extremal_ok,
        }
    }

    /// For every diagonal unity `e_ii` with `R(e_ii) ∈ {0, -λ·1}`, check
    /// `e_ii·Im(R + λ·id) ⊆ ker R` and `Im(R + λ·id)·e_ii ⊆ ker R`.
    pub fn check_kernel_inclusions(&self) -> Lemma2Report {
        let Some(n) = matrix_shape(&self.ctx) else {
            return Lemma2Report {
                applicable_indices: vec![],
                ok: true,
                failures: vec![],
            };
        };
        let unit = self.ctx.unit().expect("matrix algebras are unital");
        let neg_unit: Vec<Scalar> = unit.iter().map(|u| -&(&self.weight * u)).collect();
        let d = self.ctx.dim();
        let shifted = &self.matrix.clone() + &Mat::identity(d).scale(&self.weight);
        let image_shifted = shifted.column_space();
        let ker = self.kernel();
        let mut applicable = Vec::new();
        let mut failures = Vec::new();
        for i in 1..=n {
            let idx = algebra::unity_index(n, i, i);
            let e = self.ctx.basis_vector(idx);
            let re = self.apply(&e);
            if !(re.iter().all(Scalar::is_zero) || re == neg_unit) {
                continue;
            }
            applicable.push(i);
            for b in image_shifted.basis() {
                for (side, prod) in [
                    ("left", self.ctx.mul_coords(&e, b)),
                    ("right", self.ctx.mul_coords(b, &e)),
                ] {
                    if !ker.contains(&prod) {
                        failures.push(format!(
                            "{side} product of e{i}{i} with Im(R+λ) element {} not in ker R",
                            self.ctx.format_coords(b)
                        ));
                    }
                }
            }
        }
        Lemma2Report {
            applicable_indices: applicable,
            ok: failures.is_empty(),
            failures,
        }
    }
}

/// A compressed operator together with the subalgebra context it lives on.
pub struct ProjectedOperator {
    pub op: OperatorMatrix,
    pub sub: SubalgebraContext,
}

/// Report of the diagonal-block invariance check.
///
/// When `R(1)` is a diagonal matrix, every subspace
/// `V_c = span{ e_ij : μ_i - μ_j = c }` (with `μ` the diagonal of `R(1)`)
/// must be `R`-invariant; this follows from the commutator identity.
/// When the distinct diagonal values form the consecutive-integer ladder
/// `-f, …, 0, …, g`, the operator must additionally satisfy
/// `R(R + λ) = 0` on the two extremal classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Lemma1Report {
    NotApplicable {
        reason: String,
    },
    Checked {
        diagonal: Vec<Scalar>,
        /// `(f, g)` when the ladder hypothesis holds.
        ladder: Option<(u32, u32)>,
        blocks_invariant: bool,
        failing_block: Option<String>,
        extremal_splitting: bool,
    },
}

impl Lemma1Report {
    /// Whether the checks that apply in this state all passed.
    pub fn is_ok(&self) -> bool {
        match self {
            Lemma1Report::NotApplicable { .. } => true,
            Lemma1Report::Checked {
                ladder,
                blocks_invariant,
                extremal_splitting,
                ..
            } => *blocks_invariant && (ladder.is_none() || *extremal_splitting),
        }
    }

    pub fn has_ladder(&self) -> bool {
        matches!(self, Lemma1Report::Checked { ladder: Some(_), .. })
    }
}

/// Report of the `e_ii·Im(R+λ) ⊆ ker R` inclusions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma2Report {
    /// 1-based diagonal indices where the hypothesis `R(e_ii) ∈ {0, -λ·1}`
    /// holds.
    pub applicable_indices: Vec<usize>,
    pub ok: bool,
    pub failures: Vec<String>,
}

/// The computed orbit-invariant fingerprint of an operator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantFingerprint {
    /// `(dim ker R, dim ker R², dim ker R', dim ker R'², rank R(1), rank R'(1))`
    /// with `R' = φ(R)`.
    pub six_tuple: [usize; 6],
    pub min_poly: Poly,
    pub ker_profile: crate::algebra::AlgProfile,
    pub ker_phi_profile: crate::algebra::AlgProfile,
    pub trace_r1: Scalar,
}

impl InvariantFingerprint {
    /// The six-tuple with the kernel pairs and the rank entries swapped,
    /// i.e. the tuple of `φ(R)`.
    pub fn six_tuple_swapped(&self) -> [usize; 6] {
        let t = &self.six_tuple;
        [t[2], t[3], t[0], t[1], t[5], t[4]]
    }
}

/// Shape `n` when the context is a matrix-unity algebra `Mₙ`.
pub fn matrix_shape(ctx: &AlgebraContext) -> Option<usize> {
    let d = ctx.dim();
    let n = (1..=d).find(|n| n * n == d)?;
    for i in 1..=n {
        for j in 1..=n {
            if ctx.label(algebra::unity_index(n, i, j)) != format!("e{i}{j}") {
                return None;
            }
        }
    }
    Some(n)
}

/// Rank of an algebra element: matrix rank on `Mₙ`, nonzero coordinate
/// count on a sum of orthogonal idempotents.
pub fn element_rank(ctx: &AlgebraContext, coords: &[Scalar]) -> Option<usize> {
    if let Some(n) = matrix_shape(ctx) {
        let m = Mat::from_fn(n, n, |i, j| {
            coords[algebra::unity_index(n, i + 1, j + 1)].clone()
        });
        return Some(m.rank());
    }
    // Sum of fields: all products diagonal, f_i f_j = δ_ij f_i.
    let d = ctx.dim();
    let is_sum_of_fields = (0..d).all(|i| {
        (0..d).all(|j| {
            let prod = ctx.mul_basis(i, j);
            if i == j {
                prod == ctx.basis_vector(i)
            } else {
                prod.iter().all(Scalar::is_zero)
            }
        })
    });
    is_sum_of_fields.then(|| coords.iter().filter(|c| !c.is_zero()).count())
}

fn ladder_bounds(sorted_distinct: &[Scalar]) -> Option<(u32, u32)> {
    if sorted_distinct.is_empty() {
        return None;
    }
    let ints: Option<Vec<i64>> = sorted_distinct.iter().map(Scalar::to_i64).collect();
    let ints = ints?;
    let (min, max) = (ints[0], ints[ints.len() - 1]);
    if min > 0 || max < 0 {
        return None; // must contain 0
    }
    let consecutive = ints.windows(2).all(|w| w[1] == w[0] + 1);
    consecutive.then(|| ((-min) as u32, max as u32))
}

// ---------------------------------------------------------------------------
// Operator file format
// ---------------------------------------------------------------------------

impl OperatorMatrix {
    /// Serialize in the operator file format:
    ///
    /// ```text
    /// operator <name> on <context> weight <p/q>
    /// R(<label>) = <coeff>*<label> [+ ...]
    /// ```
    ///
    /// Basis elements with zero image are omitted; terms are listed in
    /// basis order with explicit coefficients, so the output is canonical.
    pub fn to_text(&self, name: &str) -> String {
        let mut out = format!(
            "operator {} on {} weight {}\n",
            name,
            self.ctx.name(),
            self.weight
        );
        for i in 0..self.ctx.dim() {
            let img = self.image_of_basis(i);
            if img.iter().all(Scalar::is_zero) {
                continue;
            }
            out.push_str(&format!(
                "R({}) = {}\n",
                self.ctx.label(i),
                crate::algebra::format_term_sum(&img, self.ctx.labels(), true)
            ));
        }
        out
    }

    /// Parse the operator file format. `resolve` maps a context name to a
    /// context; see [`builtin_context`].
    pub fn parse_text(
        input: &str,
        resolve: impl Fn(&str) -> Option<Arc<AlgebraContext>>,
    ) -> Result<(String, OperatorMatrix), OperatorError> {
        let err = |m: &str| OperatorError::Parse(m.to_string());
        let mut lines = input
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| err("empty input"))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        match parts.as_slice() {
            ["operator", name, "on", ctx_name, "weight", w] => {
                let ctx = resolve(ctx_name)
                    .ok_or_else(|| err(&format!("unknown context `{ctx_name}`")))?;
                let weight: Scalar = w
                    .parse()
                    .map_err(|_| err(&format!("invalid weight `{w}`")))?;
                let d = ctx.dim();
                let mut m = Mat::zero(d, d);
                for line in lines {
                    let rest = line
                        .strip_prefix("R(")
                        .ok_or_else(|| err("expected `R(<label>) = ...`"))?;
                    let (label, rhs) = rest
                        .split_once(')')
                        .ok_or_else(|| err("missing `)` in image line"))?;
                    let rhs = rhs
                        .trim()
                        .strip_prefix('=')
                        .ok_or_else(|| err("missing `=` in image line"))?;
                    let col = ctx.label_index(label.trim())?;
                    let v = crate::algebra::parse_linear_combination(
                        rhs,
                        ctx.labels(),
                    )?;
                    m.set_col(col, &v);
                }
                Ok((
                    name.to_string(),
                    OperatorMatrix::new(ctx, m, weight)?,
                ))
            }
            _ => Err(err("expected header `operator <name> on <ctx> weight <w>`")),
        }
    }
}

/// Resolver for the shipped contexts `M2`, `M3`, `F3`.
pub fn builtin_context(name: &str) -> Option<Arc<AlgebraContext>> {
    match name {
        "M2" => Some(algebra::m2()),
        "M3" => Some(algebra::m3()),
        "F3" => Some(algebra::f3()),
        _ => None,
    }
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("<anon>"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{f3, m2, m3};

    #[test]
    fn zero_operator_is_rb_any_weight() {
        for w in [0i64, 1, -3] {
            let op = OperatorMatrix::zero(&m3(), Scalar::from_int(w));
            assert!(op.rb_check().is_pass());
        }
    }

    #[test]
    fn minus_lambda_id_is_rb() {
        let lam = Scalar::from_int(2);
        let op = OperatorMatrix::scalar_multiple_of_identity(&m2(), &-&lam, lam.clone());
        assert!(op.rb_check().is_pass());
        // And it is φ(0).
        let zero = OperatorMatrix::zero(&m2(), lam);
        assert_eq!(zero.phi(), op);
    }

    #[test]
    fn identity_is_not_rb_weight_one() {
        let op = OperatorMatrix::scalar_multiple_of_identity(&m2(), &Scalar::one(), Scalar::one());
        assert!(!op.rb_check().is_pass());
        // But the commutator screen passes: R(1) = 1 is central.
        assert!(op.check_commutator_identity().unwrap().is_pass());
    }

    #[test]
    fn phi_is_an_involution() {
        let op = OperatorMatrix::from_images(
            &f3(),
            &[("f1", &[(1, "f2"), (1, "f3")]), ("f2", &[(1, "f3")])],
            Scalar::one(),
        )
        .unwrap();
        assert_eq!(op.phi().phi(), op);
        assert!(op.rb_check().is_pass());
        assert!(op.phi().rb_check().is_pass());
    }

    #[test]
    fn phi_of_zero_is_minus_id() {
        let zero = OperatorMatrix::zero(&m3(), Scalar::one());
        let phi = zero.phi();
        assert_eq!(
            phi,
            OperatorMatrix::scalar_multiple_of_identity(
                &m3(),
                &Scalar::from_int(-1),
                Scalar::one()
            )
        );
    }

    #[test]
    fn normalize_weight() {
        let op = OperatorMatrix::scalar_multiple_of_identity(
            &m2(),
            &Scalar::from_int(-2),
            Scalar::from_int(2),
        );
        assert!(op.rb_check().is_pass());
        let n = op.normalize_weight().unwrap();
        assert_eq!(n.weight(), &Scalar::one());
        assert!(n.rb_check().is_pass());
        let zero_w = OperatorMatrix::zero(&m2(), Scalar::zero());
        assert_eq!(
            zero_w.normalize_weight().unwrap_err(),
            OperatorError::ZeroWeight
        );
    }

    #[test]
    fn kernel_filtration_of_identity() {
        let op = OperatorMatrix::scalar_multiple_of_identity(&m3(), &Scalar::one(), Scalar::one());
        assert_eq!(op.kernel_filtration(2), vec![0, 0]);
    }

    #[test]
    fn file_format_round_trip() {
        let op = OperatorMatrix::from_images(
            &m3(),
            &[
                ("e11", &[(1, "e22"), (1, "e33")]),
                ("e22", &[(1, "e33")]),
                ("e21", &[(-1, "e21")]),
                ("e12", &[(2, "e12"), (-3, "e23")]),
            ],
            Scalar::new(1, 2),
        )
        .unwrap();
        let text = op.to_text("sample");
        let (name, parsed) = OperatorMatrix::parse_text(&text, builtin_context).unwrap();
        assert_eq!(name, "sample");
        assert_eq!(parsed, op);
        assert_eq!(parsed.to_text("sample"), text);
    }

    #[test]
    fn commutator_screen_catches_block_violation() {
        // Start from a valid operator shape and break a block: send
        // e13 ↦ e21 while R(1) = e22 + 2·e33 pins e13 to its own class.
        let op = OperatorMatrix::from_images(
            &m3(),
            &[
                ("e11", &[(1, "e22"), (1, "e33")]),
                ("e22", &[(1, "e33")]),
                ("e13", &[(1, "e21")]),
            ],
            Scalar::one(),
        )
        .unwrap();
        assert!(!op.check_commutator_identity().unwrap().is_pass());
        let report = op.check_block_invariance();
        match report {
            Lemma1Report::Checked {
                blocks_invariant, ..
            } => assert!(!blocks_invariant),
            _ => panic!("expected applicable report"),
        }
    }

    #[test]
    fn block_invariance_for_minus_id() {
        let op = OperatorMatrix::scalar_multiple_of_identity(
            &m3(),
            &Scalar::from_int(-1),
            Scalar::one(),
        );
        let report = op.check_block_invariance();
        assert!(report.is_ok());
        assert!(!report.has_ladder()); // single value -1, no zero in range
    }
}
