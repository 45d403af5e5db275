//! Automorphisms and anti-automorphisms of the shipped algebras, operator
//! conjugation, and a bounded brute-force conjugator search.
//!
//! Every [`Morphism`] is validated at construction: its matrix must be
//! invertible, it must fix the unit, and it must be multiplicative
//! (`ψ(xy) = ψ(x)ψ(y)`) or anti-multiplicative (`ψ(xy) = ψ(y)ψ(x)`)
//! on all basis pairs according to its kind. A failing validation is an
//! error, never a silent fallback — it signals a transcription bug in a
//! formula.
//!
//! Conjugation is `R^ψ = ψ⁻¹ ∘ R ∘ ψ` for both kinds; it preserves the
//! Rota-Baxter identity and the weight.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{self, same_context, AlgebraContext};
use crate::linalg::{Mat, Scalar};
use crate::operator::{matrix_shape, OperatorMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorphismError {
    #[error("morphism matrix is singular")]
    Singular,
    #[error("map is not {kind:?}-multiplicative on basis pair ({i}, {j})")]
    NotMultiplicative { kind: MorphismKind, i: usize, j: usize },
    #[error("map does not fix the unit")]
    UnitNotFixed,
    #[error("mismatched algebra contexts")]
    ContextMismatch,
    #[error("`{name}` requires context {expected}, got {got}")]
    WrongContext {
        name: String,
        expected: String,
        got: String,
    },
    #[error("parameter out of domain: {0}")]
    BadParameter(String),
    #[error("morphism spec parse error: {0}")]
    Parse(String),
    #[error("context is not a matrix-unity algebra")]
    NotMatrixAlgebra,
    #[error("operators must share context and weight for a conjugator search")]
    IncompatibleOperators,
}

/// Whether a morphism preserves or reverses products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum MorphismKind {
    Automorphism,
    AntiAutomorphism,
}

/// A verified invertible (anti-)automorphism of an algebra context.
#[derive(Clone)]
pub struct Morphism {
    ctx: Arc<AlgebraContext>,
    matrix: Mat,
    kind: MorphismKind,
    name: String,
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.matrix == other.matrix
            && same_context(&self.ctx, &other.ctx)
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({}, {:?})", self.name, self.kind)
    }
}

impl Morphism {
    /// Validate and wrap a linear map given by its matrix
    /// (column `i` = coordinates of `ψ(basis_i)`).
    pub fn new_verified(
        ctx: Arc<AlgebraContext>,
        matrix: Mat,
        kind: MorphismKind,
        name: impl Into<String>,
    ) -> Result<Self, MorphismError> {
        let d = ctx.dim();
        assert_eq!(matrix.rows(), d);
        assert_eq!(matrix.cols(), d);
        if matrix.inverse().is_none() {
            return Err(MorphismError::Singular);
        }
        for i in 0..d {
            let pi = matrix.col(i);
            for j in 0..d {
                let pj = matrix.col(j);
                let expected = matrix.apply(ctx.mul_basis(i, j));
                let actual = match kind {
                    MorphismKind::Automorphism => ctx.mul_coords(&pi, &pj),
                    MorphismKind::AntiAutomorphism => ctx.mul_coords(&pj, &pi),
                };
                if expected != actual {
                    return Err(MorphismError::NotMultiplicative { kind, i, j });
                }
            }
        }
        if let Some(u) = ctx.unit() {
            if matrix.apply(u) != u {
                return Err(MorphismError::UnitNotFixed);
            }
        }
        Ok(Morphism {
            ctx,
            matrix,
            kind,
            name: name.into(),
        })
    }

    pub fn identity(ctx: &Arc<AlgebraContext>) -> Self {
        Morphism {
            ctx: Arc::clone(ctx),
            matrix: Mat::identity(ctx.dim()),
            kind: MorphismKind::Automorphism,
            name: "id".to_string(),
        }
    }

    pub fn context(&self) -> &Arc<AlgebraContext> {
        &self.ctx
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn kind(&self) -> MorphismKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, coords: &[Scalar]) -> Vec<Scalar> {
        self.matrix.apply(coords)
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Morphism) -> Result<Morphism, MorphismError> {
        if !same_context(&self.ctx, &other.ctx) {
            return Err(MorphismError::ContextMismatch);
        }
        let kind = if self.kind == other.kind {
            MorphismKind::Automorphism
        } else {
            MorphismKind::AntiAutomorphism
        };
        Ok(Morphism {
            ctx: Arc::clone(&self.ctx),
            matrix: self.matrix.mul(&other.matrix),
            kind,
            name: format!("({} . {})", self.name, other.name),
        })
    }

    pub fn inverse(&self) -> Morphism {
        Morphism {
            ctx: Arc::clone(&self.ctx),
            matrix: self.matrix.inverse().expect("morphisms are invertible"),
            kind: self.kind,
            name: format!("{}^-1", self.name),
        }
    }
}

impl OperatorMatrix {
    /// Conjugation `R^ψ = ψ⁻¹ ∘ R ∘ ψ`, same weight. Works for both kinds;
    /// for anti-automorphisms this is the `T ∘ R ∘ T` transpose trick.
    pub fn conjugate_by(&self, psi: &Morphism) -> Result<OperatorMatrix, MorphismError> {
        if !same_context(self.context(), psi.context()) {
            return Err(MorphismError::ContextMismatch);
        }
        let inv = psi.matrix.inverse().expect("morphisms are invertible");
        let m = inv.mul(self.matrix()).mul(&psi.matrix);
        Ok(OperatorMatrix::new(Arc::clone(self.context()), m, self.weight().clone())
            .expect("conjugation preserves shape"))
    }
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

/// Inner automorphism `X ↦ T⁻¹XT` of a matrix algebra, from an invertible
/// `n×n` matrix `T`.
pub fn inner(ctx: &Arc<AlgebraContext>, t: &Mat) -> Result<Morphism, MorphismError> {
    let n = matrix_shape(ctx).ok_or(MorphismError::NotMatrixAlgebra)?;
    assert_eq!(t.rows(), n);
    assert_eq!(t.cols(), n);
    let t_inv = t.inverse().ok_or(MorphismError::Singular)?;
    let d = ctx.dim();
    let mut m = Mat::zero(d, d);
    for i in 0..n {
        for j in 0..n {
            // ψ(e_ij) = T⁻¹ e_ij T = outer(col_i(T⁻¹), row_j(T)).
            let col = algebra::unity_index(n, i + 1, j + 1);
            for k in 0..n {
                for l in 0..n {
                    let row = algebra::unity_index(n, k + 1, l + 1);
                    m.set(row, col, t_inv.get(k, i) * t.get(j, l));
                }
            }
        }
    }
    Morphism::new_verified(
        Arc::clone(ctx),
        m,
        MorphismKind::Automorphism,
        format!("inner({:?})", t.entries().iter().map(Scalar::to_string).collect::<Vec<_>>()),
    )
}

/// The transpose anti-automorphism `e_ij ↦ e_ji`.
pub fn transpose_morphism(ctx: &Arc<AlgebraContext>) -> Result<Morphism, MorphismError> {
    let n = matrix_shape(ctx).ok_or(MorphismError::NotMatrixAlgebra)?;
    let d = ctx.dim();
    let mut m = Mat::zero(d, d);
    for i in 1..=n {
        for j in 1..=n {
            m.set(
                algebra::unity_index(n, j, i),
                algebra::unity_index(n, i, j),
                Scalar::one(),
            );
        }
    }
    Morphism::new_verified(Arc::clone(ctx), m, MorphismKind::AntiAutomorphism, "transpose")
}

/// Permutation automorphism of a matrix algebra: `e_ij ↦ e_{π(i)π(j)}`.
/// `perm` is 0-based: `perm[i]` is the image of index `i`.
pub fn index_permutation(ctx: &Arc<AlgebraContext>, perm: &[usize]) -> Result<Morphism, MorphismError> {
    let n = matrix_shape(ctx).ok_or(MorphismError::NotMatrixAlgebra)?;
    assert_eq!(perm.len(), n);
    let d = ctx.dim();
    let mut m = Mat::zero(d, d);
    for i in 0..n {
        for j in 0..n {
            m.set(
                algebra::unity_index(n, perm[i] + 1, perm[j] + 1),
                algebra::unity_index(n, i + 1, j + 1),
                Scalar::one(),
            );
        }
    }
    let name = format!(
        "perm[{}]",
        perm.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join("")
    );
    Morphism::new_verified(Arc::clone(ctx), m, MorphismKind::Automorphism, name)
}

/// Coordinate-permutation automorphism of a sum of fields:
/// `f_i ↦ f_{π(i)}`.
pub fn coordinate_permutation(
    ctx: &Arc<AlgebraContext>,
    perm: &[usize],
) -> Result<Morphism, MorphismError> {
    let d = ctx.dim();
    assert_eq!(perm.len(), d);
    let mut m = Mat::zero(d, d);
    for (i, &pi) in perm.iter().enumerate() {
        m.set(pi, i, Scalar::one());
    }
    let name = format!(
        "perm[{}]",
        perm.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join("")
    );
    Morphism::new_verified(Arc::clone(ctx), m, MorphismKind::Automorphism, name)
}

/// The named maps used throughout the classification replays.
///
/// `M₂` maps: `psi` (shear by `α`), `chi` (requires `α+γ ≠ 0`),
/// `xi` (diagonal rescale by `α ≠ 0`).
/// `M₃` maps: index transpositions `phi12/phi13/phi23`, the 3-cycles
/// `phi123/phi132`, the corner rescale `upsilon(a)`, the three-parameter
/// shear `rho(a,b,c)` (`a,b ≠ 0`), and the two block maps `case6psi`,
/// `case6xi` used in the case-6 replays.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedMorphism {
    Phi12,
    Phi13,
    Phi23,
    Phi123,
    Phi132,
    Transpose,
    Psi(Scalar),
    Chi(Scalar, Scalar),
    Xi(Scalar),
    Upsilon(Scalar),
    Rho(Scalar, Scalar, Scalar),
    Case6Psi,
    Case6Xi,
}

/// Build a named morphism on its expected context; multiplicativity is
/// verified at construction.
pub fn named(ctx: &Arc<AlgebraContext>, which: NamedMorphism) -> Result<Morphism, MorphismError> {
    use NamedMorphism::*;
    let require = |expected: usize, name: &str| -> Result<(), MorphismError> {
        if matrix_shape(ctx) == Some(expected) {
            Ok(())
        } else {
            Err(MorphismError::WrongContext {
                name: name.to_string(),
                expected: format!("M{expected}"),
                got: ctx.name().to_string(),
            })
        }
    };
    match which {
        Phi12 => {
            require(3, "phi12")?;
            index_permutation(ctx, &[1, 0, 2]).map(|m| m.renamed("phi12"))
        }
        Phi13 => {
            require(3, "phi13")?;
            index_permutation(ctx, &[2, 1, 0]).map(|m| m.renamed("phi13"))
        }
        Phi23 => {
            require(3, "phi23")?;
            index_permutation(ctx, &[0, 2, 1]).map(|m| m.renamed("phi23"))
        }
        Phi123 => {
            require(3, "phi123")?;
            index_permutation(ctx, &[1, 2, 0]).map(|m| m.renamed("phi123"))
        }
        Phi132 => {
            require(3, "phi132")?;
            index_permutation(ctx, &[2, 0, 1]).map(|m| m.renamed("phi132"))
        }
        Transpose => transpose_morphism(ctx),
        Psi(alpha) => {
            require(2, "psi")?;
            let a = alpha;
            from_images(
                ctx,
                &format!("psi(alpha={a})"),
                MorphismKind::Automorphism,
                &[
                    ("e11", vec![(Scalar::one(), "e11"), (-&a, "e12")]),
                    ("e12", vec![(Scalar::one(), "e12")]),
                    ("e22", vec![(Scalar::one(), "e22"), (a.clone(), "e12")]),
                    (
                        "e21",
                        vec![
                            (a.clone(), "e11"),
                            (-&a, "e22"),
                            (-&(&a * &a), "e12"),
                            (Scalar::one(), "e21"),
                        ],
                    ),
                ],
            )
        }
        Chi(alpha, gamma) => {
            require(2, "chi")?;
            let s = &alpha + &gamma;
            let s_inv = s
                .recip()
                .ok_or_else(|| MorphismError::BadParameter("chi needs alpha+gamma != 0".into()))?;
            let g = gamma;
            from_images(
                ctx,
                &format!("chi(alpha={alpha},gamma={g})"),
                MorphismKind::Automorphism,
                &[
                    ("e11", vec![(Scalar::one(), "e11"), (g.clone(), "e12")]),
                    ("e12", vec![(-&s, "e12")]),
                    ("e22", vec![(Scalar::one(), "e22"), (-&g, "e12")]),
                    (
                        "e21",
                        vec![
                            (&g * &s_inv, "e11"),
                            (-&(&g * &s_inv), "e22"),
                            (&(&g * &g) * &s_inv, "e12"),
                            (-&s_inv, "e21"),
                        ],
                    ),
                ],
            )
        }
        Xi(alpha) => {
            require(2, "xi")?;
            let inv = alpha
                .recip()
                .ok_or_else(|| MorphismError::BadParameter("xi needs alpha != 0".into()))?;
            from_images(
                ctx,
                &format!("xi(alpha={alpha})"),
                MorphismKind::Automorphism,
                &[
                    ("e11", vec![(Scalar::one(), "e11")]),
                    ("e12", vec![(inv, "e12")]),
                    ("e22", vec![(Scalar::one(), "e22")]),
                    ("e21", vec![(alpha.clone(), "e21")]),
                ],
            )
        }
        Upsilon(a) => {
            require(3, "upsilon")?;
            let inv = a
                .recip()
                .ok_or_else(|| MorphismError::BadParameter("upsilon needs a != 0".into()))?;
            from_images(
                ctx,
                &format!("upsilon(a={a})"),
                MorphismKind::Automorphism,
                &[
                    ("e11", vec![(Scalar::one(), "e11")]),
                    ("e22", vec![(Scalar::one(), "e22")]),
                    ("e33", vec![(Scalar::one(), "e33")]),
                    ("e12", vec![(Scalar::one(), "e12")]),
                    ("e21", vec![(Scalar::one(), "e21")]),
                    ("e13", vec![(a.clone(), "e13")]),
                    ("e23", vec![(a.clone(), "e23")]),
                    ("e31", vec![(inv.clone(), "e31")]),
                    ("e32", vec![(inv, "e32")]),
                ],
            )
        }
        Rho(a, b, c) => {
            require(3, "rho")?;
            let a_inv = a
                .recip()
                .ok_or_else(|| MorphismError::BadParameter("rho needs a != 0".into()))?;
            let b_inv = b
                .recip()
                .ok_or_else(|| MorphismError::BadParameter("rho needs b != 0".into()))?;
            let bc = &b * &c;
            from_images(
                ctx,
                &format!("rho(a={a},b={b},c={c})"),
                MorphismKind::Automorphism,
                &[
                    ("e11", vec![(Scalar::one(), "e11")]),
                    ("e12", vec![(a_inv.clone(), "e12"), (-&(&bc * &a_inv), "e13")]),
                    ("e13", vec![(b.clone(), "e13")]),
                    ("e21", vec![(a.clone(), "e21")]),
                    ("e22", vec![(Scalar::one(), "e22"), (-&bc, "e23")]),
                    ("e23", vec![(&a * &b, "e23")]),
                    ("e31", vec![(c.clone(), "e21"), (b_inv.clone(), "e31")]),
                    (
                        "e32",
                        vec![
                            (&c * &a_inv, "e22"),
                            (-&(&(&bc * &c) * &a_inv), "e23"),
                            (&b_inv * &a_inv, "e32"),
                            (-&(&c * &a_inv), "e33"),
                        ],
                    ),
                    ("e33", vec![(Scalar::one(), "e33"), (bc.clone(), "e23")]),
                ],
            )
        }
        Case6Psi => {
            require(3, "case6psi")?;
            let one = Scalar::one;
            from_images(
                ctx,
                "case6psi",
                MorphismKind::Automorphism,
                &[
                    ("e11", vec![(one(), "e11"), (-&one(), "e13")]),
                    ("e22", vec![(one(), "e22")]),
                    ("e33", vec![(one(), "e33"), (one(), "e13")]),
                    ("e12", vec![(one(), "e12")]),
                    ("e21", vec![(one(), "e21"), (-&one(), "e23")]),
                    ("e13", vec![(one(), "e13")]),
                    (
                        "e31",
                        vec![
                            (one(), "e11"),
                            (-&one(), "e33"),
                            (one(), "e31"),
                            (-&one(), "e13"),
                        ],
                    ),
                    ("e23", vec![(one(), "e23")]),
                    ("e32", vec![(one(), "e32"), (one(), "e12")]),
                ],
            )
        }
        Case6Xi => {
            require(3, "case6xi")?;
            let one = Scalar::one;
            from_images(
                ctx,
                "case6xi",
                MorphismKind::Automorphism,
                &[
                    ("e11", vec![(one(), "e22")]),
                    ("e22", vec![(one(), "e11"), (one(), "e13")]),
                    ("e33", vec![(one(), "e33"), (-&one(), "e13")]),
                    ("e12", vec![(one(), "e21"), (one(), "e23")]),
                    ("e21", vec![(one(), "e12")]),
                    ("e13", vec![(one(), "e23")]),
                    ("e31", vec![(one(), "e32"), (-&one(), "e12")]),
                    ("e23", vec![(one(), "e13")]),
                    (
                        "e32",
                        vec![
                            (one(), "e33"),
                            (-&one(), "e13"),
                            (-&one(), "e11"),
                            (one(), "e31"),
                        ],
                    ),
                ],
            )
        }
    }
}

impl Morphism {
    fn renamed(mut self, name: &str) -> Morphism {
        self.name = name.to_string();
        self
    }
}

fn from_images(
    ctx: &Arc<AlgebraContext>,
    name: &str,
    kind: MorphismKind,
    images: &[(&str, Vec<(Scalar, &str)>)],
) -> Result<Morphism, MorphismError> {
    let d = ctx.dim();
    let mut m = Mat::zero(d, d);
    let mut seen = vec![false; d];
    for (src, terms) in images {
        let col = ctx
            .label_index(src)
            .unwrap_or_else(|_| panic!("unknown label {src}"));
        seen[col] = true;
        let mut v = vec![Scalar::zero(); d];
        for (coeff, label) in terms {
            let row = ctx
                .label_index(label)
                .unwrap_or_else(|_| panic!("unknown label {label}"));
            v[row] += coeff;
        }
        m.set_col(col, &v);
    }
    assert!(
        seen.iter().all(|&s| s),
        "morphism image list must cover the whole basis"
    );
    Morphism::new_verified(Arc::clone(ctx), m, kind, name)
}

// ---------------------------------------------------------------------------
// Morphism spec strings (CLI)
// ---------------------------------------------------------------------------

/// Parse a morphism spec such as
/// `phi23*rho:a=1,b=1,c=1*phi23` or `inner:1,0,0,0,1,0,0,0,2`.
///
/// Atoms are composed left-to-right in application order:
/// `a*b` applies `a` first, so it denotes `b ∘ a`.
pub fn parse_morphism_spec(
    ctx: &Arc<AlgebraContext>,
    spec: &str,
) -> Result<Morphism, MorphismError> {
    let mut result: Option<Morphism> = None;
    for atom in spec.split('*') {
        let m = parse_atom(ctx, atom.trim())?;
        result = Some(match result {
            None => m,
            Some(prev) => m.compose(&prev)?,
        });
    }
    result.ok_or_else(|| MorphismError::Parse("empty morphism spec".to_string()))
}

fn parse_atom(ctx: &Arc<AlgebraContext>, atom: &str) -> Result<Morphism, MorphismError> {
    let (head, params) = match atom.split_once(':') {
        Some((h, p)) => (h, Some(p)),
        None => (atom, None),
    };
    let get_params = |keys: &[&str]| -> Result<Vec<Scalar>, MorphismError> {
        let raw = params.ok_or_else(|| {
            MorphismError::Parse(format!("`{head}` needs parameters {keys:?}"))
        })?;
        let mut out = vec![None; keys.len()];
        for part in raw.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| MorphismError::Parse(format!("bad parameter `{part}`")))?;
            let idx = keys
                .iter()
                .position(|kk| *kk == k.trim())
                .ok_or_else(|| MorphismError::Parse(format!("unknown parameter `{k}`")))?;
            let val: Scalar = v
                .trim()
                .parse()
                .map_err(|_| MorphismError::Parse(format!("bad rational `{v}`")))?;
            out[idx] = Some(val);
        }
        out.into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or_else(|| MorphismError::Parse(format!("missing parameter `{}`", keys[i])))
            })
            .collect()
    };
    match head {
        "id" => Ok(Morphism::identity(ctx)),
        "phi12" => named(ctx, NamedMorphism::Phi12),
        "phi13" => named(ctx, NamedMorphism::Phi13),
        "phi23" => named(ctx, NamedMorphism::Phi23),
        "phi123" => named(ctx, NamedMorphism::Phi123),
        "phi132" => named(ctx, NamedMorphism::Phi132),
        "transpose" => named(ctx, NamedMorphism::Transpose),
        "case6psi" => named(ctx, NamedMorphism::Case6Psi),
        "case6xi" => named(ctx, NamedMorphism::Case6Xi),
        "psi" => {
            let p = get_params(&["alpha"])?;
            named(ctx, NamedMorphism::Psi(p[0].clone()))
        }
        "chi" => {
            let p = get_params(&["alpha", "gamma"])?;
            named(ctx, NamedMorphism::Chi(p[0].clone(), p[1].clone()))
        }
        "xi" => {
            let p = get_params(&["alpha"])?;
            named(ctx, NamedMorphism::Xi(p[0].clone()))
        }
        "upsilon" => {
            let p = get_params(&["a"])?;
            named(ctx, NamedMorphism::Upsilon(p[0].clone()))
        }
        "rho" => {
            let p = get_params(&["a", "b", "c"])?;
            named(
                ctx,
                NamedMorphism::Rho(p[0].clone(), p[1].clone(), p[2].clone()),
            )
        }
        "inner" => {
            let raw = params
                .ok_or_else(|| MorphismError::Parse("`inner` needs matrix entries".into()))?;
            let entries: Result<Vec<Scalar>, _> = raw
                .split(',')
                .map(|s| s.trim().parse::<Scalar>())
                .collect();
            let entries =
                entries.map_err(|e| MorphismError::Parse(format!("bad entry: {e}")))?;
            let n = matrix_shape(ctx).ok_or(MorphismError::NotMatrixAlgebra)?;
            if entries.len() != n * n {
                return Err(MorphismError::Parse(format!(
                    "`inner` needs {} entries for {}",
                    n * n,
                    ctx.name()
                )));
            }
            let t = Mat::from_fn(n, n, |i, j| entries[i * n + j].clone());
            inner(ctx, &t)
        }
        other => Err(MorphismError::Parse(format!("unknown morphism `{other}`"))),
    }
}

// ---------------------------------------------------------------------------
// Bounded conjugator search
// ---------------------------------------------------------------------------

/// Search bounds for [`find_conjugator`]: candidate matrices `T` draw
/// entries from `grid`; with `allow_transpose` the anti-automorphisms
/// `X ↦ T⁻¹XᵀT` are searched too.
#[derive(Debug, Clone)]
pub struct ConjugatorSearch {
    pub grid: Vec<i64>,
    pub allow_transpose: bool,
}

impl Default for ConjugatorSearch {
    fn default() -> Self {
        ConjugatorSearch {
            grid: vec![-2, -1, 0, 1, 2],
            allow_transpose: true,
        }
    }
}

impl ConjugatorSearch {
    pub fn small() -> Self {
        ConjugatorSearch {
            grid: vec![-1, 0, 1],
            allow_transpose: true,
        }
    }
}

/// Result of a bounded conjugator search. `NotFound` is **not** a proof of
/// non-conjugacy, only exhaustion of the stated grid.
#[derive(Debug, Clone)]
pub enum ConjugatorOutcome {
    Found(Morphism),
    NotFoundWithinBound { candidates: u64 },
}

impl ConjugatorOutcome {
    pub fn found(&self) -> Option<&Morphism> {
        match self {
            ConjugatorOutcome::Found(m) => Some(m),
            _ => None,
        }
    }
}

/// Brute-force search for `T` on the grid with
/// `conjugate(P, inner(T) [∘ transpose]) = Q`.
///
/// The identity is probed first; after that candidates are scanned in
/// lexicographic grid order (automorphisms before anti-automorphisms), so
/// the result is deterministic. The scan works on integer-scaled matrices
/// and avoids inversion: `ψ⁻¹ P ψ = Q  ⟺  M_P·M_ψ̃ = M_ψ̃·M_Q` where
/// `ψ̃(X) = adj(T)·X·T` is the adjugate-scaled sandwich.
pub fn find_conjugator(
    p: &OperatorMatrix,
    q: &OperatorMatrix,
    search: &ConjugatorSearch,
) -> Result<ConjugatorOutcome, MorphismError> {
    if !same_context(p.context(), q.context()) || p.weight() != q.weight() {
        return Err(MorphismError::IncompatibleOperators);
    }
    let ctx = p.context();
    let n = matrix_shape(ctx).ok_or(MorphismError::NotMatrixAlgebra)?;
    let d = ctx.dim();

    if p == q {
        return Ok(ConjugatorOutcome::Found(Morphism::identity(ctx)));
    }

    // Integerize both operator matrices with one shared denominator.
    let mut denom = Scalar::one();
    for s in p.matrix().entries().iter().chain(q.matrix().entries()) {
        let den = Scalar::from_bigint(s.denom().clone());
        denom = lcm_scalar(&denom, &den);
    }
    let to_int = |m: &Mat| -> Option<Vec<i64>> {
        m.entries().iter().map(|s| (s * &denom).to_i64()).collect()
    };
    let (ip, iq) = match (to_int(p.matrix()), to_int(q.matrix())) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(MorphismError::Parse(
                "operator entries too large for integer conjugator scan".to_string(),
            ))
        }
    };

    let kinds: &[bool] = if search.allow_transpose {
        &[false, true]
    } else {
        &[false]
    };
    let mut candidates: u64 = 0;
    for &use_transpose in kinds {
        let mut t = vec![search.grid[0]; n * n];
        let mut odometer = vec![0usize; n * n];
        loop {
            candidates += 1;
            if let Some(adj_det) = adjugate(&t, n) {
                if sandwich_matches(&ip, &iq, &t, &adj_det, n, d, use_transpose) {
                    let t_mat = Mat::from_fn(n, n, |i, j| Scalar::from_int(t[i * n + j]));
                    let mut psi = inner(ctx, &t_mat)?;
                    if use_transpose {
                        psi = psi.compose(&transpose_morphism(ctx)?)?;
                    }
                    debug_assert_eq!(&p.conjugate_by(&psi).unwrap(), q);
                    return Ok(ConjugatorOutcome::Found(psi));
                }
            }
            // Advance the odometer in lexicographic order.
            let mut k = n * n;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                odometer[k] += 1;
                if odometer[k] < search.grid.len() {
                    t[k] = search.grid[odometer[k]];
                    break;
                }
                odometer[k] = 0;
                t[k] = search.grid[0];
                if k == 0 {
                    // Full wrap: done with this kind.
                    break;
                }
            }
            if odometer.iter().all(|&o| o == 0) {
                break;
            }
        }
    }
    Ok(ConjugatorOutcome::NotFoundWithinBound { candidates })
}

/// Adjugate and determinant of an integer `n×n` matrix (`n ≤ 3`);
/// `None` when singular.
fn adjugate(t: &[i64], n: usize) -> Option<(Vec<i64>, i64)> {
    match n {
        1 => {
            if t[0] == 0 {
                None
            } else {
                Some((vec![1], t[0]))
            }
        }
        2 => {
            let det = t[0] * t[3] - t[1] * t[2];
            if det == 0 {
                return None;
            }
            Some((vec![t[3], -t[1], -t[2], t[0]], det))
        }
        3 => {
            let m = |i: usize, j: usize| t[i * 3 + j];
            let cof = |i: usize, j: usize| -> i64 {
                let r = [(i + 1) % 3, (i + 2) % 3];
                let c = [(j + 1) % 3, (j + 2) % 3];
                let minor = m(r[0], c[0]) * m(r[1], c[1]) - m(r[0], c[1]) * m(r[1], c[0]);
                // The cyclic index choice already encodes the sign.
                minor
            };
            let det = m(0, 0) * cof(0, 0) + m(0, 1) * cof(0, 1) + m(0, 2) * cof(0, 2);
            if det == 0 {
                return None;
            }
            let mut adj = vec![0i64; 9];
            for i in 0..3 {
                for j in 0..3 {
                    adj[j * 3 + i] = cof(i, j);
                }
            }
            Some((adj, det))
        }
        _ => unimplemented!("conjugator search supports n ≤ 3"),
    }
}

/// Check `M_P · M_ψ̃ == M_ψ̃ · M_Q` where `ψ̃(e_ij) = adj(T)·e_ij·T`
/// (or `adj(T)·e_ji·T` for the transpose kind), all in `i64`.
fn sandwich_matches(
    ip: &[i64],
    iq: &[i64],
    t: &[i64],
    adj_det: &(Vec<i64>, i64),
    n: usize,
    d: usize,
    use_transpose: bool,
) -> bool {
    let (adj, _) = adj_det;
    // Column (i,j) of M_ψ̃ holds ψ̃(e_ij), whose (k,l) entry is
    // adj[k][src_i] * t[src_j][l] with (src_i, src_j) = (i,j) or (j,i).
    let mut mpsi = vec![0i64; d * d];
    for i in 0..n {
        for j in 0..n {
            let (si, sj) = if use_transpose { (j, i) } else { (i, j) };
            let col = i * n + j;
            for k in 0..n {
                for l in 0..n {
                    mpsi[(k * n + l) * d + col] = adj[k * n + si] * t[sj * n + l];
                }
            }
        }
    }
    for r in 0..d {
        for c in 0..d {
            let mut left = 0i64;
            let mut right = 0i64;
            for k in 0..d {
                left += ip[r * d + k] * mpsi[k * d + c];
                right += mpsi[r * d + k] * iq[k * d + c];
            }
            if left != right {
                return false;
            }
        }
    }
    true
}

fn lcm_scalar(a: &Scalar, b: &Scalar) -> Scalar {
    use num_integer::Integer;
    // Both inputs are positive integers here.
    Scalar::from_bigint(a.numer().lcm(b.numer()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{m2, m3};

    #[test]
    fn transpose_is_an_involution() {
        let t = transpose_morphism(&m3()).unwrap();
        let tt = t.compose(&t).unwrap();
        assert_eq!(tt.matrix(), Morphism::identity(&m3()).matrix());
        assert_eq!(tt.kind(), MorphismKind::Automorphism);
    }

    #[test]
    fn phi12_squares_to_identity() {
        let p = named(&m3(), NamedMorphism::Phi12).unwrap();
        let sq = p.compose(&p).unwrap();
        assert_eq!(sq.matrix(), &Mat::identity(9));
    }

    #[test]
    fn named_maps_validate() {
        let m3 = m3();
        let m2 = m2();
        assert!(named(&m3, NamedMorphism::Rho(Scalar::one(), Scalar::one(), Scalar::one())).is_ok());
        assert!(named(&m3, NamedMorphism::Upsilon(Scalar::from_int(2))).is_ok());
        assert!(named(&m3, NamedMorphism::Case6Psi).is_ok());
        assert!(named(&m3, NamedMorphism::Case6Xi).is_ok());
        assert!(named(&m2, NamedMorphism::Psi(Scalar::from_int(2))).is_ok());
        assert!(named(&m2, NamedMorphism::Chi(Scalar::one(), Scalar::one())).is_ok());
        assert!(named(&m2, NamedMorphism::Xi(Scalar::from_int(3))).is_ok());
        // Domain errors.
        assert!(matches!(
            named(&m3, NamedMorphism::Upsilon(Scalar::zero())),
            Err(MorphismError::BadParameter(_))
        ));
        assert!(matches!(
            named(&m2, NamedMorphism::Chi(Scalar::one(), Scalar::from_int(-1))),
            Err(MorphismError::BadParameter(_))
        ));
        // Context errors.
        assert!(matches!(
            named(&m2, NamedMorphism::Phi12),
            Err(MorphismError::WrongContext { .. })
        ));
    }

    #[test]
    fn upsilon_is_inner_by_diag_1_1_a() {
        let m3 = m3();
        let a = Scalar::from_int(5);
        let ups = named(&m3, NamedMorphism::Upsilon(a.clone())).unwrap();
        let mut t = Mat::identity(3);
        t.set(2, 2, a);
        let inn = inner(&m3, &t).unwrap();
        assert_eq!(ups.matrix(), inn.matrix());
    }

    #[test]
    fn inner_identity_is_identity() {
        let m3 = m3();
        let inn = inner(&m3, &Mat::identity(3)).unwrap();
        assert_eq!(inn.matrix(), &Mat::identity(9));
        assert!(matches!(
            inner(&m3, &Mat::zero(3, 3)),
            Err(MorphismError::Singular)
        ));
    }

    #[test]
    fn conjugation_by_identity_is_identity() {
        let op = OperatorMatrix::from_images(
            &m3(),
            &[("e11", &[(1, "e22"), (1, "e33")]), ("e22", &[(1, "e33")])],
            Scalar::one(),
        )
        .unwrap();
        let id = Morphism::identity(&m3());
        assert_eq!(op.conjugate_by(&id).unwrap(), op);
    }

    #[test]
    fn conjugation_composes_contravariantly_consistent() {
        let m3 = m3();
        let op = OperatorMatrix::from_images(
            &m3,
            &[("e11", &[(1, "e22")]), ("e21", &[(-1, "e21")])],
            Scalar::one(),
        )
        .unwrap();
        let a = named(&m3, NamedMorphism::Phi12).unwrap();
        let b = named(&m3, NamedMorphism::Upsilon(Scalar::from_int(2))).unwrap();
        let lhs = op.conjugate_by(&a).unwrap().conjugate_by(&b).unwrap();
        let rhs = op.conjugate_by(&a.compose(&b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn spec_parser_round_trips_composites() {
        let m3 = m3();
        let m = parse_morphism_spec(&m3, "phi23*rho:a=1,b=1,c=1*phi23").unwrap();
        // a*b*c applies left to right: c∘b∘a.
        let phi23 = named(&m3, NamedMorphism::Phi23).unwrap();
        let rho = named(
            &m3,
            NamedMorphism::Rho(Scalar::one(), Scalar::one(), Scalar::one()),
        )
        .unwrap();
        let expected = phi23.compose(&rho.compose(&phi23).unwrap()).unwrap();
        assert_eq!(m.matrix(), expected.matrix());

        let t = parse_morphism_spec(&m3, "inner:1,0,0,0,1,0,0,0,2").unwrap();
        let ups = named(&m3, NamedMorphism::Upsilon(Scalar::from_int(2))).unwrap();
        assert_eq!(t.matrix(), ups.matrix());

        assert!(parse_morphism_spec(&m3, "nosuch").is_err());
        assert!(parse_morphism_spec(&m3, "psi:alpha=1").is_err()); // wrong context
    }

    #[test]
    fn find_conjugator_identity_case() {
        let op = OperatorMatrix::from_images(
            &m2(),
            &[("e21", &[(-1, "e21")])],
            Scalar::one(),
        )
        .unwrap();
        let out = find_conjugator(&op, &op, &ConjugatorSearch::small()).unwrap();
        let m = out.found().expect("identity conjugator");
        assert_eq!(m.matrix(), &Mat::identity(4));
    }
}
