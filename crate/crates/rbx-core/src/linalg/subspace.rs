//! Subspaces of `Q^n` with canonical bases.
//!
//! The basis is kept in reduced row-echelon form with zero rows dropped, so
//! two subspaces are equal iff their stored bases are identical. That makes
//! structural equality the subspace-equality certificate used everywhere in
//! the invariant comparisons.

use std::fmt;

use serde::Serialize;

use super::{Mat, Scalar};

/// A linear subspace of `Q^ambient`, basis rows in canonical RREF.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: vec![] }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![Scalar::zero(); ambient];
                v[i] = Scalar::one();
                v
            })
            .collect();
        Subspace { ambient, basis }
    }

    /// Canonicalize an arbitrary spanning set.
    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<Scalar>>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient, "vector length != ambient dimension");
        }
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let (r, rank) = Mat::from_rows(vectors).rref();
        let basis = (0..rank).map(|i| r.row(i).to_vec()).collect();
        Subspace { ambient, basis }
    }

    /// Span of a single vector.
    pub fn span_of(ambient: usize, v: Vec<Scalar>) -> Self {
        Subspace::from_vectors(ambient, vec![v])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    /// Basis rows stacked into a matrix (dim × ambient).
    pub fn basis_matrix(&self) -> Mat {
        if self.basis.is_empty() {
            Mat::zero(0, self.ambient)
        } else {
            Mat::from_rows(self.basis.clone())
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coords_of(v).is_some()
    }

    /// Coordinates of `v` in the canonical basis, or `None` if outside.
    pub fn coords_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.ambient);
        // Reduce v against the RREF basis; the residual must vanish.
        let mut residual = v.to_vec();
        let mut coords = vec![Scalar::zero(); self.basis.len()];
        for (k, row) in self.basis.iter().enumerate() {
            let lead = row.iter().position(|x| !x.is_zero()).unwrap();
            if residual[lead].is_zero() {
                continue;
            }
            let c = residual[lead].clone(); // pivot is 1 in RREF
            for (r, b) in residual.iter_mut().zip(row) {
                *r -= &(&c * b);
            }
            coords[k] = c;
        }
        residual.iter().all(Scalar::is_zero).then_some(coords)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Sum of subspaces.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::from_vectors(self.ambient, vs)
    }

    /// Intersection, via vectors of the sum-kernel construction.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        // Kernel of [A^T | B^T]: a solution (x, y) gives A^T x = -B^T y, a
        // point of the intersection.
        let a = self.basis_matrix();
        let b = other.basis_matrix();
        let stacked = Mat::from_fn(self.ambient, a.rows() + b.rows(), |i, j| {
            if j < a.rows() {
                a.get(j, i).clone()
            } else {
                b.get(j - a.rows(), i).clone()
            }
        });
        let ker = stacked.kernel();
        let vectors = ker
            .basis()
            .iter()
            .map(|xy| {
                let mut v = vec![Scalar::zero(); self.ambient];
                for (r, row) in a.row_iter().enumerate() {
                    for (c, entry) in row.iter().enumerate() {
                        let term = &xy[r] * entry;
                        v[c] += &term;
                    }
                }
                v
            })
            .collect();
        Subspace::from_vectors(self.ambient, vectors)
    }

    /// Whether `self ∩ other = 0` and `self + other` has full expected dim.
    pub fn is_direct_sum_with(&self, other: &Subspace) -> bool {
        self.sum(other).dim() == self.dim() + other.dim()
    }
}

impl Mat {
    fn row_iter(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows()).map(move |i| self.row(i))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} of Q^{})", self.dim(), self.ambient)?;
        for row in &self.basis {
            let s: Vec<String> = row.iter().map(Scalar::to_string).collect();
            write!(f, "\n  [{}]", s.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Subspace", 3)?;
        s.serialize_field("ambient", &self.ambient)?;
        s.serialize_field("dim", &self.dim())?;
        let rows: Vec<Vec<String>> = self
            .basis
            .iter()
            .map(|r| r.iter().map(Scalar::to_string).collect())
            .collect();
        s.serialize_field("basis", &rows)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn canonical_equality_ignores_input_order() {
        let a = Subspace::from_vectors(3, vec![v(&[1, 1, 0]), v(&[0, 0, 1])]);
        let b = Subspace::from_vectors(3, vec![v(&[0, 0, 2]), v(&[2, 2, 2])]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn membership_and_coords() {
        let s = Subspace::from_vectors(3, vec![v(&[1, 0, 1]), v(&[0, 1, 1])]);
        assert!(s.contains(&v(&[2, 3, 5])));
        assert!(!s.contains(&v(&[1, 0, 0])));
        let c = s.coords_of(&v(&[2, 3, 5])).unwrap();
        assert_eq!(c, v(&[2, 3]));
    }

    #[test]
    fn sum_and_intersection() {
        let a = Subspace::from_vectors(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::from_vectors(3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(a.sum(&b), Subspace::full(3));
        let i = a.intersect(&b);
        assert_eq!(i, Subspace::span_of(3, v(&[0, 1, 0])));
        assert!(!a.is_direct_sum_with(&b));
    }
}
