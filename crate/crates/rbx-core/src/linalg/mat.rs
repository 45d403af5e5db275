//! Dense matrices over exact rationals.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use super::{Poly, Scalar, Subspace};

/// A dense `rows × cols` matrix with row-major [`Scalar`] entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Parse from integer literals, mostly for tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[Scalar]) {
        assert_eq!(v.len(), self.rows);
        for (i, x) in v.iter().enumerate() {
            self.set(i, j, x.clone());
        }
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Mat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    let cur = out.get(i, j) + &prod;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in matrix apply");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn pow(&self, mut n: usize) -> Mat {
        assert!(self.is_square());
        let mut acc = Mat::identity(self.rows);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i).clone()).sum()
    }

    /// Reduced row-echelon form with exact pivots, plus the rank.
    pub fn rref(&self) -> (Mat, usize) {
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(src) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, src);
            let inv = m.get(pivot_row, col).recip().expect("nonzero pivot");
            for j in col..m.cols {
                let v = m.get(pivot_row, j) * &inv;
                m.set(pivot_row, j, v);
            }
            for r in 0..m.rows {
                if r == pivot_row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in col..m.cols {
                    let v = m.get(r, j) - &(&factor * m.get(pivot_row, j));
                    m.set(r, j, v);
                }
            }
            pivot_row += 1;
        }
        (m, pivot_row)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Canonical basis of the null space `{v : Av = 0}`.
    pub fn kernel(&self) -> Subspace {
        let (r, rank) = self.rref();
        // Pivot columns: leading entry of each nonzero RREF row.
        let mut pivots = Vec::with_capacity(rank);
        for i in 0..rank {
            let lead = (0..self.cols).find(|&j| !r.get(i, j).is_zero()).unwrap();
            pivots.push(lead);
        }
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = Scalar::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f);
            }
            basis.push(v);
        }
        Subspace::from_vectors(self.cols, basis)
    }

    /// Canonical basis of the column space.
    pub fn column_space(&self) -> Subspace {
        let rows: Vec<Vec<Scalar>> = (0..self.cols).map(|j| self.col(j)).collect();
        Subspace::from_vectors(self.rows, rows)
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (r, rank) = aug.rref();
        if rank < n || (0..n).any(|i| !r.get(i, i).is_one()) {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// One solution of `Ax = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, _) = aug.rref();
        let mut x = vec![Scalar::zero(); self.cols];
        for i in 0..self.rows {
            let lead = (0..=self.cols).find(|&j| !r.get(i, j).is_zero());
            match lead {
                None => continue,
                Some(j) if j == self.cols => return None, // 0 = 1 row
                Some(j) => x[j] = r.get(i, self.cols).clone(),
            }
        }
        // Leading variables were set assuming free variables are zero; this
        // is valid because in RREF each pivot column is otherwise zero.
        Some(x)
    }

    /// Monic minimal polynomial, from per-basis-vector Krylov annihilators
    /// joined by lcm.
    pub fn minimal_polynomial(&self) -> Poly {
        assert!(self.is_square(), "minimal polynomial needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return Poly::one();
        }
        let mut result = Poly::one();
        for b in 0..n {
            let mut v = vec![Scalar::zero(); n];
            v[b] = Scalar::one();
            // Krylov iterates v, Av, A²v, ... until linearly dependent; the
            // first dependence gives the monic annihilator of v.
            let mut iterates: Vec<Vec<Scalar>> = vec![v.clone()];
            let local = loop {
                let next = self.apply(iterates.last().unwrap());
                // Solve iterates^T · c = next.
                let krylov =
                    Mat::from_fn(n, iterates.len(), |i, j| iterates[j][i].clone());
                if let Some(c) = krylov.solve(&next) {
                    if krylov.apply(&c) == next {
                        // next = Σ c_j A^j v, so x^k - Σ c_j x^j kills v.
                        let mut coeffs = c.iter().map(|ci| -ci).collect::<Vec<_>>();
                        coeffs.push(Scalar::one());
                        break Poly::from_coeffs(coeffs);
                    }
                }
                iterates.push(next);
                assert!(iterates.len() <= n + 1, "Krylov chain exceeded dimension");
            };
            result = result.lcm(&local);
            if result.degree() == Some(n) {
                break; // cannot grow further
            }
        }
        result
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl Mat {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Scalar::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for Mat {
    /// Row-major array of rational strings, wrapped with the shape.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Mat", 3)?;
        s.serialize_field("rows", &self.rows)?;
        s.serialize_field("cols", &self.cols)?;
        let entries: Vec<String> = self.data.iter().map(Scalar::to_string).collect();
        s.serialize_field("entries", &entries)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_identity_and_zero() {
        let id = Mat::identity(3);
        let (r, rank) = id.rref();
        assert_eq!(r, id);
        assert_eq!(rank, 3);

        let z = Mat::zero(2, 2);
        let (r, rank) = z.rref();
        assert_eq!(r, z);
        assert_eq!(rank, 0);
    }

    #[test]
    fn rref_exact_pivots() {
        let m = Mat::from_rows(vec![
            vec![Scalar::new(1, 2), Scalar::from_int(1)],
            vec![Scalar::from_int(1), Scalar::from_int(2)],
        ]);
        let (r, rank) = m.rref();
        assert_eq!(rank, 1);
        assert_eq!(r.row(0), &[Scalar::one(), Scalar::from_int(2)]);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        assert_eq!(Mat::identity(4).kernel().dim(), 0);
    }

    #[test]
    fn kernel_matches_rank_nullity() {
        let m = Mat::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let k = m.kernel();
        assert_eq!(m.rank() + k.dim(), 3);
        for v in k.basis() {
            assert!(m.apply(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = Mat::from_i64(&[&[1, 2], &[3, 5]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        assert!(Mat::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Mat::from_i64(&[&[1, 1], &[0, 1], &[1, 2]]);
        let b = vec![Scalar::from_int(3), Scalar::from_int(1), Scalar::from_int(4)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        let bad = vec![Scalar::from_int(3), Scalar::from_int(1), Scalar::from_int(5)];
        assert!(m.solve(&bad).is_none());
    }

    #[test]
    fn minimal_polynomial_zero_matrix() {
        assert_eq!(Mat::zero(3, 3).minimal_polynomial(), Poly::x());
    }

    #[test]
    fn minimal_polynomial_nilpotent_jordan() {
        // Single nilpotent Jordan block of size 3: min poly x^3.
        let m = Mat::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(m.minimal_polynomial(), Poly::x().pow(3));
    }

    #[test]
    fn minimal_polynomial_annihilates() {
        let m = Mat::from_i64(&[&[0, 1, 0], &[0, 0, 0], &[1, 0, -1]]);
        let p = m.minimal_polynomial();
        assert!(p.eval_mat(&m).is_zero());
    }
}
