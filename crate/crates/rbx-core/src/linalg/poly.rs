//! Univariate polynomials over [`Scalar`].
//!
//! Just enough polynomial arithmetic for minimal polynomials: product,
//! exact division, gcd/lcm and evaluation at a square matrix.

use std::fmt;
use std::ops::{Add, Mul};

use serde::Serialize;

use super::{Mat, Scalar};

/// A polynomial with rational coefficients, stored by ascending degree
/// with no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::from_coeffs(vec![Scalar::zero(), Scalar::one()])
    }

    /// `x - root`.
    pub fn linear_root(root: &Scalar) -> Self {
        Poly::from_coeffs(vec![-root, Scalar::one()])
    }

    /// Coefficients by ascending degree; trailing zeros are trimmed.
    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    /// Scale so the leading coefficient is 1. No-op on zero.
    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            None => Poly::zero(),
            Some(lc) => {
                let inv = lc.recip().expect("nonzero leading coefficient");
                Poly::from_coeffs(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn pow(&self, mut n: usize) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Euclidean division: `self = q * div + r` with `deg r < deg div`.
    /// Panics if `div` is zero.
    pub fn div_rem(&self, div: &Poly) -> (Poly, Poly) {
        let dlc = div.leading_coeff().expect("division by zero polynomial");
        let dlc_inv = dlc.recip().expect("nonzero leading coefficient");
        let ddeg = div.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(); self.coeffs.len().saturating_sub(ddeg)];
        while rem.len() > ddeg {
            let k = rem.len() - 1 - ddeg;
            let factor = rem.last().unwrap() * &dlc_inv;
            for (i, dc) in div.coeffs.iter().enumerate() {
                let delta = &factor * dc;
                rem[k + i] -= &delta;
            }
            while rem.last().is_some_and(Scalar::is_zero) {
                rem.pop();
            }
            if rem.len() > k + ddeg {
                // The leading term did not cancel: numeric bug.
                unreachable!("leading term survived division step");
            }
            quot[k] = factor;
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// True iff `self` divides `other` exactly.
    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic least common multiple.
    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other);
        let (q, r) = self.div_rem(&g);
        debug_assert!(r.is_zero());
        (&q * other).monic()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluate at a square matrix (Horner).
    pub fn eval_mat(&self, m: &Mat) -> Mat {
        assert_eq!(m.rows(), m.cols(), "matrix evaluation needs a square matrix");
        let n = m.rows();
        let mut acc = Mat::zero(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &acc.mul(m) + &Mat::identity(n).scale(c);
        }
        acc
    }

    /// Multiplicity of `root` as a zero of `self`.
    pub fn root_multiplicity(&self, root: &Scalar) -> usize {
        if self.is_zero() {
            return 0;
        }
        let lin = Poly::linear_root(root);
        let mut p = self.clone();
        let mut mult = 0;
        loop {
            let (q, r) = p.div_rem(&lin);
            if !r.is_zero() {
                return mult;
            }
            mult += 1;
            p = q;
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Scalar::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::from_coeffs(out)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let prod = a * b;
                out[i + j] += &prod;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl fmt::Display for Poly {
    /// Factored form when the polynomial is `x^a (x+1)^b q(x)`, which covers
    /// every minimal polynomial in the catalog; the residual factor is
    /// printed expanded.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let a = self.root_multiplicity(&Scalar::zero());
        let b = self.root_multiplicity(&Scalar::from_int(-1));
        let mut rest = self.clone();
        if a > 0 {
            rest = rest.div_rem(&Poly::x().pow(a)).0;
        }
        if b > 0 {
            rest = rest.div_rem(&Poly::linear_root(&Scalar::from_int(-1)).pow(b)).0;
        }
        let mut parts: Vec<String> = Vec::new();
        for (base, mult) in [("x", a), ("(x+1)", b)] {
            match mult {
                0 => {}
                1 => parts.push(base.to_string()),
                m => parts.push(format!("{base}^{m}")),
            }
        }
        if rest.degree() != Some(0) || !rest.coeffs[0].is_one() || parts.is_empty() {
            parts.push(expand_terms(&rest));
        }
        write!(f, "{}", parts.join("*"))
    }
}

fn expand_terms(p: &Poly) -> String {
    let mut terms: Vec<String> = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let var = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        let t = if var.is_empty() {
            c.to_string()
        } else if c.is_one() {
            var
        } else if *c == Scalar::from_int(-1) {
            format!("-{var}")
        } else {
            format!("{c}*{var}")
        };
        terms.push(t);
    }
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = terms[0].clone();
    for t in &terms[1..] {
        if let Some(stripped) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(stripped);
        } else {
            out.push_str(" + ");
            out.push_str(t);
        }
    }
    if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
        format!("({out})")
    } else {
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    #[test]
    fn div_rem_and_gcd() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let sq = p(&[-1, 0, 1]);
        let (q, r) = sq.div_rem(&p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, p(&[1, 1]));

        let g = sq.gcd(&p(&[1, 1]));
        assert_eq!(g, p(&[1, 1]));

        let l = p(&[0, 1]).lcm(&p(&[1, 1]));
        assert_eq!(l, p(&[0, 1, 1])); // x(x+1)
    }

    #[test]
    fn display_factored() {
        // x^3 (x+1)^2
        let m = &Poly::x().pow(3) * &Poly::linear_root(&Scalar::from_int(-1)).pow(2);
        assert_eq!(m.to_string(), "x^3*(x+1)^2");
        assert_eq!(Poly::x().to_string(), "x");
        assert_eq!(p(&[2, 0, 1]).to_string(), "(x^2 + 2)");
    }

    #[test]
    fn root_multiplicity() {
        let m = &Poly::x().pow(3) * &Poly::linear_root(&Scalar::from_int(-1));
        assert_eq!(m.root_multiplicity(&Scalar::zero()), 3);
        assert_eq!(m.root_multiplicity(&Scalar::from_int(-1)), 1);
        assert_eq!(m.root_multiplicity(&Scalar::one()), 0);
    }
}
