//! The twisted polynomial ring A{tau}, with tau * a = a^q * tau.

use std::fmt;

use crate::field::FqField;
use crate::poly::Poly;

/// `sum_i coeffs[i] * tau^i` with coefficients in A.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TwistedPoly {
    coeffs: Vec<Poly>,
}

impl fmt::Display for TwistedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl TwistedPoly {
    pub fn new(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        TwistedPoly { coeffs }
    }

    pub fn zero() -> Self {
        TwistedPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Poly::one())
    }

    /// tau itself.
    pub fn tau() -> Self {
        TwistedPoly { coeffs: vec![Poly::zero(), Poly::one()] }
    }

    pub fn constant(c: Poly) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Degree in tau; `None` for zero.
    pub fn tau_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self, fq: &FqField) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&other.coeff(i), fq)).collect())
    }

    pub fn sub(&self, other: &Self, fq: &FqField) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&other.coeff(i), fq)).collect())
    }

    /// `(sum f_i tau^i)(sum g_j tau^j) = sum f_i g_j^{q^i} tau^{i+j}`.
    pub fn mul(&self, other: &Self, fq: &FqField) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Poly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, f) in self.coeffs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (j, g) in other.coeffs.iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                let term = f.mul(&g.frobenius(i as u32, fq), fq);
                out[i + j] = out[i + j].add(&term, fq);
            }
        }
        Self::new(out)
    }

    /// Left multiplication by a scalar of A.
    pub fn scale(&self, c: &Poly, fq: &FqField) -> Self {
        Self::new(self.coeffs.iter().map(|f| c.mul(f, fq)).collect())
    }

    /// Action on A: `sum_i coeffs[i] * x^{q^i}`.
    pub fn apply(&self, x: &Poly, fq: &FqField) -> Poly {
        let mut acc = Poly::zero();
        let mut xp = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xp = xp.frobenius(1, fq);
            }
            if !c.is_zero() {
                acc = acc.add(&c.mul(&xp, fq), fq);
            }
        }
        acc
    }
}
