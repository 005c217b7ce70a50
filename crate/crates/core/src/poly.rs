//! Dense univariate polynomials over F_q, the ring A = F_q[T].
//!
//! A [`Poly`] is a plain coefficient vector (ascending, no trailing zeros);
//! every arithmetic method takes the field explicitly. The zero polynomial
//! is the empty vector and has degree `None`.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{FqElem, FqField};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FqElem>,
}

/// Canonical order: by degree (zero first), then coefficient codes compared
/// from the top coefficient down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical text form: the ascending code list, e.g. `[1,0,1]` for T^2 + 1.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", c.0)?;
        }
        f.write_str("]")
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![FqElem::ONE] }
    }

    /// The indeterminate T.
    pub fn t() -> Self {
        Poly { coeffs: vec![FqElem::ZERO, FqElem::ONE] }
    }

    pub fn constant(c: FqElem) -> Self {
        Self::from_elems(vec![c])
    }

    pub fn monomial(c: FqElem, n: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![FqElem::ZERO; n + 1];
        coeffs[n] = c;
        Poly { coeffs }
    }

    pub fn from_elems(mut coeffs: Vec<FqElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Builds a polynomial from ascending element codes, validating each.
    pub fn from_codes(codes: &[u32], fq: &FqField) -> Result<Self> {
        let coeffs = codes.iter().map(|&c| fq.elem(c)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_elems(coeffs))
    }

    /// Parses the canonical text form `[c0,c1,...]`.
    pub fn parse(text: &str, fq: &FqField) -> Result<Self> {
        let codes = parse_code_list(text)?;
        Self::from_codes(&codes, fq)
    }

    /// Monic polynomial of degree `d` whose lower coefficients are the
    /// base-q digits of `index`; indices `0..q^d` enumerate all of them in
    /// canonical order.
    pub fn monic_from_index(d: usize, mut index: u64, q: u32) -> Self {
        let mut coeffs = Vec::with_capacity(d + 1);
        for _ in 0..d {
            coeffs.push(FqElem((index % q as u64) as u32));
            index /= q as u64;
        }
        coeffs.push(FqElem::ONE);
        Poly { coeffs }
    }

    /// Any polynomial of degree < `len` from its base-q index.
    pub fn from_index(len: usize, mut index: u64, q: u32) -> Self {
        let mut coeffs = Vec::with_capacity(len);
        for _ in 0..len {
            coeffs.push(FqElem((index % q as u64) as u32));
            index /= q as u64;
        }
        Self::from_elems(coeffs)
    }

    /// Uniformly random polynomial of degree < `len`.
    pub fn random<R: Rng + ?Sized>(len: usize, fq: &FqField, rng: &mut R) -> Self {
        Self::from_elems((0..len).map(|_| FqElem(rng.gen_range(0..fq.q()))).collect())
    }

    /// Uniformly random monic polynomial of degree exactly `d`.
    pub fn random_monic<R: Rng + ?Sized>(d: usize, fq: &FqField, rng: &mut R) -> Self {
        let mut coeffs: Vec<FqElem> = (0..d).map(|_| FqElem(rng.gen_range(0..fq.q()))).collect();
        coeffs.push(FqElem::ONE);
        Poly { coeffs }
    }

    #[inline]
    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn codes(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.0).collect()
    }

    /// Coefficient of T^i (zero past the degree).
    #[inline]
    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1; handy in inequalities
    /// where -infinity never wins a max.
    #[inline]
    pub fn deg_or_neg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FqElem::ONE
    }

    /// Nonzero constant, i.e. a unit of A.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&FqElem::ONE)
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lc(&self) -> FqElem {
        self.coeffs.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn add(&self, other: &Poly, fq: &FqField) -> Poly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = fq.add(*c, s);
        }
        Poly::from_elems(coeffs)
    }

    pub fn sub(&self, other: &Poly, fq: &FqField) -> Poly {
        self.add(&other.neg(fq), fq)
    }

    pub fn neg(&self, fq: &FqField) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|&c| fq.neg(c)).collect() }
    }

    pub fn scale(&self, c: FqElem, fq: &FqField) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|&x| fq.mul(x, c)).collect() }
    }

    /// Multiplication by T^n.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![FqElem::ZERO; n];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn mul(&self, other: &Poly, fq: &FqField) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![FqElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, &b) in out[i..].iter_mut().zip(&other.coeffs) {
                *o = fq.add(*o, fq.mul(a, b));
            }
        }
        Poly::from_elems(out)
    }

    pub fn pow(&self, mut n: u64, fq: &FqField) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, fq);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, fq);
            }
        }
        acc
    }

    /// Euclidean division: `self = quotient * divisor + remainder` with
    /// `deg remainder < deg divisor`.
    pub fn divmod(&self, divisor: &Poly, fq: &FqField) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let inv_lc = fq.inv(divisor.lc());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FqElem::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let factor = fq.mul(c, inv_lc);
            quot[i - dd] = factor;
            let base = i - dd;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[base + j] = fq.sub(rem[base + j], fq.mul(factor, d));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_elems(quot), Poly::from_elems(rem)))
    }

    /// Remainder modulo `m`.
    pub fn rem(&self, m: &Poly, fq: &FqField) -> Result<Poly> {
        let dm = m.degree().ok_or(Error::DivisionByZero)?;
        if self.coeffs.len() <= dm {
            return Ok(self.clone());
        }
        let inv_lc = fq.inv(m.lc());
        let mut rem = self.coeffs.clone();
        for i in (dm..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let factor = fq.mul(c, inv_lc);
            let base = i - dm;
            for (j, &d) in m.coeffs[..dm].iter().enumerate() {
                rem[base + j] = fq.sub(rem[base + j], fq.mul(factor, d));
            }
            rem[i] = FqElem::ZERO;
        }
        rem.truncate(dm);
        Ok(Poly::from_elems(rem))
    }

    /// Exact quotient; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly, fq: &FqField) -> Result<Option<Poly>> {
        let (q, r) = self.divmod(divisor, fq)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn divides(&self, other: &Poly, fq: &FqField) -> Result<bool> {
        Ok(other.rem(self, fq)?.is_zero())
    }

    /// Monic normalization; the zero polynomial stays zero.
    pub fn monic(&self, fq: &FqField) -> Poly {
        match self.coeffs.last() {
            None => Poly::zero(),
            Some(&lc) if lc == FqElem::ONE => self.clone(),
            Some(&lc) => self.scale(fq.inv(lc), fq),
        }
    }

    /// Monic generator of the ideal (self, other).
    pub fn gcd(&self, other: &Poly, fq: &FqField) -> Result<Poly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroPolynomial("gcd of two zero polynomials"));
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, fq)?;
            a = b;
            b = r;
        }
        Ok(a.monic(fq))
    }

    /// Returns `(g, s, t)` with `g = s*self + t*other` monic.
    pub fn ext_gcd(&self, other: &Poly, fq: &FqField) -> Result<(Poly, Poly, Poly)> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroPolynomial("gcd of two zero polynomials"));
        }
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1, fq)?;
            let s = s0.sub(&q.mul(&s1, fq), fq);
            let t = t0.sub(&q.mul(&t1, fq), fq);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = fq.inv(r0.lc());
        Ok((r0.scale(inv, fq), s0.scale(inv, fq), t0.scale(inv, fq)))
    }

    /// Inverse modulo `m`, or `None` when `self` is not a unit mod `m`.
    pub fn inv_mod(&self, m: &Poly, fq: &FqField) -> Result<Option<Poly>> {
        let a = self.rem(m, fq)?;
        if a.is_zero() {
            return Ok(None);
        }
        let (g, s, _) = a.ext_gcd(m, fq)?;
        if g.is_one() {
            Ok(Some(s.rem(m, fq)?))
        } else {
            Ok(None)
        }
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly, fq: &FqField) -> Result<Poly> {
        self.mul(other, fq).rem(m, fq)
    }

    pub fn pow_mod(&self, mut n: u64, m: &Poly, fq: &FqField) -> Result<Poly> {
        let mut base = self.rem(m, fq)?;
        let mut acc = Poly::one().rem(m, fq)?;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_mod(&base, m, fq)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_mod(&base, m, fq)?;
            }
        }
        Ok(acc)
    }

    /// Formal derivative in T.
    pub fn derivative(&self, fq: &FqField) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| fq.mul(c, fq.from_int(i as i64 + 1)))
            .collect();
        Poly::from_elems(coeffs)
    }

    pub fn eval(&self, x: FqElem, fq: &FqField) -> FqElem {
        self.coeffs
            .iter()
            .rev()
            .fold(FqElem::ZERO, |acc, &c| fq.add(fq.mul(acc, x), c))
    }

    /// `self^(q^k)`. Coefficients lie in F_q and are fixed by the q-power
    /// Frobenius, so this only spreads exponents by q^k.
    pub fn frobenius(&self, k: u32, fq: &FqField) -> Poly {
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        let step = (fq.q() as usize).pow(k);
        let mut coeffs = vec![FqElem::ZERO; (self.coeffs.len() - 1) * step + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * step] = c;
        }
        Poly { coeffs }
    }

    /// `self^(q^k) mod m`, one Frobenius step at a time so intermediate
    /// degrees stay below `q * deg m`.
    pub fn frobenius_mod(&self, k: u32, m: &Poly, fq: &FqField) -> Result<Poly> {
        let mut x = self.rem(m, fq)?;
        for _ in 0..k {
            x = x.frobenius(1, fq).rem(m, fq)?;
        }
        Ok(x)
    }

    /// The p-th root of a polynomial whose derivative vanishes, i.e. whose
    /// support lies on multiples of p. `None` otherwise.
    pub fn pth_root(&self, fq: &FqField) -> Option<Poly> {
        let p = fq.p() as usize;
        if self.coeffs.iter().enumerate().any(|(i, c)| i % p != 0 && !c.is_zero()) {
            return None;
        }
        Some(Poly::from_elems(
            self.coeffs.iter().step_by(p).map(|&c| fq.pth_root(c)).collect(),
        ))
    }

    /// Largest k with `divisor^k | self`, without irreducibility checks.
    /// `self` must be nonzero and `divisor` non-constant.
    pub fn multiplicity(&self, divisor: &Poly, fq: &FqField) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("multiplicity"));
        }
        if divisor.degree().unwrap_or(0) == 0 {
            return Err(Error::ConstantPolynomial("multiplicity"));
        }
        let mut k = 0;
        let mut f = self.clone();
        loop {
            let (q, r) = f.divmod(divisor, fq)?;
            if !r.is_zero() {
                return Ok(k);
            }
            f = q;
            k += 1;
        }
    }
}

/// Parses `[c0,c1,...]` (whitespace tolerated) into codes.
pub fn parse_code_list(text: &str) -> Result<Vec<u32>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected [c0,c1,...], got {t:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad coefficient {:?} in {t:?}", s.trim())))
        })
        .collect()
}
