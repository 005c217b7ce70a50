//! The finite field F_q, q = p^e, in a polynomial basis over F_p.
//!
//! Elements are carried as canonical integer codes: the residue
//! `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` modulo the field modulus has code
//! `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`. Codes are stable across runs, which
//! is what persisted records rely on.
//!
//! Unless a modulus is supplied, the field is built on the smallest (by code
//! of its lower coefficients) monic irreducible polynomial of degree `e`
//! over F_p.

use std::fmt;

use crate::error::{Error, Result};

/// Largest field order accepted. Extension-field multiplication goes
/// through log/antilog tables of this size.
pub const MAX_ORDER: u32 = 1 << 16;

/// Element of F_q, stored as its canonical code in `[0, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElem(pub u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone)]
enum Arith {
    Prime,
    Extension(Tables),
}

#[derive(Clone)]
struct Tables {
    /// Full addition table, only when q is small enough.
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
    /// log[x] for x != 0, with respect to a fixed primitive element.
    log: Vec<u32>,
    /// exp[i] for i in [0, 2(q-1)), doubled to skip a reduction.
    exp: Vec<u32>,
}

/// F_q = F_p[x]/(modulus).
#[derive(Clone)]
pub struct FqField {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    arith: Arith,
    /// p-th root map, x -> x^{p^{e-1}}.
    proot: Vec<u32>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FqField")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FqField {}

fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Minimal dense arithmetic over F_p, only used while building tables.
mod fp {
    pub fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv_lc = inv(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = (*r.last().unwrap() as u64 * inv_lc as u64 % p as u64) as u32;
            for (i, &mi) in m.iter().enumerate() {
                let t = (c as u64 * mi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut v: Vec<u32> = out.into_iter().map(|x| x as u32).collect();
        trim(&mut v);
        v
    }

    pub fn inv(a: u32, p: u32) -> u32 {
        pow(a, p - 2, p)
    }

    pub fn pow(a: u32, mut n: u32, p: u32) -> u32 {
        let mut base = a as u64 % p as u64;
        let mut acc = 1u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            n >>= 1;
        }
        acc as u32
    }

    /// Irreducibility by trial division with every monic polynomial of
    /// degree at most deg/2. Adequate for the tiny degrees used here.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let d = f.len() - 1;
        if d == 0 {
            return false;
        }
        for k in 1..=d / 2 {
            let count = (p as u64).pow(k as u32);
            for n in 0..count {
                let mut g = vec![0u32; k + 1];
                let mut t = n;
                for c in g.iter_mut().take(k) {
                    *c = (t % p as u64) as u32;
                    t /= p as u64;
                }
                g[k] = 1;
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl FqField {
    /// Prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// F_{p^e} on the lexicographically least monic irreducible modulus.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        Self::check_order(p, e)?;
        if e == 1 {
            return Self::with_modulus(p, vec![0, 1]);
        }
        let count = (p as u64).pow(e);
        for n in 0..count {
            let mut m = vec![0u32; e as usize + 1];
            let mut t = n;
            for c in m.iter_mut().take(e as usize) {
                *c = (t % p as u64) as u32;
                t /= p as u64;
            }
            m[e as usize] = 1;
            if m[0] != 0 && fp::is_irreducible(&m, p) {
                return Self::with_modulus(p, m);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn check_order(p: u32, e: u32) -> Result<()> {
        if !is_prime_u32(p) {
            return Err(Error::UnsupportedField(format!("p = {p} is not prime")));
        }
        if e == 0 {
            return Err(Error::UnsupportedField("e must be positive".into()));
        }
        match (p as u64).checked_pow(e) {
            Some(q) if q <= MAX_ORDER as u64 => Ok(()),
            _ => Err(Error::UnsupportedField(format!(
                "q = {p}^{e} exceeds the supported order {MAX_ORDER}"
            ))),
        }
    }

    /// F_p[x]/(modulus) for a caller-chosen monic irreducible modulus,
    /// given as ascending coefficients in [0, p).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::UnsupportedField("modulus must have degree >= 1".into()));
        }
        let e = (modulus.len() - 1) as u32;
        Self::check_order(p, e)?;
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::UnsupportedField("modulus coefficient out of range".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(Error::UnsupportedField("modulus must be monic".into()));
        }
        if !fp::is_irreducible(&modulus, p) {
            return Err(Error::UnsupportedField("modulus is reducible over F_p".into()));
        }
        let q = p.pow(e);
        let arith = if e == 1 {
            Arith::Prime
        } else {
            Arith::Extension(Self::build_tables(p, e, q, &modulus))
        };
        let mut field = FqField { p, e, q, modulus, arith, proot: Vec::new() };
        let root_exp = (p as u64).pow(e - 1);
        field.proot = (0..q).map(|c| field.pow(FqElem(c), root_exp).0).collect();
        Ok(field)
    }

    fn build_tables(p: u32, e: u32, q: u32, modulus: &[u32]) -> Tables {
        let digits = |c: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(e as usize);
            let mut t = c;
            for _ in 0..e {
                v.push(t % p);
                t /= p;
            }
            fp::trim(&mut v);
            v
        };
        let code = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |acc, &c| acc * p + c) };
        let slow_mul = |a: u32, b: u32| -> u32 {
            let prod = fp::mul(&digits(a), &digits(b), p);
            code(&fp::rem(&prod, modulus, p))
        };
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let slow_pow = |a: u32, mut n: u64| -> u32 {
            let mut base = a;
            let mut acc = 1u32;
            while n > 0 {
                if n & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                n >>= 1;
            }
            acc
        };
        let generator = (2..q)
            .find(|&g| factors.iter().all(|&l| slow_pow(g, order / l) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * (q as usize - 1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..(q - 1) {
            exp[i as usize] = x;
            exp[(i + q - 1) as usize] = x;
            log[x as usize] = i;
            x = slow_mul(x, generator);
        }
        let add_digits = |a: u32, b: u32| -> u32 {
            let (mut a, mut b) = (a, b);
            let mut out = 0u32;
            let mut scale = 1u32;
            for _ in 0..e {
                out += ((a % p + b % p) % p) * scale;
                a /= p;
                b /= p;
                scale *= p;
            }
            out
        };
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let mut t = a;
                let mut out = 0u32;
                let mut scale = 1u32;
                for _ in 0..e {
                    out += ((p - t % p) % p) * scale;
                    t /= p;
                    scale *= p;
                }
                out
            })
            .collect();
        let add = (q <= 256).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = add_digits(a, b);
                }
            }
            t
        });
        Tables { add, neg, log, exp }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Ascending coefficients of the defining polynomial over F_p.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Element with the given code.
    pub fn elem(&self, code: u32) -> Result<FqElem> {
        if code < self.q {
            Ok(FqElem(code))
        } else {
            Err(Error::InvalidElement { code, q: self.q })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.arith {
            Arith::Prime => {
                let s = a.0 + b.0;
                FqElem(if s >= self.p { s - self.p } else { s })
            }
            Arith::Extension(t) => match &t.add {
                Some(tab) => FqElem(tab[(a.0 * self.q + b.0) as usize]),
                None => FqElem(self.add_slow(a.0, b.0)),
            },
        }
    }

    fn add_slow(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.e {
            out += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        match &self.arith {
            Arith::Prime => FqElem(if a.0 == 0 { 0 } else { self.p - a.0 }),
            Arith::Extension(t) => FqElem(t.neg[a.0 as usize]),
        }
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.arith {
            Arith::Prime => FqElem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32),
            Arith::Extension(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FqElem::ZERO
                } else {
                    FqElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
        }
    }

    /// Multiplicative inverse.
    ///
    /// Panics on zero; callers check divisors before inverting.
    pub fn inv(&self, a: FqElem) -> FqElem {
        assert!(!a.is_zero(), "inverse of zero in F_{}", self.q);
        match &self.arith {
            Arith::Prime => FqElem(fp::inv(a.0, self.p)),
            Arith::Extension(t) => {
                let l = t.log[a.0 as usize];
                FqElem(t.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
            }
        }
    }

    #[inline]
    pub fn div(&self, a: FqElem, b: FqElem) -> FqElem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FqElem, mut n: u64) -> FqElem {
        let mut base = a;
        let mut acc = FqElem::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// The unique p-th root, inverse of the Frobenius x -> x^p.
    #[inline]
    pub fn pth_root(&self, a: FqElem) -> FqElem {
        FqElem(self.proot[a.0 as usize])
    }
}
