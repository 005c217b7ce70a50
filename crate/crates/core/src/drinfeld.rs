//! Drinfeld modules over A = F_q[T]: evaluation (exact and modular),
//! Fitting-ideal generators, torsion decisions and the degree threshold for
//! base 1.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factor::is_irreducible;
use crate::field::{FqElem, FqField};
use crate::linalg::{charpoly, DependencyFinder};
use crate::poly::Poly;
use crate::twisted::TwistedPoly;

/// Default cap on the predicted degree of an exactly evaluated phi_b(a).
pub const DEFAULT_DEGREE_GUARD: u64 = 1_000_000;

/// A Drinfeld module phi with phi_T = T + a_1 tau + ... + a_r tau^r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrinfeldModule {
    field: FqField,
    /// a_1, ..., a_r; a_r is nonzero.
    coeffs: Vec<Poly>,
    degree_guard: u64,
}

/// Fitting generator data for a monic prime P: P = g + r with deg r < deg P.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FittingData {
    pub prime: Poly,
    pub g: Poly,
    pub r: Poly,
}

/// (H)_P: if q = 2 then deg P > 1.
pub fn hypothesis_h(fq: &FqField, prime: &Poly) -> bool {
    !(fq.q() == 2 && prime.degree() == Some(1))
}

/// Reduced coefficients of phi_T modulo a fixed m, for repeated modular
/// application.
struct ModularAction<'a> {
    module: &'a DrinfeldModule,
    modulus: &'a Poly,
    t_mod: Poly,
    coeffs_mod: Vec<Poly>,
}

impl<'a> ModularAction<'a> {
    fn new(module: &'a DrinfeldModule, modulus: &'a Poly) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let fq = &module.field;
        Ok(ModularAction {
            module,
            modulus,
            t_mod: Poly::t().rem(modulus, fq)?,
            coeffs_mod: module
                .coeffs
                .iter()
                .map(|c| c.rem(modulus, fq))
                .collect::<Result<_>>()?,
        })
    }

    /// phi_T(x) mod m, x already reduced.
    fn apply_t(&self, x: &Poly) -> Poly {
        let fq = &self.module.field;
        let m = self.modulus;
        let mut acc = self.t_mod.mul(x, fq);
        let mut xp = x.clone();
        for c in &self.coeffs_mod {
            xp = xp.frobenius(1, fq).rem(m, fq).expect("nonzero modulus");
            if !c.is_zero() {
                acc = acc.add(&c.mul(&xp, fq), fq);
            }
        }
        acc.rem(m, fq).expect("nonzero modulus")
    }
}

impl DrinfeldModule {
    /// phi_T = T + sum_i coeffs[i-1] tau^i.
    pub fn new(field: FqField, coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidModule("rank must be at least 1".into()));
        }
        if coeffs.last().is_some_and(Poly::is_zero) {
            return Err(Error::InvalidModule("leading coefficient a_r is zero".into()));
        }
        for c in &coeffs {
            if c.coeffs().iter().any(|x| x.code() >= field.q()) {
                return Err(Error::InvalidModule("coefficient outside F_q".into()));
            }
        }
        Ok(DrinfeldModule { field, coeffs, degree_guard: DEFAULT_DEGREE_GUARD })
    }

    /// The Carlitz module C_T = T + tau.
    pub fn carlitz(field: FqField) -> Self {
        DrinfeldModule { field, coeffs: vec![Poly::one()], degree_guard: DEFAULT_DEGREE_GUARD }
    }

    pub fn with_degree_guard(mut self, guard: u64) -> Self {
        self.degree_guard = guard;
        self
    }

    pub fn degree_guard(&self) -> u64 {
        self.degree_guard
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// a_1, ..., a_r.
    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_carlitz(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Canonical text form: list of the a_i code lists.
    pub fn coeffs_text(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    pub fn phi_t(&self) -> TwistedPoly {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(Poly::t());
        c.extend(self.coeffs.iter().cloned());
        TwistedPoly::new(c)
    }

    /// phi_b as a twisted polynomial, by Horner in phi_T.
    pub fn image(&self, b: &Poly) -> TwistedPoly {
        let fq = &self.field;
        let phi_t = self.phi_t();
        let mut acc = TwistedPoly::zero();
        for &c in b.coeffs().iter().rev() {
            acc = phi_t.mul(&acc, fq).add(&TwistedPoly::constant(Poly::constant(c)), fq);
        }
        acc
    }

    /// phi_T(x), exactly.
    pub fn apply_t(&self, x: &Poly) -> Poly {
        let fq = &self.field;
        let mut acc = Poly::t().mul(x, fq);
        let mut xp = x.clone();
        for c in &self.coeffs {
            xp = xp.frobenius(1, fq);
            if !c.is_zero() {
                acc = acc.add(&c.mul(&xp, fq), fq);
            }
        }
        acc
    }

    /// Upper bound on deg phi_b(a) from the degree recursion
    /// D' = max(1 + D, deg a_i + q^i D). Saturates at `u64::MAX`.
    pub fn predicted_degree(&self, b: &Poly, a: &Poly) -> u64 {
        let (Some(db), Some(da)) = (b.degree(), a.degree()) else {
            return 0;
        };
        let q = self.field.q() as u64;
        let mut d = da as u64;
        for _ in 0..db {
            let mut next = d.saturating_add(1);
            let mut qi = 1u64;
            for c in &self.coeffs {
                qi = qi.saturating_mul(q);
                if let Some(dc) = c.degree() {
                    next = next.max(qi.saturating_mul(d).saturating_add(dc as u64));
                }
            }
            d = next;
        }
        d
    }

    /// phi_b(a) computed exactly, refused when the predicted degree exceeds
    /// the module's degree guard.
    pub fn eval(&self, b: &Poly, a: &Poly) -> Result<Poly> {
        let predicted = self.predicted_degree(b, a);
        if predicted > self.degree_guard {
            return Err(Error::DegreeGuard { predicted, limit: self.degree_guard });
        }
        let fq = &self.field;
        let mut acc = Poly::zero();
        let mut x = a.clone();
        for (i, &c) in b.coeffs().iter().enumerate() {
            if i > 0 {
                x = self.apply_t(&x);
            }
            if !c.is_zero() {
                acc = acc.add(&x.scale(c, fq), fq);
            }
        }
        Ok(acc)
    }

    /// phi_b(a) mod m, iterating x -> phi_T(x) mod m over the T-adic digits
    /// of b; the exact value is never formed.
    pub fn eval_mod(&self, b: &Poly, a: &Poly, m: &Poly) -> Result<Poly> {
        let action = ModularAction::new(self, m)?;
        let fq = &self.field;
        let mut acc = Poly::zero();
        let mut x = a.rem(m, fq)?;
        for (i, &c) in b.coeffs().iter().enumerate() {
            if i > 0 {
                x = action.apply_t(&x);
            }
            if !c.is_zero() {
                acc = acc.add(&x.scale(c, fq), fq);
            }
        }
        Ok(acc)
    }

    /// phi_b(a), reduced mod m when given.
    pub fn eval_phi(&self, b: &Poly, a: &Poly, m: Option<&Poly>) -> Result<Poly> {
        match m {
            Some(m) => self.eval_mod(b, a, m),
            None => self.eval(b, a),
        }
    }

    /// phi_{T^i}(a) mod m for i = 0, 1, ... (lazy).
    pub fn orbit_mod<'a>(&'a self, a: &Poly, m: &'a Poly) -> Result<impl Iterator<Item = Poly> + 'a> {
        let action = ModularAction::new(self, m)?;
        let mut x = Some(a.rem(m, &self.field)?);
        Ok(std::iter::from_fn(move || {
            let cur = x.take()?;
            x = Some(action.apply_t(&cur));
            Some(cur)
        }))
    }

    /// Monic generator g of the Fitting ideal of phi(A/PA): the
    /// characteristic polynomial of m -> phi_T(m) on A/PA, evaluated at T.
    pub fn fitting_generator(&self, prime: &Poly) -> Result<FittingData> {
        let fq = &self.field;
        let d = match prime.degree() {
            None | Some(0) => return Err(Error::NotIrreducible("fitting_generator")),
            Some(d) => d,
        };
        if !prime.is_monic() {
            return Err(Error::NotMonic("fitting_generator"));
        }
        if !is_irreducible(prime, fq)? {
            return Err(Error::NotIrreducible("fitting_generator"));
        }
        let action = ModularAction::new(self, prime)?;
        // row j = coordinates of phi_T(T^j); charpoly is transpose-invariant
        let mat: Vec<Vec<FqElem>> = (0..d)
            .map(|j| {
                let img = action.apply_t(&Poly::monomial(FqElem::ONE, j));
                (0..d).map(|i| img.coeff(i)).collect()
            })
            .collect();
        let g = Poly::from_elems(charpoly(&mat, fq));
        let r = prime.sub(&g, fq);

        let mut rng = ChaCha8Rng::seed_from_u64(self.fingerprint(prime));
        for _ in 0..3 {
            let a = Poly::random(d, fq, &mut rng);
            if !self.eval_mod(&g, &a, prime)?.is_zero() {
                return Err(Error::Invariant(format!(
                    "phi_g(a) != 0 mod P for P = {prime}, g = {g}, a = {a}"
                )));
            }
        }
        Ok(FittingData { prime: prime.clone(), g, r })
    }

    /// FNV-1a over (q, module coefficients, extra); stable across runs.
    pub(crate) fn fingerprint(&self, extra: &Poly) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |x: u32| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        feed(self.field.q());
        for c in &self.coeffs {
            feed(u32::MAX);
            c.coeffs().iter().for_each(|x| feed(x.code()));
        }
        feed(u32::MAX - 1);
        extra.coeffs().iter().for_each(|x| feed(x.code()));
        h
    }

    /// True when deg b > M = max_{0<=i<r} deg(a_i)/(q^r - q^i), with a_0 = T.
    /// Beyond M, deg phi_T(b) = q^r deg b + deg a_r and degrees strictly grow.
    pub fn exceeds_growth_bound(&self, deg_b: usize) -> bool {
        let q = self.field.q() as u128;
        let r = self.rank() as u32;
        let qr = q.pow(r);
        let deg_b = deg_b as u128;
        // i = 0 term uses a_0 = T of degree 1
        if (qr - 1) * deg_b <= 1 {
            return false;
        }
        self.coeffs[..self.rank() - 1].iter().enumerate().all(|(i, c)| match c.degree() {
            None => true,
            Some(dc) => (qr - q.pow(i as u32 + 1)) * deg_b > dc as u128,
        })
    }

    /// Decides whether a is a torsion point by following its T-orbit: a
    /// repeated value (or zero) proves torsion, crossing the growth bound
    /// proves the orbit is infinite.
    pub fn is_torsion(&self, a: &Poly) -> bool {
        let mut seen = HashSet::new();
        let mut b = a.clone();
        loop {
            if b.is_zero() {
                return true;
            }
            if self.exceeds_growth_bound(b.degree().unwrap()) {
                return false;
            }
            if !seen.insert(b.clone()) {
                return true;
            }
            b = self.apply_t(&b);
        }
    }

    /// Monic generator of {c : phi_c(a) = 0} for a torsion point a, `None`
    /// when a is not torsion. Torsion orbits stay below the growth bound, so
    /// the linear algebra runs in a finite-dimensional space.
    pub fn torsion_annihilator(&self, a: &Poly) -> Option<Poly> {
        let fq = &self.field;
        // largest degree not exceeding the growth bound
        let mut bound = 0usize;
        while !self.exceeds_growth_bound(bound + 1) {
            bound += 1;
        }
        let mut dep = DependencyFinder::new(bound + 1, fq);
        let mut x = a.clone();
        loop {
            if x.degree().is_some_and(|d| d > bound) {
                return None;
            }
            if let Some(c) = dep.push(x.coeffs()) {
                return Some(Poly::from_elems(c));
            }
            x = self.apply_t(&x);
        }
    }

    /// c_phi: deg a > c_phi implies deg phi_a(1) > deg a.
    ///
    /// With N minimal such that deg phi_{T^N}(1) exceeds the growth bound,
    /// deg phi_{T^{N+n}}(1) = q^{rn}(D_N + s) - s with s = deg a_r/(q^r - 1);
    /// the result is N + n0 for the least n0 where that exceeds N + n0.
    pub fn degree_threshold(&self) -> Result<u64> {
        if self.is_torsion(&Poly::one()) {
            return Err(Error::TorsionBase);
        }
        let mut x = Poly::one();
        let mut n_start = 0u64;
        while !self.exceeds_growth_bound(x.degree().expect("1 is not torsion")) {
            x = self.apply_t(&x);
            n_start += 1;
        }
        let d_start = x.degree().unwrap() as u128;
        let qr = (self.field.q() as u128).pow(self.rank() as u32);
        let delta = self.coeffs.last().unwrap().degree().unwrap() as u128;
        // (q^{rn} (D_N (q^r - 1) + delta) - delta) / (q^r - 1), exact
        let mut qrn: u128 = 1;
        for n0 in 0u64.. {
            let deg = (qrn * (d_start * (qr - 1) + delta) - delta) / (qr - 1);
            if deg > (n_start + n0) as u128 {
                return Ok(n_start + n0);
            }
            qrn = qrn.checked_mul(qr).ok_or_else(|| {
                Error::Invariant("degree threshold search overflowed".into())
            })?;
        }
        unreachable!()
    }
}
