//! Factorization-grade primitives over F_q: Rabin irreducibility,
//! squarefree decomposition in characteristic p, Cantor–Zassenhaus
//! factorization, radicals, valuations and enumeration of monic
//! irreducibles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FqElem, FqField};
use crate::poly::Poly;

/// Seed used by [`factor`] when the caller does not pick one.
pub const DEFAULT_SPLIT_SEED: u64 = 0x5eed_f00d;

/// Failed random splits tolerated per equal-degree split.
pub const SPLIT_RETRY_BUDGET: u32 = 64;

/// The q-power Frobenius on A/fA as a matrix: row i holds T^{q i} mod f.
struct FrobeniusMap {
    modulus: Poly,
    rows: Vec<Poly>,
}

impl FrobeniusMap {
    fn new(modulus: &Poly, fq: &FqField) -> Result<Self> {
        let d = modulus.degree().ok_or(Error::DivisionByZero)?;
        let q = fq.q() as usize;
        let mut rows = Vec::with_capacity(d);
        let mut cur = Poly::one().rem(modulus, fq)?;
        for _ in 0..d {
            rows.push(cur.clone());
            cur = cur.shift(q).rem(modulus, fq)?;
        }
        Ok(FrobeniusMap { modulus: modulus.clone(), rows })
    }

    /// h^q mod f for h already reduced mod f.
    fn apply(&self, h: &Poly, fq: &FqField) -> Poly {
        let d = self.rows.len();
        let mut acc = vec![FqElem::ZERO; d];
        for (i, &c) in h.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (a, &r) in acc.iter_mut().zip(self.rows[i].coeffs()) {
                *a = fq.add(*a, fq.mul(c, r));
            }
        }
        Poly::from_elems(acc)
    }

    fn reduce(&self, h: &Poly, fq: &FqField) -> Result<Poly> {
        h.rem(&self.modulus, fq)
    }
}

/// Degrees k for which [`is_irreducible`] looks for factors of degree
/// dividing k before reaching the Rabin checkpoints.
const SMALL_FACTOR_PROBE: usize = 8;

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
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

/// Rabin's criterion: f of degree n is irreducible iff T^{q^n} = T mod f and
/// gcd(T^{q^{n/l}} - T, f) = 1 for every prime l dividing n.
pub fn is_irreducible(f: &Poly, fq: &FqField) -> Result<bool> {
    let n = match f.degree() {
        None => return Err(Error::ZeroPolynomial("is_irreducible")),
        Some(0) => return Err(Error::ConstantPolynomial("is_irreducible")),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let f = f.monic(fq);
    let frob = FrobeniusMap::new(&f, fq)?;
    let checkpoints: Vec<usize> = prime_divisors(n).into_iter().map(|l| n / l).collect();
    let t = Poly::t();
    let mut h = t.clone();
    for k in 1..=n {
        h = frob.apply(&h, fq);
        // gcd(T^{q^k} - T, f) collects the factors of degree dividing k, so a
        // nontrivial gcd at small k < n is an early certificate of
        // reducibility; the Rabin checkpoints complete the decision.
        let probe = checkpoints.contains(&k) || (k <= SMALL_FACTOR_PROBE && 2 * k <= n);
        if probe && !h.sub(&t, fq).gcd(&f, fq)?.is_one() {
            return Ok(false);
        }
    }
    Ok(h == t)
}

/// Squarefree decomposition `f = lc * prod g_i^{e_i}` with the g_i monic,
/// squarefree and pairwise coprime, sorted by multiplicity then canonical
/// order. Yun-style loop plus p-th root extraction when f' = 0.
pub fn squarefree_decomposition(f: &Poly, fq: &FqField) -> Result<Vec<(Poly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("squarefree_decomposition"));
    }
    let mut out = Vec::new();
    sqf_into(&f.monic(fq), 1, fq, &mut out)?;
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

fn sqf_into(f: &Poly, scale: u32, fq: &FqField, out: &mut Vec<(Poly, u32)>) -> Result<()> {
    if f.degree() == Some(0) {
        return Ok(());
    }
    let df = f.derivative(fq);
    let mut c = f.gcd(&df, fq)?;
    let mut w = f.div_exact(&c, fq)?.expect("gcd divides f");
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c, fq)?;
        let fac = w.div_exact(&y, fq)?.expect("gcd divides w");
        if !fac.is_one() {
            out.push((fac, i * scale));
        }
        w = y;
        c = c.div_exact(&w, fq)?.expect("w divides c");
        i += 1;
    }
    if !c.is_one() {
        let root = c.pth_root(fq).ok_or_else(|| {
            Error::Invariant("leftover squarefree cofactor is not a p-th power".into())
        })?;
        sqf_into(&root.monic(fq), scale * fq.p(), fq, out)?;
    }
    Ok(())
}

pub fn is_squarefree(f: &Poly, fq: &FqField) -> Result<bool> {
    Ok(squarefree_decomposition(f, fq)?.iter().all(|&(_, e)| e == 1))
}

/// Product of the distinct monic irreducible factors.
pub fn radical(f: &Poly, fq: &FqField) -> Result<Poly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("radical"));
    }
    Ok(squarefree_decomposition(f, fq)?
        .iter()
        .fold(Poly::one(), |acc, (g, _)| acc.mul(g, fq)))
}

/// v_P(f): the largest k with P^k | f. P must be irreducible.
pub fn valuation(f: &Poly, prime: &Poly, fq: &FqField) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("valuation"));
    }
    if prime.degree().unwrap_or(0) == 0 || !is_irreducible(prime, fq)? {
        return Err(Error::NotIrreducible("valuation"));
    }
    f.multiplicity(prime, fq)
}

/// Complete factorization into monic irreducibles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FqElem,
    /// Sorted by canonical polynomial order.
    pub factors: Vec<(Poly, u32)>,
    /// Seed of the equal-degree splitting.
    pub seed: u64,
}

impl Factorization {
    pub fn expand(&self, fq: &FqField) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit), |acc, (g, e)| acc.mul(&g.pow(*e as u64, fq), fq))
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

pub fn factor(f: &Poly, fq: &FqField) -> Result<Factorization> {
    factor_seeded(f, fq, DEFAULT_SPLIT_SEED)
}

pub fn factor_seeded(f: &Poly, fq: &FqField, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("factor"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f, fq)? {
        for (k, block) in distinct_degree(&part, fq)? {
            for g in equal_degree(&block, k, fq, &mut rng)? {
                factors.push((g, mult));
            }
        }
    }
    factors.sort();
    Ok(Factorization { unit: f.lc(), factors, seed })
}

/// Splits a monic squarefree f into blocks (k, product of its degree-k
/// irreducible factors).
fn distinct_degree(f: &Poly, fq: &FqField) -> Result<Vec<(usize, Poly)>> {
    let frob = FrobeniusMap::new(f, fq)?;
    let t = Poly::t();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = frob.reduce(&t, fq)?;
    let mut k = 0;
    while rest.degree().unwrap_or(0) >= 2 * (k + 1) {
        k += 1;
        h = frob.apply(&h, fq);
        let g = h.sub(&t, fq).gcd(&rest, fq)?;
        if !g.is_one() {
            rest = rest.div_exact(&g, fq)?.expect("gcd divides");
            out.push((k, g));
        }
    }
    if let Some(d) = rest.degree().filter(|&d| d > 0) {
        out.push((d, rest));
    }
    Ok(out)
}

/// Cantor–Zassenhaus splitting of a product of distinct degree-k monic
/// irreducibles.
fn equal_degree(f: &Poly, k: usize, fq: &FqField, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let n = f.degree().unwrap_or(0);
    if n <= k {
        return Ok(vec![f.clone()]);
    }
    let frob = FrobeniusMap::new(f, fq)?;
    let odd = fq.p() != 2;
    for _ in 0..SPLIT_RETRY_BUDGET {
        let a = Poly::random(n, fq, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut g = a.gcd(f, fq)?;
        if g.is_one() {
            let b = if odd {
                // a^{(q^k - 1)/2} = (a^{1 + q + ... + q^{k-1}})^{(q-1)/2}
                let mut norm = a.clone();
                let mut conj = a.clone();
                for _ in 1..k {
                    conj = frob.apply(&conj, fq);
                    norm = norm.mul_mod(&conj, f, fq)?;
                }
                norm.pow_mod((fq.q() as u64 - 1) / 2, f, fq)?.sub(&Poly::one(), fq)
            } else {
                // absolute trace to F_2: sum of a^{2^i}, i < e*k
                let mut acc = Poly::zero();
                let mut x = a.clone();
                for _ in 0..(fq.e() as usize * k) {
                    acc = acc.add(&x, fq);
                    x = x.mul_mod(&x, f, fq)?;
                }
                acc
            };
            if b.is_zero() {
                continue;
            }
            g = b.gcd(f, fq)?;
        }
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = f.div_exact(&g, fq)?.expect("gcd divides");
            let mut out = equal_degree(&g, k, fq, rng)?;
            out.extend(equal_degree(&h, k, fq, rng)?);
            return Ok(out);
        }
    }
    Err(Error::SplitBudgetExhausted { attempts: SPLIT_RETRY_BUDGET })
}

/// How [`irreducibles`] draws its polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// Every monic irreducible of the degree once, in canonical order.
    Enumerate,
    /// An endless stream of uniform samples.
    Random { seed: u64 },
}

/// Monic irreducibles of degree `d`.
pub fn irreducibles(
    d: usize,
    sampling: Sampling,
    fq: &FqField,
) -> Result<Box<dyn Iterator<Item = Poly> + '_>> {
    if d < 1 {
        return Err(Error::Precondition("irreducibles: degree must be >= 1".into()));
    }
    match sampling {
        Sampling::Enumerate => {
            let count = (fq.q() as u64)
                .checked_pow(d as u32)
                .ok_or_else(|| Error::Precondition("irreducibles: q^d overflows".into()))?;
            let q = fq.q();
            Ok(Box::new((0..count).map(move |i| Poly::monic_from_index(d, i, q)).filter(
                move |f| is_irreducible(f, fq).expect("non-constant"),
            )))
        }
        Sampling::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(Box::new(std::iter::from_fn(move || {
                Some(random_irreducible(d, fq, &mut rng))
            })))
        }
    }
}

/// Uniform monic irreducible of degree d by rejection sampling.
pub fn random_irreducible<R: Rng + ?Sized>(d: usize, fq: &FqField, rng: &mut R) -> Poly {
    loop {
        let f = Poly::random_monic(d, fq, rng);
        if is_irreducible(&f, fq).expect("non-constant") {
            return f;
        }
    }
}

/// All monic irreducibles with degree in `[dmin, dmax]`, canonical order.
pub fn monic_irreducibles_between(dmin: usize, dmax: usize, fq: &FqField) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    for d in dmin.max(1)..=dmax {
        out.extend(irreducibles(d, Sampling::Enumerate, fq)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FqField {
        FqField::prime(3).unwrap()
    }

    fn p(codes: &[u32], fq: &FqField) -> Poly {
        Poly::from_codes(codes, fq).unwrap()
    }

    fn has_root(f: &Poly, fq: &FqField) -> bool {
        fq.elements().any(|x| f.eval(x, fq).is_zero())
    }

    #[test]
    fn irreducibility_examples() {
        let fq = f3();
        let f = p(&[1, 0, 1], &fq);
        assert!(!has_root(&f, &fq));
        assert!(is_irreducible(&f, &fq).unwrap());
        assert!(!is_irreducible(&p(&[1, 2, 1], &fq), &fq).unwrap());
        for q in [2, 3, 5] {
            let fq = FqField::prime(q).unwrap();
            assert!(is_irreducible(&Poly::t(), &fq).unwrap());
        }
        assert_eq!(
            is_irreducible(&p(&[2], &fq), &fq),
            Err(Error::ConstantPolynomial("is_irreducible"))
        );
        // Product of two irreducible quadratics has no roots but is reducible.
        let g = p(&[1, 0, 1], &fq).mul(&p(&[2, 1, 1], &fq), &fq);
        assert!(!has_root(&g, &fq));
        assert!(!is_irreducible(&g, &fq).unwrap());
    }

    #[test]
    fn squarefree_examples() {
        let fq = f3();
        let f = p(&[0, 0, 1, 1], &fq); // T^2 (T + 1)
        assert_eq!(
            squarefree_decomposition(&f, &fq).unwrap(),
            vec![(p(&[1, 1], &fq), 1), (Poly::t(), 2)]
        );
        assert_eq!(
            squarefree_decomposition(&p(&[0, 0, 0, 1], &fq), &fq).unwrap(),
            vec![(Poly::t(), 3)]
        );
        let sq = p(&[2, 1, 1], &fq).scale(FqElem(2), &fq);
        assert_eq!(
            squarefree_decomposition(&sq, &fq).unwrap(),
            vec![(sq.monic(&fq), 1)]
        );
        // (T+1)^4 (T^2+1)^3 exercises both the loop and the p-th root branch.
        let g = p(&[1, 1], &fq).pow(4, &fq).mul(&p(&[1, 0, 1], &fq).pow(3, &fq), &fq);
        assert_eq!(
            squarefree_decomposition(&g, &fq).unwrap(),
            vec![(p(&[1, 0, 1], &fq), 3), (p(&[1, 1], &fq), 4)]
        );
    }

    #[test]
    fn factor_examples() {
        let fq = f3();
        let f = p(&[2, 0, 1], &fq);
        let fac = factor(&f, &fq).unwrap();
        assert_eq!(fac.factors, vec![(p(&[1, 1], &fq), 1), (p(&[2, 1], &fq), 1)]);
        let irr = p(&[1, 2, 0, 1], &fq);
        assert!(is_irreducible(&irr, &fq).unwrap());
        assert_eq!(factor(&irr, &fq).unwrap().factors, vec![(irr.clone(), 1)]);
        let sq = p(&[1, 0, 1], &fq).pow(2, &fq);
        assert_eq!(factor(&sq, &fq).unwrap().factors, vec![(p(&[1, 0, 1], &fq), 2)]);
        assert!(factor(&Poly::zero(), &fq).is_err());
    }

    #[test]
    fn radical_examples() {
        let fq = f3();
        assert_eq!(radical(&p(&[0, 0, 1, 1], &fq), &fq).unwrap(), p(&[0, 1, 1], &fq));
        let sf = p(&[1, 0, 1], &fq);
        assert_eq!(radical(&sf, &fq).unwrap(), sf);
        assert_eq!(radical(&p(&[2], &fq), &fq).unwrap(), Poly::one());
    }

    #[test]
    fn valuation_examples() {
        let fq = f3();
        let f = p(&[0, 0, 1, 1], &fq);
        assert_eq!(valuation(&f, &Poly::t(), &fq).unwrap(), 2);
        assert_eq!(valuation(&f, &p(&[1, 0, 1], &fq), &fq).unwrap(), 0);
        assert_eq!(
            valuation(&f, &p(&[0, 0, 1], &fq), &fq),
            Err(Error::NotIrreducible("valuation"))
        );
        assert_eq!(
            valuation(&Poly::zero(), &Poly::t(), &fq),
            Err(Error::ZeroPolynomial("valuation"))
        );
    }

    #[test]
    fn enumeration_examples() {
        let fq = f3();
        let lin: Vec<String> = irreducibles(1, Sampling::Enumerate, &fq)
            .unwrap()
            .map(|f| f.to_string())
            .collect();
        assert_eq!(lin, ["[0,1]", "[1,1]", "[2,1]"]);

        // (q^2 - q)/2 = 3 root-free monic quadratics over F_3
        let quad: Vec<Poly> = irreducibles(2, Sampling::Enumerate, &fq).unwrap().collect();
        let root_free: Vec<Poly> = (0..9)
            .map(|i| Poly::monic_from_index(2, i, 3))
            .filter(|f| !has_root(f, &fq))
            .collect();
        assert_eq!(quad, root_free);
        assert_eq!(
            quad.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            ["[1,0,1]", "[2,1,1]", "[2,2,1]"]
        );

        let f2 = FqField::prime(2).unwrap();
        let q2: Vec<Poly> = irreducibles(2, Sampling::Enumerate, &f2).unwrap().collect();
        assert_eq!(q2, vec![p(&[1, 1, 1], &f2)]);

        assert!(irreducibles(0, Sampling::Enumerate, &fq).is_err());
    }

    #[test]
    fn random_sampling_is_seeded_and_irreducible() {
        let fq = FqField::prime(5).unwrap();
        let a: Vec<Poly> = irreducibles(3, Sampling::Random { seed: 9 }, &fq).unwrap().take(10).collect();
        let b: Vec<Poly> = irreducibles(3, Sampling::Random { seed: 9 }, &fq).unwrap().take(10).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|f| f.is_monic() && is_irreducible(f, &fq).unwrap()));
    }
}
