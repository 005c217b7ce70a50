//! Empirical companions to the abc-style arguments: the Mason–Stothers
//! inequality, the squarefree/squarefull split of phi_b(a)/a, squarefree
//! statistics, and the homogeneous Fermat equation with its Wieferich base.

use rayon::prelude::*;

use crate::drinfeld::DrinfeldModule;
use crate::error::{Error, Result};
use crate::factor::{factor, is_irreducible, radical};
use crate::field::FqField;
use crate::poly::Poly;
use crate::wieferich::thakur_congruence_holds;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MasonStothers {
    pub holds: bool,
    /// deg rad(xyz) - 1 - max(deg x, deg y, deg z).
    pub slack: i64,
}

/// Checks max(deg x, deg y, deg z) <= deg rad(xyz) - 1 for x + y = z with
/// x, y, z nonzero, pairwise coprime and not all of zero derivative.
pub fn mason_stothers_check(x: &Poly, y: &Poly, z: &Poly, fq: &FqField) -> Result<MasonStothers> {
    if x.is_zero() || y.is_zero() || z.is_zero() {
        return Err(Error::Precondition("mason_stothers: nonzero condition fails".into()));
    }
    if x.add(y, fq) != *z {
        return Err(Error::Precondition("mason_stothers: sum condition x + y = z fails".into()));
    }
    for (u, v) in [(x, y), (x, z), (y, z)] {
        if !u.gcd(v, fq)?.is_one() {
            return Err(Error::Precondition("mason_stothers: coprimality condition fails".into()));
        }
    }
    if [x, y, z].iter().all(|f| f.derivative(fq).is_zero()) {
        return Err(Error::Precondition("mason_stothers: derivative condition fails".into()));
    }
    let rad = radical(&x.mul(y, fq).mul(z, fq), fq)?;
    let max_deg = [x, y, z].iter().map(|f| f.deg_or_neg()).max().unwrap();
    let slack = rad.deg_or_neg() - 1 - max_deg;
    Ok(MasonStothers { holds: slack >= 0, slack })
}

/// The triple (phi_{b-1}(a)/a, 1, phi_b(a)/a), after confirming the additive
/// identity phi_b(a) = phi_{b-1}(a) + a that makes it sum correctly.
pub fn application_triple(phi: &DrinfeldModule, a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
    let fq = phi.field();
    if a.is_zero() {
        return Err(Error::ZeroPolynomial("application_triple"));
    }
    let b1 = b.sub(&Poly::one(), fq);
    let mb = phi.eval(b, a)?;
    let mb1 = phi.eval(&b1, a)?;
    if mb != mb1.add(a, fq) {
        return Err(Error::Invariant(format!("phi_b(a) != phi_(b-1)(a) + a for b = {b}, a = {a}")));
    }
    let quotient = |m: &Poly| {
        m.div_exact(a, fq)?
            .ok_or_else(|| Error::Invariant(format!("{a} does not divide phi value {m}")))
    };
    let (x, z) = (quotient(&mb1)?, quotient(&mb)?);
    let y = Poly::one();
    if x.add(&y, fq) != z {
        return Err(Error::Invariant("application triple does not sum".into()));
    }
    Ok((x, y, z))
}

/// f = lc * u * v with u the product of primes dividing f exactly once and
/// v the product of the prime powers P^e, e >= 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UVDecomposition {
    pub b: Poly,
    pub a: Poly,
    /// phi_b(a) / a.
    pub f: Poly,
    pub u: Poly,
    pub v: Poly,
    /// Prime factors of u for which P^2 nevertheless divides phi_b(a)
    /// (only possible through the factor a).
    pub uncertified: Vec<Poly>,
}

/// Splits f into its squarefree-exponent and squarefull parts (monic).
pub fn uv_split(f: &Poly, fq: &FqField) -> Result<(Poly, Poly)> {
    let fac = factor(f, fq)?;
    let mut u = Poly::one();
    let mut v = Poly::one();
    for (p, e) in &fac.factors {
        if *e == 1 {
            u = u.mul(p, fq);
        } else {
            v = v.mul(&p.pow(*e as u64, fq), fq);
        }
    }
    Ok((u, v))
}

pub fn uv_decompose(phi: &DrinfeldModule, a: &Poly, b: &Poly) -> Result<UVDecomposition> {
    let fq = phi.field();
    if a.is_zero() {
        return Err(Error::ZeroPolynomial("uv_decompose"));
    }
    let m = phi.eval(b, a)?;
    if m.is_zero() {
        return Err(Error::Precondition(format!("phi_b(a) = 0 for b = {b}, a = {a}")));
    }
    let f = m
        .div_exact(a, fq)?
        .ok_or_else(|| Error::Invariant(format!("{a} does not divide phi_b(a) for b = {b}")))?;
    let (u, v) = uv_split(&f, fq)?;
    let mut uncertified = Vec::new();
    for (p, _) in factor(&u, fq)?.factors {
        if m.multiplicity(&p, fq)? >= 2 {
            uncertified.push(p);
        }
    }
    Ok(UVDecomposition { b: b.clone(), a: a.clone(), f, u, v, uncertified })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConjectureARow {
    pub degree: u32,
    /// Monic b of this degree.
    pub total: u64,
    /// Those with phi_b(a)/a squarefree of nonzero derivative.
    pub counted: u64,
    /// counted / total over all degrees up to this one.
    pub running_ratio: f64,
}

/// f' != 0 and gcd(f, f') constant.
pub fn squarefree_with_nonzero_derivative(f: &Poly, fq: &FqField) -> Result<bool> {
    let df = f.derivative(fq);
    Ok(!df.is_zero() && f.gcd(&df, fq)?.is_unit())
}

/// Tallies, for every monic b with deg b <= dmax, whether phi_b(a)/a is
/// squarefree with nonzero derivative.
pub fn conjecture_a_stats(phi: &DrinfeldModule, a: &Poly, dmax: u32) -> Result<Vec<ConjectureARow>> {
    let fq = phi.field();
    if a.is_zero() {
        return Err(Error::ZeroPolynomial("conjecture_a_stats"));
    }
    let q = fq.q() as u64;
    let (mut seen, mut hits) = (0u64, 0u64);
    let mut rows = Vec::new();
    for d in 0..=dmax {
        let total = q.checked_pow(d).ok_or_else(|| Error::Precondition("q^d overflows".into()))?;
        let counted = (0..total)
            .into_par_iter()
            .map(|i| -> Result<bool> {
                let b = Poly::monic_from_index(d as usize, i, fq.q());
                let m = phi.eval(&b, a)?;
                let f = m.div_exact(a, fq)?.ok_or_else(|| Error::Invariant("a does not divide phi_b(a)".into()))?;
                if f.is_zero() {
                    return Ok(false);
                }
                squarefree_with_nonzero_derivative(&f, fq)
            })
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .filter(|&x| x)
            .count() as u64;
        seen += total;
        hits += counted;
        rows.push(ConjectureARow { degree: d, total, counted, running_ratio: hits as f64 / seen as f64 });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FermatSolution {
    pub x: Poly,
    pub y: Poly,
    pub z: Poly,
}

/// Result of an exhaustive search for y^N phi_P(x/y) = z^N, N = q^(r deg P).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FermatInstance {
    pub prime: Poly,
    pub deg_bound: u32,
    /// The tau-coefficients b_i of phi_P.
    pub phi_p: Vec<Poly>,
    /// (x, y) pairs with P not dividing xy that were tested.
    pub pairs_examined: u64,
    pub solutions: Vec<FermatSolution>,
}

/// sum_i b_i x^(q^i) y^(N - q^i) with N = q^(tau-degree of phi_P).
pub fn fermat_form(phi: &DrinfeldModule, phi_p: &[Poly], x: &Poly, y: &Poly) -> Poly {
    let fq = phi.field();
    let top = phi_p.len() as u32 - 1;
    let mut acc = Poly::zero();
    for (i, b) in phi_p.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let i = i as u32;
        let xi = x.frobenius(i, fq);
        // y^(q^top - q^i) = (y^(q^(top-i) - 1))^(q^i)
        let qk = (fq.q() as u64).pow(top - i);
        let yi = y.pow(qk - 1, fq).frobenius(i, fq);
        acc = acc.add(&b.mul(&xi, fq).mul(&yi, fq), fq);
    }
    acc
}

/// The q^k-th root of f when it exists, through k * e successive p-th roots.
pub fn qth_power_root(f: &Poly, k: u32, fq: &FqField) -> Option<Poly> {
    let mut g = f.clone();
    for _ in 0..k * fq.e() {
        g = g.pth_root(fq)?;
    }
    Some(g)
}

/// Exhaustive search over x, y of degree <= deg_bound with P not dividing
/// xy; a pair is a solution when the Fermat form is an exact q^(r deg P)-th
/// power z^N with P not dividing z.
pub fn fermat_search(phi: &DrinfeldModule, prime: &Poly, deg_bound: u32) -> Result<FermatInstance> {
    let fq = phi.field();
    let d = match prime.degree() {
        Some(d) if d > 0 && prime.is_monic() && is_irreducible(prime, fq)? => d as u32,
        _ => return Err(Error::NotIrreducible("fermat_search")),
    };
    let phi_p = phi.image(prime).coeffs().to_vec();
    let k = phi.rank() as u32 * d;
    let n = (fq.q() as u64).checked_pow(k).unwrap_or(u64::MAX);
    let max_b = phi_p.iter().map(|b| b.degree().unwrap_or(0) as u64).max().unwrap_or(0);
    let predicted = n.saturating_mul(deg_bound as u64).saturating_add(max_b);
    if predicted > phi.degree_guard() {
        return Err(Error::DegreeGuard { predicted, limit: phi.degree_guard() });
    }
    let count = (fq.q() as u64)
        .checked_pow(deg_bound + 1)
        .ok_or_else(|| Error::Precondition("fermat_search: search space overflows".into()))?;
    let candidates: Vec<Poly> = (1..count)
        .map(|i| Poly::from_index(deg_bound as usize + 1, i, fq.q()))
        .filter(|x| !prime.divides(x, fq).expect("nonzero prime"))
        .collect();
    let per_x = candidates
        .par_iter()
        .map(|x| -> Result<Vec<FermatSolution>> {
            let mut out = Vec::new();
            for y in &candidates {
                let l = fermat_form(phi, &phi_p, x, y);
                let Some(z) = qth_power_root(&l, k, fq) else { continue };
                if z.is_zero() || prime.divides(&z, fq)? {
                    continue;
                }
                if z.frobenius(k, fq) != l {
                    return Err(Error::Invariant(format!("root of {l} does not rebuild it")));
                }
                out.push(FermatSolution { x: x.clone(), y: y.clone(), z });
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let m = candidates.len() as u64;
    Ok(FermatInstance {
        prime: prime.clone(),
        deg_bound,
        phi_p,
        pairs_examined: m * m,
        solutions: per_x.into_iter().flatten().collect(),
    })
}

/// Base a (degree < 2 deg P) in which P satisfies the Thakur-style
/// Wieferich congruence, built from a Fermat solution: with x1 = x/z,
/// y1 = y/z and c defined by phi_r(x/y) = (x/y) c in A/P^2, a = 1/(c y1).
pub fn wieferich_base_from_fermat(
    phi: &DrinfeldModule,
    prime: &Poly,
    x: &Poly,
    y: &Poly,
    z: &Poly,
) -> Result<Poly> {
    let fq = phi.field();
    let fit = phi.fitting_generator(prime)?;
    for (name, w) in [("x", x), ("y", y), ("z", z)] {
        if w.is_zero() || prime.divides(w, fq)? {
            return Err(Error::Precondition(format!("P = {prime} divides {name}")));
        }
    }
    let phi_p = phi.image(prime).coeffs().to_vec();
    let k = phi.rank() as u32 * prime.degree().unwrap() as u32;
    if fermat_form(phi, &phi_p, x, y) != z.frobenius(k, fq) {
        return Err(Error::Precondition("(x, y, z) does not solve the Fermat equation".into()));
    }
    let m = prime.mul(prime, fq);
    let inv = |w: &Poly| -> Result<Poly> {
        w.inv_mod(&m, fq)?
            .ok_or_else(|| Error::Precondition(format!("{w} is not a unit modulo P^2")))
    };
    let y1 = y.mul_mod(&inv(z)?, &m, fq)?;
    let ratio = x.mul_mod(&inv(y)?, &m, fq)?;
    let c = phi.eval_mod(&fit.r, &ratio, &m)?.mul_mod(&inv(&ratio)?, &m, fq)?;
    let a = inv(&c.mul_mod(&y1, &m, fq)?)?;
    if !thakur_congruence_holds(phi, prime, &fit.r, &a)? {
        return Err(Error::Invariant(format!("base {a} from a Fermat solution fails the congruence at {prime}")));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::monic_irreducibles_between;
    use crate::wieferich::wieferich_status;

    fn p(codes: &[u32], fq: &FqField) -> Poly {
        Poly::from_codes(codes, fq).unwrap()
    }

    fn f3() -> FqField {
        FqField::prime(3).unwrap()
    }

    #[test]
    fn mason_stothers_examples() {
        let fq = f3();
        let r = mason_stothers_check(&p(&[0, 0, 1], &fq), &Poly::one(), &p(&[1, 0, 1], &fq), &fq).unwrap();
        assert_eq!(r, MasonStothers { holds: true, slack: 0 });
        // rad(T (T + 1)) has degree 2, so the slack is 2 - 1 - 1 = 0
        let r = mason_stothers_check(&Poly::t(), &Poly::one(), &p(&[1, 1], &fq), &fq).unwrap();
        assert_eq!(r, MasonStothers { holds: true, slack: 0 });
        let cube = |f: &Poly| f.pow(3, &fq);
        let (x, y) = (cube(&Poly::t()), cube(&p(&[1], &fq)));
        let err = mason_stothers_check(&x, &y, &x.add(&y, &fq), &fq).unwrap_err();
        assert!(err.to_string().contains("derivative condition"));
        let err = mason_stothers_check(&Poly::t(), &Poly::one(), &Poly::t(), &fq).unwrap_err();
        assert!(err.to_string().contains("sum condition"));
        let t2 = p(&[0, 0, 1], &fq);
        let err = mason_stothers_check(&Poly::t(), &t2, &Poly::t().add(&t2, &fq), &fq).unwrap_err();
        assert!(err.to_string().contains("coprimality"));
    }

    #[test]
    fn uv_examples() {
        let fq = f3();
        let (u, v) = uv_split(&p(&[0, 0, 1, 1], &fq), &fq).unwrap();
        assert_eq!((u, v), (p(&[1, 1], &fq), p(&[0, 0, 1], &fq)));
        let c = DrinfeldModule::carlitz(fq.clone());
        let d = uv_decompose(&c, &Poly::one(), &Poly::t()).unwrap();
        assert_eq!((d.f.clone(), d.u.clone(), d.v.clone()), (p(&[1, 1], &fq), p(&[1, 1], &fq), Poly::one()));
        assert!(d.uncertified.is_empty());
        let sf = p(&[1, 0, 1], &fq);
        assert_eq!(uv_split(&sf, &fq).unwrap().1, Poly::one());
    }

    #[test]
    fn conjecture_a_counts_match_factorization() {
        let fq = f3();
        let c = DrinfeldModule::carlitz(fq.clone());
        let rows = conjecture_a_stats(&c, &Poly::one(), 3).unwrap();
        assert_eq!(rows[0].counted, 0);
        for row in &rows {
            let mut expect = 0;
            for i in 0..row.total {
                let b = Poly::monic_from_index(row.degree as usize, i, 3);
                let f = c.eval(&b, &Poly::one()).unwrap();
                let fac = factor(&f, &fq).unwrap();
                if !f.derivative(&fq).is_zero() && fac.factors.iter().all(|(_, e)| *e == 1) {
                    expect += 1;
                }
            }
            assert_eq!(row.counted, expect, "degree {}", row.degree);
        }
    }

    /// Solutions by enumerating candidate z directly.
    fn fermat_oracle(phi: &DrinfeldModule, prime: &Poly, bound: u32) -> Vec<FermatSolution> {
        let fq = phi.field();
        let phi_p = phi.image(prime).coeffs().to_vec();
        let k = prime.degree().unwrap() as u32 * phi.rank() as u32;
        let all = |n: u32| -> Vec<Poly> {
            (1..(fq.q() as u64).pow(n + 1)).map(|i| Poly::from_index(n as usize + 1, i, fq.q())).collect()
        };
        let keep = |w: &Poly| !prime.divides(w, fq).unwrap();
        let mut out = Vec::new();
        for x in all(bound).into_iter().filter(keep) {
            for y in all(bound).into_iter().filter(keep) {
                let l = fermat_form(phi, &phi_p, &x, &y);
                let Some(dl) = l.degree() else { continue };
                let n = (fq.q() as usize).pow(k);
                if dl % n != 0 {
                    continue;
                }
                for z in all((dl / n) as u32).into_iter().filter(keep) {
                    if z.frobenius(k, fq) == l {
                        out.push(FermatSolution { x: x.clone(), y: y.clone(), z });
                    }
                }
            }
        }
        out
    }

    #[test]
    fn fermat_search_matches_oracle() {
        let fq = f3();
        let c = DrinfeldModule::carlitz(fq.clone());
        let inst = fermat_search(&c, &Poly::t(), 2).unwrap();
        assert_eq!(inst.solutions, fermat_oracle(&c, &Poly::t(), 2));
        // (1, 1) gives T + 1, which is no cube
        assert!(qth_power_root(&fermat_form(&c, &inst.phi_p, &Poly::one(), &Poly::one()), 1, &fq).is_none());
        let fq2 = FqField::prime(2).unwrap();
        let c2 = DrinfeldModule::carlitz(fq2.clone());
        for prime in monic_irreducibles_between(1, 2, &fq2).unwrap() {
            assert_eq!(fermat_search(&c2, &prime, 2).unwrap().solutions, fermat_oracle(&c2, &prime, 2));
        }
    }

    #[test]
    fn fermat_base_rejects_non_solutions() {
        let fq = f3();
        let c = DrinfeldModule::carlitz(fq.clone());
        let err = wieferich_base_from_fermat(&c, &Poly::t(), &Poly::t(), &Poly::one(), &Poly::one());
        assert!(matches!(err, Err(Error::Precondition(_))));
        let err = wieferich_base_from_fermat(&c, &Poly::t(), &Poly::one(), &Poly::one(), &Poly::one());
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn congruence_checker_agrees_with_status() {
        use rand::SeedableRng;
        let fq = f3();
        let c = DrinfeldModule::carlitz(fq.clone());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for prime in monic_irreducibles_between(1, 2, &fq).unwrap() {
            let fit = c.fitting_generator(&prime).unwrap();
            let m = prime.mul(&prime, &fq);
            for _ in 0..10 {
                let w = Poly::random(m.degree().unwrap(), &fq, &mut rng);
                if prime.divides(&w, &fq).unwrap() {
                    continue;
                }
                let st = wieferich_status(&c, &prime, &w).unwrap();
                assert_eq!(thakur_congruence_holds(&c, &prime, &fit.r, &w).unwrap(), st.thakur);
            }
        }
    }
}
