//! Mersenne numbers phi_P(a): primality classification, the annihilator
//! primality criterion, Koblitz-style counts of primes with prime Fitting
//! generator, and explicit composite Mersenne numbers.

use rayon::prelude::*;

use crate::drinfeld::{hypothesis_h, DrinfeldModule};
use crate::error::{Error, Result};
use crate::factor::{is_irreducible, monic_irreducibles_between};
use crate::poly::Poly;
use crate::wieferich::{annihilator_generator, check_range, is_wieferich_fast};

/// Irreducibility of a Mersenne number is only decided up to this degree;
/// beyond it the record's primality is unknown.
pub const PRIMALITY_DEGREE_GUARD: u64 = 2048;

/// Largest degree of a prime Mersenne number M for which the Wieferich
/// status of M in base a is computed (it needs arithmetic modulo M^2).
pub const WIEFERICH_OF_M_DEGREE_GUARD: u64 = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseClass {
    /// a is a nonzero constant.
    UnitBase,
    /// a is irreducible and a torsion point.
    TorsionPrimeBase,
    Other,
}

impl BaseClass {
    pub fn as_str(self) -> &'static str {
        match self {
            BaseClass::UnitBase => "unit_base",
            BaseClass::TorsionPrimeBase => "torsion_prime_base",
            BaseClass::Other => "other",
        }
    }

    pub fn classify(phi: &DrinfeldModule, a: &Poly, torsion: bool) -> Result<Self> {
        Ok(match a.degree() {
            Some(0) => BaseClass::UnitBase,
            Some(_) if torsion && is_irreducible(a, phi.field())? => BaseClass::TorsionPrimeBase,
            _ => BaseClass::Other,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MersenneRecord {
    pub prime: Poly,
    pub base: Poly,
    /// phi_P(a), when within the degree guard.
    pub value: Option<Poly>,
    /// Exact degree when `value` is present, otherwise the predicted bound.
    pub degree: u64,
    /// Whether M is irreducible; `None` when too large to decide.
    pub is_prime: Option<bool>,
    pub base_class: BaseClass,
    pub torsion_base: bool,
    pub h_holds: bool,
    /// For prime M and non-torsion a: whether monic(M) is phi-Wieferich in
    /// base a. `None` when not applicable or M is too large.
    pub wieferich_of_m: Option<bool>,
}

/// phi_P(a) with its primality and base classification.
pub fn mersenne_number(phi: &DrinfeldModule, prime: &Poly, a: &Poly) -> Result<MersenneRecord> {
    let torsion = phi.is_torsion(a);
    let class = BaseClass::classify(phi, a, torsion)?;
    mersenne_record(phi, prime, a, torsion, class)
}

fn mersenne_record(
    phi: &DrinfeldModule,
    prime: &Poly,
    a: &Poly,
    torsion: bool,
    base_class: BaseClass,
) -> Result<MersenneRecord> {
    let fq = phi.field();
    if prime.degree().unwrap_or(0) == 0 || !is_irreducible(prime, fq)? {
        return Err(Error::NotIrreducible("mersenne_number"));
    }
    let mut rec = MersenneRecord {
        prime: prime.clone(),
        base: a.clone(),
        value: None,
        degree: phi.predicted_degree(prime, a),
        is_prime: None,
        base_class,
        torsion_base: torsion,
        h_holds: hypothesis_h(fq, prime),
        wieferich_of_m: None,
    };
    let m = match phi.eval(prime, a) {
        Ok(m) => m,
        Err(Error::DegreeGuard { .. }) => return Ok(rec),
        Err(e) => return Err(e),
    };
    if !a.is_zero() && !a.divides(&m, fq)? {
        return Err(Error::Invariant(format!("base {a} does not divide phi_P(a) for P = {prime}")));
    }
    rec.degree = m.degree().unwrap_or(0) as u64;
    rec.is_prime = match m.degree() {
        None | Some(0) => Some(false),
        Some(d) if d as u64 > PRIMALITY_DEGREE_GUARD => None,
        Some(_) => Some(is_irreducible(&m, fq)?),
    };
    if rec.is_prime == Some(true) && !torsion && rec.degree <= WIEFERICH_OF_M_DEGREE_GUARD {
        rec.wieferich_of_m = Some(is_wieferich_fast(phi, &m.monic(fq), a)?);
    }
    rec.value = Some(m);
    Ok(rec)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MersenneSummary {
    pub prime: u64,
    pub composite: u64,
    pub unknown: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MersenneScan {
    pub records: Vec<MersenneRecord>,
    pub summary: MersenneSummary,
}

/// One record per monic irreducible P with dmin <= deg P <= dmax, in
/// canonical order. An empty range gives an empty scan.
pub fn mersenne_scan(phi: &DrinfeldModule, a: &Poly, dmin: u32, dmax: u32) -> Result<MersenneScan> {
    let primes = monic_irreducibles_between(dmin.max(1) as usize, dmax as usize, phi.field())?;
    let torsion = phi.is_torsion(a);
    let class = BaseClass::classify(phi, a, torsion)?;
    let records = primes
        .par_iter()
        .map(|p| mersenne_record(phi, p, a, torsion, class))
        .collect::<Result<Vec<_>>>()?;
    let mut summary = MersenneSummary::default();
    for r in &records {
        match r.is_prime {
            Some(true) => summary.prime += 1,
            Some(false) => summary.composite += 1,
            None => summary.unknown += 1,
        }
    }
    Ok(MersenneScan { records, summary })
}

/// Outcome of testing "the annihilator of a at Q is prime iff Q divides
/// some phi_P(a) with P prime".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorPrimality {
    pub annihilator: Poly,
    pub is_prime: bool,
    /// The annihilator itself when it is prime.
    pub witness: Option<Poly>,
    /// Monic irreducible P, deg P <= scan_bound, with Q | phi_P(a).
    pub scan_hits: Vec<Poly>,
    pub scan_bound: u32,
    /// The witness divides as claimed and the scan found no other P.
    pub consistent: bool,
}

pub fn annihilator_primality_check(
    phi: &DrinfeldModule,
    q_prime: &Poly,
    a: &Poly,
    dmax: u32,
) -> Result<AnnihilatorPrimality> {
    let fq = phi.field();
    if q_prime.degree().unwrap_or(0) == 0 || !is_irreducible(q_prime, fq)? {
        return Err(Error::NotIrreducible("annihilator_primality_check"));
    }
    if q_prime.divides(a, fq)? {
        return Err(Error::Precondition(format!("Q = {q_prime} divides the base {a}")));
    }
    let annihilator = annihilator_generator(phi, a, q_prime)?.generator;
    let is_prime = is_irreducible(&annihilator, fq)?;
    let witness_divides = !is_prime || phi.eval_mod(&annihilator, a, q_prime)?.is_zero();
    let mut scan_hits = Vec::new();
    for p in monic_irreducibles_between(1, dmax as usize, fq)? {
        if phi.eval_mod(&p, a, q_prime)?.is_zero() {
            scan_hits.push(p);
        }
    }
    let consistent = witness_divides
        && if is_prime {
            scan_hits.iter().all(|p| *p == annihilator)
        } else {
            scan_hits.is_empty()
        };
    Ok(AnnihilatorPrimality {
        witness: is_prime.then(|| annihilator.clone()),
        annihilator,
        is_prime,
        scan_hits,
        scan_bound: dmax,
        consistent,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KoblitzRow {
    pub degree: u32,
    /// Monic irreducibles of this degree.
    pub total: u64,
    /// Those whose Fitting generator is irreducible.
    pub g_prime: u64,
}

/// Per degree, the number of primes P whose Fitting generator g is prime.
/// For the Carlitz module this also confirms g = P - 1 on every P.
pub fn koblitz_stats(phi: &DrinfeldModule, dmin: u32, dmax: u32) -> Result<Vec<KoblitzRow>> {
    check_range(dmin, dmax)?;
    let fq = phi.field();
    (dmin..=dmax)
        .map(|d| {
            let primes = monic_irreducibles_between(d as usize, d as usize, fq)?;
            let flags = primes
                .par_iter()
                .map(|p| {
                    let g = phi.fitting_generator(p)?.g;
                    if phi.is_carlitz() && g != p.sub(&Poly::one(), fq) {
                        return Err(Error::Invariant(format!("Carlitz Fitting generator of {p} is {g}")));
                    }
                    is_irreducible(&g, fq)
                })
                .collect::<Result<Vec<bool>>>()?;
            Ok(KoblitzRow {
                degree: d,
                total: primes.len() as u64,
                g_prime: flags.iter().filter(|&&b| b).count() as u64,
            })
        })
        .collect()
}

/// A composite Mersenne number phi_Q(1) with an explicit proper factor P.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositeWitness {
    pub prime: Poly,
    /// Q = g_P, itself prime.
    pub q: Poly,
    pub m_degree: u64,
    /// v_P(phi_Q(1)) >= 1.
    pub p_valuation: u32,
}

/// For each prime P in range with deg P > c_phi and prime Fitting generator
/// Q: P divides phi_Q(1) and deg phi_Q(1) > deg Q, so phi_Q(1) is a
/// composite Mersenne number.
pub fn composite_mersenne_witnesses(phi: &DrinfeldModule, dmin: u32, dmax: u32) -> Result<Vec<CompositeWitness>> {
    let fq = phi.field();
    let threshold = phi.degree_threshold()?;
    let lo = dmin.max(1).max(threshold as u32 + 1);
    let primes = monic_irreducibles_between(lo as usize, dmax as usize, fq)?;
    let one = Poly::one();
    let found = primes
        .par_iter()
        .map(|p| -> Result<Option<CompositeWitness>> {
            let q = phi.fitting_generator(p)?.g;
            if !is_irreducible(&q, fq)? {
                return Ok(None);
            }
            if !phi.eval_mod(&q, &one, p)?.is_zero() {
                return Err(Error::Invariant(format!("{p} does not divide phi_Q(1) for Q = {q}")));
            }
            let m = phi.eval(&q, &one)?;
            let m_degree = m.degree().unwrap_or(0) as u64;
            if m_degree <= q.degree().unwrap() as u64 {
                return Err(Error::Invariant(format!("deg phi_Q(1) = {m_degree} <= deg Q for Q = {q}")));
            }
            Ok(Some(CompositeWitness { prime: p.clone(), q, m_degree, p_valuation: m.multiplicity(p, fq)? }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().collect())
}
