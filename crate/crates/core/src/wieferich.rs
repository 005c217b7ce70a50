//! Annihilator ideals pi_a(phi, m), their chains along powers of a prime,
//! and the Wieferich classification of primes in a given base.

use rayon::prelude::*;

use crate::drinfeld::{hypothesis_h, DrinfeldModule};
use crate::error::{Error, Result};
use crate::factor::{is_irreducible, monic_irreducibles_between};
use crate::linalg::DependencyFinder;
use crate::poly::Poly;

/// Valuations at or above this value are reported as `AtLeast(VALUATION_CAP)`.
pub const VALUATION_CAP: u32 = 6;

/// Monic generator of {b : phi_b(a) = 0 mod m}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorResult {
    pub generator: Poly,
    pub modulus: Poly,
    pub base: Poly,
}

/// The monic generator of pi_a(phi, m), from the first linear dependency
/// among the residues phi_{T^i}(a) mod m. The modulus need not be prime.
pub fn annihilator_generator(phi: &DrinfeldModule, a: &Poly, m: &Poly) -> Result<AnnihilatorResult> {
    let fq = phi.field();
    let dim = m.degree().ok_or(Error::DivisionByZero)?;
    let mut dep = DependencyFinder::new(dim, fq);
    let mut generator = None;
    for v in phi.orbit_mod(a, m)? {
        if let Some(c) = dep.push(v.coeffs()) {
            generator = Some(Poly::from_elems(c));
            break;
        }
    }
    Ok(AnnihilatorResult {
        generator: generator.expect("the residues span a space of dimension deg m"),
        modulus: m.clone(),
        base: a.clone(),
    })
}

/// Generators of pi_a(phi, P^k) for k = 1..=kmax.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiChain {
    pub generators: Vec<Poly>,
    /// Largest k <= kmax whose generator equals the first one.
    pub chain_break: u32,
    /// Whether every step kept or multiplied by P, monotonically.
    pub law_holds: bool,
}

impl PiChain {
    pub fn is_constant(&self) -> bool {
        self.generators.windows(2).all(|w| w[0] == w[1])
    }
}

/// Computes the chain pi_a(phi, P^k), k = 1..=kmax, and checks that each
/// step either keeps the generator or multiplies it by P, and that once it
/// multiplies it always does. A violation is a hard error when (H)_P holds
/// and is only reported through `law_holds` otherwise.
pub fn pi_chain(phi: &DrinfeldModule, a: &Poly, prime: &Poly, kmax: u32) -> Result<PiChain> {
    let fq = phi.field();
    if kmax < 1 {
        return Err(Error::Precondition("pi_chain: kmax must be at least 1".into()));
    }
    check_prime(prime, phi, "pi_chain")?;
    let strict = hypothesis_h(fq, prime);
    let mut generators: Vec<Poly> = Vec::with_capacity(kmax as usize);
    let mut modulus = prime.clone();
    let mut law_holds = true;
    let mut multiplied = false;
    for k in 1..=kmax {
        let gen = annihilator_generator(phi, a, &modulus)?.generator;
        if let Some(prev) = generators.last() {
            let grown = prev.mul(prime, fq);
            let violation = if gen == grown {
                multiplied = true;
                None
            } else if gen != *prev {
                Some(format!("generator {gen} is neither {prev} nor {grown}"))
            } else if multiplied {
                Some(format!("generator stayed {gen} after the chain had started growing"))
            } else {
                None
            };
            if let Some(detail) = violation {
                if strict {
                    return Err(Error::ChainLaw { k: k as usize, detail });
                }
                law_holds = false;
            }
        }
        generators.push(gen);
        modulus = modulus.mul(prime, fq);
    }
    let chain_break = generators.iter().take_while(|g| **g == generators[0]).count() as u32;
    Ok(PiChain { generators, chain_break, law_holds })
}

fn check_prime(prime: &Poly, phi: &DrinfeldModule, op: &'static str) -> Result<()> {
    if prime.degree().unwrap_or(0) == 0 {
        return Err(Error::NotIrreducible(op));
    }
    if !prime.is_monic() {
        return Err(Error::NotMonic(op));
    }
    if !is_irreducible(prime, phi.field())? {
        return Err(Error::NotIrreducible(op));
    }
    Ok(())
}

/// v_P(phi_g(a)), as far as the expanding-modulus evaluation resolves it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    /// v >= the given bound; the exact value was not resolved.
    AtLeast(u32),
    /// phi_g(a) = 0 exactly.
    Infinite,
}

impl Valuation {
    /// True when v >= n is certain.
    pub fn at_least(self, n: u32) -> bool {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v >= n,
            Valuation::Infinite => true,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Valuation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid valuation {s:?}"));
        match s {
            "inf" => Ok(Valuation::Infinite),
            _ => match s.strip_prefix(">=") {
                Some(rest) => rest.parse().map(Valuation::AtLeast).map_err(|_| bad()),
                None => s.parse().map(Valuation::Finite).map_err(|_| bad()),
            },
        }
    }
}

/// Degenerate situations that a scan records instead of rejecting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct StatusFlags {
    /// q = 2 and deg P = 1.
    pub h_fails: bool,
    /// P divides a.
    pub base_divisible: bool,
    /// a is a torsion point.
    pub torsion_base: bool,
    /// phi_g(a) = 0 exactly.
    pub annihilated: bool,
    /// The valuation reached the cap.
    pub valuation_capped: bool,
    /// The annihilator chain broke the keep-or-multiply law (only possible
    /// when (H)_P fails).
    pub chain_law_violated: bool,
}

impl StatusFlags {
    const NAMES: [&'static str; 6] =
        ["h_fails", "base_divisible", "torsion_base", "annihilated", "valuation_capped", "chain_law_violated"];

    fn bits(&self) -> [bool; 6] {
        [
            self.h_fails,
            self.base_divisible,
            self.torsion_base,
            self.annihilated,
            self.valuation_capped,
            self.chain_law_violated,
        ]
    }

    pub fn is_degenerate(&self) -> bool {
        self.h_fails || self.base_divisible || self.torsion_base || self.annihilated
    }

    /// Set flag names joined by `|`, in a fixed order; empty when none.
    pub fn to_text(&self) -> String {
        let names: Vec<&str> =
            Self::NAMES.iter().zip(self.bits()).filter(|(_, b)| *b).map(|(n, _)| *n).collect();
        names.join("|")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut f = StatusFlags::default();
        for name in text.split('|').filter(|s| !s.is_empty()) {
            match name {
                "h_fails" => f.h_fails = true,
                "base_divisible" => f.base_divisible = true,
                "torsion_base" => f.torsion_base = true,
                "annihilated" => f.annihilated = true,
                "valuation_capped" => f.valuation_capped = true,
                "chain_law_violated" => f.chain_law_violated = true,
                _ => return Err(Error::Parse(format!("unknown flag {name:?}"))),
            }
        }
        Ok(f)
    }
}

/// Wieferich classification of a prime P in base a.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WieferichStatus {
    pub prime: Poly,
    pub base: Poly,
    pub g: Poly,
    pub r: Poly,
    /// Monic generator of pi_a(phi, P).
    pub annihilator: Poly,
    pub valuation: Valuation,
    /// v >= 2: phi_g(a) = 0 mod P^2.
    pub is_wieferich: bool,
    /// v >= 3.
    pub is_super: bool,
    /// phi_P(a) = phi_r(a)^(q^(r deg P)) mod P^2.
    pub thakur: bool,
    pub chain: PiChain,
    pub flags: StatusFlags,
}

impl WieferichStatus {
    pub fn chain_break(&self) -> u32 {
        self.chain.chain_break
    }
}

/// v_P(phi_g(a)) by evaluating modulo P^2 and then P^cap. `torsion` says
/// whether a is a torsion point (exact zero is only possible then).
fn fitting_valuation(phi: &DrinfeldModule, g: &Poly, a: &Poly, prime: &Poly, torsion: bool) -> Result<Valuation> {
    let fq = phi.field();
    for e in [2, VALUATION_CAP] {
        let m = prime.pow(e as u64, fq);
        let y = phi.eval_mod(g, a, &m)?;
        if !y.is_zero() {
            return Ok(Valuation::Finite(y.multiplicity(prime, fq)?));
        }
    }
    if torsion {
        if let Some(c) = phi.torsion_annihilator(a) {
            if c.divides(g, fq)? {
                return Ok(Valuation::Infinite);
            }
        }
    }
    Ok(Valuation::AtLeast(VALUATION_CAP))
}

/// phi_P(a) = phi_r(a)^(q^(r deg P)) mod P^2.
pub fn thakur_congruence_holds(phi: &DrinfeldModule, prime: &Poly, r: &Poly, a: &Poly) -> Result<bool> {
    let fq = phi.field();
    let m = prime.mul(prime, fq);
    let lhs = phi.eval_mod(prime, a, &m)?;
    let k = phi.rank() * prime.degree().unwrap_or(0);
    let rhs = phi.eval_mod(r, a, &m)?.frobenius_mod(k as u32, &m, fq)?;
    Ok(lhs == rhs)
}

/// Full classification of P in base a.
pub fn wieferich_status(phi: &DrinfeldModule, prime: &Poly, a: &Poly) -> Result<WieferichStatus> {
    status_with_torsion(phi, prime, a, phi.is_torsion(a))
}

fn status_with_torsion(phi: &DrinfeldModule, prime: &Poly, a: &Poly, torsion: bool) -> Result<WieferichStatus> {
    let fq = phi.field();
    let fit = phi.fitting_generator(prime)?;
    let valuation = fitting_valuation(phi, &fit.g, a, prime, torsion)?;
    let thakur = thakur_congruence_holds(phi, prime, &fit.r, a)?;
    // In the regular case the chain breaks right after k = v, so walking to
    // v + 1 shows the break. Without (H)_P (degree-1 primes only) walk the
    // whole chain so law violations surface.
    let h_holds = hypothesis_h(fq, prime);
    let kmax = match valuation {
        Valuation::Finite(v) if h_holds => (v + 1).min(VALUATION_CAP),
        _ => VALUATION_CAP,
    };
    let chain = pi_chain(phi, a, prime, kmax)?;
    let flags = StatusFlags {
        h_fails: !h_holds,
        base_divisible: prime.divides(a, fq)?,
        torsion_base: torsion,
        annihilated: valuation == Valuation::Infinite,
        valuation_capped: matches!(valuation, Valuation::AtLeast(_)),
        chain_law_violated: !chain.law_holds,
    };
    Ok(WieferichStatus {
        prime: prime.clone(),
        base: a.clone(),
        annihilator: chain.generators[0].clone(),
        g: fit.g,
        r: fit.r,
        valuation,
        is_wieferich: valuation.at_least(2),
        is_super: valuation.at_least(3),
        thakur,
        chain,
        flags,
    })
}

/// phi_g(a) = 0 mod P^2, without the rest of the classification.
pub fn is_wieferich_fast(phi: &DrinfeldModule, prime: &Poly, a: &Poly) -> Result<bool> {
    let fq = phi.field();
    let g = phi.fitting_generator(prime)?.g;
    Ok(phi.eval_mod(&g, a, &prime.mul(prime, fq))?.is_zero())
}

/// Compares the Wieferich classification of P in bases a and phi_d(a), for
/// non-torsion a, (H)_P, and d coprime to the annihilator of a at P. Also
/// confirms that both bases share the same annihilator at P.
pub fn base_transfer_check(phi: &DrinfeldModule, prime: &Poly, a: &Poly, d: &Poly) -> Result<bool> {
    let fq = phi.field();
    check_prime(prime, phi, "base_transfer_check")?;
    if !hypothesis_h(fq, prime) {
        return Err(Error::Precondition("base transfer: (H)_P fails".into()));
    }
    if phi.is_torsion(a) {
        return Err(Error::Precondition("base transfer: base is a torsion point".into()));
    }
    let ann_a = annihilator_generator(phi, a, prime)?.generator;
    if d.is_zero() || !d.gcd(&ann_a, fq)?.is_one() {
        return Err(Error::Precondition(format!(
            "base transfer: gcd(d, annihilator) != 1 for d = {d}, annihilator = {ann_a}"
        )));
    }
    // both classifications only see the base modulo P^2
    let m = prime.mul(prime, fq);
    let b = phi.eval_mod(d, a, &m)?;
    let ann_b = annihilator_generator(phi, &b, prime)?.generator;
    if ann_a != ann_b {
        return Err(Error::Invariant(format!(
            "annihilators differ under base transfer: {ann_a} vs {ann_b} (P = {prime}, d = {d})"
        )));
    }
    Ok(is_wieferich_fast(phi, prime, a)? == is_wieferich_fast(phi, prime, &b)?)
}

/// Counts of primes by valuation of phi_g(a).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ValuationHistogram {
    pub v1: u64,
    pub v2: u64,
    pub v3: u64,
    pub v4_plus: u64,
    pub infinite: u64,
}

impl ValuationHistogram {
    pub fn add(&mut self, v: Valuation) {
        match v {
            Valuation::Infinite => self.infinite += 1,
            Valuation::Finite(0 | 1) => self.v1 += 1,
            Valuation::Finite(2) => self.v2 += 1,
            Valuation::Finite(3) => self.v3 += 1,
            Valuation::Finite(_) | Valuation::AtLeast(_) => self.v4_plus += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.v1 + self.v2 + self.v3 + self.v4_plus + self.infinite
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WieferichSearch {
    pub statuses: Vec<WieferichStatus>,
    pub histogram: ValuationHistogram,
}

pub(crate) fn check_range(dmin: u32, dmax: u32) -> Result<()> {
    if dmin < 1 || dmin > dmax {
        return Err(Error::EmptyRange { min: dmin as i64, max: dmax as i64 });
    }
    Ok(())
}

/// Classifies every monic irreducible P with dmin <= deg P <= dmax. Work is
/// spread over the current rayon pool; output is in canonical order of P.
pub fn search_wieferich(phi: &DrinfeldModule, a: &Poly, dmin: u32, dmax: u32) -> Result<WieferichSearch> {
    check_range(dmin, dmax)?;
    let primes = monic_irreducibles_between(dmin as usize, dmax as usize, phi.field())?;
    let torsion = phi.is_torsion(a);
    let statuses = primes
        .par_iter()
        .map(|p| status_with_torsion(phi, p, a, torsion))
        .collect::<Result<Vec<_>>>()?;
    let mut histogram = ValuationHistogram::default();
    statuses.iter().for_each(|s| histogram.add(s.valuation));
    Ok(WieferichSearch { statuses, histogram })
}
