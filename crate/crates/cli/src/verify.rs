//! The invariant suite run by `verify`: each check sweeps the configured
//! module over the configured degree range and reports pass/fail.

use dwief::drinfeld::hypothesis_h;
use dwief::factor::monic_irreducibles_between;
use dwief::harness::{application_triple, mason_stothers_check, uv_decompose};
use dwief::mersenne::{mersenne_scan, BaseClass};
use dwief::wieferich::{pi_chain, wieferich_status, Valuation};
use dwief::{radical, DrinfeldModule, Error, Poly, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: u64,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

struct Check {
    name: &'static str,
    cases: u64,
    failure: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, cases: 0, failure: None }
    }

    fn expect(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    fn done(self) -> CheckOutcome {
        CheckOutcome { name: self.name, cases: self.cases, failure: self.failure }
    }
}

pub fn run_suite(phi: &DrinfeldModule, a: &Poly, dmin: u32, dmax: u32, seed: u64) -> Result<Vec<CheckOutcome>> {
    let fq = phi.field();
    let primes = monic_irreducibles_between(dmin.max(1) as usize, dmax as usize, fq)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut fermat = Check::new("fermat_little_theorem");
    let mut fitting = Check::new("fitting_generator_shape");
    let mut carlitz = Check::new("carlitz_identity");
    for p in &primes {
        let fit = phi.fitting_generator(p)?;
        fitting.expect(fit.g.is_monic() && fit.g.degree() == p.degree() && fit.r.deg_or_neg() < p.deg_or_neg(), || {
            format!("P = {p}: g = {}, r = {}", fit.g, fit.r)
        });
        for _ in 0..5 {
            let b = Poly::random(2 * p.degree().unwrap(), fq, &mut rng);
            fermat.expect(phi.eval_mod(&fit.g, &b, p)?.is_zero(), || format!("P = {p}, a = {b}"));
        }
        if phi.is_carlitz() {
            carlitz.expect(fit.g == p.sub(&Poly::one(), fq), || format!("P = {p}: g = {}", fit.g));
        }
    }
    out.extend([fermat.done(), fitting.done()]);
    if phi.is_carlitz() {
        out.push(carlitz.done());
    }

    let torsion = phi.is_torsion(a);
    let mut divides = Check::new("annihilator_divides_g");
    let mut chain = Check::new("chain_law");
    let mut valuation = Check::new("valuation_equals_chain_break");
    let mut stable = Check::new("wieferich_iff_stable_annihilator");
    for p in &primes {
        let st = wieferich_status(phi, p, a)?;
        let h = hypothesis_h(fq, p);
        if h {
            divides.expect(st.annihilator.divides(&st.g, fq)?, || format!("P = {p}: {} vs g = {}", st.annihilator, st.g));
            let c = match pi_chain(phi, a, p, 4) {
                Ok(c) => c,
                Err(Error::ChainLaw { k, detail }) => {
                    chain.expect(false, || format!("P = {p}, k = {k}: {detail}"));
                    continue;
                }
                Err(e) => return Err(e),
            };
            chain.expect(c.law_holds, || format!("P = {p}"));
            if !st.flags.base_divisible && !torsion {
                let ok = match st.valuation {
                    // pi_a(P) = pi_a(P^2) exactly when v >= 2, which pins v = k
                    Valuation::Finite(v) => v == st.chain_break(),
                    _ => false,
                };
                valuation.expect(ok, || format!("P = {p}: v = {}, break = {}", st.valuation, st.chain_break()));
                stable.expect(st.is_wieferich == (c.generators[0] == c.generators[1]), || format!("P = {p}"));
            }
        }
    }
    out.extend([divides.done(), chain.done(), valuation.done(), stable.done()]);

    let mut mersenne = Check::new("mersenne_classification");
    let scan = mersenne_scan(phi, a, dmin, dmax.min(3))?;
    for r in &scan.records {
        let class_ok = r.is_prime != Some(true) || r.base_class != BaseClass::Other;
        let torsion_ok = !(r.torsion_base && r.h_holds) || r.is_prime != Some(true);
        let wief_ok = r.wieferich_of_m != Some(true);
        mersenne.expect(class_ok && torsion_ok && wief_ok, || format!("P = {}, a = {}", r.prime, r.base));
    }
    out.push(mersenne.done());

    let mut ms = Check::new("mason_stothers_application");
    let mut uv = Check::new("uv_decomposition");
    if !torsion && !a.is_zero() {
        for _ in 0..20 {
            let b = Poly::random_monic(rand::Rng::gen_range(&mut rng, 1..=3), fq, &mut rng);
            let (x, y, z) = application_triple(phi, a, &b)?;
            match mason_stothers_check(&x, &y, &z, fq) {
                Ok(r) => ms.expect(r.holds, || format!("b = {b}: slack {}", r.slack)),
                Err(Error::Precondition(_)) => {}
                Err(e) => return Err(e),
            }
            let d = uv_decompose(phi, a, &b)?;
            let lc = Poly::constant(d.f.lc());
            let recomposed = lc.mul(&d.u, fq).mul(&d.v, fq) == d.f;
            let coprime = d.u.gcd(&d.v, fq)?.is_one();
            let rad_ok = 2 * radical(&d.v, fq)?.deg_or_neg().max(0) <= d.v.deg_or_neg();
            uv.expect(recomposed && coprime && rad_ok, || format!("b = {b}"));
        }
    }
    out.extend([ms.done(), uv.done()]);
    Ok(out)
}
