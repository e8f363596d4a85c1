//! Rational approximation of unit multiples of an algebraic number:
//! continued fractions, Liouville floors, the quality functional and the
//! search, Hurwitz and pseudo-Pisot harnesses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::{certify, CertifiedReal, Dyadic, PrecisionPolicy, Relation, Verdict};
use crate::numfield::FieldElement;

/// Partial quotients and convergents, each certified against the source.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConvergentList {
    pub partial_quotients: Vec<BigInt>,
    pub convergents: Vec<BigRational>,
    /// The expansion ended: the source is the rational last convergent.
    pub terminated: bool,
}

impl ConvergentList {
    fn from_quotients(quotients: Vec<BigInt>, terminated: bool) -> Self {
        let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
        let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
        let mut convergents = Vec::with_capacity(quotients.len());
        for a in &quotients {
            let p = a * &p0 + &p1;
            let q = a * &q0 + &q1;
            p1 = std::mem::replace(&mut p0, p.clone());
            q1 = std::mem::replace(&mut q0, q.clone());
            convergents.push(BigRational::new(p, q));
        }
        ConvergentList {
            partial_quotients: quotients,
            convergents,
            terminated,
        }
    }

    /// Keep the convergents with denominator at most `q_max`.
    fn truncate_denominator(&mut self, q_max: &BigInt) {
        let keep = self
            .convergents
            .iter()
            .position(|c| c.denom() > q_max)
            .unwrap_or(self.convergents.len());
        if keep < self.convergents.len() {
            self.terminated = false;
        }
        self.convergents.truncate(keep);
        self.partial_quotients.truncate(keep);
    }
}

/// Floor-algorithm quotients of an exact rational, at most `limit` of them;
/// the flag says whether the expansion ended.
fn rational_quotients(x: &BigRational, limit: usize) -> (Vec<BigInt>, bool) {
    let mut out = Vec::new();
    let mut t = x.clone();
    while out.len() < limit {
        let a = t.floor().to_integer();
        let frac = &t - BigRational::from_integer(a.clone());
        out.push(a);
        if frac.is_zero() {
            return (out, true);
        }
        t = frac.recip();
    }
    (out, false)
}

/// Longest prefix shared by the expansions of both endpoints. Each prefix
/// cylinder is an interval, so the prefix is valid for every point between.
fn common_prefix(lo: &BigRational, hi: &BigRational, limit: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    let (mut a, mut b) = (lo.clone(), hi.clone());
    while out.len() < limit {
        let fa = a.floor().to_integer();
        let fb = b.floor().to_integer();
        if fa != fb {
            break;
        }
        let ra = &a - BigRational::from_integer(fa.clone());
        let rb = &b - BigRational::from_integer(fb);
        out.push(fa);
        if ra.is_zero() || rb.is_zero() {
            break;
        }
        a = ra.recip();
        b = rb.recip();
    }
    out
}

fn expand(
    producer: &dyn Fn(u32) -> Result<CertifiedReal>,
    limit: usize,
    q_max: Option<&BigInt>,
    policy: &PrecisionPolicy,
) -> Result<ConvergentList> {
    let enough = |list: &ConvergentList| match q_max {
        Some(qm) => list.convergents.last().is_some_and(|c| c.denom() > qm),
        None => list.convergents.len() >= limit,
    };
    for bits in policy.ladder() {
        let x = producer(bits)?;
        if x.is_exact() {
            let (qs, ended) = rational_quotients(&x.mid().to_rational(), limit);
            let mut list = ConvergentList::from_quotients(qs, ended);
            if let Some(qm) = q_max {
                list.truncate_denominator(qm);
            }
            return Ok(list);
        }
        let qs = common_prefix(&x.lo().to_rational(), &x.hi().to_rational(), limit);
        let mut list = ConvergentList::from_quotients(qs, false);
        if enough(&list) {
            if let Some(qm) = q_max {
                list.truncate_denominator(qm);
            }
            return Ok(list);
        }
    }
    Err(Error::exhausted(policy.max_bits, "continued fraction expansion"))
}

/// First `k` certified partial quotients and convergents of the real number
/// enclosed by `producer(bits)`.
pub fn continued_fraction(
    producer: &dyn Fn(u32) -> Result<CertifiedReal>,
    k: usize,
    policy: &PrecisionPolicy,
) -> Result<ConvergentList> {
    if k == 0 {
        return Ok(ConvergentList::default());
    }
    expand(producer, k, None, policy)
}

/// All convergents with denominator at most `q_max`.
pub fn convergents_up_to(
    producer: &dyn Fn(u32) -> Result<CertifiedReal>,
    q_max: &BigInt,
    policy: &PrecisionPolicy,
) -> Result<ConvergentList> {
    if !q_max.is_positive() {
        return Ok(ConvergentList::default());
    }
    // Denominators at least double every two steps.
    let limit = 2 * q_max.bits() as usize + 4;
    expand(producer, limit, Some(q_max), policy)
}

/// `||x|| = min_n |x - n|`, enclosed in `[0, 1/2]`.
pub fn nearest_int_distance(x: &CertifiedReal) -> Result<CertifiedReal> {
    if x.width() >= Dyadic::pow2(-1) {
        return Err(Error::exhausted(x.prec(), "nearest integer distance needs width < 1/2"));
    }
    let p = x.prec();
    let n = x.mid().floor_int();
    let below = (x - &CertifiedReal::from_int(n.clone(), p)).abs();
    let above = (x - &CertifiedReal::from_int(n + 1, p)).abs();
    let d = below.min(&above);
    let range = CertifiedReal::from_interval(&Dyadic::zero(), &Dyadic::pow2(-1), p);
    Ok(d.intersect(&range).unwrap_or(range))
}

/// `1 / (a_0 (2 house(alpha) + 1)^(d - 1))`.
pub fn liouville_kappa1(alpha: &FieldElement, prec: u32) -> Result<CertifiedReal> {
    let d = alpha.field().degree();
    if alpha.degree() != d {
        return Err(Error::DegenerateElement {
            degree: alpha.degree(),
            field_degree: d,
        });
    }
    let a0 = CertifiedReal::from_int(alpha.minpoly_leading(), prec);
    let base = alpha.house(prec + 16)?.mul_pow2(1) + CertifiedReal::one(prec + 16);
    (a0 * base.pow_u(d as u64 - 1)).recip().map(|k| k.with_prec(prec))
}

/// One rational approximation and the bound it is tested against.
#[derive(Clone, Debug)]
pub struct ApproxRecord {
    pub p: BigInt,
    pub q: BigInt,
    pub unit: String,
    pub lhs: CertifiedReal,
    pub rhs: CertifiedReal,
    /// `q^d house(e)^(d-1) |e alpha - p/q|`, when meaningful.
    pub quality: Option<CertifiedReal>,
    pub relation: Relation,
    pub verdict: Verdict,
}

impl ApproxRecord {
    pub fn fraction(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

fn reduced(p: &BigInt, q: &BigInt) -> Result<(BigInt, BigInt)> {
    if !q.is_positive() {
        return Err(Error::invalid("q must be positive"));
    }
    let g = p.gcd(q);
    Ok((p / &g, q / &g))
}

/// Precision for quantities of size about `1/q^2`.
fn extra_bits(q: &BigInt) -> u32 {
    2 * q.bits() as u32 + 16
}

fn run_record(
    policy: &PrecisionPolicy,
    extra: u32,
    mut build: impl FnMut(u32) -> Result<ApproxRecord>,
) -> Result<ApproxRecord> {
    let mut last = None;
    for bits in policy.ladder() {
        match build(bits + extra) {
            Ok(r) if r.verdict.is_decided() => return Ok(r),
            Ok(r) => last = Some(r),
            Err(Error::Domain(_)) | Err(Error::PrecisionExhausted { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    last.ok_or_else(|| Error::exhausted(policy.max_bits, "approximation record"))
}

/// `|e alpha - p/q|` at the identity embedding.
fn distance_to(x: &FieldElement, p: &BigInt, q: &BigInt, bits: u32) -> Result<CertifiedReal> {
    let v = x.identity_value(bits)?;
    let pq = CertifiedReal::from_ratio(p, q, bits);
    Ok(v.sub(&crate::exactnum::CertifiedComplex::from_real(pq)).abs())
}

fn check_unit(alpha: &FieldElement, eps: &FieldElement) -> Result<()> {
    if alpha.field() != eps.field() {
        return Err(Error::FieldMismatch);
    }
    if !eps.is_unit() {
        return Err(Error::NotAUnit);
    }
    Ok(())
}

/// `|e alpha - p/q| >= kappa1 / (q^d house(e)^(d-1))`.
pub fn liouville_check(
    alpha: &FieldElement,
    eps: &FieldElement,
    p: &BigInt,
    q: &BigInt,
) -> Result<ApproxRecord> {
    check_unit(alpha, eps)?;
    let (p, q) = reduced(p, q)?;
    let x = eps.mul(alpha)?;
    if x.as_rational() == Some(BigRational::new(p.clone(), q.clone())) {
        return Err(Error::ExactEquality);
    }
    let d = alpha.field().degree() as u64;
    let policy = alpha.field().policy();
    run_record(&policy, extra_bits(&q), |bits| {
        let lhs = distance_to(&x, &p, &q, bits)?;
        let k1 = liouville_kappa1(alpha, bits)?;
        let house = eps.house(bits)?;
        let den = CertifiedReal::from_int(q.pow(d as u32), bits) * house.pow_u(d - 1);
        let rhs = k1.div_ball(&den)?;
        let quality = &lhs * &den;
        Ok(ApproxRecord {
            verdict: certify(&lhs, Relation::Ge, &rhs),
            p: p.clone(),
            q: q.clone(),
            unit: String::new(),
            lhs,
            rhs,
            quality: Some(quality),
            relation: Relation::Ge,
        })
    })
}

/// `|q gamma - p| >= 1 / ((|p| + q)^(delta - 1) e^(delta h(gamma)))`.
pub fn general_liouville(gamma: &FieldElement, p: &BigInt, q: &BigInt) -> Result<ApproxRecord> {
    let (p, q) = reduced(p, q)?;
    if gamma.as_rational() == Some(BigRational::new(p.clone(), q.clone())) {
        return Err(Error::ExactEquality);
    }
    let delta = gamma.degree() as u64;
    let policy = gamma.field().policy();
    let qg = gamma.scale(&BigRational::from_integer(q.clone()));
    run_record(&policy, extra_bits(&q), |bits| {
        let lhs = distance_to(&qg, &p, &BigInt::one(), bits)?;
        let base = CertifiedReal::from_int(p.abs() + &q, bits).pow_u(delta - 1);
        let eh = gamma.height(bits)?.mul_int(&BigInt::from(delta)).exp()?;
        let rhs = (base * eh).recip()?;
        Ok(ApproxRecord {
            verdict: certify(&lhs, Relation::Ge, &rhs),
            p: p.clone(),
            q: q.clone(),
            unit: String::new(),
            lhs,
            rhs,
            quality: None,
            relation: Relation::Ge,
        })
    })
}

/// Enclosure of `q^d house(e)^(d-1) |e alpha - p/q|`.
pub fn quality(alpha: &FieldElement, eps: &FieldElement, p: &BigInt, q: &BigInt) -> Result<CertifiedReal> {
    check_unit(alpha, eps)?;
    let (p, q) = reduced(p, q)?;
    let x = eps.mul(alpha)?;
    if x.as_rational() == Some(BigRational::new(p.clone(), q.clone())) {
        return Err(Error::ExactEquality);
    }
    let d = alpha.field().degree() as u64;
    let policy = alpha.field().policy();
    policy.run("quality", |bits| {
        let bits = bits + extra_bits(&q);
        let lhs = distance_to(&x, &p, &q, bits)?;
        if lhs.contains_zero() {
            return Ok(None);
        }
        let den = CertifiedReal::from_int(q.pow(d as u32), bits) * eps.house(bits)?.pow_u(d - 1);
        Ok(Some(lhs * den))
    })
}

/// `liouville_check` on every convergent of `e alpha` with `q <= q_max`,
/// for each unit. Units run in parallel; output is ordered by unit, then `q`.
pub fn liouville_sweep(alpha: &FieldElement, units: &[UnitEntry], q_max: &BigInt) -> Result<Vec<ApproxRecord>> {
    for u in units {
        check_unit(alpha, &u.element)?;
    }
    let policy = alpha.field().policy();
    let per_unit: Vec<Result<Vec<ApproxRecord>>> = units
        .par_iter()
        .map(|u| {
            let x = u.element.mul(alpha)?;
            let list = convergents_up_to(&|b| x.identity_real(b), q_max, &policy)?;
            let mut out = Vec::with_capacity(list.convergents.len());
            for c in &list.convergents {
                if x.as_rational().as_ref() == Some(c) {
                    continue;
                }
                let mut rec = liouville_check(alpha, &u.element, c.numer(), c.denom())?;
                rec.unit = u.label.clone();
                out.push(rec);
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_unit {
        all.append(&mut r?);
    }
    Ok(all)
}

/// A unit fed to the search, with a label for the report.
#[derive(Clone, Debug)]
pub struct UnitEntry {
    pub label: String,
    pub element: FieldElement,
}

/// Summary note for a unit whose continued fraction ran out of precision.
pub const NOTE_EXHAUSTED: &str = "continued fraction undecided at the precision ceiling";

#[derive(Clone, Debug)]
pub struct UnitSummary {
    pub label: String,
    /// Smallest quality seen among the candidates of this unit.
    pub minimum: Option<ApproxRecord>,
    pub candidates: usize,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    /// Certified hits and undecided near misses, by unit then `q`.
    pub records: Vec<ApproxRecord>,
    pub summaries: Vec<UnitSummary>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    /// Scan every `q <= q_max` instead of the convergents only.
    pub exhaustive: bool,
}

fn candidates(list: &ConvergentList, x_hint: &CertifiedReal, q_max: &BigInt, opts: SearchOptions) -> Vec<(BigInt, BigInt)> {
    let mut out: Vec<(BigInt, BigInt)> = Vec::new();
    if opts.exhaustive {
        let qm = q_max.to_u64().unwrap_or(u64::MAX).min(1 << 22);
        let xr = x_hint.mid().to_rational();
        for q in 1..=qm {
            let qb = BigInt::from(q);
            let base = (&xr * BigRational::from_integer(qb.clone())).floor().to_integer();
            for p in [base.clone(), base + 1] {
                out.push((p, qb.clone()));
            }
        }
    } else {
        for c in &list.convergents {
            for dp in [-1i32, 0, 1] {
                out.push((c.numer() + dp, c.denom().clone()));
            }
        }
    }
    let mut red: Vec<(BigInt, BigInt)> = out
        .into_iter()
        .map(|(p, q)| {
            let g = p.gcd(&q);
            (p / &g, q / &g)
        })
        .collect();
    red.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    red.dedup();
    red
}

fn search_unit(
    alpha: &FieldElement,
    entry: &UnitEntry,
    q_max: &BigInt,
    kappa: &BigRational,
    opts: SearchOptions,
) -> Result<(Vec<ApproxRecord>, UnitSummary)> {
    let mut summary = UnitSummary {
        label: entry.label.clone(),
        minimum: None,
        candidates: 0,
        note: None,
    };
    let x = entry.element.mul(alpha)?;
    if x.as_rational().is_some() {
        summary.note = Some("unit times alpha is rational".into());
        return Ok((Vec::new(), summary));
    }
    let policy = alpha.field().policy();
    let d = alpha.field().degree() as u32;
    let producer = |bits: u32| x.identity_real(bits);
    let list = match convergents_up_to(&producer, q_max, &policy) {
        Ok(l) => l,
        Err(Error::PrecisionExhausted { .. }) => {
            summary.note = Some(NOTE_EXHAUSTED.into());
            return Ok((Vec::new(), summary));
        }
        Err(e) => return Err(e),
    };
    let hint = x.identity_real(64)?;
    let mut pending = candidates(&list, &hint, q_max, opts);
    summary.candidates = pending.len();
    let extra = extra_bits(q_max) + 32;
    let mut done: Vec<ApproxRecord> = Vec::new();
    let mut last_round: Vec<ApproxRecord> = Vec::new();
    for bits in policy.ladder() {
        if pending.is_empty() {
            break;
        }
        let wp = bits + extra;
        let val = x.identity_real(wp)?;
        let house_pow = entry.element.house(wp)?.pow_u(d as u64 - 1);
        let kap = CertifiedReal::from_rational(kappa, wp);
        last_round.clear();
        let mut still = Vec::new();
        for (p, q) in pending {
            let lhs = (&val - &CertifiedReal::from_ratio(&p, &q, wp)).abs();
            let den = CertifiedReal::from_int(q.pow(d), wp) * &house_pow;
            let rhs = kap.div_ball(&den)?;
            let quality = &lhs * &den;
            let rec = ApproxRecord {
                verdict: certify(&lhs, Relation::Lt, &rhs),
                p: p.clone(),
                q: q.clone(),
                unit: entry.label.clone(),
                lhs,
                rhs,
                quality: Some(quality),
                relation: Relation::Lt,
            };
            if rec.verdict.is_decided() {
                done.push(rec);
            } else {
                last_round.push(rec);
                still.push((p, q));
            }
        }
        pending = still;
    }
    done.append(&mut last_round);
    done.sort_by(|a, b| a.q.cmp(&b.q).then(a.p.cmp(&b.p)));
    summary.minimum = done
        .iter()
        .filter(|r| r.quality.is_some())
        .min_by(|a, b| {
            let qa = a.quality.as_ref().expect("filtered").mid();
            let qb = b.quality.as_ref().expect("filtered").mid();
            qa.cmp(qb)
        })
        .cloned();
    let hits = done.into_iter().filter(|r| r.verdict != Verdict::Fails).collect();
    Ok((hits, summary))
}

/// For each unit, walk the convergents of `e alpha` up to `q_max` and keep
/// every candidate whose quality is certifiably below `kappa`, plus the
/// undecided ones. Units run in parallel, output order is fixed.
pub fn search_best(
    alpha: &FieldElement,
    units: &[UnitEntry],
    q_max: &BigInt,
    kappa: &BigRational,
    opts: SearchOptions,
) -> Result<SearchReport> {
    for u in units {
        check_unit(alpha, &u.element)?;
    }
    if !q_max.is_positive() {
        return Ok(SearchReport {
            records: Vec::new(),
            summaries: Vec::new(),
        });
    }
    let per_unit: Vec<Result<(Vec<ApproxRecord>, UnitSummary)>> = units
        .par_iter()
        .map(|u| search_unit(alpha, u, q_max, kappa, opts))
        .collect();
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    for r in per_unit {
        let (mut recs, s) = r?;
        records.append(&mut recs);
        summaries.push(s);
    }
    Ok(SearchReport { records, summaries })
}

fn quadratic_target(alpha: &FieldElement, eps0: &FieldElement, n: i64) -> Result<FieldElement> {
    let field = alpha.field();
    if field.degree() != 2 || field.signature().0 != 2 {
        return Err(Error::invalid("the field must be real quadratic"));
    }
    check_unit(alpha, eps0)?;
    let v = eps0.identity_real(64)?;
    if certify(&v, Relation::Gt, &CertifiedReal::one(64)) != Verdict::Holds {
        return Err(Error::invalid("eps0 must be certified > 1"));
    }
    let x = eps0.pow(n)?.mul(alpha)?;
    if x.as_rational().is_some() {
        return Err(Error::RationalTarget);
    }
    Ok(x)
}

/// Verdicts of `|e0^n alpha - p/q| <= kappa2 / (q^2 e0^n)`, `kappa2 = e0^n / sqrt 5`,
/// for the first `k` convergents.
pub fn hurwitz_scan(alpha: &FieldElement, eps0: &FieldElement, n: i64, k: usize) -> Result<Vec<ApproxRecord>> {
    let x = quadratic_target(alpha, eps0, n)?;
    let policy = alpha.field().policy();
    let en = eps0.pow(n)?;
    let list = continued_fraction(&|bits| x.identity_real(bits), k, &policy)?;
    let label = format!("n={n}");
    list.convergents
        .iter()
        .map(|c| {
            let (p, q) = (c.numer().clone(), c.denom().clone());
            run_record(&policy, extra_bits(&q), |bits| {
                let lhs = (x.identity_real(bits)? - CertifiedReal::from_ratio(&p, &q, bits)).abs();
                let e = en.identity_real(bits)?;
                let kappa2 = e.div_ball(&CertifiedReal::from_int(5, bits).sqrt()?)?;
                let rhs = kappa2.div_ball(&(CertifiedReal::from_int(&q * &q, bits) * e))?;
                Ok(ApproxRecord {
                    verdict: certify(&lhs, Relation::Le, &rhs),
                    p: p.clone(),
                    q: q.clone(),
                    unit: label.clone(),
                    lhs,
                    rhs,
                    quality: None,
                    relation: Relation::Le,
                })
            })
        })
        .collect()
}

/// The first `count` convergents certified as Hurwitz witnesses.
pub fn hurwitz_witnesses(alpha: &FieldElement, eps0: &FieldElement, n: i64, count: usize) -> Result<Vec<ApproxRecord>> {
    if count == 0 {
        quadratic_target(alpha, eps0, n)?;
        return Ok(Vec::new());
    }
    // Among three consecutive convergents one is a witness.
    let mut k = 3 * count + 3;
    loop {
        let scan = hurwitz_scan(alpha, eps0, n, k)?;
        let hits: Vec<ApproxRecord> = scan
            .into_iter()
            .filter(|r| r.verdict == Verdict::Holds)
            .take(count)
            .collect();
        if hits.len() == count || k > 64 * count + 64 {
            return Ok(hits);
        }
        k *= 2;
    }
}

/// Evidence for or against the pseudo-Pisot property.
#[derive(Clone, Debug)]
pub struct PisotCertificate {
    pub verdict: Verdict,
    /// `[Q(x):Q]`.
    pub degree: usize,
    pub trace: BigRational,
    pub identity_modulus: CertifiedReal,
    /// Moduli at every embedding of the ambient field.
    pub conjugate_moduli: Vec<CertifiedReal>,
}

impl PisotCertificate {
    pub fn is_pseudo_pisot(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// `|x| > 1`, all other conjugates of modulus `< 1`, and integral trace over `Q(x)`.
pub fn pseudo_pisot(x: &FieldElement) -> Result<PisotCertificate> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let field = x.field();
    let d = field.degree();
    let delta = x.degree();
    let mp = x.minpoly();
    let trace = -mp[delta - 1].clone() / mp[delta].clone();
    let trace_ok = trace.is_integer();
    // Each conjugate over Q(x) appears d/delta times among the embeddings.
    let mult = d / delta;
    let idx = field.identity_index();
    let mut last = None;
    for bits in field.policy().ladder() {
        let conj = x.conjugates(bits)?;
        let moduli: Vec<CertifiedReal> = conj.iter().map(|c| c.abs()).collect();
        let one = CertifiedReal::one(bits);
        let id_mod = moduli[idx].clone();
        let id_gt = certify(&id_mod, Relation::Gt, &one);
        let gt = moduli.iter().filter(|m| certify(m, Relation::Gt, &one) == Verdict::Holds).count();
        let lt = moduli.iter().filter(|m| certify(m, Relation::Lt, &one) == Verdict::Holds).count();
        let verdict = if !trace_ok || id_gt == Verdict::Fails || gt > mult {
            Verdict::Fails
        } else if id_gt == Verdict::Holds && gt == mult && lt == d - mult {
            Verdict::Holds
        } else {
            Verdict::Undecided
        };
        let cert = PisotCertificate {
            verdict,
            degree: delta,
            trace: trace.clone(),
            identity_modulus: id_mod,
            conjugate_moduli: moduli,
        };
        if verdict.is_decided() {
            return Ok(cert);
        }
        last = Some(cert);
    }
    last.ok_or_else(|| Error::exhausted(field.policy().max_bits, "pseudo-Pisot test"))
}

/// Why the inequality is or is not asserted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CzStatus {
    Applies,
    Excluded(String),
    Undecided(String),
}

#[derive(Clone, Debug)]
pub struct CzReport {
    /// `|alpha q e| > 1`.
    pub exceeds_one: Verdict,
    pub pisot: PisotCertificate,
    /// `alpha q e` is not an integer, so `||alpha q e|| > 0`.
    pub nonzero_distance: bool,
    /// `[Q(e):Q]`.
    pub delta: usize,
    pub status: CzStatus,
    /// `||alpha q e||` against `1 / (house(e)^eta q^(d + eta))`.
    pub record: Option<ApproxRecord>,
}

pub fn cz_check(alpha: &FieldElement, q: &BigInt, eps: &FieldElement, eta: &BigRational) -> Result<CzReport> {
    check_unit(alpha, eps)?;
    if !q.is_positive() {
        return Err(Error::invalid("q must be positive"));
    }
    if !eta.is_positive() {
        return Err(Error::invalid("eta must be positive"));
    }
    let y = alpha.mul(eps)?.scale(&BigRational::from_integer(q.clone()));
    if y.is_zero() {
        return Err(Error::ZeroElement);
    }
    let policy = alpha.field().policy();
    let d = alpha.field().degree() as u32;
    let nonzero_distance = !y.as_rational().is_some_and(|r| r.is_integer());
    let exceeds_one = policy
        .run("cz modulus", |bits| {
            let m = y.identity_value(bits)?.abs();
            let v = certify(&m, Relation::Gt, &CertifiedReal::one(bits));
            Ok(v.is_decided().then_some(v))
        })
        .unwrap_or(Verdict::Undecided);
    let pisot = pseudo_pisot(&y)?;
    let delta = eps.degree();
    let status = if !nonzero_distance {
        CzStatus::Excluded("alpha q e is an integer".into())
    } else if exceeds_one == Verdict::Fails {
        CzStatus::Excluded("|alpha q e| <= 1".into())
    } else if pisot.verdict == Verdict::Holds {
        CzStatus::Excluded("alpha q e is pseudo-Pisot".into())
    } else if exceeds_one == Verdict::Undecided || pisot.verdict == Verdict::Undecided {
        CzStatus::Undecided("hypotheses not certified".into())
    } else {
        CzStatus::Applies
    };
    let record = if status == CzStatus::Applies {
        let eta_r = eta.clone();
        Some(run_record(&policy, extra_bits(q) + 16, |bits| {
            let lhs = nearest_int_distance(&y.identity_real(bits)?)?;
            let e = CertifiedReal::from_rational(&eta_r, bits);
            let house = eps.house(bits)?.pow_real(&e)?;
            let qq = CertifiedReal::from_int(q.clone(), bits);
            let rhs = (house * qq.pow_u(d as u64) * qq.pow_real(&e)?).recip()?;
            Ok(ApproxRecord {
                verdict: certify(&lhs, Relation::Ge, &rhs),
                p: y.identity_real(bits)?.mid().add(&Dyadic::pow2(-1)).floor_int(),
                q: q.clone(),
                unit: String::new(),
                lhs,
                rhs,
                quality: None,
                relation: Relation::Ge,
            })
        })?)
    } else {
        None
    };
    Ok(CzReport {
        exceeds_one,
        pisot,
        nonzero_distance,
        delta,
        status,
        record,
    })
}
