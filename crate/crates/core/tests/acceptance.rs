//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unit_twist_core::approx::{
    continued_fraction, convergents_up_to, hurwitz_scan, liouville_sweep, pseudo_pisot, ApproxRecord, UnitEntry,
};
use unit_twist_core::effective::{baker_bound, effective_gap, BakerInput, EffectiveConfig, GapBranch};
use unit_twist_core::exactnum::{certify, CertifiedReal, Dyadic, PrecisionPolicy, Relation, Verdict};
use unit_twist_core::numfield::{AlgebraicField, FieldElement, FieldOptions};
use unit_twist_core::report::approx_csv;
use unit_twist_core::twistform::{enum_solutions, enum_solutions_multi, nonzero_integrality_check, twist_form, Solution, TwistedForm};
use unit_twist_core::unitgrp::{
    biquadratic_family, bounded_unit_sequence, cubic_family, cubic_family_with, UnitBasis,
};

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// A unit basis together with a generator `w` and the family label.
struct Family {
    label: String,
    field: AlgebraicField,
    basis: UnitBasis,
    omega: FieldElement,
}

fn family(rng: &mut ChaCha8Rng) -> Family {
    let d = rng.gen_range(2..=4);
    if rng.gen_bool(0.5) {
        let c = cubic_family(d).unwrap();
        Family {
            label: format!("cubic D={d}"),
            basis: c.basis().unwrap(),
            omega: c.omega(),
            field: c.field,
        }
    } else {
        let c = biquadratic_family(d).unwrap();
        Family {
            label: format!("biquadratic D={d}"),
            basis: c.basis().unwrap(),
            omega: c.omega(),
            field: c.field,
        }
    }
}

fn unit_product(basis: &UnitBasis, exps: &[i64]) -> FieldElement {
    let mut e = FieldElement::one(basis.field());
    for (u, &b) in basis.units().iter().zip(exps) {
        e = e.mul(&u.pow(b).unwrap()).unwrap();
    }
    e
}

fn criterion_1_records(policy: Option<PrecisionPolicy>) -> Vec<ApproxRecord> {
    let opts = FieldOptions {
        policy,
        ..FieldOptions::default()
    };
    let c = cubic_family_with(2, opts).unwrap();
    let units: Vec<UnitEntry> = (0..=15)
        .map(|n| UnitEntry {
            label: n.to_string(),
            element: c.eps0.pow_u(n),
        })
        .collect();
    liouville_sweep(&c.omega(), &units, &big(1_000_000)).unwrap()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let recs = criterion_1_records(Some(PrecisionPolicy::with_max_bits(4096)));
    let elapsed = t.elapsed();
    let fails = recs.iter().filter(|r| r.verdict == Verdict::Fails).count();
    let undecided = recs.iter().filter(|r| r.verdict == Verdict::Undecided).count();
    let per_n: BTreeSet<&str> = recs.iter().map(|r| r.unit.as_str()).collect();
    ensure!(per_n.len() == 16, "records cover {} of 16 exponents", per_n.len());
    ensure!(recs.iter().all(|r| r.q <= big(1_000_000)), "denominator above 10^6");
    ensure!(fails == 0, "{fails} FAILS");
    ensure!(undecided * 100 <= recs.len(), "{undecided} UNDECIDED of {}", recs.len());
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    Ok(format!(
        "{} records, 0 FAILS, {undecided} UNDECIDED, {:.1}s",
        recs.len(),
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let target = Dyadic::pow2(-20);
    let mut widest = 0f64;
    for case in 0..500 {
        let fam = family(&mut rng);
        let n = rng.gen_range(-6..=6);
        let j = rng.gen_range(0..fam.basis.rank());
        let eps = fam.basis.units()[j].pow(n).unwrap();
        let form = twist_form(&fam.omega, &eps, &format!("e{j}^{n}")).unwrap();
        let (p, q) = loop {
            let p = big(rng.gen_range(-1000..=1000));
            let q = big(rng.gen_range(1..=1000));
            if p.gcd(&q).is_one() {
                break (p, q);
            }
        };
        let x = eps.mul(&fam.omega).unwrap();
        ensure!(
            x.as_rational() != Some(BigRational::new(p.clone(), q.clone())),
            "case {case}: e alpha is rational"
        );
        let f = form.eval(&p, &q);
        ensure!(f.abs() >= BigInt::one(), "case {case} {}: F({p},{q}) = {f}", fam.label);
        let chk = nonzero_integrality_check(&form, &p, &q);
        ensure!(chk.verdict == Verdict::Holds && chk.value == f, "case {case}: integrality check {chk:?}");
        let prod = form.fpq_certified(&p, &q).map_err(|e| format!("case {case}: {e}"))?;
        ensure!(prod.contains_int(&f.abs()), "case {case}: product {prod} misses |F| = {}", f.abs());
        ensure!(prod.width() <= target, "case {case}: width {}", prod.width().to_f64());
        widest = widest.max(prod.width().to_f64());
    }
    Ok(format!("500 cases, widest enclosure {widest:.3e}"))
}

fn criterion_3() -> Outcome {
    let c = cubic_family(2).unwrap();
    let form = twist_form(&c.omega(), &c.eps0, "eps0").unwrap();
    let want: Vec<BigInt> = [1, -21, -21, -7].iter().map(|&v| big(v)).collect();
    ensure!(form.coeffs == want, "coefficients {:?}", form.coeffs);
    let f = form.eval(&big(22), &big(1));
    ensure!(f == big(15), "F(22, 1) = {f}");
    Ok(format!("{} and F(22, 1) = 15", form.to_form_string()))
}

fn naive(form: &TwistedForm, k: i64, bound: i64) -> Vec<Solution> {
    let c: Vec<i128> = form.coeffs.iter().map(|v| v.to_i128().expect("small coefficients")).collect();
    let mut out = Vec::new();
    for x in -bound..=bound {
        for y in -bound..=bound {
            let (x, y) = (x as i128, y as i128);
            // sum c_i x^(d - i) y^i
            let mut v = 0i128;
            for (i, ci) in c.iter().enumerate() {
                let t = ci * x.pow((c.len() - 1 - i) as u32) * y.pow(i as u32);
                v += t;
            }
            if v == k as i128 {
                out.push(Solution {
                    x: x as i64,
                    y: y as i64,
                    xy_zero: x == 0 || y == 0,
                });
            }
        }
    }
    out
}

fn random_form(rng: &mut ChaCha8Rng) -> TwistedForm {
    loop {
        let field = match rng.gen_range(0..4) {
            0 => AlgebraicField::from_i64(&[1, 0, 0, -2]).unwrap(),
            1 => AlgebraicField::from_i64(&[1, 0, -3, -1]).unwrap(),
            2 => cubic_family(rng.gen_range(2..=3)).unwrap().field,
            _ => AlgebraicField::from_i64(&[1, 0, 0, 0, -15]).unwrap(),
        };
        let d = field.degree();
        let coords: Vec<i64> = (0..d).map(|_| rng.gen_range(-2..=2)).collect();
        let alpha = FieldElement::from_i64_coords(&field, &coords).unwrap();
        if alpha.is_zero() || alpha.degree() != d {
            continue;
        }
        let form = twist_form(&alpha, &FieldElement::one(&field), "1").unwrap();
        if form.coeffs.iter().all(|c| c.abs() < big(1000)) {
            return form;
        }
    }
}

fn criterion_4() -> Outcome {
    let f = AlgebraicField::from_i64(&[1, 0, 0, -2]).unwrap();
    let form = twist_form(&FieldElement::generator(&f), &FieldElement::one(&f), "1").unwrap();
    let sol = |x, y| Solution { x, y, xy_zero: x == 0 || y == 0 };
    let minus = enum_solutions(&form, -1, 1000).unwrap();
    ensure!(minus == vec![sol(-1, 0), sol(1, 1)], "k = -1 gave {minus:?}");
    let plus = enum_solutions(&form, 1, 1000).unwrap();
    ensure!(plus == vec![sol(-1, -1), sol(1, 0)], "k = +1 gave {plus:?}");
    ensure!(minus[0].xy_zero && plus[1].xy_zero, "xy = 0 flags missing");

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut total = 0usize;
    for i in 0..50 {
        let form = random_form(&mut rng);
        let bound = if i % 5 == 0 { 200 } else { rng.gen_range(5..=200) };
        let (x0, y0) = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        let mut ks = vec![1i64, -1, form.eval(&big(x0), &big(y0)).to_i64().unwrap()];
        ks.retain(|&k| k != 0);
        ks.sort_unstable();
        ks.dedup();
        let got = enum_solutions_multi(&form, &ks, bound as u64);
        for (k, g) in ks.iter().zip(&got) {
            let mut g = g.clone();
            g.sort();
            let mut want = naive(&form, *k, bound);
            want.sort();
            ensure!(g == want, "form {} k = {k} box {bound}: {g:?} vs {want:?}", form.to_form_string());
            total += want.len();
        }
    }
    Ok(format!("fixed cases exact, 50 random forms agree ({total} solutions)"))
}

fn criterion_5() -> Outcome {
    let f = AlgebraicField::from_i64(&[1, 0, -2]).unwrap();
    let sqrt2 = FieldElement::generator(&f);
    let eps0 = FieldElement::from_i64_coords(&f, &[1, 1]).unwrap();
    let mut least = usize::MAX;
    for n in 0..=5 {
        let scan = hurwitz_scan(&sqrt2, &eps0, n, 30).map_err(|e| e.to_string())?;
        ensure!(scan.len() == 30, "n = {n}: {} convergents", scan.len());
        ensure!(scan.iter().all(|r| r.verdict.is_decided()), "n = {n}: undecided verdict");
        let holds: Vec<bool> = scan.iter().map(|r| r.verdict == Verdict::Holds).collect();
        let count = holds.iter().filter(|&&h| h).count();
        ensure!(count >= 10, "n = {n}: {count} witnesses");
        ensure!(holds.windows(3).all(|w| w.iter().any(|&h| h)), "n = {n}: gap of three");
        least = least.min(count);
    }
    Ok(format!("n = 0..5, at least {least} witnesses among 30"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..200 {
        let fam = family(&mut rng);
        let exps: Vec<i64> = (0..fam.basis.rank()).map(|_| rng.gen_range(-30..=30)).collect();
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let zeta = FieldElement::from_int(&fam.field, sign);
        let e = unit_product(&fam.basis, &exps).mul(&zeta).unwrap();
        let ev = fam.basis.recover_exponents(&e).map_err(|err| format!("case {case}: {err}"))?;
        ensure!(ev.exponents == exps, "case {case} {}: {:?} vs {exps:?}", fam.label, ev.exponents);
        ensure!(ev.torsion == zeta, "case {case}: torsion {:?}", ev.torsion.coords());
        let v = fam.basis.lemma_check(&e, &ev, 256).map_err(|err| err.to_string())?;
        ensure!(v == Verdict::Holds, "case {case} {} {exps:?}: lemma {}", fam.label, v.as_str());
    }
    Ok("200 of 200 recovered, lemma HOLDS in every case".into())
}

fn criterion_7() -> Outcome {
    let mut notes = Vec::new();
    for d in [2, 3] {
        let fam = biquadratic_family(d).unwrap();
        let seq = bounded_unit_sequence(&fam.eps1, &fam.eps2, 8).map_err(|e| e.to_string())?;
        ensure!(seq.accepted.len() == 8, "D = {d}: {} accepted terms", seq.accepted.len());
        let policy = fam.field.policy();
        let theta = |bits: u32| -> unit_twist_core::Result<CertifiedReal> {
            fam.eps2.identity_real(bits)?.log()?.div_ball(&fam.eps1.identity_real(bits)?.log()?)
        };
        let cf = continued_fraction(&theta, 40, &policy).map_err(|e| e.to_string())?;
        let half = CertifiedReal::from_ratio(&big(1), &big(2), 128);
        let two = CertifiedReal::from_int(2, 128);
        for t in &seq.accepted {
            let frac = BigRational::new(t.a.clone(), t.b.clone());
            ensure!(cf.convergents.contains(&frac), "D = {d}: {}/{} is not a convergent", t.a, t.b);
            let v = t.element.identity_real(256).map_err(|e| e.to_string())?;
            ensure!(
                certify(&half, Relation::Le, &v) == Verdict::Holds && certify(&v, Relation::Le, &two) == Verdict::Holds,
                "D = {d}: ({}, {}) not certified in [1/2, 2]",
                t.a,
                t.b
            );
            let direct = fam.eps1.pow(t.a.to_i64().unwrap()).unwrap().mul(&fam.eps2.pow(-t.b.to_i64().unwrap()).unwrap()).unwrap();
            ensure!(direct == t.element, "D = {d}: element mismatch at ({}, {})", t.a, t.b);
        }
        if d == 2 {
            let t = seq
                .accepted
                .iter()
                .find(|t| t.a == big(5) && t.b == big(3))
                .ok_or("D = 2: no (5, 3) term")?;
            let lo = CertifiedReal::from_ratio(&big(99), &big(100), 128);
            let one = CertifiedReal::one(128);
            ensure!(
                certify(&lo, Relation::Le, &t.value) == Verdict::Holds && certify(&t.value, Relation::Le, &one) == Verdict::Holds,
                "(5, 3) term {}",
                t.value
            );
            notes.push(format!("(5,3) = {:.10}", t.value.to_f64()));
        }
    }
    Ok(format!("D = 2, 3: 8 terms each, {}", notes.join(", ")))
}

/// Pseudo-Pisot by floating roots of the minimal polynomial and the trace
/// from the field trace. `None` when a modulus is too close to 1 to call.
fn pisot_oracle(x: &FieldElement) -> Option<bool> {
    let mp = x.minpoly();
    let delta = mp.len() - 1;
    if delta == 1 {
        let r = -mp[0].clone() / mp[1].clone();
        return Some(r.abs() > BigRational::one() && r.is_integer());
    }
    let lead = mp[delta].to_f64().unwrap();
    let roots: Vec<(f64, f64)> = {
        let m = DMatrix::from_fn(delta, delta, |i, j| {
            if i == 0 {
                -mp[delta - 1 - j].to_f64().unwrap() / lead
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        m.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect()
    };
    let id = x.identity_value(128).unwrap();
    let (ir, ii) = (id.re.to_f64(), id.im.to_f64());
    let dist = |r: &(f64, f64)| ((r.0 - ir).powi(2) + (r.1 - ii).powi(2)).sqrt();
    let k = (0..roots.len()).min_by(|&a, &b| dist(&roots[a]).total_cmp(&dist(&roots[b]))).unwrap();
    let moduli: Vec<f64> = roots.iter().map(|r| r.0.hypot(r.1)).collect();
    if moduli.iter().any(|m| (m - 1.0).abs() < 1e-9) {
        return None;
    }
    let field_deg = x.field().degree();
    let trace = x.trace() / BigRational::from_integer(big((field_deg / delta) as i64));
    let others_small = moduli.iter().enumerate().all(|(i, &m)| i == k || m < 1.0);
    Some(moduli[k] > 1.0 && others_small && trace.is_integer())
}

fn criterion_8() -> Outcome {
    let cubic = cubic_family(2).unwrap();
    let q2 = AlgebraicField::from_i64(&[1, 0, -2]).unwrap();
    let mut cases: Vec<(String, FieldElement, Option<bool>)> = vec![
        ("eps0".into(), cubic.eps0.clone(), Some(true)),
        ("sqrt2".into(), FieldElement::generator(&q2), Some(false)),
        (
            "3/2".into(),
            FieldElement::from_rational(&cubic.field, BigRational::new(big(3), big(2))),
            Some(false),
        ),
        ("2 eps0".into(), cubic.eps0.scale(&BigRational::from_integer(big(2))), Some(true)),
    ];
    let fields = [
        q2.clone(),
        AlgebraicField::from_i64(&[1, -1, -1]).unwrap(),
        cubic.field.clone(),
        cubic_family(3).unwrap().field,
        AlgebraicField::from_i64(&[1, 0, -3, -1]).unwrap(),
        biquadratic_family(2).unwrap().field,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    while cases.len() < 200 {
        let field = &fields[rng.gen_range(0..fields.len())];
        let d = field.degree();
        let x = match rng.gen_range(0..3) {
            0 => {
                let coords: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
                FieldElement::from_i64_coords(field, &coords).unwrap()
            }
            1 => {
                let num: Vec<BigRational> = (0..d)
                    .map(|_| BigRational::new(big(rng.gen_range(-5..=5)), big(rng.gen_range(1..=3))))
                    .collect();
                FieldElement::new(field, num).unwrap()
            }
            _ => {
                let coords: Vec<i64> = (0..d).map(|_| rng.gen_range(-2..=2)).collect();
                let base = FieldElement::from_i64_coords(field, &coords).unwrap();
                let m = rng.gen_range(1..=3);
                if base.is_zero() {
                    continue;
                }
                base.pow_u(m).scale(&BigRational::from_integer(big(rng.gen_range(1..=3))))
            }
        };
        if x.is_zero() {
            continue;
        }
        cases.push((format!("random {:?}", x.coords()), x, None));
    }
    let mut skipped = 0;
    let mut positives = 0;
    for (label, x, expect) in &cases {
        let Some(oracle) = pisot_oracle(x) else {
            skipped += 1;
            continue;
        };
        if let Some(e) = expect {
            ensure!(oracle == *e, "{label}: oracle says {oracle}");
        }
        let cert = pseudo_pisot(x).map_err(|e| format!("{label}: {e}"))?;
        ensure!(cert.verdict.is_decided(), "{label}: undecided");
        ensure!(cert.is_pseudo_pisot() == oracle, "{label}: certified {} vs oracle {oracle}", cert.verdict.as_str());
        positives += oracle as usize;
    }
    ensure!(skipped == 0, "{skipped} cases too close to the unit circle for the oracle");
    Ok(format!("{} cases agree ({positives} pseudo-Pisot)", cases.len()))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let config = EffectiveConfig::default();
    let mut done = 0;
    let mut attempts = 0;
    while done < 100 {
        attempts += 1;
        ensure!(attempts < 2000, "only {done} non-SKIP cases in {attempts} draws");
        let fam = family(&mut rng);
        let exps: Vec<i64> = (0..fam.basis.rank()).map(|_| rng.gen_range(-3..=3)).collect();
        let shift = rng.gen_range(-2..=2);
        let alpha = fam.omega.add(&FieldElement::from_int(&fam.field, shift)).unwrap();
        let eps = unit_product(&fam.basis, &exps);
        let x = eps.mul(&alpha).unwrap();
        if x.as_rational().is_some() {
            continue;
        }
        let q_max = big(10i64.pow(rng.gen_range(1..=4)));
        let policy = fam.field.policy();
        let cf = convergents_up_to(&|b| x.identity_real(b), &q_max, &policy).unwrap();
        if cf.convergents.is_empty() {
            continue;
        }
        let c = &cf.convergents[rng.gen_range(0..cf.convergents.len())];
        if c.numer().is_zero() {
            continue;
        }
        let rep = effective_gap(&alpha, &eps, c.numer(), c.denom(), &fam.basis, &config)
            .map_err(|e| format!("{} {exps:?}: {e}", fam.label))?;
        if rep.branch != GapBranch::Principal {
            continue;
        }
        done += 1;
        let tag = format!("{} exps {exps:?} shift {shift} p/q {c}", fam.label);
        ensure!(rep.bracket == Some(Verdict::Holds), "{tag}: bracket {:?}", rep.bracket);
        ensure!(rep.reconstruction_ok == Some(true), "{tag}: reconstruction");
        ensure!(rep.sanity != Verdict::Fails, "{tag}: lower bound exceeds the direct gap");

        // Rebuild the linear-form input and perturb it upward.
        let bits = 256;
        let ev = fam.basis.recover_exponents(&eps).unwrap();
        let last = ev.torsion.mul(&alpha).unwrap().scale(&BigRational::new(c.denom().clone(), c.numer().clone()));
        let mut heights: Vec<CertifiedReal> = fam.basis.units().iter().map(|u| u.height(bits).unwrap()).collect();
        heights.push(last.height(bits).unwrap());
        let mut lambdas = rep.unit_logs.clone();
        lambdas.push(rep.lambda_last.clone().unwrap());
        let mut b: Vec<BigInt> = exps.iter().map(|&v| big(v)).collect();
        b.push(BigInt::one());
        let base = BakerInput {
            lambdas,
            heights,
            b,
            log_a: rep.log_a.clone(),
            log_b: rep.log_b.clone().unwrap(),
            kappa4: rep.kappa4.clone(),
            degree_bound: fam.field.degree(),
        };
        let b0 = baker_bound(&base).map_err(|e| format!("{tag}: {e}"))?;
        ensure!(b0.overlaps(rep.baker.as_ref().unwrap()), "{tag}: rebuilt bound differs");
        let one = CertifiedReal::one(bits);
        let mut bumps = Vec::new();
        let mut k4 = base.clone();
        k4.kappa4 = k4.kappa4.mul_int(&big(2));
        bumps.push(k4);
        let mut lb = base.clone();
        lb.log_b = lb.log_b.clone() + one.clone();
        bumps.push(lb);
        let j = rng.gen_range(0..base.log_a.len());
        let mut la = base.clone();
        la.log_a[j] = la.log_a[j].clone() + one.clone();
        bumps.push(la);
        for bumped in &bumps {
            let b1 = baker_bound(bumped).map_err(|e| format!("{tag}: {e}"))?;
            ensure!(certify(&b1, Relation::Le, &b0) == Verdict::Holds, "{tag}: bound grew");
        }
    }
    Ok(format!("100 PRINCIPAL cases from {attempts} draws"))
}

fn criterion_10() -> Outcome {
    let policy = Some(PrecisionPolicy::with_max_bits(4096));
    let a = approx_csv(&criterion_1_records(policy)).map_err(|e| e.to_string())?;
    let b = approx_csv(&criterion_1_records(policy)).map_err(|e| e.to_string())?;
    ensure!(a == b, "repeated runs differ");
    let low = criterion_1_records(policy);
    let high = criterion_1_records(Some(PrecisionPolicy::with_max_bits(8192)));
    let key = |r: &ApproxRecord| (r.unit.clone(), r.p.clone(), r.q.clone());
    let lo_map: BTreeMap<_, Verdict> = low.iter().map(|r| (key(r), r.verdict)).collect();
    let hi_map: BTreeMap<_, Verdict> = high.iter().map(|r| (key(r), r.verdict)).collect();
    ensure!(
        lo_map.keys().eq(hi_map.keys()),
        "record sets differ between ceilings"
    );
    for (k, v) in &lo_map {
        if v.is_decided() {
            ensure!(hi_map[k] == *v, "{k:?} flipped from {}", v.as_str());
        }
    }
    let und = |m: &BTreeMap<_, Verdict>| m.values().filter(|v| **v == Verdict::Undecided).count();
    ensure!(und(&hi_map) <= und(&lo_map), "more UNDECIDED at 8192 bits");
    Ok(format!(
        "{} bytes identical, no flips, UNDECIDED {} -> {}",
        a.len(),
        und(&lo_map),
        und(&hi_map)
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("liouville floor", criterion_1),
        ("twisted-form integrality", criterion_2),
        ("known twist", criterion_3),
        ("thue box oracle", criterion_4),
        ("hurwitz witnesses", criterion_5),
        ("exponent recovery", criterion_6),
        ("bounded unit sequence", criterion_7),
        ("pseudo-pisot predicate", criterion_8),
        ("effective pipeline", criterion_9),
        ("determinism", criterion_10),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|k| k != n) {
            continue;
        }
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("criterion {n:>2} {name}: PASS ({detail}) [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} {name}: FAIL ({why}) [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
