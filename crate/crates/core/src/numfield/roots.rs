//! Certified isolation of the complex roots of an integer polynomial.
//!
//! Approximations come from an f64 Aberth iteration, are polished with
//! Weierstrass (Durand-Kerner) steps at the working precision, and are then
//! certified: with `W_i = f(z_i) / (a_0 prod_{j != i} (z_i - z_j))`, every
//! root lies in the union of the discs `D(z_i, d |W_i|)` and a connected
//! union of `m` discs holds exactly `m` roots.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::poly::eval_ball_desc;
use crate::exactnum::{CertifiedComplex, CertifiedReal, Dyadic, Round};

#[derive(Debug, Clone)]
pub(crate) struct Isolation {
    /// Pairwise disjoint boxes: reals descending, upper half-plane roots by
    /// decreasing modulus, then their conjugates in the same order.
    pub boxes: Vec<CertifiedComplex>,
    /// Exact centers used for the next refinement.
    pub centers: Vec<(Dyadic, Dyadic)>,
    pub r1: usize,
    pub r2: usize,
    pub prec: u32,
}

fn to_f64_lossy(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

fn circle_start(d: usize, radius: f64) -> Vec<Complex64> {
    (0..d)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / d as f64 + 0.4;
            Complex64::from_polar(radius, t)
        })
        .collect()
}

/// Simultaneous Aberth iteration in double precision.
pub(crate) fn aberth_f64(coeffs: &[BigInt]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let a0 = to_f64_lossy(&coeffs[0]);
    let c: Vec<f64> = coeffs.iter().map(|x| to_f64_lossy(x) / a0).collect();
    let bound = 1.0 + c[1..].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let geo = c[d].abs().powf(1.0 / d as f64);
    let radius = if geo.is_finite() && geo > 0.0 { geo.min(bound) } else { 1.0 };
    let mut z = circle_start(d, radius);
    if !bound.is_finite() {
        return z;
    }
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for &ci in &c {
                dp = dp * z[k] + p;
                p = p * z[k] + ci;
            }
            if p.norm() == 0.0 {
                continue;
            }
            let w = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != k {
                    s += (z[k] - z[j]).inv();
                }
            }
            let step = w / (Complex64::new(1.0, 0.0) - w * s);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn point(re: &Dyadic, im: &Dyadic, prec: u32) -> CertifiedComplex {
    CertifiedComplex::new(
        CertifiedReal::exact(re.clone(), prec),
        CertifiedReal::exact(im.clone(), prec),
    )
}

/// Enclosure of `W_i` for each center.
fn weierstrass_corrections(
    coeffs: &[BigInt],
    centers: &[(Dyadic, Dyadic)],
    prec: u32,
) -> Option<Vec<CertifiedComplex>> {
    let pts: Vec<CertifiedComplex> = centers.iter().map(|(r, i)| point(r, i, prec)).collect();
    let a0 = CertifiedReal::from_int(coeffs[0].clone(), prec);
    let mut out = Vec::with_capacity(pts.len());
    for (i, zi) in pts.iter().enumerate() {
        let mut den = CertifiedComplex::from_real(a0.clone());
        for (j, zj) in pts.iter().enumerate() {
            if i != j {
                den = den.mul(&zi.sub(zj));
            }
        }
        let w = eval_ball_desc(coeffs, zi).div(&den).ok()?;
        out.push(w);
    }
    Some(out)
}

fn round_point(z: &CertifiedComplex, prec: u32) -> (Dyadic, Dyadic) {
    (
        z.re.mid().round(prec, Round::Floor),
        z.im.mid().round(prec, Round::Floor),
    )
}

/// Durand-Kerner steps on midpoints until the corrections are negligible.
fn polish(coeffs: &[BigInt], centers: &mut [(Dyadic, Dyadic)], prec: u32) {
    let max_iter = 64 + prec as usize / 4;
    for _ in 0..max_iter {
        let Some(ws) = weierstrass_corrections(coeffs, centers, prec) else {
            return;
        };
        let mut converged = true;
        for (c, w) in centers.iter_mut().zip(&ws) {
            let z = point(&c.0, &c.1, prec).sub(w);
            *c = round_point(&z, prec);
            let scale = c.0.top().max(c.1.top()).max(0);
            let wtop = w.re.mid().top().max(w.im.mid().top());
            if wtop > scale - prec as i64 + 2 {
                converged = false;
            }
        }
        if converged {
            return;
        }
    }
}

struct Disc {
    re: Dyadic,
    im: Dyadic,
    r: Dyadic,
}

/// Are the discs `(a, conj_a)` and `b` certainly disjoint?
fn discs_apart(a: &Disc, conj_a: bool, b: &Disc) -> bool {
    let aim = if conj_a { a.im.neg() } else { a.im.clone() };
    let dx = a.re.sub(&b.re);
    let dy = aim.sub(&b.im);
    let dist2 = dx.mul(&dx).add(&dy.mul(&dy));
    let rs = a.r.add(&b.r);
    dist2 > rs.mul(&rs)
}

enum Kind {
    Real,
    Upper,
    Lower(usize),
}

fn classify(discs: &[Disc]) -> Option<Vec<Kind>> {
    let n = discs.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if !discs_apart(&discs[i], false, &discs[j]) {
                return None;
            }
        }
    }
    let mut kinds = Vec::with_capacity(n);
    for (i, di) in discs.iter().enumerate() {
        let hits: Vec<usize> = (0..n)
            .filter(|&j| j != i && !discs_apart(di, true, &discs[j]))
            .collect();
        let touches_axis = di.im.abs() <= di.r;
        if hits.is_empty() && touches_axis {
            kinds.push(Kind::Real);
        } else if !touches_axis && hits.len() == 1 {
            if di.im.is_positive() {
                kinds.push(Kind::Upper);
            } else {
                kinds.push(Kind::Lower(hits[0]));
            }
        } else {
            return None;
        }
    }
    // Partners must pair upper with lower one-to-one.
    let uppers = kinds.iter().filter(|k| matches!(k, Kind::Upper)).count();
    let lowers = kinds.iter().filter(|k| matches!(k, Kind::Lower(_))).count();
    if uppers != lowers {
        return None;
    }
    for (i, k) in kinds.iter().enumerate() {
        if let Kind::Lower(p) = k {
            if !matches!(kinds[*p], Kind::Upper) {
                return None;
            }
            let back = (0..n).filter(|&j| j != *p && !discs_apart(&discs[*p], true, &discs[j]));
            if back.collect::<Vec<_>>() != vec![i] {
                return None;
            }
        }
    }
    Some(kinds)
}

fn boxes_disjoint(boxes: &[CertifiedComplex]) -> bool {
    for i in 0..boxes.len() {
        for j in (i + 1)..boxes.len() {
            if boxes[i].overlaps(&boxes[j]) {
                return false;
            }
        }
    }
    true
}

fn make_discs(coeffs: &[BigInt], centers: &[(Dyadic, Dyadic)], prec: u32) -> Option<Vec<Disc>> {
    let d = centers.len() as i64;
    let ws = weierstrass_corrections(coeffs, centers, prec)?;
    Some(
        centers
            .iter()
            .zip(ws)
            .map(|((re, im), w)| {
                let bound = w.abs().hi();
                Disc {
                    re: re.clone(),
                    im: im.clone(),
                    r: bound.mul(&Dyadic::from_int(d)).round(30, Round::Ceil),
                }
            })
            .collect(),
    )
}

fn real_box(d: &Disc, prec: u32) -> CertifiedComplex {
    CertifiedComplex::from_real(CertifiedReal::new(d.re.clone(), d.r.clone(), prec))
}

fn complex_box(d: &Disc, prec: u32) -> CertifiedComplex {
    CertifiedComplex::new(
        CertifiedReal::new(d.re.clone(), d.r.clone(), prec),
        CertifiedReal::new(d.im.clone(), d.r.clone(), prec),
    )
}

fn modulus_sq(d: &Disc) -> Dyadic {
    d.re.mul(&d.re).add(&d.im.mul(&d.im))
}

/// One certification attempt at `prec`, fixing the canonical order.
/// The polished centers are left in `centers` either way.
fn isolate_at(coeffs: &[BigInt], centers: &mut [(Dyadic, Dyadic)], prec: u32) -> Option<Isolation> {
    polish(coeffs, centers, prec);
    let discs = make_discs(coeffs, &centers, prec)?;
    let kinds = classify(&discs)?;
    let mut reals: Vec<usize> = Vec::new();
    let mut uppers: Vec<usize> = Vec::new();
    for (i, k) in kinds.iter().enumerate() {
        match k {
            Kind::Real => reals.push(i),
            Kind::Upper => uppers.push(i),
            Kind::Lower(_) => {}
        }
    }
    reals.sort_by(|&a, &b| discs[b].re.cmp(&discs[a].re));
    uppers.sort_by(|&a, &b| {
        let ma = modulus_sq(&discs[a]);
        let mb = modulus_sq(&discs[b]);
        match mb.cmp(&ma) {
            Ordering::Equal => discs[b].re.cmp(&discs[a].re),
            o => o,
        }
    });
    let mut boxes = Vec::with_capacity(discs.len());
    let mut ordered = Vec::with_capacity(discs.len());
    for &i in &reals {
        boxes.push(real_box(&discs[i], prec));
        ordered.push((discs[i].re.clone(), Dyadic::zero()));
    }
    for &i in &uppers {
        boxes.push(complex_box(&discs[i], prec));
        ordered.push((discs[i].re.clone(), discs[i].im.clone()));
    }
    for &i in &uppers {
        boxes.push(complex_box(&discs[i], prec).conj());
        ordered.push((discs[i].re.clone(), discs[i].im.neg()));
    }
    if !boxes_disjoint(&boxes) {
        return None;
    }
    Some(Isolation {
        boxes,
        centers: ordered,
        r1: reals.len(),
        r2: uppers.len(),
        prec,
    })
}

/// First isolation, trying each precision in `ladder`.
pub(crate) fn isolate(coeffs: &[BigInt], ladder: &[u32]) -> Option<Isolation> {
    let approx = aberth_f64(coeffs);
    let mut start: Vec<(Dyadic, Dyadic)> = approx
        .iter()
        .map(|z| {
            if z.is_finite() {
                (Dyadic::from_f64(z.re), Dyadic::from_f64(z.im))
            } else {
                (Dyadic::zero(), Dyadic::zero())
            }
        })
        .collect();
    if approx.iter().any(|z| !z.is_finite()) {
        start = circle_start(start.len(), 1.0)
            .iter()
            .map(|z| (Dyadic::from_f64(z.re), Dyadic::from_f64(z.im)))
            .collect();
    }
    for (level, &prec) in ladder.iter().enumerate() {
        if level > 0 {
            // Break the conjugate symmetry of clustered approximations.
            for (k, c) in start.iter_mut().enumerate() {
                let nudge = Dyadic::pow2(-(prec as i64) / 2 - k as i64);
                c.0 = c.0.add(&nudge);
                c.1 = c.1.add(&nudge.mul_pow2(-1));
            }
        }
        if let Some(iso) = isolate_at(coeffs, &mut start, prec) {
            return Some(iso);
        }
    }
    None
}

/// Re-certify at `prec`, keeping the order of `prev`: box `i` must meet the
/// previous box `i` and no other.
pub(crate) fn refine_isolation(coeffs: &[BigInt], prev: &Isolation, prec: u32) -> Option<Isolation> {
    let mut centers = prev.centers.clone();
    polish(coeffs, &mut centers, prec);
    let discs = make_discs(coeffs, &centers, prec)?;
    let kinds = classify(&discs)?;
    let (r1, r2) = (prev.r1, prev.r2);
    let mut boxes = Vec::with_capacity(discs.len());
    for (i, k) in kinds.iter().enumerate().take(r1 + r2) {
        match (k, i < r1) {
            (Kind::Real, true) => boxes.push(real_box(&discs[i], prec)),
            (Kind::Upper, false) => boxes.push(complex_box(&discs[i], prec)),
            _ => return None,
        }
    }
    for i in 0..r2 {
        match kinds[r1 + r2 + i] {
            Kind::Lower(p) if p == r1 + i => {}
            _ => return None,
        }
        let b = boxes[r1 + i].conj();
        boxes.push(b);
    }
    if !boxes_disjoint(&boxes) {
        return None;
    }
    for (i, b) in boxes.iter().enumerate() {
        for (j, old) in prev.boxes.iter().enumerate() {
            if b.overlaps(old) != (i == j) {
                return None;
            }
        }
    }
    let mut ordered = centers;
    for i in 0..r1 {
        ordered[i].1 = Dyadic::zero();
    }
    for i in 0..r2 {
        ordered[r1 + r2 + i] = (ordered[r1 + i].0.clone(), ordered[r1 + i].1.neg());
    }
    Some(Isolation {
        boxes,
        centers: ordered,
        r1,
        r2,
        prec,
    })
}

#[cfg(test)]
/// Radius of the widest box component; zero when all are exact.
pub(crate) fn max_radius(boxes: &[CertifiedComplex]) -> Dyadic {
    boxes
        .iter()
        .flat_map(|b| [b.re.rad().clone(), b.im.rad().clone()])
        .max()
        .unwrap_or_else(Dyadic::zero)
}
