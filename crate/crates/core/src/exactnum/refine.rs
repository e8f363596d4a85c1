use super::dyadic::Dyadic;
use super::real::CertifiedReal;
use crate::error::{Error, Result};

pub const DEFAULT_START_BITS: u32 = 64;
pub const DEFAULT_MAX_BITS: u32 = 4096;
/// Overrides the precision ceiling when set.
pub const MAX_BITS_ENV: &str = "UNIT_TWIST_LAB_MAX_BITS";

/// Precision schedule: start, then double up to the ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start_bits: DEFAULT_START_BITS,
            max_bits: DEFAULT_MAX_BITS,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(start_bits: u32, max_bits: u32) -> Self {
        let start_bits = start_bits.max(8);
        PrecisionPolicy {
            start_bits,
            max_bits: max_bits.max(start_bits),
        }
    }

    pub fn with_max_bits(max_bits: u32) -> Self {
        PrecisionPolicy::new(DEFAULT_START_BITS.min(max_bits.max(8)), max_bits)
    }

    /// Default policy, with the ceiling taken from the environment if present.
    pub fn from_env() -> Self {
        match std::env::var(MAX_BITS_ENV).ok().and_then(|v| v.trim().parse::<u32>().ok()) {
            Some(bits) if bits > 0 => PrecisionPolicy::with_max_bits(bits),
            _ => PrecisionPolicy::default(),
        }
    }

    /// The ladder of precisions to try, ending exactly at `max_bits`.
    pub fn ladder(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut b = self.start_bits;
        while b < self.max_bits {
            out.push(b);
            b = b.saturating_mul(2);
        }
        out.push(self.max_bits);
        out
    }

    /// Run `attempt` along the ladder until it returns `Some`.
    ///
    /// `PrecisionExhausted` and `Domain` errors from the attempt are treated
    /// as "not enough bits yet"; other errors abort immediately.
    pub fn run<T>(&self, context: &str, mut attempt: impl FnMut(u32) -> Result<Option<T>>) -> Result<T> {
        let mut last_err = None;
        for bits in self.ladder() {
            match attempt(bits) {
                Ok(Some(v)) => return Ok(v),
                Ok(None) => {}
                Err(e @ (Error::PrecisionExhausted { .. } | Error::Domain(_))) => last_err = Some(e),
                Err(e) => return Err(e),
            }
        }
        match last_err {
            Some(Error::Domain(msg)) => Err(Error::exhausted(self.max_bits, format!("{context}: {msg}"))),
            _ => Err(Error::exhausted(self.max_bits, context)),
        }
    }
}

/// Re-evaluate `producer` at doubling precision until the radius is at most
/// `target_radius` or `max_bits` is reached.
///
/// The tightest enclosure seen is returned; the caller inspects its radius.
/// An error is returned only if the producer failed at every precision.
pub fn refine(
    mut producer: impl FnMut(u32) -> Result<CertifiedReal>,
    target_radius: &Dyadic,
    max_bits: u32,
) -> Result<CertifiedReal> {
    let policy = PrecisionPolicy::with_max_bits(max_bits);
    let mut best: Option<CertifiedReal> = None;
    let mut last_err = None;
    for bits in policy.ladder() {
        match producer(bits) {
            Ok(v) => {
                let done = v.rad() <= target_radius;
                let tighter = best.as_ref().map_or(true, |b| v.rad() < b.rad());
                if tighter {
                    best = Some(v);
                }
                if done {
                    break;
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or_else(|| Error::exhausted(max_bits, "refine")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Round;
    use num_bigint::BigInt;

    /// Interval Newton for the positive real root of `x^n - c`.
    fn nth_root(c: i64, n: u32, bits: u32) -> Result<CertifiedReal> {
        let cc = CertifiedReal::from_int(c, bits);
        let mut x = CertifiedReal::from_f64((c as f64).powf(1.0 / n as f64), bits);
        for _ in 0..(bits / 16 + 4) {
            let fx = x.pow_u(n as u64) - &cc;
            let dfx = x.pow_u(n as u64 - 1).mul_int(&BigInt::from(n));
            let step = fx.div_ball(&dfx)?;
            x = CertifiedReal::exact(x.mid().clone(), bits) - step;
            x = CertifiedReal::exact(x.mid().round(bits, Round::Floor), bits);
        }
        // Final certified step over a small box around the estimate.
        let box_ = CertifiedReal::new(x.mid().clone(), Dyadic::pow2(-(bits as i64) + 4), bits);
        let mid = CertifiedReal::exact(x.mid().clone(), bits);
        let fm = mid.pow_u(n as u64) - &cc;
        let dbox = box_.pow_u(n as u64 - 1).mul_int(&BigInt::from(n));
        let newton = mid - fm.div_ball(&dbox)?;
        Ok(newton.intersect(&box_).unwrap_or(newton))
    }

    #[test]
    fn refine_sqrt2() {
        let target = Dyadic::pow2(-20);
        let r = refine(|b| nth_root(2, 2, b), &target, 4096).unwrap();
        assert!(r.width() <= target);
        assert!(r.contains(&Dyadic::from_f64(1.4142135623730951)) || r.to_f64() == 1.4142135623730951);
        assert!(r.lo() < Dyadic::from_f64(1.414213563) && r.hi() > Dyadic::from_f64(1.414213562));
    }

    #[test]
    fn refine_cube_root_of_seven() {
        let target = Dyadic::pow2(-30);
        let r = refine(|b| nth_root(7, 3, b), &target, 4096).unwrap();
        assert!(r.rad() <= &target);
        assert!(r.lo() < Dyadic::from_f64(1.91293119) && r.hi() > Dyadic::from_f64(1.91293118));
    }

    #[test]
    fn refine_zero_is_exact() {
        let r = refine(|b| Ok(CertifiedReal::zero(b)), &Dyadic::pow2(-100), 4096).unwrap();
        assert!(r.is_exact() && r.mid().is_zero());
    }

    #[test]
    fn policy_ladder_and_env() {
        assert_eq!(PrecisionPolicy::default().ladder(), vec![64, 128, 256, 512, 1024, 2048, 4096]);
        assert_eq!(PrecisionPolicy::new(64, 100).ladder(), vec![64, 100]);
        let r: Result<u32> = PrecisionPolicy::new(64, 256).run("t", |b| Ok((b >= 200).then_some(b)));
        assert_eq!(r.unwrap(), 256);
        let e: Result<u32> = PrecisionPolicy::new(64, 128).run("t", |_| Ok(None));
        assert!(matches!(e, Err(Error::PrecisionExhausted { bits: 128, .. })));
    }
}
