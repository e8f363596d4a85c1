use std::fmt;

use serde::{Deserialize, Serialize};

use super::real::CertifiedReal;

/// Outcome of comparing two enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Holds,
    Fails,
    Undecided,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "HOLDS",
            Verdict::Fails => "FAILS",
            Verdict::Undecided => "UNDECIDED",
        }
    }

    pub fn is_decided(self) -> bool {
        self != Verdict::Undecided
    }

    pub fn not(self) -> Verdict {
        match self {
            Verdict::Holds => Verdict::Fails,
            Verdict::Fails => Verdict::Holds,
            Verdict::Undecided => Verdict::Undecided,
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
            (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
            _ => Verdict::Undecided,
        }
    }

    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Verdict {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "HOLDS" => Ok(Verdict::Holds),
            "FAILS" => Ok(Verdict::Fails),
            "UNDECIDED" => Ok(Verdict::Undecided),
            other => Err(crate::error::Error::Parse(format!("unknown verdict {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Gt,
    Ge,
}

/// Decide `a rel b` for every pair of points in the two enclosures.
pub fn certify(a: &CertifiedReal, rel: Relation, b: &CertifiedReal) -> Verdict {
    match rel {
        Relation::Lt => {
            if a.hi() < b.lo() {
                Verdict::Holds
            } else if a.lo() >= b.hi() {
                Verdict::Fails
            } else {
                Verdict::Undecided
            }
        }
        Relation::Le => {
            if a.hi() <= b.lo() {
                Verdict::Holds
            } else if a.lo() > b.hi() {
                Verdict::Fails
            } else {
                Verdict::Undecided
            }
        }
        Relation::Gt => certify(b, Relation::Lt, a),
        Relation::Ge => certify(b, Relation::Le, a),
    }
}

/// The claim `a < b`.
pub fn certify_compare(a: &CertifiedReal, b: &CertifiedReal) -> Verdict {
    certify(a, Relation::Lt, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Dyadic;

    fn ball(c: f64, r: f64) -> CertifiedReal {
        CertifiedReal::new(Dyadic::from_f64(c), Dyadic::from_f64(r), 64)
    }

    #[test]
    fn compare_examples() {
        assert_eq!(certify_compare(&ball(1.0, 0.1), &ball(2.0, 0.1)), Verdict::Holds);
        assert_eq!(certify_compare(&ball(1.0, 0.0), &ball(1.0, 0.0)), Verdict::Fails);
        assert_eq!(certify_compare(&ball(1.0, 0.5), &ball(1.2, 0.5)), Verdict::Undecided);
    }

    #[test]
    fn non_strict_relations() {
        let one = ball(1.0, 0.0);
        assert_eq!(certify(&one, Relation::Le, &one), Verdict::Holds);
        assert_eq!(certify(&one, Relation::Ge, &one), Verdict::Holds);
        assert_eq!(certify(&one, Relation::Gt, &one), Verdict::Fails);
        assert_eq!(certify(&ball(3.0, 0.5), Relation::Gt, &ball(1.0, 0.5)), Verdict::Holds);
    }

    #[test]
    fn verdict_strings_roundtrip() {
        for v in [Verdict::Holds, Verdict::Fails, Verdict::Undecided] {
            assert_eq!(v.as_str().parse::<Verdict>().unwrap(), v);
        }
    }
}
