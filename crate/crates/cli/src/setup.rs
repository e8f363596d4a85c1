//! Field, element and unit resolution shared by the subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use serde::Deserialize;

use unit_twist_core::exactnum::PrecisionPolicy;
use unit_twist_core::numfield::{AlgebraicField, FieldDef, FieldElement, FieldOptions};
use unit_twist_core::unitgrp::{biquadratic_family_with, cubic_family_with, UnitBasis};

use crate::config::ExperimentConfig;
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Cubic,
    Biquadratic,
}

#[derive(Args, Clone, Debug, Default)]
pub struct FieldArgs {
    /// Field definition JSON: {"coeffs": [...], "attest_irreducible": bool,
    /// "identity_embedding": index}, optionally with "alpha" and "units".
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Built-in unit family.
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// Family parameter.
    #[arg(long = "D", short = 'D')]
    pub d: Option<i64>,
    /// Integer coefficients, highest degree first, e.g. "1,0,-2".
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Power-basis coordinates of alpha; the generator by default.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Unit basis as ';'-separated coordinate lists.
    #[arg(long, allow_hyphen_values = true)]
    pub units: Option<String>,
}

/// A field definition file with optional experiment extras.
#[derive(Deserialize)]
struct FieldFile {
    #[serde(flatten)]
    def: FieldDef,
    alpha: Option<Vec<String>>,
    units: Option<Vec<Vec<String>>>,
}

pub struct Setup {
    pub label: String,
    pub field: AlgebraicField,
    pub alpha: FieldElement,
    /// Named basis units; empty when none was given.
    pub units: Vec<(String, FieldElement)>,
}

impl Setup {
    pub fn basis(&self) -> Result<UnitBasis, CliError> {
        let units = self.units.iter().map(|(_, u)| u.clone()).collect();
        Ok(UnitBasis::new(&self.field, units)?)
    }

    pub fn unit(&self, index: usize) -> Result<&FieldElement, CliError> {
        self.units
            .get(index)
            .map(|(_, u)| u)
            .ok_or_else(|| CliError::usage(format!("no unit with index {index}; give --family or --units")))
    }

    /// `"n"` raises the unit at `index` to `n`; `"b1,...,br"` multiplies the
    /// whole basis.
    pub fn unit_power(&self, spec: &str, index: usize) -> Result<(String, FieldElement), CliError> {
        let exps = parse_i64_list(spec)?;
        if exps.len() == 1 {
            let (name, u) = self
                .units
                .get(index)
                .ok_or_else(|| CliError::usage(format!("no unit with index {index}; give --family or --units")))?;
            return Ok((format!("{name}^{}", exps[0]), u.pow(exps[0])?));
        }
        if exps.len() != self.units.len() {
            return Err(CliError::usage(format!(
                "{} exponents for a basis of {} units",
                exps.len(),
                self.units.len()
            )));
        }
        let mut e = FieldElement::one(&self.field);
        for ((_, u), &b) in self.units.iter().zip(&exps) {
            e = e.mul(&u.pow(b)?)?;
        }
        Ok((format!("({spec})"), e))
    }
}

pub fn policy(args_max: Option<u32>, cfg: &ExperimentConfig) -> PrecisionPolicy {
    match args_max.or(cfg.precision.max_bits) {
        Some(bits) => PrecisionPolicy::with_max_bits(bits),
        None => PrecisionPolicy::from_env(),
    }
}

pub fn resolve(args: &FieldArgs, cfg: &ExperimentConfig, policy: PrecisionPolicy) -> Result<Setup, CliError> {
    let opts = || FieldOptions {
        policy: Some(policy),
        ..FieldOptions::default()
    };
    let family = match args.family {
        Some(f) => Some(f),
        None => match cfg.field.family.as_deref() {
            None => None,
            Some("cubic") => Some(FamilyKind::Cubic),
            Some("biquadratic") => Some(FamilyKind::Biquadratic),
            Some(other) => return Err(CliError::usage(format!("config [field] family: unknown {other:?}"))),
        },
    };
    let path = args.field.clone().or_else(|| cfg.field.path.clone());
    let poly = match &args.poly {
        Some(s) => Some(parse_i64_list(s)?),
        None => cfg.field.poly.clone(),
    };
    let sources = [family.is_some(), path.is_some(), poly.is_some()].iter().filter(|&&b| b).count();
    if sources > 1 {
        return Err(CliError::usage("give exactly one of --family, --field, --poly"));
    }
    let mut setup = if let Some(kind) = family {
        let d = args.d.or(cfg.field.d).unwrap_or(2);
        match kind {
            FamilyKind::Cubic => {
                let c = cubic_family_with(d, opts())?;
                Setup {
                    label: format!("cubic D={d}"),
                    alpha: c.omega(),
                    units: vec![("eps0".into(), c.eps0)],
                    field: c.field,
                }
            }
            FamilyKind::Biquadratic => {
                let c = biquadratic_family_with(d, opts())?;
                Setup {
                    label: format!("biquadratic D={d}"),
                    alpha: c.omega(),
                    units: vec![("eps1".into(), c.eps1), ("eps2".into(), c.eps2)],
                    field: c.field,
                }
            }
        }
    } else if let Some(path) = path {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        let file: FieldFile = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        let field = AlgebraicField::with_options(
            &file.def.coeffs,
            FieldOptions {
                attest_irreducible: file.def.attest_irreducible,
                identity_embedding: file.def.identity_embedding,
                policy: Some(policy),
            },
        )?;
        let alpha = match &file.alpha {
            Some(c) => FieldElement::from_strings(&field, c)?,
            None => FieldElement::generator(&field),
        };
        let units = file
            .units
            .unwrap_or_default()
            .iter()
            .enumerate()
            .map(|(i, c)| Ok((format!("u{}", i + 1), FieldElement::from_strings(&field, c)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        Setup {
            label: path.display().to_string(),
            alpha,
            units,
            field,
        }
    } else if let Some(coeffs) = poly {
        let coeffs: Vec<BigInt> = coeffs.into_iter().map(BigInt::from).collect();
        let field = AlgebraicField::with_options(&coeffs, opts())?;
        Setup {
            label: field.polynomial_string(),
            alpha: FieldElement::generator(&field),
            units: Vec::new(),
            field,
        }
    } else {
        return Err(CliError::usage("no field: give --family, --field or --poly"));
    };
    if let Some(a) = args.alpha.as_deref() {
        setup.alpha = element(&setup.field, a)?;
    } else if let Some(a) = &cfg.field.alpha {
        setup.alpha = FieldElement::from_strings(&setup.field, a)?;
    }
    let explicit: Option<Vec<Vec<String>>> = match &args.units {
        Some(s) => Some(s.split(';').map(split_list).collect()),
        None => cfg.field.units.clone(),
    };
    if let Some(list) = explicit {
        setup.units = list
            .iter()
            .enumerate()
            .map(|(i, c)| Ok((format!("u{}", i + 1), FieldElement::from_strings(&setup.field, c)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
    }
    Ok(setup)
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}

pub fn element(field: &AlgebraicField, coords: &str) -> Result<FieldElement, CliError> {
    Ok(FieldElement::from_strings(field, &split_list(coords))?)
}

pub fn parse_i64_list(s: &str) -> Result<Vec<i64>, CliError> {
    let items = split_list(s);
    if items.is_empty() {
        return Err(CliError::usage(format!("empty integer list {s:?}")));
    }
    items
        .iter()
        .map(|t| t.parse::<i64>().map_err(|_| CliError::usage(format!("not an integer: {t:?}"))))
        .collect()
}

/// `"a..b"` or `"a..=b"`, both inclusive, or a single integer.
pub fn parse_range(s: &str) -> Result<Vec<i64>, CliError> {
    let bad = || CliError::usage(format!("bad range {s:?}; expected a..b"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let lo: i64 = lo.parse().map_err(|_| bad())?;
    let hi: i64 = hi.parse().map_err(|_| bad())?;
    if hi < lo {
        return Err(bad());
    }
    if hi - lo > 100_000 {
        return Err(CliError::usage(format!("range {s:?} is too long")));
    }
    Ok((lo..=hi).collect())
}

/// Write to `out`, or stdout when absent.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut o = std::io::stdout().lock();
            o.write_all(text.as_bytes())?;
            o.flush()?;
            Ok(())
        }
    }
}

/// Prefix a CSV body with a timestamp comment line unless disabled.
pub fn stamp(body: String, timestamp: bool) -> String {
    if timestamp {
        format!("# generated_at={}\n{body}", chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true))
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_range("0..=1").unwrap(), vec![0, 1]);
        assert_eq!(parse_range("5").unwrap(), vec![5]);
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_i64_list("1, 0,-2").unwrap(), vec![1, 0, -2]);
        assert!(parse_i64_list("").is_err());
        assert!(parse_i64_list("1,x").is_err());
    }
}
