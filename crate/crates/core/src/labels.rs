//! Text labels for basis elements and the table record format.
//!
//! | family     | label                                   |
//! |------------|-----------------------------------------|
//! | spherical  | `G{d}` with `d` the distance (even in two-orbit mode) |
//! | iwahori    | `1`, `s`, `ts`, `i`, `ist`, …           |
//! | affine-end | `M{n}`; normal-form monomials as `1`, `[s]^a`, `[s*]^b`, `[s]^a[s*]^b` |
//! | sl2        | `0` or `a/p^n` written out, e.g. `2/25` |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::{MBasisIndex, Monomial};
use crate::coeff::{format_coefficient, parse_coefficient, Coefficient};
use crate::element::HeckeElement;
use crate::iwahori::ExtendedIndex;
use crate::sl2::{prime_base, PruferElement};
use crate::spherical::{SphericalIndex, SphericalParams};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LabelError {
    #[error("invalid {family} label `{label}`")]
    Bad { family: &'static str, label: String },
    #[error("coefficient `{0}` is not a reduced num/den")]
    Coefficient(String),
    #[error("unknown family `{0}`")]
    Family(String),
    #[error("invalid record: {0}")]
    Record(String),
}

fn bad(family: &'static str, label: &str) -> LabelError {
    LabelError::Bad {
        family,
        label: label.to_string(),
    }
}

fn parse_u32(digits: &str) -> Option<u32> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "spherical")]
    Spherical,
    #[serde(rename = "iwahori")]
    Iwahori,
    #[serde(rename = "affine-end")]
    AffineEnd,
    #[serde(rename = "sl2")]
    Sl2,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Spherical => "spherical",
            Family::Iwahori => "iwahori",
            Family::AffineEnd => "affine-end",
            Family::Sl2 => "sl2",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, LabelError> {
        match s {
            "spherical" => Ok(Family::Spherical),
            "iwahori" => Ok(Family::Iwahori),
            "affine-end" | "affine" => Ok(Family::AffineEnd),
            "sl2" => Ok(Family::Sl2),
            _ => Err(LabelError::Family(s.to_string())),
        }
    }
}

pub fn format_spherical(n: SphericalIndex, p: &SphericalParams) -> String {
    format!("G{}", n.distance(p))
}

pub fn parse_spherical(s: &str, p: &SphericalParams) -> Result<SphericalIndex, LabelError> {
    let d = s
        .strip_prefix('G')
        .and_then(parse_u32)
        .ok_or_else(|| bad("spherical", s))?;
    if d % p.step() != 0 {
        return Err(bad("spherical", s));
    }
    Ok(SphericalIndex(d / p.step()))
}

pub fn format_m(n: MBasisIndex) -> String {
    n.to_string()
}

pub fn parse_m(s: &str) -> Result<MBasisIndex, LabelError> {
    s.strip_prefix('M')
        .and_then(parse_u32)
        .map(MBasisIndex)
        .ok_or_else(|| bad("affine-end", s))
}

pub fn parse_monomial(s: &str) -> Result<Monomial, LabelError> {
    if s == "1" {
        return Ok(Monomial::UNIT);
    }
    let err = || bad("affine-end", s);
    let mut rest = s;
    let mut power = |prefix: &str| -> Result<Option<u32>, LabelError> {
        match rest.strip_prefix(prefix) {
            None => Ok(None),
            Some(tail) => {
                let end = tail
                    .find(|c: char| !c.is_ascii_digit())
                    .unwrap_or(tail.len());
                let n = parse_u32(&tail[..end]).filter(|&n| n > 0).ok_or_else(err)?;
                rest = &tail[end..];
                Ok(Some(n))
            }
        }
    };
    let a = power("[s]^")?;
    let b = power("[s*]^")?;
    if !rest.is_empty() || (a.is_none() && b.is_none()) {
        return Err(err());
    }
    Ok(Monomial::new(a.unwrap_or(0), b.unwrap_or(0)))
}

pub fn parse_iwahori(s: &str) -> Result<ExtendedIndex, LabelError> {
    s.parse().map_err(|_| bad("iwahori", s))
}

pub fn parse_sl2(s: &str, p: u64) -> Result<PruferElement, LabelError> {
    PruferElement::parse(s, p).map_err(|_| bad("sl2", s))
}

/// Checks a label's syntax without family parameters.
pub fn check_label(family: Family, s: &str) -> Result<(), LabelError> {
    match family {
        Family::Spherical => {
            s.strip_prefix('G')
                .and_then(parse_u32)
                .ok_or_else(|| bad("spherical", s))?;
        }
        Family::Iwahori => {
            parse_iwahori(s)?;
        }
        Family::AffineEnd => {
            if parse_m(s).is_err() {
                parse_monomial(s)?;
            }
        }
        Family::Sl2 => {
            // The prime is read off the denominator and the label must be
            // in reduced form.
            let canonical = s == "0"
                || s.split_once('/')
                    .and_then(|(_, d)| d.parse::<u64>().ok())
                    .and_then(prime_base)
                    .and_then(|p| PruferElement::parse(s, p).ok())
                    .is_some_and(|e| e.to_string() == s);
            if !canonical {
                return Err(bad("sl2", s));
            }
        }
    }
    Ok(())
}

/// Parses a coefficient and insists it is already in canonical `num/den`
/// form.
pub fn parse_canonical_coefficient(s: &str) -> Result<Coefficient, LabelError> {
    let c = parse_coefficient(s).map_err(|_| LabelError::Coefficient(s.to_string()))?;
    if format_coefficient(&c) != s {
        return Err(LabelError::Coefficient(s.to_string()));
    }
    Ok(c)
}

/// One product `left · right = Σ c·label`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputRecord {
    pub family: Family,
    pub key: (String, String),
    pub value: Vec<(String, String)>,
}

impl OutputRecord {
    pub fn new<B: Ord + Clone>(
        family: Family,
        left: String,
        right: String,
        value: &HeckeElement<B>,
        label: impl Fn(&B) -> String,
    ) -> Self {
        Self {
            family,
            key: (left, right),
            value: value
                .iter()
                .map(|(b, c)| (label(b), format_coefficient(c)))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    /// Parses one JSON record and checks every label and coefficient.
    pub fn from_json(s: &str) -> Result<Self, LabelError> {
        let r: Self = serde_json::from_str(s).map_err(|e| LabelError::Record(e.to_string()))?;
        r.validate()?;
        Ok(r)
    }

    pub fn csv_header() -> &'static str {
        "family,left,right,value"
    }

    pub fn to_csv(&self) -> String {
        let value: Vec<String> = self.value.iter().map(|(l, c)| format!("{l}:{c}")).collect();
        format!(
            "{},{},{},{}",
            self.family,
            self.key.0,
            self.key.1,
            value.join(" ")
        )
    }

    pub fn from_csv(line: &str) -> Result<Self, LabelError> {
        let fields: Vec<&str> = line.split(',').collect();
        let [family, left, right, value] = fields[..] else {
            return Err(LabelError::Record(format!("expected 4 fields in `{line}`")));
        };
        let value = value
            .split(' ')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.split_once(':')
                    .map(|(l, c)| (l.to_string(), c.to_string()))
                    .ok_or_else(|| LabelError::Record(format!("bad term `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let r = Self {
            family: family.parse()?,
            key: (left.to_string(), right.to_string()),
            value,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<(), LabelError> {
        check_label(self.family, &self.key.0)?;
        check_label(self.family, &self.key.1)?;
        for (l, c) in &self.value {
            check_label(self.family, l)?;
            let c = parse_canonical_coefficient(c)?;
            if num_traits::Zero::is_zero(&c) {
                return Err(LabelError::Coefficient("0/1".into()));
            }
        }
        Ok(())
    }

    /// The value as an element, relabelled through `parse`.
    pub fn element<B: Ord + Clone>(
        &self,
        parse: impl Fn(&str) -> Result<B, LabelError>,
    ) -> Result<HeckeElement<B>, LabelError> {
        self.value
            .iter()
            .map(|(l, c)| Ok((parse(l)?, parse_canonical_coefficient(c)?)))
            .collect()
    }
}
