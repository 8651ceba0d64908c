//! Parameter handling, table generation and single products per family.

use serde::Serialize;

use hecketree::affine::{
    self, AffineEnd, EventuallyConstantSeq, MBasisIndex, Monomial, Toeplitz, ToeplitzNF,
};
use hecketree::iwahori::{self, ExtendedIndex, IwahoriParams};
use hecketree::labels::{
    self, format_m, format_spherical, parse_iwahori, parse_monomial, parse_sl2,
};
use hecketree::sl2::{double_cosets, Sl2Hecke};
use hecketree::spherical::{self, SphericalIndex, SphericalParams};
use hecketree::{Family, HeckeElement, OutputRecord};

use crate::{Format, Invalid, IwahoriArgs, MulFamily, SphericalArgs, Sweep};

pub fn spherical_params(a: &SphericalArgs) -> Result<SphericalParams, Invalid> {
    Ok(match (a.q, a.q0, a.q1) {
        (Some(q), None, None) => SphericalParams::homogeneous(q)?,
        (None, Some(q0), Some(q1)) => SphericalParams::two_orbit(q0, q1)?,
        _ => return Err(Invalid("give either --q or both --q0 and --q1".into())),
    })
}

pub fn iwahori_params(a: &IwahoriArgs, extended: bool) -> Result<IwahoriParams, Invalid> {
    let p = IwahoriParams::new(a.qs, a.qt)?;
    if extended && !p.admits_inversion() {
        return Err(Invalid(format!(
            "--extended needs qs = qt (got qs={}, qt={})",
            a.qs, a.qt
        )));
    }
    Ok(p)
}

pub fn sl2_algebra(p: u64, depth: u32) -> Result<Sl2Hecke, Invalid> {
    Ok(Sl2Hecke::with_max_depth(p, depth.max(1))?)
}

fn pairs<T: Clone>(items: &[T]) -> impl Iterator<Item = (T, T)> + '_ {
    items
        .iter()
        .flat_map(move |a| items.iter().map(move |b| (a.clone(), b.clone())))
}

pub fn table(sweep: &Sweep) -> Result<Vec<OutputRecord>, Invalid> {
    match sweep {
        Sweep::Spherical { params, max } => {
            let p = spherical_params(params)?;
            let idx: Vec<SphericalIndex> = (0..=*max).map(SphericalIndex).collect();
            Ok(pairs(&idx)
                .map(|(n, m)| {
                    let v = spherical::multiply_closed(n, m, &p);
                    OutputRecord::new(
                        Family::Spherical,
                        format_spherical(n, &p),
                        format_spherical(m, &p),
                        &v,
                        |k| format_spherical(*k, &p),
                    )
                })
                .collect())
        }
        Sweep::Iwahori {
            params,
            len,
            extended,
        } => {
            let p = iwahori_params(params, *extended)?;
            let words = ExtendedIndex::all_up_to(*len, *extended);
            pairs(&words)
                .map(|(a, b)| {
                    let v = iwahori::multiply_closed_extended(&a, &b, &p)?;
                    Ok(iwahori_record(&a, &b, &v))
                })
                .collect()
        }
        Sweep::Affine {
            q,
            max,
            normal_form: false,
            ..
        } => {
            AffineEnd::new(*q)?;
            let idx: Vec<MBasisIndex> = (0..=*max).map(MBasisIndex).collect();
            Ok(pairs(&idx)
                .map(|(m, n)| {
                    let v = affine::m_multiply(m, n, *q);
                    OutputRecord::new(Family::AffineEnd, format_m(m), format_m(n), &v, |k| {
                        format_m(*k)
                    })
                })
                .collect())
        }
        Sweep::Affine {
            q,
            max,
            normal_form: true,
            ..
        } => {
            let provider = Toeplitz::new(*q)?;
            let monomials: Vec<Monomial> = (0..=*max)
                .flat_map(|a| (0..=*max).map(move |b| Monomial::new(a, b)))
                .collect();
            Ok(pairs(&monomials)
                .map(|(x, y)| {
                    let v = HeckeElement::basis(x).multiply(&HeckeElement::basis(y), &provider);
                    monomial_record(&x.to_string(), &y.to_string(), &v)
                })
                .collect())
        }
        Sweep::Sl2 { p, depth } => {
            let h = sl2_algebra(*p, *depth)?;
            let cosets = double_cosets(*p, *depth)?;
            pairs(&cosets)
                .map(|(a, b)| {
                    let v = h.multiply(a.representative(), b.representative())?;
                    Ok(OutputRecord::new(
                        Family::Sl2,
                        a.to_string(),
                        b.to_string(),
                        &v,
                        ToString::to_string,
                    ))
                })
                .collect()
        }
    }
}

fn iwahori_record(
    a: &ExtendedIndex,
    b: &ExtendedIndex,
    v: &HeckeElement<ExtendedIndex>,
) -> OutputRecord {
    OutputRecord::new(
        Family::Iwahori,
        a.to_string(),
        b.to_string(),
        v,
        ToString::to_string,
    )
}

fn monomial_record(left: &str, right: &str, v: &HeckeElement<Monomial>) -> OutputRecord {
    OutputRecord::new(
        Family::AffineEnd,
        left.into(),
        right.into(),
        v,
        ToString::to_string,
    )
}

/// Reads an affine label as an element of the Toeplitz normal form, along
/// with its canonical spelling.
fn affine_operand(s: &str, q: u64) -> Result<(String, ToeplitzNF), Invalid> {
    match labels::parse_m(s) {
        Ok(m) => Ok((format_m(m), affine::m_to_nf(m, q))),
        Err(_) => {
            let mono = parse_monomial(s)?;
            Ok((mono.to_string(), ToeplitzNF::monomial(q, mono.a, mono.b)?))
        }
    }
}

pub fn mul(family: &MulFamily) -> Result<OutputRecord, Invalid> {
    match family {
        MulFamily::Spherical {
            params,
            left,
            right,
        } => {
            let p = spherical_params(params)?;
            let n = labels::parse_spherical(left, &p)?;
            let m = labels::parse_spherical(right, &p)?;
            let v = spherical::multiply_closed(n, m, &p);
            Ok(OutputRecord::new(
                Family::Spherical,
                format_spherical(n, &p),
                format_spherical(m, &p),
                &v,
                |k| format_spherical(*k, &p),
            ))
        }
        MulFamily::Iwahori {
            params,
            left,
            right,
        } => {
            let p = iwahori_params(params, false)?;
            let a = parse_iwahori(left)?;
            let b = parse_iwahori(right)?;
            let v = iwahori::multiply_closed_extended(&a, &b, &p)?;
            Ok(iwahori_record(&a, &b, &v))
        }
        MulFamily::Affine { q, left, right } => {
            AffineEnd::new(*q)?;
            if let (Ok(m), Ok(n)) = (labels::parse_m(left), labels::parse_m(right)) {
                let v = affine::m_multiply(m, n, *q);
                return Ok(OutputRecord::new(
                    Family::AffineEnd,
                    format_m(m),
                    format_m(n),
                    &v,
                    |k| format_m(*k),
                ));
            }
            let (lx, x) = affine_operand(left, *q)?;
            let (ly, y) = affine_operand(right, *q)?;
            let v = affine::nf_multiply(&x, &y)?;
            Ok(monomial_record(&lx, &ly, v.terms()))
        }
        MulFamily::Sl2 { p, left, right } => {
            let u = parse_sl2(left, *p)?;
            let u2 = parse_sl2(right, *p)?;
            let h = sl2_algebra(*p, u.depth().max(u2.depth()))?;
            let v = h.multiply(&u, &u2)?;
            Ok(OutputRecord::new(
                Family::Sl2,
                u.to_string(),
                u2.to_string(),
                &v,
                ToString::to_string,
            ))
        }
    }
}

#[derive(Serialize)]
struct SequenceRow {
    key: (String, String),
    left: EventuallyConstantSeq,
    right: EventuallyConstantSeq,
    product: EventuallyConstantSeq,
}

/// The M_n table read through the sequence isomorphism, one JSON object per
/// line. The product sequence is the coordinatewise product of the factors.
pub fn sequence_table(q: u64, max: u32) -> Result<String, Invalid> {
    AffineEnd::new(q)?;
    let idx: Vec<MBasisIndex> = (0..=max).map(MBasisIndex).collect();
    let seq = |m: MBasisIndex| affine::to_sequence(&HeckeElement::basis(m), q);
    let mut out = String::new();
    for (m, n) in pairs(&idx) {
        let row = SequenceRow {
            key: (format_m(m), format_m(n)),
            left: seq(m),
            right: seq(n),
            product: affine::to_sequence(&affine::m_multiply(m, n, q), q),
        };
        out.push_str(&serde_json::to_string(&row)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn render(records: &[OutputRecord], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            for r in records {
                out.push_str(&r.to_json());
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str(OutputRecord::csv_header());
            out.push('\n');
            for r in records {
                out.push_str(&r.to_csv());
                out.push('\n');
            }
        }
    }
    out
}
