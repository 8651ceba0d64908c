//! Verification sweeps: every product in a table is recomputed by counting
//! in a tree ball (or, for SL2, by convolving orbits directly) and compared
//! exactly. Cells run in parallel; results are gathered in cell order.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use hecketree::affine::{self, MBasisIndex};
use hecketree::coeff::from_int;
use hecketree::iwahori::{self, ExtendedIndex};
use hecketree::labels::{format_m, format_spherical};
use hecketree::sl2::{double_cosets, prufer_add, OrbitCoset};
use hecketree::spherical::{self, SphericalIndex, SphericalParams};
use hecketree::tree::{EdgeOracle, HorocycleOracle, TreeBall, TreeError};
use hecketree::{Family, HeckeElement, OutputRecord};

use crate::families::{iwahori_params, sl2_algebra, spherical_params};
use crate::{Invalid, Sweep};

#[derive(Debug, Serialize)]
pub struct Mismatch {
    pub key: (String, String),
    /// Which computation disagreed with the reference.
    pub method: &'static str,
    pub expected: Vec<(String, String)>,
    pub got: Vec<(String, String)>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub family: Family,
    pub params: Value,
    pub reference: &'static str,
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
    pub status: &'static str,
}

fn values<B: Ord + Clone>(
    v: &HeckeElement<B>,
    label: impl Fn(&B) -> String,
) -> Vec<(String, String)> {
    OutputRecord::new(Family::Spherical, String::new(), String::new(), v, label).value
}

/// Compares each candidate against the reference for one cell.
fn compare<B: Ord + Clone>(
    key: (String, String),
    reference: &HeckeElement<B>,
    candidates: &[(&'static str, HeckeElement<B>)],
    label: impl Fn(&B) -> String + Copy,
) -> Vec<Mismatch> {
    candidates
        .iter()
        .filter(|(_, got)| got != reference)
        .map(|(method, got)| Mismatch {
            key: key.clone(),
            method,
            expected: values(reference, label),
            got: values(got, label),
        })
        .collect()
}

fn grid(max: u32) -> Vec<(u32, u32)> {
    (0..=max)
        .flat_map(|a| (0..=max).map(move |b| (a, b)))
        .collect()
}

fn flatten(cells: Vec<Vec<Mismatch>>) -> Vec<Mismatch> {
    cells.into_iter().flatten().collect()
}

pub fn run(sweep: &Sweep, budget: usize) -> Result<Report, Invalid> {
    let (family, params, reference, checked, mismatches) = match sweep {
        Sweep::Spherical { params, max } => {
            let p = spherical_params(params)?;
            let (q0, q1) = p.branching();
            let step = p.step();
            let ball = TreeBall::build_with_budget(q0, q1, 2 * max * step, budget)?;
            let cells = grid(*max);
            let label = |k: &SphericalIndex| format_spherical(*k, &p);
            let found = cells
                .par_iter()
                .map(|&(n, m)| {
                    let oracle = (0..=n + m)
                        .map(|k| {
                            let c = ball.spherical_constant(n * step, m * step, k * step)?;
                            Ok((SphericalIndex(k), from_int(c)))
                        })
                        .collect::<Result<HeckeElement<_>, TreeError>>()?;
                    let (n, m) = (SphericalIndex(n), SphericalIndex(m));
                    Ok(compare(
                        (label(&n), label(&m)),
                        &oracle,
                        &[
                            ("closed-form", spherical::multiply_closed(n, m, &p)),
                            ("recursive", spherical::multiply_recursive(n, m, &p)),
                        ],
                        label,
                    ))
                })
                .collect::<Result<Vec<_>, TreeError>>()?;
            let params = match p {
                SphericalParams::Homogeneous { q } => json!({ "q": q, "max": max }),
                SphericalParams::TwoOrbit { q0, q1 } => json!({ "q0": q0, "q1": q1, "max": max }),
            };
            (
                Family::Spherical,
                params,
                "vertex counting",
                2 * cells.len(),
                flatten(found),
            )
        }
        Sweep::Iwahori {
            params,
            len,
            extended,
        } => {
            let p = iwahori_params(params, *extended)?;
            let ball = TreeBall::build_with_budget(params.qs, params.qt, 2 * len + 1, budget)?;
            let oracle = EdgeOracle::new(&ball, *extended)?;
            let words = ExtendedIndex::all_up_to(*len, *extended);
            let cells: Vec<(ExtendedIndex, ExtendedIndex)> = words
                .iter()
                .flat_map(|a| words.iter().map(move |b| (*a, *b)))
                .collect();
            let label = |u: &ExtendedIndex| u.to_string();
            let found = cells
                .par_iter()
                .map(|(a, b)| {
                    let targets = ExtendedIndex::all_up_to(a.word.len() + b.word.len(), *extended);
                    let counted = targets
                        .iter()
                        .map(|u| Ok((*u, from_int(oracle.iwahori_constant(a, b, u)?))))
                        .collect::<Result<HeckeElement<_>, TreeError>>()?;
                    let generators =
                        iwahori::multiply(a, b, &p).map_err(|e| Invalid(e.to_string()))?;
                    let closed = iwahori::multiply_closed_extended(a, b, &p)
                        .map_err(|e| Invalid(e.to_string()))?;
                    Ok(compare(
                        (a.to_string(), b.to_string()),
                        &counted,
                        &[("generator-rules", generators), ("closed-form", closed)],
                        label,
                    ))
                })
                .collect::<Result<Vec<_>, Invalid>>()?;
            let params =
                json!({ "qs": params.qs, "qt": params.qt, "len": len, "extended": extended });
            (
                Family::Iwahori,
                params,
                "weyl-distance counting",
                2 * cells.len(),
                flatten(found),
            )
        }
        Sweep::Affine {
            q,
            max,
            normal_form,
            sequences,
        } => {
            if *normal_form || *sequences {
                return Err(Invalid(
                    "verify affine compares the M_n table; drop --normal-form and --sequences"
                        .into(),
                ));
            }
            affine::AffineEnd::new(*q)?;
            let ball = TreeBall::build_with_budget(*q, *q, 2 * max.max(&1), budget)?;
            let oracle = HorocycleOracle::new(&ball)?;
            let cells = grid(*max);
            let label = |k: &MBasisIndex| format_m(*k);
            let found = cells
                .par_iter()
                .map(|&(m, n)| {
                    // Horocyclic distance is an ultrametric, so only classes
                    // up to max(m, n) can occur.
                    let counted = (0..=m.max(n))
                        .map(|k| {
                            Ok((
                                MBasisIndex(k),
                                from_int(oracle.horocycle_constant(m, n, k)?),
                            ))
                        })
                        .collect::<Result<HeckeElement<_>, TreeError>>()?;
                    let (m, n) = (MBasisIndex(m), MBasisIndex(n));
                    let table = affine::m_multiply(m, n, *q);
                    let via_nf =
                        affine::nf_multiply(&affine::m_to_nf(m, *q), &affine::m_to_nf(n, *q))
                            .map_err(|e| Invalid(e.to_string()))?;
                    let mut out = compare(
                        (label(&m), label(&n)),
                        &counted,
                        &[("m-table", table.clone())],
                        label,
                    );
                    if affine::m_element_to_nf(&table, *q) != via_nf {
                        out.push(Mismatch {
                            key: (label(&m), label(&n)),
                            method: "normal-form",
                            expected: values(
                                affine::m_element_to_nf(&table, *q).terms(),
                                ToString::to_string,
                            ),
                            got: values(via_nf.terms(), ToString::to_string),
                        });
                    }
                    Ok(out)
                })
                .collect::<Result<Vec<_>, Invalid>>()?;
            let params = json!({ "q": q, "max": max });
            (
                Family::AffineEnd,
                params,
                "horocycle counting",
                2 * cells.len(),
                flatten(found),
            )
        }
        Sweep::Sl2 { p, depth } => {
            let h = sl2_algebra(*p, *depth)?;
            let cosets = double_cosets(*p, *depth)?;
            let cells: Vec<(&OrbitCoset, &OrbitCoset)> = cosets
                .iter()
                .flat_map(|a| cosets.iter().map(move |b| (a, b)))
                .collect();
            let label = |c: &OrbitCoset| c.to_string();
            let found = cells
                .par_iter()
                .map(|&(a, b)| {
                    let counted = convolution_count(a, b, &cosets)?;
                    let got = h.multiply(a.representative(), b.representative())?;
                    Ok(compare(
                        (label(a), label(b)),
                        &counted,
                        &[("pullback", got)],
                        label,
                    ))
                })
                .collect::<Result<Vec<_>, Invalid>>()?;
            let params = json!({ "p": p, "depth": depth });
            (
                Family::Sl2,
                params,
                "orbit convolution count",
                cells.len(),
                flatten(found),
            )
        }
    };
    let status = if mismatches.is_empty() {
        "PASS"
    } else {
        "FAIL"
    };
    Ok(Report {
        family,
        params,
        reference,
        checked,
        mismatches,
        status,
    })
}

/// Coefficient of each coset `X` in `A·B`: the number of pairs in
/// `orbit(A) × orbit(B)` summing to the representative of `X`.
fn convolution_count(
    a: &OrbitCoset,
    b: &OrbitCoset,
    cosets: &[OrbitCoset],
) -> Result<HeckeElement<OrbitCoset>, Invalid> {
    let mut out = HeckeElement::zero();
    for x in cosets {
        let mut n = 0u64;
        for u in a.orbit() {
            for v in b.orbit() {
                if prufer_add(u, v)? == *x.representative() {
                    n += 1;
                }
            }
        }
        out.add_term(x.clone(), from_int(n));
    }
    Ok(out)
}
