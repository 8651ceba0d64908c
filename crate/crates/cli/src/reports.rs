//! JSON reports for the `ktheory` and `nu` commands.

use serde::Serialize;

use hecketree::affine::{toeplitz_alpha_star, toeplitz_bratteli};
use hecketree::ktheory::{pv_k_groups, truncated_limit, BratteliDiagram, LimitReport, PvGroups};
use hecketree::sl2::double_cosets;
use hecketree::{Family, OutputRecord};

use crate::families::sl2_algebra;
use crate::Invalid;

#[derive(Debug, Serialize)]
pub struct KGroups {
    #[serde(flatten)]
    pub groups: PvGroups,
    /// `K_0` and `K_1` written out, e.g. `Z` and `0`.
    pub k0_display: String,
    pub k1_display: String,
}

impl From<PvGroups> for KGroups {
    fn from(groups: PvGroups) -> Self {
        let k1_display = match groups.k1_rank {
            0 => "0".to_string(),
            1 => "Z".to_string(),
            n => format!("Z^{n}"),
        };
        Self {
            k0_display: groups.k0.to_string(),
            k1_display,
            groups,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct KTheoryReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub example: Option<&'static str>,
    pub limit: LimitReport,
    /// Present when the diagram carries an `alpha` matrix.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pv: Option<KGroups>,
}

pub fn ktheory(text: &str, levels: Option<usize>) -> Result<KTheoryReport, Invalid> {
    let d = BratteliDiagram::from_json(text)?;
    let k = levels.unwrap_or(d.levels().len() - 1);
    let limit = truncated_limit(&d, k)?;
    let pv = d.alpha().map(pv_k_groups).transpose()?.map(KGroups::from);
    Ok(KTheoryReport {
        example: None,
        limit,
        pv,
    })
}

/// Eventually constant sequences truncated at level `k`, with the shift
/// induced by the isometry on the minimal projections of that level.
pub fn toeplitz(k: usize) -> Result<KTheoryReport, Invalid> {
    let d = toeplitz_bratteli(k + 1);
    let limit = truncated_limit(&d, k)?;
    let pv = pv_k_groups(&toeplitz_alpha_star(d.rank(k)))?;
    Ok(KTheoryReport {
        example: Some("toeplitz"),
        limit,
        pv: Some(pv.into()),
    })
}

#[derive(Debug, Serialize)]
pub struct CosetEntry {
    pub representative: String,
    pub orbit: Vec<String>,
    pub size: usize,
}

#[derive(Debug, Serialize)]
pub struct NuReport {
    pub p: u64,
    pub depth: u32,
    pub cosets: Vec<CosetEntry>,
    pub table: Vec<OutputRecord>,
}

pub fn nu(p: u64, depth: u32) -> Result<NuReport, Invalid> {
    let h = sl2_algebra(p, depth)?;
    let cosets = double_cosets(p, depth)?;
    let mut table = Vec::with_capacity(cosets.len() * cosets.len());
    for a in &cosets {
        for b in &cosets {
            let v = h.multiply(a.representative(), b.representative())?;
            table.push(OutputRecord::new(
                Family::Sl2,
                a.to_string(),
                b.to_string(),
                &v,
                ToString::to_string,
            ));
        }
    }
    Ok(NuReport {
        p,
        depth,
        cosets: cosets
            .iter()
            .map(|c| CosetEntry {
                representative: c.to_string(),
                orbit: c.orbit().iter().map(ToString::to_string).collect(),
                size: c.size(),
            })
            .collect(),
        table,
    })
}
