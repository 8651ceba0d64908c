//! Integer linear algebra for K-groups of AF algebras and their crossed
//! products by `N`.
//!
//! The K_0 group of an AF algebra is the direct limit of `(Z^{n_k}, B_k)`
//! along its Bratteli diagram; for a crossed product by an endomorphism
//! `α` of such an algebra with trivial K_1, the Pimsner–Voiculescu
//! sequence collapses to `K_0 = coker(id − α_*)` and `K_1 = ker(id − α_*)`.
//! Everything here is exact: finite truncations of the limit are reported
//! stage by stage rather than summed symbolically.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KTheoryError {
    #[error("matrix data has {got} entries, expected {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        got: usize,
    },
    #[error("ragged matrix: row {row} has {got} entries, expected {expected}")]
    Ragged {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("cannot multiply {0}x{1} by {2}x{3}")]
    Incompatible(usize, usize, usize, usize),
    #[error(
        "diagram has {levels} levels but {maps} maps; expected one map between consecutive levels"
    )]
    MapCount { levels: usize, maps: usize },
    #[error("map {index} is {rows}x{cols}, expected {want_rows}x{want_cols}")]
    MapShape {
        index: usize,
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("map {index} has a negative entry")]
    NegativeEntry { index: usize },
    #[error("level {index} has a zero multiplicity or is empty")]
    BadLevel { index: usize },
    #[error("truncation level {k} exceeds the {available} levels provided")]
    TooFewLevels { k: usize, available: usize },
    #[error("alpha_* must have at least as many rows as columns (got {rows}x{cols})")]
    AlphaShape { rows: usize, cols: usize },
    #[error("invalid diagram JSON: {0}")]
    Json(String),
}

/// Dense matrix over `Z`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, KTheoryError> {
        if data.len() != rows * cols {
            return Err(KTheoryError::BadShape {
                rows,
                cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// From rows of machine integers. An empty row list gives a `0x0` matrix.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Result<Self, KTheoryError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(KTheoryError::Ragged {
                    row: i,
                    got: r.len(),
                    expected: cols,
                });
            }
            data.extend(r.iter().map(|&x| x.into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::inclusion(n, n)
    }

    /// `Z^cols → Z^rows` onto the first `cols` coordinates (`rows ≥ cols`).
    pub fn inclusion(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows.min(cols) {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, KTheoryError> {
        if self.cols != other.rows {
            return Err(KTheoryError::Incompatible(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, KTheoryError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(KTheoryError::Incompatible(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn determinant(&self) -> Option<BigInt> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Some(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Some(if n == 0 { sign } else { sign * prev })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k · row[src]`
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// `col[dst] += k · col[src]`
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "{}x{} {:?}", self.rows, self.cols, rows)
    }
}

/// Rows of numbers; entries outside the `i64` range become strings.
impl Serialize for IntegerMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<serde_json::Value> = self
                .row(i)
                .iter()
                .map(|x| match i64::try_from(x) {
                    Ok(v) => serde_json::Value::from(v),
                    Err(_) => serde_json::Value::from(x.to_string()),
                })
                .collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `d_i | d_{i+1}`,
/// `d_i ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form.
///
/// At each stage the pivot is the nonzero entry of least absolute value in
/// the remaining block, ties broken by the first in row-major order, so
/// `U` and `V` are reproducible.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(r);
    let mut v = IntegerMatrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = pivot(&d, t) else {
                return SmithForm { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let p = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let k = -d[(i, t)].div_floor(&p);
                d.add_row(i, t, &k);
                u.add_row(i, t, &k);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let k = -d[(t, j)].div_floor(&p);
                d.add_col(j, t, &k);
                v.add_col(j, t, &k);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // Force p to divide the rest of the block.
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    d.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v }
}

fn pivot(d: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with `d_i ≥ 2` and `d_i | d_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianGroupPresentation {
    pub free_rank: usize,
    #[serde(serialize_with = "serialize_factors")]
    pub invariant_factors: Vec<BigInt>,
}

fn serialize_factors<S: Serializer>(factors: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(factors.iter().map(ToString::to_string))
}

impl AbelianGroupPresentation {
    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }
}

impl fmt::Display for AbelianGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            n => parts.push(format!("Z^{n}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn cokernel(m: &IntegerMatrix) -> AbelianGroupPresentation {
    let snf = smith_normal_form(m);
    let diag = snf.diagonal();
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    AbelianGroupPresentation {
        free_rank: m.rows - rank,
        invariant_factors: diag.into_iter().filter(|x| *x > BigInt::one()).collect(),
    }
}

pub fn kernel_rank(m: &IntegerMatrix) -> usize {
    m.cols - smith_normal_form(m).rank()
}

/// Levels of multiplicity vectors joined by nonnegative integer matrices;
/// map `k` sends `Z^{n_k}` to `Z^{n_{k+1}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BratteliDiagram {
    levels: Vec<Vec<u64>>,
    maps: Vec<IntegerMatrix>,
    alpha: Option<IntegerMatrix>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDiagram {
    levels: Vec<Vec<u64>>,
    maps: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    alpha: Option<Vec<Vec<i64>>>,
}

impl BratteliDiagram {
    pub fn new(levels: Vec<Vec<u64>>, maps: Vec<IntegerMatrix>) -> Result<Self, KTheoryError> {
        if levels.len() != maps.len() + 1 {
            return Err(KTheoryError::MapCount {
                levels: levels.len(),
                maps: maps.len(),
            });
        }
        for (index, level) in levels.iter().enumerate() {
            if level.is_empty() || level.contains(&0) {
                return Err(KTheoryError::BadLevel { index });
            }
        }
        for (index, b) in maps.iter().enumerate() {
            let (want_rows, want_cols) = (levels[index + 1].len(), levels[index].len());
            if (b.rows, b.cols) != (want_rows, want_cols) {
                return Err(KTheoryError::MapShape {
                    index,
                    rows: b.rows,
                    cols: b.cols,
                    want_rows,
                    want_cols,
                });
            }
            if b.data.iter().any(Signed::is_negative) {
                return Err(KTheoryError::NegativeEntry { index });
            }
        }
        Ok(Self {
            levels,
            maps,
            alpha: None,
        })
    }

    /// Attaches the map induced on K_0 by the crossed-product endomorphism.
    pub fn with_alpha(mut self, alpha: IntegerMatrix) -> Self {
        self.alpha = Some(alpha);
        self
    }

    /// Parses `{"levels": [[n…]…], "maps": [[[b…]…]…]}` with an optional
    /// `"alpha"` matrix.
    pub fn from_json(s: &str) -> Result<Self, KTheoryError> {
        let raw: RawDiagram =
            serde_json::from_str(s).map_err(|e| KTheoryError::Json(e.to_string()))?;
        let maps = raw
            .maps
            .iter()
            .map(|m| IntegerMatrix::from_rows(m))
            .collect::<Result<Vec<_>, _>>()?;
        let mut d = Self::new(raw.levels, maps)?;
        if let Some(a) = raw.alpha {
            d.alpha = Some(IntegerMatrix::from_rows(&a)?);
        }
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        let mut obj = serde_json::json!({
            "levels": self.levels,
            "maps": self.maps,
        });
        if let Some(a) = &self.alpha {
            obj["alpha"] = serde_json::to_value(a).expect("matrix serializes");
        }
        obj.to_string()
    }

    pub fn levels(&self) -> &[Vec<u64>] {
        &self.levels
    }

    pub fn maps(&self) -> &[IntegerMatrix] {
        &self.maps
    }

    pub fn alpha(&self) -> Option<&IntegerMatrix> {
        self.alpha.as_ref()
    }

    pub fn rank(&self, k: usize) -> usize {
        self.levels[k].len()
    }

    /// Inserts a copy of level `k` right after it, joined by the identity.
    pub fn with_identity_level(&self, k: usize) -> Self {
        let mut levels = self.levels.clone();
        levels.insert(k + 1, self.levels[k].clone());
        let mut maps = self.maps.clone();
        maps.insert(k, IntegerMatrix::identity(self.rank(k)));
        Self {
            levels,
            maps,
            alpha: self.alpha.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageReport {
    pub level: usize,
    pub rank: usize,
    /// Composite of the connecting maps from level 0 to this level.
    pub composed: IntegerMatrix,
    pub cokernel: AbelianGroupPresentation,
    pub kernel_rank: usize,
    /// Whether the map into this level from the previous one is injective.
    pub injective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitReport {
    pub stages: Vec<StageReport>,
    /// Cokernels of the last two composites agree.
    pub stabilized: bool,
}

impl LimitReport {
    pub fn last(&self) -> &StageReport {
        self.stages.last().expect("report has at least level 0")
    }
}

/// Finite stages `0..=k` of the direct limit along the diagram.
pub fn truncated_limit(d: &BratteliDiagram, k: usize) -> Result<LimitReport, KTheoryError> {
    if k >= d.levels.len() {
        return Err(KTheoryError::TooFewLevels {
            k,
            available: d.levels.len(),
        });
    }
    let mut composed = IntegerMatrix::identity(d.rank(0));
    let mut stages = Vec::with_capacity(k + 1);
    for level in 0..=k {
        let injective = if level == 0 {
            true
        } else {
            let b = &d.maps[level - 1];
            composed = b.mul(&composed)?;
            kernel_rank(b) == 0
        };
        let snf = smith_normal_form(&composed);
        let rank = snf.rank();
        stages.push(StageReport {
            level,
            rank: d.rank(level),
            cokernel: cokernel(&composed),
            kernel_rank: composed.cols - rank,
            composed: composed.clone(),
            injective,
        });
    }
    let stabilized = stages.len() >= 2 && {
        let n = stages.len();
        stages[n - 1].cokernel == stages[n - 2].cokernel
    };
    Ok(LimitReport { stages, stabilized })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PvGroups {
    pub k0: AbelianGroupPresentation,
    pub k1_rank: usize,
}

/// `(coker(ι − α_*), rank ker(ι − α_*))` for `α_*: Z^n → Z^m`, `m ≥ n`,
/// where `ι` includes `Z^n` as the first `n` coordinates of `Z^m`. For a
/// square `α_*` this is the usual `id − α_*`; a taller matrix models an
/// endomorphism that moves a truncation one level up the limit.
pub fn pv_k_groups(alpha_star: &IntegerMatrix) -> Result<PvGroups, KTheoryError> {
    let (m, n) = (alpha_star.rows, alpha_star.cols);
    if m < n {
        return Err(KTheoryError::AlphaShape { rows: m, cols: n });
    }
    let map = IntegerMatrix::inclusion(m, n).sub(alpha_star)?;
    Ok(PvGroups {
        k0: cokernel(&map),
        k1_rank: kernel_rank(&map),
    })
}

/// The unilateral shift `e_j ↦ e_{j+1}` from `Z^n` to `Z^{n+1}`.
pub fn shift_matrix(n: usize) -> IntegerMatrix {
    let mut m = IntegerMatrix::zeros(n + 1, n);
    for j in 0..n {
        m[(j + 1, j)] = BigInt::one();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn check_snf(m: &IntegerMatrix) -> SmithForm {
        let snf = smith_normal_form(m);
        assert_eq!(snf.u.mul(m).unwrap().mul(&snf.v).unwrap(), snf.d);
        assert!(snf.d.is_diagonal());
        assert!(snf.u.determinant().unwrap().abs().is_one());
        assert!(snf.v.determinant().unwrap().abs().is_one());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        snf
    }

    #[test]
    fn snf_examples() {
        assert_eq!(
            check_snf(&IntegerMatrix::identity(2)).d,
            IntegerMatrix::identity(2)
        );
        assert_eq!(
            check_snf(&mat(&[&[2, 0], &[0, 3]])).d,
            mat(&[&[1, 0], &[0, 6]])
        );
        assert_eq!(check_snf(&mat(&[&[0]])).d, mat(&[&[0]]));
        check_snf(&mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        check_snf(&mat(&[&[0, 0, 3], &[0, 5, 0]]));
        check_snf(&IntegerMatrix::zeros(0, 3));
    }

    #[test]
    fn determinants() {
        assert_eq!(
            mat(&[&[1, 2], &[3, 4]]).determinant(),
            Some(BigInt::from(-2))
        );
        assert_eq!(
            mat(&[&[0, 1], &[1, 0]]).determinant(),
            Some(BigInt::from(-1))
        );
        assert_eq!(mat(&[&[2, 4], &[1, 2]]).determinant(), Some(BigInt::zero()));
        assert_eq!(
            IntegerMatrix::identity(0).determinant(),
            Some(BigInt::one())
        );
        assert_eq!(mat(&[&[1, 2]]).determinant(), None);
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(
            cokernel(&IntegerMatrix::zeros(2, 2)),
            AbelianGroupPresentation::free(2)
        );
        assert_eq!(kernel_rank(&IntegerMatrix::zeros(2, 2)), 2);
        let two = cokernel(&mat(&[&[2]]));
        assert_eq!(two.free_rank, 0);
        assert_eq!(two.invariant_factors, vec![BigInt::from(2)]);
        assert_eq!(two.to_string(), "Z/2");
        assert_eq!(kernel_rank(&mat(&[&[2]])), 0);
    }

    #[test]
    fn square_id_minus_shift_is_unitriangular() {
        // 1 on the diagonal, −1 below it: determinant 1, so the cokernel is 0.
        let n = 5;
        let mut m = IntegerMatrix::identity(n);
        for j in 0..n - 1 {
            m[(j + 1, j)] = BigInt::from(-1);
        }
        assert!(cokernel(&m).is_trivial());
        assert_eq!(kernel_rank(&m), 0);
    }

    #[test]
    fn pv_examples() {
        for n in 3..=10 {
            let g = pv_k_groups(&shift_matrix(n)).unwrap();
            assert_eq!(g.k0, AbelianGroupPresentation::free(1), "n={n}");
            assert_eq!(g.k1_rank, 0);
        }
        let id = pv_k_groups(&IntegerMatrix::identity(3)).unwrap();
        assert_eq!((id.k0, id.k1_rank), (AbelianGroupPresentation::free(3), 3));
        let zero = pv_k_groups(&IntegerMatrix::zeros(2, 2)).unwrap();
        assert!(zero.k0.is_trivial());
        assert_eq!(zero.k1_rank, 0);
        assert!(pv_k_groups(&IntegerMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn limit_examples() {
        let one = || mat(&[&[1]]);
        let d = BratteliDiagram::new(vec![vec![1]; 4], vec![one(), one(), one()]).unwrap();
        let r = truncated_limit(&d, 3).unwrap();
        assert!(r.stabilized);
        assert!(r
            .stages
            .iter()
            .all(|s| s.rank == 1 && s.injective && s.cokernel.is_trivial()));

        let d = BratteliDiagram::new(vec![vec![1]; 4], vec![mat(&[&[2]]); 3]).unwrap();
        let r = truncated_limit(&d, 3).unwrap();
        assert_eq!(r.last().composed, mat(&[&[8]]));
        assert_eq!(r.last().cokernel.invariant_factors, vec![BigInt::from(8)]);
        assert!(!r.stabilized);
        assert!(truncated_limit(&d, 4).is_err());
    }

    #[test]
    fn identity_level_insertion() {
        let d = BratteliDiagram::new(
            vec![vec![1], vec![1, 1], vec![2, 1]],
            vec![mat(&[&[1], &[1]]), mat(&[&[1, 1], &[0, 1]])],
        )
        .unwrap();
        let base = truncated_limit(&d, 2).unwrap();
        let padded = truncated_limit(&d.with_identity_level(0), 3).unwrap();
        assert_eq!(base.last().composed, padded.last().composed);
        assert_eq!(base.last().cokernel, padded.last().cokernel);
        assert_eq!(base.stabilized, padded.stabilized);
    }

    #[test]
    fn diagram_validation() {
        assert!(matches!(
            BratteliDiagram::new(vec![vec![1], vec![1]], vec![]),
            Err(KTheoryError::MapCount { .. })
        ));
        assert!(matches!(
            BratteliDiagram::new(vec![vec![1], vec![1]], vec![mat(&[&[1, 1]])]),
            Err(KTheoryError::MapShape { .. })
        ));
        assert!(matches!(
            BratteliDiagram::new(vec![vec![1], vec![1]], vec![mat(&[&[-1]])]),
            Err(KTheoryError::NegativeEntry { index: 0 })
        ));
        assert!(matches!(
            BratteliDiagram::new(vec![vec![], vec![1]], vec![IntegerMatrix::zeros(1, 0)]),
            Err(KTheoryError::BadLevel { index: 0 })
        ));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"levels": [[1], [1, 1]], "maps": [[[1], [1]]], "alpha": [[0], [1]]}"#;
        let d = BratteliDiagram::from_json(text).unwrap();
        assert_eq!(d.maps()[0], mat(&[&[1], &[1]]));
        assert_eq!(d.alpha(), Some(&mat(&[&[0], &[1]])));
        assert_eq!(BratteliDiagram::from_json(&d.to_json()).unwrap(), d);
        assert!(BratteliDiagram::from_json("{\"levels\": [[1]]}").is_err());
        assert!(BratteliDiagram::from_json("{\"levels\": [[1]], \"maps\": [], \"x\": 1}").is_err());
        assert!(
            BratteliDiagram::from_json(r#"{"levels": [[1],[1]], "maps": [[[1],[2,3]]]}"#).is_err()
        );
    }
}
