//! Hecke algebra of a vertex stabilizer in a group acting transitively on
//! the spheres around a vertex.
//!
//! The basis is `Γ_n`, the double coset of elements moving the base vertex
//! a distance `n`. When the group has two orbits on vertices only even
//! distances occur; those indices are stored as half-distances so both
//! modes are indexed by `0, 1, 2, …` and share the polynomial code. The
//! algebra is commutative and generated by `G = Γ_1` (homogeneous) or
//! `G = Γ_2` (two orbits).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{from_int, Coefficient};
use crate::element::{BasisProvider, HeckeElement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SphericalError {
    #[error("branching parameters must be at least 2 (got {0:?})")]
    BadParams(Vec<u64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SphericalParams {
    Homogeneous { q: u64 },
    TwoOrbit { q0: u64, q1: u64 },
}

impl SphericalParams {
    pub fn homogeneous(q: u64) -> Result<Self, SphericalError> {
        if q < 2 {
            return Err(SphericalError::BadParams(vec![q]));
        }
        Ok(Self::Homogeneous { q })
    }

    pub fn two_orbit(q0: u64, q1: u64) -> Result<Self, SphericalError> {
        if q0 < 2 || q1 < 2 {
            return Err(SphericalError::BadParams(vec![q0, q1]));
        }
        Ok(Self::TwoOrbit { q0, q1 })
    }

    /// Tree distance represented by one index step.
    pub fn step(&self) -> u32 {
        match self {
            Self::Homogeneous { .. } => 1,
            Self::TwoOrbit { .. } => 2,
        }
    }

    /// `(q0, q1)` of the underlying tree.
    pub fn branching(&self) -> (u64, u64) {
        match *self {
            Self::Homogeneous { q } => (q, q),
            Self::TwoOrbit { q0, q1 } => (q0, q1),
        }
    }
}

/// `Γ_n` in homogeneous mode, `Γ_{2n}` in two-orbit mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SphericalIndex(pub u32);

impl SphericalIndex {
    pub const UNIT: SphericalIndex = SphericalIndex(0);

    /// Distance from the base vertex.
    pub fn distance(self, p: &SphericalParams) -> u32 {
        self.0 * p.step()
    }
}

/// Prints the stored index; see [`crate::labels`] for distance labels.
impl fmt::Display for SphericalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

pub fn r_value(n: SphericalIndex, p: &SphericalParams) -> BigInt {
    if n.0 == 0 {
        return BigInt::one();
    }
    match *p {
        SphericalParams::Homogeneous { q } => big(q + 1) * big(q).pow(n.0 - 1),
        SphericalParams::TwoOrbit { q0, q1 } => {
            big(q0 + 1) * big(q1) * (big(q0) * big(q1)).pow(n.0 - 1)
        }
    }
}

fn basis(n: u32) -> HeckeElement<SphericalIndex> {
    HeckeElement::basis(SphericalIndex(n))
}

/// Coefficient `c_k` with `G·Γ_k = Γ_{k+1} + b·Γ_k + c_k·Γ_{k−1}` for `k ≥ 1`.
fn lower_coefficient(k: u32, p: &SphericalParams) -> u64 {
    let delta = u64::from(k == 1);
    match *p {
        SphericalParams::Homogeneous { q } => q + delta,
        SphericalParams::TwoOrbit { q0, q1 } => (q0 + delta) * q1,
    }
}

/// The diagonal coefficient `b` in the same rule.
fn diagonal_coefficient(p: &SphericalParams) -> u64 {
    match *p {
        SphericalParams::Homogeneous { .. } => 0,
        SphericalParams::TwoOrbit { q1, .. } => q1 - 1,
    }
}

/// `G·x` from the recursion for the generator.
pub fn generator_times(
    x: &HeckeElement<SphericalIndex>,
    p: &SphericalParams,
) -> HeckeElement<SphericalIndex> {
    let mut out = HeckeElement::zero();
    for (k, c) in x {
        let k = k.0;
        out.add_term(SphericalIndex(k + 1), c.clone());
        if k > 0 {
            out.add_term(SphericalIndex(k), c * from_int(diagonal_coefficient(p)));
            out.add_term(SphericalIndex(k - 1), c * from_int(lower_coefficient(k, p)));
        }
    }
    out
}

/// `Γ_n Γ_m` by running the monic recursion in the smaller index.
pub fn multiply_recursive(
    n: SphericalIndex,
    m: SphericalIndex,
    p: &SphericalParams,
) -> HeckeElement<SphericalIndex> {
    let (n, m) = (n.0.min(m.0), n.0.max(m.0));
    // prev = Γ_{j−1}Γ_m, cur = Γ_jΓ_m
    let mut prev = HeckeElement::zero();
    let mut cur = basis(m);
    let b = from_int(diagonal_coefficient(p));
    for j in 0..n {
        let mut next = generator_times(&cur, p);
        if j > 0 {
            next.add_scaled(&cur, &-b.clone());
            next.add_scaled(&prev, &-from_int(lower_coefficient(j, p)));
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `Γ_n Γ_m` from the complete multiplication table.
pub fn multiply_closed(
    n: SphericalIndex,
    m: SphericalIndex,
    p: &SphericalParams,
) -> HeckeElement<SphericalIndex> {
    let (n, m) = (n.0.min(m.0), n.0.max(m.0));
    if n == 0 {
        return basis(m);
    }
    let delta = u64::from(m == n);
    let mut out = basis(m + n);
    match *p {
        SphericalParams::Homogeneous { q } => {
            out.add_term(
                SphericalIndex(m - n),
                from_int(big(q).pow(n - 1) * big(q + delta)),
            );
            for l in 1..n {
                out.add_term(
                    SphericalIndex(m + n - 2 * l),
                    from_int(big(q - 1) * big(q).pow(l - 1)),
                );
            }
        }
        SphericalParams::TwoOrbit { q0, q1 } => {
            out.add_term(
                SphericalIndex(m - n),
                from_int(big(q1).pow(n) * big(q0).pow(n - 1) * big(q0 + delta)),
            );
            let ql = |l: u32| if l.is_multiple_of(2) { q0 } else { q1 };
            let mut prefix = BigInt::one();
            for l in 1..2 * n {
                out.add_term(
                    SphericalIndex(m + n - l),
                    from_int(big(ql(l) - 1) * &prefix),
                );
                prefix *= big(ql(l));
            }
        }
    }
    out
}

/// Basis provider; products use the closed form.
#[derive(Debug, Clone, Copy)]
pub struct Spherical {
    pub params: SphericalParams,
}

impl Spherical {
    pub fn new(params: SphericalParams) -> Self {
        Self { params }
    }
}

impl BasisProvider for Spherical {
    type Index = SphericalIndex;

    fn multiply_basis(
        &self,
        a: &SphericalIndex,
        b: &SphericalIndex,
    ) -> HeckeElement<SphericalIndex> {
        multiply_closed(*a, *b, &self.params)
    }

    /// Every `Γ_n` is self-adjoint.
    fn involute_basis(&self, a: &SphericalIndex) -> SphericalIndex {
        *a
    }

    fn r_value(&self, a: &SphericalIndex) -> BigInt {
        r_value(*a, &self.params)
    }

    fn unit(&self) -> SphericalIndex {
        SphericalIndex::UNIT
    }
}

/// Rewrites `Σ c_k Γ_k` in the normalized basis `Γ̃_k = R(Γ_k)^{-1} Γ_k`,
/// returning the coefficients on `Γ̃_k` (keyed by the same index).
pub fn normalize(
    x: &HeckeElement<SphericalIndex>,
    p: &SphericalParams,
) -> HeckeElement<SphericalIndex> {
    HeckeElement::from_terms(x.iter().map(|(k, c)| (*k, c * from_int(r_value(*k, p)))))
}

/// Inverse of [`normalize`].
pub fn denormalize(
    x: &HeckeElement<SphericalIndex>,
    p: &SphericalParams,
) -> HeckeElement<SphericalIndex> {
    HeckeElement::from_terms(x.iter().map(|(k, c)| (*k, c / from_int(r_value(*k, p)))))
}

/// `Γ̃_G Γ̃_n` in normalized coordinates, where `G` is the generator.
pub fn normalized_generator_product(
    n: SphericalIndex,
    p: &SphericalParams,
) -> HeckeElement<SphericalIndex> {
    let g = SphericalIndex(1);
    let scale = Coefficient::one() / from_int(r_value(g, p) * r_value(n, p));
    normalize(&multiply_closed(g, n, p), p).scale(&scale)
}

/// Coefficients `[a_0, a_1, …]` of the polynomial `f` with `x = f(G)`,
/// without trailing zeros.
pub fn to_polynomial(x: &HeckeElement<SphericalIndex>, p: &SphericalParams) -> Vec<Coefficient> {
    let top = x.support().map(|k| k.0).max();
    let Some(top) = top else {
        return Vec::new();
    };
    let b = from_int(diagonal_coefficient(p));
    let mut polys: Vec<Vec<Coefficient>> = vec![vec![from_int(1)]];
    for k in 0..top as usize {
        let cur = &polys[k];
        let mut next = vec![Coefficient::zero(); k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
            if k > 0 {
                next[i] -= c * &b;
            }
        }
        if k > 0 {
            let a = from_int(lower_coefficient(k as u32, p));
            for (i, c) in polys[k - 1].iter().enumerate() {
                next[i] -= c * &a;
            }
        }
        polys.push(next);
    }
    let mut out = vec![Coefficient::zero(); top as usize + 1];
    for (k, c) in x {
        for (i, pc) in polys[k.0 as usize].iter().enumerate() {
            out[i] += c * pc;
        }
    }
    trim(out)
}

fn trim(mut v: Vec<Coefficient>) -> Vec<Coefficient> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Evaluates `Σ a_i G^i` in the algebra.
pub fn from_polynomial(
    coeffs: &[Coefficient],
    p: &SphericalParams,
) -> HeckeElement<SphericalIndex> {
    let mut out = HeckeElement::zero();
    let mut power = basis(0);
    for (i, a) in coeffs.iter().enumerate() {
        if i > 0 {
            power = generator_times(&power, p);
        }
        out.add_scaled(&power, a);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ratio;

    fn h(q: u64) -> SphericalParams {
        SphericalParams::homogeneous(q).unwrap()
    }

    fn el(terms: &[(u32, i64)]) -> HeckeElement<SphericalIndex> {
        HeckeElement::from_terms(terms.iter().map(|&(k, c)| (SphericalIndex(k), from_int(c))))
    }

    fn g(n: u32) -> SphericalIndex {
        SphericalIndex(n)
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(SphericalParams::homogeneous(1).is_err());
        assert!(SphericalParams::two_orbit(2, 1).is_err());
    }

    #[test]
    fn r_values() {
        assert_eq!(r_value(g(0), &h(2)), BigInt::one());
        assert_eq!(r_value(g(3), &h(2)), big(12));
        let two = SphericalParams::two_orbit(2, 3).unwrap();
        assert_eq!(r_value(g(1), &two), big(9));
    }

    #[test]
    fn recursion_examples() {
        let p = h(2);
        assert_eq!(multiply_recursive(g(1), g(2), &p), el(&[(1, 2), (3, 1)]));
        assert_eq!(multiply_recursive(g(1), g(1), &p), el(&[(0, 3), (2, 1)]));
        assert_eq!(
            multiply_recursive(g(2), g(2), &p),
            el(&[(0, 6), (2, 1), (4, 1)])
        );
    }

    #[test]
    fn closed_form_examples() {
        let p = h(2);
        assert_eq!(
            multiply_closed(g(2), g(3), &p),
            el(&[(5, 1), (3, 1), (1, 4)])
        );
        assert_eq!(
            multiply_closed(g(3), g(3), &p),
            el(&[(6, 1), (4, 1), (2, 2), (0, 12)])
        );
        assert_eq!(multiply_closed(g(0), g(4), &p), el(&[(4, 1)]));
    }

    #[test]
    fn closed_equals_recursive() {
        let params = [
            h(2),
            h(3),
            SphericalParams::two_orbit(2, 3).unwrap(),
            SphericalParams::two_orbit(3, 2).unwrap(),
        ];
        for p in params {
            for n in 0..=6 {
                for m in 0..=6 {
                    assert_eq!(
                        multiply_closed(g(n), g(m), &p),
                        multiply_recursive(g(n), g(m), &p),
                        "{p:?} {n} {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn normalized_relations() {
        let p = h(2);
        let tilde = normalized_generator_product(g(1), &p);
        let expect = HeckeElement::from_terms([(g(0), ratio(1, 3)), (g(2), ratio(2, 3))]);
        assert_eq!(tilde, expect);
        for k in 0..=6 {
            let unit_mass = denormalize(&HeckeElement::basis(g(k)), &p);
            assert_eq!(unit_mass.r_hom(&Spherical::new(p)), from_int(1));
        }
        let (q0, q1) = (2, 3);
        let p = SphericalParams::two_orbit(q0, q1).unwrap();
        let s = ratio(1, (q0 + 1) * q1);
        let expect = HeckeElement::from_terms([
            (g(0), s.clone()),
            (g(1), s.clone() * from_int(q1 - 1)),
            (g(2), s * from_int(q0 * q1)),
        ]);
        assert_eq!(normalized_generator_product(g(1), &p), expect);
    }

    #[test]
    fn polynomial_examples() {
        let p = h(2);
        assert_eq!(
            to_polynomial(&basis(2), &p),
            vec![from_int(-3), from_int(0), from_int(1)]
        );
        assert_eq!(to_polynomial(&basis(0), &p), vec![from_int(1)]);
        assert_eq!(
            to_polynomial(&basis(3), &p),
            vec![from_int(0), from_int(-5), from_int(0), from_int(1)]
        );
        assert!(to_polynomial(&HeckeElement::zero(), &p).is_empty());
    }

    #[test]
    fn polynomial_round_trip() {
        for p in [h(3), SphericalParams::two_orbit(3, 2).unwrap()] {
            for n in 0..=6 {
                let poly = to_polynomial(&basis(n), &p);
                assert_eq!(poly.len(), n as usize + 1);
                assert_eq!(poly.last(), Some(&from_int(1)));
                assert_eq!(from_polynomial(&poly, &p), basis(n));
            }
        }
    }
}
