//! Hecke algebras of the stabilizer of an end in the full automorphism
//! group of a homogeneous tree.
//!
//! `M_n` is the double coset of elements of the horocyclic subgroup that
//! fix the vertex `n` steps toward the end but not the one `n − 1` steps
//! toward it. The full algebra is generated by `[s]`, the double coset of a
//! hyperbolic element translating one step away from the end, and its
//! adjoint `[s*]`, subject to `[s*][s] = q`. Every element then has a
//! unique normal form `Σ c_{a,b} [s]^a [s*]^b`, and `[s]^n [s*]^n` is
//! `M_0 + … + M_n`.
//!
//! Working with `[s]` instead of the isometry `q^{-1/2}[s]` keeps all
//! scalars rational.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::coeff::{format_coefficient, from_int, Coefficient};
use crate::element::{BasisProvider, HeckeElement};
use crate::ktheory::{shift_matrix, BratteliDiagram, IntegerMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AffineError {
    #[error("q must be at least 2 (got {0})")]
    BadQ(u64),
    #[error("normal forms over different q ({0} and {1})")]
    QMismatch(u64, u64),
}

fn check_q(q: u64) -> Result<(), AffineError> {
    if q < 2 {
        Err(AffineError::BadQ(q))
    } else {
        Ok(())
    }
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

fn pow(q: u64, n: u32) -> BigInt {
    big(q).pow(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MBasisIndex(pub u32);

impl fmt::Display for MBasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{}", self.0)
    }
}

/// The `M_n` multiplication table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineEnd {
    q: u64,
}

impl AffineEnd {
    pub fn new(q: u64) -> Result<Self, AffineError> {
        check_q(q)?;
        Ok(Self { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

pub fn m_multiply(m: MBasisIndex, n: MBasisIndex, q: u64) -> HeckeElement<MBasisIndex> {
    let (lo, hi) = (m.0.min(n.0), m.0.max(n.0));
    if lo == 0 {
        return HeckeElement::basis(MBasisIndex(hi));
    }
    if lo < hi {
        return HeckeElement::term(MBasisIndex(hi), from_int(big(q - 1) * pow(q, lo - 1)));
    }
    let mut out = HeckeElement::term(MBasisIndex(hi), from_int((big(q) - 2) * pow(q, hi - 1)));
    let lower = from_int(big(q - 1) * pow(q, hi - 1));
    for i in 0..hi {
        out.add_term(MBasisIndex(i), lower.clone());
    }
    out
}

impl BasisProvider for AffineEnd {
    type Index = MBasisIndex;

    fn multiply_basis(&self, a: &MBasisIndex, b: &MBasisIndex) -> HeckeElement<MBasisIndex> {
        m_multiply(*a, *b, self.q)
    }

    /// Each `M_n` is closed under inversion.
    fn involute_basis(&self, a: &MBasisIndex) -> MBasisIndex {
        *a
    }

    fn r_value(&self, a: &MBasisIndex) -> BigInt {
        match a.0 {
            0 => BigInt::one(),
            n => big(self.q - 1) * pow(self.q, n - 1),
        }
    }

    fn unit(&self) -> MBasisIndex {
        MBasisIndex(0)
    }
}

/// `[s]^a [s*]^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub a: u32,
    pub b: u32,
}

impl Monomial {
    pub const UNIT: Monomial = Monomial { a: 0, b: 0 };
    pub const S: Monomial = Monomial { a: 1, b: 0 };
    pub const S_STAR: Monomial = Monomial { a: 0, b: 1 };

    pub fn new(a: u32, b: u32) -> Self {
        Self { a, b }
    }

    pub fn diagonal(n: u32) -> Self {
        Self { a: n, b: n }
    }

    pub fn star(self) -> Self {
        Self {
            a: self.b,
            b: self.a,
        }
    }

    /// Product as `(q-exponent, monomial)`, using `[s*][s] = q`.
    pub fn multiply(self, other: Self) -> (u32, Self) {
        let k = self.b.min(other.a);
        (
            k,
            Self {
                a: self.a + other.a - k,
                b: self.b + other.b - k,
            },
        )
    }
}

/// Prints `[s]^a[s*]^b`, omitting zero powers; the unit prints as `1`.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 0 && self.b == 0 {
            return write!(f, "1");
        }
        if self.a > 0 {
            write!(f, "[s]^{}", self.a)?;
        }
        if self.b > 0 {
            write!(f, "[s*]^{}", self.b)?;
        }
        Ok(())
    }
}

/// Basis provider on normal-form monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Toeplitz {
    q: u64,
}

impl Toeplitz {
    pub fn new(q: u64) -> Result<Self, AffineError> {
        check_q(q)?;
        Ok(Self { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

impl BasisProvider for Toeplitz {
    type Index = Monomial;

    fn multiply_basis(&self, x: &Monomial, y: &Monomial) -> HeckeElement<Monomial> {
        let (k, m) = x.multiply(*y);
        HeckeElement::term(m, from_int(pow(self.q, k)))
    }

    fn involute_basis(&self, x: &Monomial) -> Monomial {
        x.star()
    }

    /// `R([s]) = q`, `R([s*]) = 1`.
    fn r_value(&self, x: &Monomial) -> BigInt {
        pow(self.q, x.a)
    }

    fn unit(&self) -> Monomial {
        Monomial::UNIT
    }
}

/// An element `Σ c_{a,b} [s]^a [s*]^b` together with its `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToeplitzNF {
    q: u64,
    terms: HeckeElement<Monomial>,
}

impl ToeplitzNF {
    pub fn new(q: u64, terms: HeckeElement<Monomial>) -> Result<Self, AffineError> {
        check_q(q)?;
        Ok(Self { q, terms })
    }

    fn raw(q: u64, terms: HeckeElement<Monomial>) -> Self {
        Self { q, terms }
    }

    pub fn monomial(q: u64, a: u32, b: u32) -> Result<Self, AffineError> {
        Self::new(q, HeckeElement::basis(Monomial::new(a, b)))
    }

    pub fn one(q: u64) -> Result<Self, AffineError> {
        Self::monomial(q, 0, 0)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn terms(&self) -> &HeckeElement<Monomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        Self::raw(self.q, self.terms.scale(c))
    }

    fn provider(&self) -> Toeplitz {
        Toeplitz { q: self.q }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AffineError> {
        self.same_q(other)?;
        Ok(Self::raw(self.q, &self.terms + &other.terms))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AffineError> {
        self.same_q(other)?;
        Ok(Self::raw(self.q, &self.terms - &other.terms))
    }

    fn same_q(&self, other: &Self) -> Result<(), AffineError> {
        if self.q != other.q {
            return Err(AffineError::QMismatch(self.q, other.q));
        }
        Ok(())
    }

    pub fn r_hom(&self) -> Coefficient {
        self.terms.r_hom(&self.provider())
    }
}

impl fmt::Display for ToeplitzNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.terms)
    }
}

pub fn nf_multiply(x: &ToeplitzNF, y: &ToeplitzNF) -> Result<ToeplitzNF, AffineError> {
    x.same_q(y)?;
    Ok(ToeplitzNF::raw(
        x.q,
        x.terms.multiply(&y.terms, &x.provider()),
    ))
}

pub fn nf_star(x: &ToeplitzNF) -> ToeplitzNF {
    ToeplitzNF::raw(x.q, x.terms.star(&x.provider()))
}

/// `M_0 = 1`, `M_n = [s]^n[s*]^n − [s]^{n−1}[s*]^{n−1}`.
pub fn m_to_nf(n: MBasisIndex, q: u64) -> ToeplitzNF {
    let mut t = HeckeElement::basis(Monomial::diagonal(n.0));
    if n.0 > 0 {
        t.add_term(Monomial::diagonal(n.0 - 1), -from_int(1));
    }
    ToeplitzNF::raw(q, t)
}

pub fn m_element_to_nf(x: &HeckeElement<MBasisIndex>, q: u64) -> ToeplitzNF {
    let mut t = HeckeElement::zero();
    for (n, c) in x {
        t.add_scaled(m_to_nf(*n, q).terms(), c);
    }
    ToeplitzNF::raw(q, t)
}

/// Inverse of [`m_element_to_nf`]; `None` when `x` has an off-diagonal
/// monomial and so lies outside the `M`-subalgebra.
pub fn nf_to_m(x: &ToeplitzNF) -> Option<HeckeElement<MBasisIndex>> {
    let mut out = HeckeElement::zero();
    for (m, c) in x.terms() {
        if m.a != m.b {
            return None;
        }
        for i in 0..=m.a {
            out.add_term(MBasisIndex(i), c.clone());
        }
    }
    Some(out)
}

/// `P_n = q^{-n} [s]^n [s*]^n`, the range projection of the `n`-th power of
/// the isometry.
pub fn p_projection(n: u32, q: u64) -> ToeplitzNF {
    let scale = Coefficient::one() / from_int(pow(q, n));
    ToeplitzNF::raw(q, HeckeElement::term(Monomial::diagonal(n), scale))
}

/// `Q_n = P_n − P_{n+1}`.
pub fn q_projection(n: u32, q: u64) -> ToeplitzNF {
    p_projection(n, q)
        .sub(&p_projection(n + 1, q))
        .expect("same q")
}

/// `[s]·x·[s*]`.
pub fn conjugate_by_s(x: &ToeplitzNF) -> ToeplitzNF {
    let s = ToeplitzNF::raw(x.q, HeckeElement::basis(Monomial::S));
    let s_star = nf_star(&s);
    let left = nf_multiply(&s, x).expect("same q");
    nf_multiply(&left, &s_star).expect("same q")
}

/// A sequence `x_0, x_1, …` that equals `tail` from some index on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventuallyConstantSeq {
    prefix: Vec<Coefficient>,
    tail: Coefficient,
}

/// Written as `{"prefix": ["a/b", …], "tail": "c/d"}`.
impl Serialize for EventuallyConstantSeq {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let prefix: Vec<String> = self.prefix.iter().map(format_coefficient).collect();
        let mut st = s.serialize_struct("EventuallyConstantSeq", 2)?;
        st.serialize_field("prefix", &prefix)?;
        st.serialize_field("tail", &format_coefficient(&self.tail))?;
        st.end()
    }
}

impl EventuallyConstantSeq {
    pub fn new(mut prefix: Vec<Coefficient>, tail: Coefficient) -> Self {
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        Self { prefix, tail }
    }

    pub fn constant(c: Coefficient) -> Self {
        Self::new(Vec::new(), c)
    }

    pub fn prefix(&self) -> &[Coefficient] {
        &self.prefix
    }

    pub fn tail(&self) -> &Coefficient {
        &self.tail
    }

    pub fn get(&self, j: usize) -> &Coefficient {
        self.prefix.get(j).unwrap_or(&self.tail)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&Coefficient, &Coefficient) -> Coefficient,
    ) -> Self {
        let len = self.prefix.len().max(other.prefix.len());
        let prefix = (0..len).map(|j| f(self.get(j), other.get(j))).collect();
        Self::new(prefix, f(&self.tail, &other.tail))
    }

    pub fn pointwise_mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }
}

impl fmt::Display for EventuallyConstantSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for c in &self.prefix {
            write!(f, "{c}, ")?;
        }
        write!(f, "{}, …)", self.tail)
    }
}

/// The sequence of `M_n` under the isomorphism sending `P_j` to the
/// indicator of `[j, ∞)`.
fn m_sequence(n: u32, q: u64) -> EventuallyConstantSeq {
    if n == 0 {
        return EventuallyConstantSeq::constant(from_int(1));
    }
    // M_n = q^n P_n − q^{n−1} P_{n−1}
    let mut prefix = vec![Coefficient::zero(); n as usize];
    prefix[n as usize - 1] = -from_int(pow(q, n - 1));
    EventuallyConstantSeq::new(prefix, from_int(pow(q, n) - pow(q, n - 1)))
}

pub fn to_sequence(x: &HeckeElement<MBasisIndex>, q: u64) -> EventuallyConstantSeq {
    let mut out = EventuallyConstantSeq::constant(Coefficient::zero());
    for (n, c) in x {
        let s = m_sequence(n.0, q);
        let scaled =
            EventuallyConstantSeq::new(s.prefix.iter().map(|v| v * c).collect(), &s.tail * c);
        out = out.add(&scaled);
    }
    out
}

/// `x_0 P_0 + Σ_j (x_j − x_{j−1}) P_j`, written in the `M` basis.
pub fn from_sequence(seq: &EventuallyConstantSeq, q: u64) -> HeckeElement<MBasisIndex> {
    let mut nf = HeckeElement::zero();
    let mut prev = Coefficient::zero();
    for j in 0..=seq.prefix.len() {
        let x = seq.get(j);
        let jump = x - &prev;
        nf.add_scaled(p_projection(j as u32, q).terms(), &jump);
        prev = x.clone();
    }
    nf_to_m(&ToeplitzNF::raw(q, nf)).expect("projections are diagonal")
}

/// Bratteli diagram of the eventually constant sequences: level `k` is
/// `C^{k+1}` (the first `k` coordinates and the tail) and the inclusion
/// duplicates the tail coordinate.
pub fn toeplitz_bratteli(levels: usize) -> BratteliDiagram {
    let levels = levels.max(1);
    let level_vec = |k: usize| vec![1u64; k + 1];
    let maps = (0..levels - 1)
        .map(|k| {
            let mut b = IntegerMatrix::inclusion(k + 2, k + 1);
            b[(k + 1, k)] = BigInt::one();
            b
        })
        .collect();
    BratteliDiagram::new((0..levels).map(level_vec).collect(), maps)
        .expect("diagram shapes are consistent")
}

/// Truncation of the map induced on K_0 by conjugation with the isometry:
/// the minimal projections `Q_0, …, Q_{n−1}` move to `Q_1, …, Q_n`.
pub fn toeplitz_alpha_star(n: usize) -> IntegerMatrix {
    shift_matrix(n)
}
