//! The end-centralizer Hecke algebra of `SL_2(Q_p)` realized inside the
//! group algebra of the Prüfer group `Q_p/Z_p`.
//!
//! Double cosets are indexed by orbits of `Q_p/Z_p` under multiplication
//! by squares of units. The map `ν` sends a double coset to the sum of its
//! orbit in the group algebra; it is an injective `*`-homomorphism, so
//! products are computed by convolving `ν`-images and splitting the result
//! back into orbits.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::coeff::from_int;
use crate::element::{BasisProvider, HeckeElement};

/// Deepest denominator `p^n` handled by default.
pub const DEFAULT_MAX_DEPTH: u32 = 6;

/// Primes are accepted below this bound.
pub const PRIME_BOUND: u64 = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Sl2Error {
    #[error("{0} is not a prime below 65536")]
    NotPrime(u64),
    #[error("elements over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("depth {depth} exceeds the bound {max}")]
    TooDeep { depth: u32, max: u32 },
    #[error("{p}^{depth} does not fit in 64 bits")]
    Overflow { p: u64, depth: u32 },
    #[error("invalid Prüfer element `{0}`")]
    Parse(String),
    #[error("support of the product does not split into unit-square orbits at {0}")]
    NotOrbitSum(String),
}

/// Primality for `n` below [`PRIME_BOUND`]; larger `n` are rejected.
pub fn is_prime(n: u64) -> bool {
    if !(2..PRIME_BOUND).contains(&n) {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn modulus(p: u64, depth: u32) -> Result<u64, Sl2Error> {
    p.checked_pow(depth).ok_or(Sl2Error::Overflow { p, depth })
}

/// `num / p^depth mod Z_p`, with `num` a unit mod `p` unless the element
/// is zero, in which case `depth = num = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PruferElement {
    p: u64,
    depth: u32,
    num: u64,
}

impl PruferElement {
    pub fn zero(p: u64) -> Self {
        Self {
            p,
            depth: 0,
            num: 0,
        }
    }

    /// Reduces `num / p^depth` to canonical form.
    pub fn new(p: u64, num: u64, depth: u32) -> Result<Self, Sl2Error> {
        if !is_prime(p) {
            return Err(Sl2Error::NotPrime(p));
        }
        let modulus = modulus(p, depth)?;
        Ok(Self::reduce(p, num % modulus, depth))
    }

    fn reduce(p: u64, mut num: u64, mut depth: u32) -> Self {
        if num == 0 {
            return Self::zero(p);
        }
        while num.is_multiple_of(p) {
            num /= p;
            depth -= 1;
        }
        Self { p, depth, num }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.p.pow(self.depth)
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        Self {
            num: self.denominator() - self.num,
            ..*self
        }
    }

    /// All elements with denominator dividing `p^depth`, in index order.
    pub fn all_up_to(p: u64, depth: u32) -> Result<Vec<Self>, Sl2Error> {
        let m = modulus(p, depth)?;
        let mut out: Vec<Self> = (0..m).map(|a| Self::reduce(p, a, depth)).collect();
        out.sort();
        Ok(out)
    }

    /// Parses `0`, `a` or `a/d` with `d` a power of `p`.
    pub fn parse(s: &str, p: u64) -> Result<Self, Sl2Error> {
        let bad = || Sl2Error::Parse(s.to_string());
        let digits = |t: &str| -> Result<u64, Sl2Error> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (digits(a)?, digits(b)?),
            None => (digits(s)?, 1),
        };
        if den == 0 {
            return Err(bad());
        }
        if !is_prime(p) {
            return Err(Sl2Error::NotPrime(p));
        }
        let mut depth = 0;
        let mut rest = den;
        while rest % p == 0 {
            rest /= p;
            depth += 1;
        }
        if rest != 1 {
            return Err(bad());
        }
        Self::new(p, num, depth)
    }
}

impl fmt::Display for PruferElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.denominator())
        }
    }
}

/// The prime `p` with `d` a power of `p`, if there is one below the bound.
pub fn prime_base(d: u64) -> Option<u64> {
    let p = (2..PRIME_BOUND.min(d.saturating_add(1))).find(|k| d.is_multiple_of(*k))?;
    let mut rest = d;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    (rest == 1).then_some(p)
}

pub fn prufer_add(x: &PruferElement, y: &PruferElement) -> Result<PruferElement, Sl2Error> {
    if x.is_zero() && y.is_zero() {
        return Ok(PruferElement::zero(x.p));
    }
    if x.p != y.p && !x.is_zero() && !y.is_zero() {
        return Err(Sl2Error::PrimeMismatch(x.p, y.p));
    }
    if x.is_zero() {
        return Ok(*y);
    }
    if y.is_zero() {
        return Ok(*x);
    }
    let p = x.p;
    let depth = x.depth.max(y.depth);
    let m = modulus(p, depth)? as u128;
    let lift = |e: &PruferElement| e.num as u128 * p.pow(depth - e.depth) as u128;
    let sum = (lift(x) + lift(y)) % m;
    Ok(PruferElement::reduce(p, sum as u64, depth))
}

/// `{ v^2 mod p^n : v a unit }`.
pub fn unit_squares_mod(p: u64, n: u32) -> Result<BTreeSet<u64>, Sl2Error> {
    if !is_prime(p) {
        return Err(Sl2Error::NotPrime(p));
    }
    let m = modulus(p, n)?;
    Ok((1..m.max(2))
        .filter(|v| v % p != 0)
        .map(|v| ((v as u128 * v as u128) % m as u128) as u64)
        .collect())
}

/// Orbit of `u` under multiplication by unit squares, sorted.
pub fn orbit(u: &PruferElement) -> Vec<PruferElement> {
    if u.is_zero() {
        return vec![*u];
    }
    let m = u.denominator() as u128;
    let squares = unit_squares_mod(u.p, u.depth).expect("p is prime and p^depth fits");
    let set: BTreeSet<PruferElement> = squares
        .into_iter()
        .map(|w| PruferElement {
            num: ((w as u128 * u.num as u128) % m) as u64,
            ..*u
        })
        .collect();
    set.into_iter().collect()
}

/// A double coset, stored as its orbit with the least element as label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitCoset {
    representative: PruferElement,
    orbit: Vec<PruferElement>,
}

impl OrbitCoset {
    pub fn of(u: &PruferElement) -> Self {
        let orbit = orbit(u);
        Self {
            representative: orbit[0],
            orbit,
        }
    }

    pub fn representative(&self) -> &PruferElement {
        &self.representative
    }

    pub fn orbit(&self) -> &[PruferElement] {
        &self.orbit
    }

    pub fn size(&self) -> usize {
        self.orbit.len()
    }
}

impl fmt::Display for OrbitCoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative)
    }
}

/// `ν(u)`: the orbit sum in the group algebra of `Q_p/Z_p`.
pub fn nu(u: &PruferElement) -> HeckeElement<PruferElement> {
    HeckeElement::from_terms(orbit(u).into_iter().map(|v| (v, from_int(1))))
}

pub fn same_double_coset(u: &PruferElement, u2: &PruferElement) -> Result<bool, Sl2Error> {
    if u.p != u2.p && !(u.is_zero() && u2.is_zero()) {
        return Err(Sl2Error::PrimeMismatch(u.p, u2.p));
    }
    Ok(orbit(u).contains(u2))
}

/// All double cosets of depth at most `depth`, in label order.
pub fn double_cosets(p: u64, depth: u32) -> Result<Vec<OrbitCoset>, Sl2Error> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for u in PruferElement::all_up_to(p, depth)? {
        if seen.contains(&u) {
            continue;
        }
        let c = OrbitCoset::of(&u);
        seen.extend(c.orbit.iter().copied());
        out.push(c);
    }
    out.sort();
    Ok(out)
}

/// Group algebra of the Prüfer group over one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PruferGroupAlgebra {
    p: u64,
}

impl PruferGroupAlgebra {
    pub fn new(p: u64) -> Result<Self, Sl2Error> {
        if !is_prime(p) {
            return Err(Sl2Error::NotPrime(p));
        }
        Ok(Self { p })
    }
}

impl BasisProvider for PruferGroupAlgebra {
    type Index = PruferElement;

    /// # Panics
    ///
    /// If the two elements live over different primes.
    fn multiply_basis(&self, a: &PruferElement, b: &PruferElement) -> HeckeElement<PruferElement> {
        HeckeElement::basis(prufer_add(a, b).unwrap_or_else(|e| panic!("{e}")))
    }

    fn involute_basis(&self, a: &PruferElement) -> PruferElement {
        a.neg()
    }

    fn r_value(&self, _: &PruferElement) -> BigInt {
        BigInt::from(1)
    }

    fn unit(&self) -> PruferElement {
        PruferElement::zero(self.p)
    }
}

/// Splits a group-algebra element into orbit sums.
pub fn pull_back(x: &HeckeElement<PruferElement>) -> Result<HeckeElement<OrbitCoset>, Sl2Error> {
    let mut rest = x.clone();
    let mut out = HeckeElement::zero();
    while let Some((&u, c)) = rest.iter().next() {
        let c = c.clone();
        let coset = OrbitCoset::of(&u);
        for v in &coset.orbit {
            if rest.coeff(v) != c {
                return Err(Sl2Error::NotOrbitSum(v.to_string()));
            }
            rest.add_term(*v, -c.clone());
        }
        out.add_term(coset, c);
    }
    Ok(out)
}

/// The Hecke algebra on orbit cosets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sl2Hecke {
    p: u64,
    max_depth: u32,
}

impl Sl2Hecke {
    pub fn new(p: u64) -> Result<Self, Sl2Error> {
        Self::with_max_depth(p, DEFAULT_MAX_DEPTH)
    }

    pub fn with_max_depth(p: u64, max_depth: u32) -> Result<Self, Sl2Error> {
        if !is_prime(p) {
            return Err(Sl2Error::NotPrime(p));
        }
        modulus(p, max_depth)?;
        Ok(Self { p, max_depth })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    pub fn coset(&self, u: &PruferElement) -> Result<OrbitCoset, Sl2Error> {
        self.check(u)?;
        Ok(OrbitCoset::of(u))
    }

    fn check(&self, u: &PruferElement) -> Result<(), Sl2Error> {
        if u.p != self.p && !u.is_zero() {
            return Err(Sl2Error::PrimeMismatch(self.p, u.p));
        }
        if u.depth > self.max_depth {
            return Err(Sl2Error::TooDeep {
                depth: u.depth,
                max: self.max_depth,
            });
        }
        Ok(())
    }

    pub fn multiply(
        &self,
        u: &PruferElement,
        u2: &PruferElement,
    ) -> Result<HeckeElement<OrbitCoset>, Sl2Error> {
        self.check(u)?;
        self.check(u2)?;
        let group = PruferGroupAlgebra { p: self.p };
        let conv = nu(u).multiply(&nu(u2), &group);
        let depth = u.depth.max(u2.depth);
        assert!(
            conv.support().all(|v| v.depth <= depth),
            "convolution left depth {depth}"
        );
        pull_back(&conv)
    }
}

/// `ν^{-1}(ν(u)·ν(u2))`.
pub fn sl2_m_multiply(
    u: &PruferElement,
    u2: &PruferElement,
) -> Result<HeckeElement<OrbitCoset>, Sl2Error> {
    let p = if u.is_zero() { u2.p } else { u.p };
    Sl2Hecke::new(p)?.multiply(u, u2)
}

impl BasisProvider for Sl2Hecke {
    type Index = OrbitCoset;

    /// # Panics
    ///
    /// On cosets beyond the depth bound or over another prime.
    fn multiply_basis(&self, a: &OrbitCoset, b: &OrbitCoset) -> HeckeElement<OrbitCoset> {
        self.multiply(&a.representative, &b.representative)
            .unwrap_or_else(|e| panic!("{e}"))
    }

    fn involute_basis(&self, a: &OrbitCoset) -> OrbitCoset {
        OrbitCoset::of(&a.representative.neg())
    }

    fn r_value(&self, a: &OrbitCoset) -> BigInt {
        BigInt::from(a.size())
    }

    fn unit(&self) -> OrbitCoset {
        OrbitCoset::of(&PruferElement::zero(self.p))
    }
}

/// Euler's totient of `p^n`.
pub fn phi_prime_power(p: u64, n: u32) -> u64 {
    if n == 0 {
        1
    } else {
        (p - 1) * p.pow(n - 1)
    }
}
