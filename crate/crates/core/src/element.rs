//! Finitely supported linear combinations of double cosets.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt::{self, Debug, Display};
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::coeff::{format_coefficient, Coefficient};

/// The multiplication data of one Hecke algebra on its canonical basis.
///
/// Implementors supply the structure constants of basis products, the
/// involution induced by inverting double cosets, and the number of
/// one-sided cosets in each double coset. Everything else in
/// [`HeckeElement`] is the bilinear (or linear) extension of these.
pub trait BasisProvider {
    type Index: Ord + Clone + Debug;

    /// Product of two basis elements. Coefficients are nonnegative integers.
    fn multiply_basis(&self, a: &Self::Index, b: &Self::Index) -> HeckeElement<Self::Index>;

    /// Index of the inverse double coset.
    fn involute_basis(&self, a: &Self::Index) -> Self::Index;

    /// Number of right cosets in the double coset; `1` on the unit.
    fn r_value(&self, a: &Self::Index) -> BigInt;

    fn unit(&self) -> Self::Index;

    fn one(&self) -> HeckeElement<Self::Index> {
        HeckeElement::basis(self.unit())
    }

    fn multiply(
        &self,
        x: &HeckeElement<Self::Index>,
        y: &HeckeElement<Self::Index>,
    ) -> HeckeElement<Self::Index> {
        x.multiply(y, self)
    }
}

/// A Hecke algebra element: basis index to nonzero rational coefficient.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HeckeElement<B: Ord> {
    terms: BTreeMap<B, Coefficient>,
}

impl<B: Ord> Default for HeckeElement<B> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<B: Ord + Clone> HeckeElement<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(index: B) -> Self {
        Self::term(index, Coefficient::from_integer(1.into()))
    }

    pub fn term(index: B, coeff: Coefficient) -> Self {
        let mut out = Self::zero();
        out.add_term(index, coeff);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (B, Coefficient)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (b, c) in terms {
            out.add_term(b, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `index`, zero when absent.
    pub fn coeff(&self, index: &B) -> Coefficient {
        self.terms
            .get(index)
            .cloned()
            .unwrap_or_else(Coefficient::zero)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, B, Coefficient> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, index: B, coeff: Coefficient) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, scale: &Coefficient) {
        if scale.is_zero() {
            return;
        }
        for (b, c) in &other.terms {
            self.add_term(b.clone(), c * scale);
        }
    }

    pub fn scale(&self, s: &Coefficient) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), c * s)).collect(),
        }
    }

    /// Applies `f` to every index, summing coefficients of colliding images.
    pub fn map_indices<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> C) -> HeckeElement<C> {
        HeckeElement::from_terms(self.terms.iter().map(|(b, c)| (f(b), c.clone())))
    }

    pub fn multiply<P>(&self, other: &Self, provider: &P) -> Self
    where
        P: BasisProvider<Index = B> + ?Sized,
    {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let prod = provider.multiply_basis(a, b);
                out.add_scaled(&prod, &(ca * cb));
            }
        }
        out
    }

    /// Involution. Scalars are rational, so conjugation is trivial.
    pub fn star<P>(&self, provider: &P) -> Self
    where
        P: BasisProvider<Index = B> + ?Sized,
    {
        self.map_indices(|b| provider.involute_basis(b))
    }

    /// The counting homomorphism `R` to the scalars.
    pub fn r_hom<P>(&self, provider: &P) -> Coefficient
    where
        P: BasisProvider<Index = B> + ?Sized,
    {
        self.terms
            .iter()
            .map(|(b, c)| c * Coefficient::from_integer(provider.r_value(b)))
            .fold(Coefficient::zero(), |acc, x| acc + x)
    }
}

impl<B: Ord + Clone> FromIterator<(B, Coefficient)> for HeckeElement<B> {
    fn from_iter<I: IntoIterator<Item = (B, Coefficient)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

impl<'a, B: Ord> IntoIterator for &'a HeckeElement<B> {
    type Item = (&'a B, &'a Coefficient);
    type IntoIter = btree_map::Iter<'a, B, Coefficient>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<B: Ord + Clone> AddAssign<&HeckeElement<B>> for HeckeElement<B> {
    fn add_assign(&mut self, rhs: &HeckeElement<B>) {
        for (b, c) in &rhs.terms {
            self.add_term(b.clone(), c.clone());
        }
    }
}

impl<B: Ord + Clone> Add for &HeckeElement<B> {
    type Output = HeckeElement<B>;

    fn add(self, rhs: Self) -> HeckeElement<B> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<B: Ord + Clone> Add for HeckeElement<B> {
    type Output = HeckeElement<B>;

    fn add(mut self, rhs: Self) -> HeckeElement<B> {
        self += &rhs;
        self
    }
}

impl<B: Ord + Clone> Neg for &HeckeElement<B> {
    type Output = HeckeElement<B>;

    fn neg(self) -> HeckeElement<B> {
        HeckeElement {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect(),
        }
    }
}

impl<B: Ord + Clone> Sub for &HeckeElement<B> {
    type Output = HeckeElement<B>;

    fn sub(self, rhs: Self) -> HeckeElement<B> {
        let mut out = self.clone();
        out += &(-rhs);
        out
    }
}

impl<B: Ord + Debug> Debug for HeckeElement<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(b, c)| (b, format_coefficient(c))))
            .finish()
    }
}

impl<B: Ord + Display> Display for HeckeElement<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}){}", format_coefficient(c), b)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::from_int;

    #[test]
    fn additive_identity_and_cancellation() {
        let g1 = HeckeElement::basis(1u32);
        assert_eq!(&g1 + &HeckeElement::zero(), g1);
        assert_eq!(&g1 + &g1, HeckeElement::term(1u32, from_int(2)));
        let cancel = &g1 + &g1.scale(&from_int(-1));
        assert!(cancel.is_zero());
        assert_eq!(cancel.len(), 0);
    }

    #[test]
    fn zero_terms_are_never_stored() {
        let mut x = HeckeElement::term(3u32, from_int(0));
        assert!(x.is_zero());
        x.add_term(2, from_int(5));
        x.add_term(2, from_int(-5));
        assert!(x.is_zero());
        assert_eq!(x.coeff(&2), from_int(0));
    }
}
