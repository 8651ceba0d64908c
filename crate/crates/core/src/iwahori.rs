//! Hecke algebra of a strongly transitive tree group relative to an edge
//! fixator.
//!
//! The canonical basis is indexed by the infinite dihedral group `W`
//! generated by two involutions `s`, `t`. When the group also contains an
//! edge inversion `i`, the basis is indexed by `i^ε w` and the algebra is
//! the twisted tensor product of `Z/2` (acting by swapping `s` and `t`)
//! with the type-preserving algebra. Elements are stored with `i` on the
//! left.
//!
//! Products are computed from the generator rules of the Iwahori-type
//! presentation
//!
//! ```text
//! Δ_r Δ_w = q_r Δ_{rw} + (q_r − 1) Δ_w   if w begins with r
//! Δ_r Δ_w = Δ_{rw}                       otherwise
//! ```
//!
//! (and their mirror images), which are the source of truth. A closed-form
//! product is provided separately and cross-checked against them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{from_int, Coefficient};
use crate::element::{BasisProvider, HeckeElement};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IwahoriError {
    #[error("branching parameters must be at least 2 (got qs={qs}, qt={qt})")]
    BadParams { qs: u64, qt: u64 },
    #[error("the inversion Δ_i needs qs == qt (got qs={qs}, qt={qt})")]
    InversionNeedsHomogeneous { qs: u64, qt: u64 },
    #[error("word `{0}` is not an alternating word over {{s,t}}")]
    BadWord(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    S,
    T,
}

impl Letter {
    pub fn other(self) -> Letter {
        match self {
            Letter::S => Letter::T,
            Letter::T => Letter::S,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::S => 's',
            Letter::T => 't',
        }
    }
}

/// A reduced word in `D_∞`.
///
/// Reduced words are exactly the alternating ones, so a word is determined
/// by its first letter and its length. Ordered by length, then first letter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DihedralWord {
    len: u32,
    // Normalized to `S` for the empty word.
    first: Letter,
}

impl DihedralWord {
    pub const EMPTY: DihedralWord = DihedralWord {
        len: 0,
        first: Letter::S,
    };

    pub fn alternating(first: Letter, len: u32) -> Self {
        if len == 0 {
            Self::EMPTY
        } else {
            Self { len, first }
        }
    }

    pub fn letter_word(r: Letter) -> Self {
        Self::alternating(r, 1)
    }

    /// Builds a word from letters, rejecting non-alternating input.
    pub fn from_letters(letters: &[Letter]) -> Option<Self> {
        if letters.windows(2).any(|p| p[0] == p[1]) {
            return None;
        }
        Some(match letters.first() {
            None => Self::EMPTY,
            Some(&f) => Self::alternating(f, letters.len() as u32),
        })
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn first(&self) -> Option<Letter> {
        (self.len > 0).then_some(self.first)
    }

    pub fn last(&self) -> Option<Letter> {
        (self.len > 0).then(|| self.letter(self.len - 1))
    }

    /// Zero-based letter access.
    pub fn letter(&self, i: u32) -> Letter {
        assert!(
            i < self.len,
            "letter index {i} out of range for length {}",
            self.len
        );
        if i.is_multiple_of(2) {
            self.first
        } else {
            self.first.other()
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len).map(move |i| self.letter(i))
    }

    /// Group inverse: the reversed word.
    pub fn reverse(&self) -> Self {
        match self.last() {
            None => Self::EMPTY,
            Some(l) => Self::alternating(l, self.len),
        }
    }

    /// The automorphism of `W` exchanging `s` and `t`.
    pub fn bar(&self) -> Self {
        Self::alternating(self.first.other(), self.len)
    }

    /// Product in `D_∞`: concatenate, then cancel equal letters at the seam.
    pub fn concat(&self, other: &Self) -> Self {
        match (self.last(), other.first()) {
            (None, _) => *other,
            (_, None) => *self,
            (Some(a), Some(b)) if a != b => Self::alternating(self.first, self.len + other.len),
            _ => {
                let m = self.len.min(other.len);
                if self.len > m {
                    self.drop_last(m)
                } else {
                    other.drop_first(m)
                }
            }
        }
    }

    /// The word missing its last `i` letters.
    pub fn drop_last(&self, i: u32) -> Self {
        Self::alternating(self.first, self.len - i)
    }

    /// The word missing its first `i` letters.
    pub fn drop_first(&self, i: u32) -> Self {
        if i >= self.len {
            return Self::EMPTY;
        }
        Self::alternating(self.letter(i), self.len - i)
    }

    /// The last `i` letters.
    pub fn last_n(&self, i: u32) -> Self {
        self.drop_first(self.len - i)
    }

    /// All reduced words of length at most `max_len`, in basis order.
    pub fn all_up_to(max_len: u32) -> Vec<Self> {
        let mut out = vec![Self::EMPTY];
        for len in 1..=max_len {
            out.push(Self::alternating(Letter::S, len));
            out.push(Self::alternating(Letter::T, len));
        }
        out
    }
}

impl fmt::Display for DihedralWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for DihedralWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ_{self}")
    }
}

impl FromStr for DihedralWord {
    type Err = IwahoriError;

    /// `1` (or the empty string) is the identity; otherwise letters `s`/`t`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() || s == "1" {
            return Ok(Self::EMPTY);
        }
        let letters: Option<Vec<Letter>> = s
            .chars()
            .map(|c| match c {
                's' => Some(Letter::S),
                't' => Some(Letter::T),
                _ => None,
            })
            .collect();
        letters
            .and_then(|l| Self::from_letters(&l))
            .ok_or_else(|| IwahoriError::BadWord(s.to_string()))
    }
}

/// Basis index `Δ_{i^ε w}` of the extended algebra.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExtendedIndex {
    pub iflag: bool,
    pub word: DihedralWord,
}

impl ExtendedIndex {
    pub const UNIT: ExtendedIndex = ExtendedIndex {
        iflag: false,
        word: DihedralWord::EMPTY,
    };
    pub const INVERSION: ExtendedIndex = ExtendedIndex {
        iflag: true,
        word: DihedralWord::EMPTY,
    };

    pub fn plain(word: DihedralWord) -> Self {
        Self { iflag: false, word }
    }

    pub fn inverted(word: DihedralWord) -> Self {
        Self { iflag: true, word }
    }

    pub fn generator(r: Letter) -> Self {
        Self::plain(DihedralWord::letter_word(r))
    }

    /// Inverse in the extended Weyl group; `(iw)^{-1} = w^{-1} i = i·bar(w^{-1})`.
    pub fn inverse(&self) -> Self {
        let rev = self.word.reverse();
        Self {
            iflag: self.iflag,
            word: if self.iflag { rev.bar() } else { rev },
        }
    }

    /// Every index with word length at most `max_len`; inverted ones only
    /// when `extended` is set.
    pub fn all_up_to(max_len: u32, extended: bool) -> Vec<Self> {
        let words = DihedralWord::all_up_to(max_len);
        let mut out: Vec<Self> = words.iter().copied().map(Self::plain).collect();
        if extended {
            out.extend(words.into_iter().map(Self::inverted));
        }
        out
    }
}

impl fmt::Display for ExtendedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.iflag, self.word.is_empty()) {
            (true, true) => write!(f, "i"),
            (true, false) => write!(f, "i{}", self.word),
            (false, _) => write!(f, "{}", self.word),
        }
    }
}

impl FromStr for ExtendedIndex {
    type Err = IwahoriError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.strip_prefix('i') {
            Some("") => Ok(Self::INVERSION),
            Some(rest) if rest != "1" => Ok(Self::inverted(rest.parse()?)),
            Some(_) => Err(IwahoriError::BadWord(s.to_string())),
            None => Ok(Self::plain(s.parse()?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IwahoriParams {
    pub qs: u64,
    pub qt: u64,
}

impl IwahoriParams {
    pub fn new(qs: u64, qt: u64) -> Result<Self, IwahoriError> {
        if qs < 2 || qt < 2 {
            return Err(IwahoriError::BadParams { qs, qt });
        }
        Ok(Self { qs, qt })
    }

    pub fn q(&self, r: Letter) -> u64 {
        match r {
            Letter::S => self.qs,
            Letter::T => self.qt,
        }
    }

    /// `q_w`, the product of `q` over the letters of `w`.
    pub fn q_word(&self, w: &DihedralWord) -> BigInt {
        w.letters().map(|l| BigInt::from(self.q(l))).product()
    }

    pub fn admits_inversion(&self) -> bool {
        self.qs == self.qt
    }
}

pub fn word_concat(w: &DihedralWord, w2: &DihedralWord) -> DihedralWord {
    w.concat(w2)
}

pub fn bar(w: &DihedralWord) -> DihedralWord {
    w.bar()
}

pub fn r_value(idx: &ExtendedIndex, p: &IwahoriParams) -> BigInt {
    p.q_word(&idx.word)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Applies the generator rule for `Δ_r` on one side of `x`, termwise.
pub fn multiply_by_generator(
    r: Letter,
    x: &HeckeElement<ExtendedIndex>,
    side: Side,
    p: &IwahoriParams,
) -> HeckeElement<ExtendedIndex> {
    let mut out = HeckeElement::zero();
    for (idx, c) in x {
        let (letter, word) = match (side, idx.iflag) {
            // Δ_r Δ_i = Δ_i Δ_{bar r}
            (Side::Left, true) => (r.other(), idx.word),
            _ => (r, idx.word),
        };
        for (w, k) in generator_rule(letter, &word, side, p) {
            out.add_term(
                ExtendedIndex {
                    iflag: idx.iflag,
                    word: w,
                },
                c * from_int(k),
            );
        }
    }
    out
}

fn generator_rule(
    r: Letter,
    w: &DihedralWord,
    side: Side,
    p: &IwahoriParams,
) -> Vec<(DihedralWord, u64)> {
    let gen = DihedralWord::letter_word(r);
    let (touches, product) = match side {
        Side::Left => (w.first() == Some(r), gen.concat(w)),
        Side::Right => (w.last() == Some(r), w.concat(&gen)),
    };
    if touches {
        let q = p.q(r);
        vec![(product, q), (*w, q - 1)]
    } else {
        vec![(product, 1)]
    }
}

/// Type-preserving product `Δ_w Δ_{w2}` from iterated left generator rules.
pub fn multiply_words(
    w: &DihedralWord,
    w2: &DihedralWord,
    p: &IwahoriParams,
) -> HeckeElement<ExtendedIndex> {
    let mut acc = HeckeElement::basis(ExtendedIndex::plain(*w2));
    let letters: Vec<Letter> = w.letters().collect();
    for &l in letters.iter().rev() {
        acc = multiply_by_generator(l, &acc, Side::Left, p);
    }
    acc
}

/// Same product, built by peeling letters of `w2` on the right.
pub fn multiply_words_right(
    w: &DihedralWord,
    w2: &DihedralWord,
    p: &IwahoriParams,
) -> HeckeElement<ExtendedIndex> {
    let mut acc = HeckeElement::basis(ExtendedIndex::plain(*w));
    for l in w2.letters() {
        acc = multiply_by_generator(l, &acc, Side::Right, p);
    }
    acc
}

fn set_iflag(x: HeckeElement<ExtendedIndex>) -> HeckeElement<ExtendedIndex> {
    x.map_indices(|idx| ExtendedIndex {
        iflag: !idx.iflag,
        word: idx.word,
    })
}

/// Reduces an extended product to a type-preserving one using
/// `Δ_{iw}Δ_{w'} = Δ_i(Δ_wΔ_{w'})`, `Δ_wΔ_{iw'} = Δ_i(Δ_{bar w}Δ_{w'})`
/// and `Δ_{iw}Δ_{iw'} = Δ_{bar w}Δ_{w'}`.
fn reduce_inversions(
    a: &ExtendedIndex,
    b: &ExtendedIndex,
    p: &IwahoriParams,
    words: impl Fn(&DihedralWord, &DihedralWord) -> HeckeElement<ExtendedIndex>,
) -> Result<HeckeElement<ExtendedIndex>, IwahoriError> {
    if (a.iflag || b.iflag) && !p.admits_inversion() {
        return Err(IwahoriError::InversionNeedsHomogeneous { qs: p.qs, qt: p.qt });
    }
    Ok(match (a.iflag, b.iflag) {
        (false, false) => words(&a.word, &b.word),
        (true, false) => set_iflag(words(&a.word, &b.word)),
        (false, true) => set_iflag(words(&a.word.bar(), &b.word)),
        (true, true) => words(&a.word.bar(), &b.word),
    })
}

pub fn multiply(
    a: &ExtendedIndex,
    b: &ExtendedIndex,
    p: &IwahoriParams,
) -> Result<HeckeElement<ExtendedIndex>, IwahoriError> {
    reduce_inversions(a, b, p, |w, w2| multiply_words(w, w2, p))
}

/// Closed-form product of type-preserving basis elements.
///
/// With `r` the last letter of `w`, `u` the other letter, `m` the shorter
/// length and `q_i` equal to `q_r` for even `i` and `q_u` for odd `i`:
///
/// ```text
/// Δ_w Δ_{w'} = q_{w_(m)} Δ_{w_[m] ·[m]w'} + Σ_{i<m} q_{w_(i)} (q_i − 1) Δ_{w_[i] ·[i+1]w'}
/// ```
///
/// when the last letter of `w` equals the first of `w'`, and `Δ_{ww'}`
/// otherwise. Here `w_(i)` is the last `i` letters of `w`, `w_[i]` is `w`
/// without them, and `[i]w'` is `w'` without its first `i` letters.
pub fn multiply_closed(
    w: &DihedralWord,
    w2: &DihedralWord,
    p: &IwahoriParams,
) -> HeckeElement<ExtendedIndex> {
    let r = match (w.last(), w2.first()) {
        (Some(a), Some(b)) if a == b => a,
        _ => return HeckeElement::basis(ExtendedIndex::plain(w.concat(w2))),
    };
    let m = w.len().min(w2.len());
    let mut out = HeckeElement::zero();
    let lead = w.drop_last(m).concat(&w2.drop_first(m));
    out.add_term(
        ExtendedIndex::plain(lead),
        Coefficient::from_integer(p.q_word(&w.last_n(m))),
    );
    for i in 0..m {
        let qi = if i % 2 == 0 { p.q(r) } else { p.q(r.other()) };
        let coeff = p.q_word(&w.last_n(i)) * BigInt::from(qi - 1);
        let head = w.drop_last(i);
        let tail = w2.drop_first(i + 1);
        // The seam letters differ, so this concatenation never cancels.
        debug_assert_ne!(head.last(), tail.first());
        out.add_term(
            ExtendedIndex::plain(head.concat(&tail)),
            Coefficient::from_integer(coeff),
        );
    }
    out
}

pub fn multiply_closed_extended(
    a: &ExtendedIndex,
    b: &ExtendedIndex,
    p: &IwahoriParams,
) -> Result<HeckeElement<ExtendedIndex>, IwahoriError> {
    reduce_inversions(a, b, p, |w, w2| multiply_closed(w, w2, p))
}

/// Basis provider for the (possibly extended) Iwahori-type algebra.
#[derive(Debug, Clone, Copy)]
pub struct Iwahori {
    pub params: IwahoriParams,
}

impl Iwahori {
    pub fn new(params: IwahoriParams) -> Self {
        Self { params }
    }
}

impl BasisProvider for Iwahori {
    type Index = ExtendedIndex;

    /// # Panics
    ///
    /// On inverted indices when `qs != qt`; use [`multiply`] to get an error
    /// instead.
    fn multiply_basis(&self, a: &ExtendedIndex, b: &ExtendedIndex) -> HeckeElement<ExtendedIndex> {
        multiply(a, b, &self.params).unwrap_or_else(|e| panic!("{e}"))
    }

    fn involute_basis(&self, a: &ExtendedIndex) -> ExtendedIndex {
        a.inverse()
    }

    fn r_value(&self, a: &ExtendedIndex) -> BigInt {
        r_value(a, &self.params)
    }

    fn unit(&self) -> ExtendedIndex {
        ExtendedIndex::UNIT
    }
}
