//! Exact Hecke algebras of groups acting on trees.
//!
//! Three families are implemented on top of the generic element type in
//! [`element`]: the spherical algebra of a vertex stabilizer
//! ([`spherical`]), the Iwahori-type algebra of an edge fixator
//! ([`iwahori`]) and the algebra of the stabilizer of an end
//! ([`affine`]). [`tree`] recomputes their structure constants by counting
//! in finite balls. [`sl2`] models the end-centralizer algebra of
//! `SL_2(Q_p)` inside the group algebra of the Prüfer group, and
//! [`ktheory`] holds the integer linear algebra for the K-theory of the
//! associated crossed products.
//!
//! ```
//! use hecketree::spherical::{multiply_closed, SphericalIndex, SphericalParams};
//!
//! let p = SphericalParams::homogeneous(2).unwrap();
//! let x = multiply_closed(SphericalIndex(1), SphericalIndex(1), &p);
//! assert_eq!(x.to_string(), "(3/1)#0 + (1/1)#2");
//! ```

pub mod affine;
pub mod coeff;
pub mod element;
pub mod iwahori;
pub mod ktheory;
pub mod labels;
pub mod sl2;
pub mod spherical;
pub mod tree;

pub use coeff::{format_coefficient, parse_coefficient, Coefficient};
pub use element::{BasisProvider, HeckeElement};
pub use labels::{Family, OutputRecord};
