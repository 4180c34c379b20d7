//! Exact arithmetic for symmetric powers of symmetric bilinear forms.
//!
//! Given a free module `V` of rank `d+1` with a symmetric bilinear form,
//! the degree-`k` monomials in a basis of `V` span `Sym^k V`, and the form
//! extends to `Sym^k V` by summing over pair partitions (a hafnian). This
//! crate computes that induced form exactly, together with:
//!
//! - the closed form for its Gram determinant, `det(G)^C(d+k, d+1) * theta(d, k)`,
//!   with the combinatorial factor kept in factored form (`theta`),
//! - a family of monic univariate orthogonal polynomials and the homogeneous
//!   multivariate orthogonal basis built from them (`orthopoly`, `homobasis`),
//! - integer lattice machinery: Smith normal form, discriminants, torsion of
//!   quotients, orthogonal complements and saturations (`linalg`, `lattices`),
//! - discriminant reports for the second-cohomology lattices of the known
//!   hyperkaehler deformation classes (`hyperkahler`).
//!
//! All arithmetic is exact: scalars are arbitrary-precision rationals and
//! large discriminants are carried as maps from primes to exponents.

pub mod combinat;
pub mod error;
pub mod exactnum;
pub mod homobasis;
pub mod hyperkahler;
pub mod lattices;
pub mod linalg;
pub mod orthopoly;
pub mod randmat;
pub mod symform;
pub mod theta;

pub use combinat::{MultiIndex, PairPartition};
pub use error::{Error, Result};
pub use exactnum::{FactoredInteger, Scalar};
pub use homobasis::MultiPoly;
pub use linalg::ExactMatrix;
pub use orthopoly::UniPoly;
pub use symform::GramMatrix;
