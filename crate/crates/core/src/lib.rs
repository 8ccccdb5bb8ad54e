//! Exact verification of the Dirac-geometric quasi-Poisson structure on the
//! multiplicative Grothendieck–Springer resolution `G×_B B` of `SL_n` / `GL_n`.
//!
//! All geometry is generic over a [`Scalar`] field backend. The exact backend
//! ([`Exact`], Gaussian rationals) decides every rank and equality; the
//! floating backend ([`Float`]) exists for eigenvector-based work such as
//! enumerating the fibers of `μ` over regular semisimple elements.

pub mod check;
pub mod diffcalc;
pub mod dirac;
pub mod error;
pub mod gaussian;
pub mod gspringer;
pub mod io;
pub mod linalg;
pub mod liegroup;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use linalg::{Mat, Subspace};
pub use liegroup::{Corruption, Family, GroupElement, LieGroup};
pub use scalar::Scalar;

/// Exact backend: rationals with a rational imaginary part.
pub type Exact = scalar::GaussianRational;
/// Floating backend: complex doubles.
pub type Float = scalar::Complex64;

/// The frozen conventions every check depends on. Reports carry a hash of
/// this text so results from different builds can be compared.
pub const CONVENTIONS: &str = "\
basis: t (H_i or E_ii), then E_ij i<j, then E_ij i>j
tangent: left trivialized x = g^-1 dg
covector: dual coordinates, pairing a.y + b.x
form: (x,y) = c tr(xy), c = 1
conj_field: xi - Ad_{g^-1} xi
sigma: 1/2 (xi + Ad_{g^-1} xi)
eta: (1/12)(x,[y,z])
cartan_3form: H = -6 eta = -1/2 (x,[y,z])
dorfman: ([X,Y], L_X b - i_Y da + H(X,Y,.))
double: (a,b) -> (aba^-1, b^-1); omega_(e,e) = (x2,y1) - (x1,y2)
compat: C = 1 - 1/4 rho rho^v dmu
";

pub type ExactMat = Mat<Exact>;
pub type FloatMat = Mat<Float>;
pub type ExactSubspace = Subspace<Exact>;
