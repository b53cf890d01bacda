//! Zeta functions of integral adjacency algebras of association schemes.
//!
//! Local zeta factors are exact rational functions in `u = p^{-s}`
//! ([`series`]); global zeta functions are assembled from Dedekind factors of
//! the Wedderburn components plus closed-form corrections at the finitely
//! many primes where the order is not maximal ([`catalog`]). Every expansion
//! can be checked against a brute-force census of ideals ([`oracle`]).

pub mod arith;
pub mod catalog;
pub mod cli;
pub mod fields;
pub mod local;
pub mod oracle;
pub mod orders;
pub mod schemes;
pub mod series;

pub use catalog::{CatalogEntry, GlobalZeta};
pub use fields::NumberField;
pub use local::{PadicRing, Valuation};
pub use orders::IntegralOrder;
pub use schemes::AssociationScheme;
pub use series::{DirichletCoefficients, LocalFactor, UPolynomial};
