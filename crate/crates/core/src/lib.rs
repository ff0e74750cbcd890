//! Exact and numerical toolkit for finite Weil representations attached to
//! even lattices, vector-valued Siegel Eisenstein and Poincare series of
//! genus one and two, Hecke operators on vector-valued modular forms, and
//! the local factors of the genus-two standard-zeta functional equation.
//!
//! The algebraic layer (`cyclotomic`, `fqm`, `weil`, `cosets`) is exact:
//! every Weil matrix entry is an element of a cyclotomic field with
//! arbitrary-precision rational coefficients, so identities between
//! representation matrices are checked by literal equality.  The analytic
//! layer (`series`, `hecke`, `funceq`) evaluates truncated coset sums and
//! quadratures in `f64`, embedding the exact algebraic data once per coset
//! representative.

pub mod cyclotomic;
pub mod intmat;
pub mod fqm;
pub mod weil;
pub mod cosets;
pub mod special;
pub mod qexp;
pub mod series;
pub mod hecke;
pub mod funceq;
pub mod io;
pub mod harness;

pub use cyclotomic::CycloNum;
