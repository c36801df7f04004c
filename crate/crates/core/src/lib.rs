//! Numerical machinery for positivity and Liouville properties of
//! quasilinear elliptic inequalities of the form
//! `-div(A(|grad u|) grad u) >= f(u)`.
//!
//! The crate provides:
//!
//! * a minimal expression language for user-supplied scalar functions
//!   ([`expr`]),
//! * scalar nonlinearities and diffusion coefficients with sampled
//!   hypothesis audits ([`func`]),
//! * convergence classification of Keller-Osserman type improper
//!   integrals ([`ko`]),
//! * the flux transform `G(t) = t^2 A(t) - int_0^t s A(s) ds` and its
//!   inverse `H` ([`gh`]),
//! * integration of the singular radial blow-up problem
//!   `(r^{D-1} Phi(phi'))' = r^{D-1} g(phi)` ([`radial`]),
//! * a discrete comparison-principle verifier and the monotone operator
//!   pairing it rests on ([`comparison`]),
//! * Heisenberg-group calculus and the radial p-sub-Laplacian identity
//!   ([`carnot`]),
//! * a verdict engine combining hypothesis checks and classifications
//!   into the strongest licensed conclusion ([`verdict`]).
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the
//! command line live in the companion `qei-cli` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod carnot;
pub mod comparison;
pub mod expr;
pub mod func;
pub mod gh;
pub mod ko;
pub mod quad;
pub mod radial;
pub mod rng;
pub mod verdict;

pub(crate) mod math;
