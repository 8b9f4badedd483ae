//! Exact computation of the Luna-Vust combinatorial invariants of spherical
//! varieties and of the spectra of their Cox rings.
//!
//! The central object is the [`skel::SphericalSkeleton`]: a root system
//! together with the spherically closed spherical roots and the set of
//! `B`-invariant prime divisors, each carrying its valuation functional,
//! the simple roots moving it, and its anticanonical multiplicity. On top
//! of that the crate provides
//!
//! * the Cox transform ([`cox::cox_transform`]) producing the skeleton of
//!   the spectrum of the Cox ring, together with the divisor class group
//!   ([`cox::class_group`]) and the fixed-point test,
//! * the invariant iota in both its general and its affine-factorial
//!   formulation ([`iota::iota`], [`iota::iota_affine`]) and the conjecture
//!   checker ([`iota::check_conjecture`]),
//! * skeleton isomorphism ([`iso::are_isomorphic`]),
//! * the factorialization algorithm ([`fact::factorialize`]) that turns a
//!   complete skeleton into a factorial complete one without decreasing
//!   iota.
//!
//! All arithmetic is exact over the rationals; the linear-programming
//! kernel ([`exact`]) returns certificates for optimality and
//! unboundedness.

pub mod cox;
mod error;
pub mod exact;
pub mod fact;
pub mod file;
pub mod iota;
pub mod iso;
pub mod roots;
pub mod skel;

pub use error::{Error, Result};
