//! Exact rational arithmetic, dense linear algebra, polyhedra, and linear
//! programming. Everything here is deterministic: identical inputs produce
//! bit-identical outputs, so downstream iff-tests can rely on exact
//! comparisons.

mod cone;
mod poly;
mod rat;
mod simplex;
mod vec;

pub use cone::{cone_is_full, is_linearly_independent};
pub use poly::{max_step, LpOutcome, Polyhedron};
pub use rat::{format_rat, is_even_integer, is_integer, parse_rat, rat, ratio, Rat};
pub use simplex::{solve_lp, with_lp_trace, LpRecord};
pub use vec::{Matrix, Vector};
