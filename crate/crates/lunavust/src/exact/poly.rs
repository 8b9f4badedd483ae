use num::Signed;

use super::rat::Rat;
use super::vec::Vector;
use crate::{Error, Result};

/// Rational polyhedron in halfspace form: the set of `x` with
/// `normal . x >= rhs` for every row.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polyhedron {
    dim: usize,
    rows: Vec<(Vector, Rat)>,
}

impl Polyhedron {
    pub fn new(dim: usize) -> Self {
        Polyhedron {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn with_rows(dim: usize, rows: Vec<(Vector, Rat)>) -> Result<Self> {
        let mut p = Polyhedron::new(dim);
        for (normal, rhs) in rows {
            p.add_row(normal, rhs)?;
        }
        Ok(p)
    }

    /// Adds the constraint `normal . x >= rhs`.
    pub fn add_row(&mut self, normal: Vector, rhs: Rat) -> Result<()> {
        if normal.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: normal.dim(),
            });
        }
        self.rows.push((normal, rhs));
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[(Vector, Rat)] {
        &self.rows
    }

    pub fn contains(&self, x: &Vector) -> bool {
        x.dim() == self.dim && self.rows.iter().all(|(a, b)| &a.dot(x) >= b)
    }

    /// True iff `d` lies in the recession cone, i.e. `normal . d >= 0`
    /// for every row.
    pub fn admits_ray(&self, d: &Vector) -> bool {
        d.dim() == self.dim && self.rows.iter().all(|(a, _)| !a.dot(d).is_negative())
    }
}

/// Result of an exact linear program `max objective . x` over a
/// [`Polyhedron`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LpOutcome {
    /// The optimum is attained: `witness` is feasible and `objective .
    /// witness == value`.
    Optimal { value: Rat, witness: Vector },
    /// The objective is unbounded above: `base` is feasible, `ray` is a
    /// primitive recession direction with `objective . ray > 0`.
    Unbounded { ray: Vector, base: Vector },
    /// The polyhedron is empty.
    Infeasible,
}

impl LpOutcome {
    pub fn optimal_value(&self) -> Option<&Rat> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, LpOutcome::Unbounded { .. })
    }
}

/// Largest `t >= 0` with `base + t * dir` still inside `p`, or `None` if
/// the whole ray stays feasible. `base` must be feasible.
pub fn max_step(p: &Polyhedron, base: &Vector, dir: &Vector) -> Option<Rat> {
    debug_assert!(p.contains(base), "max_step from infeasible base");
    let mut best: Option<Rat> = None;
    for (normal, rhs) in p.rows() {
        let rate = normal.dot(dir);
        if rate.is_negative() {
            // constraint tightens at -rate per unit step
            let slack = normal.dot(base) - rhs;
            let bound = slack / -rate;
            best = Some(match best {
                Some(b) if b <= bound => b,
                _ => bound,
            });
        }
    }
    best
}
