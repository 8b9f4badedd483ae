use num::Zero;

use super::poly::{LpOutcome, Polyhedron};
use super::rat::Rat;
use super::simplex::solve_lp;
use super::vec::{Matrix, Vector};
use crate::{Error, Result};

/// True iff the nonnegative hull of `generators` is all of the
/// `dim`-dimensional space.
///
/// Decided through the dual cone: `cone(G)` is full iff
/// `{y : g . y >= 0 for all g}` is `{0}`, iff `sup +-e_i . y` over that
/// cone is `0` (rather than unbounded) for every coordinate direction.
pub fn cone_is_full(generators: &[Vector], dim: usize) -> Result<bool> {
    for g in generators {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
    }
    let dual = Polyhedron::with_rows(
        dim,
        generators
            .iter()
            .map(|g| (g.clone(), Rat::zero()))
            .collect(),
    )?;
    for i in 0..dim {
        for sign in [1i64, -1] {
            let objective = Vector::unit(dim, i).scaled(&super::rat(sign));
            match solve_lp(&dual, &objective, None)? {
                LpOutcome::Optimal { value, .. } if value.is_zero() => {}
                LpOutcome::Unbounded { .. } => return Ok(false),
                other => unreachable!("dual cone LP over a cone returned {other:?}"),
            }
        }
    }
    Ok(true)
}

/// True iff the vectors are linearly independent, decided by exact
/// fraction-free elimination.
pub fn is_linearly_independent(vectors: &[Vector]) -> Result<bool> {
    let Some(first) = vectors.first() else {
        return Ok(true);
    };
    let dim = first.dim();
    for v in vectors {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
    }
    if vectors.len() > dim {
        return Ok(false);
    }
    let m = Matrix::from_rows(dim, vectors.to_vec());
    Ok(m.rank() == vectors.len())
}
